"""Simplicial complexes, oriented chains and the boundary operator.

Simplices are plain tuples of strictly increasing vertex ids.  The global
vertex order orients every simplex; a reversed orientation is expressed as a
coefficient of -1 in a :class:`Chain`, never as a permuted tuple.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence

from .linalg import RationalMatrix, as_rational

Simplex = tuple[int, ...]


class ComplexError(ValueError):
    """Structural problem with a complex or with data referring to one."""


class ParseError(ComplexError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotOrientableError(ComplexError):
    pass


def make_simplex(vertices: Iterable[int]) -> Simplex:
    """Sort vertex ids into a simplex; repeated ids are an error."""
    verts = tuple(sorted(int(v) for v in vertices))
    if len(set(verts)) != len(verts):
        raise ComplexError(f"repeated vertex in simplex {list(vertices)}")
    if not verts:
        raise ComplexError("empty simplex")
    return verts


def facets(s: Simplex) -> list[tuple[int, Simplex]]:
    """``(sign, face)`` pairs of the boundary: face i carries sign (-1)^i."""
    return [((-1) ** i, s[:i] + s[i + 1:]) for i in range(len(s))]


@dataclass(frozen=True)
class Chain:
    """A rational combination of oriented p-simplices."""

    dim: int
    coefficients: Mapping[Simplex, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for s, c in self.coefficients.items():
            s = tuple(s)
            if len(s) != self.dim + 1:
                raise ComplexError(f"simplex {s} does not have dimension {self.dim}")
            c = as_rational(c)
            if c:
                cleaned[s] = c
        object.__setattr__(self, "coefficients", dict(sorted(cleaned.items())))

    @classmethod
    def simplex(cls, s: Sequence[int], coefficient=1) -> "Chain":
        s = make_simplex(s)
        return cls(len(s) - 1, {s: coefficient})

    @classmethod
    def zero(cls, dim: int) -> "Chain":
        return cls(dim, {})

    @classmethod
    def from_vector(cls, K: "SimplicialComplex", dim: int, vector: Sequence[object]) -> "Chain":
        simplices = K.simplices(dim)
        if len(vector) != len(simplices):
            raise ComplexError(f"vector length {len(vector)} != {len(simplices)} simplices of dim {dim}")
        return cls(dim, {s: c for s, c in zip(simplices, vector)})

    def to_vector(self, K: "SimplicialComplex") -> list[Fraction]:
        index = K.index(self.dim)
        out = [Fraction(0)] * len(index)
        for s, c in self.coefficients.items():
            try:
                out[index[s]] = c
            except KeyError:
                raise ComplexError(f"simplex {s} is not in the complex") from None
        return out

    def is_zero(self) -> bool:
        return not self.coefficients

    def __getitem__(self, s: Simplex) -> Fraction:
        return self.coefficients.get(tuple(s), Fraction(0))

    def __iter__(self):
        return iter(self.coefficients.items())

    def __len__(self) -> int:
        return len(self.coefficients)

    def _combine(self, other: "Chain", sign: int) -> "Chain":
        if not isinstance(other, Chain):
            return NotImplemented
        if other.dim != self.dim:
            raise ComplexError(f"cannot add chains of dimension {self.dim} and {other.dim}")
        out = dict(self.coefficients)
        for s, c in other.coefficients.items():
            out[s] = out.get(s, 0) + sign * c
        return Chain(self.dim, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return Chain(self.dim, {s: -c for s, c in self.coefficients.items()})

    def __mul__(self, scalar):
        scalar = as_rational(scalar)
        return Chain(self.dim, {s: scalar * c for s, c in self.coefficients.items()})

    __rmul__ = __mul__


def boundary(c: Chain, K: Optional["SimplicialComplex"] = None) -> Chain:
    """Alternating-face boundary; the boundary of a 0-chain is the empty (-1)-chain.

    If ``K`` is given every simplex of ``c`` must belong to it.
    """
    if K is not None:
        K.check_chain(c)
    if c.dim <= 0:
        return Chain(-1, {})
    out: dict[Simplex, Fraction] = {}
    for s, coeff in c.coefficients.items():
        for sign, face in facets(s):
            out[face] = out.get(face, 0) + sign * coeff
    return Chain(c.dim - 1, out)


class SimplicialComplex:
    """A finite face-closed simplicial complex on vertices ``0..vertex_count-1``.

    Built from a list of simplices (usually the maximal ones); all faces are
    added.  Instances are immutable and hash by identity, which lets per-complex
    results be memoised.
    """

    def __init__(self, vertex_count: int, simplices: Iterable[Iterable[int]], name: Optional[str] = None):
        if vertex_count < 1:
            raise ComplexError("a complex needs at least one vertex")
        self.vertex_count = vertex_count
        self.name = name
        generators = set()
        for raw in simplices:
            s = make_simplex(raw)
            for v in s:
                if not 0 <= v < vertex_count:
                    raise ComplexError(f"vertex id {v} out of range 0..{vertex_count - 1}")
            generators.add(s)
        generators.update((v,) for v in range(vertex_count))
        closure: set[Simplex] = set()
        for s in generators:
            for k in range(1, len(s) + 1):
                closure.update(combinations(s, k))
        self.dim = max(len(s) for s in closure) - 1
        by_dim: list[list[Simplex]] = [[] for _ in range(self.dim + 1)]
        for s in closure:
            by_dim[len(s) - 1].append(s)
        self._by_dim = tuple(tuple(sorted(level)) for level in by_dim)
        self._index = tuple({s: i for i, s in enumerate(level)} for level in self._by_dim)

        cofaces: dict[Simplex, set[Simplex]] = {}
        for p in range(1, self.dim + 1):
            for s in self._by_dim[p]:
                for _, f in facets(s):
                    cofaces.setdefault(f, set()).add(s)
        self._maximal = tuple(s for p in range(self.dim + 1) for s in self._by_dim[p] if s not in cofaces)
        # every simplex -> sorted maximal simplices containing it
        carriers: dict[Simplex, list[Simplex]] = {}
        for m in self._maximal:
            for k in range(1, len(m) + 1):
                for f in combinations(m, k):
                    carriers.setdefault(f, []).append(m)
        self._carriers = {s: tuple(sorted(ms)) for s, ms in carriers.items()}

        self.is_pure = all(len(m) == self.dim + 1 for m in self._maximal)
        self.is_closed_manifold = self._check_closed_manifold()
        self.orientation = self._propagate_orientation()
        self.is_oriented = self.is_closed_manifold and self.orientation is not None
        self._boundary_cache: dict[int, RationalMatrix] = {}

    # -- structure -------------------------------------------------------

    def simplices(self, p: int) -> tuple[Simplex, ...]:
        """Sorted p-simplices; empty for p < 0 or p > dim."""
        if 0 <= p <= self.dim:
            return self._by_dim[p]
        return ()

    def index(self, p: int) -> Mapping[Simplex, int]:
        if 0 <= p <= self.dim:
            return self._index[p]
        return {}

    def count(self, p: int) -> int:
        return len(self.simplices(p))

    def counts(self) -> list[int]:
        return [len(level) for level in self._by_dim]

    @property
    def maximal_simplices(self) -> tuple[Simplex, ...]:
        return self._maximal

    def carriers(self, s: Sequence[int]) -> tuple[Simplex, ...]:
        """Maximal simplices containing ``s`` (sorted)."""
        try:
            return self._carriers[tuple(s)]
        except KeyError:
            raise ComplexError(f"simplex {tuple(s)} is not in the complex") from None

    def __contains__(self, s) -> bool:
        return tuple(s) in self._carriers

    def euler_characteristic(self) -> int:
        return sum((-1) ** p * n for p, n in enumerate(self.counts()))

    def check_chain(self, c: Chain) -> None:
        index = self.index(c.dim)
        for s in c.coefficients:
            if s not in index:
                raise ComplexError(f"simplex {s} is not in the complex")

    def boundary(self, c: Chain) -> Chain:
        return boundary(c, self)

    def boundary_matrix(self, p: int) -> RationalMatrix:
        """Matrix of the boundary map C_p -> C_{p-1} in the sorted simplex bases."""
        if not 0 <= p <= self.dim:
            raise ValueError(f"dimension {p} outside 0..{self.dim}")
        cached = self._boundary_cache.get(p)
        if cached is not None:
            return cached
        cols = self._by_dim[p]
        if p == 0:
            mat = RationalMatrix(0, len(cols))
        else:
            row_index = self._index[p - 1]
            entries = {}
            for j, s in enumerate(cols):
                for sign, face in facets(s):
                    entries[(row_index[face], j)] = sign
            mat = RationalMatrix(len(self._by_dim[p - 1]), len(cols), entries)
        self._boundary_cache[p] = mat
        return mat

    def fundamental_cycle(self) -> Chain:
        """Coherently oriented sum of top simplices of a closed oriented manifold."""
        if not self.is_closed_manifold:
            raise ComplexError("fundamental cycle requires a closed manifold")
        if self.orientation is None:
            raise NotOrientableError("complex is not orientable")
        return Chain(self.dim, dict(self.orientation))

    # -- flags -----------------------------------------------------------

    def _check_closed_manifold(self) -> bool:
        if self.dim < 1 or not self.is_pure:
            return False
        counts = {f: 0 for f in self._by_dim[self.dim - 1]}
        for top in self._by_dim[self.dim]:
            for _, f in facets(top):
                counts[f] += 1
        return all(n == 2 for n in counts.values())

    def _propagate_orientation(self) -> Optional[dict[Simplex, int]]:
        """Signs on top simplices making every shared facet cancel, or None.

        Defined for pure complexes whose codimension-one faces lie in at most
        two top simplices; each connected piece starts at +1 on its smallest
        top simplex.
        """
        if self.dim < 1 or not self.is_pure:
            return None
        tops = self._by_dim[self.dim]
        incident: dict[Simplex, list[tuple[Simplex, int]]] = {}
        for top in tops:
            for sign, f in facets(top):
                incident.setdefault(f, []).append((top, sign))
        if any(len(v) > 2 for v in incident.values()):
            return None
        signs: dict[Simplex, int] = {}
        for start in tops:
            if start in signs:
                continue
            signs[start] = 1
            queue = deque([start])
            while queue:
                t = queue.popleft()
                for sign_t, f in facets(t):
                    for other, sign_o in incident[f]:
                        if other == t:
                            continue
                        # s_t * sign_t + s_o * sign_o = 0
                        want = -signs[t] * sign_t * sign_o
                        have = signs.get(other)
                        if have is None:
                            signs[other] = want
                            queue.append(other)
                        elif have != want:
                            return None
        return dict(sorted(signs.items()))

    def summary(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "vertex_count": self.vertex_count,
            "counts": self.counts(),
            "euler_characteristic": self.euler_characteristic(),
            "is_closed_manifold": self.is_closed_manifold,
            "is_oriented": self.is_oriented,
        }

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<SimplicialComplex{label} dim={self.dim} counts={self.counts()}>"


# -- canonical examples ------------------------------------------------------


def circle(k: int = 3) -> SimplicialComplex:
    if k < 3:
        raise ComplexError("a triangulated circle needs at least 3 vertices")
    return SimplicialComplex(k, [(i, (i + 1) % k) for i in range(k)], name=f"circle({k})")


def interval(k: int = 1) -> SimplicialComplex:
    """Path with ``k`` edges and ``k + 1`` vertices."""
    if k < 1:
        raise ComplexError("an interval needs at least one edge")
    return SimplicialComplex(k + 1, [(i, i + 1) for i in range(k)], name=f"interval({k})")


def simplex(n: int = 2) -> SimplicialComplex:
    """The full n-simplex (a ball, not closed)."""
    if n < 0:
        raise ComplexError("simplex dimension must be non-negative")
    return SimplicialComplex(n + 1, [range(n + 1)], name=f"simplex({n})")


def sphere2() -> SimplicialComplex:
    """Boundary of the tetrahedron."""
    return SimplicialComplex(4, combinations(range(4), 3), name="sphere2")


def sphere3() -> SimplicialComplex:
    """Boundary of the 4-simplex."""
    return SimplicialComplex(5, combinations(range(5), 4), name="sphere3")


def _grid_surface(twist: bool, name: str) -> SimplicialComplex:
    # 3x3 grid, wrapping in both directions; with twist the i-wrap flips j
    def vid(i: int, j: int) -> int:
        if i == 3:
            i = 0
            if twist:
                j = (-j) % 3
        return 3 * i + (j % 3)

    tris = []
    for i in range(3):
        for j in range(3):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1)
            tris.append((a, b, d))
            tris.append((a, c, d))
    return SimplicialComplex(9, tris, name=name)


def torus() -> SimplicialComplex:
    """9-vertex torus: a 3x3 grid with wraparound, each square cut on the diagonal."""
    return _grid_surface(False, "torus")


def torus7() -> SimplicialComplex:
    """Minimal 7-vertex torus (Moebius-Kantor / Csaszar)."""
    tris = []
    for i in range(7):
        tris.append((i, (i + 1) % 7, (i + 3) % 7))
        tris.append((i, (i + 2) % 7, (i + 3) % 7))
    return SimplicialComplex(7, tris, name="torus7")


def projective_plane() -> SimplicialComplex:
    """6-vertex real projective plane (hemi-icosahedron)."""
    tris = [
        (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
        (1, 2, 4), (2, 3, 5), (1, 3, 4), (2, 4, 5), (1, 3, 5),
    ]
    return SimplicialComplex(6, tris, name="projective_plane")


def klein_bottle() -> SimplicialComplex:
    """9-vertex Klein bottle: the torus grid with one wrap reflected."""
    return _grid_surface(True, "klein_bottle")


CANONICAL = {
    "circle": circle,
    "interval": interval,
    "simplex": simplex,
    "sphere2": sphere2,
    "sphere3": sphere3,
    "torus": torus,
    "torus7": torus7,
    "projective_plane": projective_plane,
    "klein_bottle": klein_bottle,
}


def canonical_complex(name: str, k: Optional[int] = None) -> SimplicialComplex:
    """Build one of the named example complexes.

    ``circle``, ``interval`` and ``simplex`` take the integer parameter ``k``;
    ``"circle(7)"`` style names are accepted as well.
    """
    if "(" in name and name.endswith(")"):
        name, arg = name[:-1].split("(", 1)
        k = int(arg)
    try:
        factory = CANONICAL[name]
    except KeyError:
        raise ComplexError(f"unknown complex {name!r}; choose from {sorted(CANONICAL)}") from None
    if k is None:
        return factory()
    if name not in ("circle", "interval", "simplex"):
        raise ComplexError(f"{name} takes no parameter")
    return factory(k)


# -- file formats ----------------------------------------------------------------


def _build_checked(vertex_count: Optional[int], rows: list[tuple[Simplex, Optional[int]]], name) -> SimplicialComplex:
    seen: dict[Simplex, Optional[int]] = {}
    for s, line in rows:
        if s in seen:
            where = f" (first on line {seen[s]})" if seen[s] is not None else ""
            raise ParseError(f"duplicate simplex {list(s)}{where}", line)
        seen[s] = line
    if vertex_count is None:
        if not rows:
            raise ParseError("no simplices given")
        vertex_count = max(max(s) for s, _ in rows) + 1
    for s, line in rows:
        if s[0] < 0 or s[-1] >= vertex_count:
            raise ParseError(f"vertex id out of range 0..{vertex_count - 1} in {list(s)}", line)
    return SimplicialComplex(vertex_count, [s for s, _ in rows], name=name)


def _parse_text(text: str, name) -> SimplicialComplex:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] != "simplex":
            raise ParseError(f"expected 'simplex v0 v1 ...', got {line!r}", lineno)
        if len(parts) < 2:
            raise ParseError("simplex with no vertices", lineno)
        try:
            verts = [int(p) for p in parts[1:]]
        except ValueError:
            raise ParseError(f"non-integer vertex id in {line!r}", lineno) from None
        try:
            s = make_simplex(verts)
        except ComplexError as exc:
            raise ParseError(str(exc), lineno) from None
        rows.append((s, lineno))
    return _build_checked(None, rows, name)


def _parse_json(text: str, name) -> SimplicialComplex:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at position {exc.pos}: {exc.msg}", exc.lineno) from None
    if not isinstance(data, dict) or "maximal_simplices" not in data:
        raise ParseError('expected an object with "vertices" and "maximal_simplices"')
    n = data.get("vertices")
    if n is not None and (not isinstance(n, int) or isinstance(n, bool) or n < 1):
        raise ParseError('"vertices" must be a positive integer')
    rows = []
    for k, raw in enumerate(data["maximal_simplices"]):
        if not isinstance(raw, list) or not raw or not all(isinstance(v, int) and not isinstance(v, bool) for v in raw):
            raise ParseError(f"maximal_simplices[{k}] must be a non-empty list of integers")
        try:
            rows.append((make_simplex(raw), None))
        except ComplexError as exc:
            raise ParseError(f"maximal_simplices[{k}]: {exc}") from None
    return _build_checked(n, rows, name or data.get("name"))


def load_complex(source, format: Optional[str] = None, name: Optional[str] = None) -> SimplicialComplex:
    """Read a complex from bytes, text or a binary stream.

    ``format`` is ``"json"`` or ``"text"``; when omitted it is guessed from the
    first non-blank character.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8 (byte {exc.start})") from None
    if format is None:
        format = "json" if source.lstrip().startswith("{") else "text"
    if format == "json":
        return _parse_json(source, name)
    if format == "text":
        return _parse_text(source, name)
    raise ValueError(f"unknown complex format {format!r}")


def dump_complex(K: SimplicialComplex, format: str = "json") -> str:
    if format == "json":
        return json.dumps({"vertices": K.vertex_count, "maximal_simplices": [list(s) for s in K.maximal_simplices]}) + "\n"
    if format == "text":
        lines = [f"# {K.name}"] if K.name else []
        lines += ["simplex " + " ".join(map(str, s)) for s in K.maximal_simplices]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown complex format {format!r}")
