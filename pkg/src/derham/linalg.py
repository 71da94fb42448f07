"""Exact rational linear algebra.

Everything here works over :class:`fractions.Fraction`.  Matrices are stored
sparsely as a mapping ``(row, col) -> Fraction`` with zero entries dropped.
Elimination is plain Gauss-Jordan over the rationals with a fixed pivot rule,
so the bases returned by :func:`nullspace` and :func:`quotient_basis` are
reproducible across runs.

Pivot rule: columns are processed left to right; within a column the pivot row
is the candidate whose entry maximises ``|numerator| * denominator``, ties
going to the lowest row index.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Sequence

Rational = Fraction
SparseVector = dict[int, Fraction]


class InconsistentSubspaceError(ValueError):
    """Raised when a quotient V/W is requested but W is not contained in V."""


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings to a Fraction.

    Floats are rejected; they would smuggle rounding into exact code.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(value: Fraction) -> str:
    """Serialize as ``"num/den"`` (denominator always written)."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def _pivot_weight(x: Fraction) -> int:
    return abs(x.numerator) * x.denominator


class RationalMatrix:
    """Sparse rational matrix; immutable after construction."""

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], object] = ()):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        self.rows = rows
        self.cols = cols
        stored: dict[tuple[int, int], Fraction] = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for (i, j), value in items:
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i}, {j}) outside a {rows}x{cols} matrix")
            value = as_rational(value)
            if value:
                stored[(i, j)] = value
        self._entries = dict(sorted(stored.items()))

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[object]], cols: Optional[int] = None) -> "RationalMatrix":
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        entries = {}
        for i, row in enumerate(data):
            if len(row) != cols:
                raise ValueError("ragged rows in dense matrix")
            for j, value in enumerate(row):
                entries[(i, j)] = value
        return cls(rows, cols, entries)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[object]], rows: int) -> "RationalMatrix":
        entries = {}
        for j, column in enumerate(columns):
            if len(column) != rows:
                raise ValueError("column length does not match row count")
            for i, value in enumerate(column):
                entries[(i, j)] = value
        return cls(rows, len(columns), entries)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def nnz(self) -> int:
        return len(self._entries)

    def entries(self) -> Iterator[tuple[tuple[int, int], Fraction]]:
        """Nonzero entries in sorted (row, col) order."""
        return iter(self._entries.items())

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(key)
        return self._entries.get((i, j), Fraction(0))

    def row_dicts(self) -> list[SparseVector]:
        out: list[SparseVector] = [{} for _ in range(self.rows)]
        for (i, j), value in self._entries.items():
            out[i][j] = value
        return out

    def column(self, j: int) -> list[Fraction]:
        col = [Fraction(0)] * self.rows
        for (i, jj), value in self._entries.items():
            if jj == j:
                col[i] = value
        return col

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), value in self._entries.items():
            out[i][j] = value
        return out

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self._entries.items()})

    @property
    def T(self) -> "RationalMatrix":
        return self.transpose()

    def is_zero(self) -> bool:
        return not self._entries

    def apply(self, vector: Sequence[object]) -> list[Fraction]:
        if len(vector) != self.cols:
            raise ValueError(f"vector of length {len(vector)} does not match {self.cols} columns")
        out = [Fraction(0)] * self.rows
        for (i, j), value in self._entries.items():
            x = vector[j]
            if x:
                out[i] += value * x
        return out

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            right = other.row_dicts()
            acc: dict[tuple[int, int], Fraction] = {}
            for (i, k), a in self._entries.items():
                for j, b in right[k].items():
                    acc[(i, j)] = acc.get((i, j), Fraction(0)) + a * b
            return RationalMatrix(self.rows, other.cols, acc)
        return self.apply(other)

    def vstack(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.cols:
            raise ValueError("column counts differ")
        entries = dict(self._entries)
        entries.update({(i + self.rows, j): v for (i, j), v in other._entries.items()})
        return RationalMatrix(self.rows + other.rows, self.cols, entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, tuple(self._entries.items())))

    def __repr__(self) -> str:
        return f"RationalMatrix({self.rows}x{self.cols}, nnz={self.nnz})"


@dataclass(frozen=True)
class SubspaceBasis:
    """A list of linearly independent vectors in ``Q^ambient_dim``."""

    ambient_dim: int
    vectors: tuple[tuple[Fraction, ...], ...] = ()

    def __post_init__(self):
        vecs = tuple(tuple(as_rational(x) for x in v) for v in self.vectors)
        for v in vecs:
            if len(v) != self.ambient_dim:
                raise ValueError("basis vector has wrong length")
        object.__setattr__(self, "vectors", vecs)

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def __getitem__(self, i: int) -> tuple[Fraction, ...]:
        return self.vectors[i]

    def as_matrix(self) -> RationalMatrix:
        """Basis vectors as the columns of a matrix."""
        return RationalMatrix.from_columns(self.vectors, self.ambient_dim)


def _reduce_rows(rows: list[SparseVector], ncols: int, track: Optional[list[SparseVector]] = None):
    """In-place Gauss-Jordan elimination.

    Returns the pivot columns; afterwards ``rows[:rank]`` is the reduced row
    echelon form and the remaining rows are empty.  If ``track`` is given the
    same row operations are applied to it (used to record ``E`` with
    ``E @ A = R``).
    """
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    # columns that actually occur, in order; empty columns can never pivot
    occupied = sorted({j for row in rows for j in row})
    for col in occupied:
        if r == nrows:
            break
        best = None
        best_weight = -1
        for i in range(r, nrows):
            x = rows[i].get(col)
            if x:
                w = _pivot_weight(x)
                if w > best_weight:
                    best, best_weight = i, w
        if best is None:
            continue
        if best != r:
            rows[r], rows[best] = rows[best], rows[r]
            if track is not None:
                track[r], track[best] = track[best], track[r]
        inv = 1 / rows[r][col]
        if inv != 1:
            rows[r] = {j: v * inv for j, v in rows[r].items()}
            if track is not None:
                track[r] = {j: v * inv for j, v in track[r].items()}
        prow = rows[r]
        ptrack = track[r] if track is not None else None
        for i in range(nrows):
            if i == r:
                continue
            factor = rows[i].get(col)
            if not factor:
                continue
            _axpy(rows[i], -factor, prow)
            if track is not None:
                _axpy(track[i], -factor, ptrack)
        pivots.append(col)
        r += 1
    return pivots


def _axpy(target: SparseVector, scale: Fraction, source: SparseVector) -> None:
    for j, v in source.items():
        new = target.get(j, 0) + scale * v
        if new:
            target[j] = new
        else:
            target.pop(j, None)


def rref(A: RationalMatrix) -> tuple[RationalMatrix, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns."""
    rows = A.row_dicts()
    pivots = _reduce_rows(rows, A.cols)
    entries = {(i, j): v for i, row in enumerate(rows) for j, v in row.items()}
    return RationalMatrix(A.rows, A.cols, entries), tuple(pivots)


def rank(A: RationalMatrix) -> int:
    """Exact rank over Q."""
    return len(_reduce_rows(A.row_dicts(), A.cols))


def nullspace(A: RationalMatrix) -> SubspaceBasis:
    """Basis of ``{x : A x = 0}``, one vector per free column of the RREF."""
    rows = A.row_dicts()
    pivots = _reduce_rows(rows, A.cols)
    pivot_set = set(pivots)
    vectors = []
    for free in range(A.cols):
        if free in pivot_set:
            continue
        x = [Fraction(0)] * A.cols
        x[free] = Fraction(1)
        for i, p in enumerate(pivots):
            v = rows[i].get(free)
            if v:
                x[p] = -v
        vectors.append(tuple(x))
    return SubspaceBasis(A.cols, tuple(vectors))


def column_space(A: RationalMatrix) -> SubspaceBasis:
    """The pivot columns of ``A`` (original, unreduced), a basis of its image."""
    _, pivots = rref(A)
    return SubspaceBasis(A.rows, tuple(tuple(A.column(j)) for j in pivots))


class Factorization:
    """Reusable solver for ``A x = b`` with many right-hand sides.

    Stores ``E`` and ``R = E A`` in reduced row echelon form.
    """

    def __init__(self, A: RationalMatrix):
        self.matrix = A
        rows = A.row_dicts()
        track: list[SparseVector] = [{i: Fraction(1)} for i in range(A.rows)]
        self.pivots = tuple(_reduce_rows(rows, A.cols, track))
        self._reduced = rows
        self._transform = track

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def solve(self, b: Sequence[object]) -> Optional[list[Fraction]]:
        A = self.matrix
        if len(b) != A.rows:
            raise ValueError(f"right-hand side has length {len(b)}, expected {A.rows}")
        b = [as_rational(x) for x in b]
        eb = []
        for row in self._transform:
            s = Fraction(0)
            for j, v in row.items():
                if b[j]:
                    s += v * b[j]
            eb.append(s)
        if any(eb[self.rank:]):
            return None
        x = [Fraction(0)] * A.cols
        for i, p in enumerate(self.pivots):
            x[p] = eb[i]
        return x


def solve(A: RationalMatrix, b: Sequence[object]) -> Optional[list[Fraction]]:
    """Some exact solution of ``A x = b``, or ``None`` if ``b`` is not in the image."""
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {A.rows}")
    return Factorization(A).solve(b)


class IncrementalEchelon:
    """Row echelon basis that grows one vector at a time.

    ``add`` reports whether the vector was independent of everything added so
    far.  Used for greedy basis extension and independence checks.
    """

    def __init__(self, ambient_dim: int):
        self.ambient_dim = ambient_dim
        self._rows: dict[int, SparseVector] = {}

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, vector: Iterable[object]) -> SparseVector:
        v: SparseVector = {}
        for j, x in enumerate(vector):
            x = as_rational(x)
            if x:
                v[j] = x
        # stored rows lead with their key, so each step strictly raises min(v)
        while v:
            lead = min(v)
            row = self._rows.get(lead)
            if row is None:
                break
            _axpy(v, -v[lead], row)
        return v

    def contains(self, vector: Iterable[object]) -> bool:
        return not self.reduce(vector)

    def add(self, vector: Iterable[object]) -> bool:
        v = self.reduce(vector)
        if not v:
            return False
        lead = min(v)
        inv = 1 / v[lead]
        self._rows[lead] = {j: x * inv for j, x in v.items()}
        return True


def is_independent(vectors: Sequence[Sequence[object]], ambient_dim: int) -> bool:
    ech = IncrementalEchelon(ambient_dim)
    return all(ech.add(v) for v in vectors)


def quotient_basis(Z: SubspaceBasis, B: SubspaceBasis) -> SubspaceBasis:
    """Representatives in span(Z) of a basis of span(Z) / span(B).

    Greedy: B is loaded first, then each vector of Z in order is kept if it is
    independent of everything kept so far.
    """
    if Z.ambient_dim != B.ambient_dim:
        raise ValueError("subspaces live in different ambient spaces")
    z_span = IncrementalEchelon(Z.ambient_dim)
    for z in Z:
        z_span.add(z)
    for b in B:
        if not z_span.contains(b):
            raise InconsistentSubspaceError("span(B) is not contained in span(Z); complex data is inconsistent")
    ech = IncrementalEchelon(Z.ambient_dim)
    for b in B:
        ech.add(b)
    chosen = [z for z in Z if ech.add(z)]
    return SubspaceBasis(Z.ambient_dim, tuple(chosen))
