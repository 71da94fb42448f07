"""Cochains, coboundary, (co)homology over Q and the Alexander-Whitney cup product."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .complex import Chain, ComplexError, SimplicialComplex
from .linalg import (
    Factorization,
    RationalMatrix,
    SubspaceBasis,
    as_rational,
    column_space,
    nullspace,
    quotient_basis,
    rank,
)


class Cochain:
    """A rational function on the sorted p-simplices of a complex."""

    __slots__ = ("complex", "dim", "values")

    def __init__(self, K: SimplicialComplex, dim: int, values: Sequence[object]):
        n = K.count(dim)
        if len(values) != n:
            raise ComplexError(f"cochain of dim {dim} needs {n} values, got {len(values)}")
        self.complex = K
        self.dim = dim
        self.values = tuple(as_rational(v) for v in values)

    @classmethod
    def zero(cls, K: SimplicialComplex, dim: int) -> "Cochain":
        return cls(K, dim, [0] * K.count(dim))

    @classmethod
    def constant(cls, K: SimplicialComplex, value=1) -> "Cochain":
        return cls(K, 0, [value] * K.count(0))

    @classmethod
    def indicator(cls, K: SimplicialComplex, s: Sequence[int], value=1) -> "Cochain":
        s = tuple(s)
        values = [0] * K.count(len(s) - 1)
        try:
            values[K.index(len(s) - 1)[s]] = value
        except KeyError:
            raise ComplexError(f"simplex {s} is not in the complex") from None
        return cls(K, len(s) - 1, values)

    def __getitem__(self, s: Sequence[int]) -> Fraction:
        return self.values[self.complex.index(self.dim)[tuple(s)]]

    def __call__(self, c: Chain) -> Fraction:
        return pair(self, c)

    def items(self):
        return zip(self.complex.simplices(self.dim), self.values)

    def is_zero(self) -> bool:
        return not any(self.values)

    def _check(self, other: "Cochain") -> None:
        if other.complex is not self.complex:
            raise ComplexError("cochains live on different complexes")
        if other.dim != self.dim:
            raise ComplexError(f"cochain dimensions differ: {self.dim} vs {other.dim}")

    def __add__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        self._check(other)
        return Cochain(self.complex, self.dim, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        self._check(other)
        return Cochain(self.complex, self.dim, [a - b for a, b in zip(self.values, other.values)])

    def __neg__(self):
        return Cochain(self.complex, self.dim, [-a for a in self.values])

    def __mul__(self, scalar):
        scalar = as_rational(scalar)
        return Cochain(self.complex, self.dim, [scalar * a for a in self.values])

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.complex is other.complex and self.dim == other.dim and self.values == other.values

    def __hash__(self) -> int:
        return hash((id(self.complex), self.dim, self.values))

    def __repr__(self) -> str:
        vals = ", ".join(str(v) for v in self.values)
        return f"Cochain(dim={self.dim}, [{vals}])"


@dataclass(frozen=True)
class HomologyBasis:
    dim: int
    cycles: tuple[Chain, ...]

    @property
    def betti(self) -> int:
        return len(self.cycles)


@dataclass(frozen=True)
class CohomologyBasis:
    dim: int
    cocycles: tuple[Cochain, ...]

    @property
    def betti(self) -> int:
        return len(self.cocycles)


def coboundary_matrix(K: SimplicialComplex, p: int) -> RationalMatrix:
    """Matrix of C^p -> C^{p+1}: the transpose of the (p+1)-boundary matrix."""
    if p + 1 > K.dim or p < -1:
        return RationalMatrix(K.count(p + 1), K.count(p))
    if p == -1:
        return RationalMatrix(K.count(0), 0)
    return K.boundary_matrix(p + 1).transpose()


def coboundary(f: Cochain) -> Cochain:
    """``(δf)(c) = f(∂c)``; zero (and empty) above the top dimension."""
    K = f.complex
    return Cochain(K, f.dim + 1, coboundary_matrix(K, f.dim).apply(f.values))


def pair(f: Cochain, c: Chain) -> Fraction:
    """Evaluate a cochain on a chain."""
    if f.dim != c.dim:
        raise ComplexError(f"cannot pair a {f.dim}-cochain with a {c.dim}-chain")
    index = f.complex.index(f.dim)
    total = Fraction(0)
    for s, coeff in c.coefficients.items():
        try:
            total += coeff * f.values[index[s]]
        except KeyError:
            raise ComplexError(f"simplex {s} is not in the complex") from None
    return total


def cup(f: Cochain, g: Cochain) -> Cochain:
    """Front-face / back-face product ``(f ∪ g)[v0..v_{p+q}] = f[v0..vp] g[vp..v_{p+q}]``."""
    if f.complex is not g.complex:
        raise ComplexError("cochains live on different complexes")
    K = f.complex
    p, q = f.dim, g.dim
    fi, gi = K.index(p), K.index(q)
    values = []
    for s in K.simplices(p + q):
        values.append(f.values[fi[s[: p + 1]]] * g.values[gi[s[p:]]])
    return Cochain(K, p + q, values)


# per-complex memo; lru_cache is internally locked, the extra lock keeps
# the expensive factorisations from being computed twice under contention
_memo_lock = threading.RLock()


@lru_cache(maxsize=256)
def _coboundary_solver(K: SimplicialComplex, p: int) -> Factorization:
    """Solver for ``δ x = f`` with f a p-cochain (x a (p-1)-cochain)."""
    return Factorization(coboundary_matrix(K, p - 1))


def coboundary_solver(K: SimplicialComplex, p: int) -> Factorization:
    with _memo_lock:
        return _coboundary_solver(K, p)


def solve_coboundary(f: Cochain) -> Optional[Cochain]:
    """Some ``x`` with ``δx = f``, or None when f is not a coboundary.

    For ``f.dim == 0`` the only coboundary is zero, and the witness is the
    empty (-1)-cochain.
    """
    K = f.complex
    if f.dim == 0:
        return Cochain(K, -1, []) if f.is_zero() else None
    x = coboundary_solver(K, f.dim).solve(f.values)
    if x is None:
        return None
    return Cochain(K, f.dim - 1, x)


def is_coboundary(f: Cochain) -> bool:
    return solve_coboundary(f) is not None


def _check_dim(K: SimplicialComplex, p: int) -> None:
    if not 0 <= p <= K.dim:
        raise ValueError(f"dimension {p} outside 0..{K.dim}")


@lru_cache(maxsize=256)
def _homology(K: SimplicialComplex, p: int) -> HomologyBasis:
    cycles = nullspace(K.boundary_matrix(p))
    if p + 1 <= K.dim:
        boundaries = column_space(K.boundary_matrix(p + 1))
    else:
        boundaries = SubspaceBasis(K.count(p), ())
    reps = quotient_basis(cycles, boundaries)
    return HomologyBasis(p, tuple(Chain.from_vector(K, p, v) for v in reps))


def homology(K: SimplicialComplex, p: int) -> HomologyBasis:
    """Cycle representatives of a basis of ``H_p(K; Q)``."""
    _check_dim(K, p)
    with _memo_lock:
        return _homology(K, p)


@lru_cache(maxsize=256)
def _cohomology(K: SimplicialComplex, p: int) -> CohomologyBasis:
    cocycles = nullspace(coboundary_matrix(K, p))
    if p >= 1:
        coboundaries = column_space(coboundary_matrix(K, p - 1))
    else:
        coboundaries = SubspaceBasis(K.count(p), ())
    reps = quotient_basis(cocycles, coboundaries)
    return CohomologyBasis(p, tuple(Cochain(K, p, v) for v in reps))


def cohomology(K: SimplicialComplex, p: int) -> CohomologyBasis:
    """Cocycle representatives of a basis of ``H^p(K; Q)``."""
    _check_dim(K, p)
    with _memo_lock:
        return _cohomology(K, p)


def betti_numbers(K: SimplicialComplex) -> list[int]:
    ranks = [rank(K.boundary_matrix(p)) for p in range(K.dim + 1)] + [0]
    return [K.count(p) - ranks[p] - ranks[p + 1] for p in range(K.dim + 1)]


@lru_cache(maxsize=256)
def _duality_solver(K: SimplicialComplex, p: int) -> Factorization:
    # rows: δ f = 0, then f(z_i) = φ_i for each homology representative
    constraints = coboundary_matrix(K, p)
    reps = _homology(K, p).cycles
    rows = RationalMatrix.from_dense([c.to_vector(K) for c in reps], cols=K.count(p)) if reps else RationalMatrix(0, K.count(p))
    return Factorization(constraints.vstack(rows))


def functional_to_cocycle(K: SimplicialComplex, p: int, phi: Sequence[object]) -> Cochain:
    """A cocycle whose values on the homology representatives are ``phi``.

    Any functional on H_p extends from the cycles to all chains, so the
    underlying linear system is always consistent.
    """
    basis = homology(K, p)
    if len(phi) != basis.betti:
        raise ValueError(f"expected {basis.betti} values for H_{p}, got {len(phi)}")
    with _memo_lock:
        solver = _duality_solver(K, p)
    rhs = [Fraction(0)] * coboundary_matrix(K, p).rows + [as_rational(x) for x in phi]
    x = solver.solve(rhs)
    if x is None:  # pragma: no cover - excluded by independence of the representatives
        raise ComplexError("homology representatives are not independent modulo boundaries")
    return Cochain(K, p, x)
