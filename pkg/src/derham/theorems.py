"""Periods of closed forms and the constructive de Rham isomorphism.

Everything is decided inside the Whitney complex, where closed forms, exact
forms and their periods reduce to exact linear algebra on cochains:

* :func:`periods` integrates a closed form over a homology basis;
* :func:`find_primitive` returns ``β`` with ``dβ = ω`` exactly when every
  period of ``ω`` vanishes (injectivity);
* :func:`realize_periods` builds a closed form with prescribed periods
  (surjectivity);
* :func:`derham_basis` lifts a cohomology basis and exposes its period
  matrix, whose invertibility is the isomorphism itself;
* :func:`ring_check` compares wedge products of forms with cup products of
  their cochains.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .cohomology import (
    Cochain,
    HomologyBasis,
    cohomology,
    cup,
    functional_to_cocycle,
    homology,
    pair,
    solve_coboundary,
)
from .complex import SimplicialComplex
from .forms import FormError, PolyForm, derham_map, exterior_derivative, integrate, whitney, wedge
from .linalg import RationalMatrix, rank


class NotClosedError(FormError):
    """The form has a nonzero exterior derivative (kept on ``.differential``)."""

    def __init__(self, differential: PolyForm, label: str = "form"):
        self.differential = differential
        super().__init__(f"{label} is not closed: its exterior derivative is nonzero")


class UnsupportedFormError(FormError):
    """Closed form outside the Whitney subspace, where primitives are not searched for."""


@dataclass(frozen=True)
class PeriodReport:
    dim: int
    homology_basis: HomologyBasis
    periods: tuple[Fraction, ...]

    @property
    def all_zero(self) -> bool:
        return not any(self.periods)


@dataclass(frozen=True)
class DeRhamBasis:
    dim: int
    closed_forms: tuple[PolyForm, ...]
    period_matrix: RationalMatrix  # entry (i, j) = ∫_{z_i} form_j

    @property
    def betti(self) -> int:
        return len(self.closed_forms)

    @property
    def is_invertible(self) -> bool:
        return rank(self.period_matrix) == self.betti


@dataclass(frozen=True)
class RingVerdict:
    degrees: tuple[int, int]
    difference: Cochain  # Φ(α∧β) - Φ(α) ∪ Φ(β)
    witness: Optional[Cochain]  # x with δx = difference
    top_pairing: Optional[Fraction] = None  # ∫_[M] α∧β
    cup_pairing: Optional[Fraction] = None  # (Φα ∪ Φβ)[M]

    @property
    def cohomologous(self) -> bool:
        return self.witness is not None

    @property
    def pairing_match(self) -> Optional[bool]:
        if self.top_pairing is None:
            return None
        return self.top_pairing == self.cup_pairing

    @property
    def ok(self) -> bool:
        return self.cohomologous and self.pairing_match is not False


def require_closed(form: PolyForm, label: str = "form") -> None:
    dw = exterior_derivative(form)
    if not dw.is_zero():
        raise NotClosedError(dw, label)


def periods(form: PolyForm) -> PeriodReport:
    """Integrals of a closed form over the homology representatives of its degree."""
    require_closed(form)
    K = form.complex
    p = form.degree
    basis = homology(K, p)
    return PeriodReport(p, basis, tuple(integrate(form, z) for z in basis.cycles))


def find_primitive(form: PolyForm) -> Optional[PolyForm]:
    """A Whitney form ``β`` with ``dβ = form``, or None if the form has a nonzero period.

    For a 0-form the only exact form is zero, whose primitive is the zero
    form of degree -1.
    """
    require_closed(form)
    cochain = derham_map(form)
    if whitney(cochain) != form:
        raise UnsupportedFormError("closed form lies outside the Whitney subspace; primitives are searched there only")
    x = solve_coboundary(cochain)
    if x is None:
        return None
    return whitney(x)


def realize_periods(K: SimplicialComplex, p: int, phi: Sequence[object]) -> PolyForm:
    """A closed p-form whose periods on ``homology(K, p)`` are exactly ``phi``."""
    return whitney(functional_to_cocycle(K, p, phi))


def period_matrix(forms: Sequence[PolyForm], basis: HomologyBasis) -> RationalMatrix:
    n = len(basis.cycles)
    entries = {}
    for j, form in enumerate(forms):
        for i, z in enumerate(basis.cycles):
            entries[(i, j)] = integrate(form, z)
    return RationalMatrix(n, len(forms), entries)


def derham_basis(K: SimplicialComplex, p: int) -> DeRhamBasis:
    """Whitney lifts of the cohomology representatives with their period matrix."""
    forms = tuple(whitney(f) for f in cohomology(K, p).cocycles)
    return DeRhamBasis(p, forms, period_matrix(forms, homology(K, p)))


def ring_check(alpha: PolyForm, beta: PolyForm) -> RingVerdict:
    """Compare ``Φ(α∧β)`` with ``Φ(α) ∪ Φ(β)``.

    The two are cohomologous when ``δx = Φ(α∧β) - Φ(α)∪Φ(β)`` is solvable.  On a
    closed oriented manifold with complementary degrees the top pairings
    against the fundamental cycle are recorded too.
    """
    require_closed(alpha, "first form")
    require_closed(beta, "second form")
    K = alpha.complex
    p, q = alpha.degree, beta.degree
    product = wedge(alpha, beta)
    cup_product = cup(derham_map(alpha), derham_map(beta))
    difference = derham_map(product) - cup_product
    witness = solve_coboundary(difference)
    top = cup_top = None
    if p + q == K.dim and K.is_oriented:
        fundamental = K.fundamental_cycle()
        top = integrate(product, fundamental)
        cup_top = pair(cup_product, fundamental)
    return RingVerdict((p, q), difference, witness, top, cup_top)
