"""Seeded random rationals, cochains and forms for property checks.

All generators take a :class:`random.Random` so results depend only on the seed.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .cohomology import Cochain, coboundary, cohomology
from .complex import SimplicialComplex
from .forms import PolyForm, whitney, wedge


def random_rational(rng: random.Random, size: int = 4, max_den: int = 3) -> Fraction:
    return Fraction(rng.randint(-size, size), rng.randint(1, max_den))


def random_cochain(K: SimplicialComplex, p: int, rng: random.Random, density: float = 0.6) -> Cochain:
    values = [random_rational(rng) if rng.random() < density else 0 for _ in range(K.count(p))]
    return Cochain(K, p, values)


def random_form(K: SimplicialComplex, degree: int, rng: random.Random, summands: int = 2) -> PolyForm:
    """A tangentially continuous polynomial form, usually outside the Whitney space.

    Each summand is ``g ∧ W(c)`` with ``g`` a product of up to two lifted
    0-cochains; from degree 2 on, a wedge of two Whitney 1-forms may be used
    instead of ``W(c)``.  Wedges and products of continuous forms stay
    continuous, so integrals over shared faces are well defined.
    """
    if degree < 0 or degree > K.dim:
        return PolyForm.zero(K, degree)
    total = PolyForm.zero(K, degree)
    for _ in range(summands):
        if degree >= 2 and rng.random() < 0.3:
            base = wedge(whitney(random_cochain(K, 1, rng)), whitney(random_cochain(K, degree - 1, rng)))
        else:
            base = whitney(random_cochain(K, degree, rng))
        for _ in range(rng.randint(0, 2)):
            base = wedge(whitney(random_cochain(K, 0, rng, density=0.5)), base)
        total = total + base
    return total


def random_closed_cochain(K: SimplicialComplex, p: int, rng: random.Random, exact: bool = False) -> Cochain:
    """A random cocycle; with ``exact`` it is a coboundary."""
    f = Cochain.zero(K, p)
    if not exact:
        for rep in cohomology(K, p).cocycles:
            f = f + random_rational(rng) * rep
    if p >= 1:
        f = f + coboundary(random_cochain(K, p - 1, rng))
    return f


def random_closed_whitney(K: SimplicialComplex, p: int, rng: random.Random, exact: bool = False) -> PolyForm:
    return whitney(random_closed_cochain(K, p, rng, exact=exact))
