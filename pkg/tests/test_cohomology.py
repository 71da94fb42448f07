import random
from fractions import Fraction

import pytest

from derham.cohomology import (
    Cochain,
    betti_numbers,
    coboundary,
    coboundary_matrix,
    cohomology,
    cup,
    functional_to_cocycle,
    homology,
    is_coboundary,
    pair,
    solve_coboundary,
)
from derham.complex import Chain, ComplexError, circle, projective_plane, sphere2, torus
from derham.linalg import RationalMatrix, rank
from derham.sampling import random_cochain

from conftest import CLOSED, CORPUS
from oracles import betti_oracle

RNG_SEED = 1234


def random_chain(K, p, rng):
    return Chain.from_vector(K, p, [rng.randint(-3, 3) for _ in range(K.count(p))])


def test_coboundary_of_zero():
    K = torus()
    assert coboundary(Cochain.zero(K, 1)).is_zero()


def test_coboundary_of_vertex_indicator_on_circle():
    K = circle(3)
    f = Cochain.indicator(K, (0,))
    # δf(e) = f(∂e): edges (0,1), (0,2), (1,2) have boundaries 1-0, 2-0, 2-1
    assert coboundary(f).values == (-1, -1, 0)


def test_coboundary_of_top_cochain_is_empty():
    K = sphere2()
    top = coboundary(Cochain(K, 2, [1, 2, 3, 4]))
    assert top.dim == 3 and top.values == ()


def test_coboundary_squared_zero_random(corpus_complex):
    K = corpus_complex
    rng = random.Random(RNG_SEED)
    for p in range(K.dim + 1):
        for _ in range(5):
            f = random_cochain(K, p, rng)
            assert coboundary(coboundary(f)).is_zero()
        if p + 1 <= K.dim:
            assert (coboundary_matrix(K, p + 1) @ coboundary_matrix(K, p)).is_zero()


def test_coboundary_matrix_is_transpose():
    K = torus()
    assert coboundary_matrix(K, 1) == K.boundary_matrix(2).transpose()


@pytest.mark.parametrize(
    "name, expected",
    [
        ("circle(3)", [1, 1]),
        ("sphere2", [1, 0, 1]),
        ("torus", [1, 2, 1]),
        ("projective_plane", [1, 0, 0]),
        ("klein_bottle", [1, 1, 0]),
        ("sphere3", [1, 0, 0, 1]),
        ("simplex(3)", [1, 0, 0, 0]),
    ],
)
def test_betti_tables(name, expected):
    K = CORPUS[name]
    assert betti_oracle(K.maximal_simplices) == expected
    assert betti_numbers(K) == expected
    assert [homology(K, p).betti for p in range(K.dim + 1)] == expected
    assert [cohomology(K, p).betti for p in range(K.dim + 1)] == expected


def test_homology_representatives_are_independent_cycles(corpus_complex):
    K = corpus_complex
    for p in range(K.dim + 1):
        reps = homology(K, p).cycles
        for z in reps:
            assert K.boundary(z).is_zero()
        boundaries = K.boundary_matrix(p + 1) if p < K.dim else RationalMatrix(K.count(p), 0)
        cols = [z.to_vector(K) for z in reps]
        stacked = RationalMatrix.from_columns([boundaries.column(j) for j in range(boundaries.cols)] + cols, K.count(p))
        assert rank(stacked) == rank(boundaries) + len(reps)


def test_cohomology_representatives_are_cocycles(corpus_complex):
    K = corpus_complex
    for p in range(K.dim + 1):
        for f in cohomology(K, p).cocycles:
            assert coboundary(f).is_zero()
        reps = cohomology(K, p).cocycles
        if p >= 1 and reps:
            # no nonzero combination of representatives is a coboundary
            rng = random.Random(p)
            combo = Cochain.zero(K, p)
            for f in reps:
                combo = combo + rng.randint(1, 5) * f
            assert not is_coboundary(combo)


def test_connected_zero_cohomology_is_constants():
    for name in ("torus", "sphere2", "circle(7)"):
        K = CORPUS[name]
        (rep,) = cohomology(K, 0).cocycles
        assert len(set(rep.values)) == 1 and rep.values[0] != 0


def test_projective_plane_has_no_rational_h1():
    assert cohomology(projective_plane(), 1).betti == 0


def test_pair_identities():
    K = torus()
    rng = random.Random(7)
    z = homology(K, 1).cycles[0]
    assert pair(Cochain.zero(K, 1), z) == 0
    g = random_cochain(K, 0, rng)
    assert pair(coboundary(g), z) == 0
    for _ in range(10):
        f = random_cochain(K, 1, rng)
        c = random_chain(K, 2, rng)
        assert pair(f, K.boundary(c)) == pair(coboundary(f), c)
    with pytest.raises(ComplexError):
        pair(f, c)


def test_functional_to_cocycle_examples():
    K = torus()
    f = functional_to_cocycle(K, 1, [1, 0])
    assert coboundary(f).is_zero()
    assert [pair(f, z) for z in homology(K, 1).cycles] == [1, 0]
    C = circle(3)
    g = functional_to_cocycle(C, 1, [5])
    (cycle,) = homology(C, 1).cycles
    assert pair(g, cycle) == 5
    zero = functional_to_cocycle(K, 1, [0, 0])
    assert is_coboundary(zero)
    with pytest.raises(ValueError):
        functional_to_cocycle(K, 1, [1])


def test_functional_round_trip(corpus_complex):
    K = corpus_complex
    rng = random.Random(99)
    for p in range(K.dim + 1):
        basis = homology(K, p)
        for _ in range(3):
            phi = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(basis.betti)]
            f = functional_to_cocycle(K, p, phi)
            assert coboundary(f).is_zero()
            assert [pair(f, z) for z in basis.cycles] == phi
            # zero on boundaries
            if p < K.dim:
                c = random_chain(K, p + 1, rng)
                assert pair(f, K.boundary(c)) == 0


def test_cup_unit():
    K = torus()
    f = random_cochain(K, 1, random.Random(3))
    one = Cochain.constant(K)
    assert cup(f, one) == f
    assert cup(one, f) == f


def test_cup_formula_on_a_triangle():
    K = CORPUS["simplex(3)"]
    f = Cochain.indicator(K, (0, 1))
    g = Cochain.indicator(K, (1, 2))
    h = cup(f, g)
    assert h[(0, 1, 2)] == 1
    assert sum(abs(v) for v in h.values) == 1


def _leibniz_rhs(f, g):
    sign = (-1) ** f.dim
    return cup(coboundary(f), g) + sign * cup(f, coboundary(g))


def test_cup_leibniz(corpus_complex):
    K = corpus_complex
    rng = random.Random(5)
    for p in range(K.dim + 1):
        for q in range(K.dim + 1 - p):
            f, g = random_cochain(K, p, rng), random_cochain(K, q, rng)
            if p + q + 1 <= K.dim:
                assert coboundary(cup(f, g)) == _leibniz_rhs(f, g)


def test_cup_associative(corpus_complex):
    K = corpus_complex
    rng = random.Random(11)
    for p in range(K.dim + 1):
        for q in range(K.dim + 1 - p):
            for r in range(K.dim + 1 - p - q):
                f, g, h = (random_cochain(K, d, rng) for d in (p, q, r))
                assert cup(cup(f, g), h) == cup(f, cup(g, h))


def test_cup_well_defined_on_classes():
    for name in ("torus", "klein_bottle", "sphere2", "torus7"):
        K = CORPUS[name]
        rng = random.Random(17)
        for p in range(K.dim + 1):
            for q in range(K.dim + 1 - p):
                f = functional_to_cocycle(K, p, [rng.randint(-3, 3) for _ in range(homology(K, p).betti)])
                g = functional_to_cocycle(K, q, [rng.randint(-3, 3) for _ in range(homology(K, q).betti)])
                if p >= 1:
                    x = random_cochain(K, p - 1, rng)
                    assert is_coboundary(cup(f + coboundary(x), g) - cup(f, g))


def test_graded_commutativity_up_to_coboundary():
    for K in CLOSED.values():
        rng = random.Random(23)
        for p in range(K.dim + 1):
            for q in range(K.dim + 1 - p):
                f = functional_to_cocycle(K, p, [rng.randint(-3, 3) for _ in range(homology(K, p).betti)])
                g = functional_to_cocycle(K, q, [rng.randint(-3, 3) for _ in range(homology(K, q).betti)])
                assert is_coboundary(cup(f, g) - (-1) ** (p * q) * cup(g, f))


def test_torus_cup_product_pairing():
    K = torus()
    a = functional_to_cocycle(K, 1, [1, 0])
    b = functional_to_cocycle(K, 1, [0, 1])
    F = K.fundamental_cycle()
    assert abs(pair(cup(a, b), F)) == 1
    assert pair(cup(a, b), F) == -pair(cup(b, a), F)
    assert is_coboundary(cup(a, a))
    assert is_coboundary(cup(b, b))


def test_solve_coboundary_witness():
    K = torus()
    g = random_cochain(K, 1, random.Random(2))
    x = solve_coboundary(coboundary(g))
    assert coboundary(x) == coboundary(g)
    assert solve_coboundary(functional_to_cocycle(K, 1, [1, 0])) is None
    assert solve_coboundary(Cochain.zero(K, 0)).dim == -1
    assert solve_coboundary(Cochain.constant(K)) is None


def test_cached_matches_uncached():
    from derham.cohomology import _homology

    K = torus()
    cached = homology(K, 1)
    fresh = _homology.__wrapped__(K, 1)
    assert [z.coefficients for z in cached.cycles] == [z.coefficients for z in fresh.cycles]
