import pytest

from derham.complex import (
    circle,
    interval,
    klein_bottle,
    projective_plane,
    simplex,
    sphere2,
    sphere3,
    torus,
    torus7,
)

# built once; complexes are immutable and memoised computations key on identity
CORPUS = {
    "circle(3)": circle(3),
    "circle(7)": circle(7),
    "interval(3)": interval(3),
    "simplex(3)": simplex(3),
    "sphere2": sphere2(),
    "sphere3": sphere3(),
    "torus": torus(),
    "torus7": torus7(),
    "projective_plane": projective_plane(),
    "klein_bottle": klein_bottle(),
}

CLOSED = {k: v for k, v in CORPUS.items() if v.is_closed_manifold}

ACCEPTANCE_LINES = []


@pytest.fixture(params=sorted(CORPUS), scope="session")
def corpus_complex(request):
    return CORPUS[request.param]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
