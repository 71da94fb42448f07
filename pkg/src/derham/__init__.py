"""Exact de Rham cohomology on simplicial complexes.

Simplicial (co)homology over Q, polynomial differential forms in barycentric
coordinates, exact integration over chains, and constructive checks of the
de Rham isomorphism between closed forms modulo exact forms and simplicial
cohomology.
"""

from .cohomology import (
    Cochain,
    CohomologyBasis,
    HomologyBasis,
    betti_numbers,
    coboundary,
    cohomology,
    cup,
    functional_to_cocycle,
    homology,
    pair,
    solve_coboundary,
)
from .complex import (
    Chain,
    ComplexError,
    NotOrientableError,
    ParseError,
    SimplicialComplex,
    boundary,
    canonical_complex,
    load_complex,
)
from .forms import (
    BarycentricTerm,
    FormError,
    PolyForm,
    derham_map,
    exterior_derivative,
    form_from_json,
    form_to_json,
    integrate,
    wedge,
    whitney,
)
from .linalg import RationalMatrix, SubspaceBasis, nullspace, quotient_basis, rank, solve
from .theorems import (
    DeRhamBasis,
    NotClosedError,
    PeriodReport,
    RingVerdict,
    UnsupportedFormError,
    derham_basis,
    find_primitive,
    periods,
    realize_periods,
    ring_check,
)

__version__ = "0.1.0"

__all__ = [
    "BarycentricTerm",
    "betti_numbers",
    "boundary",
    "canonical_complex",
    "Chain",
    "coboundary",
    "Cochain",
    "cohomology",
    "CohomologyBasis",
    "ComplexError",
    "cup",
    "derham_basis",
    "derham_map",
    "DeRhamBasis",
    "exterior_derivative",
    "find_primitive",
    "form_from_json",
    "form_to_json",
    "FormError",
    "functional_to_cocycle",
    "homology",
    "HomologyBasis",
    "integrate",
    "load_complex",
    "NotClosedError",
    "NotOrientableError",
    "nullspace",
    "pair",
    "ParseError",
    "PeriodReport",
    "periods",
    "PolyForm",
    "quotient_basis",
    "rank",
    "RationalMatrix",
    "realize_periods",
    "ring_check",
    "RingVerdict",
    "SimplicialComplex",
    "solve",
    "solve_coboundary",
    "SubspaceBasis",
    "UnsupportedFormError",
    "wedge",
    "whitney",
]
