"""Exact-arithmetic workbench for mutant-knot satellite invariants.

Two halves: symmetric-function machinery (Schur squares, plethysm with
p_2, multiplicity scans) that decides when satellite invariants of
mutants must agree, and an explicit sl(3)_q pipeline that evaluates the
distinguishing 6-string difference as a certified exact polynomial.
"""

__version__ = "0.1.0"

from .laurent import (  # noqa: F401
    LaurentPoly,
    RationalFunction,
    format_laurent,
    parse_laurent,
    poly_gcd,
    unit_monomial_quotient,
)
from .field import PointwiseField, SymbolicField, sample_points  # noqa: F401
from .interpolate import interpolate_laurent  # noqa: F401
from .schur import (  # noqa: F401
    SchurExpansion,
    hook_scan,
    lr_mult,
    mixed_sl3_decomp,
    multiplicity_scan,
    plethysm_p2,
    square_split,
)
from .qsl3 import build_tower, quantum_dimension, verify_module_axioms  # noqa: F401
from .certify import certify_difference, paper_difference_polynomial  # noqa: F401
