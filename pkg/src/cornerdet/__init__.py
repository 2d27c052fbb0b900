"""Determinants and inverses of Toeplitz matrices with corner perturbations.

Exact formulas for pure Fisher-Hartwig symbols, limit ratios for tame and
Hermitian symbols, and a dense LU oracle to check them against.
"""
from ._kernels import BACKEND
from .errors import (
    CornerDetError,
    DefinitenessError,
    DivergenceError,
    DomainError,
    FormulaInapplicableError,
    NumericalError,
    ParseError,
    PoleError,
    ShapeError,
    SingularMatrixError,
    UnsupportedSymbolError,
)
from .fisher_hartwig import (
    FHParams,
    duduchava_roch_inverse,
    fh_asymptotic_det,
    fh_corner_entries,
    fh_det_constant,
    fh_entry_asymptotic,
    fh_exact_det,
    fh_first_col_entry,
    fh_last_col_entry,
    fh_scalar_corner_ratio,
)
from .lattice import build_basis, cauchy_binet_check, gram_determinant
from .limits import (
    LimitRatioReport,
    hermitian_first_column_limit,
    hermitian_limit_ratio,
    limit_ratio,
    limit_ratio_report,
    s11_limit_matrix,
    scalar_tame_limit,
    tame_limit_ratio,
)
from .linalg import determinant, lu_factor
from .symbols import (
    HermitianFisherHartwig,
    LaurentPolynomial,
    PureFisherHartwig,
    fourier_coefficients,
    geometric_mean,
    log_coefficients,
    parse_symbol,
    szego_constant,
)
from .toeplitz import (
    CornerPerturbation,
    InverseCorners,
    build_perturbation,
    build_toeplitz,
    inverse_corners,
    levinson_first_column,
    perturbed_det_ratio_exact,
)

__version__ = "0.1.0"
