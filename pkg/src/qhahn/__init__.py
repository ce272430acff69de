"""Exact verification suite for biorthogonal rational functions of q-Hahn type.

Everything is computed over exact rationals: parameters, grid functions,
operators and structure constants.  The package builds the operator pencil
(X, Y, Z) and the factor V = X^-1 Y on the finite grid, the biorthogonal
rational family it diagonalizes, the weighted adjoint picture, the cubic
algebras the operators satisfy, and the classical limits of the family,
with every identity verified by exact equality (or, for the two genuine
limit statements, by measured convergence).
"""

from .qcore import (
    ConfigError,
    DegenerateDenominator,
    DimensionMismatch,
    ExponentSpec,
    InvalidParams,
    PoleOnGrid,
    PrecisionLoss,
    QHahnError,
    QParams,
    RankDeficient,
    Scalar,
    SingularSystem,
    ValidationReport,
    ZeroDenominator,
    ZeroWeight,
    frac_str,
    phi_series,
    qbracket,
    qnum,
    qpoch,
    qpow,
    scalar,
    validate_params,
    value,
)
from .reports import CheckReport
from .operators import (
    Basis,
    GridVector,
    OpMatrix,
    Operator,
    basis_change,
    build_adjoint_operator,
    build_operator,
    identity_matrix,
    phi_function,
    verify_factorization,
    weighted_adjoint,
)
from .brf import (
    BRFFamily,
    WeightVector,
    brf_family,
    brf_partner,
    brf_u,
    eigenvalue,
    inner_product,
    norm_h,
    partial_fraction,
    partner_family,
    reflected_params,
    weight_vector,
)

__version__ = "0.1.0"
