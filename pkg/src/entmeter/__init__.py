"""Entanglement of multipartite states measured through quantum uncertainties.

The core quantity is the total variance of all local observables,

    V(psi) = sum_a (<X_a^2> - <X_a>^2),

summed over traceless Hermitian generators of every party.  Rescaled so
that product states map to 0 and states with maximally mixed reductions
map to 1, its square root ``mu`` measures entanglement of pure states of
any format.  Mixed states get an upper bound and a convex-roof estimate.
"""

from .errors import ArgumentError, CapacityError, EntmeterError, NumericError, ParseError, ValidationError
from .measures import (
    EntanglementReport,
    UncertaintyCheckResult,
    VarianceExtremes,
    concurrence_bipartite,
    entanglement_residual,
    mu,
    three_tangle,
    total_covariance,
    total_variance_closed,
    total_variance_direct,
    uncertainty_check,
    variance_extremes,
)
from .mixed import (
    Ensemble,
    RoofOptions,
    RoofResult,
    convex_roof_mu,
    mu_upper_bound,
    random_density,
    werner,
    wootters_concurrence,
)
from .observables import (
    BasisConvention,
    MeanOperator,
    OperatorBasis,
    casimir_constant,
    embed_local,
    gell_mann_basis,
    mean_operator,
    mean_operator_expectation,
)
from .states import (
    bell,
    bell_pair_product,
    biseparable3,
    ghz3,
    ghz4,
    named_state,
    product,
    random_pure,
    random_unitary,
    w3,
    w3_paper_variant,
)
from .tensor import (
    DensityMatrix,
    HermitianEigenResult,
    PureState,
    SystemShape,
    expectation,
    hermitian_eig,
    kron,
    matrix_sqrt_psd,
    partial_trace,
    purity,
    variance,
)

__version__ = "0.1.0"
