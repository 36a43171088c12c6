"""Statistical distances, monotone metrics and optimal discrimination tools."""

from .applications import (
    ClausiusReport,
    CramerRaoResult,
    KmPerturbationResult,
    SpeedLimitResult,
    ThermalSpec,
    clausius_report,
    cramer_rao,
    km_information_thermal,
    km_perturbation,
    speed_limit,
    thermal_state,
    von_neumann_entropy,
)
from .classical import (
    AuditReport,
    ChernoffResult,
    ClassicalFamily,
    FGenerator,
    InequalityCheck,
    ProbDist,
    StochasticMap,
    apply_stochastic,
    audit_classical,
    bernoulli_family,
    bhattacharyya,
    chernoff,
    chernoff_coefficient,
    chernoff_information,
    f_divergence,
    fisher_information,
    fisher_metric,
    generator_from_name,
    hellinger_divergence,
    hellinger_generator,
    induced_metric_numerical,
    kl_divergence,
    kl_generator,
    min_error_probability,
    product_distribution,
    random_probdist,
    random_stochastic,
    renyi_divergence,
    softmax_family,
    tsallis_generator,
    tv_distance,
    tv_generator,
)
from .errors import (
    AlphaOutOfRange,
    DimensionCap,
    DimensionMismatch,
    DomainError,
    GeneratorNotNormalised,
    LengthMismatch,
    NonHermitianInput,
    NonMonotoneResult,
    NonSmoothDivergence,
    QigError,
    RegularisationFailure,
    SupportViolation,
    ValidationError,
)
from .httesting import (
    NcopyResult,
    SimulationResult,
    fidelity_optimal_povm,
    helstrom_povm,
    m_matrix,
    ncopy_discrimination,
    neyman_pearson_type2,
    product_povm,
    simulate_ht,
    stein_rate_fit,
    wilson_interval,
)
from .numerics import (
    EigenSystem,
    dim_cap,
    eigh,
    fractional_power,
    hermitian_part,
    matrix_function,
    matrix_sqrt,
    random_density,
    random_kraus,
    random_unitary,
    sld_solve,
    tensor_power,
    trace_norm,
)
from .qdivergences import (
    affinity,
    audit_quantum,
    bures_angle,
    bures_distance,
    fidelity,
    fidelity_nested,
    q_chernoff,
    q_chernoff_coefficient,
    q_chernoff_information,
    q_min_error,
    q_relative_entropy,
    q_renyi,
    quantum_f_divergence,
    trace_distance,
    tsallis,
)
from .qmetrics import (
    GFunction,
    MetricResult,
    f_to_g,
    g_metric,
    induced_metric_numerical_q,
    km_g,
    km_metric,
    parse_g_tag,
    pure_state_information,
    qfi_g,
    qfi_metric,
    qfi_metric_sld,
    rld_g,
    rld_metric,
    unitary_g_information,
    validate_gfunction,
    wyd_g,
    wyd_information,
    wyd_metric,
)
from .states import (
    DensityMatrix,
    KrausChannel,
    Povm,
    StateFamily,
    apply_channel,
    born,
    channel_composed_family,
    custom_family,
    family_derivatives,
    gibbs,
    linear_family,
    random_channel,
    random_povm,
    random_state,
    thermal_family,
    unitary_family,
    validate_unitary_spectrum,
)

__version__ = "0.1.0"
