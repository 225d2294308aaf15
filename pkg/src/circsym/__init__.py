"""circsym: testing circular symmetry of complex random vectors.

A complex random vector Z is circularly symmetric when e^{i theta} Z has the
same distribution as Z for every angle theta. This package implements a
weighted-L2 test built on the empirical characteristic function of the real
embedding of the sample, calibrated by a rotation bootstrap, together with
angular diagnostics and a Monte Carlo study harness.

Quick start::

    import numpy as np
    from circsym import ComplexSample, KernelSpec, BootstrapConfig, bootstrap_test

    z = np.random.default_rng(0).standard_normal((100, 2)) @ np.diag([1.0, 0.3])
    result = bootstrap_test(ComplexSample(z), KernelSpec.gaussian(1.0),
                            BootstrapConfig(b=200, seed=1))
    print(result.statistic, result.p_value)

Hot kernels run under numba when it is importable; set CIRCSYM_BACKEND=numpy
to force the pure-numpy fallback (CIRCSYM_BACKEND=numba errors if numba is
missing rather than silently slowing down).
"""

__version__ = "0.1.0"

from ._backend import BACKEND, USING_NUMBA
from .bootstrap import (
    BootstrapConfig,
    TestResult,
    bootstrap_test,
    null_band,
    replicate_statistic,
    rotate_summaries,
)
from .exceptions import (
    CircSymError,
    ClosedFormError,
    ConfigError,
    CostGuardError,
    DomainError,
    NotPsdError,
    NumericError,
    ParseError,
    SummaryError,
)
from .kernel import GAUSSIAN, STABLE, KernelSpec, angular_integral, psi
from .numerics import (
    PsdFactor,
    QuadratureRule,
    RngStream,
    bessel_i0_scaled,
    gauss_legendre,
    psd_factor,
)
from .simulate import (
    CircleUniform,
    Contaminated,
    Discrete4,
    DistributionSpec,
    HighDimCN,
    PowerTable,
    ScalarGaussianRho,
    ShiftedCN2,
    StudySpec,
    level_power_cell,
    make_distribution,
    parse_study_config,
    run_table,
    sample,
    write_table_csv,
    write_table_json,
)
from .statistic import (
    ComplexSample,
    PairwiseSummaries,
    ThetaProfile,
    WeightConvention,
    delta_estimate,
    large_lambda_limit,
    large_lambda_scaled,
    pairwise_summaries,
    statistic_closed,
    statistic_quadrature,
    theta_profile,
)

__all__ = [
    "__version__",
    "BACKEND",
    "USING_NUMBA",
    "BootstrapConfig",
    "TestResult",
    "bootstrap_test",
    "null_band",
    "replicate_statistic",
    "rotate_summaries",
    "CircSymError",
    "ClosedFormError",
    "ConfigError",
    "CostGuardError",
    "DomainError",
    "NotPsdError",
    "NumericError",
    "ParseError",
    "SummaryError",
    "GAUSSIAN",
    "STABLE",
    "KernelSpec",
    "angular_integral",
    "psi",
    "PsdFactor",
    "QuadratureRule",
    "RngStream",
    "bessel_i0_scaled",
    "gauss_legendre",
    "psd_factor",
    "CircleUniform",
    "Contaminated",
    "Discrete4",
    "DistributionSpec",
    "HighDimCN",
    "PowerTable",
    "ScalarGaussianRho",
    "ShiftedCN2",
    "StudySpec",
    "level_power_cell",
    "make_distribution",
    "parse_study_config",
    "run_table",
    "sample",
    "write_table_csv",
    "write_table_json",
    "ComplexSample",
    "PairwiseSummaries",
    "ThetaProfile",
    "WeightConvention",
    "delta_estimate",
    "large_lambda_limit",
    "large_lambda_scaled",
    "pairwise_summaries",
    "statistic_closed",
    "statistic_quadrature",
    "theta_profile",
]
