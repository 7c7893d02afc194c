"""Outage analysis and dimensioning for randomly deployed data collectors.

Sensors scattered as a Poisson field transmit to their nearest collector,
itself one of a Poisson field; this package evaluates the resulting
SIR/SINR distributions in closed form, cross-validates them with a Monte
Carlo simulator, and solves the inverse problems (required collector
density, transmit power) behind deployment planning.
"""

__version__ = "0.1.0"

from .errors import (
    DomainError,
    NetdimError,
    NoClosedFormError,
    QuadratureError,
    UnsupportedRangeError,
)
from .params import CcdfCurve, ChannelModel, SystemParams
from .analytic import (
    K_ALPHA4,
    QuadratureSpec,
    ccdf_curve,
    interference_laplace,
    nearest_distance_pdf,
    sinr_ccdf_general,
    sinr_ccdf_rayleigh_alpha4,
    sir_ccdf_nakagami,
    sir_ccdf_rayleigh,
)
from .design import (
    DeploymentRequirement,
    DesignTarget,
    channel_density_ratio,
    design_tx_power,
    noise_figure_of_merit,
    outage_upper_bound_alpha4,
    plan_deployment,
    required_lambda_c_sinr,
    required_lambda_c_sir,
)
from .montecarlo import (
    OutageEstimate,
    SimConfig,
    auto_window_radius,
    empirical_ccdf,
    estimate_outage,
    sample_sinr,
    sample_trial,
)

__all__ = [
    "__version__",
    "NetdimError",
    "DomainError",
    "UnsupportedRangeError",
    "NoClosedFormError",
    "QuadratureError",
    "ChannelModel",
    "SystemParams",
    "CcdfCurve",
    "K_ALPHA4",
    "QuadratureSpec",
    "sir_ccdf_rayleigh",
    "sir_ccdf_nakagami",
    "sinr_ccdf_rayleigh_alpha4",
    "sinr_ccdf_general",
    "interference_laplace",
    "nearest_distance_pdf",
    "ccdf_curve",
    "DesignTarget",
    "DeploymentRequirement",
    "required_lambda_c_sir",
    "required_lambda_c_sinr",
    "design_tx_power",
    "noise_figure_of_merit",
    "plan_deployment",
    "outage_upper_bound_alpha4",
    "channel_density_ratio",
    "SimConfig",
    "OutageEstimate",
    "auto_window_radius",
    "sample_trial",
    "sample_sinr",
    "estimate_outage",
    "empirical_ccdf",
]
