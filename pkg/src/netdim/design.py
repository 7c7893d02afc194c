"""Inverse design: collector density, transmit power, channel comparison.

The forward problem gives outage as a function of the deployment; this
module inverts it.  The interference-limited Rayleigh density bound is
exact (necessary and sufficient).  The noisy bound at path-loss exponent 4
comes from a lower bound on the complementary error function, so it is
sufficient only, tightening as the noise vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import specialfn
from .analytic import K_ALPHA4
from .errors import DomainError

__all__ = [
    "K_ALPHA4",
    "KIND_NECESSARY_AND_SUFFICIENT",
    "KIND_SUFFICIENT",
    "DesignTarget",
    "DeploymentRequirement",
    "required_lambda_c_sir",
    "required_lambda_c_sinr",
    "design_tx_power",
    "noise_figure_of_merit",
    "plan_deployment",
    "outage_upper_bound_alpha4",
    "channel_density_ratio",
]

KIND_NECESSARY_AND_SUFFICIENT = "necessary_and_sufficient"
KIND_SUFFICIENT = "sufficient"


@dataclass(frozen=True)
class DesignTarget:
    """Required SINR threshold (linear) and target outage probability."""

    beta_t: float
    epsilon_t: float

    def __post_init__(self):
        if not self.beta_t > 0:
            raise DomainError(f"beta_t must be positive, got {self.beta_t!r}")
        if not 0.0 < self.epsilon_t < 1.0:
            raise DomainError(
                f"epsilon_t must lie strictly in (0, 1), got {self.epsilon_t!r}"
            )


@dataclass(frozen=True)
class DeploymentRequirement:
    """Solver output: minimum collector intensity, optionally with power.

    ``kind`` states how strong the bound is; the exact (necessary and
    sufficient) kind only arises on the interference-limited Rayleigh path.
    """

    lambda_c_min: float
    kind: str
    tx_power: float | None = None
    design_c: float | None = None

    def __post_init__(self):
        if not self.lambda_c_min > 0:
            raise DomainError("lambda_c_min must be positive")
        if self.kind not in (KIND_NECESSARY_AND_SUFFICIENT, KIND_SUFFICIENT):
            raise DomainError(f"unknown requirement kind {self.kind!r}")


def required_lambda_c_sir(
    lambda_s: float, alpha: float, target: DesignTarget
) -> DeploymentRequirement:
    """Minimum collector intensity, interference-limited Rayleigh fading.

    Exact: deploying precisely this intensity yields an outage of exactly
    ``target.epsilon_t`` at ``target.beta_t``.
    """
    if not lambda_s > 0:
        raise DomainError("lambda_s must be positive")
    eps = target.epsilon_t
    lc = (
        (1.0 - eps)
        / eps
        * specialfn.c_factor(1.0, alpha)
        * target.beta_t ** (2.0 / alpha)
        * lambda_s
    )
    return DeploymentRequirement(lambda_c_min=lc, kind=KIND_NECESSARY_AND_SUFFICIENT)


def required_lambda_c_sinr(
    lambda_s: float, sigma_tilde_sq: float, target: DesignTarget
) -> DeploymentRequirement:
    """Sufficient collector intensity for Rayleigh fading with noise, alpha = 4.

    Derived from a lower bound on the complementary error function; the
    resulting outage never exceeds the target and the slack vanishes with
    the normalized noise.  At zero noise it coincides with the exact
    interference-limited bound for alpha = 4.
    """
    if not lambda_s > 0:
        raise DomainError("lambda_s must be positive")
    if sigma_tilde_sq < 0:
        raise DomainError("sigma_tilde_sq must be nonnegative")
    eps = target.epsilon_t
    root = math.sqrt(
        1.0 + 8.0 * eps * (1.0 - eps) * sigma_tilde_sq / (K_ALPHA4 * lambda_s) ** 2
    )
    lc = (
        K_ALPHA4
        * math.sqrt(target.beta_t)
        / (2.0 * math.pi * eps)
        * ((1.0 - 2.0 * eps) + root)
        * lambda_s
    )
    return DeploymentRequirement(lambda_c_min=lc, kind=KIND_SUFFICIENT)


def design_tx_power(lambda_s: float, noise_power: float, c: float = 0.1) -> float:
    """Transmit power from the noise-decoupling rule P = c * 8*sigma^2 / (pi^4 * lambda_s^2).

    ``c`` is a design constant in (0, 1).  Note that the rule as stated
    leaves the noise figure of merit at 1/c rather than c; see
    :func:`noise_figure_of_merit`, which reports the achieved value so the
    caller can judge the residual noise impact.
    """
    if not 0.0 < c < 1.0:
        raise DomainError(f"design constant c must lie in (0, 1), got {c!r}")
    if not lambda_s > 0:
        raise DomainError("lambda_s must be positive")
    if not noise_power > 0:
        raise DomainError("noise_power must be positive")
    return c * 8.0 * noise_power / (math.pi**4 * lambda_s**2)


def noise_figure_of_merit(lambda_s: float, noise_power: float, tx_power: float) -> float:
    """Noise-neglect figure of merit 8 * (sigma^2/P) / (pi^2 * lambda_s)^2.

    Values much below 1 mean the noise term in the sufficient density bound
    is negligible and the interference-limited design applies as-is.
    """
    if not lambda_s > 0:
        raise DomainError("lambda_s must be positive")
    if not tx_power > 0:
        raise DomainError("tx_power must be positive")
    if noise_power < 0:
        raise DomainError("noise_power must be nonnegative")
    return 8.0 * (noise_power / tx_power) / (math.pi**2 * lambda_s) ** 2


def plan_deployment(
    lambda_s: float,
    noise_power: float,
    target: DesignTarget,
    alpha: float = 4.0,
    c: float = 0.1,
) -> DeploymentRequirement:
    """Two-step deployment plan: pick the power first, then the density.

    The transmit power follows :func:`design_tx_power`; the collector
    intensity then follows the interference-limited rule, which is nearly
    tight once the designed power suppresses the noise.  Because the noise
    is small but nonzero, the result is reported as a sufficient-style
    recommendation rather than an exact bound.
    """
    tx_power = design_tx_power(lambda_s, noise_power, c)
    base = required_lambda_c_sir(lambda_s, alpha, target)
    return DeploymentRequirement(
        lambda_c_min=base.lambda_c_min,
        kind=KIND_SUFFICIENT,
        tx_power=tx_power,
        design_c=c,
    )


def outage_upper_bound_alpha4(
    lambda_s: float, lambda_c: float, sigma_tilde_sq: float, beta_t: float
) -> float:
    """Outage bound implied by the sufficient density condition at alpha = 4.

    This is the exact inverse of :func:`required_lambda_c_sinr`: plugging
    the returned value back as the target reproduces ``lambda_c``.  The true
    outage never exceeds it.
    """
    if not lambda_s > 0 or not lambda_c > 0:
        raise DomainError("intensities must be positive")
    if sigma_tilde_sq < 0:
        raise DomainError("sigma_tilde_sq must be nonnegative")
    if not beta_t > 0:
        raise DomainError("beta_t must be positive")
    a = (math.pi * lambda_c) ** 2
    b = math.pi * lambda_c * K_ALPHA4 * math.sqrt(beta_t) * lambda_s
    c0 = K_ALPHA4**2 * beta_t * lambda_s**2 + 2.0 * beta_t * sigma_tilde_sq
    return (b + c0) / (a + 2.0 * b + c0)


def channel_density_ratio(outage_rayleigh: float, outage_other: float) -> float:
    """Equivalent-deployment density ratio between two channel models.

    Both arguments are outage probabilities observed (or computed) under
    the same deployment, the first for the Rayleigh reference channel and
    the second for the channel under examination.  A ratio above 1 means
    the examined channel achieves the same outage with fewer collectors
    than Rayleigh would need.
    """
    for name, eps in (("outage_rayleigh", outage_rayleigh), ("outage_other", outage_other)):
        if not 0.0 < eps < 1.0:
            raise DomainError(f"{name} must lie strictly in (0, 1), got {eps!r}")
    return (1.0 / outage_other - 1.0) / (1.0 / outage_rayleigh - 1.0)
