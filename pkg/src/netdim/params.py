"""Scenario description types shared by the analytic and simulation layers.

Units are a single consistent system: intensities in 1/m^2, distances in
meters, powers in watts.  Decibel conversions belong to the CLI boundary,
never to these types.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError, UnsupportedRangeError

__all__ = ["ChannelModel", "SystemParams", "CcdfCurve"]

#: Largest fading order the closed forms are validated for.  Higher orders
#: change the distribution very little in practice, and the alternating
#: coefficient sums start to cancel badly well above this point.
MAX_FADING_ORDER = 8


@dataclass(frozen=True)
class ChannelModel:
    """Integer fading orders of the desired and interfering links.

    Order 1 is Rayleigh fading; larger orders mean a stronger line-of-sight
    component.  Rician parameters can be mapped to an equivalent order via
    m = (K+1)^2 / (2K+1), rounded to an integer by the caller; only integer
    orders are accepted here.
    """

    m_s: int = 1
    m_i: int = 1

    def __post_init__(self):
        for name, m in (("m_s", self.m_s), ("m_i", self.m_i)):
            if not (isinstance(m, (int, np.integer)) and m >= 1):
                raise DomainError(f"{name} must be a positive integer, got {m!r}")
            if m > MAX_FADING_ORDER:
                raise UnsupportedRangeError(
                    f"{name}={m} exceeds the supported fading order "
                    f"{MAX_FADING_ORDER}"
                )

    @property
    def is_rayleigh(self) -> bool:
        return self.m_s == 1 and self.m_i == 1


@dataclass(frozen=True)
class SystemParams:
    """Full scenario description.

    ``lambda_s_total`` is the deployed sensor intensity; the interferer
    field seen by a receiver is thinned by the activity probability ``rho``
    and the number of random-access resources ``n_channels``, giving the
    effective intensity ``lambda_s``.
    """

    lambda_s_total: float
    rho: float
    lambda_c: float
    n_channels: int = 1
    alpha: float = 4.0
    tx_power: float = 1.0
    noise_power: float = 0.0
    channel: ChannelModel = field(default_factory=ChannelModel)

    def __post_init__(self):
        if not self.lambda_s_total > 0:
            raise DomainError("lambda_s_total must be positive")
        if not 0.0 <= self.rho <= 1.0:
            raise DomainError(f"rho must lie in [0, 1], got {self.rho!r}")
        if not (isinstance(self.n_channels, (int, np.integer)) and self.n_channels >= 1):
            raise DomainError("n_channels must be a positive integer")
        if not self.lambda_c > 0:
            raise DomainError("lambda_c must be positive")
        if not self.alpha > 2.0:
            raise DomainError(f"alpha must exceed 2, got {self.alpha!r}")
        if not self.tx_power > 0:
            raise DomainError("tx_power must be positive")
        if self.noise_power < 0:
            raise DomainError("noise_power must be nonnegative")

    @property
    def lambda_s(self) -> float:
        """Effective interferer intensity after thinning."""
        return self.lambda_s_total * self.rho / self.n_channels

    @property
    def sigma_tilde_sq(self) -> float:
        """Noise power normalized by the transmit power."""
        return self.noise_power / self.tx_power

    @property
    def noiseless(self) -> bool:
        return self.noise_power == 0.0

    @classmethod
    def from_ratio(
        cls,
        lc_over_ls: float,
        lambda_s_total: float = 1e-2,
        rho: float = 1e-4,
        n_channels: int = 1,
        **kwargs,
    ) -> "SystemParams":
        """Build params from a collector-to-interferer intensity ratio."""
        lambda_s = lambda_s_total * rho / n_channels
        return cls(
            lambda_s_total=lambda_s_total,
            rho=rho,
            n_channels=n_channels,
            lambda_c=lc_over_ls * lambda_s,
            **kwargs,
        )

    def with_noise_db(self, p_over_sigma2_db: float) -> "SystemParams":
        """Copy with the transmit-to-noise ratio set in dB (tx_power = 1 W)."""
        return replace(
            self, tx_power=1.0, noise_power=10.0 ** (-p_over_sigma2_db / 10.0)
        )


# Tolerance for float jitter when validating probabilities produced by
# adaptive quadrature.
_PROB_SLACK = 1e-8


@dataclass(frozen=True)
class CcdfCurve:
    """Complementary CDF of SIR/SINR sampled over an ascending threshold grid.

    ``provenance`` names the formula or simulation that produced the values.
    """

    thresholds: np.ndarray
    ccdf: np.ndarray
    provenance: str

    def __post_init__(self):
        thresholds = np.asarray(self.thresholds, dtype=np.float64)
        ccdf = np.asarray(self.ccdf, dtype=np.float64)
        if thresholds.ndim != 1 or thresholds.shape != ccdf.shape:
            raise DomainError("thresholds and ccdf must be 1-d arrays of equal length")
        if thresholds.size and not np.all(thresholds > 0):
            raise DomainError("thresholds must be positive (linear scale)")
        if thresholds.size > 1 and not np.all(np.diff(thresholds) > 0):
            raise DomainError("thresholds must be strictly ascending")
        if np.any(ccdf < -_PROB_SLACK) or np.any(ccdf > 1.0 + _PROB_SLACK):
            raise DomainError("ccdf values must lie in [0, 1]")
        if ccdf.size > 1 and np.any(np.diff(ccdf) > _PROB_SLACK):
            raise DomainError("ccdf must be nonincreasing along the threshold grid")
        ccdf = np.clip(ccdf, 0.0, 1.0)
        thresholds.setflags(write=False)
        ccdf.setflags(write=False)
        object.__setattr__(self, "thresholds", thresholds)
        object.__setattr__(self, "ccdf", ccdf)

    @property
    def outage(self) -> np.ndarray:
        """Outage probability per threshold, 1 - ccdf."""
        return 1.0 - self.ccdf

    def __len__(self) -> int:
        return self.thresholds.size
