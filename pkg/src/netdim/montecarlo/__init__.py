"""Ground-truth Monte Carlo simulator for the random-deployment link model.

Each trial realizes one typical link: the serving distance is drawn from
the nearest-collector law (or, in full-geometry mode, from an explicit
random collector field), the interferer field is a Poisson scatter on a
disc around the receiver, fading gains are unit-mean with integer order,
and the trial reports the resulting SINR.

Two interchangeable kernels exist: a JIT-compiled per-trial loop and a
vectorized pure-numpy fallback.  Selection is automatic, or forced via the
NETPLAN_BACKEND environment variable (``auto``, ``numba`` or ``numpy``).
NETPLAN_THREADS caps the JIT kernel's parallelism (0 or unset = auto).
Within a backend, results are bit-for-bit reproducible from the seed
regardless of chunking or thread count; across backends they agree to
floating-point rounding (the integer draw streams are identical, scalar
and vectorized transcendentals may differ in the last ulp).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, NetdimError
from ..params import CcdfCurve, SystemParams
from . import _numpy_backend
from ._rng import LANE_SERVING, lane_key, seed_key, trial_keys, uniforms
from ._tables import lookup_counts, poisson_table

__all__ = [
    "SimConfig",
    "OutageEstimate",
    "auto_window_radius",
    "available_backends",
    "resolve_backend",
    "sample_sinr",
    "sample_interference",
    "sample_trial",
    "estimate_outage",
    "empirical_ccdf",
    "sample_nearest_distances",
    "deployment_snapshot",
]

BACKEND_ENV = "NETPLAN_BACKEND"
THREADS_ENV = "NETPLAN_THREADS"

# Window sizing: the mean interference truncated away beyond the window
# must stay below _TAIL_FRACTION of the median single nearest-interferer
# power, the window keeps at least _FLOOR_MEDIANS median nearest-interferer
# distances, and the expected in-window count is capped to bound the cost
# per trial (relevant for path-loss exponents near 2, where the far field
# decays slowly).
_TAIL_FRACTION = 0.01
_FLOOR_MEDIANS = 4.0
_MAX_EXPECTED_INTERFERERS = 2000.0

# Full-geometry collector window: probability of an empty window.
_COLLECTOR_MISS_PROB = 1e-12


@dataclass(frozen=True)
class SimConfig:
    """Simulation run description.

    ``window_radius`` of None selects the automatic rule; ``antithetic``
    pairs consecutive trials on a shared stream with reflected uniforms;
    ``no_fading`` freezes all channel gains at 1 (the infinite-order
    limit, which unit-mean gamma sampling cannot represent);
    ``full_geometry`` draws an explicit collector field instead of
    sampling the nearest-collector distance law directly.
    """

    params: SystemParams
    trials: int = 100_000
    window_radius: float | None = None
    seed: int = 42
    antithetic: bool = False
    no_fading: bool = False
    full_geometry: bool = False

    def __post_init__(self):
        if not (isinstance(self.trials, (int, np.integer)) and self.trials >= 1):
            raise DomainError("trials must be a positive integer")
        if self.window_radius is not None and not self.window_radius > 0:
            raise DomainError("window_radius must be positive when given")
        if not (isinstance(self.seed, (int, np.integer)) and 0 <= self.seed < 2**64):
            raise DomainError("seed must be an unsigned 64-bit integer")

    @property
    def resolved_window_radius(self) -> float:
        if self.window_radius is not None:
            return float(self.window_radius)
        return auto_window_radius(self.params)


@dataclass(frozen=True)
class OutageEstimate:
    """Monte Carlo outage probability with a 95% normal-approximation CI."""

    threshold_beta: float
    outage: float
    ci_halfwidth_95: float
    trials: int
    seed: int


def auto_window_radius(params: SystemParams) -> float:
    """Interferer window radius from the truncation rule in the module doc."""
    lam = params.lambda_s
    if lam <= 0.0:
        return 0.0
    alpha = params.alpha
    d_med = math.sqrt(math.log(2.0) / (math.pi * lam))
    r_tail = (
        2.0 * math.pi * lam * d_med**alpha / ((alpha - 2.0) * _TAIL_FRACTION)
    ) ** (1.0 / (alpha - 2.0))
    radius = max(r_tail, _FLOOR_MEDIANS * d_med)
    r_cap = math.sqrt(_MAX_EXPECTED_INTERFERERS / (math.pi * lam))
    return min(radius, r_cap)


def available_backends() -> tuple[str, ...]:
    try:
        from . import _numba_backend  # noqa: F401

        return ("numba", "numpy")
    except Exception:
        return ("numpy",)


def resolve_backend(name: str | None = None) -> str:
    """Resolve a backend name, falling back to the NETPLAN_BACKEND env var."""
    name = (name or os.environ.get(BACKEND_ENV, "auto")).lower()
    if name not in ("auto", "numba", "numpy"):
        raise DomainError(f"unknown backend {name!r}; use auto, numba or numpy")
    if name == "numpy":
        return "numpy"
    try:
        from . import _numba_backend  # noqa: F401

        return "numba"
    except Exception as exc:
        if name == "numba":
            raise NetdimError(f"numba backend requested but unavailable: {exc}")
        return "numpy"


def _apply_thread_cap():
    cap = os.environ.get(THREADS_ENV, "").strip()
    if not cap:
        return
    try:
        n = int(cap)
    except ValueError:
        raise DomainError(f"{THREADS_ENV} must be an integer, got {cap!r}") from None
    if n > 0:
        import numba

        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


def _kernel_args(config: SimConfig) -> dict:
    p = config.params
    radius = config.resolved_window_radius
    mu = p.lambda_s * math.pi * radius * radius
    k_lo, cum = poisson_table(mu)
    if config.full_geometry:
        collector_radius = math.sqrt(
            math.log(1.0 / _COLLECTOR_MISS_PROB) / (math.pi * p.lambda_c)
        )
        mu_c = p.lambda_c * math.pi * collector_radius**2
        k_lo_c, cum_c = poisson_table(mu_c)
    else:
        collector_radius = 0.0
        k_lo_c, cum_c = 0, np.ones(1)
    return dict(
        k0=seed_key(config.seed),
        antithetic=config.antithetic,
        lambda_c=p.lambda_c,
        alpha=p.alpha,
        sigma_tilde_sq=p.sigma_tilde_sq,
        m_s=p.channel.m_s,
        m_i=p.channel.m_i,
        no_fading=config.no_fading,
        radius=radius,
        mu=mu,
        k_lo=k_lo,
        cum=cum,
        full_geometry=config.full_geometry,
        collector_radius=collector_radius,
        k_lo_c=k_lo_c,
        cum_c=cum_c,
    )


def _simulate(
    config: SimConfig, backend: str | None = None, t_start: int = 0, n: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    name = resolve_backend(backend)
    args = _kernel_args(config)
    n = config.trials if n is None else n
    if name == "numba":
        from . import _numba_backend

        _apply_thread_cap()
        return _numba_backend.run(n, t_start, **args)
    return _numpy_backend.run(n, t_start, **args)


def sample_sinr(config: SimConfig, backend: str | None = None) -> np.ndarray:
    """SINR realizations (linear scale) for all trials of the config."""
    return _simulate(config, backend)[0]


def sample_interference(config: SimConfig, backend: str | None = None) -> np.ndarray:
    """Normalized aggregate interference realizations for all trials."""
    return _simulate(config, backend)[1]


def sample_trial(config: SimConfig, trial_index: int, backend: str | None = None) -> float:
    """Single-trial SINR; equals element ``trial_index`` of the batch run."""
    if not 0 <= trial_index < config.trials:
        raise DomainError("trial_index out of range")
    sinr, _ = _simulate(config, backend, t_start=trial_index, n=1)
    return float(sinr[0])


def estimate_outage(
    config: SimConfig, beta_t: float, backend: str | None = None
) -> OutageEstimate:
    """Monte Carlo estimate of Pr{SINR < beta_t}."""
    if not beta_t > 0:
        raise DomainError("beta_t must be positive")
    sinr = sample_sinr(config, backend)
    return _outage_from_samples(sinr, beta_t, config)


def _outage_from_samples(sinr: np.ndarray, beta_t: float, config: SimConfig) -> OutageEstimate:
    n = sinr.size
    p = np.count_nonzero(sinr < beta_t) / n
    ci = 1.96 * math.sqrt(p * (1.0 - p) / n)
    return OutageEstimate(
        threshold_beta=float(beta_t),
        outage=p,
        ci_halfwidth_95=ci,
        trials=n,
        seed=config.seed,
    )


def empirical_ccdf(config: SimConfig, thresholds, backend: str | None = None) -> CcdfCurve:
    """Empirical CCDF over a threshold grid, from one shared sample set."""
    thresholds = np.asarray(thresholds, dtype=np.float64)
    sinr = np.sort(sample_sinr(config, backend))
    n = sinr.size
    ccdf = (n - np.searchsorted(sinr, thresholds, side="right")) / n
    return CcdfCurve(thresholds=thresholds, ccdf=ccdf, provenance="simulation")


def sample_nearest_distances(
    lambda_c: float, n: int, seed: int = 0, full_geometry: bool = False
) -> np.ndarray:
    """Nearest-collector distances, by inverse transform or full geometry.

    Uses the same serving-geometry draw lane as the simulation kernels.
    """
    if not lambda_c > 0:
        raise DomainError("lambda_c must be positive")
    k0 = seed_key(seed)
    kt = trial_keys(k0, np.arange(n, dtype=np.int64))
    k_serv = lane_key(kt, LANE_SERVING)
    if not full_geometry:
        return np.sqrt(-np.log(uniforms(k_serv, 0)) / (math.pi * lambda_c))
    radius = math.sqrt(math.log(1.0 / _COLLECTOR_MISS_PROB) / (math.pi * lambda_c))
    k_lo_c, cum_c = poisson_table(lambda_c * math.pi * radius**2)
    counts = lookup_counts(k_lo_c, cum_c, uniforms(k_serv, 0))
    seg = np.repeat(np.arange(n), counts)
    within = np.arange(seg.size) - np.repeat(
        np.concatenate(([0], np.cumsum(counts)[:-1])), counts
    )
    u = uniforms(k_serv[seg], within + 1)
    u_min = _numpy_backend._segment_min(u, counts, 1.0)
    return np.where(counts > 0, radius * np.sqrt(u_min), radius)


def deployment_snapshot(
    params: SystemParams, window_radius: float, seed: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """One realization of both point fields on a disc, for visualization.

    Returns ``(collectors, sensors)`` as (n, 2) coordinate arrays; sensors
    are drawn at the full deployed intensity, not the thinned one.
    """
    if not window_radius > 0:
        raise DomainError("window_radius must be positive")

    def field(intensity: float, lane: int) -> np.ndarray:
        kt = trial_keys(seed_key(seed), np.asarray([0], dtype=np.int64))
        kl = lane_key(kt, lane)[0]
        k_lo, cum = poisson_table(intensity * math.pi * window_radius**2)
        count = int(lookup_counts(k_lo, cum, uniforms(kl, [0]))[0])
        idx = np.arange(count)
        r = window_radius * np.sqrt(uniforms(kl, 1 + 2 * idx))
        theta = 2.0 * math.pi * uniforms(kl, 2 + 2 * idx)
        return np.column_stack([r * np.cos(theta), r * np.sin(theta)])

    return field(params.lambda_c, 0), field(params.lambda_s_total, 3)
