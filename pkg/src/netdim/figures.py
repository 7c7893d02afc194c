"""Data grids behind the numeric-results figures.

Each builder returns ``(columns, rows, config_echo)``; the CLI wraps them
in a manifest and writes CSV.  The shared scenario is a deployed sensor
intensity of 1e-2 per m^2 with activity 1e-4 on a single resource, so the
effective interferer intensity is 1e-6 per m^2.  Sweep grids that the
source figures do not tabulate (intensity-ratio ranges, power ranges) are
package conventions, chosen log-spaced over the regions where the curves
bend; they are echoed in the manifest.
"""

from __future__ import annotations

import math

import numpy as np

from . import analytic, design, montecarlo
from .errors import DomainError
from .params import ChannelModel, SystemParams

__all__ = ["FIGURES", "build_figure"]

_LAMBDA_S_TOTAL = 1e-2
_RHO = 1e-4
_BETA_DB_GRID = np.arange(-10.0, 20.0 + 0.25, 0.5)
_RATIO_GRID = np.geomspace(2.0, 50.0, 25)
_BETA_T = 1.0  # 0 dB

_CDF_COLUMNS = [
    "kind",
    "lc_over_ls",
    "p_over_sigma2_db",
    "beta_db",
    "ccdf",
    "outage",
    "ci_halfwidth_95",
    "provenance",
]


def _params(lc_over_ls: float, alpha: float = 4.0, m: int = 1) -> SystemParams:
    return SystemParams.from_ratio(
        lc_over_ls,
        lambda_s_total=_LAMBDA_S_TOTAL,
        rho=_RHO,
        alpha=alpha,
        channel=ChannelModel(m, m),
    )


def _betas() -> np.ndarray:
    return 10.0 ** (_BETA_DB_GRID / 10.0)


def _analytic_rows(params, tag_ratio, tag_db, method="auto"):
    curve = analytic.ccdf_curve(params, _betas(), method=method)
    return [
        (
            "analytic",
            tag_ratio,
            tag_db,
            float(db),
            float(c),
            float(1.0 - c),
            None,
            curve.provenance,
        )
        for db, c in zip(_BETA_DB_GRID, curve.ccdf)
    ]


def _simulated_rows(params, tag_ratio, tag_db, trials, seed, backend):
    config = montecarlo.SimConfig(params=params, trials=trials, seed=seed)
    curve = montecarlo.empirical_ccdf(config, _betas(), backend=backend)
    n = config.trials
    rows = []
    for db, c in zip(_BETA_DB_GRID, curve.ccdf):
        p = 1.0 - c
        ci = 1.96 * math.sqrt(p * (1.0 - p) / n)
        rows.append(
            ("simulation", tag_ratio, tag_db, float(db), float(c), float(p), ci, curve.provenance)
        )
    return rows


def fig3(trials, seed, backend):
    """SINR distribution, Rayleigh fading, alpha 4: analytic vs simulated."""
    rows = []
    for ratio in (10.0, 20.0):
        for db in (100.0, 120.0):
            p = _params(ratio).with_noise_db(db)
            rows += _analytic_rows(p, ratio, db)
            rows += _simulated_rows(p, ratio, db, trials, seed, backend)
        p0 = _params(ratio)
        rows += _analytic_rows(p0, ratio, None)
        rows += _simulated_rows(p0, ratio, None, trials, seed, backend)
    return _CDF_COLUMNS, rows, {"lc_over_ls": [10, 20], "p_over_sigma2_db": [100, 120, None]}


def fig4(trials, seed, backend):
    """Outage vs collector density with noise: exact curve and density bound."""
    columns = ["kind", "p_over_sigma2_db", "lc_over_ls", "outage"]
    rows = []
    lam_s = _LAMBDA_S_TOTAL * _RHO
    for db in (100.0, 110.0, 120.0):
        st2 = 10.0 ** (-db / 10.0)
        for ratio in _RATIO_GRID:
            p = _params(ratio).with_noise_db(db)
            exact = 1.0 - analytic.sinr_ccdf_rayleigh_alpha4(p, _BETA_T)
            bound = design.outage_upper_bound_alpha4(lam_s, p.lambda_c, st2, _BETA_T)
            rows.append(("exact", db, float(ratio), exact))
            rows.append(("bound", db, float(ratio), bound))
    for ratio in _RATIO_GRID:
        rows.append(
            ("noiseless", None, float(ratio), 1.0 - analytic.sir_ccdf_rayleigh(_params(ratio), _BETA_T))
        )
    return columns, rows, {"p_over_sigma2_db": [100, 110, 120, None], "beta_t_db": 0.0}


def fig5(trials, seed, backend):
    """Outage vs transmit power for several sensor intensities.

    Noise power is fixed at -110 dBm; the marked points are the powers
    chosen by the design rule with c = 0.1 and c = 0.01.
    """
    columns = ["kind", "lambda_s", "tx_power_dbm", "outage", "design_c"]
    noise_w = 1e-3 * 10.0 ** (-110.0 / 10.0)
    ratio = 10.0
    rows = []
    power_grid_dbm = np.arange(-40.0, 40.0 + 1.0, 2.0)

    def outage_at(lam_s, power_w):
        p = SystemParams(
            lambda_s_total=lam_s,
            rho=1.0,
            lambda_c=ratio * lam_s,
            alpha=4.0,
            tx_power=power_w,
            noise_power=noise_w,
        )
        return 1.0 - analytic.sinr_ccdf_rayleigh_alpha4(p, _BETA_T)

    for lam_s in (1e-7, 1e-6, 1e-5):
        for dbm in power_grid_dbm:
            rows.append(("curve", lam_s, float(dbm), outage_at(lam_s, 1e-3 * 10 ** (dbm / 10.0)), None))
        for c in (0.1, 0.01):
            p_design = design.design_tx_power(lam_s, noise_w, c)
            rows.append(
                (
                    "design_point",
                    lam_s,
                    10.0 * math.log10(p_design * 1e3),
                    outage_at(lam_s, p_design),
                    c,
                )
            )
        floor = 1.0 - analytic.sir_ccdf_rayleigh(
            SystemParams(lambda_s_total=lam_s, rho=1.0, lambda_c=ratio * lam_s, alpha=4.0),
            _BETA_T,
        )
        rows.append(("noiseless_floor", lam_s, None, floor, None))
    return columns, rows, {"noise_dbm": -110.0, "lc_over_ls": ratio, "beta_t_db": 0.0}


def fig6(trials, seed, backend):
    """SINR distribution across path-loss exponents, Rayleigh fading."""
    rows = []
    db = 100.0
    for alpha in (3.0, 4.0, 5.0):
        noisy = _params(10.0, alpha=alpha).with_noise_db(db)
        for r in _analytic_rows(noisy, 10.0, db):
            rows.append((alpha,) + r)
        for r in _simulated_rows(noisy, 10.0, db, trials, seed, backend):
            rows.append((alpha,) + r)
        for r in _analytic_rows(_params(10.0, alpha=alpha), 10.0, None):
            rows.append((alpha,) + r)
    return (
        ["alpha"] + _CDF_COLUMNS,
        rows,
        {"alpha": [3, 4, 5], "p_over_sigma2_db": [db, None], "lc_over_ls": 10},
    )


def fig7(trials, seed, backend):
    """SINR distribution across fading orders at alpha 4."""
    rows = []
    for m in (1, 2, 3):
        noiseless = _params(10.0, m=m)
        for r in _analytic_rows(noiseless, 10.0, None):
            rows.append((m,) + r)
        noisy = _params(10.0, m=m).with_noise_db(120.0)
        for r in _simulated_rows(noisy, 10.0, 120.0, trials, seed, backend):
            rows.append((m,) + r)
    return ["m"] + _CDF_COLUMNS, rows, {"m": [1, 2, 3], "p_over_sigma2_db": [120, None]}


def fig8(trials, seed, backend):
    """Outage vs collector density across fading orders and exponents."""
    columns = ["m", "alpha", "lc_over_ls", "outage"]
    rows = []
    for m in (1, 2, 3):
        for alpha in (3.0, 4.0, 5.0):
            for ratio in _RATIO_GRID:
                p = _params(ratio, alpha=alpha, m=m)
                rows.append((m, alpha, float(ratio), 1.0 - analytic.sir_ccdf_nakagami(p, _BETA_T)))
    return columns, rows, {"m": [1, 2, 3], "alpha": [3, 4, 5], "beta_t_db": 0.0}


def fig9(trials, seed, backend):
    """Equivalent-density ratio of line-of-sight channels vs Rayleigh."""
    columns = ["m", "alpha", "lc_over_ls", "density_ratio"]
    rows = []
    for m in (2, 3):
        for alpha in (3.0, 4.0, 5.0):
            for ratio in _RATIO_GRID:
                p_ray = _params(ratio, alpha=alpha, m=1)
                p_m = _params(ratio, alpha=alpha, m=m)
                eps_o = 1.0 - analytic.sir_ccdf_rayleigh(p_ray, _BETA_T)
                eps_m = 1.0 - analytic.sir_ccdf_nakagami(p_m, _BETA_T)
                rows.append((m, alpha, float(ratio), design.channel_density_ratio(eps_o, eps_m)))
    return columns, rows, {"m": [2, 3], "alpha": [3, 4, 5], "beta_t_db": 0.0}


FIGURES = {
    "fig3": fig3,
    "fig4": fig4,
    "fig5": fig5,
    "fig6": fig6,
    "fig7": fig7,
    "fig8": fig8,
    "fig9": fig9,
}


def build_figure(name: str, trials: int, seed: int, backend: str | None):
    if name not in FIGURES:
        raise DomainError(
            f"unknown figure {name!r}; choose from {', '.join(sorted(FIGURES))} "
            "(the deployment illustration has no quantitative content and is "
            "not emitted)"
        )
    columns, rows, extra = FIGURES[name](trials, seed, backend)
    extra.update(
        lambda_s_total=_LAMBDA_S_TOTAL,
        rho=_RHO,
        n_channels=1,
        trials=trials,
        seed=seed,
        beta_db_grid="[-10, 20] step 0.5" if name in ("fig3", "fig6", "fig7") else None,
        lc_over_ls_grid="geomspace(2, 50, 25)" if name in ("fig4", "fig8", "fig9") else None,
    )
    return columns, rows, extra
