"""Vectorized pure-numpy simulation kernel.

Mirrors the numba kernel draw for draw: identical stream keys, identical
draw schedule, identical accumulation order within a trial.  Trials are
processed in chunks to bound the size of the flattened interferer arrays;
chunking does not change any result.
"""

from __future__ import annotations

import numpy as np

from ._rng import (
    GOLDEN,
    LANE_COUNT,
    LANE_INTERFERER,
    LANE_SERVING,
    LANE_SIGNAL_FADE,
    U64,
    lane_key,
    trial_keys,
    uniforms,
)
from ._tables import lookup_counts

_FLAT_BUDGET = 4_000_000
_MAX_CHUNK = 65_536


def _flip(u: np.ndarray, flip_mask) -> np.ndarray:
    if flip_mask is None:
        return u
    return np.where(flip_mask, 1.0 - u, u)


def _segment_min(flat: np.ndarray, counts: np.ndarray, fill: float) -> np.ndarray:
    """Per-segment minimum of a flat array split by ``counts``; empty -> fill."""
    out = np.full(counts.size, fill)
    nonempty = counts > 0
    if flat.size:
        sizes = counts[nonempty]
        starts = np.concatenate(([0], np.cumsum(sizes)[:-1]))
        out[nonempty] = np.minimum.reduceat(flat, starts)
    return out


def run(
    n_trials: int,
    t_start: int,
    k0: np.uint64,
    antithetic: bool,
    lambda_c: float,
    alpha: float,
    sigma_tilde_sq: float,
    m_s: int,
    m_i: int,
    no_fading: bool,
    radius: float,
    mu: float,
    k_lo: int,
    cum: np.ndarray,
    full_geometry: bool,
    collector_radius: float,
    k_lo_c: int,
    cum_c: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    sinr = np.empty(n_trials)
    intf = np.empty(n_trials)
    per_trial = max(mu, 1.0) * (1 + (0 if no_fading else m_i))
    chunk = int(min(_MAX_CHUNK, max(1.0, _FLAT_BUDGET / per_trial)))
    for lo in range(0, n_trials, chunk):
        hi = min(lo + chunk, n_trials)
        _run_chunk(
            np.arange(t_start + lo, t_start + hi, dtype=np.int64),
            sinr[lo:hi],
            intf[lo:hi],
            k0,
            antithetic,
            lambda_c,
            alpha,
            sigma_tilde_sq,
            m_s,
            m_i,
            no_fading,
            radius,
            mu,
            k_lo,
            cum,
            full_geometry,
            collector_radius,
            k_lo_c,
            cum_c,
        )
    return sinr, intf


def _run_chunk(
    trials,
    sinr_out,
    intf_out,
    k0,
    antithetic,
    lambda_c,
    alpha,
    sigma_tilde_sq,
    m_s,
    m_i,
    no_fading,
    radius,
    mu,
    k_lo,
    cum,
    full_geometry,
    collector_radius,
    k_lo_c,
    cum_c,
):
    n = trials.size
    with np.errstate(over="ignore", divide="ignore"):
        if antithetic:
            streams = trials >> 1
            flip = (trials & 1).astype(bool)
        else:
            streams = trials
            flip = None
        kt = trial_keys(k0, streams)
        k_serv = lane_key(kt, LANE_SERVING)
        pi_lc = np.pi * lambda_c

        if full_geometry:
            u_count = _flip(uniforms(k_serv, 0), flip)
            kc = lookup_counts(k_lo_c, cum_c, u_count)
            seg = np.repeat(np.arange(n), kc)
            within = np.arange(seg.size) - np.repeat(
                np.concatenate(([0], np.cumsum(kc)[:-1])), kc
            )
            u_radii = _flip(
                uniforms(k_serv[seg], within + 1), None if flip is None else flip[seg]
            )
            u_min = _segment_min(u_radii, kc, 1.0)
            r = np.where(kc > 0, collector_radius * np.sqrt(u_min), collector_radius)
        else:
            u_serv = _flip(uniforms(k_serv, 0), flip)
            r = np.sqrt(-np.log(u_serv) / pi_lc)

        if no_fading:
            g_s = np.ones(n)
        else:
            k_fade = lane_key(kt, LANE_SIGNAL_FADE)
            acc = np.zeros(n)
            for f in range(m_s):
                acc += np.log(_flip(uniforms(k_fade, f), flip))
            g_s = -acc / m_s

        if mu <= 0.0:
            counts = np.zeros(n, dtype=np.int64)
        else:
            k_count = lane_key(kt, LANE_COUNT)
            u_count = _flip(uniforms(k_count, 0), flip)
            counts = lookup_counts(k_lo, cum, u_count)

        total = int(counts.sum())
        interference = np.zeros(n)
        if total:
            block = 1 + (0 if no_fading else m_i)
            k_intf = lane_key(kt, LANE_INTERFERER)
            seg = np.repeat(np.arange(n), counts)
            j = np.arange(total) - np.repeat(
                np.concatenate(([0], np.cumsum(counts)[:-1])), counts
            )
            seg_flip = None if flip is None else flip[seg]
            base = j * block
            u_pos = _flip(uniforms(k_intf[seg], base), seg_flip)
            r_pow = radius ** (-alpha)
            power = r_pow * u_pos ** (-alpha / 2.0)
            if no_fading:
                gain = 1.0
            else:
                acc = np.zeros(total)
                for f in range(m_i):
                    acc += np.log(_flip(uniforms(k_intf[seg], base + 1 + f), seg_flip))
                gain = -acc / m_i
            interference = np.bincount(seg, weights=power * gain, minlength=n)

        signal = r ** (-alpha) * g_s
        denom = interference + sigma_tilde_sq
        sinr_out[:] = np.where(denom > 0.0, signal / denom, np.inf)
        intf_out[:] = interference
