"""JIT-compiled per-trial simulation kernel.

Importing this module requires numba; the package falls back to the
vectorized numpy kernel when it is unavailable or when NETPLAN_BACKEND
selects it.  Stream keys, draw schedule and within-trial accumulation
order match the numpy kernel exactly.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit, prange

from ._rng import GOLDEN, MIX_M1, MIX_M2, U64

_ONE = U64(1)
_INV_2_53 = 2.0**-53

# Lane offsets baked in as uint64 increments (lane + 1).
_LANE_SERVING = U64(1)
_LANE_SIGNAL_FADE = U64(2)
_LANE_COUNT = U64(3)
_LANE_INTERFERER = U64(4)


@njit(cache=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> U64(30))) * MIX_M1
    z = (z ^ (z >> U64(27))) * MIX_M2
    return z ^ (z >> U64(31))


@njit(cache=True, inline="always")
def _unit(kl, idx, flip):
    h = _mix64(kl + GOLDEN * (U64(idx) + _ONE))
    u = (np.float64(h >> U64(11)) + 0.5) * _INV_2_53
    if flip:
        return 1.0 - u
    return u


@njit(cache=True, inline="always")
def _count_lookup(cum, k_lo, u):
    lo = 0
    hi = cum.size
    while lo < hi:
        mid = (lo + hi) // 2
        if cum[mid] < u:
            lo = mid + 1
        else:
            hi = mid
    if lo > cum.size - 1:
        lo = cum.size - 1
    return k_lo + lo


@njit(cache=True, parallel=True)
def run_kernel(
    n_trials,
    t_start,
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
    sinr_out,
    intf_out,
):
    pi_lc = np.pi * lambda_c
    half_alpha = alpha / 2.0
    r_pow = radius ** (-alpha) if radius > 0.0 else 0.0
    block = 1 if no_fading else 1 + m_i
    for i in prange(n_trials):
        t = t_start + i
        if antithetic:
            stream = t >> 1
            flip = (t & 1) == 1
        else:
            stream = t
            flip = False
        kt = _mix64(k0 + GOLDEN * (U64(stream) + _ONE))
        k_serv = _mix64(kt + GOLDEN * _LANE_SERVING)

        if full_geometry:
            kc = _count_lookup(cum_c, k_lo_c, _unit(k_serv, 0, flip))
            if kc > 0:
                u_min = 1.0
                for c in range(kc):
                    u = _unit(k_serv, c + 1, flip)
                    if u < u_min:
                        u_min = u
                r = collector_radius * math.sqrt(u_min)
            else:
                r = collector_radius
        else:
            r = math.sqrt(-math.log(_unit(k_serv, 0, flip)) / pi_lc)

        if no_fading:
            g_s = 1.0
        else:
            k_fade = _mix64(kt + GOLDEN * _LANE_SIGNAL_FADE)
            acc = 0.0
            for f in range(m_s):
                acc += math.log(_unit(k_fade, f, flip))
            g_s = -acc / m_s

        if mu <= 0.0:
            count = 0
        else:
            k_count = _mix64(kt + GOLDEN * _LANE_COUNT)
            count = _count_lookup(cum, k_lo, _unit(k_count, 0, flip))

        interference = 0.0
        if count > 0:
            k_intf = _mix64(kt + GOLDEN * _LANE_INTERFERER)
            for j in range(count):
                base = j * block
                power = r_pow * _unit(k_intf, base, flip) ** (-half_alpha)
                if no_fading:
                    gain = 1.0
                else:
                    acc = 0.0
                    for f in range(m_i):
                        acc += math.log(_unit(k_intf, base + 1 + f, flip))
                    gain = -acc / m_i
                interference += power * gain

        signal = r ** (-alpha) * g_s
        denom = interference + sigma_tilde_sq
        if denom > 0.0:
            sinr_out[i] = signal / denom
        else:
            sinr_out[i] = np.inf
        intf_out[i] = interference


def run(
    n_trials,
    t_start,
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
    sinr = np.empty(n_trials)
    intf = np.empty(n_trials)
    run_kernel(
        np.int64(n_trials),
        np.int64(t_start),
        U64(k0),
        antithetic,
        float(lambda_c),
        float(alpha),
        float(sigma_tilde_sq),
        np.int64(m_s),
        np.int64(m_i),
        no_fading,
        float(radius),
        float(mu),
        np.int64(k_lo),
        cum,
        full_geometry,
        float(collector_radius),
        np.int64(k_lo_c),
        cum_c,
        sinr,
        intf,
    )
    return sinr, intf
