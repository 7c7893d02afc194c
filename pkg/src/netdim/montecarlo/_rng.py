"""Counter-based RNG contract shared by the simulation backends.

Every uniform variate is a pure function of (seed, trial, lane, index):
the seed is scrambled once, then golden-ratio increments plus a 64-bit
finalizer derive a key per trial and per lane, and each draw hashes its
index under that key.  Trials therefore own fully independent streams and
can be evaluated in any order or degree of parallelism with identical
results.

Lanes separate the draw purposes within a trial so that variable-length
sections (e.g. the interferer field) never shift the indices of the
others:

* lane 0: serving-link geometry,
* lane 1: serving-link fading,
* lane 2: interferer count,
* lane 3: interferer positions and fading.

The hash is the splitmix64 finalizer, applied to key + GOLDEN * (n + 1)
at every level.  Uniforms are mapped to the open interval (0, 1) via
((h >> 11) + 0.5) * 2^-53; the antithetic reflection u -> 1 - u stays in
the open interval and is the same IEEE operation in both backends.
"""

from __future__ import annotations

import numpy as np

U64 = np.uint64

GOLDEN = U64(0x9E3779B97F4A7C15)
SEED_SCRAMBLE = U64(0xD1B54A32D192ED03)
MIX_M1 = U64(0xBF58476D1CE4E5B9)
MIX_M2 = U64(0x94D049BB133111EB)

LANE_SERVING = 0
LANE_SIGNAL_FADE = 1
LANE_COUNT = 2
LANE_INTERFERER = 3

_INV_2_53 = 2.0**-53


def mix64(z):
    """splitmix64 finalizer; accepts uint64 scalars or arrays.

    Wrap-around on multiply is the point, so overflow warnings are
    suppressed (numpy only warns for scalar/0-d operands).
    """
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> U64(30))) * MIX_M1
        z = (z ^ (z >> U64(27))) * MIX_M2
        return z ^ (z >> U64(31))


def seed_key(seed: int) -> np.uint64:
    return np.uint64(mix64(U64(seed) ^ SEED_SCRAMBLE))


def trial_keys(k0, trials) -> np.ndarray:
    """Per-trial stream keys for an array of trial/stream indices."""
    t = np.asarray(trials, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(k0 + GOLDEN * (t + U64(1)))


def lane_key(kt, lane: int):
    with np.errstate(over="ignore"):
        return mix64(np.asarray(kt, dtype=np.uint64) + GOLDEN * U64(lane + 1))


def uniforms(kl, index) -> np.ndarray:
    """Open-interval (0, 1) uniforms for draw indices under a lane key.

    Broadcasts ``kl`` against ``index``.
    """
    kl = np.asarray(kl, dtype=np.uint64)
    idx = np.asarray(index, dtype=np.uint64)
    with np.errstate(over="ignore"):
        h = mix64(kl + GOLDEN * (idx + U64(1)))
    return ((h >> U64(11)).astype(np.float64) + 0.5) * _INV_2_53
