"""Poisson count sampling by table inversion.

Both backends share the same cumulative table and the same search
semantics (first index whose cumulative weight reaches the uniform), so
their counts agree bit for bit.  The table is built outward from the mode
to stay finite for means far beyond the underflow point of exp(-mu).
"""

from __future__ import annotations

import math

import numpy as np

#: Probability mass left outside the tabulated range is below ~1e-20 with
#: this span multiplier.
_SPAN_SIGMAS = 12.0
_SPAN_PAD = 30


def poisson_table(mu: float) -> tuple[int, np.ndarray]:
    """Cumulative Poisson table for mean ``mu``.

    Returns ``(k_lo, cum)`` where ``cum`` is the normalized cumulative mass
    of counts ``k_lo, k_lo + 1, ...``.  A draw maps a uniform ``u`` to
    ``k_lo + searchsorted(cum, u, side="left")``.
    """
    if mu <= 0.0:
        return 0, np.ones(1)
    mode = int(mu)
    span = int(_SPAN_SIGMAS * math.sqrt(mu)) + _SPAN_PAD
    k_lo = max(0, mode - span)
    k_hi = mode + span
    n = k_hi - k_lo + 1
    q = np.empty(n)
    anchor = mode - k_lo
    q[anchor] = 1.0
    for i in range(anchor, 0, -1):
        q[i - 1] = q[i] * ((k_lo + i) / mu)
    for i in range(anchor, n - 1):
        q[i + 1] = q[i] * (mu / (k_lo + i + 1))
    cum = np.cumsum(q)
    cum /= cum[-1]
    return k_lo, cum


def lookup_counts(k_lo: int, cum: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Vectorized inverse lookup matching the scalar search in the kernels."""
    idx = np.searchsorted(cum, u, side="left")
    idx = np.minimum(idx, cum.size - 1)
    return (k_lo + idx).astype(np.int64)
