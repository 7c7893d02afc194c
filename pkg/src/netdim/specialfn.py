"""Self-contained special-function kernel.

Provides log-gamma, gamma, the complementary error function in plain and
exponentially scaled form, the interference scaling factor C(m, alpha),
and the combinatorial coefficient table used by the integer-order fading
closed forms.  Everything is scalar double-precision arithmetic with
documented coefficients; no external special-function library is needed
at runtime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "log_gamma",
    "gamma",
    "erfc",
    "erfcx",
    "c_factor",
    "DeltaTable",
    "delta_table",
]

# Lanczos approximation, g = 607/128 with 15 coefficients (Godfrey's set).
# The rational part is accurate to better than 1e-15 relative on the
# positive real axis, which keeps log_gamma below 1e-13 absolute error
# over the working range [0.1, 50].
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0."""
    if not x > 0.0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    s = _LANCZOS_C[0]
    for k in range(1, len(_LANCZOS_C)):
        s += _LANCZOS_C[k] / (x + k - 1.0)
    t = x + _LANCZOS_G - 0.5
    return _HALF_LOG_TWO_PI + (x - 0.5) * math.log(t) - t + math.log(s)


def gamma(x: float) -> float:
    """Gamma function for x > 0 (overflows to inf above ~171.6)."""
    return math.exp(log_gamma(x))


def erfc(x: float) -> float:
    """Plain complementary error function."""
    if x >= 0.0:
        return math.exp(-x * x) * erfcx(x)
    return 2.0 - math.exp(-x * x) * erfcx(-x)


# Crossover between the stable-product branch and the Laplace continued
# fraction.  Below it exp(x^2) stays under e^16 so the direct product of
# exp(x^2) and erfc(x) loses no precision; above it the continued fraction
# converges to double precision within the fixed depth used here.
_ERFCX_CROSSOVER = 4.0
_ERFCX_CF_DEPTH = 60


def erfcx(x: float) -> float:
    """Scaled complementary error function exp(x^2) * erfc(x).

    Stable for arbitrarily large x (no intermediate overflow); for
    x >= 0 the relative error is below 1e-13.
    """
    if x < 0.0:
        # Only reachable through erfc(); overflows for x << -26 as the
        # true value does.
        return 2.0 * math.exp(x * x) - erfcx(-x)
    if x < _ERFCX_CROSSOVER:
        return math.exp(x * x) * math.erfc(x)
    # Laplace continued fraction, evaluated bottom-up:
    # erfcx(x) = 1 / (sqrt(pi) * (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))))
    f = 0.0
    for k in range(_ERFCX_CF_DEPTH, 0, -1):
        f = (0.5 * k) / (x + f)
    return 1.0 / (math.sqrt(math.pi) * (x + f))


def c_factor(m: float, alpha: float) -> float:
    """Interference scaling factor C(m, alpha) for fading order m.

    Defined as m^(-2/alpha) * Gamma(1 - 2/alpha) * Gamma(m + 2/alpha)
    / Gamma(m).  For m = 1 this reduces to the trigonometric form
    2*pi / (alpha * sin(2*pi/alpha)).
    """
    if not m > 0.0:
        raise DomainError(f"fading order must be positive, got {m!r}")
    if not alpha > 2.0:
        raise DomainError(f"path-loss exponent must exceed 2, got {alpha!r}")
    two_over_alpha = 2.0 / alpha
    return math.exp(
        -two_over_alpha * math.log(m)
        + log_gamma(1.0 - two_over_alpha)
        + log_gamma(m + two_over_alpha)
        - log_gamma(m)
    )


@dataclass(frozen=True)
class DeltaTable:
    """Lower-triangular coefficient table for the integer-order SIR sum.

    ``values[k, l]`` holds the coefficient for 0 <= l <= k <= m_s - 1;
    entries above the diagonal are zero.  ``values[0, 0]`` is exactly 1
    and ``values[k, 0]`` vanishes for every k >= 1.
    """

    alpha: float
    values: np.ndarray

    def __post_init__(self):
        self.values.setflags(write=False)

    @property
    def order(self) -> int:
        return self.values.shape[0]


def delta_table(m_s: int, alpha: float) -> DeltaTable:
    """Coefficient table of shape (m_s, m_s) for fading order m_s.

    Entry (k, l) is sum_{j=0..l} (-1)^j * C(l, j) * prod_{i=0..k-1}
    [(2/alpha)*(l-j) - i], computed in double precision.  Cancellation
    stays mild for m_s <= 8, the supported range of the closed forms.
    """
    if not (isinstance(m_s, (int, np.integer)) and m_s >= 1):
        raise DomainError(f"fading order must be a positive integer, got {m_s!r}")
    if not alpha > 2.0:
        raise DomainError(f"path-loss exponent must exceed 2, got {alpha!r}")
    two_over_alpha = 2.0 / alpha
    values = np.zeros((m_s, m_s))
    for k in range(m_s):
        for l in range(k + 1):
            acc = 0.0
            for j in range(l + 1):
                prod = 1.0
                for i in range(k):
                    prod *= two_over_alpha * (l - j) - i
                acc += (-1.0) ** j * math.comb(l, j) * prod
            values[k, l] = acc
    return DeltaTable(alpha=float(alpha), values=values)
