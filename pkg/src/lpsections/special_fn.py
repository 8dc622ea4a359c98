"""Gamma-family special functions and the exponential integral.

Gamma and log-gamma come from the standard library; digamma, trigamma and
E1 are evaluated here by argument shifting followed by asymptotic series.
"""

import math

from .errors import DomainError

EULER_GAMMA = 0.57721566490153286061

# Bernoulli-number coefficients B_2k / (2k) for the digamma tail series
#   psi(x) ~ ln x - 1/(2x) - sum_k B_2k / (2k x^2k)
_DIGAMMA_COEFFS = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)

# B_2k coefficients for trigamma:
#   psi'(x) ~ 1/x + 1/(2x^2) + sum_k B_2k / x^(2k+1)
_TRIGAMMA_COEFFS = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
)

_SHIFT_THRESHOLD = 12.0


def _check_positive(x, name):
    if not x > 0.0 or math.isinf(x):
        raise DomainError(f"{name} requires a finite x > 0, got {x!r}")


def gamma(x):
    """Gamma function for real x > 0."""
    x = float(x)
    _check_positive(x, "gamma")
    return math.gamma(x)


def lgamma(x):
    """Natural log of the gamma function for real x > 0."""
    x = float(x)
    _check_positive(x, "lgamma")
    return math.lgamma(x)


def digamma(x):
    """Digamma function psi(x) = d/dx ln Gamma(x), x > 0.

    Uses psi(x) = psi(x + 1) - 1/x until x exceeds the shift threshold, then
    the Stirling-type asymptotic series.
    """
    x = float(x)
    _check_positive(x, "digamma")
    acc = 0.0
    while x < _SHIFT_THRESHOLD:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    power = inv2
    for c in _DIGAMMA_COEFFS:
        series += c * power
        power *= inv2
    return acc + math.log(x) - 0.5 / x - series


def trigamma(x):
    """Trigamma function psi'(x), x > 0."""
    x = float(x)
    _check_positive(x, "trigamma")
    acc = 0.0
    while x < _SHIFT_THRESHOLD:
        acc += 1.0 / (x * x)
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    power = inv2 * inv
    for c in _TRIGAMMA_COEFFS:
        series += c * power
        power *= inv2
    return acc + inv + 0.5 * inv2 + series


def digamma_series(x, terms=200_000):
    """psi(1 + x) from the partial-fraction series, for cross-checks only.

    The tail after ``terms`` is summed in closed form to leading order
    (x / k^2 summed from terms+1 on is about x / terms).
    """
    k = 1.0
    total = 0.0
    for k in range(1, terms + 1):
        total += x / (k * (x + k))
    return -EULER_GAMMA + total + x / (terms + 0.5)


def trigamma_series(x, terms=200_000):
    """psi'(1 + x) from sum 1/(k + x)^2, with an integral tail correction."""
    total = 0.0
    for k in range(1, terms + 1):
        total += 1.0 / ((k + x) ** 2)
    return total + 1.0 / (terms + x + 0.5)


def exp_integral_e1(x):
    """Exponential integral E1(x) = int_x^inf exp(-t)/t dt for x > 0."""
    x = float(x)
    _check_positive(x, "exp_integral_e1")
    if x <= 1.0:
        # -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
        total = 0.0
        term = 1.0
        k = 1
        while True:
            term *= -x / k
            contrib = term / k
            total += contrib
            if abs(contrib) < 1e-17 * abs(total) or k > 200:
                break
            k += 1
        return -EULER_GAMMA - math.log(x) - total
    # continued fraction, modified Lentz
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 500):
        an = -float(i * i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return h * math.exp(-x)
