"""Closed-form constants and the critical exponents p0, p1, p2."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from scipy.optimize import brentq

from .errors import SolverError
from .gamma_p import PExponent, as_exponent
from .special_fn import digamma, gamma, lgamma


@dataclass(frozen=True)
class CriticalConstants:
    """Gaussian comparison rates and the derived closed forms at one p.

    Attributes:
        p: Exponent.
        c_p: Gamma(1+3/p) / (6 Gamma(1+1/p)), half the curvature of gamma_p at 0.
        d_p: (2^(1/p) Gamma(1+1/p))^2 / (2 pi), the Plancherel rate.
        ratio_r: d_p / c_p.
        h2: h_p(2) = sqrt(pi / d_p) / 2.
        h_inf: lim h_p(u) = sqrt(pi / c_p) / 2.
        diag_limit: lim_n A_{n,p} along the main diagonal.
        a1_threshold: 1 / diag_limit.
    """

    p: float
    c_p: float
    d_p: float
    ratio_r: float
    h2: float
    h_inf: float
    diag_limit: float
    a1_threshold: float

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(**{k: float(d[k]) for k in cls.__dataclass_fields__})


def c_const(p: float) -> float:
    return gamma(1.0 + 3.0 / p) / (6.0 * gamma(1.0 + 1.0 / p))


def d_const(p: float) -> float:
    return (2.0 ** (1.0 / p) * gamma(1.0 + 1.0 / p)) ** 2 / (2.0 * math.pi)


def diag_limit(p: float) -> float:
    """sqrt(6/pi * Gamma(1+1/p)^3 / Gamma(1+3/p))."""
    return math.sqrt(6.0 / math.pi * math.exp(3 * lgamma(1 + 1 / p) - lgamma(1 + 3 / p)))


def constants_at(p) -> CriticalConstants:
    """All closed-form constants at exponent p."""
    p = as_exponent(p)
    pp = p.p
    c = c_const(pp)
    d = d_const(pp)
    dl = diag_limit(pp)
    return CriticalConstants(
        p=pp,
        c_p=c,
        d_p=d,
        ratio_r=d / c,
        h2=0.5 * math.sqrt(math.pi / d),
        h_inf=0.5 * math.sqrt(math.pi / c),
        diag_limit=dl,
        a1_threshold=1.0 / dl,
    )


def phi_ratio(p: float) -> float:
    """(3/pi) 2^(2/p) Gamma(1+1/p)^3 / Gamma(1+3/p), equal to d_p / c_p."""
    return 3.0 / math.pi * 2.0 ** (2.0 / p) * math.exp(3 * lgamma(1 + 1 / p) - lgamma(1 + 3 / p))


def p1_function(p: float) -> float:
    return 2.0 * math.log(2.0) + 3.0 * (digamma(1 + 1 / p) - digamma(1 + 3 / p))


def p2_function(p: float) -> float:
    return digamma(1 + 1 / p) - 3.0 * digamma(1 + 3 / p)


def _solve(fun, a, b, name):
    fa, fb = fun(a), fun(b)
    if fa * fb > 0:
        raise SolverError(f"{name}: no sign change on [{a}, {b}]")
    return brentq(fun, a, b, xtol=1e-12, maxiter=200)


def solve_p0(bracket=(26.0, 27.0)) -> float:
    """Exponent where c_p = d_p, i.e. phi_ratio(p) = 1."""
    return _solve(lambda p: phi_ratio(p) - 1.0, *bracket, "p0")


def solve_p1(bracket=(2.0, 5.0)) -> float:
    """Critical point of phi_ratio: 2 ln 2 + 3 (psi(1+1/p) - psi(1+3/p)) = 0."""
    return _solve(p1_function, *bracket, "p1")


def solve_p2(bracket=(9.0, 10.0)) -> float:
    """Minimiser of c_p: psi(1+1/p) - 3 psi(1+3/p) = 0."""
    return _solve(p2_function, *bracket, "p2")


def section_closed_forms(p) -> tuple[float, float]:
    """(A_{n,p}(a^(2)), diagonal limit) = (2^(1/2 - 1/p), diag_limit(p))."""
    p = as_exponent(p)
    return 2.0 ** (0.5 - 1.0 / p.p), diag_limit(p.p)


def gap_interval(p) -> tuple[float, float]:
    """Range (1/sqrt2, 2^(1/p)/sqrt2) of a_1 left open by the two section bounds."""
    p = as_exponent(p)
    lo = 1.0 / math.sqrt(2.0)
    return lo, 2.0 ** (1.0 / p.p) * lo


__all__ = [
    "CriticalConstants",
    "PExponent",
    "constants_at",
    "c_const",
    "d_const",
    "diag_limit",
    "phi_ratio",
    "solve_p0",
    "solve_p1",
    "solve_p2",
    "section_closed_forms",
    "gap_interval",
]
