"""The Ball-type integral h_p(u) and distribution-function comparisons.

The comparison engine is the Nazarov-Podkorytov lemma: if the distribution
functions F of f and G of g cross once, from F > G at small levels to F < G
at large levels, then u -> (1/(u x0^u)) int (g^u - f^u) is nondecreasing, so
the sign of int f^u - int g^u settles once it is known at one exponent.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from . import _quad
from .constants import constants_at, solve_p0
from .errors import DomainError
from .gamma_p import (
    DEFAULT_SPEC,
    PExponent,
    QuadratureSpec,
    as_exponent,
    bump_profile,
    decay_constants,
    envelope_radius,
    envelope_tail_integral,
    find_zeros,
    gamma_p,
    gamma_p_deriv,
)
from .special_fn import gamma, lgamma

# Largest s-window integrated directly; beyond it the result is degraded.
DEFAULT_S_CAP = 800.0


class Verdict(str, enum.Enum):
    """Outcome of a certified comparison."""

    PASS = "pass"
    FAIL = "fail"
    INDETERMINATE = "indeterminate"


# ---------------------------------------------------------------------------
# h_p(u)


@dataclass(frozen=True)
class HpResult:
    """Value of h_p(u) with its error budget.

    Attributes:
        p: Exponent.
        u: Integral exponent.
        value: sqrt(u) * int_0^inf |gamma_p|^u.
        quad_err: Quadrature error estimate on [0, s_max].
        tail_bound: Certified bound on the omitted tail, sqrt(u)-scaled.
        s_max: Truncation point.
        degraded: True when the tail could not be certified below tolerance.
    """

    p: float
    u: float
    value: float
    quad_err: float
    tail_bound: float
    s_max: float
    degraded: bool

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(**{k: (bool(v) if k == "degraded" else float(v)) for k, v in d.items()})


def _tail_radius(p: PExponent, u: float, tol: float) -> float:
    """Smallest S with sqrt(u) * envelope tail of |gamma_p|^u beyond S <= tol."""
    best = math.inf
    for m, c in decay_constants(p).items():
        mu = m * u
        if mu <= 1.0:
            continue
        # sqrt(u) c^u S^(1-mu) / (mu-1) = tol
        log_s = (0.5 * math.log(u) + u * math.log(c) - math.log(mu - 1.0) - math.log(tol)) / (mu - 1.0)
        best = min(best, math.exp(min(log_s, 700.0)))
    return max(best, 1.0)


def _sinc_mean_tail(u: float, start: float) -> float:
    """int_start^inf |sin s / s|^u ds replaced by the period mean of |sin|^u."""
    mean = math.exp(lgamma((u + 1) / 2) - lgamma(u / 2 + 1)) / math.sqrt(math.pi)
    return mean * start ** (1.0 - u) / (u - 1.0)


def _s_breaks(u: float, s_max: float, zeros=None) -> np.ndarray:
    pts = [np.arange(0.0, s_max, math.pi / 2), [s_max]]
    if u > 100:
        # resolve the Gaussian-like peak of width ~ 1/sqrt(u) near s = 0
        t = np.concatenate([[0.25, 0.5], np.geomspace(1.0, 64.0, 13)])
        pts.append(t[t / math.sqrt(u) < math.pi / 2] / math.sqrt(u))
    if zeros is not None:
        pts.append(np.asarray(zeros))
    br = np.unique(np.concatenate([np.atleast_1d(np.asarray(x, dtype=float)) for x in pts]))
    return br[(br >= 0) & (br <= s_max)]


def h_p_detail(p, u, spec: QuadratureSpec = DEFAULT_SPEC, s_cap=DEFAULT_S_CAP, power=1.0) -> HpResult:
    """h_p(u) = sqrt(u) int_0^inf |gamma_p(s)|^u ds with its error budget.

    The s-range is truncated where the integration-by-parts envelope certifies
    the remainder below tolerance. If that point exceeds ``s_cap`` the result
    is flagged degraded; for p far beyond the cap the omitted range is in the
    sinc regime and its mean contribution is added.

    Args:
        p: Exponent.
        u: Exponent of the integral, u >= 2 (any u > 1 is accepted).
        spec: Quadrature settings.
        s_cap: Largest truncation point allowed.
        power: Evaluate with |gamma_p|^(power*u) but sqrt(u) weighting; used
            by the distribution-exponent variant of the comparison.
    """
    p = as_exponent(p)
    u = float(u)
    if not u > 1.0:
        raise DomainError(f"u must exceed 1, got {u}")
    eff = u * power
    scale = constants_at(p).h2
    tol = max(spec.abs_tol, spec.rel_tol * scale)
    s_need = _tail_radius(p, eff, tol / 4.0) if eff == u else _tail_radius(p, eff, tol / 4.0)
    degraded = s_need > s_cap
    s_max = min(s_need, s_cap)

    def f(s):
        return np.abs(gamma_p(p, s, spec, method="direct")) ** eff

    breaks = _s_breaks(u, s_max)
    val, err = _quad.integrate_panels(
        f,
        breaks,
        abs_tol=tol / (2.0 * math.sqrt(u)),
        rel_tol=spec.rel_tol,
        max_rounds=spec.max_subdivisions,
        raise_on_fail=False,
    )
    value = float(val[0]) * math.sqrt(u)
    quad_err = float(err[0]) * math.sqrt(u)
    tail = math.sqrt(u) * envelope_tail_integral(p, s_max, eff)
    if degraded and p.p > 10.0 * s_max:
        value += math.sqrt(u) * _sinc_mean_tail(eff, s_max)
    return HpResult(
        p=p.p,
        u=u,
        value=value,
        quad_err=quad_err,
        tail_bound=tail,
        s_max=s_max,
        degraded=degraded,
    )


def h_p(p, u, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """h_p(u) = sqrt(u) * int_0^inf |gamma_p(s)|^u ds."""
    return h_p_detail(p, u, spec).value


def h_p_deriv_at_2(p, spec: QuadratureSpec = DEFAULT_SPEC, return_error=False):
    """Derivative of h_p at u = 2: sqrt(pi/d_p)/8 + sqrt2 int gamma_p^2 ln|gamma_p|.

    The logarithm is singular at each zero of gamma_p; the integrand
    gamma^2 ln|gamma| stays continuous there and panels are split at the
    zeros so each singular point is a panel end.
    """
    p = as_exponent(p)
    if not p.p > 2.0:
        raise DomainError("h_p'(2) is defined here for p > 2")
    d = constants_at(p).d_p
    tol = max(spec.abs_tol, spec.rel_tol)
    # x^2 |ln x| <= x^1.75 / (0.25 e) on (0, 1)
    s_max = _tail_radius(p, 1.75, 0.25 * math.e * tol / 4.0)
    zeros, _ = find_zeros(p, 0.0, s_max, spec)

    def f(s):
        g = np.abs(gamma_p(p, s, spec, method="direct"))
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(g > 0, g * g * np.log(g), 0.0)
        return out

    breaks = _s_breaks(2.0, s_max, zeros)
    val, err = _quad.integrate_panels(
        f, breaks, abs_tol=tol, rel_tol=spec.rel_tol, max_rounds=spec.max_subdivisions, raise_on_fail=False
    )
    tail = envelope_tail_integral(p, s_max, 1.75) / (0.25 * math.e)
    value = math.sqrt(math.pi / d) / 8.0 + math.sqrt(2.0) * float(val[0])
    bound = math.sqrt(2.0) * (float(err[0]) + tail)
    return (value, bound) if return_error else value


# ---------------------------------------------------------------------------
# distribution functions


def distribution_G(x, coeff: float):
    """Distribution function sqrt(ln(1/x)/coeff) of exp(-coeff s^2) on s > 0."""
    if not coeff > 0:
        raise DomainError("coeff must be positive")
    arr = np.asarray(x, dtype=float)
    if np.any((arr <= 0) | (arr >= 1)):
        raise DomainError("x must lie in (0, 1)")
    val = np.sqrt(np.log(1.0 / arr) / coeff)
    return float(val) if val.ndim == 0 else val


@dataclass(frozen=True)
class TailModel:
    """Contribution of s > s_max to a distribution function.

    Attributes:
        kind: ``"none"`` when the window already contains every super-level
            set on the grid, ``"envelope"`` when the decay envelope bounds
            the remainder.
        regime: Asymptotic regime of gamma_p beyond the window, ``"power"``
            for p outside 2N, ``"boyd"`` for even p, ``"gaussian"`` or
            ``"none"`` for comparison functions.
        s_max: End of the measured window.
        p: Exponent the envelope refers to, if any.
    """

    kind: str = "none"
    regime: str = "none"
    s_max: float = math.inf
    p: float | None = None

    def extra(self, x):
        """(lo, hi) additions to the measure for level(s) x."""
        x = np.asarray(x, dtype=float)
        zero = np.zeros(x.shape)
        if self.kind == "none":
            return zero, zero
        radius = np.array([envelope_radius(self.p, float(v)) for v in x.ravel()]).reshape(x.shape)
        return zero, np.maximum(radius - self.s_max, 0.0)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(
            kind=d["kind"],
            regime=d["regime"],
            s_max=float(d["s_max"]),
            p=None if d.get("p") is None else float(d["p"]),
        )


@dataclass(frozen=True)
class DistributionCurve:
    """Certified samples of a distribution function lambda{s > 0: f(s) > x}.

    Attributes:
        grid: Increasing levels in (0, 1).
        value_lo: Lower bounds at each level.
        value_hi: Upper bounds at each level.
        tail_model: What was added for the region beyond the measured window.
        head_coef, head_power: F(x) <= head_coef * x^(-head_power) below the
            grid, used to bound integrals near x = 0.
        label: Free-form description.
    """

    grid: tuple
    value_lo: tuple
    value_hi: tuple
    tail_model: TailModel = field(default_factory=TailModel)
    head_coef: float = 0.0
    head_power: float = 0.0
    label: str = ""

    def __post_init__(self):
        g = np.asarray(self.grid)
        lo = np.asarray(self.value_lo)
        hi = np.asarray(self.value_hi)
        if not (g.shape == lo.shape == hi.shape):
            raise DomainError("grid and bounds must have equal length")
        if np.any(np.diff(g) <= 0):
            raise DomainError("grid must be strictly increasing")
        if np.any(lo > hi + 1e-12):
            raise DomainError("value_lo must not exceed value_hi")

    @property
    def lo(self):
        return np.asarray(self.value_lo)

    @property
    def hi(self):
        return np.asarray(self.value_hi)

    @property
    def x(self):
        return np.asarray(self.grid)

    def to_dict(self):
        return {
            "grid": list(self.grid),
            "value_lo": list(self.value_lo),
            "value_hi": list(self.value_hi),
            "tail_model": self.tail_model.to_dict(),
            "head_coef": self.head_coef,
            "head_power": self.head_power,
            "label": self.label,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            grid=tuple(float(v) for v in d["grid"]),
            value_lo=tuple(float(v) for v in d["value_lo"]),
            value_hi=tuple(float(v) for v in d["value_hi"]),
            tail_model=TailModel.from_dict(d["tail_model"]),
            head_coef=float(d["head_coef"]),
            head_power=float(d["head_power"]),
            label=d.get("label", ""),
        )


def gaussian_curve(xs, coeff: float) -> DistributionCurve:
    """DistributionCurve of exp(-coeff s^2) (exact, lo == hi)."""
    xs = np.asarray(xs, dtype=float)
    g = distribution_G(xs, coeff)
    # ln(1/x) <= 1/(e x) gives G(x) <= (e coeff x)^(-1/2)
    return DistributionCurve(
        grid=tuple(xs),
        value_lo=tuple(g),
        value_hi=tuple(g),
        tail_model=TailModel(kind="none", regime="gaussian"),
        head_coef=1.0 / math.sqrt(math.e * coeff),
        head_power=0.5,
        label=f"exp(-{coeff:.6g} s^2)",
    )


class _SplineLevels:
    """Super-level measures of a cubic Hermite interpolant of |gamma_p|."""

    def __init__(self, p: PExponent, s_max: float, spec: QuadratureSpec, step: float = 0.05):
        n = int(math.ceil(s_max / step)) + 1
        s = np.linspace(0.0, s_max, n)
        h = s[1] - s[0]
        g, gerr = gamma_p(p, s, spec, method="direct", return_error=True)
        dg = gamma_p_deriv(p, s, 1, spec)
        self.spline = CubicHermiteSpline(s, g, dg)
        self.s_max = s_max
        # |gamma^(4)| <= int r^4 e^{-r^p} dr / Gamma(1+1/p) = Gamma(5/p) / (p Gamma(1+1/p))
        m4 = gamma(5.0 / p.p) / (p.p * p.gamma_norm)
        # Hermite interpolation error h^4/384 * max|f''''| plus nodal error
        # (propagated into the cubic with a factor below 2)
        self.eps = h**4 / 384.0 * m4 + 2.0 * float(np.max(gerr)) + 1e-15

    def _crossings(self, y: float) -> np.ndarray:
        pts = [self.spline.solve(y, extrapolate=False), self.spline.solve(-y, extrapolate=False)]
        pts = np.concatenate([np.atleast_1d(x) for x in pts])
        pts = pts[np.isfinite(pts)]
        return np.unique(np.concatenate([[0.0, self.s_max], pts[(pts > 0) & (pts < self.s_max)]]))

    def measure(self, y: float) -> float:
        """lambda{s in [0, s_max]: |spline(s)| > y}."""
        if y <= 0:
            return self.s_max
        pts = self._crossings(y)
        mids = 0.5 * (pts[:-1] + pts[1:])
        inside = np.abs(self.spline(mids)) > y
        return float(np.sum(np.diff(pts)[inside]))

    def solutions(self, y: float) -> np.ndarray:
        """Points where |spline| = y."""
        pts = self._crossings(y)
        return pts[(pts > 0) & (pts < self.s_max)]


def distribution_F(p, xs, spec: QuadratureSpec = DEFAULT_SPEC, s_cap=DEFAULT_S_CAP, step=0.05) -> DistributionCurve:
    """Certified distribution function of |gamma_p| at levels xs.

    gamma_p is sampled with its derivative on a grid and replaced by a
    cubic Hermite interpolant whose deviation eps is bounded through the
    fourth derivative of gamma_p. Super-level sets of the interpolant at
    x + eps and x - eps then bracket those of |gamma_p|. Beyond the window,
    the decay envelope bounds the remaining measure.
    """
    p = as_exponent(p)
    xs = np.asarray(xs, dtype=float)
    if np.any(xs <= 0):
        raise DomainError("levels must be positive")
    inside = xs < 1.0
    # |gamma_p| <= 1, so levels >= 1 have empty super-level sets
    lo = np.zeros(xs.shape)
    hi = np.zeros(xs.shape)
    tail = TailModel(kind="none", regime="boyd" if p.is_even_integer else "power", p=p.p)
    if np.any(inside):
        xin = xs[inside]
        levels = _levels_for(p, float(xin.min()), spec, s_cap, step)
        eps = levels.eps
        lo[inside] = [levels.measure(x + eps) for x in xin]
        hi[inside] = [levels.measure(x - eps) for x in xin]
        tail = _tail_model(p, float(xin.min()), levels.s_max)
        tlo, thi = tail.extra(xin)
        lo[inside] += tlo
        hi[inside] += thi
    if xs.size > 1 and np.all(np.diff(xs) > 0):
        # F is nonincreasing, so a bound at a higher level transfers downwards
        lo = np.maximum.accumulate(lo[::-1])[::-1]
        hi = np.maximum.accumulate(hi[::-1])[::-1]
    return DistributionCurve(
        grid=tuple(xs),
        value_lo=tuple(lo),
        value_hi=tuple(hi),
        tail_model=tail,
        head_coef=decay_constants(p)[1],
        head_power=1.0,
        label=f"|gamma_{p.p:g}|",
    )


_LEVEL_CACHE: dict = {}


def _levels_for(p: PExponent, x_min: float, spec, s_cap, step) -> _SplineLevels:
    s_max = min(max(envelope_radius(p, x_min), 3 * math.pi), s_cap)
    key = (p.p, spec, step)
    cached = _LEVEL_CACHE.get(key)
    if cached is not None and cached.s_max >= s_max:
        return cached
    levels = _SplineLevels(p, s_max, spec, step)
    _LEVEL_CACHE[key] = levels
    return levels


def _tail_model(p: PExponent, x_min: float, s_max: float) -> TailModel:
    regime = "boyd" if p.is_even_integer else "power"
    if envelope_radius(p, x_min) <= s_max:
        return TailModel(kind="none", regime=regime, s_max=s_max, p=p.p)
    return TailModel(kind="envelope", regime=regime, s_max=s_max, p=p.p)


def sinc_curve(xs) -> DistributionCurve:
    """DistributionCurve of |sin s / s| from the per-arch root computation."""
    xs = np.asarray(xs, dtype=float)
    vals = np.array([f_sinc_distribution(x)[0] for x in xs])
    slack = 1e-12 * np.maximum(vals, 1.0)
    return DistributionCurve(
        grid=tuple(xs),
        value_lo=tuple(vals - slack),
        value_hi=tuple(vals + slack),
        tail_model=TailModel(kind="none", regime="none"),
        # |sin s / s| <= 1/s
        head_coef=1.0,
        head_power=1.0,
        label="|sin s / s|",
    )


def f_sinc_distribution(x):
    """Measure of {s > 0: |sin s / s| > x} and the lower bound (2/pi)/x - 27/16.

    Each arch [k pi, (k+1) pi] contributes the length between the two roots
    of sin t = x (k pi + t), located by vectorised Newton on either side of
    t = arccos(x).

    Returns:
        Tuple (numeric, lower_bound); lower_bound is NaN for x > 1/(2 pi).
    """
    x = float(x)
    if not 0 < x < 1:
        raise DomainError("x must lie in (0, 1)")
    # first arch: sin s / s decreasing on [0, pi]
    first = _quad.bracketed_newton(
        lambda t: (np.sin(t) - x * t, np.cos(t) - x),
        np.array([0.0]) + 1e-300,
        np.array([math.pi]),
        fa=np.array([1.0]),
    )[0]
    total = float(first)
    k = np.arange(1, int(1.0 / (math.pi * x)) + 2, dtype=float)
    t_peak = math.acos(x)
    peak = np.sin(t_peak) - x * (k * math.pi + t_peak)
    k = k[peak > 0]
    if k.size:

        def fun(t):
            return np.sin(t) - x * (k * math.pi + t), np.cos(t) - x

        zeros = np.zeros(k.size)
        left = _quad.bracketed_newton(fun, zeros, np.full(k.size, t_peak), fa=-x * k * math.pi)
        right = _quad.bracketed_newton(
            fun, np.full(k.size, t_peak), np.full(k.size, math.pi), fa=peak[peak > 0]
        )
        total += float(np.sum(right - left))
    bound = 2.0 / (math.pi * x) - 27.0 / 16.0 if x <= 1.0 / (2.0 * math.pi) else float("nan")
    return total, bound


def sinc_bump(k: int) -> tuple[float, float]:
    """Location and height of the maximum of |sin s / s| on [k pi, (k+1) pi]."""
    if k < 1:
        raise DomainError("k must be >= 1")

    def fun(s):
        # derivative of sin s / s is (s cos s - sin s)/s^2; zero of s cos s - sin s
        return s * np.cos(s) - np.sin(s), -s * np.sin(s)

    a = np.array([k * math.pi + 1e-9])
    b = np.array([(k + 0.5) * math.pi])
    s = float(_quad.bracketed_newton(fun, a, b, xtol=1e-15)[0])
    return s, abs(math.sin(s) / s)


# ---------------------------------------------------------------------------
# Nazarov-Podkorytov lemma


def np_monotone_values(f_dist: DistributionCurve, g_dist: DistributionCurve, x0: float, u_grid):
    """Bounds on h(u) = (1/x0^u) int_0^1 x^(u-1) (G - F)(x) dx.

    Both curves must share the same grid. On each cell between grid levels
    the monotone functions are bracketed by their endpoint bounds, and the
    weight x^(u-1) is integrated exactly. The region below the grid uses the
    curves' head bounds; above the grid F and G lie between 0 and their last
    values.

    Returns:
        Tuple (lo, hi) arrays over u_grid.
    """
    xg = f_dist.x
    if g_dist.x.shape != xg.shape or np.any(g_dist.x != xg):
        raise DomainError("distribution curves must share one grid")
    x = np.concatenate([xg, [1.0]])
    f_lo = np.concatenate([f_dist.lo, [0.0]])
    f_hi = np.concatenate([f_dist.hi, [0.0]])
    g_lo = np.concatenate([g_dist.lo, [0.0]])
    g_hi = np.concatenate([g_dist.hi, [0.0]])
    # on [x_i, x_{i+1}]: F in [F_lo(x_{i+1}), F_hi(x_i)]
    cell_lo = g_lo[1:] - f_hi[:-1]
    cell_hi = g_hi[:-1] - f_lo[1:]
    out_lo, out_hi = [], []
    for u in u_grid:
        u = float(u)
        w = (x[1:] ** u - x[:-1] ** u) / u
        lo = float(np.sum(w * cell_lo))
        hi = float(np.sum(w * cell_hi))
        x_first = xg[0]
        head = 0.0
        for c, k in ((f_dist.head_coef, f_dist.head_power), (g_dist.head_coef, g_dist.head_power)):
            if c > 0:
                if u - k <= 0:
                    head = math.inf
                else:
                    head += c * x_first ** (u - k) / (u - k)
        lo -= head
        hi += head
        scale = x0**u
        out_lo.append(lo / scale)
        out_hi.append(hi / scale)
    return np.array(out_lo), np.array(out_hi)


def _weight_integral(u: float, x0: float, a, b):
    """int_a^b x^(u-1) / x0^u dx, computed as ((b/x0)^u - (a/x0)^u) / u."""
    return ((b / x0) ** u - (a / x0) ** u) / u


def np_monotone_steps(f_dist: DistributionCurve, g_dist: DistributionCurve, x0: float, u_grid):
    """Bounds on h(u_{k+1}) - h(u_k) for consecutive exponents.

    The increment is int_0^1 dw(x) (G - F)(x) dx with
    dw = x^(u2-1)/x0^u2 - x^(u1-1)/x0^u1, negative below x0 and positive
    above. Each cell's weight is split at x0 and paired with the bracket of
    G - F on the cell, which keeps correlated errors from widening the bound.

    Returns:
        Tuple (lo, hi) arrays of length len(u_grid) - 1.
    """
    xg = f_dist.x
    if g_dist.x.shape != xg.shape or np.any(g_dist.x != xg):
        raise DomainError("distribution curves must share one grid")
    x = np.concatenate([xg, [1.0]])
    f_lo = np.concatenate([f_dist.lo, [0.0]])
    f_hi = np.concatenate([f_dist.hi, [0.0]])
    g_lo = np.concatenate([g_dist.lo, [0.0]])
    g_hi = np.concatenate([g_dist.hi, [0.0]])
    d_lo = g_lo[1:] - f_hi[:-1]
    d_hi = g_hi[:-1] - f_lo[1:]
    a, b = x[:-1], x[1:]
    below_a, below_b = np.minimum(a, x0), np.minimum(b, x0)
    above_a, above_b = np.maximum(a, x0), np.maximum(b, x0)
    out_lo, out_hi = [], []
    for u1, u2 in zip(u_grid[:-1], u_grid[1:]):
        u1, u2 = float(u1), float(u2)
        neg = _weight_integral(u1, x0, below_a, below_b) - _weight_integral(u2, x0, below_a, below_b)
        pos = _weight_integral(u2, x0, above_a, above_b) - _weight_integral(u1, x0, above_a, above_b)
        lo = float(np.sum(pos * d_lo - neg * d_hi))
        hi = float(np.sum(pos * d_hi - neg * d_lo))
        # below the grid |dw| <= x^(u1-1)/x0^u1 and |G - F| <= F + G
        head = 0.0
        for c, k in ((f_dist.head_coef, f_dist.head_power), (g_dist.head_coef, g_dist.head_power)):
            if c > 0:
                head = math.inf if u1 <= k else head + c * xg[0] ** (u1 - k) / ((u1 - k) * x0**u1)
        out_lo.append(lo - head)
        out_hi.append(hi + head)
    return np.array(out_lo), np.array(out_hi)


def _same_curve(f_dist: DistributionCurve, g_dist: DistributionCurve) -> bool:
    return (
        f_dist.grid == g_dist.grid
        and f_dist.value_lo == g_dist.value_lo
        and f_dist.value_hi == g_dist.value_hi
    )


def np_monotone_check(f_dist: DistributionCurve, g_dist: DistributionCurve, x0: float, u_grid) -> Verdict:
    """Whether h(u) = (1/(u x0^u)) int (g^u - f^u) is nondecreasing on u_grid.

    Uses int (g^u - f^u) ds = int_0^1 u x^(u-1) (G - F)(x) dx.

    Returns:
        PASS when every increment is certified nonnegative, FAIL when one is
        certified negative, INDETERMINATE when a bound straddles zero.
    """
    if len(u_grid) < 2 or _same_curve(f_dist, g_dist):
        # identical distributions give h = 0 identically
        return Verdict.PASS
    lo, hi = np_monotone_steps(f_dist, g_dist, x0, u_grid)
    if np.any(hi < 0):
        return Verdict.FAIL
    if np.all(lo >= 0):
        return Verdict.PASS
    return Verdict.INDETERMINATE


def level_grid(x_min: float, n: int = 400, x_split: float = 1.0 / 20.0, gap_min: float = 1e-9) -> np.ndarray:
    """Levels in (0, 1) for comparing distribution functions.

    n log-spaced points on [x_min, x_split], n uniform points on
    [x_split, 0.9] and n points with 1 - x log-spaced down to ``gap_min``;
    distribution functions of peaked profiles behave like sqrt(1 - x) at the
    top, which the last block resolves.
    """
    if not 0 < x_min < x_split < 0.9:
        raise DomainError("need 0 < x_min < x_split < 0.9")
    return np.unique(
        np.concatenate(
            [
                np.geomspace(x_min, x_split, n),
                np.linspace(x_split, 0.9, n),
                1.0 - np.geomspace(0.1, gap_min, n),
            ]
        )
    )


def layer_cake_square(curve: DistributionCurve) -> tuple[float, float]:
    """Bounds on int f^2 = int_0^1 2 x F(x) dx from a DistributionCurve."""
    x = np.concatenate([curve.x, [1.0]])
    lo = np.concatenate([curve.lo, [0.0]])
    hi = np.concatenate([curve.hi, [0.0]])
    w = x[1:] ** 2 - x[:-1] ** 2
    low = float(np.sum(w * lo[1:]))
    high = float(np.sum(w * hi[:-1]))
    if curve.head_coef > 0:
        k = curve.head_power
        high += 2.0 * curve.head_coef * x[0] ** (2.0 - k) / (2.0 - k)
    return low, high


# ---------------------------------------------------------------------------
# full pipeline


@dataclass(frozen=True)
class NpReport:
    """Outcome of the distribution-function comparison at one p.

    Attributes:
        p: Exponent.
        coeff: Gaussian rate compared against (d_p if p >= p0, else c_p).
        target: Claimed bound for h_p(u): h_p(2) or h_p(inf).
        x1: Height of the largest bump after s = 3.
        crossing_x0: Level where G - F changes sign, or None.
        sign_pattern_ok: Every certified step held and exactly one sign
            change was seen on the grid.
        ratio_min: min over sampled x in [1/20, x1] of |F'|/|G'|.
        hp_curve: (u, h_p(u)) samples.
        conclusion_ok: sign_pattern_ok and h_p(u) <= target + slack on hp_curve.
        checks: Named sub-verdicts.
        indeterminate_windows: Level windows where bounds straddled zero.
    """

    p: float
    coeff: float
    target: float
    x1: float
    crossing_x0: float | None
    sign_pattern_ok: bool
    ratio_min: float
    hp_curve: tuple
    conclusion_ok: bool
    checks: dict
    indeterminate_windows: tuple = ()

    def to_dict(self):
        d = asdict(self)
        d["hp_curve"] = [list(t) for t in self.hp_curve]
        d["indeterminate_windows"] = [list(t) for t in self.indeterminate_windows]
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(
            p=float(d["p"]),
            coeff=float(d["coeff"]),
            target=float(d["target"]),
            x1=float(d["x1"]),
            crossing_x0=None if d["crossing_x0"] is None else float(d["crossing_x0"]),
            sign_pattern_ok=bool(d["sign_pattern_ok"]),
            ratio_min=float(d["ratio_min"]),
            hp_curve=tuple((float(a), float(b)) for a, b in d["hp_curve"]),
            conclusion_ok=bool(d["conclusion_ok"]),
            checks=dict(d["checks"]),
            indeterminate_windows=tuple(tuple(float(v) for v in w) for w in d["indeterminate_windows"]),
        )


def derivative_ratio(p, x, coeff: float, spec: QuadratureSpec = DEFAULT_SPEC, s_max=None):
    """|F'(x)| / |G'(x)| = 2 sqrt(coeff) x sqrt(ln(1/x)) sum 1/|gamma_p'(s_i)|.

    The solutions s_i of |gamma_p(s)| = x are seeded from the interpolant
    and polished against gamma_p itself.

    Returns:
        Tuple (ratio, solutions).
    """
    p = as_exponent(p)
    x = float(x)
    levels = _levels_for(p, x, spec, DEFAULT_S_CAP, 0.05)
    seeds = levels.solutions(x)
    if s_max is not None:
        seeds = seeds[seeds <= s_max]
    sols = []
    for s0 in seeds:
        sign = 1.0 if levels.spline(s0) > 0 else -1.0
        s = float(s0)
        for _ in range(50):
            g = gamma_p(p, s, spec, method="direct")
            dg = gamma_p_deriv(p, s, 1, spec)
            step = (g - sign * x) / dg
            s -= step
            if abs(step) < 1e-13:
                break
        sols.append(s)
    sols = np.array(sols)
    slopes = np.abs(gamma_p_deriv(p, sols, 1, spec)) if sols.size else sols
    ratio = 2.0 * math.sqrt(coeff) * x * math.sqrt(math.log(1.0 / x)) * float(np.sum(1.0 / slopes))
    return ratio, sols


def np_full_check(
    p,
    spec: QuadratureSpec = DEFAULT_SPEC,
    u_grid=(2, 3, 4, 8, 16, 64),
    n_levels=400,
    slack=1e-6,
) -> NpReport:
    """Run the distribution-function comparison for one p >= 20.

    Steps: (a) |gamma_p| < exp(-coeff s^2) on [0, 3.3] and exp(-coeff 3.3^2)
    < x1, so F < G for levels above x1; (b) |F'|/|G'| > 1 on [1/20, x1] by
    enumerating the solutions of |gamma_p| = x; (c) F > G on
    [1/(210 p), 1/20] from certified bounds; (d) locate the crossing x0.
    Below 1/(210 p) the analytic estimates (psi_A margins) apply and are not
    recomputed here. Finally h_p(u) is evaluated on ``u_grid``.
    """
    p = as_exponent(p)
    if p.p < 20:
        raise DomainError("np_full_check covers p >= 20")
    cc = constants_at(p)
    above_p0 = p.p >= solve_p0()
    coeff = cc.d_p if above_p0 else cc.c_p
    target = cc.h2 if above_p0 else cc.h_inf
    prof = bump_profile(p, spec=spec)
    x1 = prof.x1
    checks = {}
    windows = []

    # (a) Gaussian majorant on [0, 3.3]
    h = 1e-3
    s = np.arange(h, 3.3 + h / 2, h)
    g = gamma_p(p, s, spec, method="direct")
    gauss = np.exp(-coeff * s**2)
    # +-gamma - gauss are smooth; between grid points they exceed their chord
    # by at most h^2/8 * (max|gamma''| + max|gauss''|)
    m2 = gamma(3.0 / p.p) / (p.p * p.gamma_norm) + 2.0 * coeff
    margin = h * h / 8.0 * m2
    inner = s >= 0.5
    d = np.maximum(g - gauss, -g - gauss)
    # near s = 0 both sides agree to second order; compare the curvature instead
    curv_ok = 2.0 * cc.c_p >= 2.0 * coeff - 1e-14
    checks["majorant_small_s"] = bool(curv_ok and np.all(d[~inner] <= 1e-12))
    checks["majorant_grid"] = bool(np.all(d[inner] + margin < 0))
    checks["gauss_below_x1"] = bool(math.exp(-coeff * 3.3**2) < x1)
    step_a = checks["majorant_small_s"] and checks["majorant_grid"] and checks["gauss_below_x1"]

    # (b) derivative ratio on [1/20, x1]
    xs_b = np.unique(np.concatenate([np.linspace(1 / 20, x1 * (1 - 1e-6), 120), [1 / 20, 1 / 10, 1 / 8]]))
    xs_b = xs_b[xs_b < x1]
    ratios = np.array([derivative_ratio(p, x, coeff, spec)[0] for x in xs_b])
    ratio_min = float(ratios.min())
    checks["ratio_gt_1"] = bool(ratio_min > 1.0)

    # (c) F > G on [1/(210 p), 1/20]
    x_min = 1.0 / (210.0 * p.p)
    xs_c = np.unique(np.concatenate([np.geomspace(x_min, 1 / 20, n_levels), [1 / 20]]))
    fc = distribution_F(p, xs_c, spec)
    gc = distribution_G(xs_c, coeff)
    # cell [x_i, x_{i+1}]: F >= F_lo(x_{i+1}), G <= G(x_i)
    cell_ok = fc.lo[1:] > gc[:-1]
    checks["F_above_G_small_x"] = bool(np.all(cell_ok))
    for i in np.nonzero(~cell_ok)[0]:
        windows.append((float(xs_c[i]), float(xs_c[i + 1])))

    # (d) crossing on (1/20, x1)
    xs_d = np.linspace(1 / 20, x1, 200)[:-1]
    fd = distribution_F(p, xs_d, spec)
    gd = distribution_G(xs_d, coeff)
    above = fd.lo > gd
    below = fd.hi < gd
    undecided = ~(above | below)
    for i in np.nonzero(undecided)[0]:
        windows.append((float(xs_d[i]), float(xs_d[min(i + 1, xs_d.size - 1)])))
    sign = np.where(above, 1, np.where(below, -1, 0))
    decided = sign[sign != 0]
    changes = int(np.sum(decided[1:] != decided[:-1])) if decided.size else 0
    x0 = None
    if changes == 1 and decided[0] == 1:
        last_above = int(np.nonzero(above)[0].max())
        first_below = int(np.nonzero(below)[0].min())
        lo_x, hi_x = xs_d[last_above], xs_d[first_below]
        for _ in range(40):
            mid = 0.5 * (lo_x + hi_x)
            fm = distribution_F(p, [mid], spec)
            gm = distribution_G(mid, coeff)
            if fm.lo[0] > gm:
                lo_x = mid
            elif fm.hi[0] < gm:
                hi_x = mid
            else:
                break
        x0 = float(0.5 * (lo_x + hi_x))
    checks["single_crossing"] = bool(changes == 1 and x0 is not None and 1 / 20 < x0 < x1)

    sign_ok = step_a and checks["ratio_gt_1"] and checks["F_above_G_small_x"] and checks["single_crossing"]
    hp = tuple((float(u), h_p(p, u, spec)) for u in u_grid)
    bound_ok = all(v <= target + slack for _, v in hp)
    checks["hp_bound"] = bool(bound_ok)
    return NpReport(
        p=p.p,
        coeff=coeff,
        target=target,
        x1=x1,
        crossing_x0=x0,
        sign_pattern_ok=bool(sign_ok),
        ratio_min=ratio_min,
        hp_curve=hp,
        conclusion_ok=bool(sign_ok and bound_ok),
        checks=checks,
        indeterminate_windows=tuple(windows),
    )


# ---------------------------------------------------------------------------
# analytic margins


PSI_REGIMES = {
    "coarse": (5.0 / 8.0, 27.0 / 16.0),
    "refined_175": (1.5384, 2.13),
    "refined_26": (1.5568, 2.40),
    "refined_20": (1.6265, 2.478),
}


def psi_A_margin(p: float, A: float, regime: str = "coarse") -> float:
    """slope p - const - 3.5528 sqrt((p+1)(ln(A p) + 0.365)) for the regime.

    A positive value certifies F > G between the very-small-level regime and
    exp(-p^2/25).
    """
    if regime not in PSI_REGIMES:
        raise DomainError(f"unknown regime {regime!r}; choose from {sorted(PSI_REGIMES)}")
    if A < 1 or p < 15:
        raise DomainError("psi_A margins need A >= 1 and p >= 15")
    slope, const = PSI_REGIMES[regime]
    return slope * p - const - 3.5528 * math.sqrt((p + 1.0) * (math.log(A * p) + 0.365))


def fsinc_lower_bound(x):
    """(2/pi)/x - 27/16."""
    return 2.0 / (math.pi * x) - 27.0 / 16.0


# Derivative-bound constants: 1.064/Gamma(1+1/15) and 1.016/Gamma(1+1/15).
# The two-decimal roundings 1.102 and 1.053 push the 1/8 margin to 1.0594.
L1_CONST = 1.064 / gamma(1.0 + 1.0 / 15.0)
L2_CONST = 1.016 / gamma(1.0 + 1.0 / 15.0)
RATIO_FACTOR = 0.796

# level -> (lower bounds on the first solution, further solutions with multiplicity)
RATIO_LANDMARKS = {
    "1/8": (1 / 8, 2.48, ((3.55, 2),)),
    "1/10": (1 / 10, 2.75, ((3.45, 1), (5.39, 1))),
    "1/20": (1 / 20, 2.966, ((3.27, 1), (5.57, 3))),
}


def ratio_landmark_bound(name: str, l1=L1_CONST, l2=L2_CONST, factor=RATIO_FACTOR) -> float:
    """Analytic lower bound of the derivative ratio at a landmark level.

    Uses |gamma_p'(s)| <= l (1/s + 1/15) with the lower bounds on the
    positions of the solutions of |gamma_p(s)| = x.
    """
    if name not in RATIO_LANDMARKS:
        raise DomainError(f"unknown landmark {name!r}")
    x, s1, rest = RATIO_LANDMARKS[name]
    total = 1.0 / (l1 * (1.0 / s1 + 1.0 / 15.0))
    for s, mult in rest:
        total += mult / (l2 * (1.0 / s + 1.0 / 15.0))
    return factor * total * x * math.sqrt(math.log(1.0 / x))


RATIO_CLAIMS = {"1/8": 1.06, "1/10": 1.03, "1/20": 1.1}


__all__ = [
    "Verdict",
    "HpResult",
    "TailModel",
    "DistributionCurve",
    "NpReport",
    "h_p",
    "h_p_detail",
    "h_p_deriv_at_2",
    "distribution_G",
    "distribution_F",
    "gaussian_curve",
    "f_sinc_distribution",
    "sinc_curve",
    "sinc_bump",
    "np_monotone_values",
    "np_monotone_check",
    "np_monotone_steps",
    "level_grid",
    "layer_cake_square",
    "derivative_ratio",
    "np_full_check",
    "psi_A_margin",
    "ratio_landmark_bound",
    "RATIO_CLAIMS",
    "PSI_REGIMES",
]
