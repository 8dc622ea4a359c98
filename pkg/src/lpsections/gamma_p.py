"""The normalised cosine transform gamma_p and its approximants.

``gamma_p(s) = Gamma(1+1/p)^-1 * int_0^inf cos(s r) exp(-r^p) dr``.

Direct evaluation integrates over r on panels bounded by the kernel's
half-periods and by a logarithmic grid in ``r^p`` that resolves the drop of
``exp(-r^p)`` near r = 1. For large s and p outside 2N a rotated-contour
representation avoids cancellation. Both routes are vectorised over s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
from scipy.special import binom, gammainccinv

from . import _quad
from .errors import DomainError, QuadratureError, RegimeError, ResolutionError
from .special_fn import gamma as _gamma

# ---------------------------------------------------------------------------
# configuration records


@dataclass(frozen=True)
class PExponent:
    """Validated exponent p together with its parity classification.

    Attributes:
        p: The exponent, p >= 1.
        dist_even: Distance from p to the nearest even integer 2k, k >= 1.
        is_even_integer: True when ``dist_even == 0``.
    """

    p: float
    dist_even: float = field(init=False)
    is_even_integer: bool = field(init=False)

    def __post_init__(self):
        p = float(self.p)
        if not math.isfinite(p) or p < 1.0:
            raise DomainError(f"exponent must be a finite p >= 1, got {self.p!r}")
        k = max(1, round(p / 2.0))
        dist = abs(p - 2.0 * k)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "dist_even", dist)
        object.__setattr__(self, "is_even_integer", dist == 0.0)

    @property
    def is_odd_integer(self) -> bool:
        return float(self.p).is_integer() and not self.is_even_integer

    @property
    def gamma_norm(self) -> float:
        """Gamma(1 + 1/p), the normalisation of gamma_p."""
        return _gamma(1.0 + 1.0 / self.p)

    def to_dict(self):
        return {"p": self.p}


def as_exponent(p) -> PExponent:
    """Coerce a float or PExponent into a PExponent."""
    return p if isinstance(p, PExponent) else PExponent(float(p))


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and switching policy shared by all integrals.

    Attributes:
        rel_tol: Relative tolerance.
        abs_tol: Absolute tolerance.
        envelope_cut: The r-integral is truncated where exp(-r^p) drops
            below this value.
        contour_switch_s: s beyond which the rotated contour is used for
            p outside 2N. ``None`` selects a p-dependent default.
        max_subdivisions: Maximum bisection rounds per panel.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-13
    envelope_cut: float = 1e-18
    contour_switch_s: float | None = None
    max_subdivisions: int = 40

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("tolerances must be positive")
        if not 0 < self.envelope_cut < 1e-6:
            raise DomainError("envelope_cut must lie in (0, 1e-6)")
        if self.contour_switch_s is not None and not self.contour_switch_s > 0:
            raise DomainError("contour_switch_s must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")

    def with_(self, **kw) -> "QuadratureSpec":
        return replace(self, **kw)

    def to_dict(self):
        return {
            "rel_tol": self.rel_tol,
            "abs_tol": self.abs_tol,
            "envelope_cut": self.envelope_cut,
            "contour_switch_s": self.contour_switch_s,
            "max_subdivisions": self.max_subdivisions,
        }


DEFAULT_SPEC = QuadratureSpec()


def contour_crossover(p: PExponent) -> float:
    """s where the rotated contour starts to beat direct quadrature.

    Direct quadrature carries an absolute rounding error while the contour
    route loses a factor 1/sin(pi/2p)^p to cancellation; they break even near
    ``(Gamma(p+1) / sin(pi/2p)^p)^(1/(p+1))``.
    """
    sig = math.sin(math.pi / (2.0 * p.p))
    log_val = math.lgamma(p.p + 1.0) - p.p * math.log(sig)
    return math.exp(log_val / (p.p + 1.0))


def contour_switch(p: PExponent, spec: QuadratureSpec) -> float:
    """Effective switch point from direct quadrature to the rotated contour."""
    if p.is_even_integer:
        return math.inf
    if spec.contour_switch_s is not None:
        return spec.contour_switch_s
    return max(min(3.0 * p.p, 60.0), contour_crossover(p), contour_min_s(p, spec, _CONTOUR_AUTO_HALF_PERIODS))


# ---------------------------------------------------------------------------
# direct quadrature


# Gauss-Legendre 24 integrates four half-periods of the kernel to ~1e-15.
_HALF_PERIODS_PER_PANEL = 4


# above this p the steep fall of exp(-r^p) is integrated in log(r^p)
_V_SUBSTITUTION_P = 200.0


def _r_breaks(p: float, s_hi: float, cut: float) -> np.ndarray:
    """Breakpoints in r: half-periods of the kernel and a grid in log(r^p)."""
    v_lo = math.log(cut)
    v_hi = math.log(-math.log(cut))
    big = np.arange(v_lo, -4.0, 4.0)
    small = np.arange(-4.0, v_hi, 1.0)
    v = np.concatenate([big, small, [v_hi]])
    r = np.exp(v / p)
    radius = r[-1]
    pts = [np.array([0.0]), r]
    if s_hi > 0:
        width = _HALF_PERIODS_PER_PANEL * math.pi / s_hi
        n = int(radius / width)
        if n > 0:
            pts.append(np.arange(1, n + 1) * width)
    br = np.unique(np.concatenate(pts))
    return br[br <= radius]


def _bins(s: np.ndarray):
    """Group sorted positive s into index ranges with bounded spread."""
    start = 0
    n = s.size
    while start < n:
        lim = max(1.5 * s[start], s[start] + 2.0)
        stop = int(np.searchsorted(s, lim, side="right"))
        stop = max(stop, start + 1)
        yield start, stop
        start = stop


def _direct_transform(p: PExponent, s: np.ndarray, order: int, spec: QuadratureSpec):
    """Direct quadrature of gamma_p or its derivatives at an array of s >= 0.

    Returns values and error bounds in gamma_p units.
    """
    pp = p.p
    norm = p.gamma_norm
    k = order
    use_sin = order == 1
    sign = 1.0 if order == 0 else -1.0
    out = np.empty(s.shape)
    err = np.zeros(s.shape)
    zero = s == 0.0
    if np.any(zero):
        if order == 0:
            out[zero] = 1.0
        elif order == 1:
            out[zero] = 0.0
        else:
            out[zero] = -_gamma(1.0 + 3.0 / pp) / (3.0 * norm)
    idx = np.nonzero(~zero)[0]
    if idx.size == 0:
        return out, err
    order_idx = idx[np.argsort(s[idx])]
    ss = s[order_idx]

    def weight(r):
        w = np.exp(-np.power(r, pp))
        if k:
            w = w * r**k
        return w

    for a, b in _bins(ss):
        sb = ss[a:b]
        breaks = _r_breaks(pp, float(sb[-1]), spec.envelope_cut)

        def f(r, sb=sb):
            arg = np.multiply.outer(sb, r)
            kern = np.sin(arg) if use_sin else np.cos(arg)
            return kern * weight(r)[None, :]

        quad = dict(rel_tol=spec.rel_tol, max_rounds=spec.max_subdivisions, nbatch=sb.size)
        if pp <= _V_SUBSTITUTION_P:
            vals, errs = _quad.integrate_panels(f, breaks, abs_tol=spec.abs_tol * norm, **quad)
        else:
            # Near r = 1 a rounding of r by eps moves r^p by p*eps; integrating
            # in v = log(r^p) keeps the nodes exact where exp(-r^p) falls off.
            v_cut = math.log(spec.envelope_cut)
            r_cut = math.exp(v_cut / pp)

            def fv(v, sb=sb):
                r = np.exp(v / pp)
                arg = np.multiply.outer(sb, r)
                kern = np.sin(arg) if use_sin else np.cos(arg)
                w = np.exp(-np.exp(v)) * r / pp
                if k:
                    w = w * r**k
                return kern * w[None, :]

            br_r = np.concatenate([breaks[breaks < r_cut], [r_cut]])
            br_v = np.concatenate([[v_cut], pp * np.log(breaks[breaks > r_cut])])
            v1, e1 = _quad.integrate_panels(f, br_r, abs_tol=0.5 * spec.abs_tol * norm, **quad)
            v2, e2 = _quad.integrate_panels(fv, br_v, abs_tol=0.5 * spec.abs_tol * norm, **quad)
            vals, errs = v1 + v2, e1 + e2
        out[order_idx[a:b]] = sign * vals / norm
        err[order_idx[a:b]] = errs / norm
    return out, err


# ---------------------------------------------------------------------------
# rotated contour


_CONTOUR_MAX_HALF_PERIODS = 200_000
# automatic switching only hands over s where the contour is cheap
_CONTOUR_AUTO_HALF_PERIODS = 2_000


def _contour_upper(p: PExponent, spec: QuadratureSpec) -> float:
    sig = math.sin(math.pi / (2.0 * p.p))
    target = max(abs(math.sin(math.pi * p.p / 2.0)), 1e-300)
    tail_frac = min(1e-3 * spec.rel_tol * target, 1e-3)
    return float(gammainccinv(p.p, tail_frac)) / sig


def contour_min_s(p: PExponent, spec: QuadratureSpec, budget: int = _CONTOUR_MAX_HALF_PERIODS) -> float:
    """Smallest s at which the contour phase spans at most ``budget`` half-periods."""
    return 1.05 * _contour_upper(p, spec) / (math.pi * budget) ** (1.0 / p.p)


def _contour_scaled(p: PExponent, s: np.ndarray, spec: QuadratureSpec):
    """Gamma(1+1/p) s^(p+1) gamma_p(s) via the rotated contour.

    With r = u^p on the imaginary axis the transform becomes
    ``int_0^inf p u^(p-1) exp(-u sin(pi/2p)) cos(u cos(pi/2p) - (u/s)^p) du``.
    """
    pp = p.p
    sig = math.sin(math.pi / (2.0 * pp))
    cph = math.cos(math.pi / (2.0 * pp))
    scale = math.gamma(pp + 1.0) / sig**pp
    target = max(abs(math.sin(math.pi * pp / 2.0)), 1e-300)
    tail_frac = min(1e-3 * spec.rel_tol * target, 1e-3)
    upper = _contour_upper(p, spec)
    out = np.empty(s.shape)
    err = np.empty(s.shape)
    order_idx = np.argsort(s)
    ss = s[order_idx]
    for a, b in _bins(ss):
        sb = ss[a:b]
        s_lo = float(sb[0])
        grid = np.linspace(0.0, upper, 20001)
        phase = cph * grid + (grid / s_lo) ** pp
        n_half = int(phase[-1] / math.pi)
        if n_half > _CONTOUR_MAX_HALF_PERIODS:
            raise ResolutionError(
                f"rotated contour at s = {s_lo:.6g} needs {n_half} half-periods; "
                "use direct quadrature for s this small"
            )
        marks = np.interp(np.arange(1, n_half + 1) * math.pi, phase, grid)
        width = max(1.0, 2.0 / sig)
        uniform = np.arange(width, upper, width)
        breaks = np.unique(np.concatenate([[0.0, upper], marks, uniform]))

        def f(u, sb=sb):
            amp = pp * np.power(u, pp - 1.0) * np.exp(-sig * u)
            ph = cph * u[None, :] - np.power(np.divide.outer(u, sb).T, pp)
            return amp[None, :] * np.cos(ph)

        vals, errs = _quad.integrate_panels(
            f,
            breaks,
            abs_tol=spec.rel_tol * 1e-3 * scale * target,
            rel_tol=spec.rel_tol,
            max_rounds=spec.max_subdivisions,
            nbatch=sb.size,
        )
        out[order_idx[a:b]] = vals
        err[order_idx[a:b]] = errs + tail_frac * scale
    return out, err


def gamma_p_tail(p, s, spec: QuadratureSpec = DEFAULT_SPEC, return_error=False):
    """gamma_p(s) from the rotated-contour representation.

    Args:
        p: Exponent outside 2N.
        s: Scalar or array of s > 0.
        spec: Quadrature settings.
        return_error: Also return the error bounds.

    Raises:
        RegimeError: If p is an even integer (use ``boyd_asymptotic``).
    """
    p = as_exponent(p)
    if p.is_even_integer:
        raise RegimeError(
            f"p = {p.p:g} is an even integer; the contour integral has no power "
            "tail there, use boyd_asymptotic for diagnostics"
        )
    arr = np.atleast_1d(np.asarray(s, dtype=float))
    if np.any(arr <= 0):
        raise DomainError("gamma_p_tail requires s > 0")
    scaled, err = _contour_scaled(p, arr, spec)
    factor = p.gamma_norm * np.power(arr, p.p + 1.0)
    val, err = scaled / factor, err / factor
    if np.ndim(s) == 0:
        val, err = float(val[0]), float(err[0])
    return (val, err) if return_error else val


# ---------------------------------------------------------------------------
# public evaluators


def _evaluate(p, s, order, spec, method):
    p = as_exponent(p)
    arr = np.asarray(s, dtype=float)
    flat = np.atleast_1d(arr).ravel()
    if np.any(~np.isfinite(flat)) or np.any(flat < 0):
        raise DomainError("gamma_p requires finite s >= 0")
    if method not in ("auto", "direct", "contour"):
        raise DomainError(f"unknown method {method!r}")
    val = np.empty(flat.shape)
    err = np.empty(flat.shape)
    if order == 0 and method != "direct" and not p.is_even_integer:
        switch = 0.0 if method == "contour" else contour_switch(p, spec)
        far = flat > switch
    else:
        far = np.zeros(flat.shape, dtype=bool)
    if np.any(~far):
        val[~far], err[~far] = _direct_transform(p, flat[~far], order, spec)
    if np.any(far):
        val[far], err[far] = gamma_p_tail(p, flat[far], spec, return_error=True)
    if arr.ndim == 0:
        return float(val[0]), float(err[0])
    return val.reshape(arr.shape), err.reshape(arr.shape)


def gamma_p(p, s, spec: QuadratureSpec = DEFAULT_SPEC, method="auto", return_error=False):
    """Evaluate gamma_p(s).

    Args:
        p: Exponent (float or PExponent), p >= 1.
        s: Scalar or array of s >= 0.
        spec: Quadrature settings.
        method: ``"auto"`` (direct, switching to the contour for large s),
            ``"direct"`` or ``"contour"``.
        return_error: Also return the absolute error bound.

    Returns:
        Value(s) matching the shape of ``s``.

    Raises:
        QuadratureError: If the requested tolerance could not be met.
    """
    val, err = _evaluate(p, s, 0, spec, method)
    return (val, err) if return_error else val


def gamma_p_deriv(p, s, order=1, spec: QuadratureSpec = DEFAULT_SPEC, return_error=False):
    """First or second derivative of gamma_p by direct quadrature."""
    if order not in (1, 2):
        raise DomainError("order must be 1 or 2")
    val, err = _evaluate(p, s, order, spec, "direct")
    return (val, err) if return_error else val


def gamma_p_with_deriv(p, s, spec: QuadratureSpec = DEFAULT_SPEC):
    """Convenience pair (gamma_p(s), gamma_p'(s)) for root finding."""
    return (
        gamma_p(p, s, spec, method="direct"),
        gamma_p_deriv(p, s, 1, spec),
    )


# ---------------------------------------------------------------------------
# asymptotics


def tail_asymptote(p, s):
    """Leading power tail Gamma(p+1) sin(pi p/2) / (Gamma(1+1/p) s^(p+1))."""
    p = as_exponent(p)
    if p.is_even_integer:
        raise RegimeError("the power tail vanishes for even integer p")
    s = np.asarray(s, dtype=float)
    log_mag = math.lgamma(p.p + 1.0) - math.log(p.gamma_norm) - (p.p + 1.0) * np.log(s)
    val = math.sin(math.pi * p.p / 2.0) * np.exp(log_mag)
    return float(val) if val.ndim == 0 else val


def tail_threshold(p, factor=None):
    """s beyond which the power tail is within half of gamma_p.

    The threshold is ``factor * p^3 / |sin(pi p/2)|^(1/p)`` with factor 2/3,
    or 5/8 for p >= 10.
    """
    p = as_exponent(p)
    if p.is_even_integer:
        raise RegimeError("no power tail for even integer p")
    if factor is None:
        factor = 5.0 / 8.0 if p.p >= 10 else 2.0 / 3.0
    return factor * p.p**3 / abs(math.sin(math.pi * p.p / 2.0)) ** (1.0 / p.p)


def tail_threshold_exact(p):
    """Sharper threshold (Gamma(2p+1)/Gamma(p+1))^(1/p) / sin(pi/2p)^2 / |sin|^(1/p)."""
    p = as_exponent(p)
    if p.is_even_integer:
        raise RegimeError("no power tail for even integer p")
    pp = p.p
    h1 = math.exp((math.lgamma(2 * pp + 1) - math.lgamma(pp + 1)) / pp)
    return h1 / math.sin(math.pi / (2 * pp)) ** 2 / abs(math.sin(math.pi * pp / 2)) ** (1 / pp)


def boyd_rate(p):
    """Decay rate (p-1) sin(pi/(2(p-1))) of the stretched exponential."""
    p = as_exponent(p)
    return (p.p - 1.0) * math.sin(math.pi / (2.0 * (p.p - 1.0)))


def boyd_envelope(p, s):
    """Modulus of the even-p asymptotic expansion without the cosine factor."""
    p = as_exponent(p)
    pp = p.p
    s = np.asarray(s, dtype=float)
    q = pp / (pp - 1.0)
    amp = math.sqrt(2.0 * math.pi / (pp - 1.0)) / (
        pp ** (1.0 / (2.0 * (pp - 1.0))) * s ** ((pp / 2.0 - 1.0) / (pp - 1.0))
    )
    val = amp * np.exp(-boyd_rate(p) * (s / pp) ** q) / p.gamma_norm
    return float(val) if val.ndim == 0 else val


def boyd_phase(p, s):
    """Cosine argument of the even-p asymptotic expansion."""
    p = as_exponent(p)
    pp = p.p
    s = np.asarray(s, dtype=float)
    q = pp / (pp - 1.0)
    c = (pp - 1.0) * math.cos(math.pi / (2.0 * (pp - 1.0)))
    return c * (s / pp) ** q - (math.pi / 4.0) * (pp - 2.0) / (pp - 1.0)


def boyd_asymptotic(p, s):
    """Large-s expansion of gamma_p for even integer p >= 4 (diagnostic)."""
    p = as_exponent(p)
    if not p.is_even_integer or p.p < 4:
        raise RegimeError("boyd_asymptotic needs an even integer p >= 4")
    val = boyd_envelope(p, s) * np.cos(boyd_phase(p, s))
    return float(val) if np.ndim(val) == 0 else val


# ---------------------------------------------------------------------------
# rigorous decay envelope from repeated integration by parts


def _exp_power_derivatives(p: float, r: np.ndarray, order: int) -> np.ndarray:
    """Derivatives 0..order of exp(-r^p) at points r > 0 (Taylor recursion)."""
    g = np.empty((order + 1, r.size))
    for j in range(order + 1):
        b = binom(p, j)
        # integer p: the binomial vanishes beyond j = p, where r^(p-j) may overflow
        g[j] = 0.0 if b == 0 else -b * np.power(r, p - j)
    f = np.empty_like(g)
    f[0] = np.exp(g[0])
    for n in range(1, order + 1):
        acc = np.zeros(r.size)
        for j in range(1, n + 1):
            acc += j * g[j] * f[n - j]
        f[n] = acc / n
    fact = np.array([math.factorial(j) for j in range(order + 1)], dtype=float)
    return f * fact[:, None]


def _max_parts_order(p: PExponent, cap: int) -> int:
    if p.is_even_integer:
        return cap
    if p.is_odd_integer:
        return min(cap, int(p.p))
    return min(cap, int(math.floor(p.p)))


@lru_cache(maxsize=256)
def _variation_table(pp: float, cap: int = 16):
    """V_m = int_0^inf |d^m/dr^m exp(-r^p)| dr for admissible m.

    m integrations by parts are valid while the boundary terms at r = 0
    vanish and the m-th derivative stays integrable; for non-integer p that
    means m <= floor(p), for odd integer p m <= p.
    """
    p = PExponent(pp)
    m_max = _max_parts_order(p, cap)
    v = np.linspace(-60.0, math.log(60.0), 120_001)
    r_log = np.exp(v / pp)
    r_lin = np.linspace(0.0, float(r_log[0]) if r_log[0] < 1 else 1.0, 20_001)
    r = np.unique(np.concatenate([r_lin, r_log]))
    d = _exp_power_derivatives(pp, np.maximum(r, 1e-300), m_max)
    table = {}
    for m in range(1, m_max + 1):
        vals = np.abs(d[m])
        vals[~np.isfinite(vals)] = 0.0
        table[m] = float(np.trapezoid(vals, r)) * 1.001
    table[1] = 1.0  # exp(-r^p) is monotone from 1 to 0
    return tuple(sorted(table.items()))


def decay_constants(p) -> dict:
    """Map m -> V_m/Gamma(1+1/p), so that |gamma_p(s)| <= V_m / (Gamma s^m)."""
    p = as_exponent(p)
    norm = p.gamma_norm
    return {m: v / norm for m, v in _variation_table(p.p)}


def decay_envelope(p, s):
    """Certified upper bound on |gamma_p(s)| (at most 1)."""
    p = as_exponent(p)
    s = np.asarray(s, dtype=float)
    best = np.ones(s.shape)
    with np.errstate(divide="ignore"):
        for m, c in decay_constants(p).items():
            best = np.minimum(best, c / np.power(s, m))
    return float(best) if best.ndim == 0 else best


def envelope_radius(p, x: float) -> float:
    """Smallest S with decay_envelope(p, s) <= x for every s >= S."""
    if x >= 1.0:
        return 0.0
    return min((c / x) ** (1.0 / m) for m, c in decay_constants(p).items())


def envelope_tail_integral(p, start: float, u: float) -> float:
    """Upper bound on int_start^inf |gamma_p(s)|^u ds from the envelope."""
    best = math.inf
    for m, c in decay_constants(p).items():
        if m * u <= 1.0:
            continue
        log_val = u * math.log(c) + (1.0 - m * u) * math.log(start) - math.log(m * u - 1.0)
        best = min(best, math.exp(log_val) if log_val < 700 else math.inf)
    return best


# ---------------------------------------------------------------------------
# approximants


def spline_sinc_bound(p, s):
    """Approximation sin(s)/s of Gamma(1+1/p) gamma_p(s) with its error bound.

    Returns:
        Tuple (approx, err_bound) where err_bound = 1.016/p.
    """
    p = as_exponent(p)
    s = np.asarray(s, dtype=float)
    approx = np.sinc(s / math.pi)
    if approx.ndim == 0:
        approx = float(approx)
    return approx, 1.016 / p.p


def _require_15(p: PExponent):
    if p.p < 15:
        raise DomainError(f"the spline approximant needs p >= 15, got {p.p:g}")


def spline_constant(p) -> float:
    """Constant N with |Phi_p - Gamma(1+1/p) gamma_p| <= 1/(N p)."""
    p = as_exponent(p)
    _require_15(p)
    if p.p > 175:
        return 7.857
    if p.p >= 26:
        return 8.003
    return 8.62


def _sinc(x):
    return np.sinc(np.asarray(x, dtype=float) / math.pi)


def alpha_p(p, s):
    """Phase shift arctan(5 sin(2s/p) / (14 + 5 cos(2s/p)))."""
    p = as_exponent(p)
    y = 2.0 * np.asarray(s, dtype=float) / p.p
    val = np.arctan(5.0 * np.sin(y) / (14.0 + 5.0 * np.cos(y)))
    return float(val) if np.ndim(val) == 0 else val


def phi_p(p, s, form="sum"):
    """Spline approximant of Gamma(1+1/p) gamma_p(s).

    Args:
        p: Exponent, p >= 15.
        s: Scalar or array of s > 0.
        form: ``"sum"`` for the weighted sum of two sines, ``"phase"`` for the
            single phase-shifted sine with amplitude sqrt(221 + 140 cos(2s/p))/19.
    """
    p = as_exponent(p)
    _require_15(p)
    s = np.asarray(s, dtype=float)
    pp = p.p
    damp = _sinc(s / pp)
    if form == "sum":
        val = (
            14.0 / 19.0 * np.sin(s) + 5.0 / 19.0 * np.sin((1.0 - 2.0 / pp) * s)
        ) / s * damp
    elif form == "phase":
        amp = np.sqrt(221.0 + 140.0 * np.cos(2.0 * s / pp)) / 19.0
        val = amp * np.sin(s - alpha_p(p, s)) / s * damp
    else:
        raise DomainError(f"unknown form {form!r}")
    return float(val) if val.ndim == 0 else val


def spline_kernel(p, r):
    """Piecewise-linear approximant k_p of exp(-r^p)."""
    p = as_exponent(p)
    pp = p.p
    r = np.asarray(r, dtype=float)
    out = np.zeros(r.shape)
    out = np.where(r <= 1 - 3 / pp, 1.0, out)
    mid = (r > 1 - 3 / pp) & (r < 1 - 1 / pp)
    out = np.where(mid, 5 / 38 * pp * (1 - r) + 23 / 38, out)
    top = (r >= 1 - 1 / pp) & (r <= 1 + 1 / pp)
    out = np.where(top, 7 / 19 * pp * (1 - r) + 7 / 19, out)
    return out


def _gl_integrate(fun, breaks, order=48):
    x, w = _quad.gauss_legendre(order)
    total = 0.0
    for a, b in zip(breaks[:-1], breaks[1:]):
        if b <= a:
            continue
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        total += half * float(np.dot(w, fun(mid + half * x)))
    return total


def _crossing_breaks(diff, a, b, n=2001):
    """Panel breaks on [a, b] at the sign changes of ``diff``."""
    grid = np.linspace(a, b, n)
    vals = diff(grid)
    pts = [a, b]
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        lo, hi = grid[i], grid[i + 1]
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if np.sign(diff(np.array([mid]))[0]) == np.sign(diff(np.array([lo]))[0]):
                lo = mid
            else:
                hi = mid
        pts.append(0.5 * (lo + hi))
    return np.array(sorted(pts))


def spline_error_components(p) -> dict:
    """Pieces of the scaled L1 error p * int |exp(-r^p) - k_p(r)| dr.

    Returns:
        Dict with ``psi1`` (outer intervals), ``psi2`` (inner intervals after
        rescaling) and ``total = psi1 + psi2``. ``p = inf`` gives the limits.
    """
    if isinstance(p, PExponent):
        pp = p.p
    else:
        pp = float(p)
    if pp < 15:
        raise DomainError("spline error components need p >= 15")
    return {"psi1": psi1(pp), "psi2": psi2(pp), "total": psi1(pp) + psi2(pp)}


def _log_power_breaks(p: float, a: float, b: float, step=0.5):
    """Breaks on [a, b] that are uniform in log(r^p) wherever r > 0."""
    lo = max(a, math.exp(-60.0 / p))
    v = np.arange(p * math.log(lo), p * math.log(b), step)
    return np.unique(np.concatenate([[a, lo, b], np.exp(v / p)]))


def psi1(p: float) -> float:
    """p * (int_0^{1-3/p} (1 - e^{-r^p}) dr + int_{1+1/p}^inf e^{-r^p} dr)."""
    if math.isinf(p):
        from .special_fn import EULER_GAMMA, exp_integral_e1

        return EULER_GAMMA - 3.0 + exp_integral_e1(math.exp(-3.0)) + exp_integral_e1(math.e)
    a = 1.0 - 3.0 / p
    b = 1.0 + 1.0 / p
    inner = _gl_integrate(lambda r: -np.expm1(-np.power(r, p)), _log_power_breaks(p, 0.0, a))
    outer = _gl_integrate(lambda r: np.exp(-np.power(r, p)), _log_power_breaks(p, b, 60.0 ** (1.0 / p)))
    return p * (inner + outer)


def _l(p: float, x):
    x = np.asarray(x, dtype=float)
    if math.isinf(p):
        return np.exp(-np.exp(-10.0 * (1.0 - x)))
    return np.exp(-np.power(1.0 - 10.0 / p * (1.0 - x), p))


def psi2(p: float) -> float:
    """Rescaled inner-interval error 10 int_J |l_p - lambda| with J = [.7,1.1]."""

    def d1(x):
        return _l(p, x) - (73.0 / 38.0 - 25.0 / 19.0 * x)

    def d2(x):
        return _l(p, x) - (77.0 / 19.0 - 70.0 / 19.0 * x)

    b1 = _crossing_breaks(d1, 0.7, 0.9)
    b2 = _crossing_breaks(d2, 0.9, 1.1)
    return 10.0 * (
        _gl_integrate(lambda x: np.abs(d1(x)), b1) + _gl_integrate(lambda x: np.abs(d2(x)), b2)
    )


def psi3(p: float, q: float) -> float:
    """10 int_{0.7}^{1.1} (l_q - l_p), the monotone-in-p bridge term (q < p)."""
    br = np.linspace(0.7, 1.1, 41)
    return 10.0 * _gl_integrate(lambda x: _l(q, x) - _l(p, x), br)


def spline_l1_error(p) -> float:
    """int_0^inf |exp(-r^p) - k_p(r)| dr, integrated directly."""
    p = as_exponent(p)
    _require_15(p)
    pp = p.p
    knots = [0.0, 1 - 3 / pp, 1 - 1 / pp, 1 + 1 / pp, 60.0 ** (1 / pp)]
    fine = []
    for a, b in zip(knots[:-1], knots[1:]):
        diff = lambda r: np.exp(-np.power(r, pp)) - spline_kernel(p, r)  # noqa: E731
        br = _crossing_breaks(diff, a, b) if b - a < 1 else np.linspace(a, b, 65)
        fine.append(br)
    br = np.unique(np.concatenate(fine))
    return _gl_integrate(
        lambda r: np.abs(np.exp(-np.power(r, pp)) - spline_kernel(p, r)), br
    )


_PSI_WINDOWS = ((0.0, math.pi), (3.255, 2 * math.pi), (6.501, 3 * math.pi), (9.73, 4 * math.pi))
Y_MINUS = math.pi - math.acos(5.0 / 14.0)


def psi_p_lower(p, s):
    """Lower bound Psi_p(s) for Gamma(1+1/p) |gamma_p(s)|.

    Valid on the windows [0, pi], [3.255, 2pi], [6.501, 3pi], [9.73, 4pi]
    and for s <= p * y_- / 2.

    Raises:
        DomainError: If some s lies outside the validity windows.
    """
    p = as_exponent(p)
    _require_15(p)
    arr = np.atleast_1d(np.asarray(s, dtype=float))
    ok = np.zeros(arr.shape, dtype=bool)
    for a, b in _PSI_WINDOWS:
        ok |= (arr >= a) & (arr <= b)
    ok &= (arr > 0) & (arr <= p.p * Y_MINUS / 2.0)
    if not ok.all():
        raise DomainError(f"s outside the validity windows: {arr[~ok]}")
    pp = p.p
    amp = np.sqrt(221.0 + 140.0 * np.cos(2.0 * arr / pp)) / 19.0
    m = np.minimum(np.abs(np.sin(arr - alpha_p(p, arr))), np.abs(np.sin(arr)))
    val = amp * m / arr * _sinc(arr / pp) - 1.0 / (spline_constant(p) * pp)
    return float(val[0]) if np.ndim(s) == 0 else val


# ---------------------------------------------------------------------------
# zeros, extrema and bump profiles


def _value_and_slope(p, spec):
    def fun(x):
        x = np.asarray(x, dtype=float)
        return (
            gamma_p(p, x, spec, method="direct"),
            gamma_p_deriv(p, x, 1, spec),
        )

    return fun


def _slope_and_curvature(p, spec):
    def fun(x):
        x = np.asarray(x, dtype=float)
        return gamma_p_deriv(p, x, 1, spec), gamma_p_deriv(p, x, 2, spec)

    return fun


def find_zeros(p, s_lo, s_hi, spec: QuadratureSpec = DEFAULT_SPEC, step=math.pi / 8, refine_pairs=True):
    """Zeros of gamma_p in [s_lo, s_hi] and its critical points.

    Sign changes of gamma_p on a grid of the given step bracket the zeros,
    which are polished by safeguarded Newton. A grid cell without a sign
    change but with an interior critical point whose value has the opposite
    sign hides a pair of zeros; such pairs are split when ``refine_pairs``
    is set and raise ResolutionError otherwise.

    Returns:
        Tuple (zeros, crit) of sorted arrays.
    """
    p = as_exponent(p)
    n = max(2, int(math.ceil((s_hi - s_lo) / step)) + 1)
    grid = np.linspace(s_lo, s_hi, n)
    g = gamma_p(p, grid, spec, method="direct")
    dg = gamma_p_deriv(p, grid, 1, spec)
    # critical points from sign changes of the derivative
    dchg = np.nonzero(np.sign(dg[:-1]) * np.sign(dg[1:]) < 0)[0]
    crit = _quad.bracketed_newton(
        _slope_and_curvature(p, spec), grid[dchg], grid[dchg + 1], fa=dg[dchg], xtol=1e-12
    )
    crit_vals = gamma_p(p, crit, spec, method="direct") if crit.size else crit
    lo_list, hi_list, flo = [], [], []
    for i in range(n - 1):
        a, b = grid[i], grid[i + 1]
        if g[i] == 0.0:
            lo_list.append(a)
            hi_list.append(a)
            flo.append(0.0)
            continue
        if np.sign(g[i]) * np.sign(g[i + 1]) < 0:
            lo_list.append(a)
            hi_list.append(b)
            flo.append(g[i])
            continue
        inside = (crit > a) & (crit < b)
        flips = inside & (np.sign(crit_vals) * np.sign(g[i]) < 0)
        if np.any(flips):
            if not refine_pairs:
                raise ResolutionError(
                    f"grid step {step:g} misses a pair of zeros in [{a:.6g}, {b:.6g}]; "
                    "use a finer scan"
                )
            c = float(crit[flips][0])
            lo_list += [a, c]
            hi_list += [c, b]
            flo += [g[i], float(crit_vals[flips][0])]
    if g[-1] == 0.0:
        lo_list.append(grid[-1])
        hi_list.append(grid[-1])
        flo.append(0.0)
    lo = np.array(lo_list)
    hi = np.array(hi_list)
    exact = lo == hi
    zeros = lo.copy()
    if np.any(~exact):
        zeros[~exact] = _quad.bracketed_newton(
            _value_and_slope(p, spec), lo[~exact], hi[~exact], fa=np.array(flo)[~exact], xtol=1e-13
        )
    return np.unique(zeros), np.sort(crit)


@dataclass(frozen=True)
class BumpProfile:
    """Zeros and local extrema of gamma_p on a window.

    Attributes:
        p: Exponent.
        s_max: Right end of the scanned window.
        zeros: Increasing zeros of gamma_p in (0, s_max].
        extrema: (s, |gamma_p(s)|) at critical points, increasing in s.
        x1: max of |gamma_p| over s >= 3.
        x2: max of |gamma_p| over [2 pi, 3 pi].
    """

    p: float
    s_max: float
    zeros: tuple
    extrema: tuple
    x1: float
    x2: float

    def to_dict(self):
        return {
            "p": self.p,
            "s_max": self.s_max,
            "zeros": list(self.zeros),
            "extrema": [list(e) for e in self.extrema],
            "x1": self.x1,
            "x2": self.x2,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            p=float(d["p"]),
            s_max=float(d["s_max"]),
            zeros=tuple(float(z) for z in d["zeros"]),
            extrema=tuple((float(a), float(b)) for a, b in d["extrema"]),
            x1=float(d["x1"]),
            x2=float(d["x2"]),
        )


def bump_profile(p, s_max=None, spec: QuadratureSpec = DEFAULT_SPEC, step=math.pi / 8):
    """Zeros, extrema and the bump heights x1, x2 of gamma_p.

    Args:
        p: Exponent, p >= 15.
        s_max: Window end, at least 3 pi. Defaults to the point where the
            decay envelope falls below a tenth of the largest bump after 3.
        spec: Quadrature settings.
        step: Sign-change scan step.

    Raises:
        ResolutionError: If the scan step hides a pair of zeros.
    """
    p = as_exponent(p)
    _require_15(p)
    return _bump_profile_cached(p.p, None if s_max is None else float(s_max), spec, float(step))


@lru_cache(maxsize=64)
def _bump_profile_cached(pp, s_max, spec, step):
    p = PExponent(pp)
    if s_max is None:
        s_max = max(3 * math.pi, envelope_radius(p, 0.01))
    if s_max < 3 * math.pi:
        raise DomainError("s_max must be at least 3 pi")
    zeros, crit = find_zeros(p, 0.0, s_max, spec, step, refine_pairs=False)
    zeros = zeros[zeros > 0]
    crit = crit[crit > 0]
    cv = np.abs(gamma_p(p, crit, spec, method="direct")) if crit.size else crit
    ends = np.array([3.0, 2 * math.pi, 3 * math.pi, s_max])
    ev = np.abs(gamma_p(p, ends, spec, method="direct"))
    after3 = crit >= 3.0
    x1 = max(float(ev[0]), float(ev[3]), float(cv[after3].max()) if after3.any() else 0.0)
    if decay_envelope(p, s_max) > x1:
        raise ResolutionError("window too short to bound |gamma_p| beyond s_max")
    win = (crit >= 2 * math.pi) & (crit <= 3 * math.pi)
    x2 = max(float(ev[1]), float(ev[2]), float(cv[win].max()) if win.any() else 0.0)
    return BumpProfile(
        p=pp,
        s_max=s_max,
        zeros=tuple(float(z) for z in zeros),
        extrema=tuple((float(a), float(b)) for a, b in zip(crit, cv)),
        x1=x1,
        x2=x2,
    )


__all__ = [
    "PExponent",
    "QuadratureSpec",
    "DEFAULT_SPEC",
    "BumpProfile",
    "QuadratureError",
    "as_exponent",
    "gamma_p",
    "gamma_p_deriv",
    "gamma_p_tail",
    "tail_asymptote",
    "tail_threshold",
    "boyd_asymptotic",
    "spline_sinc_bound",
    "phi_p",
    "alpha_p",
    "spline_l1_error",
    "spline_error_components",
    "psi_p_lower",
    "bump_profile",
    "find_zeros",
    "decay_envelope",
    "envelope_radius",
]
