"""Shared numerical kernels: panel Gauss-Legendre quadrature and root finding."""

import math
from functools import lru_cache

import numpy as np

from .errors import QuadratureError, SolverError

_EPS = np.finfo(float).eps
MAX_CHUNK_ELEMENTS = 2_000_000


@lru_cache(maxsize=None)
def gauss_legendre(order):
    """Nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def panel_nodes(a, b, order=24):
    """Flattened nodes for panels [a_i, b_i] and the matching half-widths."""
    x, _ = gauss_legendre(order)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return (mid[:, None] + half[:, None] * x[None, :]).ravel(), half


def _panel_sums(f, a, b, order):
    """Gauss rule on each panel; returns (nbatch, npanels) plus abs-value sums."""
    _, w = gauss_legendre(order)
    nodes, half = panel_nodes(a, b, order)
    vals = np.atleast_2d(f(nodes))
    vals = vals.reshape(vals.shape[0], a.size, order)
    q = (vals @ w) * half
    qa = (np.abs(vals) @ w) * half
    return q, qa


def _evaluate_panels(f, a, b, order, nbatch_hint):
    """Coarse and two-half fine estimates, chunked to bound memory."""
    per_panel = 3 * order * max(1, nbatch_hint)
    chunk = max(1, MAX_CHUNK_ELEMENTS // per_panel)
    coarse, fine, mags = [], [], []
    for i in range(0, a.size, chunk):
        aa, bb = a[i : i + chunk], b[i : i + chunk]
        mm = 0.5 * (aa + bb)
        qc, _ = _panel_sums(f, aa, bb, order)
        q1, m1 = _panel_sums(f, aa, mm, order)
        q2, m2 = _panel_sums(f, mm, bb, order)
        coarse.append(qc)
        fine.append(q1 + q2)
        mags.append(m1 + m2)
    return (
        np.concatenate(coarse, axis=1),
        np.concatenate(fine, axis=1),
        np.concatenate(mags, axis=1),
    )


def integrate_panels(
    f,
    breaks,
    abs_tol=1e-13,
    rel_tol=1e-10,
    max_rounds=40,
    order=24,
    nbatch=1,
    raise_on_fail=True,
):
    """Adaptive composite Gauss-Legendre quadrature over given breakpoints.

    Each panel is accepted when the difference between the one-panel rule and
    the two-half rule is within its share of the global tolerance, or when it
    sits at the rounding floor of the panel's absolute mass. Rejected panels
    are bisected.

    Args:
        f: Callable mapping a 1-D node array to values of shape (len,) or
            (nbatch, len).
        breaks: Increasing breakpoints; the panels are consecutive pairs.
        abs_tol: Absolute tolerance for the total.
        rel_tol: Relative tolerance for the total.
        max_rounds: Maximum bisection rounds.
        order: Gauss-Legendre order per panel.
        nbatch: Leading batch size returned by ``f``.
        raise_on_fail: Raise QuadratureError if tolerance is not met;
            otherwise return the best estimate with its error bound.

    Returns:
        Tuple (values, errors), each of shape (nbatch,).
    """
    breaks = np.asarray(breaks, dtype=float)
    a = breaks[:-1].copy()
    b = breaks[1:].copy()
    keep = b > a
    a, b = a[keep], b[keep]
    total_len = float(breaks[-1] - breaks[0]) if breaks.size > 1 else 0.0
    done_val = np.zeros(nbatch)
    done_err = np.zeros(nbatch)
    if a.size == 0:
        return done_val, done_err
    for _ in range(max_rounds):
        qc, qf, mag = _evaluate_panels(f, a, b, order, nbatch)
        err = np.abs(qf - qc)
        floor = 64.0 * _EPS * mag
        current = done_val + qf.sum(axis=1)
        tol = np.maximum(abs_tol, rel_tol * np.abs(current))
        share = tol[:, None] * ((b - a) / total_len)[None, :]
        ok = np.all((err <= share) | (err <= floor), axis=0)
        done_val += qf[:, ok].sum(axis=1)
        done_err += err[:, ok].sum(axis=1)
        if ok.all():
            return done_val, done_err
        a, b = a[~ok], b[~ok]
        mid = 0.5 * (a + b)
        if np.any(mid <= a) or np.any(mid >= b):
            break
        a, b = np.concatenate([a, mid]), np.concatenate([mid, b])
        order_idx = np.argsort(a)
        a, b = a[order_idx], b[order_idx]
    # out of rounds: fold in last fine estimates
    qc, qf, _ = _evaluate_panels(f, a, b, order, nbatch)
    done_val += qf.sum(axis=1)
    done_err += np.abs(qf - qc).sum(axis=1)
    if raise_on_fail:
        worst = float(np.max(done_err))
        raise QuadratureError(
            f"panel quadrature did not converge; error bound {worst:.3g}",
            error_bound=worst,
            value=float(done_val[0]) if nbatch == 1 else float("nan"),
        )
    return done_val, done_err


def bracketed_newton(fun, a, b, fa=None, xtol=1e-14, max_iter=100):
    """Vectorised safeguarded Newton iteration on sign-change brackets.

    Args:
        fun: Maps an array x to (values, derivatives).
        a, b: Arrays of bracket endpoints with fun(a) * fun(b) <= 0.
        fa: Optional values at ``a``.
        xtol: Absolute bracket width at which iteration stops.
        max_iter: Iteration cap.

    Returns:
        Array of roots.
    """
    a = np.asarray(a, dtype=float).copy()
    b = np.asarray(b, dtype=float).copy()
    if a.size == 0:
        return a
    if fa is None:
        fa, _ = fun(a)
    fa = np.asarray(fa, dtype=float).copy()
    x = 0.5 * (a + b)
    for _ in range(max_iter):
        fx, dfx = fun(x)
        exact = fx == 0.0
        same = np.sign(fx) == np.sign(fa)
        a = np.where(same & ~exact, x, a)
        fa = np.where(same & ~exact, fx, fa)
        b = np.where(~same & ~exact, x, b)
        a = np.where(exact, x, a)
        b = np.where(exact, x, b)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = x - fx / dfx
        inside = np.isfinite(step) & (step > a) & (step < b)
        x_new = np.where(inside, step, 0.5 * (a + b))
        conv = (b - a) <= xtol + 4 * _EPS * np.abs(x)
        newton_small = inside & (np.abs(x_new - x) <= 0.5 * xtol)
        x = x_new
        if np.all(conv | newton_small | exact):
            return x
    raise SolverError("bracketed Newton iteration did not converge")


def golden_max(fun, a, b, tol=1e-10, max_iter=200):
    """Maximise a unimodal scalar function on [a, b] by golden-section search.

    Returns:
        Tuple (argmax, max value).
    """
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(max_iter):
        if abs(b - a) <= tol:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fun(d)
    x = 0.5 * (a + b)
    return x, fun(x)
