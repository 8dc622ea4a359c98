"""Registered reproduction tables: quoted values next to computed ones."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .ball_inequality import (
    RATIO_CLAIMS,
    derivative_ratio,
    distribution_F,
    distribution_G,
    h_p_deriv_at_2,
    psi_A_margin,
    ratio_landmark_bound,
    sinc_bump,
)
from .constants import c_const, constants_at, d_const, solve_p0, solve_p1, solve_p2
from .errors import DomainError
from .gamma_p import (
    DEFAULT_SPEC,
    bump_profile,
    gamma_p,
    phi_p,
    psi1,
    psi2,
    psi3,
    psi_p_lower,
    spline_constant,
)
from .sections import Direction, section_polya


@dataclass(frozen=True)
class ReportRow:
    """One quoted value and its recomputation.

    ``relation`` is ``"approx"`` (|computed - quoted| <= tol), ``">"``,
    ``"<"`` or ``"in"`` (quoted is a (lo, hi) pair).
    """

    quantity: str
    quoted: object
    computed: float
    relation: str
    tol: float
    passed: bool

    def to_dict(self):
        d = asdict(self)
        if isinstance(self.quoted, tuple):
            d["quoted"] = list(self.quoted)
        return d

    @classmethod
    def from_dict(cls, d):
        q = d["quoted"]
        return cls(
            quantity=d["quantity"],
            quoted=tuple(q) if isinstance(q, list) else q,
            computed=float(d["computed"]),
            relation=d["relation"],
            tol=float(d["tol"]),
            passed=bool(d["passed"]),
        )


def row(quantity, quoted, computed, relation="approx", tol=0.0) -> ReportRow:
    computed = float(computed)
    if relation == "approx":
        ok = abs(computed - quoted) <= tol
    elif relation == ">":
        ok = computed > quoted
    elif relation == "<":
        ok = computed < quoted
    elif relation == "in":
        ok = quoted[0] <= computed <= quoted[1]
    else:
        raise DomainError(f"unknown relation {relation!r}")
    return ReportRow(quantity, quoted, computed, relation, tol, bool(ok))


def critical_exponents(**_):
    return [
        row("p0", 26.265, solve_p0(), tol=0.005),
        row("p1", 4.192, solve_p1(), tol=0.005),
        row("p2", 9.1147, solve_p2(), tol=0.001),
    ]


def constants_report(**_):
    p0, p2 = solve_p0(), solve_p2()
    return [
        row("c_2", 0.25, c_const(2.0), tol=1e-12),
        row("d_2", 0.25, d_const(2.0), tol=1e-12),
        row("c_p2", 0.15715, c_const(p2), tol=1e-4),
        row("c_15", 0.1584, c_const(15.0), tol=5e-4),
        row("c_p0", 0.1609, c_const(p0), tol=5e-4),
        row("d_p0", 0.1609, d_const(p0), tol=5e-4),
        row("d at p=1e6", 0.15915, d_const(1e6), tol=1e-5),
    ]


def conjecture_sections(spec=DEFAULT_SPEC, **_):
    def polya(p, k, n):
        return section_polya(p, Direction.equal(k, n), spec).value

    return [
        row("A_3,6(a2)", 1.260, polya(6, 2, 3), tol=0.005),
        row("A_3,6(a3)", 1.250, polya(6, 3, 3), tol=0.005),
        row("A_4,8(a2)", 1.297, polya(8, 2, 4), tol=0.005),
        row("A_4,8(a4)", 1.295, polya(8, 4, 4), tol=0.005),
        row("A_4,8(a3)", 1.270, polya(8, 3, 4), tol=0.005),
        row("2^(1/3) closed form", 2.0 ** (1.0 / 3.0), polya(6, 2, 2), tol=1e-9),
        row("2^(3/8) closed form", 2.0 ** (3.0 / 8.0), polya(8, 2, 2), tol=1e-9),
    ]


def np_margins(p=30.0, spec=DEFAULT_SPEC, **_):
    rows = [row(f"ratio bound at x={k}", v, ratio_landmark_bound(k), ">") for k, v in RATIO_CLAIMS.items()]
    cc = constants_at(p)
    coeff = min(cc.c_p, cc.d_p)
    for label, x in (("1/8", 1 / 8), ("1/10", 1 / 10), ("1/20", 1 / 20)):
        ratio, _ = derivative_ratio(p, x, coeff, spec)
        rows.append(row(f"|F'|/|G'| at x={label}, p={p:g}", 1.0, ratio, ">"))
    f20 = distribution_F(p, [1 / 20], spec)
    rows.append(row(f"F(1/20) lower, p={p:g}", 7.15, f20.lo[0], ">"))
    rows.append(row(f"G(1/20), p={p:g}", 4.35, distribution_G(1 / 20, cc.d_p), "<"))
    return rows


PSI_CITED = (
    ("coarse", "p", 400.0, 2.0),
    ("coarse", 10.0, 265.0, 1.0),
    ("refined_175", "p", 50.0, 2.0),
    ("refined_26", 2.0, 26.5, 0.0),
    ("refined_26", 1.5, None, 0.0),
    ("refined_26", 10.0, 37.0, 0.0),
    ("refined_26", "p", 46.0, 0.0),
    ("refined_20", 15.0 / 14.0, 20.2, 0.0),
)


def psi_margins(**_):
    rows = []
    for regime, a, p, bound in PSI_CITED:
        p = solve_p0() if p is None else p
        a_val = p if a == "p" else a
        label = f"psi_A {regime}, A={a if a == 'p' else f'{a:g}'}, p={p:g}"
        rows.append(row(label, bound, psi_A_margin(p, a_val, regime), ">"))
    return rows


def hp_deriv(spec=DEFAULT_SPEC, **_):
    rows = []
    for p, bound, rel in ((4.0, 0.009, ">"), (4.3, 0.002, ">"), (4.5, -0.002, "<")):
        val = h_p_deriv_at_2(p, spec)
        rows.append(row(f"h_{p:g}'(2)", bound, val, rel))
    return rows


def _sup_deviation(p, approx, s):
    g = gamma_p(p, s) * math.gamma(1.0 + 1.0 / p)
    return float(np.max(np.abs(g - approx)))


def spline_components(**_):
    rows = [
        row("psi1(inf)", 0.06791, psi1(math.inf), tol=1e-4),
        row("psi2(26)", 0.05675, psi2(26.0), tol=1e-4),
        row("psi3(inf, 26)", 0.01993, psi3(math.inf, 26.0), tol=1e-4),
    ]
    for p in (15.0, 26.0, 100.0, 200.0):
        s = np.linspace(0.01, 3.0 * p, 3000)
        rows.append(row(f"sup|G gamma - sinc|, p={p:g}", 1.016 / p, _sup_deviation(p, np.sinc(s / math.pi), s), "<"))
        n = spline_constant(p)
        rows.append(row(f"sup|G gamma - Phi|, p={p:g}", 1.0 / (n * p), _sup_deviation(p, phi_p(p, s), s), "<"))
    return rows


def sinc_bumps(**_):
    s1, y1 = sinc_bump(1)
    s2, y2 = sinc_bump(2)
    return [
        row("y1", 0.21723, y1, tol=1e-4),
        row("s1", 4.493, s1, tol=1e-3),
        row("y2", 0.12827, y2, tol=1e-4),
        row("s2", 7.725, s2, tol=1e-3),
    ]


def bump_heights(spec=DEFAULT_SPEC, **_):
    p0 = solve_p0()
    norm15 = math.gamma(1.0 + 1.0 / 15.0)
    rows = [
        row("Psi_15(4.63)", 0.19056, psi_p_lower(15.0, 4.63), ">"),
        row("Psi_p0(4.58)", 0.2010, psi_p_lower(p0, 4.58), ">"),
        row("Psi_15(7.94)", 0.09767, psi_p_lower(15.0, 7.94), ">"),
        row("Psi_15(7.94)/Gamma(16/15)", 0.1011, psi_p_lower(15.0, 7.94) / norm15, ">"),
    ]
    for p in (15.0, 20.0, p0, 30.0, 100.0):
        prof = bump_profile(p, spec=spec)
        big = p >= p0
        rows.append(row(f"x1({p:g})", (0.2010, 0.2267) if big else (0.1973, 0.2336), prof.x1, "in"))
        rows.append(row(f"x2({p:g})", (0.1113, 0.1360) if big else (0.1011, 0.1416), prof.x2, "in"))
    return rows


REPORTS = {
    "critical-exponents": critical_exponents,
    "constants": constants_report,
    "conjecture-sections": conjecture_sections,
    "np-margins": np_margins,
    "psi-margins": psi_margins,
    "hp-deriv": hp_deriv,
    "spline-components": spline_components,
    "sinc-bumps": sinc_bumps,
    "bump-heights": bump_heights,
}


def run_report(report_id: str, **kw) -> list:
    """Rows of a registered report.

    Raises:
        DomainError: For an unknown id; the message lists the registered ids.
    """
    if report_id not in REPORTS:
        raise DomainError(f"unknown report {report_id!r}; available: {', '.join(sorted(REPORTS))}")
    return REPORTS[report_id](**kw)
