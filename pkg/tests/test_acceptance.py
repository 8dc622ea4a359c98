"""The fourteen acceptance criteria, each at its stated tolerance and time budget.

Every test prints a single PASS/FAIL line (repeated in the terminal summary)
listing the sub-checks that failed.
"""

import math
import time

import numpy as np

from conftest import ACCEPTANCE_LINES
from lpsections import ball_inequality as bi
from lpsections.constants import c_const, constants_at, d_const, solve_p0, solve_p1, solve_p2
from lpsections.gamma_p import (
    gamma_p,
    gamma_p_tail,
    phi_p,
    psi1,
    psi2,
    psi3,
    spline_constant,
    tail_threshold,
)
from lpsections.sections import Direction, radial_ks_distance, section_brute, section_mc, section_polya


class Criterion:
    def __init__(self, number, title, budget):
        self.number, self.title, self.budget = number, title, budget
        self.failed = []
        self.start = time.perf_counter()

    def check(self, name, ok):
        if not ok:
            self.failed.append(name)

    def finish(self):
        elapsed = time.perf_counter() - self.start
        self.check(f"runtime {elapsed:.1f}s > {self.budget:g}s", elapsed < self.budget)
        verdict = "PASS" if not self.failed else "FAIL"
        line = f"acceptance #{self.number} {verdict}: {self.title} ({elapsed:.1f}s)"
        if self.failed:
            line += " | failed: " + "; ".join(self.failed)
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert not self.failed, line


def test_01_critical_exponents():
    c = Criterion(1, "critical exponents p0, p1, p2", 1.0)
    p0, p1, p2 = solve_p0(), solve_p1(), solve_p2()
    c.check(f"p0={p0:.6f}", abs(p0 - 26.265) <= 0.005)
    c.check(f"p1={p1:.6f}", abs(p1 - 4.192) <= 0.005)
    c.check(f"p2={p2:.6f}", abs(p2 - 9.1147) <= 0.001)
    c.finish()


def test_02_constants():
    c = Criterion(2, "constants c_p, d_p", 1.0)
    p0 = solve_p0()
    c.check("c_2", abs(c_const(2.0) - 0.25) <= 1e-12)
    c.check("d_2", abs(d_const(2.0) - 0.25) <= 1e-12)
    c.check(f"c_p2={c_const(solve_p2()):.6f}", abs(c_const(solve_p2()) - 0.15715) <= 1e-4)
    c.check(f"c_15={c_const(15.0):.6f}", abs(c_const(15.0) - 0.1584) <= 5e-4)
    c.check(f"c_p0={c_const(p0):.6f}", abs(c_const(p0) - 0.1609) <= 5e-4)
    c.check(f"d_p0={d_const(p0):.6f}", abs(d_const(p0) - 0.1609) <= 5e-4)
    c.check(f"d_1e6={d_const(1e6):.7f}", abs(d_const(1e6) - 0.15915) <= 1e-5)
    c.finish()


def test_03_plancherel():
    c = Criterion(3, "Plancherel identity for h_p(2)", 30.0)
    for p in (3.0, 5.5, 15.0, 26.265, 100.0):
        dev = abs(bi.h_p(p, 2.0) * 2.0 * math.sqrt(d_const(p) / math.pi) - 1.0)
        c.check(f"p={p:g} dev={dev:.2e}", dev <= 1e-6)
    c.finish()


def test_04_section_values():
    c = Criterion(4, "section values and closed forms", 120.0)
    for p, k, n, quoted in ((6.0, 3, 3, 1.250), (8.0, 4, 4, 1.295), (8.0, 3, 4, 1.270)):
        v = section_polya(p, Direction.equal(k, n)).value
        c.check(f"A_{n},{p:g}(a{k})={v:.6f}", abs(v - quoted) <= 0.005)
    for p, closed in ((6.0, 2 ** (1 / 3)), (8.0, 2 ** (3 / 8))):
        v = section_polya(p, Direction.equal(2, 3), tol=1e-13).value
        c.check(f"a2 at p={p:g} off by {abs(v - closed):.1e}", abs(v - closed) <= 1e-12)
    c.finish()


def test_05_oracle_equivalence():
    c = Criterion(5, "polya vs brute force vs Monte Carlo", 300.0)
    rng = np.random.default_rng(2024)
    cases = []
    for i in range(20):
        n = 2 + i % 2
        p = (3.0, 6.0, 26.265)[i % 3]
        cases.append((p, Direction.normalized(rng.standard_normal(n))))
    polya = []
    for p, a in cases:
        pv = section_polya(p, a).value
        bv = section_brute(p, a).value
        polya.append(pv)
        c.check(f"brute p={p:g} a={a.coords}", abs(pv - bv) <= 1e-5)
    for i in range(5):
        p, a = cases[i]
        mc = section_mc(p, a, samples=1_000_000, seed=100 + i)
        c.check(f"mc p={p:g} a={a.coords} z={(mc.value - polya[i]) / mc.err:.2f}", abs(mc.value - polya[i]) <= 3 * mc.err)
    c.finish()


def test_06_hp_derivative_signs():
    c = Criterion(6, "signs of h_p'(2)", 60.0)
    for p, bound, sign in ((4.0, 0.009, 1), (4.3, 0.002, 1), (4.5, -0.002, -1)):
        v, err = bi.h_p_deriv_at_2(p, return_error=True)
        c.check(f"h'_{p:g}(2)={v:.6f}", (v > bound) if sign > 0 else (v < bound))
        c.check(f"error {err:.1e} at p={p:g}", err < 5e-4)
    c.finish()


def test_07_gaussian_majorant():
    c = Criterion(7, "gamma_p below exp(-c_p s^2) on [0, 3]", 120.0)
    s = 0.01 * np.arange(0, 301)
    for p in (5.0, 9.0, 15.0, 26.265, 100.0):
        excess = float(np.max(gamma_p(p, s) - np.exp(-c_const(p) * s * s)))
        c.check(f"p={p:g} excess={excess:.2e}", excess <= 1e-10)
    c.finish()


def test_08_spline_envelopes():
    c = Criterion(8, "sinc and spline envelopes, psi components", 120.0)
    for p in (15.0, 26.0, 100.0, 200.0):
        s = np.linspace(0.01, 3 * p, 3000)
        g = math.gamma(1 + 1 / p) * gamma_p(p, s)
        dev_sinc = float(np.max(np.abs(np.sinc(s / math.pi) - g)))
        dev_spline = float(np.max(np.abs(phi_p(p, s) - g)))
        c.check(f"sinc p={p:g} {dev_sinc:.3e}", dev_sinc <= 1.016 / p)
        c.check(f"spline p={p:g} {dev_spline:.3e}", dev_spline <= 1 / (spline_constant(p) * p))
    for name, val, quoted in (
        ("psi1(inf)", psi1(math.inf), 0.06791),
        ("psi2(26)", psi2(26.0), 0.05675),
        ("psi3(inf,26)", psi3(math.inf, 26.0), 0.01993),
    ):
        c.check(f"{name}={val:.6f} vs {quoted}", abs(val - quoted) <= 1e-4)
    c.finish()


def test_09_sinc_bumps():
    c = Criterion(9, "sinc bump landmarks", 1.0)
    s1, y1 = bi.sinc_bump(1)
    s2, y2 = bi.sinc_bump(2)
    c.check(f"y1={y1:.6f}", abs(y1 - 0.21723) <= 1e-4)
    c.check(f"s1={s1:.5f}", abs(s1 - 4.493) <= 1e-3)
    c.check(f"y2={y2:.6f} vs 0.12827", abs(y2 - 0.12827) <= 1e-4)
    c.check(f"s2={s2:.5f}", abs(s2 - 7.725) <= 1e-3)
    c.finish()


def test_10_fsinc_bound():
    c = Criterion(10, "F_sinc lower bound", 10.0)
    bad = []
    for x in np.geomspace(1e-4, 1 / (2 * math.pi), 200):
        num, bound = bi.f_sinc_distribution(x)
        if not num >= bound:
            bad.append(x)
    c.check(f"{len(bad)} violations", not bad)
    c.finish()


def test_11_power_tail(oracles):
    c = Criterion(11, "power tail and rotated contour", 60.0)
    p = 5.5
    s0 = tail_threshold(p, factor=5.0 / 8.0)
    s = s0 * np.linspace(1.0, 10.0, 10)
    tail = gamma_p_tail(p, s)
    ratio = tail * math.gamma(1 + 1 / p) * s ** (p + 1) / (math.gamma(p + 1) * math.sin(math.pi * p / 2))
    worst = float(np.max(np.abs(ratio - 1)))
    c.check(f"tail ratio deviation {worst:.3e}", worst < 0.5)
    ref = next(float(r["value"]) for r in oracles["gamma_p"] if r["p"] == 5.5 and r["s"] == 40.0)
    rel = abs(gamma_p(p, 40.0, method="contour") / ref - 1)
    c.check(f"contour at s=40 rel {rel:.2e}", rel <= 1e-6)
    c.finish()


def test_12_np_pipeline():
    c = Criterion(12, "distribution-function pipeline at p=30 and p=22", 600.0)
    rep = bi.np_full_check(30.0)
    c.check(f"p=30 conclusion {rep.checks}", rep.conclusion_ok)
    x0 = rep.crossing_x0
    c.check(f"p=30 crossing {x0}", x0 is not None and 1 / 20 < x0 < rep.x1)
    h2 = constants_at(30.0).h2
    c.check("p=30 h_p(u) <= h_p(2)", all(v <= h2 + 1e-6 for _, v in rep.hp_curve))
    c.check("p=30 u-grid", [u for u, _ in rep.hp_curve] == [2, 3, 4, 8, 16, 64])
    rep22 = bi.np_full_check(22.0)
    hinf = constants_at(22.0).h_inf
    c.check(f"p=22 conclusion {rep22.checks}", rep22.conclusion_ok)
    c.check("p=22 h_p(u) <= h_p(inf)", all(v <= hinf + 1e-6 for _, v in rep22.hp_curve))
    for name, claim in bi.RATIO_CLAIMS.items():
        v = bi.ratio_landmark_bound(name)
        c.check(f"ratio at {name}={v:.4f} vs {claim}", v > claim)
    c.finish()


def test_13_psi_margins():
    c = Criterion(13, "psi_A margins", 1.0)
    v = bi.psi_A_margin(400.0, 400.0, "coarse")
    c.check(f"coarse A=p p=400: {v:.3f} > 2", v > 2)
    v = bi.psi_A_margin(265.0, 10.0, "coarse")
    c.check(f"coarse A=10 p=265: {v:.3f} > 1", v > 1)
    p0 = solve_p0()
    for regime, a, p in (
        ("refined_175", "p", 50.0),
        ("refined_26", 2.0, 26.5),
        ("refined_26", 1.5, p0),
        ("refined_26", 10.0, 37.0),
        ("refined_26", "p", 46.0),
        ("refined_20", 15 / 14, 20.2),
    ):
        av = p if a == "p" else a
        v = bi.psi_A_margin(p, av, regime)
        c.check(f"{regime} A={a} p={p:g}: {v:.4f}", v > 0)
    c.finish()


def test_14_radial_sampler():
    c = Criterion(14, "radial sampler KS distance", 30.0)
    for p in (3.0, 26.265):
        d = radial_ks_distance(p, samples=1_000_000, seed=7)
        c.check(f"p={p:g} KS={d:.5f}", d < 0.002)
    c.finish()
