"""Command-line front end.

Every command prints either a CSV table (17 significant digits) or a JSON
envelope ``{"command", "kind", "records", "meta"}`` whose records parse back
with the matching ``from_dict``. Exit status: 0 success, 2 invalid input,
3 degraded or indeterminate results (or failed report rows) under --strict.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import ball_inequality as bi
from .constants import constants_at, solve_p0, solve_p1, solve_p2
from .errors import DomainError, LpSectionsError, ValidationError
from .gamma_p import QuadratureSpec, bump_profile, find_zeros, gamma_p, gamma_p_deriv
from .reports import REPORTS, run_report
from .sections import Direction, compare_candidates, section_brute, section_mc, section_polya

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INDETERMINATE = 3


@dataclass
class Output:
    """What a command produced, before formatting."""

    kind: str
    records: list
    columns: list
    rows: list
    meta: dict = field(default_factory=dict)
    flagged: bool = False


# ---------------------------------------------------------------------------
# argument helpers


def _floats(text: str) -> list:
    try:
        return [float(v) for v in text.replace(",", " ").split()]
    except ValueError as exc:
        raise ValidationError(f"cannot parse numbers from {text!r}") from exc


def _range(values, spacing="lin") -> np.ndarray:
    if len(values) != 3:
        raise ValidationError("a range needs START STOP COUNT")
    a, b, n = values
    n = int(n)
    if n < 1 or not math.isfinite(a) or not math.isfinite(b) or (n > 1 and b <= a):
        raise ValidationError("range must be nonempty and increasing")
    return np.geomspace(a, b, n) if spacing == "log" else np.linspace(a, b, n)


def _points(args, name: str, spacing="lin") -> np.ndarray:
    explicit = getattr(args, name)
    rng = getattr(args, f"{name}_range")
    if explicit is None and rng is None:
        raise ValidationError(f"give --{name} or --{name}-range")
    if explicit is not None:
        return np.asarray(_floats(explicit))
    return _range(rng, spacing)


def parse_direction(text: str, n: int | None, normalize: bool = False) -> Direction:
    """``diag`` (a^(n)), an integer k (a^(k)) or an explicit coordinate list."""
    text = text.strip()
    if text == "diag":
        if n is None:
            raise ValidationError("--a diag needs --n")
        return Direction.equal(n, n)
    if text.isdigit():
        if n is None:
            raise ValidationError("--a k needs --n")
        return Direction.equal(int(text), n)
    coords = _floats(text)
    if n is not None and len(coords) != n:
        raise ValidationError(f"--a has {len(coords)} coordinates but --n is {n}")
    return Direction.normalized(coords) if normalize else Direction(tuple(coords))


def _spec(args) -> QuadratureSpec:
    kw = {}
    if args.rel_tol is not None:
        kw["rel_tol"] = args.rel_tol
    if args.abs_tol is not None:
        kw["abs_tol"] = args.abs_tol
    if any(v <= 0 for v in kw.values()):
        raise ValidationError("tolerances must be positive")
    return QuadratureSpec(**kw)


def read_config(path: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment. Keys use flag names."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValidationError(f"{path}:{lineno}: expected key = value")
            key, value = (t.strip() for t in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


# ---------------------------------------------------------------------------
# commands


def cmd_constants(args) -> Output:
    ps = _floats(args.p) if args.p else [solve_p0()]
    recs = [constants_at(p) for p in ps]
    cols = list(recs[0].to_dict())
    meta = {"p0": solve_p0(), "p1": solve_p1(), "p2": solve_p2()}
    return Output("CriticalConstants", [r.to_dict() for r in recs], cols, [list(r.to_dict().values()) for r in recs], meta)


def cmd_gamma(args) -> Output:
    spec = _spec(args)
    p = args.p
    if args.action == "eval":
        s = _points(args, "s")
        if args.order:
            vals, errs = gamma_p_deriv(p, s, args.order, spec, return_error=True)
        else:
            vals, errs = gamma_p(p, s, spec, method=args.method, return_error=True)
        vals, errs = np.atleast_1d(vals), np.atleast_1d(errs)
        rows = [[p, float(si), args.order, float(v), float(e)] for si, v, e in zip(s, vals, errs)]
        cols = ["p", "s", "order", "value", "error_bound"]
        return Output("table", [dict(zip(cols, r)) for r in rows], cols, rows)
    if args.action == "zeros":
        if args.s_max is None:
            raise ValidationError("gamma zeros needs --s-max")
        zeros, _ = find_zeros(p, 0.0, args.s_max, spec)
        rows = [[p, float(z)] for z in zeros]
        cols = ["p", "zero_s"]
        return Output("table", [dict(zip(cols, r)) for r in rows], cols, rows)
    prof = bump_profile(p, args.s_max, spec)
    d = prof.to_dict()
    rows = [[p, "x1", prof.x1], [p, "x2", prof.x2]] + [[p, f"extremum_s={s:.6f}", v] for s, v in prof.extrema]
    return Output("BumpProfile", [d], ["p", "quantity", "value"], rows)


def cmd_hp(args) -> Output:
    spec = _spec(args)
    p = args.p
    if args.action == "deriv2":
        val, err = bi.h_p_deriv_at_2(p, spec, return_error=True)
        cols = ["p", "h_p_prime_at_2", "error_bound"]
        row = [p, val, err]
        return Output("table", [dict(zip(cols, row))], cols, [row], flagged=err > 5e-4)
    us = _points(args, "u") if args.action == "sweep" or args.u_range else np.asarray(_floats(args.u or "2"))
    if not args.s_cap > 0:
        raise ValidationError("--s-cap must be positive")
    recs = [bi.h_p_detail(p, u, spec, s_cap=args.s_cap) for u in us]
    cols = list(recs[0].to_dict())
    return Output(
        "HpResult",
        [r.to_dict() for r in recs],
        cols,
        [list(r.to_dict().values()) for r in recs],
        flagged=any(r.degraded for r in recs),
    )


def cmd_np(args) -> Output:
    spec = _spec(args)
    if args.action == "check":
        rep = bi.np_full_check(args.p, spec)
        d = rep.to_dict()
        cols = ["p", "u", "h_p(u)", "target", "crossing_x0", "sign_pattern_ok", "ratio_min", "conclusion_ok"]
        rows = [[rep.p, u, h, rep.target, rep.crossing_x0, rep.sign_pattern_ok, rep.ratio_min, rep.conclusion_ok] for u, h in rep.hp_curve]
        return Output("NpReport", [d], cols, rows, flagged=not rep.conclusion_ok or bool(rep.indeterminate_windows))
    xs = _points(args, "x", "log")
    curve = bi.distribution_F(args.p, xs, spec)
    cols = ["x", "F_lo", "F_hi"]
    rows = [[x, lo, hi] for x, lo, hi in zip(curve.grid, curve.value_lo, curve.value_hi)]
    return Output("DistributionCurve", [curve.to_dict()], cols, rows)


def cmd_fsinc(args) -> Output:
    xs = _points(args, "x", "log")
    rows = []
    for x in xs:
        num, bound = bi.f_sinc_distribution(float(x))
        rows.append([float(x), num, bound])
    cols = ["x", "F_sinc", "lower_bound"]
    return Output("table", [dict(zip(cols, r)) for r in rows], cols, rows)


def cmd_section(args) -> Output:
    spec = _spec(args)
    if args.action == "compare":
        rows_ = compare_candidates(args.p, args.n, spec)
        cols = ["label", "value", "err", "source"]
        return Output("CandidateRow", [r.to_dict() for r in rows_], cols, [list(r.to_dict().values()) for r in rows_])
    a = parse_direction(args.a, args.n, args.normalize)
    method = "mc" if args.action == "mc" else args.method
    if method == "polya":
        est = section_polya(args.p, a, spec)
    elif method == "mc":
        est = section_mc(args.p, a, args.samples, args.seed)
    else:
        est = section_brute(args.p, a)
    cols = ["p", "method", "value", "err"]
    row = [args.p, est.method, est.value, est.err]
    d = est.to_dict()
    return Output("SectionEstimate", [d], cols, [row], {"direction": list(a.coords)}, flagged=bool(est.meta.get("degraded")))


def cmd_reproduce(args) -> Output:
    if args.report_id not in REPORTS:
        raise ValidationError(f"unknown report {args.report_id!r}; available: {', '.join(sorted(REPORTS))}")
    kw = {"spec": _spec(args)}
    if args.p is not None:
        kw["p"] = args.p
    rows_ = run_report(args.report_id, **kw)
    cols = ["quantity", "quoted", "computed", "relation", "tol", "passed"]
    rows = [[r.quantity, r.quoted if not isinstance(r.quoted, tuple) else f"[{r.quoted[0]}, {r.quoted[1]}]", r.computed, r.relation, r.tol, r.passed] for r in rows_]
    return Output("ReportRow", [r.to_dict() for r in rows_], cols, rows, {"report": args.report_id}, flagged=not all(r.passed for r in rows_))


# ---------------------------------------------------------------------------
# parser and output


def _common(parser: argparse.ArgumentParser):
    g = parser.add_argument_group("output")
    g.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)
    g.add_argument("--out", default=argparse.SUPPRESS, help="write to this path instead of stdout")
    g.add_argument("--strict", action="store_true", default=argparse.SUPPRESS, help="exit 3 on degraded or indeterminate results")
    g.add_argument("--rel-tol", type=float, default=argparse.SUPPRESS)
    g.add_argument("--abs-tol", type=float, default=argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lpsections", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="key = value file supplying defaults")
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    ap.add_argument("--out")
    ap.add_argument("--strict", action="store_true")
    ap.add_argument("--rel-tol", type=float)
    ap.add_argument("--abs-tol", type=float)
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("constants", help="c_p, d_p, h_p(2), h_p(inf) and p0, p1, p2")
    c.add_argument("--p", help="one or more exponents (default p0)")
    _common(c)
    c.set_defaults(func=cmd_constants)

    g = sub.add_parser("gamma", help="gamma_p values, zeros and bump profile")
    g.add_argument("action", choices=("eval", "zeros", "bumps"))
    g.add_argument("--p", type=float)
    g.add_argument("--s")
    g.add_argument("--s-range", type=float, nargs=3, metavar=("START", "STOP", "COUNT"))
    g.add_argument("--s-max", type=float, default=None)
    g.add_argument("--order", type=int, choices=(0, 1, 2), default=0)
    g.add_argument("--method", choices=("auto", "direct", "contour"), default="auto")
    _common(g)
    g.set_defaults(func=cmd_gamma)

    h = sub.add_parser("hp", help="h_p(u) = sqrt(u) int |gamma_p|^u")
    h.add_argument("action", choices=("eval", "sweep", "deriv2"))
    h.add_argument("--p", type=float)
    h.add_argument("--u")
    h.add_argument("--u-range", type=float, nargs=3, metavar=("START", "STOP", "COUNT"))
    h.add_argument("--s-cap", type=float, default=bi.DEFAULT_S_CAP, help="largest truncation point in s")
    _common(h)
    h.set_defaults(func=cmd_hp)

    n = sub.add_parser("np", help="distribution-function comparison")
    n.add_argument("action", choices=("check", "dist"))
    n.add_argument("--p", type=float)
    n.add_argument("--x")
    n.add_argument("--x-range", type=float, nargs=3, metavar=("START", "STOP", "COUNT"))
    _common(n)
    n.set_defaults(func=cmd_np)

    f = sub.add_parser("fsinc", help="distribution function of |sin s / s|")
    f.add_argument("--x")
    f.add_argument("--x-range", type=float, nargs=3, metavar=("START", "STOP", "COUNT"))
    _common(f)
    f.set_defaults(func=cmd_fsinc)

    s = sub.add_parser("section", help="normalized section volumes A_{n,p}(a)")
    s.add_argument("action", choices=("eval", "compare", "mc"))
    s.add_argument("--p", type=float)
    s.add_argument("--n", type=int)
    s.add_argument("--a", default="diag", help="'diag', k for a^(k), or comma-separated coordinates")
    s.add_argument("--normalize", action="store_true", help="sort and rescale explicit coordinates")
    s.add_argument("--method", choices=("polya", "mc", "brute"), default="polya")
    s.add_argument("--samples", type=int, default=1_000_000)
    s.add_argument("--seed", type=int, default=0)
    _common(s)
    s.set_defaults(func=cmd_section)

    r = sub.add_parser("reproduce", help="quoted values against recomputation")
    r.add_argument("report_id", help=f"one of: {', '.join(sorted(REPORTS))}")
    r.add_argument("--p", type=float)
    _common(r)
    r.set_defaults(func=cmd_reproduce)
    return ap


def _cell(v):
    if isinstance(v, bool) or v is None:
        return "" if v is None else str(v).lower()
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return str(v)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    return obj


def render(out: Output, fmt: str, command: str) -> str:
    if fmt == "json":
        env = {"command": command, "kind": out.kind, "records": out.records, "meta": out.meta}
        return json.dumps(_jsonable(env), indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(out.columns)
    for row in out.rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


_NEEDS_P = ("gamma", "hp", "np", "section")


def _with_config(argv: list, cfg: dict) -> list:
    """Append config entries as flags unless the command line already sets them."""
    out = list(argv)
    for key, value in cfg.items():
        flag = "--" + key.replace("_", "-")
        if any(a == flag or a.startswith(flag + "=") for a in argv):
            continue
        if key == "strict":
            if value.lower() in ("1", "true", "yes"):
                out.append(flag)
            continue
        out += [flag, value]
    return out


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            cfg = read_config(args.config)
        except (OSError, ValidationError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_VALIDATION
        cfg.pop("config", None)
        args = parser.parse_args(_with_config(argv, cfg))
    try:
        if args.command in _NEEDS_P and args.p is None:
            raise ValidationError(f"{args.command} needs --p (on the command line or in --config)")
        out = args.func(args)
    except (ValidationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except LpSectionsError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_INDETERMINATE
    text = render(out, args.format, args.command)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if out.flagged:
        print("warning: degraded, indeterminate or failing results", file=sys.stderr)
        if args.strict:
            return EXIT_INDETERMINATE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
