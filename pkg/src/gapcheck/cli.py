"""Command-line entry point: ``gapcheck <suite> [flags]``.

Each suite evaluates one family of checks, writes a CSV or JSON report and
exits 0 when every asserted check passes, 2 when one fails, 1 on a usage or
configuration error.  Options may also come from a ``key = value`` file
given with ``--config``; flags on the command line win.

CSV columns per suite:

    constants  n, alpha, convention, commutator_constant, a_G, four_over_a_G, max_bracket_ratio
    forms      index, abs_sum, triples, corner, amgm, bound
    curvature  x1, x2, x3, x4, scalar, lambda_max_plus, lambda_max_minus, decomposition_residual
    poincare   family, r, gradient_integral, weighted_integral, ratio
    gauge      x1, x2, x3, x4, norm, closed_form_norm, minus_over_norm, ym_residual, kato_ratio
    gap        rho, f_plus_norm, threshold, margin
    lemma3     x1, x2, x3, x4, lhs, rhs, tolerance, status
    all        suite, status, detail
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import forms, gap, gauge, geometry, lie, weights

SUITES = ("constants", "forms", "curvature", "poincare", "gauge", "gap", "lemma3", "all")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class Report:
    columns: list
    rows: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def check(self, ok, message):
        if not ok:
            self.failures.append(message)

    @property
    def passed(self):
        return not self.failures


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".12g")
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return float(format(f, ".12g")) if np.isfinite(f) else str(f)
    if isinstance(v, (int, np.integer)):
        return int(v)
    return v


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        body = {
            "columns": report.columns,
            "rows": [dict(zip(report.columns, (_jsonable(v) for v in row))) for row in report.rows],
            "summary": _jsonable({**report.summary, "passed": report.passed, "failures": report.failures}),
        }
        return json.dumps(body, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(report.columns)
    for row in report.rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


# --------------------------------------------------------------------------
# argument handling


def _floats(text):
    try:
        return [float(t) for t in str(text).split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _center(text):
    vals = _floats(text)
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("center needs 4 comma-separated numbers")
    return tuple(vals)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gapcheck", description="Numerical checks for Yang-Mills gap thresholds.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", help="key = value file; flags override it")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--samples", type=int, default=20)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="report path (default: stdout)")
        p.add_argument("--alpha", type=float, default=0.5)
        p.add_argument("--convention", choices=lie.CONVENTIONS, default=lie.STANDARD)
        p.add_argument("--n", type=int, default=4)
        return p

    def field_flags(p):
        p.add_argument("--connection", choices=("zero", "bpst"), default="bpst")
        p.add_argument("--lambda", dest="scale", type=float, default=1.0)
        p.add_argument("--center", type=_center, default=(0.0, 0.0, 0.0, 0.0))

    common(sub.add_parser("constants", help="a_G and the commutator constant"))
    common(sub.add_parser("forms", help="trilinear estimate chain on random self-dual forms"))
    p = common(sub.add_parser("curvature", help="curvature kernel on a model space"))
    p.add_argument("--space", choices=geometry.SPACE_NAMES, default="S4")
    p = common(sub.add_parser("poincare", help="radial weighted Poincare ratios"))
    p.add_argument("--space", choices=geometry.SPACE_NAMES, default="R4")
    p.add_argument("--weight", choices=("carron", "bgg", "ak", "chm"), default="carron")
    p.add_argument("--cutoff", choices=("linear", "log", "unit", "all"), default="all")
    p.add_argument("--r", type=_floats, default=[2.0, 10.0, 100.0])
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--m", type=int, default=2)
    p = common(sub.add_parser("gauge", help="BPST field checks"))
    field_flags(p)
    p = common(sub.add_parser("gap", help="threshold comparison and verdict"))
    p.add_argument("--theorem", choices=gap.THEOREMS, default="T5")
    p.add_argument("--space", choices=geometry.SPACE_NAMES, default="S4")
    p.add_argument("--weight", choices=("carron", "bgg", "ak", "chm"))
    p.add_argument("--p", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--expect", choices=(gap.VANISHING, gap.EQUALITY, gap.VIOLATED))
    field_flags(p)
    p = common(sub.add_parser("lemma3", help="differential inequality for |F+|^p"))
    p.add_argument("--space", choices=("R4", "S4"), default="R4")
    p.add_argument("--p", type=float, default=0.5)
    field_flags(p)
    common(sub.add_parser("all", help="every suite with default settings"))
    return parser


def read_config(path) -> dict:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for k, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{k}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.config:
        return args
    cfg = read_config(args.config)
    sub = parser._subparsers._group_actions[0].choices[args.command]
    actions = {a.dest: a for a in sub._actions}
    cfg = {("scale" if k == "lambda" else k): v for k, v in cfg.items()}
    for key, value in cfg.items():
        if key not in actions or key in ("config", "help"):
            raise UsageError(f"unknown config key {key!r} for {args.command}")
        act = actions[key]
        if act.choices is not None and value not in act.choices:
            raise UsageError(f"config {key} = {value!r} not in {sorted(act.choices)}")
    sub.set_defaults(**cfg)
    return parser.parse_args(argv)


def _metric(args):
    try:
        return lie.AlgebraMetric(args.alpha, args.convention)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _field(args):
    if args.connection == "zero":
        return gauge.zero_field()
    try:
        return gauge.bpst_field(gauge.InstantonParams(args.center, args.scale))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# --------------------------------------------------------------------------
# suites


def run_constants(args) -> Report:
    metric = _metric(args)
    try:
        c = float(lie.commutator_constant(args.n, metric))
        a = float(lie.gap_constant(args.n, metric))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rng = np.random.default_rng(args.seed)
    m = lie.random_skew(rng, args.n, size=(args.samples,))
    k = lie.random_skew(rng, args.n, size=(args.samples,))
    ratio = lie.norm(lie.bracket(m, k), metric) / (lie.norm(m, metric) * lie.norm(k, metric))
    worst = float(np.max(ratio)) / c
    rep = Report(["n", "alpha", "convention", "commutator_constant", "a_G", "four_over_a_G", "max_bracket_ratio"])
    rep.rows.append([args.n, args.alpha, args.convention, c, a, 4.0 / a, worst])
    rep.check(worst <= 1.0 + 1e-12, "commutator bound exceeded")
    rep.summary = {"a_G": a, "commutator_constant": c}
    return rep


def run_forms(args) -> Report:
    metric = _metric(args)
    rng = np.random.default_rng(args.seed)
    coef = lie.random_skew(rng, 4, size=(3, args.samples))
    form = forms.self_dual_from(coef[0], coef[1], coef[2])
    rep = Report(["index", "abs_sum", "triples", "corner", "amgm", "bound"])
    try:
        chain = forms.trilinear_chain_report(form, metric)
    except forms.ChainViolation as exc:
        rep.failures.append(str(exc))
        chain = forms.trilinear_chain_report(form, metric, check=False)
    for i, row in enumerate(zip(*chain.as_tuple())):
        rep.rows.append([i, *row])
    eq = float(forms.trilinear_ratio(forms.equality_form(), metric)) / float(lie.gap_constant(4, metric))
    rep.check(abs(eq - 1.0) < 1e-10, f"equality configuration ratio {eq}")
    rep.summary = {"equality_ratio_over_a_G": eq}
    return rep


def run_curvature(args) -> Report:
    space = geometry.catalog(args.space)
    rng = np.random.default_rng(args.seed)
    rep = Report(["x1", "x2", "x3", "x4", "scalar", "lambda_max_plus", "lambda_max_minus", "decomposition_residual"])
    pts = space.sample(rng, args.samples)
    for x in pts:
        d = geometry.curvature_at(space, x)
        rep.rows.append([*x, d.scalar, d.lambda_max_plus, d.lambda_max_minus, d.decomposition_residual()])
        rep.check(d.decomposition_residual() < 1e-6, f"decomposition residual at {x}")
    vals = np.array([r[4:7] for r in rep.rows], dtype=float)
    spread = float(np.max(np.ptp(vals, axis=0))) if len(vals) else 0.0
    rep.check(spread < 1e-5, f"curvature not constant across samples (spread {spread:.3g})")
    rep.summary = {"space": space.name, "spread": spread}
    return rep


def _weight(name, space, b=1.0, m=2):
    if name == "carron":
        return weights.carron_weight()
    if name == "bgg":
        return weights.bgg_weight(b=b)
    if name == "chm":
        return weights.chm_weight(m)
    return weights.ak_weight(space.laplacian_rho, space.laplacian_rho_derivative)


def run_poincare(args) -> Report:
    space = geometry.catalog(args.space)
    weight = _weight(args.weight, space, args.b, args.m)
    families = ("linear", "log", "unit") if args.cutoff == "all" else (args.cutoff,)
    try:
        tests = [weights.cutoff(f, r) for f in families for r in args.r]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rep = Report(["family", "r", "gradient_integral", "weighted_integral", "ratio"])
    try:
        res = weights.verify_poincare(space, weight, tests)
    except weights.DivergentIntegralError as exc:
        rep.failures.append(str(exc))
        return rep
    for t, g, q, ratio in zip(tests, res.gradient_integrals, res.weighted_integrals, res.ratios):
        rep.rows.append([t.family, t.parameters["r"], g, q, ratio])
    rep.check(res.passed, f"min ratio {res.min_ratio:.12g} below 1")
    rep.summary = {"min_ratio": res.min_ratio, "weight": weight.name}
    return rep


def _shell_points(rng, count, center, lo, hi):
    d = rng.normal(size=(count, 4))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    return np.asarray(center) + d * rng.uniform(lo, hi, size=(count, 1))


def run_gauge(args) -> Report:
    metric = _metric(args)
    fld = _field(args)
    rng = np.random.default_rng(args.seed)
    rep = Report(["x1", "x2", "x3", "x4", "norm", "closed_form_norm", "minus_over_norm", "ym_residual", "kato_ratio"])
    pts = _shell_points(rng, args.samples, fld.center, 0.1 * fld.scale, 3.0 * fld.scale)
    params = gauge.InstantonParams(fld.center, fld.scale)
    for x in pts:
        fp, fm = gauge.self_dual_norms(fld, x, metric)
        total = float(forms.norm(gauge.curvature(fld, x), metric))
        closed = float(gauge.bpst_norm(params, x)) if args.connection == "bpst" else 0.0
        ym = gauge.ym_residual(fld, x, metric)
        try:
            kato = gauge.kato_ratio(fld, x, metric)
        except gauge.CriticalPointError:
            kato = float("nan")
        minus = float(fm) / total if total > 0 else 0.0
        rep.rows.append([*x, total, closed, minus, ym, kato])
        if args.connection == "bpst" and metric == lie.DEFAULT_METRIC:
            rep.check(abs(total - closed) <= 1e-8 * closed, f"norm formula at {x}")
        rep.check(minus < 1e-10, f"anti-self-dual part at {x}")
        rep.check(ym < 1e-4, f"Yang-Mills residual at {x}")
        rep.check(not kato < 1.5 - 1e-3, f"Kato ratio {kato} at {x}")
    q = gauge.charge(fld, metric)
    expected = 1.0 if args.connection == "bpst" else 0.0
    if metric == lie.DEFAULT_METRIC:
        rep.check(abs(q - expected) < 1e-3, f"charge {q}")
    rep.summary = {"charge": q, "connection": fld.name}
    return rep


def run_gap(args) -> Report:
    metric = _metric(args)
    space = geometry.catalog(args.space)
    weight = None if args.weight is None else _weight(args.weight, space, args.b or 1.0)
    try:
        spec = gap.make_spec(args.theorem, space, weight, args.p, args.b, None, metric, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    fld = _field(args)
    rng = np.random.default_rng(args.seed)
    pts = space.sample(rng, args.samples)
    norm_fn = gap.side_norm_function(fld, space, spec.side, metric)
    rep_gap = gap.evaluate_gap(norm_fn, spec, pts)
    rep = Report(["rho", "f_plus_norm", "threshold", "margin"])
    for s in rep_gap.samples:
        rep.rows.append([s.rho, s.field_norm, s.threshold, s.margin])
    rep.check(rep_gap.recompute_verdict() == rep_gap.verdict, "verdict not reproducible from samples")
    shuffled = gap.evaluate_gap(norm_fn, spec, pts[::-1])
    rep.check(shuffled.verdict == rep_gap.verdict, "verdict depends on sample order")
    if args.expect:
        rep.check(rep_gap.verdict == args.expect, f"verdict {rep_gap.verdict}, expected {args.expect}")
    witness = rep_gap.strictness_witness or rep_gap.violation_witness
    rep.summary = {
        "verdict": rep_gap.verdict,
        "witnesses": [] if witness is None else [{"rho": witness.rho, "margin": witness.margin}],
        "tolerances": {"equality_rtol": rep_gap.equality_rtol, "violation_atol": rep_gap.violation_atol},
        "theorem": args.theorem,
        "space": space.name,
    }
    return rep


def run_lemma3(args) -> Report:
    metric = _metric(args)
    space = geometry.catalog(args.space)
    fld = _field(args)
    rng = np.random.default_rng(args.seed)
    if space.name == "R4":
        pts = _shell_points(rng, args.samples, fld.center, 0.2 * fld.scale, 2.0 * fld.scale)
    else:
        pts = space.sample(rng, args.samples)
    rep = Report(["x1", "x2", "x3", "x4", "lhs", "rhs", "tolerance", "status"])
    data = geometry.curvature_at(space, pts[0]) if len(pts) else None
    for x in pts:
        try:
            res = gap.lemma3_check(fld, space, args.p, x, metric, args.n, curvature=data)
        except gap.SkippedSample:
            rep.rows.append([*x, float("nan"), float("nan"), float("nan"), "skipped"])
            continue
        rep.rows.append([*x, res.lhs, res.rhs, res.tolerance, "ok" if res.holds else "fail"])
        rep.check(res.holds, f"inequality fails at {x}")
    return rep


_RUNNERS = {
    "constants": run_constants,
    "forms": run_forms,
    "curvature": run_curvature,
    "poincare": run_poincare,
    "gauge": run_gauge,
    "gap": run_gap,
    "lemma3": run_lemma3,
}


def run_all(args) -> Report:
    rep = Report(["suite", "status", "detail"])
    base = ["--seed", str(args.seed), "--samples", str(min(args.samples, 10))]
    plans = [
        ("constants", []),
        ("forms", []),
        ("curvature", ["--space", "CP2"]),
        ("poincare", ["--space", "H4", "--weight", "bgg"]),
        ("gauge", []),
        ("gap", ["--theorem", "T5", "--space", "S4", "--expect", gap.EQUALITY]),
        ("lemma3", ["--space", "S4"]),
    ]
    for name, extra in plans:
        sub = parse_args([name, *base, *extra])
        r = _RUNNERS[name](sub)
        rep.rows.append([name, "pass" if r.passed else "fail", "; ".join(r.failures[:3])])
        rep.failures.extend(f"{name}: {f}" for f in r.failures)
    return rep


def run(args) -> tuple[int, str]:
    runner = run_all if args.command == "all" else _RUNNERS[args.command]
    report = runner(args)
    return (0 if report.passed else 2), render(report, args.format)


def main(argv=None) -> int:
    try:
        args = parse_args(sys.argv[1:] if argv is None else argv)
        if args.samples < 1:
            raise UsageError("--samples must be positive")
        status, text = run(args)
    except UsageError as exc:
        print(f"gapcheck: error: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.command == "constants":
        metric = _metric(args)
        line = f"a_G = {float(lie.gap_constant(args.n, metric)):.12g}, c = {float(lie.commutator_constant(args.n, metric)):.12g}"
        # keep stdout a clean report when it carries one
        print(line, file=sys.stdout if args.out else sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
