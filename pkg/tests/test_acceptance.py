"""The twelve acceptance criteria, one test each.

Every test prints a single PASS/FAIL line (visible even under output
capture) before asserting, so a full run doubles as a readable checklist.
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from gapcheck import cli
from gapcheck.forms import equality_form, search_trilinear_sup, self_dual_from, trilinear_chain_report, trilinear_ratio
from gapcheck.gap import (
    EQUALITY,
    VANISHING,
    VIOLATED,
    c12_constant_part,
    evaluate_gap,
    lemma3_check,
    make_spec,
    side_norm_function,
    threshold_profile,
)
from gapcheck.gauge import (
    InstantonParams,
    bpst_field,
    bpst_norm,
    charge,
    charge_monte_carlo,
    kato_ratio,
    pullback_norm_s4,
    self_dual_norms,
    ym_residual,
    zero_field,
)
from gapcheck.geometry import SPACE_NAMES, catalog, chm_laplacian_rho, chm_laplacian_rho_derivative, curvature_at
from gapcheck.geometry import laplacian_rho_identity_check
from gapcheck.lie import AlgebraMetric, bracket, commutator_constant, commutator_witness, gap_constant, norm, random_skew
from gapcheck.weights import (
    ak_weight,
    annulus_log_bound,
    bgg_weight,
    carron_weight,
    chm_weight,
    chm_weight_excess,
    cutoff,
    power_trial,
    verify_poincare,
)


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail=""):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number:>2}: {title}" + (f" ({detail})" if detail else ""))
        assert ok, detail

    return emit


def test_criterion_01_constants(report):
    a4 = gap_constant(4)
    checks = [
        abs(a4 - 4 / np.sqrt(3)) < 1e-12,
        abs(4 / a4 - np.sqrt(3)) < 1e-12,
        abs(gap_constant(3) - 2 / np.sqrt(1.5)) < 1e-12,
    ]
    for n in (3, 4, 5, 8):
        for alpha in (0.1, 0.5, 1.0, 2.0, 7.5):
            r = gap_constant(n, AlgebraMetric(alpha)) / gap_constant(n, AlgebraMetric(alpha, "tensor"))
            checks.append(abs(r - np.sqrt(2)) < 1e-12)
    report(1, "a_G values and convention ratio", all(checks), f"a_G(4) = {a4:.15g}")


def test_criterion_02_commutator_bound(report):
    g = np.random.default_rng(2)
    worst = 0.0
    for n in (3, 4, 5):
        for alpha in (0.5, 1.0, n - 2.0):
            m = AlgebraMetric(alpha)
            a = random_skew(g, n, size=10_000)
            b = random_skew(g, n, size=10_000)
            ratio = norm(bracket(a, b), m) / (commutator_constant(n, m) * norm(a, m) * norm(b, m))
            worst = max(worst, float(np.max(ratio)))
    m = AlgebraMetric(0.5)
    wa, wb = commutator_witness(3)
    sharp = float(norm(bracket(wa, wb), m) / (norm(wa, m) * norm(wb, m))) / commutator_constant(3, m)
    ok = worst <= 1 + 1e-12 and sharp >= 1 - 1e-9
    report(2, "commutator bound and n = 3 sharpness", ok, f"max ratio {worst:.6f}, witness {sharp:.12f}")


def test_criterion_03_trilinear_chain(report):
    g = np.random.default_rng(3)
    r = random_skew(g, 4, size=(3, 100_000))
    chain = trilinear_chain_report(self_dual_from(r[0], r[1], r[2]), rtol=1e-10)
    chain_ok = bool(np.all(chain.abs_sum <= chain.bound * (1 + 1e-10)))
    eq = float(trilinear_ratio(equality_form())) / gap_constant(4)
    sup = search_trilinear_sup(np.random.default_rng(33), samples=5000, starts=4) / gap_constant(4)
    ok = chain_ok and abs(eq - 1) < 1e-10 and sup >= 0.999
    report(3, "trilinear chain, equality form, supremum search", ok, f"equality {eq:.12f}, sup {sup:.9f}")


EXPECTED_CURVATURE = {
    "S4": (12.0, 0.0, 0.0),
    "CP2": (24.0, None, 0.0),
    "S3xR": (6.0, 0.0, 0.0),
    "H4": (-12.0, 0.0, 0.0),
    "CH2": (-24.0, None, 0.0),
    "R4": (0.0, 0.0, 0.0),
}


def test_criterion_04_curvature_kernel(report):
    g = np.random.default_rng(4)
    worst = 0.0
    residual = 0.0
    positive = True
    cp2_spectrum = None
    for name in SPACE_NAMES:
        space = catalog(name)
        scalar, lam_p, lam_m = EXPECTED_CURVATURE[name]
        for x in space.sample(g, 100):
            d = curvature_at(space, x)
            worst = max(worst, abs(d.scalar - scalar), abs(d.lambda_max_minus - lam_m))
            if lam_p is None:
                positive &= d.lambda_max_plus > 1e-3
            else:
                worst = max(worst, abs(d.lambda_max_plus - lam_p))
            residual = max(residual, d.decomposition_residual())
            if name == "CP2":
                cp2_spectrum = d.spectrum_plus
    x = cp2_spectrum[0]
    shape_ok = abs(x - 4) < 1e-4 and np.allclose(cp2_spectrum[1:], -x / 2, atol=1e-4)
    ok = worst < 1e-5 and residual < 1e-6 and positive and shape_ok
    report(4, "curvature kernel on the six model spaces", ok, f"max error {worst:.2e}, residual {residual:.1e}")


def test_criterion_05_weight_identities(report):
    rho = np.geomspace(0.01, 50, 500)
    errs = [
        np.max(np.abs(ak_weight(lambda r: 3 / r, lambda r: -3 / r**2)(rho) * rho**2 - 1)),
        np.max(np.abs(bgg_weight(lambda r: r)(rho) * rho**2 - 1)),
    ]
    for m in (1, 2, 3):
        ak = ak_weight(chm_laplacian_rho(m), chm_laplacian_rho_derivative(m))(rho)
        errs.append(np.max(np.abs(ak / chm_weight(m)(rho) - 1)))
    identity = max(
        max(res.square_residual, res.derivative_residual)
        for m in (1, 2, 3)
        for res in (laplacian_rho_identity_check(m, r) for r in np.geomspace(0.01, 30, 40))
    )
    grid = np.geomspace(1e-6, 1e3, 20_000)
    positive = all(np.all(chm_weight_excess(m)(grid) > 0) for m in (1, 2, 3))
    ok = max(errs) < 1e-8 and identity < 1e-10 and positive
    report(5, "weight identities and positivity", ok, f"max rel error {max(errs):.1e}, identities {identity:.1e}")


def test_criterion_06_poincare(report):
    combos = [("R4", carron_weight()), ("H4", bgg_weight(b=1.0)), ("CH2", chm_weight(2))]
    worst = np.inf
    for name, weight in combos:
        tests = [cutoff(f, r) for f in ("linear", "log", "unit") for r in (2.0, 10.0, 100.0)]
        worst = min(worst, verify_poincare(catalog(name), weight, tests).min_ratio)
    sharp = verify_poincare(catalog("R4"), carron_weight(), [power_trial(1.03, 1e40)]).min_ratio
    ok = worst >= 1 - 1e-6 and sharp <= 1.05
    report(6, "weighted Poincare ratios", ok, f"min ratio {worst:.6f}, near-sharp trial {sharp:.6f}")


def test_criterion_07_bpst(report):
    g = np.random.default_rng(7)
    rel = 0.0
    minus = 0.0
    for _ in range(1000):
        p = InstantonParams(tuple(g.normal(size=4)), float(g.uniform(0.2, 3.0)))
        x = g.normal(size=4) * 2
        fp, fm = self_dual_norms(bpst_field(p), x)
        rel = max(rel, abs(fp / bpst_norm(p, x) - 1))
        minus = max(minus, fm / fp)
    field = bpst_field()
    pts = g.normal(size=(50, 4))
    pts *= (g.uniform(0, 3, size=50) / np.linalg.norm(pts, axis=1))[:, None]
    ym = max(ym_residual(field, x) for x in pts)
    k = charge(field)
    mc, _ = charge_monte_carlo(field, np.random.default_rng(77), samples=20_000)
    s4 = pullback_norm_s4(field, g.normal(size=(200, 4)) * 3)
    s4_dev = float(np.max(np.abs(s4 - np.sqrt(3))))
    ok = rel < 1e-8 and minus < 1e-10 and ym < 1e-4 and abs(k - 1) < 1e-3 and abs(mc - 1) < 0.05 and s4_dev < 1e-8
    report(7, "BPST norm, self-duality, YM residual, charge, S^4 norm", ok, f"charge {k:.9f}, MC {mc:.4f}, YM {ym:.1e}")


def test_criterion_08_kato(report):
    g = np.random.default_rng(8)
    field = bpst_field()
    ratios = []
    while len(ratios) < 100:
        x = g.normal(size=4)
        x *= g.uniform(0.1, 3.0) / np.linalg.norm(x)
        ratios.append(kato_ratio(field, x))
    worst = min(ratios)
    report(8, "refined Kato ratio on BPST", worst >= 1.5 - 1e-3, f"min ratio {worst:.9f}")


def test_criterion_09_lemma3(report):
    g = np.random.default_rng(9)
    field = bpst_field()
    s4 = catalog("S4")
    s4_dev = 0.0
    for x in s4.sample(g, 10):
        res = lemma3_check(field, s4, 0.5, x)
        s4_dev = max(s4_dev, abs(res.lhs), abs(res.rhs))
    r4 = catalog("R4")
    flat_ok = True
    for _ in range(50):
        x = g.normal(size=4)
        x *= g.uniform(0.2, 2.0) / np.linalg.norm(x)
        res = lemma3_check(field, r4, 0.5, x)
        flat_ok &= res.lhs >= res.rhs - 1e-3 * (1 + abs(res.rhs))
    coef = 0.0
    rho = np.geomspace(0.05, 20, 200)
    for name, w in (("R4", carron_weight()), ("H4", bgg_weight(b=1.0)), ("CH2", chm_weight(2))):
        t1 = threshold_profile(make_spec("T1", catalog(name), w, p=0.5), rho)
        t2 = threshold_profile(make_spec("T2", catalog(name), w), rho)
        coef = max(coef, float(np.max(np.abs(t1 - t2) / np.maximum(1, np.abs(t2)))))
    ok = s4_dev < 1e-3 and flat_ok and coef < 1e-12
    report(9, "differential inequality checks", ok, f"S^4 sides within {s4_dev:.1e}, T1/T2 {coef:.1e}")


def test_criterion_10_gap_verdicts(report):
    g = np.random.default_rng(10)
    s4 = catalog("S4")
    t5 = make_spec("T5", s4)
    pts = s4.sample(g, 40)
    v_eq = evaluate_gap(side_norm_function(bpst_field(), s4), t5, pts).verdict
    v_zero = evaluate_gap(side_norm_function(zero_field(), s4), t5, pts).verdict
    r4 = catalog("R4")
    rep = evaluate_gap(
        lambda x: float(self_dual_norms(bpst_field(), x)[0]),
        make_spec("C10", r4),
        [np.array([1.0, 0.0, 0.0, 0.0])],
    )
    a_g = gap_constant(4)
    witness = -rep.violation_witness.margin if rep.violation_witness else np.nan
    c12 = max(abs(c12_constant_part(3 / 8)), abs(c12_constant_part(3 / 4)))
    rho = np.linspace(1e-3, 100, 5000)[:-1]
    t14 = threshold_profile(make_spec("T14", catalog("CH2")), rho)
    ok = (
        v_eq == EQUALITY
        and v_zero == VANISHING
        and rep.verdict == VIOLATED
        and abs(witness - (np.sqrt(3) - 2 / a_g)) < 1e-6
        and c12 < 1e-12
        and bool(np.all(t14 > 0))
    )
    report(10, "gap verdicts and threshold identities", ok, f"{v_eq}, {v_zero}, {rep.verdict}, witness {witness:.9f}")


def test_criterion_11_annulus(report):
    cyl = [annulus_log_bound(catalog("S3xR"), 1, r) for r in (10.0, 100.0, 1000.0)]
    flat = [annulus_log_bound(catalog("R4"), 4, r) for r in (10.0, 100.0, 1000.0)]
    ok = max(cyl) / min(cyl) < 2 and max(flat) / min(flat) < 2 and np.allclose(flat, 2 * np.pi**2, rtol=1e-8)
    report(11, "annulus log-volume bound", ok, f"S3xR {min(cyl):.4f}..{max(cyl):.4f}, R4 {flat[0]:.6f}")


def test_criterion_12_reproducibility(report, tmp_path, capsys):
    same = True
    for argv in (
        ["gauge", "--seed", "5", "--samples", "8"],
        ["gap", "--theorem", "T5", "--space", "S4", "--seed", "5"],
        ["lemma3", "--space", "S4", "--seed", "5", "--samples", "4"],
    ):
        blobs = []
        for k in range(2):
            out = tmp_path / f"{argv[0]}_{k}.csv"
            assert cli.main([*argv, "--out", str(out)]) == 0
            blobs.append(out.read_bytes())
        same &= blobs[0] == blobs[1]
    capsys.readouterr()
    report(12, "seeded CSV reports are byte-identical", same)
