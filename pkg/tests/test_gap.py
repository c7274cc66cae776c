import numpy as np
import pytest
from numpy.testing import assert_allclose

from gapcheck.gap import (
    EQUALITY,
    THEOREMS,
    VANISHING,
    VIOLATED,
    GapBoundSpec,
    SkippedSample,
    c12_constant_part,
    evaluate_gap,
    lemma3_check,
    make_spec,
    p_coefficient,
    side_norm,
    side_norm_function,
    threshold,
    threshold_profile,
)
from gapcheck.gauge import InstantonParams, bpst_field, pullback_norm_s4, self_dual_norms, zero_field
from gapcheck.geometry import catalog, curvature_at
from gapcheck.lie import gap_constant
from gapcheck.weights import bgg_weight, carron_weight, chm_weight

A_G = 4 / np.sqrt(3)


def test_p_coefficient():
    assert p_coefficient(0.5) == 2.0
    assert_allclose(p_coefficient(1.0), 1.5)


def test_t5_on_s4():
    spec = make_spec("T5", catalog("S4"))
    assert_allclose(threshold(spec, np.zeros(4)), np.sqrt(3), rtol=1e-7)
    assert_allclose(threshold(spec, np.array([0.3, 0.1, -0.2, 0.4]), pointwise=True), np.sqrt(3), rtol=1e-7)


def test_c7_cylinder():
    spec = make_spec("C7", catalog("S3xR"))
    assert_allclose(threshold(spec, np.array([1.0, 1.0, 0.5, 0.3])), 2 / A_G, rtol=1e-7)


def test_c10_flat():
    spec = make_spec("C10", catalog("R4"))
    for rho in (0.5, 1.0, 3.0):
        assert_allclose(threshold(spec, np.array([rho, 0, 0, 0])), 2 / (A_G * rho**2), rtol=1e-8, atol=1e-9)


def test_t9_flat_equals_c10():
    r4 = catalog("R4")
    rho = np.geomspace(0.1, 10, 20)
    assert_allclose(threshold_profile(make_spec("T9", r4), rho), threshold_profile(make_spec("C10", r4), rho))


def test_t14_closed_form():
    spec = make_spec("T14", catalog("CH2"))
    assert spec.side == "minus"
    rho = np.linspace(0.01, 99.99, 2000)
    expected = (2 / A_G) * (1 / (4 * rho**2) + 1 / np.sinh(rho) ** 2 - 1 / np.sinh(2 * rho) ** 2)
    assert_allclose(threshold_profile(spec, rho), expected, rtol=1e-6, atol=1e-8)
    assert np.all(threshold_profile(spec, rho) > 0)


def test_c12_constant_part_roots():
    assert abs(c12_constant_part(3 / 8)) < 1e-12
    assert abs(c12_constant_part(3 / 4)) < 1e-12
    assert c12_constant_part(0.5) > 0
    assert c12_constant_part(0.3) < 0


@pytest.mark.parametrize("p", [0.375, 0.5, 0.6, 0.75])
def test_c12_threshold_positive(p):
    spec = make_spec("C12", catalog("H4"), p=p)
    rho = np.geomspace(1e-3, 50, 500)
    lower = p_coefficient(p) / A_G * (1 / (4 * rho**2) + 3 / (4 * np.sinh(rho) ** 2))
    t = threshold_profile(spec, rho)
    assert np.all(t > 0)
    assert np.all(t >= lower - 1e-6)


def test_t1_half_equals_t2():
    for name, w in (("R4", carron_weight()), ("H4", bgg_weight(b=1.0)), ("CH2", chm_weight(2)), ("S4", carron_weight())):
        space = catalog(name)
        rho = np.linspace(0.1, 1.5, 30)
        t1 = threshold_profile(make_spec("T1", space, w, p=0.5), rho)
        t2 = threshold_profile(make_spec("T2", space, w), rho)
        assert_allclose(t1, t2, rtol=1e-12)


def test_zero_weight_reduces_to_scalar_curvature():
    for name in ("S4", "H4", "S3xR", "R4"):
        space = catalog(name)
        spec = make_spec("T6", space)
        x = space.sample(np.random.default_rng(1), 1)[0]
        data = curvature_at(space, x)
        # W+ vanishes on these spaces up to difference noise
        assert abs(data.lambda_max_plus) < 1e-7
        expected = data.scalar / (3 * A_G)
        assert_allclose(threshold(spec, x, pointwise=True), expected - 2 * data.lambda_max_plus / A_G, rtol=1e-12, atol=1e-12)
        t2 = make_spec("T2", space, carron_weight())
        assert_allclose(threshold(t2, x, pointwise=True) - 2 / (A_G * float(space.rho(x)) ** 2), expected, atol=1e-9)


def test_spec_validation():
    r4 = catalog("R4")
    with pytest.raises(ValueError):
        make_spec("T1", r4, carron_weight(), p=0.25)
    with pytest.raises(ValueError):
        make_spec("T1", r4, None, p=0.5)
    with pytest.raises(ValueError):
        make_spec("T4", r4, carron_weight(), p=0.5, b=2.0)
    with pytest.raises(ValueError):
        make_spec("C12", catalog("H4"), p=0.8)
    with pytest.raises(ValueError):
        make_spec("C12", r4, p=0.5)
    with pytest.raises(ValueError):
        make_spec("T99", r4)
    with pytest.raises(ValueError):
        GapBoundSpec("T5", r4, side="left")
    spec = make_spec("T4", r4, carron_weight(), p=0.5, b=1.5)
    assert spec.coefficient == 1.5
    assert set(THEOREMS) == {"T1", "T2", "T4", "T5", "T6", "T9", "T11", "T14", "C7", "C10", "C12"}


def test_negative_threshold_is_returned():
    spec = make_spec("T11", catalog("H4"), p=0.3)
    assert threshold_profile(spec, np.array([30.0])) < 0


def test_side_norm_matches_conformal_pullback(rng):
    s4 = catalog("S4")
    field = bpst_field()
    for x in s4.sample(rng, 5):
        assert_allclose(side_norm(field, s4, x), pullback_norm_s4(field, x), rtol=1e-12)
        assert side_norm(field, s4, x, side="minus") < 1e-12


def test_verdicts(rng):
    s4 = catalog("S4")
    spec = make_spec("T5", s4)
    pts = s4.sample(rng, 30)
    rep = evaluate_gap(side_norm_function(bpst_field(), s4), spec, pts)
    assert rep.verdict == EQUALITY
    rep0 = evaluate_gap(side_norm_function(zero_field(), s4), spec, pts)
    assert rep0.verdict == VANISHING
    assert rep0.strictness_witness.margin > 0
    assert rep0.recompute_verdict() == VANISHING


def test_c10_violation_witness():
    r4 = catalog("R4")
    spec = make_spec("C10", r4)
    x = np.array([1.0, 0.0, 0.0, 0.0])
    rep = evaluate_gap(lambda y: float(self_dual_norms(bpst_field(), y)[0]), spec, [x])
    assert rep.verdict == VIOLATED
    assert_allclose(-rep.violation_witness.margin, np.sqrt(3) - 2 / A_G, atol=1e-6)


def test_verdict_order_invariance(rng):
    r4 = catalog("R4")
    spec = make_spec("C10", r4)
    pts = r4.sample(rng, 12)
    fn = lambda y: 0.1 * float(self_dual_norms(bpst_field(InstantonParams(scale=5.0)), y)[0])  # noqa: E731
    a = evaluate_gap(fn, spec, pts)
    b = evaluate_gap(fn, spec, pts[::-1])
    assert a.verdict == b.verdict
    assert [s.rho for s in a.samples] == sorted(s.rho for s in a.samples)
    c = evaluate_gap(fn, spec, pts, equality_rtol=2e-6, violation_atol=2e-6)
    assert c.verdict == a.verdict


def test_empty_samples():
    with pytest.raises(ValueError):
        evaluate_gap(lambda x: 0.0, make_spec("T5", catalog("S4")), [])


def test_lemma3_equality_on_s4(rng):
    s4 = catalog("S4")
    for x in s4.sample(rng, 3):
        res = lemma3_check(bpst_field(), s4, 0.5, x)
        assert abs(res.lhs) < 1e-3 and abs(res.rhs) < 1e-3
        assert abs(res.lhs - res.rhs) < 1e-3


def test_lemma3_flat(rng):
    r4 = catalog("R4")
    for p in (0.3, 0.5, 1.0):
        for _ in range(4):
            x = rng.normal(size=4)
            x *= rng.uniform(0.2, 2.0) / np.linalg.norm(x)
            assert lemma3_check(bpst_field(), r4, p, x).holds


def test_lemma3_skips_zero_field():
    with pytest.raises(SkippedSample):
        lemma3_check(zero_field(), catalog("R4"), 0.5, np.ones(4))
    with pytest.raises(ValueError):
        lemma3_check(bpst_field(), catalog("R4"), 0.0, np.ones(4))


def test_gap_constant_feeds_threshold():
    spec = make_spec("T5", catalog("S4"), n=3)
    assert_allclose(spec.a_g, gap_constant(3))
