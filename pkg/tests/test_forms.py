import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from gapcheck.forms import (
    LAMBDA2_MINUS,
    LAMBDA2_PLUS,
    ChainViolation,
    TwoForm,
    equality_form,
    from_pairs,
    hodge_star,
    inner,
    is_self_dual,
    norm,
    project_pm,
    search_trilinear_sup,
    self_dual_from,
    trilinear,
    trilinear_chain_report,
    trilinear_ratio,
)
from gapcheck.lie import AlgebraMetric, gap_constant, levi_civita, random_skew, thooft_symbols


def _coef(g, size, n):
    """Random so(n)-valued 2-form components with the form axes before the matrix axes."""
    a = g.standard_normal(tuple(np.atleast_1d(size)) + (4, 4, n, n) if size else (4, 4, n, n))
    a = a - np.swapaxes(a, -1, -2)
    return a - np.swapaxes(a, -3, -4)


def test_hodge_star_on_basis():
    e12 = from_pairs({(1, 2): 1.0})
    star = hodge_star(e12)
    assert_allclose(star.pair(2, 3), 1.0)
    assert_allclose(star.pair(0, 1), 0.0)
    e13 = from_pairs({(1, 3): 1.0})
    assert_allclose(hodge_star(e13).pair(1, 3), -1.0)


def test_star_squares_to_identity(rng):
    f = TwoForm(_coef(rng, (), 3))
    assert_allclose(hodge_star(hodge_star(f)).components, f.components, atol=1e-14)


def test_projections(rng):
    f = TwoForm(_coef(rng, (), 4))
    plus, minus = project_pm(f)
    assert is_self_dual(plus)
    assert_allclose(hodge_star(minus).components, -minus.components, atol=1e-14)
    assert_allclose((plus + minus).components, f.components)
    # orthogonal splitting
    assert abs(float(inner(plus, minus))) < 1e-12
    assert_allclose(norm(f) ** 2, norm(plus) ** 2 + norm(minus) ** 2)


def test_lambda2_bases_orthonormal():
    for basis, sign in ((LAMBDA2_PLUS, 1), (LAMBDA2_MINUS, -1)):
        gram = 0.5 * np.einsum("aij,bij->ab", basis, basis)
        assert_allclose(gram, np.eye(3), atol=1e-15)
        star = 0.5 * np.einsum("ijkl,akl->aij", _eps4(), basis)
        assert_allclose(star, sign * basis, atol=1e-15)


def _eps4():
    return levi_civita(4)


def test_real_form_norm():
    f = from_pairs({(1, 2): 3.0, (3, 4): 4.0})
    assert_allclose(norm(f), 5.0)


def test_two_form_shape_checks():
    with pytest.raises(ValueError):
        TwoForm(np.zeros((3, 3)), coefficient_rank=0)
    with pytest.raises(ValueError):
        TwoForm(np.zeros((4, 4)), coefficient_rank=1)


def test_equality_form_attains_bound():
    f = equality_form()
    # worked out by hand: |F|^2 = 12, trilinear = -96 at alpha = 1/2
    assert_allclose(norm(f), np.sqrt(12.0), rtol=1e-14)
    assert_allclose(trilinear(f), -96.0, rtol=1e-12)
    assert_allclose(trilinear_ratio(f), gap_constant(4), rtol=1e-12)
    assert_allclose(trilinear_ratio(equality_form(0.37)), gap_constant(4), rtol=1e-12)


def test_equality_form_tensor_convention():
    m = AlgebraMetric(0.5, "tensor")
    assert_allclose(trilinear_ratio(equality_form(), m), gap_constant(4, m), rtol=1e-12)


def test_chain_random_self_dual(rng):
    r = random_skew(rng, 4, size=(3, 20000))
    report = trilinear_chain_report(self_dual_from(r[0], r[1], r[2]))
    assert np.all(report.abs_sum <= report.bound * (1 + 1e-10))
    assert_allclose(report.triples, report.corner, rtol=1e-10)


def test_chain_requires_self_dual():
    f = from_pairs({(1, 2): thooft_symbols()[0], (1, 3): thooft_symbols()[1], (2, 3): thooft_symbols()[2]})
    with pytest.raises(ValueError):
        trilinear_chain_report(f)


def test_chain_violation_is_arithmetic_error():
    assert issubclass(ChainViolation, ArithmeticError)


def test_trilinear_scales_cubically(rng):
    r = random_skew(rng, 4, size=3)
    f = self_dual_from(*r)
    assert_allclose(trilinear(f * 2.0), 8.0 * trilinear(f), rtol=1e-12)


def test_search_sup_reaches_a_g():
    best = search_trilinear_sup(np.random.default_rng(3), samples=2000, starts=3)
    assert best >= 0.999 * gap_constant(4)
    assert best <= gap_constant(4) * (1 + 1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([3, 4, 5]), st.floats(0.2, 4.0))
def test_self_dual_bound_property(seed, n, alpha):
    g = np.random.default_rng(seed)
    m = AlgebraMetric(alpha)
    r = random_skew(g, n, size=3)
    f = self_dual_from(*r)
    assert abs(float(trilinear(f, m))) <= gap_constant(n, m) * float(norm(f, m)) ** 3 * (1 + 1e-10)
