"""Pointwise gap thresholds for |F+| and their comparison with concrete connections.

Every threshold has the shape ``(1/a_G)(k q + R/3 - 2 lambda_max(W))`` where
``k`` depends on the exponent ``p`` (or on ``b``), ``q`` is a weighted Poincare
weight and ``W`` is the Weyl operator on the chosen side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .forms import TwoForm, norm, project_pm
from .gauge import GaugeField, _curvature_components
from .geometry import CurvatureData, ModelSpace, base_curvature, curvature_at, metric_laplacian, orthonormal_frame
from .lie import DEFAULT_METRIC, AlgebraMetric, gap_constant
from .weights import RadialWeight, bgg_weight, carron_weight, chm_weight

THEOREMS = ("T1", "T2", "T4", "T5", "T6", "T9", "T11", "T14", "C7", "C10", "C12")

VANISHING = "vanishing_branch"
EQUALITY = "equality_branch"
VIOLATED = "hypothesis_violated"


def p_coefficient(p: float) -> float:
    """``(1/p)(2 - 1/(2p))``, the weight coefficient for exponent ``p``; equals 2 at p = 1/2."""
    return (2.0 - 1.0 / (2.0 * p)) / p


# theorem -> (coefficient rule, default weight factory, default p, default side)
_RULES = {
    "T1": ("p", None, None, "plus"),
    "T2": ("two", None, 0.5, "plus"),
    "T4": ("b", None, None, "plus"),
    "T5": ("none", None, None, "plus"),
    "T6": ("none", None, None, "plus"),
    "C7": ("none", None, None, "plus"),
    "T9": ("two", carron_weight, 0.5, "plus"),
    "C10": ("two", carron_weight, 0.5, "plus"),
    "T11": ("p", lambda: bgg_weight(b=1.0), None, "plus"),
    "C12": ("p", lambda: bgg_weight(b=1.0), None, "plus"),
    "T14": ("two", lambda: chm_weight(2), 0.5, "minus"),
}


@dataclass(frozen=True)
class GapBoundSpec:
    theorem: str
    space: ModelSpace
    weight: RadialWeight | None = None
    p: float | None = None
    b: float | None = None
    side: str = "plus"
    metric: AlgebraMetric = DEFAULT_METRIC
    n: int = 4

    def __post_init__(self):
        if self.theorem not in _RULES:
            raise ValueError(f"unknown theorem {self.theorem!r}")
        rule = _RULES[self.theorem][0]
        if self.side not in ("plus", "minus"):
            raise ValueError("side must be 'plus' or 'minus'")
        if rule in ("p", "b"):
            if self.p is None or not self.p > 0.25:
                raise ValueError(f"{self.theorem} needs p > 1/4")
        if rule != "none" and self.weight is None:
            raise ValueError(f"{self.theorem} needs a weight")
        if rule == "b":
            hi = p_coefficient(self.p)
            if self.b is None or not 0.0 < self.b < hi:
                raise ValueError(f"T4 needs 0 < b < {hi:.12g}")
        if self.theorem == "C12":
            if not 0.375 <= self.p <= 0.75:
                raise ValueError("C12 needs 3/8 <= p <= 3/4")
            if self.space.name != "H4":
                raise ValueError("C12 is stated on H4")

    @property
    def coefficient(self) -> float:
        rule = _RULES[self.theorem][0]
        if rule == "p":
            return p_coefficient(self.p)
        if rule == "two":
            return 2.0
        if rule == "b":
            return float(self.b)
        return 0.0

    @property
    def a_g(self) -> float:
        return float(gap_constant(self.n, self.metric))


def make_spec(theorem: str, space: ModelSpace, weight=None, p=None, b=None, side=None, metric=DEFAULT_METRIC, n=4):
    """A :class:`GapBoundSpec` with the theorem's default weight, exponent and side filled in."""
    if theorem not in _RULES:
        raise ValueError(f"unknown theorem {theorem!r}")
    _, factory, p_default, side_default = _RULES[theorem]
    if weight is None and factory is not None:
        weight = factory()
    if p is None:
        p = p_default
    if side is None:
        side = side_default
    return GapBoundSpec(theorem, space, weight, p, b, side, metric, n)


def _curvature_terms(spec: GapBoundSpec, data: CurvatureData):
    return data.scalar, data.lambda_max(spec.side)


def threshold(spec: GapBoundSpec, x, pointwise: bool = False) -> float:
    """The theorem's bound on ``|F^side|`` at chart point ``x``.

    The catalog spaces are homogeneous, so by default R and lambda_max come
    from the space's reference point; ``pointwise=True`` recomputes them at
    ``x``.  Negative values are returned as is.
    """
    x = np.asarray(x, dtype=float)
    data = curvature_at(spec.space, x) if pointwise else base_curvature(spec.space)
    rho = float(spec.space.rho(x))
    return float(_formula(spec, rho, *_curvature_terms(spec, data)))


def threshold_profile(spec: GapBoundSpec, rho) -> np.ndarray:
    """Threshold as a function of the distance from the base point, with base-point curvature."""
    rho = np.asarray(rho, dtype=float)
    return _formula(spec, rho, *_curvature_terms(spec, base_curvature(spec.space)))


def _formula(spec, rho, scalar, lam):
    q = spec.weight(rho) if (spec.weight is not None and spec.coefficient) else np.zeros_like(rho)
    return (spec.coefficient * q + scalar / 3.0 - 2.0 * lam) / spec.a_g


def c12_constant_part(p: float) -> float:
    """Constant term ``(1/p)(2 - 1/(2p)) 9/4 - 4`` of the C12 threshold (times a_G); zero at p = 3/8, 3/4."""
    return p_coefficient(p) * 2.25 - 4.0


# --------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class GapSample:
    rho: float
    field_norm: float
    threshold: float
    margin: float
    point: tuple = ()


@dataclass(frozen=True)
class GapReport:
    samples: tuple
    verdict: str
    strictness_witness: GapSample | None
    violation_witness: GapSample | None
    equality_rtol: float
    violation_atol: float

    def recompute_verdict(self) -> str:
        return _classify(self.samples, self.equality_rtol, self.violation_atol)[0]


def _classify(samples, equality_rtol, violation_atol):
    margins = np.array([s.margin for s in samples])
    thresholds = np.array([s.threshold for s in samples])
    if np.all(np.abs(margins) < equality_rtol * (1.0 + np.abs(thresholds))):
        return EQUALITY, None, None
    if np.any(margins < -violation_atol):
        worst = samples[int(np.argmin(margins))]
        return VIOLATED, None, worst
    best = samples[int(np.argmax(margins))]
    return VANISHING, best, None


def evaluate_gap(
    field_norm: Callable,
    spec: GapBoundSpec,
    samples,
    equality_rtol: float = 1e-6,
    violation_atol: float = 1e-6,
    pointwise: bool = False,
) -> GapReport:
    """Compare ``|F^side|`` with the threshold at each sample point.

    Verdicts: ``equality_branch`` when every margin is within the equality
    band, ``hypothesis_violated`` when some margin is below ``-violation_atol``,
    otherwise ``vanishing_branch`` with the sample of largest margin as the
    witness of strictness.  Samples are stably sorted by rho.
    """
    pts = [np.asarray(s, dtype=float) for s in samples]
    if not pts:
        raise ValueError("need at least one sample point")
    rows = []
    for x in pts:
        t = threshold(spec, x, pointwise=pointwise)
        f = float(field_norm(x))
        rows.append(GapSample(float(spec.space.rho(x)), f, t, t - f, tuple(float(v) for v in x)))
    rows.sort(key=lambda s: s.rho)
    rows = tuple(rows)
    verdict, strict, worst = _classify(rows, equality_rtol, violation_atol)
    return GapReport(rows, verdict, strict, worst, equality_rtol, violation_atol)


# --------------------------------------------------------------------------
# norms measured by the space's metric


def frame_curvature(field_: GaugeField, space: ModelSpace, x) -> TwoForm:
    """Curvature components in the oriented orthonormal frame of the space's metric at ``x``."""
    x = np.asarray(x, dtype=float)
    comp = _curvature_components(field_, x)
    e = orthonormal_frame(space.metric(x))
    return TwoForm(np.einsum("ia,jb,ij...->ab...", e, e, comp))


def side_norm(field_: GaugeField, space: ModelSpace, x, side: str = "plus", metric: AlgebraMetric = DEFAULT_METRIC) -> float:
    """``|F+|`` or ``|F-|`` measured by the space's metric at ``x``."""
    plus, minus = project_pm(frame_curvature(field_, space, x))
    return float(norm(plus if side == "plus" else minus, metric))


def side_norm_function(field_: GaugeField, space: ModelSpace, side: str = "plus", metric: AlgebraMetric = DEFAULT_METRIC):
    return lambda x: side_norm(field_, space, x, side, metric)


# --------------------------------------------------------------------------
# the differential inequality for |F+|^p


class SkippedSample(ArithmeticError):
    """``|F+|`` vanishes at the point, so the inequality is vacuous there."""


@dataclass(frozen=True)
class Lemma3Result:
    lhs: float
    rhs: float
    tolerance: float
    discretization_error: float
    terms: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs - self.tolerance


def lemma3_check(
    field_: GaugeField,
    space: ModelSpace,
    p: float,
    x,
    metric: AlgebraMetric = DEFAULT_METRIC,
    n: int = 4,
    side: str = "plus",
    h: float = 1e-3,
    curvature: CurvatureData | None = None,
) -> Lemma3Result:
    """Both sides of ``u Delta u >= (1 - 1/(2p))|grad u|^2 + (p/3) R f^2p - 2p lambda f^2p - p a_G f^(2p+1)``.

    Here ``f = |F^side|`` in the space's metric and ``u = f^p``.  Derivatives
    use the chart's metric Laplacian at steps ``h`` and ``h/2``; their
    difference is added to the tolerance ``1e-3 (1 + |rhs|)``.
    """
    if not p > 0:
        raise ValueError("p must be positive")
    x = np.asarray(x, dtype=float)
    fx = side_norm(field_, space, x, side, metric)
    if fx <= 1e-12:
        raise SkippedSample("|F| vanishes at the sample point")

    def u(y):
        return side_norm(field_, space, y, side, metric) ** p

    lap_h, grad_h = metric_laplacian(space, u, x, h)
    lap, grad_sq = metric_laplacian(space, u, x, h / 2.0)
    data = curvature if curvature is not None else curvature_at(space, x)
    lam = data.lambda_max(side)
    a_g = float(gap_constant(n, metric))
    u0 = fx**p
    f2p = fx ** (2.0 * p)
    lhs = u0 * lap
    terms = {
        "gradient": (1.0 - 1.0 / (2.0 * p)) * grad_sq,
        "scalar": p / 3.0 * data.scalar * f2p,
        "weyl": -2.0 * p * lam * f2p,
        "cubic": -p * a_g * f2p * fx,
    }
    rhs = sum(terms.values())
    err = abs(u0 * (lap - lap_h)) + abs((1.0 - 1.0 / (2.0 * p)) * (grad_sq - grad_h))
    tol = 1e-3 * (1.0 + abs(rhs)) + err
    return Lemma3Result(float(lhs), float(rhs), float(tol), float(err), terms)
