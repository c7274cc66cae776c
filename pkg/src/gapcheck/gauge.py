"""Connections on the trivial bundle over a chart of R^4, and the BPST instanton.

A connection is given by its potential ``A(x)`` with shape ``batch + (4, n, n)``:
``A[..., i, :, :]`` is the so(n)-valued component ``A_i``.  Curvature is
``F_ij = d_i A_j - d_j A_i + [A_i, A_j]`` and the covariant derivative of an
adjoint-valued form is ``nabla_i F = d_i F + [A_i, F]`` (flat chart).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import stats

from .forms import TwoForm, hodge_star, inner, norm, project_pm
from .lie import DEFAULT_METRIC, AlgebraMetric, random_skew, su2_generators, thooft_symbols
from .quadrature import integrate_radial


class ChartDomainError(ValueError):
    """A point or difference stencil leaves the chart."""


class CriticalPointError(ArithmeticError):
    """``|F+|`` is critical at the point, so the Kato ratio is undefined."""


class DivergentChargeError(ArithmeticError):
    pass


@dataclass(frozen=True)
class GaugeField:
    potential: Callable
    curvature_form: Callable | None = None
    center: tuple = (0.0, 0.0, 0.0, 0.0)
    scale: float = 1.0
    radial: bool = False
    domain_radius: float | None = None
    name: str = "connection"

    def check_point(self, x, reach: float = 0.0):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != 4:
            raise ValueError("points must have 4 coordinates")
        if not np.all(np.isfinite(x)):
            raise ChartDomainError("non-finite point")
        if self.domain_radius is not None:
            if np.any(np.linalg.norm(x, axis=-1) + reach >= self.domain_radius):
                raise ChartDomainError("point or stencil outside the chart")
        return x


@dataclass(frozen=True)
class InstantonParams:
    center: tuple = (0.0, 0.0, 0.0, 0.0)
    scale: float = 1.0

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("instanton scale must be positive")
        c = tuple(float(v) for v in self.center)
        if len(c) != 4:
            raise ValueError("center must have 4 coordinates")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "scale", float(self.scale))


def zero_field(n: int = 4) -> GaugeField:
    def potential(x):
        x = np.asarray(x, dtype=float)
        return np.zeros(x.shape[:-1] + (4, n, n))

    return GaugeField(potential, radial=True, name="zero")


def constant_field(components) -> GaugeField:
    """``A_i`` constant in x; flat exactly when the components commute."""
    comp = np.asarray(components, dtype=float)

    def potential(x):
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(comp, x.shape[:-1] + comp.shape).copy()

    return GaugeField(potential, name="constant")


def bpst_field(params: InstantonParams = InstantonParams(), anti: bool = False) -> GaugeField:
    """Regular-gauge one-instanton ``A_mu = 2 eta^a_{mu nu} (x - y)_nu T_a / (|x - y|^2 + lambda^2)``.

    ``T_a = -eta^a/2`` sit in so(4).  The curvature is
    ``F_{mu nu} = -4 lambda^2 eta^a_{mu nu} T_a / (|x - y|^2 + lambda^2)^2``, which is
    self-dual and has ``|F| = sqrt(48) lambda^2 / (lambda^2 + |x - y|^2)^2`` at alpha = 1/2.
    ``anti=True`` uses the anti-self-dual symbols, giving charge -1.
    """
    eta = thooft_symbols(self_dual=not anti)
    gens = su2_generators() if not anti else -0.5 * eta
    y = np.asarray(params.center)
    lam2 = params.scale**2
    # coupling tensor C[mu, nu] = sum_a eta^a_{mu nu} T_a, shape (4, 4, 4, 4)
    coupling = np.einsum("amn,aij->mnij", eta, gens)

    def potential(x):
        d = np.asarray(x, dtype=float) - y
        den = np.sum(d * d, axis=-1) + lam2
        a = 2.0 * np.einsum("mnij,...n->...mij", coupling, d)
        return a / den[..., None, None, None]

    def curvature_form(x):
        d = np.asarray(x, dtype=float) - y
        den = np.sum(d * d, axis=-1) + lam2
        f = -4.0 * lam2 * coupling / 1.0
        return np.broadcast_to(f, den.shape + f.shape) / (den**2)[..., None, None, None, None]

    name = "anti-BPST" if anti else "BPST"
    return GaugeField(potential, curvature_form, tuple(params.center), params.scale, True, None, name)


def bpst_norm(params: InstantonParams, x) -> np.ndarray:
    """``sqrt(48) lambda^2 / (lambda^2 + |x - y|^2)^2``."""
    d = np.asarray(x, dtype=float) - np.asarray(params.center)
    lam2 = params.scale**2
    return np.sqrt(48.0) * lam2 / (lam2 + np.sum(d * d, axis=-1)) ** 2


def random_polynomial_field(rng: np.random.Generator, n: int = 4, amplitude: float = 0.5) -> GaugeField:
    """``A_i(x) = C_i + D_ik x_k + E_ikl x_k x_l`` with random so(n) coefficients.

    Generically not Yang-Mills; useful for checking that the Bianchi identity
    holds for every connection.
    """
    c = amplitude * random_skew(rng, n, size=(4,))
    d = amplitude * random_skew(rng, n, size=(4, 4))
    e = amplitude * random_skew(rng, n, size=(4, 4, 4))

    def potential(x):
        x = np.asarray(x, dtype=float)
        lin = np.einsum("ikab,...k->...iab", d, x)
        quad = np.einsum("iklab,...k,...l->...iab", e, x, x)
        return c + lin + quad

    return GaugeField(potential, name="random-polynomial")


# --------------------------------------------------------------------------
# derivatives


def _step(x):
    return 1e-4 * (1.0 + np.linalg.norm(x))


def _partials(fn, x, h):
    """Fourth-order central differences ``d_i fn`` stacked on a new leading axis."""
    out = []
    for i in range(4):
        e = np.zeros(4)
        e[i] = h
        out.append((-fn(x + 2 * e) + 8 * fn(x + e) - 8 * fn(x - e) + fn(x - 2 * e)) / (12.0 * h))
    return np.stack(out)


def _comm(a, b):
    return a @ b - b @ a


def _curvature_components(field: GaugeField, x, h=None) -> np.ndarray:
    if field.curvature_form is not None:
        return np.asarray(field.curvature_form(x), dtype=float)
    h = _step(x) if h is None else h
    a = field.potential(x)
    da = _partials(field.potential, x, h)  # da[i, j] = d_i A_j
    f = da - np.swapaxes(da, 0, 1)
    f = f + _comm(a[:, None], a[None, :])
    return f


def curvature(field: GaugeField, x, h=None) -> TwoForm:
    """The curvature 2-form at a single point ``x``."""
    x = field.check_point(x, 0.0 if field.curvature_form is not None else 3 * _step(x))
    return TwoForm(_curvature_components(field, x, h))


def curvature_batch(field: GaugeField, x) -> TwoForm:
    """Closed-form curvature at many points; fields without one fall back to a loop."""
    x = np.asarray(x, dtype=float)
    if field.curvature_form is not None:
        field.check_point(x)
        return TwoForm(field.curvature_form(x))
    flat = x.reshape(-1, 4)
    comps = np.stack([curvature(field, p).components for p in flat])
    return TwoForm(comps.reshape(x.shape[:-1] + comps.shape[1:]))


def covariant_derivative(field: GaugeField, x, h=None, which: str = "full") -> np.ndarray:
    """``nabla_i F_jk`` as an array indexed ``[i, j, k, a, b]``.

    ``which`` selects the full curvature or its self-dual / anti-self-dual part.
    """
    x = np.asarray(x, dtype=float)
    h = _step(x) if h is None else h
    field.check_point(x, 5 * h)

    def part(p):
        f = TwoForm(_curvature_components(field, p))
        if which == "plus":
            f = project_pm(f)[0]
        elif which == "minus":
            f = project_pm(f)[1]
        return f.components

    df = _partials(part, x, h)
    a = field.potential(x)
    return df + _comm(a[:, None, None], part(x)[None])


def ym_residual(field: GaugeField, x, metric: AlgebraMetric = DEFAULT_METRIC, h=None) -> float:
    """``sum_j |sum_i nabla_i F_ij|``, the Yang-Mills (d_A^* F) residual."""
    nf = covariant_derivative(field, x, h)
    div = np.einsum("iijab->jab", nf)
    return float(np.sum(np.sqrt(metric.alpha * np.sum(div * div, axis=(-2, -1)))))


def bianchi_residual(field: GaugeField, x, metric: AlgebraMetric = DEFAULT_METRIC, h=None) -> float:
    """``sum_{i<j<k} |nabla_i F_jk + nabla_j F_ki + nabla_k F_ij|``; vanishes for every connection."""
    nf = covariant_derivative(field, x, h)
    total = 0.0
    for i in range(4):
        for j in range(i + 1, 4):
            for k in range(j + 1, 4):
                c = nf[i, j, k] + nf[j, k, i] + nf[k, i, j]
                total += float(np.sqrt(metric.alpha * np.sum(c * c)))
    return total


def self_dual_norms(field: GaugeField, x, metric: AlgebraMetric = DEFAULT_METRIC):
    """``(|F+|, |F-|)`` at one or many points."""
    f = curvature_batch(field, x)
    fp, fm = project_pm(f)
    return norm(fp, metric), norm(fm, metric)


def kato_ratio(field: GaugeField, x, metric: AlgebraMetric = DEFAULT_METRIC, h=None, atol: float = 1e-7) -> float:
    """``|nabla F+|^2 / |grad |F+||^2`` at ``x``.

    ``d_i |F+| = <F+, nabla_i F+> / |F+|`` because the metric is ad-invariant.
    Raises :class:`CriticalPointError` where ``F+`` vanishes or ``|F+|`` is critical.
    """
    x = np.asarray(x, dtype=float)
    fp = project_pm(TwoForm(_curvature_components(field, x)))[0]
    size = float(norm(fp, metric))
    if size <= atol:
        raise CriticalPointError("F+ vanishes")
    nf = covariant_derivative(field, x, h, which="plus")
    grad_sq = 0.0
    total = 0.0
    for i in range(4):
        d = TwoForm(nf[i])
        total += float(norm(d, metric)) ** 2
        grad_sq += (float(inner(fp, d, metric)) / size) ** 2
    if grad_sq <= (atol * (1.0 + np.sqrt(total))) ** 2:
        raise CriticalPointError("|F+| is critical")
    return total / grad_sq


def pullback_norm_s4(field: GaugeField, x, metric: AlgebraMetric = DEFAULT_METRIC) -> np.ndarray:
    """``|F|`` measured by the round unit S^4 metric through stereographic coordinates.

    The S^4 metric is ``(2/(1+|x|^2))^2`` times the flat one, so 2-form norms
    pick up ``((1 + |x|^2)/2)^2``.
    """
    x = np.asarray(x, dtype=float)
    flat = norm(curvature_batch(field, x), metric)
    return flat * ((1.0 + np.sum(x * x, axis=-1)) / 2.0) ** 2


# --------------------------------------------------------------------------
# topological charge


def _charge_density(field, x, metric):
    fp, fm = self_dual_norms(field, x, metric)
    return (fp**2 - fm**2) / (8.0 * np.pi**2)


def charge(
    field: GaugeField,
    metric: AlgebraMetric = DEFAULT_METRIC,
    atol: float = 1e-10,
    direction=(1.0, 0.0, 0.0, 0.0),
    outer: float | None = None,
) -> float:
    """``(1/8 pi^2) int (|F+|^2 - |F-|^2)`` over R^4 for a radially symmetric field.

    The density is sampled along one ray from the field's center and
    integrated against the sphere area ``2 pi^2 r^3``.  The part beyond
    ``outer`` is added from the power-law decay rate measured there; decay
    slower than ``r^-4`` raises :class:`DivergentChargeError`.
    """
    if not field.radial:
        raise ValueError("radial charge quadrature needs a radially symmetric field")
    c = np.asarray(field.center, dtype=float)
    e = np.asarray(direction, dtype=float)
    e = e / np.linalg.norm(e)
    outer = 1e4 * field.scale if outer is None else outer

    def integrand(r):
        r = np.asarray(r, dtype=float)
        pts = c + r[..., None] * e
        return _charge_density(field, pts, metric) * 2.0 * np.pi**2 * r**3

    body = integrate_radial(integrand, 0.0, outer, atol=atol, rtol=1e-12, breakpoints=[field.scale]).value
    ends = integrand(np.array([outer / 2.0, outer]))
    if np.all(ends == 0):
        return float(body)
    if ends[0] == 0 or ends[1] == 0 or np.sign(ends[0]) != np.sign(ends[1]):
        raise DivergentChargeError("cannot estimate the tail")
    # integrand ~ r^-(p) with p > 1 for convergence
    p = np.log(ends[0] / ends[1]) / np.log(2.0)
    if p <= 1.05:
        raise DivergentChargeError(f"charge density decays too slowly (integrand ~ r^-{p:.3g})")
    tail = ends[1] * outer / (p - 1.0)
    return float(body + tail)


def charge_monte_carlo(
    field: GaugeField,
    rng: np.random.Generator,
    samples: int = 20000,
    metric: AlgebraMetric = DEFAULT_METRIC,
    dof: float = 3.0,
) -> tuple[float, float]:
    """Importance-sampled charge with a multivariate Student-t proposal.

    The proposal is centered at the field's center with the field's scale.
    Returns ``(estimate, standard error)``.
    """
    proposal = stats.multivariate_t(loc=np.asarray(field.center, dtype=float), shape=field.scale**2 * np.eye(4), df=dof)
    x = proposal.rvs(size=samples, random_state=rng)
    w = _charge_density(field, x, metric) / np.exp(proposal.logpdf(x))
    return float(np.mean(w)), float(np.std(w, ddof=1) / np.sqrt(samples))


def is_self_dual_field(field: GaugeField, x, rtol: float = 1e-10) -> bool:
    f = curvature_batch(field, x)
    star = hodge_star(f)
    diff = np.max(np.abs(star.components - f.components))
    return bool(diff <= rtol * max(1.0, float(np.max(np.abs(f.components)))))
