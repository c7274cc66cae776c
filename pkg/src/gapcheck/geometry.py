"""Curvature of the model four-manifolds from chart metrics.

Six spaces are available through :func:`catalog`:

=======  =========================================  ===================  =========
name     chart                                      distance from base   R
=======  =========================================  ===================  =========
R4       identity                                   ``|x|``              0
S4       stereographic, ``(2/(1+|x|^2))^2 dx^2``    ``2 arctan |x|``     12
H4       Poincare ball, ``(2/(1-|x|^2))^2 dx^2``    ``2 artanh |x|``     -12
S3xR     ``(psi, theta, phi, t)``, round x line     ``sqrt(psi^2+t^2)``  6
CP2      affine chart of Fubini-Study, ``z in C^2``  ``arctan |z|``       24
CH2      unit-ball chart of the Bergman metric      ``artanh |z|``       -24
=======  =========================================  ===================  =========

Complex charts use real coordinates ``(Re z1, Im z1, Re z2, Im z2)``; with
this orientation the Kaehler form is self-dual, so ``W^-`` vanishes on CP2
and CH2.  All curvature tensors are reported in the orthonormal frame
obtained by Gram-Schmidt on the coordinate frame, with the sign convention
``R_1212 = K`` (sectional curvature).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import j0, j1

from .eig3 import symmetric_eigvals3
from .forms import LAMBDA2_MINUS, LAMBDA2_PLUS
from .quadrature import QuadResult, integrate_radial

TWO_PI2 = 2.0 * np.pi**2


class ChartDomainError(ValueError):
    pass


# --------------------------------------------------------------------------
# chart metrics, vectorized over leading axes of x


def _conformal(factor):
    def metric(x):
        x = np.asarray(x, dtype=float)
        s = np.sum(x * x, axis=-1)
        return factor(s)[..., None, None] * np.eye(4)

    return metric


def _flat_metric(x):
    x = np.asarray(x, dtype=float)
    return np.broadcast_to(np.eye(4), x.shape[:-1] + (4, 4)).copy()


def _kahler_metric(sign):
    # g = delta/(1 + sign s) - sign (u u^T + v v^T)/(1 + sign s)^2, v = J u
    def metric(x):
        x = np.asarray(x, dtype=float)
        s = np.sum(x * x, axis=-1)
        v = np.stack([-x[..., 1], x[..., 0], -x[..., 3], x[..., 2]], axis=-1)
        d = 1.0 + sign * s
        outer = x[..., :, None] * x[..., None, :] + v[..., :, None] * v[..., None, :]
        return np.eye(4) / d[..., None, None] - sign * outer / (d * d)[..., None, None]

    return metric


def _cylinder_metric(x):
    x = np.asarray(x, dtype=float)
    s1 = np.sin(x[..., 0]) ** 2
    diag = np.stack([np.ones_like(s1), s1, s1 * np.sin(x[..., 1]) ** 2, np.ones_like(s1)], axis=-1)
    return diag[..., :, None] * np.eye(4)


# --------------------------------------------------------------------------
# radial profiles


def _log_sinh(r):
    r = np.asarray(r, dtype=float)
    with np.errstate(divide="ignore"):
        small = np.log(np.sinh(np.minimum(r, 20.0)))
    return np.where(r < 20.0, small, r + np.log1p(-np.exp(-2.0 * np.maximum(r, 20.0))) - np.log(2.0))


def _cyl_gl(r, nodes=64):
    """Integrals over theta in [0, theta_max] for the S^3 x R sphere density."""
    r = np.asarray(r, dtype=float)
    t, w = np.polynomial.legendre.leggauss(nodes)
    theta_max = np.where(r <= np.pi, 0.5 * np.pi, np.arcsin(np.minimum(1.0, np.pi / np.maximum(r, np.pi))))
    theta = 0.5 * theta_max[..., None] * (t + 1.0)
    half = 0.5 * theta_max[..., None]
    st = np.sin(theta)
    arg = r[..., None] * st
    i_sin2 = np.sum(half * w * np.sin(arg) ** 2, axis=-1)
    i_cross = np.sum(half * w * st * np.sin(2.0 * arg), axis=-1)
    return i_sin2, i_cross


def cylinder_density(r):
    """Area of the geodesic sphere of radius ``r`` about a point of S^3 x R.

    ``J(r) = 8 pi r int_0^theta_max sin^2(r sin theta) d theta`` with
    ``theta_max = pi/2`` for r <= pi and ``arcsin(pi/r)`` beyond the cut locus.
    """
    r = np.asarray(r, dtype=float)
    i_sin2, _ = _cyl_gl(r)
    return 8.0 * np.pi * r * i_sin2


def cylinder_density_bessel(r):
    """Closed form ``2 pi^2 r (1 - J0(2r))`` of :func:`cylinder_density`, valid for r <= pi."""
    r = np.asarray(r, dtype=float)
    return TWO_PI2 * r * (1.0 - j0(2.0 * r))


def cylinder_laplacian_rho(r):
    """Sphere-averaged Laplacian of the distance on S^3 x R, ``J'(r)/J(r)``.

    The distance function of the cylinder is not radial-symmetric in the
    Laplacian sense, so this is the mean over the geodesic sphere.
    """
    r = np.asarray(r, dtype=float)
    i_sin2, i_cross = _cyl_gl(r)
    return 1.0 / r + i_cross / i_sin2


def cylinder_laplacian_rho_bessel(r):
    r = np.asarray(r, dtype=float)
    return 1.0 / r + 2.0 * j1(2.0 * r) / (1.0 - j0(2.0 * r))


def chm_laplacian_rho(m: int):
    """``rho -> 2(m-1) coth rho + 2 coth 2 rho`` on CH^m (holomorphic curvature -4)."""
    if m < 1:
        raise ValueError("m must be >= 1")

    def lap(rho):
        rho = np.asarray(rho)
        return 2.0 * (m - 1) / np.tanh(rho) + 2.0 / np.tanh(2.0 * rho)

    return lap


def chm_laplacian_rho_derivative(m: int):
    def d(rho):
        rho = np.asarray(rho)
        return -2.0 * (m - 1) / np.sinh(rho) ** 2 - 4.0 / np.sinh(2.0 * rho) ** 2

    return d


# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ModelSpace:
    """A model Riemannian 4-manifold described by one chart.

    ``growth_exponent`` is the k in ``vol(B(r)) = O(r^k)``: 0 for compact
    spaces (any k > 0 works), ``None`` for exponential growth.
    """

    name: str
    metric: Callable
    domain: Callable
    rho: Callable
    volume_density: Callable
    log_volume_density: Callable
    laplacian_rho: Callable
    laplacian_rho_derivative: Callable | None
    diameter: float
    growth_exponent: float | None
    base_point: np.ndarray
    sampler: Callable
    ray: Callable
    description: str = ""
    kink_points: tuple = field(default=())

    def in_domain(self, x) -> np.ndarray:
        return self.domain(np.asarray(x, dtype=float))

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Random chart points in a region where finite differences are safe."""
        return self.sampler(rng, size)

    def point_at(self, rho, direction=None) -> np.ndarray:
        """Chart point at geodesic distance ``rho`` from the base point."""
        return self.ray(np.asarray(rho, dtype=float), direction)


def _ball_sampler(radius):
    def sampler(rng, size):
        d = rng.standard_normal((size, 4))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        r = radius * rng.uniform(0.05, 1.0, size) ** 0.25
        return d * r[:, None]

    return sampler


def _ray(chart_radius):
    def ray(rho, direction=None):
        u = np.array([1.0, 0.0, 0.0, 0.0]) if direction is None else np.asarray(direction, dtype=float)
        u = u / np.linalg.norm(u)
        return chart_radius(rho)[..., None] * u

    return ray


def _norm4(x):
    return np.linalg.norm(np.asarray(x, dtype=float), axis=-1)


def _ball_domain(radius):
    return lambda x: _norm4(x) < radius


def _cylinder_sampler(rng, size):
    psi = rng.uniform(0.3, np.pi - 0.3, size)
    theta = rng.uniform(0.3, np.pi - 0.3, size)
    phi = rng.uniform(0.0, 2.0 * np.pi, size)
    t = rng.uniform(-3.0, 3.0, size)
    return np.stack([psi, theta, phi, t], axis=-1)


def _cylinder_ray(rho, direction=None):
    # along the sphere factor up to rho = 3, then tilt into the line factor
    rho = np.asarray(rho, dtype=float)
    psi = np.where(rho < 3.0, rho, 1.5)
    t = np.where(rho < 3.0, 0.0, np.sqrt(np.maximum(rho * rho - 2.25, 0.0)))
    return np.stack([psi, np.full_like(rho, 0.5 * np.pi), np.zeros_like(rho), t], axis=-1)


def _cylinder_domain(x):
    x = np.asarray(x, dtype=float)
    return (x[..., 0] > 0) & (x[..., 0] < np.pi) & (x[..., 1] > 0) & (x[..., 1] < np.pi)


def _cylinder_rho(x):
    x = np.asarray(x, dtype=float)
    return np.hypot(x[..., 0], x[..., 3])


def _compact(fn, diameter):
    def g(rho):
        rho = np.asarray(rho, dtype=float)
        inside = (rho >= 0) & (rho <= diameter)
        return np.where(inside, fn(np.clip(rho, 0.0, diameter)), 0.0)

    return g


def _build_catalog():
    spaces = {}
    spaces["R4"] = ModelSpace(
        name="R4",
        metric=_flat_metric,
        domain=lambda x: np.all(np.isfinite(x), axis=-1),
        rho=_norm4,
        volume_density=lambda r: TWO_PI2 * np.asarray(r, dtype=float) ** 3,
        log_volume_density=lambda r: np.log(TWO_PI2) + 3.0 * np.log(r),
        laplacian_rho=lambda r: 3.0 / np.asarray(r),
        laplacian_rho_derivative=lambda r: -3.0 / np.asarray(r) ** 2,
        diameter=np.inf,
        growth_exponent=4.0,
        base_point=np.zeros(4),
        sampler=lambda rng, size: rng.uniform(-2.0, 2.0, (size, 4)),
        ray=_ray(lambda r: r),
        description="flat Euclidean space",
    )
    spaces["S4"] = ModelSpace(
        name="S4",
        metric=_conformal(lambda s: (2.0 / (1.0 + s)) ** 2),
        domain=lambda x: np.all(np.isfinite(x), axis=-1),
        rho=lambda x: 2.0 * np.arctan(_norm4(x)),
        volume_density=_compact(lambda r: TWO_PI2 * np.sin(r) ** 3, np.pi),
        log_volume_density=lambda r: np.log(TWO_PI2) + 3.0 * np.log(np.sin(r)),
        laplacian_rho=lambda r: 3.0 / np.tan(r),
        laplacian_rho_derivative=lambda r: -3.0 / np.sin(r) ** 2,
        diameter=np.pi,
        growth_exponent=0.0,
        base_point=np.zeros(4),
        sampler=_ball_sampler(2.0),
        ray=_ray(lambda r: np.tan(0.5 * r)),
        description="unit round sphere, stereographic chart from the south pole",
    )
    spaces["H4"] = ModelSpace(
        name="H4",
        metric=_conformal(lambda s: (2.0 / (1.0 - s)) ** 2),
        domain=_ball_domain(1.0),
        rho=lambda x: 2.0 * np.arctanh(_norm4(x)),
        volume_density=lambda r: TWO_PI2 * np.sinh(r) ** 3,
        log_volume_density=lambda r: np.log(TWO_PI2) + 3.0 * _log_sinh(r),
        laplacian_rho=lambda r: 3.0 / np.tanh(r),
        laplacian_rho_derivative=lambda r: -3.0 / np.sinh(r) ** 2,
        diameter=np.inf,
        growth_exponent=None,
        base_point=np.zeros(4),
        sampler=_ball_sampler(0.8),
        ray=_ray(lambda r: np.tanh(0.5 * r)),
        description="hyperbolic space K = -1, Poincare ball chart",
    )
    spaces["S3xR"] = ModelSpace(
        name="S3xR",
        metric=_cylinder_metric,
        domain=_cylinder_domain,
        rho=_cylinder_rho,
        volume_density=cylinder_density,
        log_volume_density=lambda r: np.log(cylinder_density(r)),
        laplacian_rho=cylinder_laplacian_rho,
        laplacian_rho_derivative=None,
        diameter=np.inf,
        growth_exponent=1.0,
        base_point=np.array([0.0, 0.5 * np.pi, 0.0, 0.0]),
        sampler=_cylinder_sampler,
        ray=_cylinder_ray,
        description="unit S^3 times the line, hyperspherical angles (psi, theta, phi) and t",
        kink_points=(np.pi,),
    )
    spaces["CP2"] = ModelSpace(
        name="CP2",
        metric=_kahler_metric(+1.0),
        domain=lambda x: np.all(np.isfinite(x), axis=-1),
        rho=lambda x: np.arctan(_norm4(x)),
        volume_density=_compact(lambda r: np.pi**2 * np.sin(r) ** 2 * np.sin(2.0 * r), 0.5 * np.pi),
        log_volume_density=lambda r: 2.0 * np.log(np.pi) + 2.0 * np.log(np.sin(r)) + np.log(np.sin(2.0 * r)),
        laplacian_rho=lambda r: 2.0 / np.tan(r) + 2.0 / np.tan(2.0 * r),
        laplacian_rho_derivative=lambda r: -2.0 / np.sin(r) ** 2 - 4.0 / np.sin(2.0 * r) ** 2,
        diameter=0.5 * np.pi,
        growth_exponent=0.0,
        base_point=np.zeros(4),
        sampler=_ball_sampler(2.0),
        ray=_ray(np.tan),
        description="Fubini-Study metric, holomorphic curvature 4",
    )
    spaces["CH2"] = ModelSpace(
        name="CH2",
        metric=_kahler_metric(-1.0),
        domain=_ball_domain(1.0),
        rho=lambda x: np.arctanh(_norm4(x)),
        volume_density=lambda r: np.pi**2 * np.sinh(r) ** 2 * np.sinh(2.0 * r),
        log_volume_density=lambda r: 2.0 * np.log(np.pi) + 2.0 * _log_sinh(r) + _log_sinh(2.0 * np.asarray(r)),
        laplacian_rho=chm_laplacian_rho(2),
        laplacian_rho_derivative=chm_laplacian_rho_derivative(2),
        diameter=np.inf,
        growth_exponent=None,
        base_point=np.zeros(4),
        sampler=_ball_sampler(0.8),
        ray=_ray(np.tanh),
        description="Bergman metric, holomorphic curvature -4",
    )
    return spaces


_CATALOG = _build_catalog()
SPACE_NAMES = tuple(_CATALOG)


def catalog(name: str) -> ModelSpace:
    try:
        return _CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown space {name!r}; choose from {', '.join(SPACE_NAMES)}") from None


# --------------------------------------------------------------------------
# finite-difference derivatives of the metric


def _stencil_points(x, h):
    """All points needed for 4th-order first and second derivatives at x."""
    e = np.eye(4) * h
    pts = [x]
    for k in range(4):
        for s in (2, 1, -1, -2):
            pts.append(x + s * e[k])
    for k in range(4):
        for l in range(k + 1, 4):
            for s in (1, 2):
                for sk, sl in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                    pts.append(x + s * (sk * e[k] + sl * e[l]))
    return np.array(pts)


def metric_derivatives(metric, x, h: float = 1e-3):
    """``(g, dg, ddg)`` with ``dg[k,i,j] = d_k g_ij`` and ``ddg[k,l,i,j] = d_k d_l g_ij``.

    Fourth-order central differences; mixed second derivatives come from
    Richardson extrapolation of the h and 2h cross stencils.
    """
    x = np.asarray(x, dtype=float)
    vals = metric(_stencil_points(x, h))
    g = vals[0]
    dg = np.empty((4, 4, 4))
    ddg = np.empty((4, 4, 4, 4))
    idx = 1
    for k in range(4):
        f2, f1, fm1, fm2 = vals[idx : idx + 4]
        idx += 4
        dg[k] = (-f2 + 8.0 * f1 - 8.0 * fm1 + fm2) / (12.0 * h)
        ddg[k, k] = (-f2 + 16.0 * f1 - 30.0 * g + 16.0 * fm1 - fm2) / (12.0 * h * h)
    for k in range(4):
        for l in range(k + 1, 4):
            d = []
            for s in (1, 2):
                pp, pm, mp, mm = vals[idx : idx + 4]
                idx += 4
                d.append((pp - pm - mp + mm) / (4.0 * (s * h) ** 2))
            mixed = (4.0 * d[0] - d[1]) / 3.0
            ddg[k, l] = ddg[l, k] = mixed
    return g, dg, ddg


def christoffel(g, dg):
    """``Gamma[a, b, c] = Gamma^a_bc``."""
    ginv = np.linalg.inv(g)
    first = 0.5 * (np.einsum("bkc->kbc", dg) + np.einsum("ckb->kbc", dg) - dg)
    # first[k, b, c] = 1/2 (d_b g_kc + d_c g_kb - d_k g_bc)
    return np.einsum("ak,kbc->abc", ginv, first)


def riemann_coordinate(g, dg, ddg):
    """All-lower Riemann tensor in coordinates, ``R_abab`` = sectional curvature * area^2."""
    gam = christoffel(g, dg)
    # d_b d_c g_ad etc. ddg[k,l,i,j] = d_k d_l g_ij
    t1 = np.einsum("bcad->abcd", ddg)
    t2 = np.einsum("adbc->abcd", ddg)
    t3 = np.einsum("acbd->abcd", ddg)
    t4 = np.einsum("bdac->abcd", ddg)
    quad = np.einsum("ef,ebc,fad->abcd", g, gam, gam) - np.einsum("ef,ebd,fac->abcd", g, gam, gam)
    return 0.5 * (t1 + t2 - t3 - t4) + quad


def orthonormal_frame(g):
    """Upper-triangular ``E`` with ``E^T g E = I`` (Gram-Schmidt on the coordinate frame)."""
    chol = np.linalg.cholesky(g)
    return np.linalg.inv(chol).T


def _kn(a, b):
    """Kulkarni-Nomizu-type combination used by the 4d decomposition."""
    return (
        np.einsum("ik,jl->ijkl", a, b)
        - np.einsum("il,jk->ijkl", a, b)
        + np.einsum("ik,jl->ijkl", b, a)
        - np.einsum("il,jk->ijkl", b, a)
    )


def weyl_from_riemann(riem):
    """Weyl tensor from frame components via the four-dimensional decomposition

    ``R = W + 1/2 (Ric (.) g) - R/6 (g (.) g)``.
    """
    ric = np.einsum("ijkj->ik", riem)
    scal = np.trace(ric)
    d = np.eye(4)
    ric_part = 0.5 * (
        np.einsum("ik,jl->ijkl", ric, d)
        - np.einsum("il,jk->ijkl", ric, d)
        + np.einsum("ik,jl->ijkl", d, ric)
        - np.einsum("il,jk->ijkl", d, ric)
    )
    scal_part = (scal / 6.0) * (np.einsum("ik,jl->ijkl", d, d) - np.einsum("il,jk->ijkl", d, d))
    return riem - ric_part + scal_part, ric, scal


def lambda2_operator(tensor, side: str) -> np.ndarray:
    """3x3 matrix of ``omega -> sum_{k<l} T_ijkl omega_kl`` on the Lambda^2_side basis."""
    basis = _side_basis(side)
    return 0.25 * np.einsum("aij,ijkl,bkl->ab", basis, tensor, basis)


def _side_basis(side):
    if side == "plus":
        return LAMBDA2_PLUS
    if side == "minus":
        return LAMBDA2_MINUS
    raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")


def full_lambda2_operator(tensor) -> np.ndarray:
    """6x6 matrix of the same operator on the basis (Lambda^2_+, Lambda^2_-)."""
    basis = np.concatenate([LAMBDA2_PLUS, LAMBDA2_MINUS])
    return 0.25 * np.einsum("aij,ijkl,bkl->ab", basis, tensor, basis)


@dataclass(frozen=True)
class CurvatureData:
    point: np.ndarray
    metric: np.ndarray
    frame: np.ndarray
    christoffel: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float
    weyl: np.ndarray
    weyl_plus: np.ndarray
    weyl_minus: np.ndarray
    spectrum_plus: np.ndarray
    spectrum_minus: np.ndarray

    @property
    def lambda_max_plus(self) -> float:
        return float(self.spectrum_plus[0])

    @property
    def lambda_max_minus(self) -> float:
        return float(self.spectrum_minus[0])

    def lambda_max(self, side: str = "plus") -> float:
        return self.lambda_max_plus if side == "plus" else self.lambda_max_minus

    def symmetry_residual(self) -> float:
        r = self.riemann
        return float(
            max(
                np.max(np.abs(r + np.swapaxes(r, 0, 1))),
                np.max(np.abs(r + np.swapaxes(r, 2, 3))),
                np.max(np.abs(r - np.transpose(r, (2, 3, 0, 1)))),
            )
        )

    def bianchi_residual(self) -> float:
        r = self.riemann
        cyc = r + np.transpose(r, (0, 2, 3, 1)) + np.transpose(r, (0, 3, 1, 2))
        return float(np.max(np.abs(cyc)))

    def decomposition_residual(self) -> float:
        """Largest Ricci-type trace of W; zero iff the 4d decomposition is consistent."""
        return float(np.max(np.abs(np.einsum("ijkj->ik", self.weyl))))

    def weitzenboeck_residual(self, omega) -> float:
        """Check the curvature term of the Bochner-Weitzenboeck formula on 2-forms.

        ``-R_ik w_jk + R_jk w_ik - R_ijkl w_kl`` must equal
        ``R/3 w_ij - W_ijkl w_kl`` (sums over repeated indices).
        """
        w = np.asarray(omega, dtype=float)
        lhs = (
            -np.einsum("ik,jk->ij", self.ricci, w)
            + np.einsum("jk,ik->ij", self.ricci, w)
            - np.einsum("ijkl,kl->ij", self.riemann, w)
        )
        rhs = self.scalar / 3.0 * w - np.einsum("ijkl,kl->ij", self.weyl, w)
        return float(np.max(np.abs(lhs - rhs)))


def curvature_at(space: ModelSpace, x, h: float = 1e-3) -> CurvatureData:
    """Frame curvature of ``space`` at chart point ``x``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (4,):
        raise ValueError("chart point must have shape (4,)")
    probe = _stencil_points(x, h)
    if not np.all(space.in_domain(probe)):
        raise ChartDomainError(f"point {x} (with its stencil) is outside the {space.name} chart")
    g, dg, ddg = metric_derivatives(space.metric, x, h)
    try:
        frame = orthonormal_frame(g)
    except np.linalg.LinAlgError:
        raise ChartDomainError(f"metric not positive-definite at {x}") from None
    riem_c = riemann_coordinate(g, dg, ddg)
    riem = np.einsum("ijkl,ia,jb,kc,ld->abcd", riem_c, frame, frame, frame, frame)
    weyl, ric, scal = weyl_from_riemann(riem)
    wp = lambda2_operator(weyl, "plus")
    wm = lambda2_operator(weyl, "minus")
    return CurvatureData(
        point=x,
        metric=g,
        frame=frame,
        christoffel=christoffel(g, dg),
        riemann=riem,
        ricci=ric,
        scalar=float(scal),
        weyl=weyl,
        weyl_plus=wp,
        weyl_minus=wm,
        spectrum_plus=symmetric_eigvals3(wp)[::-1],
        spectrum_minus=symmetric_eigvals3(wm)[::-1],
    )


def weyl_operator_spectrum(data: CurvatureData, side: str = "plus") -> np.ndarray:
    """Eigenvalues of W^side on Lambda^2_side in descending order."""
    _side_basis(side)
    return data.spectrum_plus if side == "plus" else data.spectrum_minus


def base_curvature(space: ModelSpace) -> CurvatureData:
    """Curvature at a fixed interior reference point; the catalog spaces are homogeneous."""
    ref = {"S3xR": np.array([1.0, 1.2, 0.4, 0.0])}.get(space.name, np.full(4, 0.1))
    return _cached_curvature(space.name, tuple(ref))


_CURVATURE_CACHE: dict = {}


def _cached_curvature(name, ref):
    key = (name, ref)
    if key not in _CURVATURE_CACHE:
        _CURVATURE_CACHE[key] = curvature_at(catalog(name), np.array(ref))
    return _CURVATURE_CACHE[key]


def ball_volume(space: ModelSpace, r: float, atol: float = 1e-10) -> float:
    """``vol(B(r)) = int_0^r J`` by adaptive Simpson."""
    if not r > 0:
        raise ValueError("radius must be positive")
    top = min(float(r), space.diameter)
    breaks = [p for p in space.kink_points if p < top]
    res: QuadResult = integrate_radial(space.volume_density, 0.0, top, atol=atol, rtol=1e-13, breakpoints=breaks)
    return res.value


@dataclass(frozen=True)
class LaplacianIdentityResiduals:
    rho: float
    m: int
    laplacian: float
    square_lhs: float
    square_rhs: float
    derivative_lhs: float
    derivative_rhs: float

    @property
    def square_residual(self) -> float:
        return abs(self.square_lhs - self.square_rhs) / max(1.0, abs(self.square_rhs))

    @property
    def derivative_residual(self) -> float:
        return abs(self.derivative_lhs - self.derivative_rhs) / max(1.0, abs(self.derivative_rhs))


def laplacian_rho_identity_check(m: int, rho: float) -> LaplacianIdentityResiduals:
    """Both sides of the CH^m identities for ``(Delta rho)^2`` and ``d(Delta rho)/d rho``.

    The derivative side uses a complex-step derivative of the closed-form
    Laplacian, independent of the simplified right-hand side.
    """
    if not rho > 0:
        raise ValueError("rho must be positive")
    if m < 1:
        raise ValueError("m must be >= 1")
    lap = chm_laplacian_rho(m)
    l0 = float(lap(rho))
    sq_rhs = 4.0 * m * m + 4.0 * m * (m - 1) / np.sinh(rho) ** 2 + 4.0 / np.sinh(2.0 * rho) ** 2
    step = 1e-20 * max(1.0, rho)
    d_lhs = float(np.imag(lap(np.complex128(rho + 1j * step))) / step)
    d_rhs = -2.0 * (m - 1) / np.sinh(rho) ** 2 - 4.0 / np.sinh(2.0 * rho) ** 2
    return LaplacianIdentityResiduals(rho, m, l0, l0 * l0, float(sq_rhs), d_lhs, float(d_rhs))


def metric_laplacian(space: ModelSpace, f, x, h: float = 1e-3):
    """``(Delta f, |grad f|^2)`` at ``x`` for a scalar function on the chart.

    ``Delta f = g^ij (d_i d_j f - Gamma^k_ij d_k f)``, i.e. the analyst's
    (negative semi-definite) Laplacian, with 4th-order differences in h and
    Richardson on the mixed terms.
    """
    x = np.asarray(x, dtype=float)
    pts = _stencil_points(x, h)
    vals = np.array([f(p) for p in pts])
    f0 = vals[0]
    grad = np.empty(4)
    hess = np.empty((4, 4))
    idx = 1
    for k in range(4):
        f2, f1, fm1, fm2 = vals[idx : idx + 4]
        idx += 4
        grad[k] = (-f2 + 8.0 * f1 - 8.0 * fm1 + fm2) / (12.0 * h)
        hess[k, k] = (-f2 + 16.0 * f1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h)
    for k in range(4):
        for l in range(k + 1, 4):
            d = []
            for s in (1, 2):
                pp, pm, mp, mm = vals[idx : idx + 4]
                idx += 4
                d.append((pp - pm - mp + mm) / (4.0 * (s * h) ** 2))
            hess[k, l] = hess[l, k] = (4.0 * d[0] - d[1]) / 3.0
    g, dg, _ = metric_derivatives(space.metric, x, h)
    ginv = np.linalg.inv(g)
    gam = christoffel(g, dg)
    lap = float(np.einsum("ij,ij->", ginv, hess - np.einsum("kij,k->ij", gam, grad)))
    grad_sq = float(grad @ ginv @ grad)
    return lap, grad_sq
