"""Weighted Poincare (Hardy-type) weights, cutoff families and a radial verifier.

A weight ``q`` satisfies the inequality on a space when
``int q phi^2 <= int |grad phi|^2`` for every compactly supported ``phi``.
The verifier here only integrates radial test functions, for which the
inequality reduces to ``int q phi^2 J drho <= int (phi')^2 J drho`` with ``J``
the volume density of geodesic spheres; non-radial functions are not probed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .geometry import ModelSpace, chm_laplacian_rho, chm_laplacian_rho_derivative
from .quadrature import QuadratureError, integrate_radial

QUADRATIC_GROWTH = "quadratic_growth"
BOUNDED = "bounded"
DECAYING = "decaying"


class DivergentIntegralError(ArithmeticError):
    pass


@dataclass(frozen=True)
class RadialWeight:
    name: str
    profile: Callable
    growth_class: str
    singular_at_origin: bool

    def __call__(self, rho):
        return self.profile(np.asarray(rho, dtype=float))

    def sampled_growth_class(self, lo: float = 1e2, hi: float = 1e4) -> str:
        """Classify from the log-log slope of ``|q|`` sampled on ``[lo, hi]``."""
        rho = np.geomspace(lo, hi, 64)
        q = np.abs(self(rho))
        if np.all(q == 0):
            return DECAYING
        slope = np.polyfit(np.log(rho), np.log(np.maximum(q, 1e-300)), 1)[0]
        if slope < -0.5:
            return DECAYING
        if slope <= 0.5:
            return BOUNDED
        return QUADRATIC_GROWTH

    def is_order_rho_squared(self, lo: float = 1e2, hi: float = 1e4) -> bool:
        rho = np.geomspace(lo, hi, 64)
        ratio = np.abs(self(rho)) / rho**2
        return bool(ratio[-1] <= 2.0 * ratio[0] + 1e-12)


def _fd(fn, rho, h=None):
    """Fourth-order central difference; the default step shrinks with rho near 0 so the stencil stays positive."""
    rho = np.asarray(rho, dtype=float)
    if h is None:
        h = 1e-3 * np.maximum(1.0, rho) * np.minimum(1.0, rho)
    return (-fn(rho + 2 * h) + 8 * fn(rho + h) - 8 * fn(rho - h) + fn(rho - 2 * h)) / (12.0 * h)


def _fd2(fn, rho, h=None):
    rho = np.asarray(rho, dtype=float)
    if h is None:
        h = 1e-3 * np.maximum(1.0, rho) * np.minimum(1.0, rho)
    return (-fn(rho + 2 * h) + 16 * fn(rho + h) - 30 * fn(rho) + 16 * fn(rho - h) - fn(rho - 2 * h)) / (12.0 * h * h)


def carron_weight() -> RadialWeight:
    """``q = 1/rho^2``, valid on complete manifolds of nonpositive sectional curvature."""
    return RadialWeight("carron", lambda r: 1.0 / r**2, DECAYING, True)


def bgg_weight(psi=None, b: float | None = None, dpsi=None, ddpsi=None, check: bool = True) -> RadialWeight:
    """Weight built from a convex increasing ``psi`` with psi(0)=0, psi'(0)=1, psi''(0)=0.

    ``q = 3/4 (2 psi''/psi + (psi'^2 - 1)/psi^2) + 1/(4 rho^2) + 3/(4 psi^2)``.
    Passing ``b`` selects ``psi = sinh(b rho)/b`` with closed-form derivatives.
    Derivatives not supplied are taken by finite differences.
    """
    if b is not None:
        if not b > 0:
            raise ValueError("b must be positive")
        psi = lambda r: np.sinh(b * r) / b  # noqa: E731
        dpsi = lambda r: np.cosh(b * r)  # noqa: E731
        ddpsi = lambda r: b * np.sinh(b * r)  # noqa: E731
        name = f"bgg(b={b:g})"

        def closed(r):
            return 9.0 * b * b / 4.0 + 1.0 / (4.0 * r * r) + 3.0 * b * b / (4.0 * np.sinh(b * r) ** 2)

        def large(r):
            # same value, written to survive sinh overflow
            return np.where(b * r < 300.0, closed(np.minimum(r, 300.0 / b)), 9.0 * b * b / 4.0 + 1.0 / (4.0 * r * r))

    elif psi is None:
        raise ValueError("need psi or b")
    else:
        name = "bgg"
        large = None
    dpsi = dpsi or (lambda r: _fd(psi, r))
    ddpsi = ddpsi or (lambda r: _fd2(psi, r))
    if check:
        _check_psi(psi, dpsi, ddpsi)

    def profile(r):
        if large is not None:
            return large(r)
        p, dp, ddp = psi(r), dpsi(r), ddpsi(r)
        return 0.75 * (2.0 * ddp / p + (dp * dp - 1.0) / (p * p)) + 1.0 / (4.0 * r * r) + 0.75 / (p * p)

    return RadialWeight(name, profile, BOUNDED, True)


def bgg_weight_formula(psi, dpsi, ddpsi) -> Callable:
    """The raw formula, for cross-checking closed forms."""

    def q(r):
        p, dp, ddp = psi(r), dpsi(r), ddpsi(r)
        return 0.75 * (2.0 * ddp / p + (dp * dp - 1.0) / (p * p)) + 1.0 / (4.0 * r * r) + 0.75 / (p * p)

    return q


def _check_psi(psi, dpsi, ddpsi):
    if abs(float(psi(np.array(0.0)))) > 1e-10:
        raise ValueError("psi(0) must be 0")
    r = np.linspace(1e-3, 10.0, 200)
    d0 = float(dpsi(np.array(1e-6)))
    if abs(d0 - 1.0) > 1e-4:
        raise ValueError("psi'(0) must be 1")
    if np.any(dpsi(r) <= 0):
        raise ValueError("psi must be increasing")
    if np.any(ddpsi(r) < -1e-8):
        raise ValueError("psi must be convex")


def ak_weight(laplacian_rho, derivative=None, name: str = "ak") -> RadialWeight:
    """``q = 1/(4 rho^2) + (Delta rho)^2/4 + (1/2) d(Delta rho)/d rho``.

    This is the distance-function weight on a manifold with a pole after the
    Hessian and Ricci terms are traded for ``<grad rho, grad Delta rho>``
    through Bochner's formula (``|grad rho| = 1``).
    """
    deriv = derivative or (lambda r: _fd(laplacian_rho, r))

    def profile(r):
        lap = laplacian_rho(r)
        return 1.0 / (4.0 * r * r) + 0.25 * lap * lap + 0.5 * deriv(r)

    return RadialWeight(name, profile, BOUNDED, True)


def chm_weight(m: int) -> RadialWeight:
    """``q = m^2 + 1/(4 rho^2) + (m-1)^2/sinh^2 rho - 1/sinh^2(2 rho)`` on CH^m."""
    if int(m) != m or m < 1:
        raise ValueError("m must be an integer >= 1")

    def profile(r):
        return m * m + chm_weight_excess(m)(r)

    return RadialWeight(f"chm(m={m})", profile, BOUNDED, True)


def chm_weight_excess(m: int) -> Callable:
    """The non-constant part ``1/(4 rho^2) + (m-1)^2/sinh^2 rho - 1/sinh^2(2 rho)``.

    Evaluated with series near 0 to avoid cancellation between the
    ``1/(4 rho^2)`` and ``1/sinh^2(2 rho)`` terms.
    """

    def excess(r):
        r = np.asarray(r, dtype=float)
        out = np.empty_like(r)
        small = r < 1e-2
        rs = r[small]
        # 1/(4r^2) - 1/sinh^2(2r) = 1/3 - 4 r^2/15 + 32 r^4/189 - ...
        out[small] = (1.0 / 3.0 - 4.0 * rs**2 / 15.0 + 32.0 * rs**4 / 189.0) + (m - 1) ** 2 / np.sinh(rs) ** 2
        rl = np.minimum(r[~small], 350.0)
        with np.errstate(over="ignore"):
            out[~small] = 1.0 / (4.0 * r[~small] ** 2) + (m - 1) ** 2 / np.sinh(rl) ** 2 - 1.0 / np.sinh(2.0 * rl) ** 2
        return out

    return excess


def ak_chm_weight(m: int) -> RadialWeight:
    """ak_weight applied to the CH^m Laplacian profile, with the closed-form derivative."""
    return ak_weight(chm_laplacian_rho(m), chm_laplacian_rho_derivative(m), name=f"ak(CH^{m})")


# --------------------------------------------------------------------------
# test functions


LINEAR = "linear_cutoff"
LOG = "log_cutoff"
UNIT = "unit_cutoff"
CUSTOM = "custom"
FAMILY_ALIASES = {"linear": LINEAR, "log": LOG, "unit": UNIT, LINEAR: LINEAR, LOG: LOG, UNIT: UNIT}


@dataclass(frozen=True)
class TestFunction:
    family: str
    profile: Callable
    derivative: Callable
    support: float
    parameters: dict = field(default_factory=dict)
    breakpoints: tuple = ()

    __test__ = False  # not a pytest class

    def __call__(self, rho):
        return self.profile(np.asarray(rho, dtype=float))


def cutoff(family: str, r: float) -> TestFunction:
    """The cutoff families used with the weighted inequality.

    ``linear``: 1 on B(r), ``2 - rho/r`` on B(2r)\\B(r).
    ``log``:    1 on B(r), ``2 - log rho/log r`` on B(r^2)\\B(r).
    ``unit``:   1 on B(r), ``1 - (rho - r)`` on B(r+1)\\B(r).
    """
    fam = FAMILY_ALIASES.get(family)
    if fam is None:
        raise ValueError(f"unknown cutoff family {family!r}")
    r = float(r)
    if not r > 1:
        raise ValueError("cutoff radius must exceed 1")

    if fam == LINEAR:
        outer = 2.0 * r

        def phi(rho):
            return np.clip(2.0 - rho / r, 0.0, 1.0)

        def dphi(rho):
            return np.where((rho > r) & (rho < outer), -1.0 / r, 0.0)

    elif fam == LOG:
        outer = r * r
        lr = np.log(r)

        def phi(rho):
            with np.errstate(divide="ignore"):
                return np.clip(2.0 - np.log(rho) / lr, 0.0, 1.0)

        def dphi(rho):
            inside = (rho > r) & (rho < outer)
            return np.where(inside, -1.0 / (np.where(inside, rho, 1.0) * lr), 0.0)

    else:
        outer = r + 1.0

        def phi(rho):
            return np.clip(1.0 - (rho - r), 0.0, 1.0)

        def dphi(rho):
            return np.where((rho > r) & (rho < outer), -1.0, 0.0)

    return TestFunction(fam, phi, dphi, outer, {"r": r}, (r, outer))


def ground_state_trial(space: ModelSpace, inner: float = 1.0, outer: float = 10.0, delta: float = 0.05) -> TestFunction:
    """Near-extremal radial trial ``phi = sqrt(rho/J) * g`` for the distance weight.

    ``sqrt(rho/J)`` is the formal ground state of ``-Delta - q`` for the
    ak weight (``q`` vanishes on it).  ``g`` is ``(rho/inner)^delta`` up to
    ``inner``, 1 up to ``outer``, then linear to 0 at ``2 outer``; the
    inequality's defect is exactly ``int rho g'^2``.
    """
    a, L = float(inner), float(outer)
    logj = space.log_volume_density

    def g(rho):
        return np.where(rho < a, (np.maximum(rho, 1e-300) / a) ** delta, np.clip(2.0 - rho / L, 0.0, 1.0))

    def dg(rho):
        return np.where(
            rho < a,
            delta / a * (np.maximum(rho, 1e-300) / a) ** (delta - 1.0),
            np.where((rho > L) & (rho < 2.0 * L), -1.0 / L, 0.0),
        )

    def h(rho):
        return np.exp(0.5 * (np.log(rho) - logj(rho)))

    def dh(rho):
        return h(rho) * 0.5 * (1.0 / rho - space.laplacian_rho(rho))

    def phi(rho):
        rho = np.maximum(np.asarray(rho, dtype=float), 1e-300)
        return h(rho) * g(rho)

    def dphi(rho):
        rho = np.maximum(np.asarray(rho, dtype=float), 1e-300)
        return dh(rho) * g(rho) + h(rho) * dg(rho)

    return TestFunction(CUSTOM, phi, dphi, 2.0 * L, {"inner": a, "outer": L, "delta": delta}, (a, L, 2.0 * L))


def power_trial(exponent: float, outer: float) -> TestFunction:
    """``phi = 1`` on [0, 1], ``rho^-exponent`` up to ``outer``, then linear to 0 at ``2 outer``."""
    s, L = float(exponent), float(outer)

    def phi(rho):
        rho = np.asarray(rho, dtype=float)
        base = np.where(rho <= 1.0, 1.0, np.maximum(rho, 1.0) ** -s)
        return base * np.clip(2.0 - rho / L, 0.0, 1.0)

    def dphi(rho):
        rho = np.asarray(rho, dtype=float)
        rr = np.maximum(rho, 1.0)
        base = np.where(rho <= 1.0, 1.0, rr**-s)
        dbase = np.where(rho <= 1.0, 0.0, -s * rr ** (-s - 1.0))
        cut = np.clip(2.0 - rho / L, 0.0, 1.0)
        dcut = np.where((rho > L) & (rho < 2.0 * L), -1.0 / L, 0.0)
        return dbase * cut + base * dcut

    return TestFunction(CUSTOM, phi, dphi, 2.0 * L, {"exponent": s, "outer": L}, (1.0, L, 2.0 * L))


# --------------------------------------------------------------------------
# verifier


@dataclass(frozen=True)
class PoincareResult:
    ratios: tuple
    gradient_integrals: tuple
    weighted_integrals: tuple
    tolerance: float = 1e-6

    @property
    def min_ratio(self) -> float:
        return min(self.ratios)

    @property
    def passed(self) -> bool:
        return self.min_ratio >= 1.0 - self.tolerance


def _log_shift(space: ModelSpace, top: float) -> float:
    if space.growth_exponent is None:
        return float(space.log_volume_density(np.array(top)))
    return 0.0


def _check_origin(f, name):
    # integrable at 0 iff rho f(rho) -> 0; flags q phi^2 J ~ 1/rho or worse
    r = np.array([1e-12, 1e-9, 1e-6])
    v = np.abs(np.asarray(f(r), dtype=float)) * r
    if not np.all(np.isfinite(v)) or (v[0] > 1e-3 and v[0] >= 0.5 * v[1]):
        raise DivergentIntegralError(f"{name} integral diverges at rho = 0")


def radial_integrals(space: ModelSpace, weight: RadialWeight, test: TestFunction, atol: float = 1e-10):
    """``(int phi'^2 J, int q phi^2 J)`` over the test function's support.

    For exponentially growing spaces both integrands are scaled by
    ``exp(-log J(support))``; the ratio is unaffected.
    """
    top = min(test.support, space.diameter)
    shift = _log_shift(space, top)

    def dens(rho):
        rho = np.asarray(rho, dtype=float)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            if space.growth_exponent is None:
                return np.exp(space.log_volume_density(np.maximum(rho, 1e-300)) - shift)
            return space.volume_density(rho)

    def grad_part(rho):
        return test.derivative(rho) ** 2 * dens(rho)

    def weight_part(rho):
        with np.errstate(divide="ignore", invalid="ignore"):
            v = weight(rho) * test(rho) ** 2 * dens(rho)
        return np.where(dens(rho) == 0, 0.0, v)

    _check_origin(weight_part, "weight")
    breaks = [p for p in test.breakpoints + space.kink_points if 0 < p < top]
    if space.growth_exponent is None:
        # integrands concentrate within O(1) of the outer edge
        breaks += [top - 0.25 * j for j in range(1, 400) if top - 0.25 * j > 0]
    out = []
    for f in (grad_part, weight_part):
        try:
            res = integrate_radial(f, 0.0, top, atol=atol, rtol=1e-12, breakpoints=breaks)
        except QuadratureError as exc:
            raise DivergentIntegralError(str(exc)) from exc
        if not np.isfinite(res.value):
            raise DivergentIntegralError("non-finite integral")
        out.append(res.value)
    return tuple(out)


def verify_poincare(space: ModelSpace, weight: RadialWeight, tests, tolerance: float = 1e-6) -> PoincareResult:
    """Ratios ``int phi'^2 J / int q phi^2 J`` for each radial test function.

    The inequality is consistent with the samples iff ``min_ratio >= 1 - tolerance``.
    """
    tests = list(tests)
    if not tests:
        raise ValueError("need at least one test function")
    ratios, grads, weighted = [], [], []
    for t in tests:
        num, den = radial_integrals(space, weight, t)
        grads.append(num)
        weighted.append(den)
        ratios.append(np.inf if den <= 0 else num / den)
    return PoincareResult(tuple(ratios), tuple(grads), tuple(weighted), tolerance)


def annulus_log_bound(space: ModelSpace, k: float, r: float, atol: float = 1e-9) -> float:
    """``int_{B(r^2) - B(r)} rho^-k / log r`` for a space with ``vol(B(r)) = O(r^k)``."""
    if not r > np.e:
        raise ValueError("annulus estimate needs r > e")
    if space.growth_exponent is None or (space.growth_exponent > 0 and k < space.growth_exponent):
        raise ValueError(f"{space.name} does not have vol(B(r)) = O(r^{k:g})")
    lo, hi = float(r), min(float(r) ** 2, space.diameter)
    if hi <= lo:
        return 0.0

    def f(rho):
        return np.asarray(rho, dtype=float) ** (-k) * space.volume_density(rho)

    val = integrate_radial(f, lo, hi, atol=atol, rtol=1e-12, singular_start=False, log_threshold=10.0)
    return val.value / np.log(r)
