"""2-forms on an oriented Euclidean R^4 with real or so(n) coefficients.

A :class:`TwoForm` stores its components in an array of shape
``batch + (4, 4) + coef``, where ``coef`` is ``()`` for real-valued forms and
``(n, n)`` for so(n)-valued ones.  Indices are 0-based in code; the usual
``F_12`` is ``F.components[..., 0, 1, :, :]``.

Orthonormal bases of the (anti-)self-dual 2-forms, used everywhere an
operator on Lambda^2_{+/-} is written as a 3x3 matrix::

    Lambda^2_+ : (e12 + e34, e13 - e24, e14 + e23) / sqrt(2)
    Lambda^2_- : (e12 - e34, e13 + e24, e14 - e23) / sqrt(2)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .lie import DEFAULT_METRIC, AlgebraMetric, commutator_constant, gap_constant, levi_civita, random_skew, thooft_symbols

EPS4 = levi_civita(4)
PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def _basis(sign: float) -> np.ndarray:
    b = np.zeros((3, 4, 4))
    for a, ((i, j), (k, l), s) in enumerate(
        [((0, 1), (2, 3), 1.0), ((0, 2), (1, 3), -1.0), ((0, 3), (1, 2), 1.0)]
    ):
        b[a, i, j] = 1.0
        b[a, k, l] = sign * s
    b = (b - np.swapaxes(b, -1, -2)) / np.sqrt(2.0)
    return b


LAMBDA2_PLUS = _basis(1.0)
LAMBDA2_MINUS = _basis(-1.0)


class ChainViolation(ArithmeticError):
    """A link of the trilinear estimate chain failed numerically."""


@dataclass(frozen=True)
class TwoForm:
    components: np.ndarray
    coefficient_rank: int = 2

    def __post_init__(self):
        comp = np.asarray(self.components, dtype=float)
        r = self.coefficient_rank
        if r not in (0, 2):
            raise ValueError("coefficient_rank must be 0 (real) or 2 (so(n))")
        if comp.ndim < 2 + r or comp.shape[comp.ndim - r - 2 : comp.ndim - r] != (4, 4):
            raise ValueError(f"components shape {comp.shape} lacks the (4, 4) form axes")
        object.__setattr__(self, "components", comp)

    @property
    def form_axes(self) -> tuple[int, int]:
        nd = self.components.ndim
        r = self.coefficient_rank
        return nd - r - 2, nd - r - 1

    @property
    def n(self) -> int | None:
        return self.components.shape[-1] if self.coefficient_rank == 2 else None

    def pair(self, i: int, j: int) -> np.ndarray:
        """Component F_ij with 0-based indices."""
        a, _ = self.form_axes
        idx = (slice(None),) * a + (i, j)
        return self.components[idx]

    def _new(self, comp) -> "TwoForm":
        return TwoForm(comp, self.coefficient_rank)

    def __add__(self, other: "TwoForm") -> "TwoForm":
        return self._new(self.components + other.components)

    def __sub__(self, other: "TwoForm") -> "TwoForm":
        return self._new(self.components - other.components)

    def __mul__(self, s) -> "TwoForm":
        return self._new(self.components * s)

    __rmul__ = __mul__

    def __neg__(self) -> "TwoForm":
        return self._new(-self.components)


def from_pairs(pairs: dict, coef_shape=None) -> TwoForm:
    """Build a form from ``{(i, j): value}`` with 1-based indices ``i < j``.

    Missing pairs are zero; values may be real or so(n) matrices.
    """
    values = [np.asarray(v, dtype=float) for v in pairs.values()]
    if coef_shape is None:
        coef_shape = values[0].shape if values else ()
    comp = np.zeros((4, 4) + tuple(coef_shape))
    for (i, j), v in pairs.items():
        if not (1 <= i <= 4 and 1 <= j <= 4) or i == j:
            raise ValueError(f"bad index pair {(i, j)}")
        comp[i - 1, j - 1] = v
        comp[j - 1, i - 1] = -np.asarray(v)
    return TwoForm(comp, len(coef_shape))


def self_dual_from(f12, f13, f14) -> TwoForm:
    """Self-dual form with F_12 = F_34, F_13 = -F_24, F_14 = F_23.

    Arguments may carry matching leading batch axes.
    """
    f12, f13, f14 = (np.asarray(f, dtype=float) for f in (f12, f13, f14))
    shp = np.broadcast_shapes(f12.shape, f13.shape, f14.shape)
    r = 2 if len(shp) >= 2 and shp[-1] == shp[-2] and shp[-1] > 1 else 0
    batch, coef = shp[: len(shp) - r], shp[len(shp) - r :]
    comp = np.zeros(batch + (4, 4) + coef)
    ax = len(batch)

    def put(i, j, v):
        idx = (slice(None),) * ax + (i, j)
        comp[idx] = v
        comp[(slice(None),) * ax + (j, i)] = -v

    put(0, 1, f12)
    put(2, 3, f12)
    put(0, 2, f13)
    put(1, 3, -f13)
    put(0, 3, f14)
    put(1, 2, f14)
    return TwoForm(comp, r)


def hodge_star(form: TwoForm) -> TwoForm:
    """``(*F)_ij = 1/2 eps_ijkl F_kl`` in an oriented orthonormal frame."""
    a, b = form.form_axes
    comp = np.moveaxis(form.components, (a, b), (0, 1))
    star = 0.5 * np.tensordot(EPS4, comp, axes=([2, 3], [0, 1]))
    return form._new(np.moveaxis(star, (0, 1), (a, b)))


def project_pm(form: TwoForm) -> tuple[TwoForm, TwoForm]:
    """Split into self-dual and anti-self-dual parts ``(F + *F)/2, (F - *F)/2``."""
    star = hodge_star(form)
    return (form + star) * 0.5, (form - star) * 0.5


def is_self_dual(form: TwoForm, rtol: float = 1e-12) -> bool:
    d = np.max(np.abs(hodge_star(form).components - form.components), initial=0.0)
    return d <= rtol * max(1.0, float(np.max(np.abs(form.components), initial=0.0)))


def _pair_sq(form: TwoForm, metric: AlgebraMetric) -> np.ndarray:
    """Squared coefficient norms ``<F_ij, F_ij>`` with the two form axes last."""
    c = form.components
    if form.coefficient_rank == 0:
        sq = c * c
    else:
        sq = metric.alpha * np.sum(c * c, axis=(-2, -1))
    return sq


def norm(form: TwoForm, metric: AlgebraMetric = DEFAULT_METRIC) -> np.ndarray:
    """``sqrt(sum_{i<j} <F_ij, F_ij>)``, doubled inside the root for the tensor convention.

    For real-valued forms ``alpha`` plays no role.
    """
    sq = _pair_sq(form, metric)
    total = 0.5 * np.sum(sq, axis=(-2, -1))
    return np.sqrt(metric.form_factor * total)


def inner(f: TwoForm, g: TwoForm, metric: AlgebraMetric = DEFAULT_METRIC) -> np.ndarray:
    if f.coefficient_rank == 0:
        prod = f.components * g.components
    else:
        prod = metric.alpha * np.sum(f.components * g.components, axis=(-2, -1))
    return metric.form_factor * 0.5 * np.sum(prod, axis=(-2, -1))


def _triple_sum(c: np.ndarray, alpha: float) -> np.ndarray:
    # sum_ijk <F_ij, [F_ik, F_jk]> = -alpha sum_ijk tr(F_ij [F_ik, F_jk]) for skew F_ij
    t1 = np.einsum("...ijab,...ikbc,...jkca->...", c, c, c, optimize=True)
    t2 = np.einsum("...ijab,...jkbc,...ikca->...", c, c, c, optimize=True)
    return -alpha * (t1 - t2)


def trilinear(form: TwoForm, metric: AlgebraMetric = DEFAULT_METRIC, chunk: int = 4096):
    """The cubic term ``sum_{i,j,k} <F_ij, [F_ik, F_jk]>`` of the Weitzenboeck formula.

    Under the tensor convention the pairing of 2-forms doubles, so the value
    returned is twice the raw sum; in both conventions the sharp estimate is
    ``|trilinear(F)| <= a_G |F|^3``.
    """
    if form.coefficient_rank != 2:
        raise ValueError("trilinear term needs so(n)-valued components")
    c = form.components
    if c.ndim == 4:
        out = _triple_sum(c, metric.alpha)
    else:
        flat = c.reshape((-1,) + c.shape[-4:])
        out = np.concatenate(
            [_triple_sum(flat[s : s + chunk], metric.alpha) for s in range(0, len(flat), chunk)]
        ).reshape(c.shape[:-4])
    return metric.form_factor * out


def amgm_bound(x, y, z) -> np.ndarray:
    """Right-hand side of ``xyz <= (x^2 + y^2 + z^2)^(3/2) / (3 sqrt 3)``."""
    x, y, z = (np.asarray(v, dtype=float) for v in (x, y, z))
    return (x * x + y * y + z * z) ** 1.5 / (3.0 * np.sqrt(3.0))


@dataclass(frozen=True)
class ChainReport:
    """Quantities along the estimate ``|sum <F,[F,F]>| <= a_G |F|^3``.

    ``abs_sum``: the left side; ``triples``: 6c sum_{i<j<k}|F_ij||F_ik||F_jk|;
    ``corner``: 24c|F_12||F_13||F_14|; ``amgm``: the AM-GM bound;
    ``bound``: a_G |F|^3.
    """

    abs_sum: np.ndarray
    triples: np.ndarray
    corner: np.ndarray
    amgm: np.ndarray
    bound: np.ndarray

    def as_tuple(self):
        return (self.abs_sum, self.triples, self.corner, self.amgm, self.bound)


def trilinear_chain_report(
    form: TwoForm, metric: AlgebraMetric = DEFAULT_METRIC, rtol: float = 1e-10, check: bool = True
) -> ChainReport:
    """Evaluate every link of the cubic-term estimate and check ``a <= b <= c <= d = e``.

    ``form`` must be self-dual (the corner and AM-GM links use it).
    Raises :class:`ChainViolation` when a link fails by more than ``rtol``
    relative to the final bound.
    """
    if not is_self_dual(form, rtol=1e-10):
        raise ValueError("trilinear_chain_report requires a self-dual form")
    n = form.n
    c = commutator_constant(n, metric)
    a_g = gap_constant(n, metric)
    k = metric.form_factor
    pn = np.sqrt(_pair_sq(form, metric))  # |F_ij|, form axes last

    def p(i, j):
        return pn[..., i, j]

    trip = sum(p(i, j) * p(i, l) * p(j, l) for i in range(4) for j in range(i + 1, 4) for l in range(j + 1, 4))
    report = ChainReport(
        abs_sum=np.abs(trilinear(form, metric)),
        triples=k * 6.0 * c * trip,
        corner=k * 24.0 * c * p(0, 1) * p(0, 2) * p(0, 3),
        amgm=k * 24.0 * c * amgm_bound(p(0, 1), p(0, 2), p(0, 3)),
        bound=a_g * norm(form, metric) ** 3,
    )
    if check:
        tol = rtol * np.maximum(1.0, report.bound)
        links = zip(report.as_tuple()[:-1], report.as_tuple()[1:])
        names = ("abs_sum<=triples", "triples<=corner", "corner<=amgm")
        for name, (lo, hi) in zip(names, links):
            if np.any(lo > hi + tol):
                raise ChainViolation(f"chain link {name} fails")
        if np.any(np.abs(report.amgm - report.bound) > tol):
            raise ChainViolation("chain link amgm==bound fails")
    return report


def equality_form(scale: float = 1.0) -> TwoForm:
    """Self-dual so(4)-valued form attaining ``|trilinear| = a_G |F|^3``.

    F_12 = F_34, F_13 = -F_24, F_14 = F_23 are the three self-dual 't Hooft
    matrices; this is the pointwise shape of the one-instanton curvature.
    """
    eta = thooft_symbols(self_dual=True)
    return self_dual_from(scale * eta[0], scale * eta[1], scale * eta[2])


def trilinear_ratio(form: TwoForm, metric: AlgebraMetric = DEFAULT_METRIC) -> np.ndarray:
    """``|trilinear(F)| / |F|^3`` (zero for the zero form)."""
    nf = norm(form, metric)
    t = np.abs(trilinear(form, metric))
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(nf > 0, t / np.where(nf > 0, nf, 1.0) ** 3, 0.0)


def search_trilinear_sup(
    rng: np.random.Generator,
    metric: AlgebraMetric = DEFAULT_METRIC,
    n: int = 4,
    samples: int = 20000,
    starts: int = 8,
) -> float:
    """Lower estimate of ``sup |trilinear(F)| / |F|^3`` over self-dual so(n) forms.

    Random sampling followed by Nelder-Mead/BFGS refinement from the best
    ``starts`` samples.
    """
    raw = random_skew(rng, n, size=(samples, 3))
    forms = self_dual_from(raw[:, 0], raw[:, 1], raw[:, 2])
    ratios = trilinear_ratio(forms, metric)
    best = float(np.max(ratios))
    iu = np.triu_indices(n, 1)
    dim = len(iu[0])

    def unpack(v):
        m = np.zeros((3, n, n))
        m[:, iu[0], iu[1]] = v.reshape(3, dim)
        return m - np.swapaxes(m, -1, -2)

    def objective(v):
        m = unpack(v)
        return -float(trilinear_ratio(self_dual_from(m[0], m[1], m[2]), metric))

    for idx in np.argsort(ratios)[-starts:]:
        v0 = raw[idx][:, iu[0], iu[1]].ravel()
        res = minimize(objective, v0, method="BFGS", options={"gtol": 1e-10})
        best = max(best, -float(res.fun))
    return best
