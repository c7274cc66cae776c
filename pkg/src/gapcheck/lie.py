"""Skew-symmetric matrices, the scaled so(n) inner product and the gap constants.

Elements of so(n) are plain ``numpy`` arrays of shape ``(..., n, n)``; leading
axes are batch axes and every function here broadcasts over them.

The inner product is ``<M, N> = alpha * sum_ab M_ab N_ab``.  Common choices
of ``alpha``: 1 (Frobenius), 1/2 (standard basis orthonormal, the default),
``n - 2`` (Killing form).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

STANDARD = "standard"
TENSOR = "tensor"
CONVENTIONS = (STANDARD, TENSOR)


@dataclass(frozen=True)
class AlgebraMetric:
    """Scaling of the so(n) inner product plus the 2-form norm convention.

    ``convention="standard"`` uses ``|dx^i ^ dx^j|^2 = 1``;
    ``convention="tensor"`` uses ``|dx^i ^ dx^j|^2 = 2``.
    """

    alpha: float = 0.5
    convention: str = STANDARD

    def __post_init__(self):
        if not np.isfinite(self.alpha) or self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha!r}")
        if self.convention not in CONVENTIONS:
            raise ValueError(f"unknown convention {self.convention!r}")

    @property
    def form_factor(self) -> float:
        """Multiplier applied to sum_{i<j} when squaring a 2-form norm."""
        return 2.0 if self.convention == TENSOR else 1.0


DEFAULT_METRIC = AlgebraMetric()


def skew(entries, atol: float = 1e-12) -> np.ndarray:
    """Validate and return ``entries`` as a float array in so(n)."""
    m = np.asarray(entries, dtype=float)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2] or m.shape[-1] < 2:
        raise ValueError(f"expected (..., n, n) with n >= 2, got shape {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m), initial=0.0)))
    if np.max(np.abs(m + np.swapaxes(m, -1, -2)), initial=0.0) > atol * scale:
        raise ValueError("matrix is not skew-symmetric")
    return m


def _check_pair(m, n):
    m = np.asarray(m, dtype=float)
    n = np.asarray(n, dtype=float)
    if m.shape[-2:] != n.shape[-2:]:
        raise ValueError(f"dimension mismatch: {m.shape[-2:]} vs {n.shape[-2:]}")
    return m, n


def inner(m, n, metric: AlgebraMetric = DEFAULT_METRIC) -> np.ndarray:
    m, n = _check_pair(m, n)
    return metric.alpha * np.sum(m * n, axis=(-2, -1))


def norm(m, metric: AlgebraMetric = DEFAULT_METRIC) -> np.ndarray:
    return np.sqrt(inner(m, m, metric))


def bracket(m, n) -> np.ndarray:
    m, n = _check_pair(m, n)
    return m @ n - n @ m


def so3_generators() -> np.ndarray:
    """Return ``L[k]`` with ``(L_k)_ij = -eps_kij``, so ``[L_1, L_2] = L_3``."""
    eps = levi_civita(3)
    return -eps


def thooft_symbols(self_dual: bool = True) -> np.ndarray:
    """'t Hooft symbols ``eta[a, mu, nu]`` as three 4x4 skew matrices.

    ``eta^a_{bc} = eps_abc`` and ``eta^a_{b4} = +-delta_ab``.  With
    ``self_dual=True`` each ``eta[a]`` is a self-dual 2-form on oriented R^4
    and the three matrices span the su(2) factor of so(4) they generate.
    """
    sign = 1.0 if self_dual else -1.0
    eta = np.zeros((3, 4, 4))
    eta[:, :3, :3] = levi_civita(3)
    for a in range(3):
        eta[a, a, 3] = sign
        eta[a, 3, a] = -sign
    return eta


def su2_generators() -> np.ndarray:
    """Real 4x4 su(2) basis ``T_a = -eta^a / 2`` with ``[T_a, T_b] = eps_abc T_c``.

    This is su(2) acting on C^2 = R^4, i.e. SU(2) inside SO(4), which is why
    the n >= 4 branch of the gap constant applies to it.
    """
    return -0.5 * thooft_symbols(self_dual=True)


def levi_civita(n: int) -> np.ndarray:
    eps = np.zeros((n,) * n)
    for perm in permutations(range(n)):
        eps[perm] = _parity(perm)
    return eps


def _parity(perm) -> int:
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def _check_n(n: int) -> int:
    if int(n) != n or n < 3:
        raise ValueError(f"structure group dimension n must be an integer >= 3, got {n!r}")
    return int(n)


def commutator_constant(n: int, metric: AlgebraMetric = DEFAULT_METRIC) -> float:
    """Best constant ``c`` in ``|[M, N]| <= c |M| |N|`` on so(n).

    ``c = 1/sqrt(2 alpha)`` for n = 3 and ``1/sqrt(alpha)`` for n >= 4.
    """
    n = _check_n(n)
    if n == 3:
        return 1.0 / np.sqrt(2.0 * metric.alpha)
    return 1.0 / np.sqrt(metric.alpha)


def gap_constant(n: int, metric: AlgebraMetric = DEFAULT_METRIC) -> float:
    """The constant ``a_G`` for a structure group G inside O(n).

    Standard form convention: ``2/sqrt(3 alpha)`` (n = 3) and
    ``2 sqrt(2)/sqrt(3 alpha)`` (n >= 4).  The tensor convention divides both
    by sqrt(2).
    """
    n = _check_n(n)
    base = 2.0 / np.sqrt(3.0 * metric.alpha)
    if n >= 4:
        base *= np.sqrt(2.0)
    if metric.convention == TENSOR:
        base /= np.sqrt(2.0)
    return float(base)


def commutator_witness(n: int) -> tuple[np.ndarray, np.ndarray]:
    """A pair attaining ``|[M, N]| = c |M| |N|``.

    ``L_1, L_2`` for n = 3; two 't Hooft matrices in the top-left 4x4 block
    for n >= 4 (``[eta^1, eta^2] = -2 eta^3``).
    """
    n = _check_n(n)
    if n == 3:
        gens = so3_generators()
        return gens[0], gens[1]
    eta = thooft_symbols(self_dual=True)
    m = np.zeros((2, n, n))
    m[:, :4, :4] = eta[:2]
    return m[0], m[1]


def random_skew(rng: np.random.Generator, n: int, size=()) -> np.ndarray:
    """Gaussian random elements of so(n) with shape ``size + (n, n)``."""
    size = (size,) if np.isscalar(size) else tuple(size)
    a = rng.standard_normal(size + (n, n))
    return a - np.swapaxes(a, -1, -2)
