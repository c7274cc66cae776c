"""Closed-form eigenvalues of symmetric 3x3 matrices (trigonometric solution of the cubic)."""

import numpy as np


def symmetric_eigvals3(a) -> np.ndarray:
    """Eigenvalues of the symmetric matrices ``a[..., 3, 3]``, ascending.

    Uses the shifted characteristic polynomial ``det(B - beta I)`` with
    ``B = (A - q I)/p``, whose roots are ``2 cos(phi + 2 pi k/3)``.
    """
    a = np.asarray(a, dtype=float)
    a = 0.5 * (a + np.swapaxes(a, -1, -2))
    q = np.trace(a, axis1=-2, axis2=-1) / 3.0
    off = a[..., 0, 1] ** 2 + a[..., 0, 2] ** 2 + a[..., 1, 2] ** 2
    diag = (a[..., 0, 0] - q) ** 2 + (a[..., 1, 1] - q) ** 2 + (a[..., 2, 2] - q) ** 2
    p = np.sqrt((diag + 2.0 * off) / 6.0)
    eye = np.eye(3)
    safe_p = np.where(p > 0, p, 1.0)
    b = (a - q[..., None, None] * eye) / safe_p[..., None, None]
    r = np.clip(np.linalg.det(b) / 2.0, -1.0, 1.0)
    phi = np.arccos(r) / 3.0
    hi = q + 2.0 * p * np.cos(phi)
    lo = q + 2.0 * p * np.cos(phi + 2.0 * np.pi / 3.0)
    mid = 3.0 * q - hi - lo
    out = np.stack([lo, mid, hi], axis=-1)
    return np.where((p > 0)[..., None], out, q[..., None] * np.ones(3))
