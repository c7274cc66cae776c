"""
Curvature of the model spaces
=============================

Every threshold needs the scalar curvature R and the top eigenvalue of the
Weyl operator on self-dual (or anti-self-dual) 2-forms.  Here they are
computed from nothing but the metric in each chart, by finite differences.
"""

import numpy as np

from gapcheck.geometry import SPACE_NAMES, ball_volume, catalog, curvature_at

rng = np.random.default_rng(1)

print(f"{'space':>5} {'R':>12} {'W+ eigenvalues':>30} {'W- eigenvalues':>30} {'residual':>9}")
for name in SPACE_NAMES:
    space = catalog(name)
    x = space.sample(rng, 1)[0]
    d = curvature_at(space, x)
    plus = np.array2string(d.spectrum_plus, precision=4, suppress_small=True)
    minus = np.array2string(d.spectrum_minus, precision=4, suppress_small=True)
    print(f"{name:>5} {d.scalar:12.6f} {plus:>30} {minus:>30} {d.decomposition_residual():9.1e}")

# CP^2 with the Fubini-Study metric is self-dual but not anti-self-dual:
# W+ has spectrum (R/6, -R/12, -R/12).  Reversing orientation swaps the roles,
# which is why the CP^2 and CH^2 statements bound F- instead of F+.

# Radial data used by the weighted inequalities: Delta rho and J(rho)
for name in ("R4", "H4", "CH2", "S3xR"):
    space = catalog(name)
    rho = np.array([0.5, 1.0, 2.0, 4.0])
    print(name, "Delta rho:", np.round(space.laplacian_rho(rho), 5))

# Volumes of balls: polynomial growth for R^4 and the cylinder, exponential for H^4
for name in ("R4", "S3xR", "H4"):
    space = catalog(name)
    vols = [ball_volume(space, r) for r in (2.0, 4.0, 8.0)]
    print(name, "vol B(2), B(4), B(8):", np.round(vols, 2))
print("vol CP^2 =", ball_volume(catalog("CP2"), 10.0), " pi^2/2 =", np.pi**2 / 2)
