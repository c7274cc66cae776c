"""
The one-instanton
=================

The BPST connection is the model for the equality case: its curvature is
self-dual, its charge is 1, and on the round S^4 its curvature norm is the
constant sqrt 3 = 4/a_G.
"""

import numpy as np

from gapcheck.forms import norm
from gapcheck.gauge import (
    InstantonParams,
    bianchi_residual,
    bpst_field,
    charge,
    charge_monte_carlo,
    curvature,
    kato_ratio,
    pullback_norm_s4,
    random_polynomial_field,
    self_dual_norms,
    ym_residual,
)

field = bpst_field()
print("|F|(0) =", float(norm(curvature(field, np.zeros(4)))), " sqrt 48 =", np.sqrt(48))

rng = np.random.default_rng(4)
x = rng.normal(size=4)
fp, fm = self_dual_norms(field, x)
print("at a random point |F+| =", float(fp), " |F-| =", float(fm))
print("Yang-Mills residual", ym_residual(field, x), " Bianchi residual", bianchi_residual(field, x))

# A random connection satisfies Bianchi but not Yang-Mills
other = random_polynomial_field(rng)
print("random field: Bianchi", bianchi_residual(other, x * 0.3), " Yang-Mills", ym_residual(other, x * 0.3))

# Charge by radial quadrature, then by importance sampling
print("charge:", charge(field), " anti-instanton:", charge(bpst_field(anti=True)))
est, err = charge_monte_carlo(field, np.random.default_rng(0), samples=20000)
print(f"Monte Carlo charge: {est:.4f} +- {err:.4f}")

# Conformal invariance: on S^4 the norm is constant only for the centered unit instanton
pts = rng.normal(size=(5, 4)) * 2
print("S^4 norm, lambda = 1:", np.round(pullback_norm_s4(field, pts), 12))
print("S^4 norm, lambda = 2:", np.round(pullback_norm_s4(bpst_field(InstantonParams(scale=2.0)), pts), 6))

# Refined Kato inequality: the ratio sits exactly at 3/2 for this field
for r in (0.2, 1.0, 2.5):
    print(f"Kato ratio at |x| = {r}:", kato_ratio(field, np.array([r, 0.0, 0.0, 0.0])))
