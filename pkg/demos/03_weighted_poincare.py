"""
Weighted Poincare inequalities, tested radially
===============================================

A weight q works when int q phi^2 <= int |grad phi|^2 for all compactly
supported phi.  For radial phi both sides are one-dimensional integrals
against the sphere-area density J, so each cutoff gives a ratio that
must stay above 1.
"""

import numpy as np

from gapcheck.geometry import catalog
from gapcheck.weights import (
    ak_weight,
    annulus_log_bound,
    bgg_weight,
    carron_weight,
    chm_weight,
    cutoff,
    ground_state_trial,
    power_trial,
    verify_poincare,
)

rho = np.array([0.1, 1.0, 10.0])
print("Carron       ", carron_weight()(rho))
print("bgg, b = 1   ", bgg_weight(b=1.0)(rho))
print("chm, m = 2   ", chm_weight(2)(rho))
ch2 = catalog("CH2")
print("ak on CH^2   ", ak_weight(ch2.laplacian_rho, ch2.laplacian_rho_derivative)(rho))

pairs = [("R4", carron_weight()), ("H4", bgg_weight(b=1.0)), ("CH2", chm_weight(2))]
for name, weight in pairs:
    space = catalog(name)
    for family in ("linear", "log", "unit"):
        res = verify_poincare(space, weight, [cutoff(family, r) for r in (2.0, 10.0, 100.0)])
        print(f"{name:>4} {weight.name:>10} {family:>7}", np.round(res.ratios, 4))

# On R^4 the linear cutoff gives 45/11 at every scale; flatter trials push the ratio to 1
print("45/11 =", 45 / 11)
for s in (1.5, 1.2, 1.05, 1.01):
    print(f"rho^-{s} trial:", verify_poincare(catalog("R4"), carron_weight(), [power_trial(s, 1e40)]).min_ratio)

# On CH^2 the trial sqrt(rho/J) * g shows the constant m^2 = 4 cannot be raised
for outer in (5.0, 20.0, 80.0):
    trial = ground_state_trial(ch2, 1.0, outer, 0.05)
    print(f"ground-state trial, outer {outer:>4}:", verify_poincare(ch2, chm_weight(2), [trial]).min_ratio)

# The log-cutoff argument needs int_{B(r^2) - B(r)} rho^-k to grow like log r
for r in (10.0, 100.0, 1000.0):
    print(f"r = {r:>6}: S3xR {annulus_log_bound(catalog('S3xR'), 1, r):.5f}  R4 {annulus_log_bound(catalog('R4'), 4, r):.5f}")
