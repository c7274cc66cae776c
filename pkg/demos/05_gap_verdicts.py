"""
Thresholds and verdicts
=======================

Each gap statement says: if |F+| stays below a curvature-dependent threshold
and is strictly below somewhere, then F+ vanishes.  The toolkit evaluates the
threshold, compares a connection with it and reports which branch applies.
"""

import numpy as np

from gapcheck.gap import c12_constant_part, evaluate_gap, lemma3_check, make_spec, side_norm_function, threshold_profile
from gapcheck.gauge import bpst_field, self_dual_norms, zero_field
from gapcheck.geometry import catalog

rng = np.random.default_rng(5)
s4 = catalog("S4")
spec = make_spec("T5", s4)
pts = s4.sample(rng, 25)

# The unit instanton sits exactly on the S^4 threshold; the flat connection is strictly below
for label, field in (("BPST", bpst_field()), ("zero", zero_field())):
    rep = evaluate_gap(side_norm_function(field, s4), spec, pts)
    print(f"S^4, {label}: {rep.verdict}")

# On flat R^4 the threshold 2/(a_G rho^2) is too small for the instanton
rep = evaluate_gap(lambda x: float(self_dual_norms(bpst_field(), x)[0]), make_spec("C10", catalog("R4")), [np.array([1.0, 0, 0, 0])])
print("R^4, BPST at rho = 1:", rep.verdict, " margin", rep.violation_witness.margin)

# Threshold profiles along a ray
rho = np.array([0.1, 1.0, 5.0, 50.0])
for theorem, name, kwargs in (("C10", "R4", {}), ("C12", "H4", {"p": 0.5}), ("T14", "CH2", {}), ("C7", "S3xR", {})):
    print(f"{theorem:>4} on {name:>4}:", np.round(threshold_profile(make_spec(theorem, catalog(name), **kwargs), rho), 6))

# The hyperbolic threshold stays positive exactly for 3/8 <= p <= 3/4
for p in (0.3, 0.375, 0.5, 0.75, 0.9):
    print(f"p = {p}: constant part {c12_constant_part(p):+.4f}")

# The differential inequality behind all of this, checked by finite differences
for name in ("S4", "R4"):
    x = np.array([0.3, -0.2, 0.4, 0.1])
    res = lemma3_check(bpst_field(), catalog(name), 0.5, x)
    print(f"{name}: lhs {res.lhs:+.6f}  rhs {res.rhs:+.6f}  holds {res.holds}")
