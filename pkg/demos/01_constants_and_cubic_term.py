"""
The structure-group constant and the cubic term
===============================================

a_G controls the cubic term |<F, [F, F]>| <= a_G |F|^3 for self-dual forms.
This script evaluates it, shows the commutator estimate it is built from,
and finds the self-dual form that makes the estimate an equality.
"""

import numpy as np

from gapcheck.forms import equality_form, norm, search_trilinear_sup, self_dual_from, trilinear, trilinear_chain_report
from gapcheck.lie import AlgebraMetric, bracket, commutator_constant, commutator_witness, gap_constant, random_skew
from gapcheck.lie import norm as alg_norm

# a_G for O(3) and O(n >= 4) at the default inner product alpha = 1/2
for n in (3, 4):
    print(f"n = {n}: c = {commutator_constant(n):.6f}, a_G = {gap_constant(n):.6f}")
print("4/a_G =", 4 / gap_constant(4), "(the S^4 threshold, sqrt 3)")

# Rescaling the inner product moves everything by powers of alpha
for alpha in (0.25, 0.5, 1.0, 2.0):
    m = AlgebraMetric(alpha)
    print(f"alpha = {alpha}: a_G = {gap_constant(4, m):.6f}  tensor convention {gap_constant(4, AlgebraMetric(alpha, 'tensor')):.6f}")

# The commutator estimate |[M, N]| <= c |M||N| on random pairs, and a pair that attains it
rng = np.random.default_rng(0)
a, b = random_skew(rng, 4, size=5000), random_skew(rng, 4, size=5000)
ratio = alg_norm(bracket(a, b)) / (alg_norm(a) * alg_norm(b))
print("largest random commutator ratio / c:", ratio.max() / commutator_constant(4))
m, k = commutator_witness(4)
print("witness ratio / c:", alg_norm(bracket(m, k)) / (alg_norm(m) * alg_norm(k)) / commutator_constant(4))

# Random self-dual so(4)-valued forms: each link of the estimate chain
r = random_skew(rng, 4, size=(3, 4))
chain = trilinear_chain_report(self_dual_from(*r))
for name, values in zip(("|sum|", "triples", "corner", "AM-GM", "a_G|F|^3"), chain.as_tuple()):
    print(f"{name:>9}", np.round(values, 3))

# Equality: F_12 = F_34, F_13 = -F_24, F_14 = F_23 built from the 't Hooft matrices
f = equality_form()
print("equality form: trilinear =", trilinear(f), " a_G|F|^3 =", gap_constant(4) * norm(f) ** 3)

# A random search plus local optimization lands on the same supremum
print("search / a_G:", search_trilinear_sup(rng, samples=2000, starts=3) / gap_constant(4))
