"""
Comparing patterns
==================

Two skew tents share a pattern; a skew tent and a jump map do not.
"""

from __future__ import annotations

from fractions import Fraction as Q

from qmarkov import PatternWitness, ms_enumerate, pattern_tau, pattern_verify
from qmarkov import systems

skew_a = systems.skew_tent(Q(3, 5), Q(1, 2))
skew_b = systems.skew_tent(Q(2, 3), Q(3, 5))

w = PatternWitness.build(skew_a, skew_b)
tau = pattern_tau(w, 1)
for x in ms_enumerate(skew_a.markov_set(1), 3):
    print(f"  tau({x}) = {tau(x)}")

rep = pattern_verify(skew_a, skew_b, w)
print("skew tents:", rep.passed, "conclusive:", rep.conclusive)

# same shape of partition, different combinatorics
jump = systems.fpq(Q(1, 2), Q(1, 4))
rep = pattern_verify(jump, skew_a, PatternWitness.build(jump, skew_a))
print("jump map vs skew tent:", rep.passed)
for v in rep.violations[:3]:
    print("  ", v.to_dict())
