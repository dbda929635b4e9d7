"""
Building a conjugacy
====================

Evaluate the level maps exactly and confirm that they intertwine the bonding maps.
"""

from __future__ import annotations

from fractions import Fraction as Q

from qmarkov import PatternWitness, conj_build, conj_eval_inverse, conj_verify, verification_grid
from qmarkov import systems

S1 = systems.skew_tent(Q(3, 5), Q(1, 2))
S2 = systems.skew_tent(Q(2, 3), Q(3, 5))
h = conj_build(S1, S2, PatternWitness.build(S1, S2))

# on [3/5, 1] the first level map is linear
print("h1(4/5) =", h.eval(1, Q(4, 5)))
print("h2(4/5) =", h.eval(2, Q(4, 5)))
print("h1^-1(5/6) =", conj_eval_inverse(h, 1, Q(5, 6)))

for n in range(1, 6):
    grid = verification_grid(S1, n + 1, 256)
    rep = conj_verify(h, n, grid)
    print(f"level {n}: {len(grid)} points, commutes = {rep.passed}")

# nudge one value and the check finds it
bad = h.with_override(2, Q(3, 5), Q(7, 10))
print("perturbed:", conj_verify(bad, 1, verification_grid(S1, 2, 64)).to_dict())
