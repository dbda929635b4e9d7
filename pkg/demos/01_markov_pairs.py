"""
Checking Markov pairs
=====================

A skew tent, a discontinuous map and a deliberately coarse partition.
"""

from __future__ import annotations

from fractions import Fraction as Q
from pathlib import Path

from qmarkov import ms_enumerate, qmf_generate_pair, qmf_verify_pair
from qmarkov import systems
from qmarkov.io import load_system

HERE = Path(__file__).resolve().parent

# the skew tent with apex (3/5, 1/2), read from its JSON description
S = load_system(HERE / "systems" / "skew_tent_3_5_1_2.json")
f, A1, A2 = S.function(1), S.markov_set(1), S.markov_set(2)
print("A1 members:", [str(x) for x in ms_enumerate(A1, 4)])
print("pair (A2, A1):", qmf_verify_pair(f, A2, A1).passed)

# the same sets can be recovered from the map alone
B2, B1 = qmf_generate_pair(f)
print("generated pair agrees:", (B1, B2) == (A1, A2))

# a map that jumps at 1/2: f(t) = t/4 on [0, 1/2], then 2t - 1
g = systems.fpq_map(Q(1, 2), Q(1, 4))
print("f(1/2) =", g.eval(Q(1, 2)), " right limit =", g.limit(Q(1, 2), "right"))
print("generated:", [str(x) for x in ms_enumerate(qmf_generate_pair(g)[1], 3)])

# {0, 1} is too coarse for the tent: the apex image is missing
tent, coarse = systems.tent_coarse()
for v in qmf_verify_pair(tent, coarse, coarse).violations:
    print("violation:", v.to_dict())
