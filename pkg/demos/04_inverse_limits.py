"""
Inverse limits: empty or not
============================

Halving with a jump at 0 leaves nothing in the limit; the skew tent keeps its fixed thread.
"""

from __future__ import annotations

from fractions import Fraction as Q

from qmarkov import PatternWitness, conj_build, il_detect_empty, il_image_chain, il_map_thread, il_sample_threads
from qmarkov import systems

halving = systems.halving()
for n, s in enumerate(il_image_chain(halving, 4), start=1):
    print(f"  F^{n}(I) = {s}")

verdict = il_detect_empty(halving, 5)
print(verdict.kind, verdict.to_dict()["certificate"])

skew_a = systems.skew_tent(Q(3, 5), Q(1, 2))
skew_b = systems.skew_tent(Q(2, 3), Q(3, 5))
print(il_detect_empty(skew_a, 5).kind)

# move sampled threads across the conjugacy and back
h = conj_build(skew_a, skew_b, PatternWitness.build(skew_a, skew_b))
for t in il_sample_threads(skew_a, 4, 3):
    image = il_map_thread(h, t)
    back = il_map_thread(h.inverse(), image)
    print([str(x) for x in t.coords], "->", [str(x) for x in image.coords], back == t)
