"""
Graph data
==========

Sample a level map into rows, keeping both one-sided limits at a jump.
"""

from __future__ import annotations

from pathlib import Path

from qmarkov.cli import graph_rows
from qmarkov.io import load_system

S = load_system(Path(__file__).resolve().parent / "systems" / "fpq_1_2_1_4.json")

# same rows the plot subcommand writes; hand them to any plotting tool
print("t,f,kind")
for t, y, kind in graph_rows(S.function(1), 9):
    print(f"{t},{y},{kind}")
