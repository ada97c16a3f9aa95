"""Sweep the congruent number twists y^2 = x^3 - n^2 x for small n.

Twists with nonzero L(1) give an analytic Sha that is a perfect square.
Twists with w = +1 but L(1) = 0 have even rank >= 2 and carry no verdict.

Run with:  python3 demos/congruent_numbers.py [n_max] [workers]
"""

import sys

from cmbsd.bsd import congruent_sweep, sweep_summary

n_max = int(sys.argv[1]) if len(sys.argv) > 1 else 60
workers = int(sys.argv[2]) if len(sys.argv) > 2 else 2

results = congruent_sweep(1, n_max, prec=128, threads=workers)
for row, rep in results:
    sha = "-" if row.sha is None else row.sha
    print(f"n={row.n:4d}  w={row.w:+d}  {row.verdict:<12s} sha={sha}")
print(sweep_summary([r for r, _ in results]))
