"""Small-scale logical failure rate scan.

Below threshold the failure rate falls with system size; above it, it grows.
This runs in a couple of minutes; the serious grids live in
results/acceptance/ and are produced by scripts/generate_acceptance_data.py.
"""

import numpy as np

from gaugecolor import build_dual_lattice, derive_code
from gaugecolor.simulation import TrialConfig, estimate_failure_rate

TRIALS = 300
SIZES = (5, 7, 9)
RATES = (0.002, 0.004, 0.006)

codes = {L: derive_code(build_dual_lattice(L)) for L in SIZES}

header = "p\\L    " + "".join(f"{L:>18d}" for L in SIZES)
print(header)
for p in RATES:
    cells = []
    for L in SIZES:
        cfg = TrialConfig(L=L, N=0, p=p, seed=99, trials=TRIALS)
        stats = estimate_failure_rate(codes[L], cfg)
        cells.append(f"{stats.p_fail:.4f} +- {stats.stderr:.4f}")
    print(f"{p:.3f}  " + "".join(f"{c:>18s}" for c in cells))
print(f"\n({TRIALS} trials per cell, N = 0, q = p; errors are binomial "
      f"standard errors)")
