"""Populate results/acceptance/ with the Monte Carlo data the acceptance
suite consumes.  Every sweep is resumable; rerunning only fills gaps.
Constants must match tests/test_acceptance.py."""

import os
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from gaugecolor.simulation import sweep

RESULTS = Path(__file__).resolve().parent.parent / "results" / "acceptance"
SEED = 20260810
THRESHOLD_GRID_P = (0.002, 0.003, 0.004, 0.005, 0.006, 0.007, 0.008)
THRESHOLD_LS = (9, 13, 17)
THRESHOLD_TRIALS = 2000
SUSTAIN_GRID_P = (0.0022, 0.0026, 0.0030, 0.0034, 0.0038, 0.0042, 0.0046)
SUSTAIN_TRIALS = 2000
SUPPRESS_P = 0.0015
SUPPRESS_N = 2
SUPPRESS_BATCH = 5000
SUPPRESS_BATCHES = 8


def log(row, cached):
    print(f"[{'cache' if cached else 'run  '}] L={row['L']} N={row['N']} "
          f"p={row['p']:.4f} p_fail={row['p_fail']:.5f} "
          f"({row['failures']}/{row['trials']}) {row['elapsed_seconds']:.0f}s",
          flush=True)


def main():
    RESULTS.mkdir(parents=True, exist_ok=True)
    workers = os.cpu_count()
    t0 = time.time()

    grid = [(L, 0, p) for L in THRESHOLD_LS for p in THRESHOLD_GRID_P]
    sweep(grid, trials=THRESHOLD_TRIALS, seed=SEED,
          out_path=RESULTS / "threshold_N0.jsonl", resume=True,
          workers=workers, progress=log)
    print(f"== threshold_N0 done at {time.time() - t0:.0f}s", flush=True)

    for batch in range(SUPPRESS_BATCHES):
        grid = [(L, SUPPRESS_N, SUPPRESS_P) for L in THRESHOLD_LS]
        sweep(grid, trials=SUPPRESS_BATCH, seed=SEED + 1000 + batch,
              out_path=RESULTS / f"suppression_b{batch}.jsonl", resume=True,
              workers=workers, progress=log)
        print(f"== suppression batch {batch} done at {time.time() - t0:.0f}s",
              flush=True)

    for N in (1, 2, 3):
        grid = [(L, N, p) for L in THRESHOLD_LS for p in SUSTAIN_GRID_P]
        sweep(grid, trials=SUSTAIN_TRIALS, seed=SEED,
              out_path=RESULTS / f"threshold_N{N}.jsonl", resume=True,
              workers=workers, progress=log)
        print(f"== threshold_N{N} done at {time.time() - t0:.0f}s", flush=True)

    # top-up suppression statistics; the acceptance test stops early once
    # the 3-sigma separations resolve
    for batch in range(SUPPRESS_BATCHES, 2 * SUPPRESS_BATCHES):
        grid = [(L, SUPPRESS_N, SUPPRESS_P) for L in THRESHOLD_LS]
        sweep(grid, trials=SUPPRESS_BATCH, seed=SEED + 1000 + batch,
              out_path=RESULTS / f"suppression_b{batch}.jsonl", resume=True,
              workers=workers, progress=log)
        print(f"== suppression batch {batch} done at {time.time() - t0:.0f}s",
              flush=True)


if __name__ == "__main__":
    main()
