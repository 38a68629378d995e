"""Protocol engine: repeated error-correction cycles, destructive readout,
and Monte Carlo estimation of logical failure rates.

A trial applies N cycles of (inject noise, measure gauge operators once with
flip rate q, estimate the syndrome, decode, apply the correction), then one
more noise injection for readout followed by a perfect-syndrome decode.  The
trial fails if the final residual is outside the gauge group or if any stage
gave up along the way.
"""

from __future__ import annotations

import hashlib
import json
import multiprocessing
import os
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .code_structure import CodeStructure, derive_code, stabilizer_syndrome_of
from .lattice import build_dual_lattice
from .noise import (NoiseParams, derive_stream, sample_measurement_flips,
                    sample_qubit_errors)
from .stabilizer_decoder import decode, is_logical_failure
from .syndrome_estimation import (estimate_syndrome, extract_gauge_defects,
                                  measure_gauge)

__all__ = ["TrialConfig", "TrialState", "FailureStats", "run_cycle",
           "run_trial", "estimate_failure_rate", "sweep", "config_hash",
           "CSV_COLUMNS", "stats_to_row", "row_to_csv"]


@dataclass(frozen=True)
class TrialConfig:
    """One Monte Carlo experiment: lattice size, cycle count, rates, sampling."""

    L: int
    N: int
    p: float
    q: float | None = None
    seed: int = 0
    trials: int = 1

    def __post_init__(self):
        if self.L < 3 or self.L % 2 == 0:
            raise ValueError(f"L must be odd and >= 3, got {self.L}")
        if self.N < 0:
            raise ValueError(f"N must be >= 0, got {self.N}")
        if self.trials < 1:
            raise ValueError(f"trial count must be >= 1, got {self.trials}")
        object.__setattr__(self, "q", NoiseParams(self.p, self.q).q)

    @property
    def noise(self) -> NoiseParams:
        return NoiseParams(self.p, self.q)


@dataclass
class TrialState:
    """Accumulated error and latched failures within one trial."""

    error: np.ndarray
    cycle: int = 0
    failed_estimation: bool = False
    failed_decode: bool = False
    history: list = field(default_factory=list)


@dataclass
class FailureStats:
    """Failure counts with the binomial standard error."""

    failures: int
    trials: int
    elapsed_seconds: float

    @property
    def p_fail(self) -> float:
        return self.failures / self.trials

    @property
    def stderr(self) -> float:
        p = self.p_fail
        return float(np.sqrt((1.0 - p) * p / self.trials))


def run_cycle(code: CodeStructure, state: TrialState, noise: NoiseParams,
              master_seed: int, trial: int, record: bool = False) -> TrialState:
    """One error-correction cycle: noise, single-shot measurement, correction."""
    j = state.cycle
    err_stream = derive_stream(master_seed, trial, j, "qubit")
    flip_stream = derive_stream(master_seed, trial, j, "flip")
    state.error ^= sample_qubit_errors(code.n_qubits, noise.p, err_stream)
    flips = sample_measurement_flips(code.n_supports, noise.q, flip_stream)
    outcomes = measure_gauge(code, state.error, flips)
    gauge_syndrome = extract_gauge_defects(code, outcomes)
    estimate = estimate_syndrome(code, gauge_syndrome, collect_log=record)
    if estimate.estimation_failed:
        state.failed_estimation = True
    syndrome = np.zeros(code.n_cells, dtype=np.uint8)
    syndrome[estimate.cells] = 1
    correction = decode(code, syndrome, collect_log=record)
    if correction.decoder_failed:
        state.failed_decode = True
    else:
        state.error ^= correction.bits
    if record:
        state.history.append({
            "cycle": j,
            "gauge_defects": len(gauge_syndrome),
            "estimated_cells": estimate.cells.tolist(),
            "estimation_failed": estimate.estimation_failed,
            "estimation_log": estimate.cluster_log,
            "decode_failed": correction.decoder_failed,
            "correction_weight": int(correction.bits.sum()),
            "decode_log": correction.cluster_log,
        })
    state.cycle = j + 1
    return state


def run_trial(code: CodeStructure, cfg: TrialConfig, trial: int,
              record: bool = False) -> bool | tuple[bool, TrialState]:
    """Run N cycles plus noisy readout; True when the trial logically failed."""
    state = TrialState(error=np.zeros(code.n_qubits, dtype=np.uint8))
    noise = cfg.noise
    for _ in range(cfg.N):
        run_cycle(code, state, noise, cfg.seed, trial, record=record)
    readout_stream = derive_stream(cfg.seed, trial, cfg.N, "readout")
    state.error ^= sample_qubit_errors(code.n_qubits, cfg.p, readout_stream)
    syndrome = stabilizer_syndrome_of(code, state.error)
    correction = decode(code, syndrome, collect_log=record)
    if correction.decoder_failed:
        failed = True
    else:
        residual = state.error ^ correction.bits
        failed = (is_logical_failure(code, residual)
                  or state.failed_estimation or state.failed_decode)
    if record:
        state.history.append({
            "cycle": "readout",
            "syndrome_cells": np.nonzero(syndrome)[0].tolist(),
            "decode_failed": correction.decoder_failed,
            "correction_weight": int(correction.bits.sum()),
            "decode_log": correction.cluster_log,
        })
        return failed, state
    return failed


# --- parallel Monte Carlo ----------------------------------------------------

_WORKER_CODE: CodeStructure | None = None
_WORKER_CFG: TrialConfig | None = None


def _worker_run(span: tuple[int, int]) -> int:
    lo, hi = span
    return sum(run_trial(_WORKER_CODE, _WORKER_CFG, t) for t in range(lo, hi))


def estimate_failure_rate(code: CodeStructure, cfg: TrialConfig,
                          workers: int | None = None) -> FailureStats:
    """Monte Carlo estimate over cfg.trials independent trials.

    Results are identical for any worker count: every trial derives its own
    random streams from (seed, trial index).
    """
    start = time.perf_counter()
    workers = workers if workers is not None else (os.cpu_count() or 1)
    eta = cfg.trials
    if workers <= 1 or eta < 32:
        failures = sum(run_trial(code, cfg, t) for t in range(eta))
    else:
        chunk = max(8, eta // (workers * 8))
        spans = [(lo, min(lo + chunk, eta)) for lo in range(0, eta, chunk)]
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(workers, initializer=_worker_init_shared,
                      initargs=(code, cfg)) as pool:
            failures = sum(pool.map(_worker_run, spans))
    elapsed = time.perf_counter() - start
    return FailureStats(failures=failures, trials=eta, elapsed_seconds=elapsed)


def _worker_init_shared(code: CodeStructure, cfg: TrialConfig):
    # fork start method: the code structure arrives via copy-on-write
    global _WORKER_CODE, _WORKER_CFG
    _WORKER_CODE = code
    _WORKER_CFG = cfg


# --- sweeps ------------------------------------------------------------------

CSV_COLUMNS = ["L", "N", "p", "q", "trials", "failures", "p_fail", "stderr",
               "seed", "elapsed_seconds", "code_version", "config_hash"]


def config_hash(cfg: TrialConfig) -> str:
    payload = json.dumps(
        {"L": cfg.L, "N": cfg.N, "p": cfg.p, "q": cfg.q,
         "trials": cfg.trials, "seed": cfg.seed},
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()[:12]


def stats_to_row(cfg: TrialConfig, stats: FailureStats) -> dict:
    return {
        "L": cfg.L, "N": cfg.N, "p": cfg.p, "q": cfg.q,
        "trials": stats.trials, "failures": stats.failures,
        "p_fail": stats.p_fail, "stderr": stats.stderr,
        "seed": cfg.seed, "elapsed_seconds": round(stats.elapsed_seconds, 3),
        "code_version": __version__, "config_hash": config_hash(cfg),
    }


def row_to_csv(row: dict) -> str:
    return ",".join(str(row[c]) for c in CSV_COLUMNS)


def sweep(grid, trials: int, seed: int, out_path=None, resume: bool = True,
          workers: int | None = None, progress=None) -> list[dict]:
    """Run a (L, N, p[, q]) grid, streaming one row per cell.

    Cells already present in ``out_path`` (matched by config hash) are skipped
    when resuming, so an interrupted sweep picks up where it stopped.
    """
    cells = []
    for entry in grid:
        L, N, p = entry[:3]
        q = entry[3] if len(entry) > 3 else None
        cells.append(TrialConfig(L=L, N=N, p=p, q=q, seed=seed, trials=trials))
    if not cells:
        raise ValueError("empty sweep grid")

    done: dict[str, dict] = {}
    if out_path and resume and os.path.exists(out_path):
        with open(out_path) as fh:
            for line in fh:
                line = line.strip()
                if line:
                    row = json.loads(line)
                    done[row["config_hash"]] = row

    rows: list[dict] = []
    code: CodeStructure | None = None
    code_L: int | None = None
    for cfg in cells:
        h = config_hash(cfg)
        if h in done:
            rows.append(done[h])
            if progress:
                progress(done[h], cached=True)
            continue
        if code_L != cfg.L:
            code = derive_code(build_dual_lattice(cfg.L))
            code_L = cfg.L
        stats = estimate_failure_rate(code, cfg, workers=workers)
        row = stats_to_row(cfg, stats)
        rows.append(row)
        if out_path:
            with open(out_path, "a") as fh:
                fh.write(json.dumps(row) + "\n")
        if progress:
            progress(row, cached=False)
    return rows
