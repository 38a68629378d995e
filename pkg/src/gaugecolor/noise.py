"""Phenomenological noise: independent qubit flips at rate p and measurement
flips at rate q (= p unless overridden), on counter-derived random streams.

Each (master seed, trial, cycle, tag) tuple names an independent stream, so
any trial replays bit-for-bit no matter how work was scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["NoiseParams", "derive_stream", "sample_qubit_errors",
           "sample_measurement_flips"]

_TAG_IDS = {"qubit": 0, "flip": 1, "readout": 2}


@dataclass(frozen=True)
class NoiseParams:
    """Physical error rate p and measurement error rate q."""

    p: float
    q: float | None = None

    def __post_init__(self):
        q = self.p if self.q is None else self.q
        if not (0.0 <= self.p <= 1.0 and 0.0 <= q <= 1.0):
            raise ValueError(f"rates must lie in [0, 1], got p={self.p} q={self.q}")
        object.__setattr__(self, "q", q)


def derive_stream(master_seed: int, trial: int, cycle: int, tag: str) -> np.random.Generator:
    """Independent, replayable generator for one (trial, cycle, purpose) slot."""
    seq = np.random.SeedSequence(
        entropy=master_seed, spawn_key=(trial, cycle, _TAG_IDS[tag])
    )
    return np.random.Generator(np.random.Philox(seq))


def sample_qubit_errors(n_qubits: int, p: float, stream: np.random.Generator) -> np.ndarray:
    """Bit vector of independent Pauli-X errors."""
    return (stream.random(n_qubits) < p).astype(np.uint8)


def sample_measurement_flips(n_supports: int, q: float, stream: np.random.Generator) -> np.ndarray:
    """Bit vector of face outcomes that report the wrong sign."""
    return (stream.random(n_supports) < q).astype(np.uint8)
