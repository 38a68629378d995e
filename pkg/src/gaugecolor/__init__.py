"""Fault-tolerant error correction with the 3D gauge color code.

Lattice construction, subsystem-code algebra, single-shot decoding, and
Monte Carlo estimation of logical failure rates.
"""

__version__ = "0.1.0"

from .lattice import (DualLattice, CountReport, LatticeError,
                      build_dual_lattice, validate_counts,
                      export_lattice, import_lattice)
from .code_structure import (CodeStructure, AlgebraError, derive_code,
                             check_commutation, stabilizer_syndrome_of)
from .noise import NoiseParams, derive_stream
from .syndrome_estimation import (GaugeSyndrome, EstimatedSyndrome,
                                  measure_gauge, extract_gauge_defects,
                                  estimate_syndrome)
from .stabilizer_decoder import Correction, decode, is_logical_failure
from .simulation import (TrialConfig, FailureStats, run_trial,
                         estimate_failure_rate, sweep)

__all__ = [
    "__version__",
    "DualLattice", "CountReport", "LatticeError", "build_dual_lattice",
    "validate_counts", "export_lattice", "import_lattice",
    "CodeStructure", "AlgebraError", "derive_code", "check_commutation",
    "stabilizer_syndrome_of",
    "NoiseParams", "derive_stream",
    "GaugeSyndrome", "EstimatedSyndrome", "measure_gauge",
    "extract_gauge_defects", "estimate_syndrome",
    "Correction", "decode", "is_logical_failure",
    "TrialConfig", "FailureStats", "run_trial", "estimate_failure_rate",
    "sweep",
]
