"""Anatomy of one single-shot error-correction cycle at L = 5.

Walks the full pipeline by hand: inject bit flips, measure every face
operator once (unreliably), extract gauge defects, estimate the stabilizer
syndrome from their clustering, decode, and compare against the truth.
"""

import numpy as np

from gaugecolor import build_dual_lattice, derive_code
from gaugecolor.code_structure import stabilizer_syndrome_of
from gaugecolor.noise import (derive_stream, sample_measurement_flips,
                              sample_qubit_errors)
from gaugecolor.stabilizer_decoder import decode, is_logical_failure
from gaugecolor.syndrome_estimation import (estimate_syndrome,
                                            extract_gauge_defects,
                                            measure_gauge)

p = 0.004
code = derive_code(build_dual_lattice(5))

error = sample_qubit_errors(code.n_qubits, p, derive_stream(2, 0, 0, "qubit"))
flips = sample_measurement_flips(code.n_supports, p,
                                 derive_stream(2, 0, 0, "flip"))
print(f"injected {int(error.sum())} qubit errors, "
      f"{int(flips.sum())} measurement flips (p = q = {p})")

outcomes = measure_gauge(code, error, flips)
gauge_syndrome = extract_gauge_defects(code, outcomes)
true_syndrome = stabilizer_syndrome_of(code, error)
print(f"{int(outcomes.sum())} face operators returned -1, "
      f"{len(gauge_syndrome)} gauge defects, "
      f"{int(true_syndrome.sum())} true stabilizer defects")

estimate = estimate_syndrome(code, gauge_syndrome)
est_cells = set(estimate.cells.tolist())
true_cells = set(np.nonzero(true_syndrome)[0].tolist())
print(f"estimated {len(est_cells)} stabilizer defects; "
      f"{len(est_cells & true_cells)} match the truth, "
      f"{len(est_cells - true_cells)} spurious, "
      f"{len(true_cells - est_cells)} missed")

syndrome = np.zeros(code.n_cells, dtype=np.uint8)
syndrome[estimate.cells] = 1
correction = decode(code, syndrome)
residual = error ^ correction.bits
print(f"correction weight {int(correction.bits.sum())}; residual weight "
      f"{int(residual.sum())} (nonzero residuals are fine as long as they "
      f"stay local and correctable)")

# a perfect readout round then tells us whether the logical survived
final = decode(code, stabilizer_syndrome_of(code, residual))
failed = final.decoder_failed or is_logical_failure(code,
                                                    residual ^ final.bits)
print("logical state after perfect readout:",
      "LOST" if failed else "preserved")
