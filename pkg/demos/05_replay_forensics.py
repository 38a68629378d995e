"""Replay a failing trial and dump its decoding history.

Every trial is a pure function of (master seed, trial index), so any failure
seen in a sweep can be re-run later with full instrumentation.  The same
dump is available from the command line:

    gaugecolor replay --L 5 --N 2 --p 0.004 --seed 31 --trial 7 --debug-dump
"""

from gaugecolor import build_dual_lattice, derive_code
from gaugecolor.simulation import TrialConfig, run_trial

code = derive_code(build_dual_lattice(5))
cfg = TrialConfig(L=5, N=2, p=0.004, seed=31, trials=200)

failing = next(t for t in range(200) if run_trial(code, cfg, t))
print(f"first failing trial: {failing}")

failed, state = run_trial(code, cfg, failing, record=True)
assert failed
for entry in state.history:
    label = entry["cycle"]
    if label == "readout":
        print(f"readout: {len(entry['syndrome_cells'])} defects, "
              f"correction weight {entry['correction_weight']}, "
              f"decoder failed: {entry['decode_failed']}")
        continue
    print(f"cycle {label}: {entry['gauge_defects']} gauge defects -> "
          f"{len(entry['estimated_cells'])} estimated stabilizer defects, "
          f"correction weight {entry['correction_weight']}")
    rounds = entry["decode_log"]
    if rounds:
        final = rounds[-1]["clusters"]
        sizes = sorted((len(c["defects"]) for c in final), reverse=True)
        print(f"         decode clusters at finish: {sizes}")
