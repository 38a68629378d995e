"""Derive the subsystem-code algebra and poke at its structure.

Cells carry stabilizers, faces carry the measured gauge operators, and the
two are tied together by the aggregation identity: around every cell, each
of the three same-colored subsets of face outcomes multiplies to the cell's
stabilizer eigenvalue.  That redundancy is what single-shot decoding spends.
"""

from collections import Counter

import numpy as np

from gaugecolor import build_dual_lattice, check_commutation, derive_code

code = derive_code(build_dual_lattice(5))

print(f"qubits {code.n_qubits}, stabilizer cells {code.n_cells} "
      f"(x2 Pauli types), gauge supports {code.n_supports} (x2 Pauli types)")

weights = Counter(len(s.qubits) for s in code.supports)
print("gauge support weights:", dict(sorted(weights.items())))
kinds = Counter(s.kind for s in code.supports)
print("supports by kind:", dict(kinds))

report = check_commutation(code)
print(f"stabilizer x gauge overlaps all even across "
      f"{report['stabilizer_gauge_pairs']} pairs")
print(f"anticommuting gauge pairs: {report['anticommuting_gauge_pairs']} "
      f"(a subsystem code needs these: the gauge group is bigger than its "
      f"center)")
print(f"logical operators act on all {report['logical_weight']} qubits "
      f"(odd, so X-bar and Z-bar anticommute)")

# aggregation identity, checked here explicitly for one cell
cell = 10
pcs = code.cell_pair_colors(cell)
stab_row = set(code.stabilizer[cell].indices)
for pc in pcs:
    slot = code.defect_slot(cell, pc)
    members = code.constraints[slot].indices
    acc = set()
    for s in members:
        acc ^= set(code.supports[int(s)].qubits)
    assert acc == stab_row
print(f"cell {cell}: all three colored face subsets multiply to its "
      f"stabilizer ({len(stab_row)} qubits)")
