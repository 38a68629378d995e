import itertools

import numpy as np
import pytest

from gaugecolor import estimate_syndrome, extract_gauge_defects, measure_gauge
from gaugecolor.clustering import GAUGE_NEUTRAL, charge_of_pair
from gaugecolor.code_structure import stabilizer_syndrome_of
from gaugecolor.lattice import PAIRS, PAIR_INDEX
from gaugecolor.syndrome_estimation import GaugeSyndrome


def zeros(code):
    return (np.zeros(code.n_qubits, dtype=np.uint8),
            np.zeros(code.n_supports, dtype=np.uint8))


def estimate_from(code, error, flips):
    gs = extract_gauge_defects(code, measure_gauge(code, error, flips))
    return estimate_syndrome(code, gs)


def test_measure_gauge_basics(code3):
    e, f = zeros(code3)
    assert not measure_gauge(code3, e, f).any()
    # one qubit error flips exactly the supports containing it
    e[0] = 1
    out = measure_gauge(code3, e, f)
    containing = [s.id for s in code3.supports if 0 in s.qubits]
    assert sorted(np.nonzero(out)[0].tolist()) == containing
    # one measurement flip shows up alone
    e, f = zeros(code3)
    f[11] = 1
    out = measure_gauge(code3, e, f)
    assert np.nonzero(out)[0].tolist() == [11]
    with pytest.raises(ValueError):
        measure_gauge(code3, e[:-1], f)


def test_interior_flip_two_defects(code3):
    s = next(s for s in code3.supports if s.kind == "edge")
    e, f = zeros(code3)
    f[s.id] = 1
    gs = extract_gauge_defects(code3, measure_gauge(code3, e, f))
    assert len(gs) == 2
    assert set(gs.cells.tolist()) == set(s.cells)
    assert set(gs.pair_colors.tolist()) == {s.pair_color}


def test_exterior_flip_single_defect(code3):
    s = next(s for s in code3.supports if s.kind == "vertex")
    e, f = zeros(code3)
    f[s.id] = 1
    gs = extract_gauge_defects(code3, measure_gauge(code3, e, f))
    assert len(gs) == 1
    assert gs.cells[0] == s.cells[0]
    assert gs.pair_colors[0] == s.pair_color


def test_stabilizer_defect_appears_as_triplet(code3):
    e, f = zeros(code3)
    e[0] = 1  # tetrahedron qubit
    syn = stabilizer_syndrome_of(code3, e)
    gs = extract_gauge_defects(code3, measure_gauge(code3, e, f))
    per_cell = {}
    for c in gs.cells.tolist():
        per_cell[c] = per_cell.get(c, 0) + 1
    assert set(per_cell) == set(np.nonzero(syn)[0].tolist())
    assert all(n == 3 for n in per_cell.values())


def test_defects_live_on_valid_cells(code3):
    rng = np.random.default_rng(0)
    e, _ = zeros(code3)
    f = (rng.random(code3.n_supports) < 0.02).astype(np.uint8)
    gs = extract_gauge_defects(code3, measure_gauge(code3, e, f))
    for cell, pc in zip(gs.cells.tolist(), gs.pair_colors.tolist()):
        assert int(code3.lattice.colors[cell]) not in PAIRS[pc]


def test_exactness_zero_flips_weight2_sample(code3):
    Q = code3.n_qubits
    _, zflips = zeros(code3)
    pairs = list(itertools.combinations(range(Q), 2))[::11]
    for a, b in pairs:
        e = np.zeros(Q, dtype=np.uint8)
        e[a] = e[b] = 1
        syn = stabilizer_syndrome_of(code3, e)
        est = estimate_from(code3, e, zflips)
        assert not est.estimation_failed
        assert sorted(est.cells.tolist()) == np.nonzero(syn)[0].tolist()


def test_exactness_zero_flips_random_L5(code5):
    rng = np.random.default_rng(3)
    _, zflips = zeros(code5)
    for _ in range(150):
        e = (rng.random(code5.n_qubits) < 0.05).astype(np.uint8)
        syn = stabilizer_syndrome_of(code5, e)
        est = estimate_from(code5, e, zflips)
        assert not est.estimation_failed
        assert sorted(est.cells.tolist()) == np.nonzero(syn)[0].tolist()


def test_string_of_flips_no_stabilizer_defect(code3):
    """A pair of same-colored gauge defects joined by a string of wrong face
    outcomes is explained without inventing stabilizer defects."""
    lat = code3.lattice
    # two interior edge supports of equal pair color sharing a cell
    by_pc = {}
    for s in code3.supports:
        if s.kind != "edge":
            continue
        by_pc.setdefault(s.pair_color, []).append(s)
    found = None
    for pc, group in by_pc.items():
        for s1, s2 in itertools.combinations(group, 2):
            common = set(s1.cells) & set(s2.cells)
            if len(common) == 1:
                found = (s1, s2)
                break
        if found:
            break
    s1, s2 = found
    e, f = zeros(code3)
    f[s1.id] = 1
    f[s2.id] = 1
    est = estimate_from(code3, e, f)
    assert not est.estimation_failed
    assert len(est.cells) == 0


def test_triplet_emits_complementary_defect(code5):
    """Gauge defects colored gy, gb, yb in one cell imply a red stabilizer
    defect at that cell."""
    lat = code5.lattice
    cell = next(c for c in range(lat.n_vertices)
                if lat.colors[c] == 0 and not lat.vertex_exterior[c])
    pcs = [PAIR_INDEX[p] for p in ((1, 2), (1, 3), (2, 3))]
    gs = GaugeSyndrome(
        cells=np.array([cell] * 3),
        pair_colors=np.array(pcs),
        coords=lat.coords[[cell] * 3].astype(np.int64),
    )
    est = estimate_syndrome(code5, gs)
    assert est.cells.tolist() == [cell]
    assert int(lat.colors[cell]) == 0


def test_charge_table_matches_primitives():
    # pairs and triplets are neutral with no boundary
    no_boundary = GAUGE_NEUTRAL[0]
    assert 0 in no_boundary
    for u, v in PAIRS:
        assert (charge_of_pair(u, v) ^ charge_of_pair(u, v)) in no_boundary
    assert (charge_of_pair(1, 2) ^ charge_of_pair(1, 3)
            ^ charge_of_pair(2, 3)) in no_boundary
    # a single uv defect needs a boundary of a third color
    for u, v in PAIRS:
        pc = charge_of_pair(u, v)
        assert pc not in no_boundary
        for c in range(4):
            absorbed = pc in GAUGE_NEUTRAL[1 << c]
            assert absorbed == (c not in (u, v))


def test_confinement_single_flip(code5):
    """Any single wrong face outcome yields at most a co-located estimate."""
    _, zflips = zeros(code5)
    lat = code5.lattice
    for s in code5.supports[::7]:
        f = zflips.copy()
        f[s.id] = 1
        est = estimate_from(code5, np.zeros(code5.n_qubits, dtype=np.uint8), f)
        assert not est.estimation_failed
        for cell in est.cells.tolist():
            d = min(
                np.abs(lat.coords[cell] - lat.coords[c]).max()
                for c in s.cells
            )
            assert d <= 3
