import numpy as np
import pytest

from gaugecolor import check_commutation, stabilizer_syndrome_of
from gaugecolor.code_structure import export_check_matrices
from gaugecolor.lattice import PAIRS, complement_pair


def test_qubit_class_counts(code5):
    sizes = {}
    for q in code5.qubits:
        sizes[len(q.simplex)] = sizes.get(len(q.simplex), 0) + 1
    assert sizes[4] == 397
    assert sizes[3] == 9 * 25 - 5
    assert sizes[2] == 30
    assert sizes[1] == 4
    assert code5.n_qubits == 651
    assert code5.n_cells == 148          # two stabilizer generators per cell
    assert code5.n_supports == 798       # each carrying X- and Z-type operators


def test_support_weights(code5):
    ext_vertices = {
        int(v) for f in code5.lattice.exterior_faces()
        for v in code5.lattice.faces[f]
    }
    for s in code5.supports:
        w = len(s.qubits)
        assert w in (4, 6, 8)
        if s.kind == "edge" and not any(c in ext_vertices for c in s.cells):
            assert w in (4, 6)
        if w == 8:
            assert s.kind == "vertex" or any(c in ext_vertices for c in s.cells)


def test_interior_support_is_edge_qubits(code5):
    lat = code5.lattice
    for s in code5.supports[:200]:
        if s.kind != "edge":
            continue
        v1, v2 = s.cells
        members = {q for q in range(code5.n_qubits)
                   if {v1, v2} <= set(code5.qubits[q].simplex)}
        assert members == set(s.qubits)
        assert s.pair_color == complement_pair(int(lat.colors[v1]),
                                               int(lat.colors[v2]))


def test_exterior_vertex_support_rule(code5):
    lat = code5.lattice
    vertex_supports = [s for s in code5.supports if s.kind == "vertex"]
    # one support per boundary the vertex lies on
    per_vertex = {}
    for s in vertex_supports:
        per_vertex.setdefault(s.cells[0], []).append(s)
    for v, supports in per_vertex.items():
        assert len(supports) == len(lat.vertex_boundaries[v])
        for s in supports:
            c = s.boundary
            expect = {
                q.id for q in code5.qubits
                if v in q.simplex and len(q.simplex) < 4
                and all(int(lat.colors[w]) != c for w in q.simplex)
            }
            assert expect == set(s.qubits)
    n_two = sum(len(b) == 2 for b in lat.vertex_boundaries)
    n_three = sum(len(b) >= 3 for b in lat.vertex_boundaries)
    assert len(vertex_supports) == int(lat.vertex_exterior.sum()) \
        + n_two + 2 * n_three


def test_corner_supports_fixture(code5):
    """A vertex where three boundaries meet carries three weight-4 supports,
    each holding the vertex qubit, two seam-edge qubits, and one face qubit."""
    lat = code5.lattice
    corners = [v for v in range(lat.n_vertices)
               if len(lat.vertex_boundaries[v]) >= 3]
    assert len(corners) == 4
    for v in corners:
        supports = [s for s in code5.supports
                    if s.kind == "vertex" and s.cells[0] == v]
        assert len(supports) == 3
        for s in supports:
            assert len(s.qubits) == 4
            by_size = sorted(len(code5.qubits[q].simplex) for q in s.qubits)
            assert by_size == [1, 2, 2, 3]


def test_commutation_report(code3, code5):
    for code in (code3, code5):
        report = check_commutation(code)
        assert report["logical_weight"] % 2 == 1
        # a subsystem code with gauge qubits must have anticommuting pairs
        assert report["anticommuting_gauge_pairs"] > 0


def test_aggregation_identity(code3):
    prod = (code3.constraints @ code3.gauge).tocsr()
    prod.data %= 2
    prod.eliminate_zeros()
    stab3 = code3.stabilizer[np.repeat(np.arange(code3.n_cells), 3)]
    assert (prod != stab3).nnz == 0


def test_syndrome_examples(code3):
    Q = code3.n_qubits
    assert not stabilizer_syndrome_of(code3, np.zeros(Q, dtype=np.uint8)).any()
    # single tetrahedron error: one defect of each color
    tet = next(q for q in code3.qubits if len(q.simplex) == 4)
    e = np.zeros(Q, dtype=np.uint8)
    e[tet.id] = 1
    syn = stabilizer_syndrome_of(code3, e)
    cells = np.nonzero(syn)[0]
    assert len(cells) == 4
    assert sorted(int(code3.lattice.colors[c]) for c in cells) == [0, 1, 2, 3]
    # a gauge support has trivial syndrome
    for s in code3.supports[::17]:
        e = np.zeros(Q, dtype=np.uint8)
        e[list(s.qubits)] = 1
        assert not stabilizer_syndrome_of(code3, e).any()
    with pytest.raises(ValueError):
        stabilizer_syndrome_of(code3, np.zeros(Q + 1, dtype=np.uint8))


def test_defect_slots(code3):
    for cell in range(0, code3.n_cells, 7):
        pcs = code3.cell_pair_colors(cell)
        assert len(pcs) == 3
        color = int(code3.lattice.colors[cell])
        for pc in pcs:
            assert color not in PAIRS[pc]
            slot = code3.defect_slot(cell, pc)
            assert code3.defect_pair_color[slot] == pc


def test_check_matrix_export(tmp_path, code3):
    path = tmp_path / "checks.txt"
    export_check_matrices(code3, path)
    lines = path.read_text().splitlines()
    assert lines[0] == f"qubits {code3.n_qubits}"
    assert lines[1] == f"stabilizers {code3.n_cells}"
    row0 = [int(x) for x in lines[2].split()]
    stab = code3.stabilizer
    assert row0 == sorted(int(x) for x in
                          stab.indices[stab.indptr[0]:stab.indptr[1]])
    gauge_header = lines[2 + code3.n_cells]
    assert gauge_header == f"gauges {code3.n_supports}"
