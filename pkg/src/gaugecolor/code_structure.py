"""Subsystem-code algebra derived from the dual lattice.

Qubits sit on simplices: every tetrahedron, every exterior triangle, the
exterior edges where two boundaries meet, and the four vertices where three
boundaries meet.  Stabilizer supports gather all qubits containing a vertex;
gauge supports gather qubits containing an edge, plus exterior-vertex supports
that exclude one color.  All operators are sparse GF(2) index sets, and the
module refuses to return a structure whose counts or algebra are off.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .lattice import (
    COLOR_NAMES,
    COLORS,
    CountReport,
    DualLattice,
    LatticeError,
    PAIR_INDEX,
    PAIRS,
    complement_pair,
)

__all__ = [
    "Qubit",
    "GaugeSupport",
    "CodeStructure",
    "AlgebraError",
    "derive_code",
    "check_commutation",
    "stabilizer_syndrome_of",
    "export_check_matrices",
]


class AlgebraError(Exception):
    """The derived operators violate the subsystem-code algebra."""


@dataclass(frozen=True)
class Qubit:
    """A qubit on a simplex, given by its sorted vertex ids (size 1, 2, 3, 4)."""

    id: int
    simplex: tuple[int, ...]


@dataclass(frozen=True)
class GaugeSupport:
    """One measured face operator support.

    ``kind`` is "edge" for supports represented by a lattice edge and
    "vertex" for exterior-vertex supports that exclude one color.
    """

    id: int
    kind: str
    qubits: tuple[int, ...]
    pair_color: int                 # index into lattice.PAIRS
    cells: tuple[int, ...]          # one or two adjacent cells (dual vertices)
    boundary: int | None = None     # excluded color, for vertex kind


@dataclass
class CodeStructure:
    """Qubits plus all sparse GF(2) maps used by decoding."""

    lattice: DualLattice
    qubits: list[Qubit]
    supports: list[GaugeSupport]
    stabilizer: sparse.csr_matrix          # (cells x qubits)
    gauge: sparse.csr_matrix               # (supports x qubits)
    constraints: sparse.csr_matrix         # (3*cells x supports)
    defect_pair_color: np.ndarray          # (3*cells,) pair index of each slot
    qubit_bbox_min: np.ndarray             # (qubits, 3)
    qubit_bbox_max: np.ndarray
    cells_by_color: dict[int, np.ndarray] = field(repr=False, default=None)
    stab_csc: sparse.csc_matrix = field(repr=False, default=None)
    qubit_cells: np.ndarray = field(repr=False, default=None)  # (qubits, 4) padded
    gauge_csc: sparse.csc_matrix = field(repr=False, default=None)
    gauge_rows: list = field(repr=False, default=None)  # support -> qubit ids
    stab_rows: list = field(repr=False, default=None)   # cell -> qubit ids
    color_coords: dict = field(repr=False, default=None)  # color -> float coords

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)

    @property
    def n_cells(self) -> int:
        return self.lattice.n_vertices

    @property
    def n_supports(self) -> int:
        return len(self.supports)

    def logical_support(self) -> np.ndarray:
        """Both logical operators act on every qubit."""
        return np.ones(self.n_qubits, dtype=np.uint8)

    def cell_pair_colors(self, cell: int) -> tuple[int, int, int]:
        """The three pair colors that can host a gauge defect at a cell."""
        c = int(self.lattice.colors[cell])
        return tuple(i for i, p in enumerate(PAIRS) if c not in p)

    def defect_slot(self, cell: int, pair: int) -> int:
        slots = self.cell_pair_colors(cell)
        return 3 * cell + slots.index(pair)


def derive_code(lat: DualLattice) -> CodeStructure:
    """Derive qubits, stabilizers, gauge supports and constraints; validate."""
    colors = lat.colors
    ext_faces = lat.exterior_faces()

    # --- qubit enumeration (deterministic order: tets, faces, edges, vertices)
    simplices: list[tuple[int, ...]] = [tuple(int(v) for v in t) for t in lat.tets]
    face_simplices = sorted(tuple(int(v) for v in lat.faces[f]) for f in ext_faces)
    simplices.extend(face_simplices)

    by_edge: dict[tuple, list[int]] = defaultdict(list)
    for f in ext_faces:
        tri = sorted(int(v) for v in lat.faces[f])
        for pair in itertools.combinations(tri, 2):
            by_edge[pair].append(int(f))
    seam_edges = sorted(
        pair for pair, (f1, f2) in by_edge.items()
        if lat.face_missing_color(f1) != lat.face_missing_color(f2)
    )
    simplices.extend(seam_edges)
    corner_vertices = sorted(
        v for v in range(lat.n_vertices) if len(lat.vertex_boundaries[v]) >= 3
    )
    simplices.extend((v,) for v in corner_vertices)

    qubits = [Qubit(i, s) for i, s in enumerate(simplices)]
    counts = CountReport.formulas(lat.L)
    class_sizes = (len(lat.tets), len(face_simplices), len(seam_edges),
                   len(corner_vertices))
    expected = (counts["Q_t"], counts["Q_f"], counts["Q_e"], counts["Q_v"])
    if class_sizes != expected:
        raise AlgebraError(
            f"qubit classes (t,f,e,v)={class_sizes}, formulas give {expected}"
        )

    # --- stabilizer supports: all qubits containing a vertex
    qubits_at: dict[int, list[int]] = defaultdict(list)
    for q in qubits:
        for v in q.simplex:
            qubits_at[v].append(q.id)
    stab_rows = [qubits_at[v] for v in range(lat.n_vertices)]

    # --- gauge supports on edges
    qubits_with_edge: dict[tuple, list[int]] = defaultdict(list)
    for q in qubits:
        for pair in itertools.combinations(q.simplex, 2):
            qubits_with_edge[pair].append(q.id)
    supports: list[GaugeSupport] = []
    for v1, v2 in lat.edges.tolist():
        members = qubits_with_edge[(v1, v2)]
        pc = complement_pair(int(colors[v1]), int(colors[v2]))
        supports.append(GaugeSupport(
            id=len(supports), kind="edge", qubits=tuple(members),
            pair_color=pc, cells=(v1, v2),
        ))

    # --- gauge supports on exterior vertices, one per boundary the vertex lies on
    for v in range(lat.n_vertices):
        for c in sorted(lat.vertex_boundaries[v]):
            members = [
                q for q in qubits_at[v]
                if all(int(colors[w]) != c for w in qubits[q].simplex)
                and len(qubits[q].simplex) < 4
            ]
            if not members:
                raise AlgebraError(
                    f"empty exterior support at vertex {v}, excluded color "
                    f"{COLOR_NAMES[c]}"
                )
            pc = complement_pair(int(colors[v]), c)
            supports.append(GaugeSupport(
                id=len(supports), kind="vertex", qubits=tuple(members),
                pair_color=pc, cells=(v,), boundary=c,
            ))

    if len(supports) != counts["G_supports"]:
        raise AlgebraError(
            f"{len(supports)} gauge supports, formula gives {counts['G_supports']}"
        )
    _check_weights(lat, supports)

    # --- sparse maps
    n_q = len(qubits)
    stabilizer = _rows_to_csr(stab_rows, n_q)
    gauge = _rows_to_csr([list(s.qubits) for s in supports], n_q)

    constraint_rows: list[list[int]] = [[] for _ in range(3 * lat.n_vertices)]
    defect_pair_color = np.zeros(3 * lat.n_vertices, dtype=np.uint8)
    slot_of: dict[tuple[int, int], int] = {}
    for cell in range(lat.n_vertices):
        cell_color = int(colors[cell])
        pcs = tuple(i for i, p in enumerate(PAIRS) if cell_color not in p)
        for k, pc in enumerate(pcs):
            defect_pair_color[3 * cell + k] = pc
            slot_of[(cell, pc)] = 3 * cell + k
    for s in supports:
        for cell in s.cells:
            constraint_rows[slot_of[(cell, s.pair_color)]].append(s.id)
    constraints = _rows_to_csr(constraint_rows, len(supports))

    # every qubit's coordinate bounding box, for box-restricted solves
    qmin = np.zeros((n_q, 3), dtype=np.int16)
    qmax = np.zeros((n_q, 3), dtype=np.int16)
    for q in qubits:
        pts = lat.coords[list(q.simplex)]
        qmin[q.id] = pts.min(axis=0)
        qmax[q.id] = pts.max(axis=0)

    cells_by_color = {
        c: np.nonzero(lat.colors == c)[0].astype(np.int32) for c in COLORS
    }
    qubit_cells = np.zeros((n_q, 4), dtype=np.int32)
    for q in qubits:
        s_ = q.simplex
        qubit_cells[q.id] = [s_[i % len(s_)] for i in range(4)]

    code = CodeStructure(
        lattice=lat, qubits=qubits, supports=supports,
        stabilizer=stabilizer, gauge=gauge, constraints=constraints,
        defect_pair_color=defect_pair_color,
        qubit_bbox_min=qmin, qubit_bbox_max=qmax,
        cells_by_color=cells_by_color,
        stab_csc=stabilizer.tocsc(),
        qubit_cells=qubit_cells,
        gauge_csc=gauge.tocsc(),
        gauge_rows=[np.array(s.qubits, dtype=np.int64) for s in supports],
        stab_rows=[np.array(r, dtype=np.int64) for r in stab_rows],
        color_coords={c: lat.coords[cells_by_color[c]].astype(np.float64)
                      for c in COLORS},
    )
    _check_aggregation(code)
    return code


def _check_weights(lat: DualLattice, supports: list[GaugeSupport]):
    ext_vertices = {
        int(v) for f in lat.exterior_faces() for v in lat.faces[f]
    }
    for s in supports:
        w = len(s.qubits)
        if w % 2:
            raise AlgebraError(f"gauge support {s.id} has odd weight {w}")
        if w not in (4, 6, 8):
            raise AlgebraError(f"gauge support {s.id} has weight {w}")
        on_boundary = s.kind == "vertex" or any(v in ext_vertices for v in s.cells)
        if w == 8 and not on_boundary:
            raise AlgebraError(f"weight-8 support {s.id} away from the boundary")


def _check_aggregation(code: CodeStructure):
    """Each colored subset of face outcomes about a cell multiplies to the
    cell stabilizer: XOR of supports in D(cell, uv) equals the stabilizer row."""
    prod = (code.constraints @ code.gauge).tocsr()
    prod.data %= 2
    prod.eliminate_zeros()
    stab3 = code.stabilizer[np.repeat(np.arange(code.n_cells), 3)]
    if (prod != stab3).nnz:
        bad = np.nonzero((prod != stab3).sum(axis=1))[0]
        slot = int(bad[0])
        raise AlgebraError(
            f"gauge aggregation at cell {slot // 3} pair "
            f"{PAIRS[int(code.defect_pair_color[slot])]} does not recover the "
            f"stabilizer"
        )


def _rows_to_csr(rows: list[list[int]], n_cols: int) -> sparse.csr_matrix:
    indptr = np.zeros(len(rows) + 1, dtype=np.int64)
    np.cumsum([len(r) for r in rows], out=indptr[1:])
    indices = np.fromiter(
        (c for r in rows for c in r), dtype=np.int32, count=int(indptr[-1])
    )
    data = np.ones(len(indices), dtype=np.uint8)
    return sparse.csr_matrix((data, indices, indptr),
                             shape=(len(rows), n_cols))


def stabilizer_syndrome_of(code: CodeStructure, error: np.ndarray) -> np.ndarray:
    """Parity of the error against every cell's stabilizer support."""
    error = np.asarray(error)
    if error.shape != (code.n_qubits,):
        raise ValueError(
            f"error vector has shape {error.shape}, expected ({code.n_qubits},)"
        )
    return np.asarray(code.stabilizer @ error.astype(np.uint8), dtype=np.int64) & 1


def check_commutation(code: CodeStructure) -> dict:
    """Verify the subsystem-code algebra by pairwise overlap parities.

    Every X-type stabilizer must meet every Z-type gauge support and every
    Z-type stabilizer an even number of times; each gauge support has even
    weight (so its own X and Z operators commute); the logicals commute with
    the whole gauge group and anticommute with each other.  Distinct gauge
    supports are allowed odd overlaps: that non-commutativity is what makes
    the gauge group bigger than the stabilizer group, and its extent is
    reported for inspection.
    """
    gauge = code.gauge.astype(np.int64)
    stab = code.stabilizer.astype(np.int64)
    sg = (stab @ gauge.T).tocoo()
    odd = sg.data & 1
    if odd.any():
        k = int(np.nonzero(odd)[0][0])
        raise AlgebraError(
            f"stabilizer {sg.row[k]} and gauge support {sg.col[k]} overlap "
            f"on an odd number of qubits"
        )
    ss = (stab @ stab.T).tocoo()
    odd = ss.data & 1
    if odd.any():
        k = int(np.nonzero(odd)[0][0])
        raise AlgebraError(
            f"stabilizers {ss.row[k]} and {ss.col[k]} overlap oddly"
        )
    support_weights = np.diff(code.gauge.indptr)
    if (support_weights % 2).any():
        bad = int(np.nonzero(support_weights % 2)[0][0])
        raise AlgebraError(f"gauge support {bad} has odd weight: its X and Z "
                           "face operators would anticommute")
    if code.n_qubits % 2 == 0:
        raise AlgebraError(
            f"logical operators overlap on {code.n_qubits} qubits (even): "
            "they would commute"
        )
    gg = (gauge @ gauge.T).tocoo()
    anticommuting = int(np.count_nonzero(gg.data & 1))
    return {
        "stabilizer_gauge_pairs": int(stab.shape[0]) * int(gauge.shape[0]),
        "anticommuting_gauge_pairs": anticommuting,
        "logical_weight": code.n_qubits,
    }


def export_check_matrices(code: CodeStructure, path) -> None:
    """Sparse row-index text export of the stabilizer and gauge maps."""
    lines = [f"qubits {code.n_qubits}",
             f"stabilizers {code.n_cells}"]
    stab = code.stabilizer
    for r in range(code.n_cells):
        row = stab.indices[stab.indptr[r]:stab.indptr[r + 1]]
        lines.append(" ".join(map(str, sorted(int(x) for x in row))))
    lines.append(f"gauges {code.n_supports}")
    g = code.gauge
    for r in range(code.n_supports):
        row = g.indices[g.indptr[r]:g.indptr[r + 1]]
        lines.append(" ".join(map(str, sorted(int(x) for x in row))))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")
