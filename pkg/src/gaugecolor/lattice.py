"""Dual lattice of the gauge color code.

The lattice is a ball-shaped simplicial complex built from an L x L x L block
of unit cubes (five tetrahedra each, parity-alternating so neighbouring cubes
agree on face diagonals).  Four corners are carved off along half-space cuts
to leave a four-sided tetrahedral silhouette, and "bulbs" of sixteen
tetrahedra are glued back wherever the carved surface exposes a vertex whose
color matches the boundary it sits on.  Vertices carry one of four colors,
assigned by coordinate parity and then *verified* rather than assumed.

Every closed-form simplex count is enforced after construction; a lattice
that fails any check is never returned.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "COLOR_NAMES",
    "PAIRS",
    "PAIR_INDEX",
    "pair_complement",
    "complement_pair",
    "DualLattice",
    "CountReport",
    "LatticeError",
    "build_dual_lattice",
    "validate_counts",
    "boundary_faces",
    "face_color",
    "export_lattice",
    "import_lattice",
]

COLOR_NAMES = "rgyb"
COLORS = (0, 1, 2, 3)

# Unordered color pairs, indexed 0..5.
PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
PAIR_INDEX = {p: i for i, p in enumerate(PAIRS)}
PAIR_INDEX.update({(v, u): i for (u, v), i in list(PAIR_INDEX.items())})
# complement of a pair is the opposite pair
PAIR_COMPLEMENT = tuple(
    PAIR_INDEX[tuple(sorted(set(COLORS) - set(p)))] for p in PAIRS
)


def pair_complement(pair_id: int) -> int:
    """Opposite pair of an unordered color pair (by pair index)."""
    return PAIR_COMPLEMENT[pair_id]


def complement_pair(c1: int, c2: int) -> int:
    """Pair index of the two colors that are neither ``c1`` nor ``c2``."""
    if c1 == c2:
        raise ValueError("complement of a color with itself is undefined")
    return PAIR_COMPLEMENT[PAIR_INDEX[(c1, c2)]]


class LatticeError(Exception):
    """Construction or validation defect; the lattice must not be used."""


# --- fundamental unit cube -------------------------------------------------

# Corner sets of the five-tetrahedron decomposition.  The central tetrahedron
# of an even cube sits on the even-parity corners; the odd cube is the even
# cube rotated by pi/2, which swaps the two corner sets.
_EVEN_LOCALS = ((0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1))
_ODD_LOCALS = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1))


def _cube_tets(a: int, b: int, c: int):
    central = _EVEN_LOCALS if (a + b + c) % 2 == 0 else _ODD_LOCALS
    apexes = _ODD_LOCALS if (a + b + c) % 2 == 0 else _EVEN_LOCALS
    tets = [tuple((a + u, b + v, c + w) for (u, v, w) in central)]
    for q in apexes:
        nbrs = [p for p in central
                if abs(q[0] - p[0]) + abs(q[1] - p[1]) + abs(q[2] - p[2]) == 1]
        tets.append(tuple((a + u, b + v, c + w) for (u, v, w) in [q] + nbrs))
    return tets


def vertex_color(x: int, y: int, z: int) -> int:
    """Color by coordinate parity class; proper by construction, verified later."""
    return 2 * ((x + z) % 2) + ((y + z) % 2)


def _plane_excess(x: int, y: int, z: int, color: int, L: int) -> int:
    """Signed distance (in plane units) of a point past the boundary of a color.

    Positive means strictly outside the half-space kept for that boundary.
    """
    if color == 0:
        return x + y + z - 2 * L
    if color == 1:
        return y - x - z
    if color == 2:
        return x - y - z
    return z - x - y


# --- data model ------------------------------------------------------------


@dataclass
class CountReport:
    """Direct enumeration counts next to their closed-form values."""

    L: int
    Q_v: int
    Q_e: int
    Q_f: int
    Q_t: int
    Q: int
    v: int
    e: int
    f: int
    t: int
    v_ext: int
    G_supports: int
    euler_characteristic: int

    @staticmethod
    def formulas(L: int) -> dict[str, int]:
        return {
            "Q_v": 4,
            "Q_e": 6 * L,
            "Q_f": 9 * L**2 - 5,
            "Q_t": (5 * L**3 + 24 * L**2 - 2 * L - 24) // 3,
            "Q": (5 * L**3 + 51 * L**2 + 16 * L - 27) // 3,
            "v": (L**3 + 12 * L**2 + 5 * L - 6) // 3,
            "e": (4 * L**3 + 33 * L**2 + 2 * L - 27) // 2,
            "f": (20 * L**3 + 123 * L**2 - 8 * L - 111) // 6,
            "t": (5 * L**3 + 24 * L**2 - 2 * L - 24) // 3,
            "v_ext": (9 * L**2 - 1) // 2,
            "G_supports": 2 * L**3 + 21 * L**2 + 7 * L - 12,
            "euler_characteristic": 1,
        }

    def mismatches(self) -> list[str]:
        want = self.formulas(self.L)
        return [
            f"{name}: counted {getattr(self, name)}, formula gives {want[name]}"
            for name in want
            if getattr(self, name) != want[name]
        ]


@dataclass
class DualLattice:
    """Immutable tetrahedral complex with coloring and boundary labels."""

    L: int
    coords: np.ndarray        # (v, 3) int
    colors: np.ndarray        # (v,) uint8
    edges: np.ndarray         # (e, 2) int32, each row sorted, rows lex-sorted
    faces: np.ndarray         # (f, 3) int32
    tets: np.ndarray          # (t, 4) int32
    face_exterior: np.ndarray  # (f,) bool
    vertex_exterior: np.ndarray  # (v,) bool
    vertex_boundaries: list[frozenset[int]] = field(repr=False)

    @property
    def n_vertices(self) -> int:
        return len(self.coords)

    @property
    def distance(self) -> int:
        return self.L + 2

    def exterior_faces(self) -> np.ndarray:
        return np.nonzero(self.face_exterior)[0]

    def face_missing_color(self, face_id: int) -> int:
        cols = {int(self.colors[v]) for v in self.faces[face_id]}
        return (set(COLORS) - cols).pop()


def face_color(lat: DualLattice, face_id: int) -> int:
    """The one color absent from a triangle's vertices (its boundary color)."""
    return lat.face_missing_color(face_id)


def boundary_faces(lat: DualLattice, color: int) -> np.ndarray:
    """All exterior faces belonging to the boundary of the given color."""
    ext = lat.exterior_faces()
    return np.array([f for f in ext if lat.face_missing_color(int(f)) == color],
                    dtype=np.int64)


# --- construction ----------------------------------------------------------


def build_dual_lattice(L: int) -> DualLattice:
    """Construct and fully validate the dual lattice for odd L >= 3."""
    if not isinstance(L, (int, np.integer)):
        raise ValueError(f"L must be an integer, got {L!r}")
    if L < 3 or L % 2 == 0:
        raise ValueError(f"L must be an odd integer >= 3, got {L}")

    kept: list[tuple] = []
    removed: list[tuple] = []
    for a, b, c in itertools.product(range(L), repeat=3):
        for tet in _cube_tets(a, b, c):
            outside = any(
                _plane_excess(x, y, z, col, L) > 0
                for (x, y, z) in tet
                for col in COLORS
            )
            (removed if outside else kept).append(tet)

    # Hexagonal patches: a retained surface vertex whose color matches the
    # boundary plane it sits on.  Re-attach every removed tetrahedron that
    # touches such a vertex (a bulb of sixteen).
    removed_at: dict[tuple, list[tuple]] = defaultdict(list)
    for tet in removed:
        for vtx in tet:
            removed_at[vtx].append(tet)
    kept_vertices = {vtx for tet in kept for vtx in tet}
    bad_vertices = [
        vtx for vtx in kept_vertices
        if _plane_excess(*vtx, vertex_color(*vtx), L) == 0 and removed_at[vtx]
    ]
    bulbs: set[tuple] = set()
    for vtx in bad_vertices:
        patch = removed_at[vtx]
        if len(patch) != 16:
            raise LatticeError(
                f"bulb at {vtx} has {len(patch)} tetrahedra, expected 16"
            )
        bulbs.update(patch)

    # The pre-bulb surface must exhibit the wrongly colored patches exactly at
    # the bad vertices; anything else is a construction defect.
    _assert_patch_structure(kept, bad_vertices, L)

    tet_vertex_sets = kept + sorted(bulbs)
    return _assemble(L, tet_vertex_sets)


def _assert_patch_structure(kept: list[tuple], bad_vertices: list[tuple], L: int):
    """Pre-bulb check: every wrongly colored surface triangle touches a patch center."""
    face_count: dict[tuple, int] = defaultdict(int)
    for tet in kept:
        for tri in itertools.combinations(sorted(tet), 3):
            face_count[tri] += 1
    bad = set(bad_vertices)
    for tri, n in face_count.items():
        if n != 1:
            continue
        cols = {vertex_color(*v) for v in tri}
        missing = (set(COLORS) - cols).pop()
        on_plane = all(_plane_excess(*v, missing, L) == 0 for v in tri)
        if not on_plane and not (bad & set(tri)):
            raise LatticeError(
                f"carved surface triangle {tri} is wrongly colored but touches "
                f"no hexagonal patch center"
            )


def _assemble(L: int, tet_vertex_sets: list[tuple]) -> DualLattice:
    vertices = sorted({vtx for tet in tet_vertex_sets for vtx in tet})
    vid = {vtx: i for i, vtx in enumerate(vertices)}
    coords = np.array(vertices, dtype=np.int16)
    colors = np.array([vertex_color(*vtx) for vtx in vertices], dtype=np.uint8)

    tets = np.array(
        sorted(tuple(sorted(vid[vtx] for vtx in tet)) for tet in tet_vertex_sets),
        dtype=np.int32,
    )
    edge_set = set()
    face_count: dict[tuple, int] = defaultdict(int)
    for tet in tets:
        t = tuple(int(x) for x in tet)
        for pair in itertools.combinations(t, 2):
            edge_set.add(pair)
        for tri in itertools.combinations(t, 3):
            face_count[tri] += 1
    edges = np.array(sorted(edge_set), dtype=np.int32)
    faces = np.array(sorted(face_count), dtype=np.int32)
    face_exterior = np.array([face_count[tuple(f)] == 1 for f in faces.tolist()],
                             dtype=bool)
    if any(n > 2 for n in face_count.values()):
        raise LatticeError("a triangle belongs to more than two tetrahedra")

    # proper coloring: verified, not assumed
    ecol = colors[edges]
    if np.any(ecol[:, 0] == ecol[:, 1]):
        bad = edges[np.nonzero(ecol[:, 0] == ecol[:, 1])[0][0]]
        raise LatticeError(f"edge {bad.tolist()} joins two same-colored vertices")
    tcol = colors[tets]
    if np.any(np.sort(tcol, axis=1) != np.arange(4, dtype=np.uint8)):
        raise LatticeError("a tetrahedron is missing one of the four colors")

    # boundary membership from exterior triangles
    vertex_boundaries: list[set[int]] = [set() for _ in vertices]
    for f_idx in np.nonzero(face_exterior)[0]:
        tri = faces[f_idx]
        missing = (set(COLORS) - {int(colors[v]) for v in tri}).pop()
        for v in tri:
            vertex_boundaries[int(v)].add(missing)
    vertex_exterior = np.array([len(b) > 0 for b in vertex_boundaries], dtype=bool)

    lat = DualLattice(
        L=L,
        coords=coords,
        colors=colors,
        edges=edges,
        faces=faces,
        tets=tets,
        face_exterior=face_exterior,
        vertex_exterior=vertex_exterior,
        vertex_boundaries=[frozenset(b) for b in vertex_boundaries],
    )
    _validate_boundaries(lat)
    report = validate_counts(lat)
    bad = report.mismatches()
    if bad:
        raise LatticeError("count formula mismatch: " + "; ".join(bad))
    return lat


def _validate_boundaries(lat: DualLattice):
    """Four uniformly colored, connected boundaries, none containing its own color."""
    ext = lat.exterior_faces()
    by_color: dict[int, list[int]] = defaultdict(list)
    for f in ext:
        by_color[lat.face_missing_color(int(f))].append(int(f))
    if sorted(by_color) != list(COLORS):
        raise LatticeError(
            f"expected four boundary colors, found {sorted(by_color)}"
        )
    for color, face_ids in by_color.items():
        for f in face_ids:
            if any(int(lat.colors[v]) == color for v in lat.faces[f]):
                raise LatticeError(
                    f"boundary {COLOR_NAMES[color]} contains a vertex of its own color"
                )
        if not _faces_connected(lat, face_ids):
            raise LatticeError(
                f"boundary {COLOR_NAMES[color]} is not a connected surface"
            )
    # exterior vertex classes
    n_three = sum(len(b) >= 3 for b in lat.vertex_boundaries)
    n_two = sum(len(b) == 2 for b in lat.vertex_boundaries)
    if n_three != 4:
        raise LatticeError(f"{n_three} vertices lie on three boundaries, expected 4")
    if n_two != 6 * (lat.L - 1):
        raise LatticeError(
            f"{n_two} vertices lie on two boundaries, expected {6 * (lat.L - 1)}"
        )


def _faces_connected(lat: DualLattice, face_ids: list[int]) -> bool:
    by_edge: dict[tuple, list[int]] = defaultdict(list)
    for f in face_ids:
        tri = lat.faces[f]
        for pair in itertools.combinations(sorted(int(v) for v in tri), 2):
            by_edge[pair].append(f)
    adj: dict[int, set[int]] = defaultdict(set)
    for fs in by_edge.values():
        for a, b in itertools.combinations(fs, 2):
            adj[a].add(b)
            adj[b].add(a)
    seen = {face_ids[0]}
    stack = [face_ids[0]]
    while stack:
        cur = stack.pop()
        for nxt in adj[cur]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return len(seen) == len(face_ids)


def validate_counts(lat: DualLattice) -> CountReport:
    """Count every simplex class by direct enumeration; mismatches are errors
    for the caller (build refuses to return, CLI exits nonzero)."""
    ext_faces = lat.exterior_faces()
    # seam edges: exterior edges whose two exterior triangles differ in color
    by_edge: dict[tuple, list[int]] = defaultdict(list)
    for f in ext_faces:
        tri = sorted(int(v) for v in lat.faces[f])
        for pair in itertools.combinations(tri, 2):
            by_edge[pair].append(int(f))
    for pair, fs in by_edge.items():
        if len(fs) != 2:
            raise LatticeError(
                f"exterior edge {pair} lies in {len(fs)} exterior triangles"
            )
    seam_edges = [
        pair for pair, (f1, f2) in by_edge.items()
        if lat.face_missing_color(f1) != lat.face_missing_color(f2)
    ]
    n_corner = sum(len(b) >= 3 for b in lat.vertex_boundaries)
    q_e = len(seam_edges)
    q_f = len(ext_faces)
    q_t = len(lat.tets)
    report = CountReport(
        L=lat.L,
        Q_v=n_corner,
        Q_e=q_e,
        Q_f=q_f,
        Q_t=q_t,
        Q=n_corner + q_e + q_f + q_t,
        v=lat.n_vertices,
        e=len(lat.edges),
        f=len(lat.faces),
        t=q_t,
        v_ext=int(lat.vertex_exterior.sum()),
        G_supports=len(lat.edges) + int(lat.vertex_exterior.sum())
        + 6 * (lat.L - 1) + 8,
        euler_characteristic=lat.n_vertices - len(lat.edges) + len(lat.faces)
        - q_t,
    )
    return report


# --- serialization ---------------------------------------------------------

_FORMAT_HEADER = "gauge-color-dual-lattice v1"


def export_lattice(lat: DualLattice, path) -> None:
    """Deterministic, versioned text serialization; re-import is exact."""
    lines = [_FORMAT_HEADER, f"L {lat.L}", f"vertices {lat.n_vertices}"]
    for i in range(lat.n_vertices):
        x, y, z = (int(c) for c in lat.coords[i])
        bnd = "".join(sorted(COLOR_NAMES[c] for c in lat.vertex_boundaries[i]))
        lines.append(
            f"{i} {x} {y} {z} {COLOR_NAMES[int(lat.colors[i])]} {bnd or '-'}"
        )
    for name, arr in (("edges", lat.edges), ("faces", lat.faces),
                      ("tetrahedra", lat.tets)):
        lines.append(f"{name} {len(arr)}")
        lines.extend(" ".join(str(int(v)) for v in row) for row in arr)
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def import_lattice(path) -> DualLattice:
    """Parse an exported lattice; errors cite the offending line."""
    with open(path, encoding="ascii") as fh:
        lines = fh.read().splitlines()

    def fail(line_no: int, msg: str):
        raise LatticeError(f"{path}:{line_no + 1}: {msg}")

    if not lines or lines[0] != _FORMAT_HEADER:
        fail(0, f"expected header {_FORMAT_HEADER!r}")
    if not lines[1].startswith("L "):
        fail(1, "expected 'L <odd integer>'")
    L = int(lines[1].split()[1])
    pos = 2

    def read_count(name: str) -> int:
        nonlocal pos
        parts = lines[pos].split()
        if len(parts) != 2 or parts[0] != name:
            fail(pos, f"expected '{name} <count>'")
        pos += 1
        return int(parts[1])

    n_v = read_count("vertices")
    coords = np.zeros((n_v, 3), dtype=np.int16)
    colors = np.zeros(n_v, dtype=np.uint8)
    boundaries: list[frozenset[int]] = []
    name_to_color = {n: i for i, n in enumerate(COLOR_NAMES)}
    for i in range(n_v):
        parts = lines[pos].split()
        if len(parts) != 6 or int(parts[0]) != i:
            fail(pos, f"malformed vertex row (expected id {i})")
        coords[i] = [int(parts[1]), int(parts[2]), int(parts[3])]
        if parts[4] not in name_to_color:
            fail(pos, f"unknown color {parts[4]!r}")
        colors[i] = name_to_color[parts[4]]
        if parts[5] == "-":
            boundaries.append(frozenset())
        else:
            try:
                boundaries.append(frozenset(name_to_color[c] for c in parts[5]))
            except KeyError:
                fail(pos, f"unknown boundary label {parts[5]!r}")
        pos += 1

    def read_simplices(name: str, width: int) -> np.ndarray:
        nonlocal pos
        n = read_count(name)
        rows = []
        for _ in range(n):
            parts = lines[pos].split()
            if len(parts) != width:
                fail(pos, f"expected {width} vertex ids")
            row = [int(p) for p in parts]
            if any(not 0 <= v < n_v for v in row):
                fail(pos, "vertex id out of range")
            rows.append(row)
            pos += 1
        return np.array(rows, dtype=np.int32)

    edges = read_simplices("edges", 2)
    faces = read_simplices("faces", 3)
    tets = read_simplices("tetrahedra", 4)

    face_count: dict[tuple, int] = defaultdict(int)
    for tet in tets.tolist():
        for tri in itertools.combinations(tet, 3):
            face_count[tri] += 1
    face_exterior = np.array(
        [face_count[tuple(f)] == 1 for f in faces.tolist()], dtype=bool
    )
    vertex_exterior = np.array([len(b) > 0 for b in boundaries], dtype=bool)
    lat = DualLattice(
        L=L, coords=coords, colors=colors, edges=edges, faces=faces, tets=tets,
        face_exterior=face_exterior, vertex_exterior=vertex_exterior,
        vertex_boundaries=boundaries,
    )
    report = validate_counts(lat)
    bad = report.mismatches()
    if bad:
        raise LatticeError(f"{path}: imported lattice fails validation: "
                           + "; ".join(bad))
    return lat
