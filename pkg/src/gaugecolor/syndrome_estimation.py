"""Stage one of single-shot decoding: estimate the stabilizer syndrome from a
single round of noisy face-operator outcomes.

Gauge defects carry a two-color charge.  Clusters grow until their total
charge can be shed through matched pairs, branching triplets, or strings
running into a boundary the region touches; each triplet contributes one
estimated stabilizer defect at the cell of the complementary color nearest
the mean position of the defects that branch there.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .clustering import ClusterSet, GAUGE_NEUTRAL, charge_of_pair
from .code_structure import CodeStructure
from .lattice import PAIRS, PAIR_INDEX

__all__ = ["GaugeSyndrome", "EstimatedSyndrome", "measure_gauge",
           "extract_gauge_defects", "estimate_syndrome"]

_SQRT3 = math.sqrt(3.0)
_EXACT_LIMIT = 8


@dataclass
class GaugeSyndrome:
    """Gauge defects: one row per (cell, pair-color) with odd outcome parity."""

    cells: np.ndarray        # (m,) int
    pair_colors: np.ndarray  # (m,) int, index into lattice.PAIRS
    coords: np.ndarray       # (m, 3) int

    def __len__(self) -> int:
        return len(self.cells)


@dataclass
class EstimatedSyndrome:
    """Estimated stabilizer defects (cells), plus a saturation-failure flag."""

    cells: np.ndarray
    estimation_failed: bool = False
    cluster_log: list = field(default_factory=list, repr=False)


def measure_gauge(code: CodeStructure, error: np.ndarray,
                  flips: np.ndarray) -> np.ndarray:
    """Outcome bit per Z-type gauge support: support parity XOR flip."""
    error = np.asarray(error, dtype=np.uint8)
    flips = np.asarray(flips, dtype=np.uint8)
    if error.shape != (code.n_qubits,):
        raise ValueError(f"error vector has shape {error.shape}, "
                         f"expected ({code.n_qubits},)")
    if flips.shape != (code.n_supports,):
        raise ValueError(f"flip vector has shape {flips.shape}, "
                         f"expected ({code.n_supports},)")
    parity = np.asarray(code.gauge @ error, dtype=np.int64) & 1
    return (parity ^ flips).astype(np.uint8)


def extract_gauge_defects(code: CodeStructure,
                          outcomes: np.ndarray) -> GaugeSyndrome:
    """Defect at (cell, uv) iff the uv outcomes bounding the cell multiply to -1."""
    parities = np.asarray(code.constraints @ outcomes.astype(np.uint8),
                          dtype=np.int64) & 1
    slots = np.nonzero(parities)[0]
    cells = slots // 3
    pcs = code.defect_pair_color[slots]
    coords = code.lattice.coords[cells].astype(np.int64)
    return GaugeSyndrome(cells=cells, pair_colors=pcs.astype(np.int64),
                         coords=coords)


def estimate_syndrome(code: CodeStructure, gsyn: GaugeSyndrome,
                      collect_log: bool = False) -> EstimatedSyndrome:
    """Cluster gauge defects and read off the implied stabilizer defects."""
    lat = code.lattice
    if len(gsyn) == 0:
        return EstimatedSyndrome(cells=np.zeros(0, dtype=np.int64))
    charges = [charge_of_pair(*PAIRS[int(pc)]) for pc in gsyn.pair_colors]
    cs = ClusterSet(gsyn.coords, charges, lat.L, lat.coords)
    log: list = []
    failed = False
    for rounds in itertools.count():
        for c in cs.live():
            c.finished = c.charge in GAUGE_NEUTRAL[cs.touched_mask(c)]
        if collect_log:
            log.append({"round": rounds, "clusters": cs.snapshot()})
        active = cs.unfinished()
        if not active:
            break
        if any(cs.saturated(c) for c in active):
            failed = True
            break
        cs.grow_unfinished()
        cs.merge_intersecting()

    estimated: set[int] = set()
    for cluster in cs.live():
        if not cluster.finished:
            continue
        defects = [(gsyn.coords[i], int(gsyn.pair_colors[i]))
                   for i in cluster.defect_ids]
        touched = cs.touched_mask(cluster)
        for color, anchor in _decompose(code, defects, touched):
            cell = _nearest_cell(code, anchor, color)
            estimated ^= {cell}
    return EstimatedSyndrome(
        cells=np.array(sorted(estimated), dtype=np.int64),
        estimation_failed=failed,
        cluster_log=log,
    )


# --- primitive costs --------------------------------------------------------


def _dist(a, b) -> float:
    return math.dist(a, b)


def _boundary_distance(coord, color: int, L: int) -> float:
    """Cost of a string from a cell into a boundary: even a cell sitting on
    the boundary needs one flipped face outcome to explain its defect."""
    x, y, z = (float(v) for v in coord)
    if color == 0:
        excess = x + y + z - 2 * L
    elif color == 1:
        excess = y - x - z
    elif color == 2:
        excess = x - y - z
    else:
        excess = z - x - y
    return max(0.0, -excess) / _SQRT3 + 1.0


def _nearest_cell(code: CodeStructure, point, color: int) -> int:
    """Nearest cell of a color by Euclidean distance; lexicographic tie-break."""
    cells = code.cells_by_color[color]
    pts = code.color_coords[color]
    d2 = ((pts - np.asarray(point, dtype=np.float64)) ** 2).sum(axis=1)
    return int(cells[int(np.argmin(d2))])   # cells are lex-sorted by coordinate


def _branch_cost(code: CodeStructure, coords, color: int) -> float:
    """Min over branch cells of the given color of the summed string lengths."""
    pts = code.color_coords[color]
    total = np.zeros(len(pts))
    for c in coords:
        total += np.sqrt(((pts - np.asarray(c, dtype=np.float64)) ** 2).sum(axis=1))
    return float(total.min())


def _triplet_color(pcs: tuple[int, int, int]) -> int | None:
    """The emitted color if three pair-colors form {uv, vw, uw}, else None."""
    if len(set(pcs)) != 3:
        return None
    colors: set[int] = set()
    for pc in pcs:
        colors |= set(PAIRS[pc])
    if len(colors) != 3:
        return None
    return ({0, 1, 2, 3} - colors).pop()


def _touched_colors(mask: int) -> list[int]:
    return [c for c in range(4) if mask & (1 << c)]


# --- decomposition ----------------------------------------------------------


def _decompose(code: CodeStructure, defects, touched: int):
    """Stabilizer defects implied by one neutral cluster, as (color, anchor)
    pairs; the anchor is the mean position of the gauge defects that branch
    there, so estimates stay local even inside sprawling merged clusters."""
    if len(defects) <= _EXACT_LIMIT:
        result = _exact(code, defects, touched)
        if result is not None:
            return result
    return _greedy(code, defects, touched)


def _exact(code: CodeStructure, defects, touched: int):
    """Minimum-cost partition into pairs, triplets and boundary singles.

    Returns None when no partition from these primitives covers the multiset
    (possible for chained branchings; the greedy path handles those).
    """
    L = code.lattice.L
    n = len(defects)
    boundary = _touched_colors(touched)
    memo: dict[int, tuple[float, list] | None] = {0: (0.0, [])}

    def best(mask: int):
        if mask in memo:
            return memo[mask]
        i = (mask & -mask).bit_length() - 1
        ci, pi = defects[i]
        options = []
        rest_i = mask & ~(1 << i)
        for c in boundary:
            if c not in PAIRS[pi]:
                sub = best(rest_i)
                if sub is not None:
                    options.append((sub[0] + _boundary_distance(ci, c, L),
                                    sub[1]))
        others = [j for j in range(i + 1, n) if mask & (1 << j)]
        for j in others:
            cj, pj = defects[j]
            if pj == pi:
                sub = best(rest_i & ~(1 << j))
                if sub is not None:
                    options.append((sub[0] + _dist(ci, cj), sub[1]))
        for j, k in itertools.combinations(others, 2):
            cj, pj = defects[j]
            ck, pk = defects[k]
            emit = _triplet_color((pi, pj, pk))
            if emit is None:
                continue
            sub = best(rest_i & ~(1 << j) & ~(1 << k))
            if sub is not None:
                cost = _branch_cost(code, (ci, cj, ck), emit)
                anchor = tuple(np.mean([ci, cj, ck], axis=0))
                options.append((sub[0] + cost, sub[1] + [(emit, anchor)]))
        result = min(options, key=lambda t: t[0]) if options else None
        memo[mask] = result
        return result

    full = best((1 << n) - 1)
    return None if full is None else sorted(full[1])


def _greedy(code: CodeStructure, defects, touched: int) -> list[int]:
    """Nearest-first greedy decomposition with virtual bridging defects.

    Defects are consumed in id order; each one takes its locally cheapest
    completion (same-color partner, boundary, or the tightest triangle), with
    triangle cost proxied by the half-perimeter.  A stuck state introduces a
    virtual defect at the implied branch cell, which always succeeds on a
    charge-neutral cluster.
    """
    L = code.lattice.L
    boundary = _touched_colors(touched)
    alive: dict[int, tuple] = {i: d for i, d in enumerate(defects)}
    next_id = len(defects)
    emitted: list = []

    def moves_for(i: int) -> tuple | None:
        ci, pi = alive[i]
        best: tuple | None = None   # (cost, move...)
        for c in boundary:
            if c not in PAIRS[pi]:
                cand = (_boundary_distance(ci, c, L), "single", i)
                if best is None or cand < best:
                    best = cand
        for j, (cj, pj) in alive.items():
            if j == i:
                continue
            if pj == pi:
                cand = (_dist(ci, cj), "pair", i, j)
                if best is None or cand < best:
                    best = cand
            shared = set(PAIRS[pi]) & set(PAIRS[pj])
            if len(shared) == 1:
                rest = (set(PAIRS[pi]) | set(PAIRS[pj])) - shared
                needed = PAIR_INDEX[tuple(sorted(rest))]
                emit = _triplet_color((pi, pj, needed))
                dij = _dist(ci, cj)
                for k, (ck, pk) in alive.items():
                    if pk != needed or k in (i, j):
                        continue
                    cost = (dij + _dist(ci, ck) + _dist(cj, ck)) / 2.0
                    cand = (cost, "triplet", i, j, k, emit)
                    if best is None or cand < best:
                        best = cand
        return best

    while alive:
        best = None
        # nearest-first from the lowest id; fall back to any defect with a move
        for i in sorted(alive):
            best = moves_for(i)
            if best is not None:
                break
        if best is None:
            next_id = _bridge(code, alive, boundary, emitted, next_id, L)
            continue
        kind = best[1]
        if kind == "single":
            del alive[best[2]]
        elif kind == "pair":
            del alive[best[2]], alive[best[3]]
        else:
            anchor = tuple(np.mean(
                [alive[best[2]][0], alive[best[3]][0], alive[best[4]][0]],
                axis=0))
            emitted.append((best[5], anchor))
            del alive[best[2]], alive[best[3]], alive[best[4]]
    return sorted(emitted)


def _bridge(code: CodeStructure, alive: dict, boundary: list[int],
            emitted: list[int], next_id: int, L: int) -> int:
    """Resolve a stuck state by introducing a virtual defect.

    Two defects sharing one color branch at a cell, emitting a stabilizer
    defect and leaving the completing pair-color behind; a lone defect whose
    two colors both have touched boundaries branches toward both.
    """
    best = None
    for a, b in itertools.combinations(sorted(alive), 2):
        (ca, pa), (cb, pb) = alive[a], alive[b]
        shared = set(PAIRS[pa]) & set(PAIRS[pb])
        if pa == pb or len(shared) != 1:
            continue
        rest = (set(PAIRS[pa]) | set(PAIRS[pb])) - shared
        emit = ({0, 1, 2, 3} - shared - rest).pop()
        cost = _dist(ca, cb)
        if best is None or cost < best[0]:
            best = (cost, a, b, emit, PAIR_INDEX[tuple(sorted(rest))])
    if best is not None:
        _, a, b, emit, virtual_pc = best
        anchor = np.mean([alive[a][0], alive[b][0]], axis=0)
        branch = _nearest_cell(code, anchor, emit)
        coord = code.lattice.coords[branch].astype(np.int64)
        del alive[a], alive[b]
        alive[next_id] = (coord, virtual_pc)
        emitted.append((emit, tuple(anchor)))
        return next_id + 1
    if len(alive) == 1:
        (i, (ci, pi)), = alive.items()
        u, v = PAIRS[pi]
        if u in boundary and v in boundary:
            # branch into strings ending on both touched boundaries; the
            # junction shows up as one stabilizer defect
            best_emit = None
            for d in sorted({0, 1, 2, 3} - {u, v}):
                emit = ({0, 1, 2, 3} - {u, v, d}).pop()
                cost = _branch_cost(code, (ci,), emit)
                if best_emit is None or cost < best_emit[0]:
                    best_emit = (cost, emit)
            del alive[i]
            emitted.append((best_emit[1], tuple(float(x) for x in ci)))
            return next_id
    raise RuntimeError(
        "non-neutral cluster reached decomposition; neutrality test and "
        "decomposition disagree"
    )
