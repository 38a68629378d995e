"""Shared clustering kernel for both decoding stages.

Every defect carries a Chebyshev ball whose radius is its cluster's growth
round; a cluster's region is the union of its members' balls, never their
bounding box, so distant defect groups stay separate until their balls
actually meet.  Clusters whose regions intersect are merged (union-find),
and the boundaries a region reaches widen the set of charges the cluster
can shed, tracked as 4-bit masks in GF(2)^4.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["Cluster", "ClusterSet", "span_table", "GAUGE_NEUTRAL",
           "STABILIZER_NEUTRAL", "charge_of_pair", "charge_of_color"]


def charge_of_pair(u: int, v: int) -> int:
    return (1 << u) ^ (1 << v)


def charge_of_color(c: int) -> int:
    return 1 << c


def _span(generators: list[int]) -> frozenset[int]:
    out = {0}
    for g in generators:
        out |= {x ^ g for x in out}
    return frozenset(out)


def span_table(gens_for_boundary) -> list[frozenset[int]]:
    """Absorbable-charge sets for every 4-bit mask of touched boundaries."""
    table = []
    for mask in range(16):
        gens: list[int] = []
        for c in range(4):
            if mask & (1 << c):
                gens.extend(gens_for_boundary(c))
        table.append(_span(gens))
    return table


# A gauge-defect string colored uv may terminate at boundary c iff c not in uv.
GAUGE_NEUTRAL = span_table(
    lambda c: [charge_of_pair(u, v)
               for u in range(4) for v in range(u + 1, 4)
               if c not in (u, v)]
)
# Stabilizer strings: full branching (r+g+y+b = 0) is always allowed; boundary
# c additionally absorbs single defects of color c.
STABILIZER_NEUTRAL = [
    _span([0b1111] + [charge_of_color(c) for c in range(4) if mask & (1 << c)])
    for mask in range(16)
]


@dataclass
class Cluster:
    defect_ids: list[int]
    radius: int                 # in half-steps: effective radius is radius/2
    charge: int
    plane_max: tuple = (0, 0, 0, 0)   # max over members of the 4 plane forms
    alive: bool = True          # False after a merge absorbed it
    finished: bool = False      # caller-controlled: stop growing this cluster
    payload: dict = field(default_factory=dict)


class ClusterSet:
    """Union-find over defect clusters with union-of-balls regions."""

    def __init__(self, points: np.ndarray, charges, L: int,
                 cell_coords: np.ndarray):
        self.points = np.asarray(points, dtype=np.int64).reshape(-1, 3)
        self.L = L
        self.cell_coords = np.asarray(cell_coords, dtype=np.int64)
        self.lat_min = self.cell_coords.min(axis=0)
        self.lat_max = self.cell_coords.max(axis=0)
        m = len(self.points)
        p16 = self.points.astype(np.int16)
        d = np.abs(p16[:, 0:1] - p16[None, :, 0])
        np.maximum(d, np.abs(p16[:, 1:2] - p16[None, :, 1]), out=d)
        np.maximum(d, np.abs(p16[:, 2:3] - p16[None, :, 2]), out=d)
        self.defect_dist = d
        self._cell_dist: np.ndarray | None = None
        x, y, z = (self.points[:, k] for k in range(3))
        planes = np.stack([x + y + z, y - x - z, x - y - z, z - x - y], axis=1)
        self.clusters = [
            Cluster([i], 0, int(charges[i]), tuple(int(v) for v in planes[i]))
            for i in range(m)
        ]
        self.merge_intersecting()

    @property
    def cell_dist(self) -> np.ndarray:
        """(defects x cells) Chebyshev distances, computed on first use."""
        if self._cell_dist is None:
            p = self.points.astype(np.int16)
            c = self.cell_coords.astype(np.int16)
            d = np.abs(p[:, 0:1] - c[None, :, 0])
            np.maximum(d, np.abs(p[:, 1:2] - c[None, :, 1]), out=d)
            np.maximum(d, np.abs(p[:, 2:3] - c[None, :, 2]), out=d)
            self._cell_dist = d
        return self._cell_dist

    def live(self) -> list[Cluster]:
        return [c for c in self.clusters if c.alive]

    def unfinished(self) -> list[Cluster]:
        return [c for c in self.clusters if c.alive and not c.finished]

    def touched_mask(self, cluster: Cluster) -> int:
        """Boundaries whose carrier plane some member half-ball reaches."""
        reach = 3 * cluster.radius
        pm = cluster.plane_max
        mask = 0
        if 2 * pm[0] + reach >= 4 * self.L:
            mask |= 1 << 0
        if 2 * pm[1] + reach >= 0:
            mask |= 1 << 1
        if 2 * pm[2] + reach >= 0:
            mask |= 1 << 2
        if 2 * pm[3] + reach >= 0:
            mask |= 1 << 3
        return mask

    def region_cell_mask(self, cluster: Cluster) -> np.ndarray:
        """Cells within the cluster's union-of-balls region."""
        return (self.cell_dist[cluster.defect_ids].min(axis=0)
                <= cluster.radius // 2)

    def saturated(self, cluster: Cluster) -> bool:
        """Region covers every cell: growth can no longer help."""
        span = int((self.lat_max - self.lat_min).max())
        if cluster.radius // 2 < span // 2:
            return False
        return bool(self.region_cell_mask(cluster).all())

    def grow_unfinished(self):
        for c in self.clusters:
            if c.alive and not c.finished:
                c.radius += 1

    def merge_intersecting(self) -> bool:
        """Union clusters whose ball-union regions intersect, skipping pairs
        that are both finished.

        Finished clusters hold valid local explanations; because sub-solves
        constrain every cell of their own region, overlapping finished
        regions XOR together consistently, and merging them would only chain
        unrelated defect groups into needlessly global corrections.
        """
        live = self.live()
        k = len(live)
        if k < 2:
            return False
        m = len(self.points)
        cl_of = np.empty(m, dtype=np.int64)
        radius = np.empty(m, dtype=np.int64)
        finished = np.zeros(m, dtype=bool)
        for ci, c in enumerate(live):
            cl_of[c.defect_ids] = ci
            radius[c.defect_ids] = c.radius
            finished[c.defect_ids] = c.finished
        reach = (radius[:, None] + radius[None, :]) // 2
        ok = self.defect_dist <= reach
        ok &= ~(finished[:, None] & finished[None, :])
        ok &= cl_of[:, None] != cl_of[None, :]
        pairs = np.argwhere(np.triu(ok, 1))
        if len(pairs) == 0:
            return False
        parent = list(range(k))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for a, b in pairs:
            ra, rb = find(int(cl_of[a])), find(int(cl_of[b]))
            if ra != rb:
                parent[rb] = ra
        groups: dict[int, list[int]] = {}
        for i in range(k):
            groups.setdefault(find(i), []).append(i)
        for members in groups.values():
            if len(members) == 1:
                continue
            head = live[members[0]]
            for idx in members[1:]:
                other = live[idx]
                head.defect_ids.extend(other.defect_ids)
                head.radius = max(head.radius, other.radius)
                head.charge ^= other.charge
                head.plane_max = tuple(
                    max(a, b) for a, b in zip(head.plane_max, other.plane_max))
                other.alive = False
            head.finished = False
            head.payload = {}
        return True

    def snapshot(self) -> list[dict]:
        """Structured view of the live clusters, for debug dumps."""
        out = []
        for c in self.live():
            pts = self.points[c.defect_ids]
            out.append({
                "defects": sorted(c.defect_ids),
                "radius": c.radius / 2.0,
                "box_min": (pts.min(axis=0) - c.radius // 2).tolist(),
                "box_max": (pts.max(axis=0) + c.radius // 2).tolist(),
                "charge": c.charge,
                "touched": self.touched_mask(c),
                "finished": c.finished,
            })
        return out
