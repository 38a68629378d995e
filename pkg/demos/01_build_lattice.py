"""Build the dual lattice and inspect its structure.

The lattice is the geometric backbone of everything else: qubits live on its
simplices, stabilizers on its vertices, measured face operators on its edges
and exterior vertices.  Construction refuses to return anything that fails
the closed-form count checks, so a successful build is already a validation.
"""

import numpy as np

from gaugecolor import build_dual_lattice, export_lattice, validate_counts
from gaugecolor.lattice import COLOR_NAMES, boundary_faces

L = 5
lat = build_dual_lattice(L)
report = validate_counts(lat)

print(f"dual lattice for L = {L}  (code distance d = {lat.distance})")
print(f"  vertices     {report.v:5d}")
print(f"  edges        {report.e:5d}")
print(f"  triangles    {report.f:5d}")
print(f"  tetrahedra   {report.t:5d}")
print(f"  Euler characteristic v - e + f - t = {report.euler_characteristic}")
print()
print("qubit classes:")
print(f"  tetrahedron qubits  {report.Q_t:4d}")
print(f"  face qubits         {report.Q_f:4d}")
print(f"  seam-edge qubits    {report.Q_e:4d}")
print(f"  corner qubits       {report.Q_v:4d}")
print(f"  total               {report.Q:4d}")
print()
print("boundaries (each uniformly colored, none contains its own color):")
for c in range(4):
    faces = boundary_faces(lat, c)
    colors_seen = {
        int(lat.colors[v]) for f in faces for v in lat.faces[int(f)]
    }
    print(f"  {COLOR_NAMES[c]}: {len(faces):3d} triangles, "
          f"vertex colors present: "
          f"{''.join(COLOR_NAMES[x] for x in sorted(colors_seen))}")

out = "lattice_L5.txt"
export_lattice(lat, out)
print(f"\nserialized to {out} (re-import reproduces it exactly)")
