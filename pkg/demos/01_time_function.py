"""Cosmological time on the simplest domains.

The future cone of a point has time sqrt(-<p,p>) and retraction at the
apex.  Bending the cone along one geodesic with weight 1 opens a band: the
retraction now lands on a segment of length 1 and the boundary of the domain
is a graph psi over the spatial plane.
"""

import numpy as np

from regdomain import gallery

cone = gallery.domain_of(gallery.load("cone"))
p = np.array([2.0, 1.0, 0.0])
res = cone.ct_query(p)
print("cone      T =", res.T, " sqrt(3) =", np.sqrt(3))
print("          r =", res.r, " N =", res.N)

bent = gallery.domain_of(gallery.load("single-geodesic-2d"))
for y2 in (-2.0, -0.5, 0.0, 0.5, 2.0):
    y = np.array([0.0, y2])
    psi = bent.boundary_height(y)
    q = np.r_[psi + 1.0, y]
    res = bent.ct_query(q)
    print(f"y2={y2:+.1f}  psi={psi:.6f}  T(psi+1)={res.T:.6f}  cell={res.cell} ({res.kind})")

# the singularity is the segment between the two piece positions
sig = bent.sigma
(a, b, length), = sig.edges.values()
print("singular edge", a, "->", b, "length", length)

# concavity along a vertical ray
ts = np.linspace(0.1, 3.0, 30)
ys = np.array([0.3, -0.2])
T = bent.T(np.c_[bent.boundary_height(ys) + ts, np.tile(ys, (len(ts), 1))])
print("second differences <= 0:", bool(np.all(np.diff(T, 2) <= 1e-12)))
