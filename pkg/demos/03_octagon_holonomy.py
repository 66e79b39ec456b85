"""Equivariant domain from a multicurve on a genus 2 surface.

The octagon group acts on H^2; the lifts of one closed geodesic form a
lamination whose truncation gives 95 walls.  Reading the retraction at a
base point and its images yields an affine cocycle, and the domain is
equivariant under the deformed action x -> g x + tau(g).
"""

import numpy as np

from regdomain import gallery
from regdomain.holonomy import cocycle_defect, extend_cocycle
from regdomain.lorentz import hyp_distance, random_hyperboloid_points

scene = gallery.load("octagon-multicurve-2d")
D = gallery.domain_of(scene)
P = scene.group
print("walls", len(D.S.walls), " pieces", len(D.S.pieces))
print("relation residuals", [f"{r['linear']:.1e}" for r in P.relation_report()])

tau = D.holonomy_cocycle(P)
for k, t in enumerate(tau):
    print(f"tau(g{k}) =", np.round(t, 6))

Pt = P.with_cocycle(tau)
print("cocycle on relations", [f"{r['cocycle']:.1e}" for r in Pt.relation_report()])
ball = extend_cocycle(Pt, 2)
print("word ball size", len(ball), " cocycle defect", f"{cocycle_defect(ball):.1e}")

# T(g x + tau) = T(x) for points whose images stay inside the truncation
rng = np.random.default_rng(1)
x0 = D.S.pieces[D.base].witness
worst, used = 0.0, 0
for h in ball.elements:
    if hyp_distance(x0, h.linear @ x0) > 4.5:
        continue
    for x in random_hyperboloid_points(rng, 2, 10, 1.0):
        p = D.level_point(1.5, x)
        worst = max(worst, abs(D.T(h.apply(p)[None])[0] - 1.5))
        used += 1
print(f"max |T(g.p) - T(p)| over {used} image points: {worst:.1e}")
