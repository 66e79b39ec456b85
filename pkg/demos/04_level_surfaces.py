"""Rescaled level surfaces converge to the singularity and to H^n.

For small a the intrinsic distance on the level T = a approaches the
distance along the singularity; for large a, d_a / a approaches the
hyperbolic distance.  Translation lengths of group elements follow the
same interpolation.
"""

import numpy as np

from regdomain import gallery
from regdomain.asymptotics import convergence_report, level_mesh, spectrum
from regdomain.lorentz import normalize_timelike

D = gallery.domain_of(gallery.load("two-geodesics-2d"))
x = normalize_timelike(np.array([2.0, 0.2, -1.1]))
y = normalize_timelike(np.array([2.0, -0.1, 1.2]))
rows, bad = convergence_report(D, [(x, y)], [0.01, 0.1, 1.0, 10.0, 100.0])
print(" a        d_a        d_a/a     d_H      d_sigma")
for r in rows:
    print(f"{r['a']:<8g} {r['d_a']:<10.5f} {r['d_a_over_a']:<9.5f} {r['d_H']:<8.5f} {r['d_sigma']:.5f}")
print("monotonicity violations:", len(bad))

m = level_mesh(D, 1.0, 0.25, radius=1.5)
print("level mesh T = 1:", len(m.vertices), "vertices,", len(m.triangles), "triangles")

oct_scene = gallery.load("octagon-multicurve-2d")
O = gallery.domain_of(oct_scene)
datum = oct_scene.group.evaluate((2,))
e = spectrum(O, datum, [0.1, 1.0, 10.0], samples=40, h=0.2, rng=np.random.default_rng(0))
print("word g2: ell_H =", round(e.ell_hyp, 5), " ell_sigma =", round(e.ell_sigma, 5))
for a, v in e.ell_a.items():
    print(f"  a={a:<5g} ell_a/a = {v / a:.5f}")
