"""Weight equations around a spine in dimension 3.

Four walls meet along one geodesic at right angles.  Balanced weights make
the singular face a closed rectangle; unbalanced weights leave a residual and
the domain refuses to build.  A non-realizable star returns a Stiemke
certificate instead of weights.
"""

import numpy as np

from regdomain import gallery
from regdomain.domain import DomainError, build_domain
from regdomain.stratification import solve_weights, weight_residuals

scene = gallery.load("quad-spine-3d")
S = scene.complex
sol = solve_weights(S)
print("walls", S.wall_ids, " spines", list(S.spines))
print("solution cone dimension", sol.cone_dim, " lower bound f - 2e =", sol.lower_bound)
print("positive witness", {k: round(float(v), 6) for k, v in sol.witness.items()})

for w in ({"P1": 1, "P2": 2, "P3": 1, "P4": 2}, {"P1": 1, "P2": 1, "P3": 1, "P4": 2}):
    w = {k: float(v) for k, v in zip(S.wall_ids, w.values())}
    res = weight_residuals(S, w)
    print("weights", list(w.values()), " residual", np.round(next(iter(res.values())), 12))
    try:
        D = build_domain(S, w)
        f = D.sigma.faces["l"]
        print("  face side lengths", np.round(f.lengths, 12), " angles / pi", np.round(f.angles / np.pi, 12))
    except DomainError as exc:
        print("  rejected:", exc)
