"""Closed-form solvers against frozen brute-force reference values.

The reference files in ``tests/oracles`` were produced by
``regdomain gallery --regen-oracles --out-dir tests/oracles``: grid search over
the singularity cells for T, dense sampling of ideal directions for the support
function and the boundary height.  Sampled maxima are lower bounds, so the
checks are one-sided with a resolution allowance.
"""

import json
from pathlib import Path

import numpy as np
import pytest

from conftest import domain
from regdomain import gallery
from regdomain.oracles import fixture_queries

ORACLES = Path(__file__).parent / "oracles"


@pytest.mark.parametrize("name", gallery.NAMES)
def test_frozen_oracles(name):
    doc = json.loads((ORACLES / f"{name}.json").read_text())
    D = domain(name)
    assert np.allclose([q["p"] for q in doc["queries"]], fixture_queries(name))
    for q in doc["queries"]:
        p = np.array(q["p"])
        T, r, _, _ = D.ct_batch(p)
        assert -1e-12 <= T[0] - q["T"] <= (1e-6 if D.n == 2 else 1e-3)
        assert np.max(np.abs(r[0] - q["r"])) < (1e-3 if D.n == 2 else 2e-2)
        # endpoint maxima are off by at most one sampling step times the slope
        res = np.linalg.norm(p[1:]) * 2 * np.pi / 20000 if D.n == 2 else 5e-3
        sv = D.support_value(p)[0]
        assert -1e-12 <= sv - q["support"] <= res
        psi = D.boundary_height(p[1:])
        assert -1e-12 <= psi - q["psi"] <= res
