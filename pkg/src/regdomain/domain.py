"""Regular domains built from measured stratifications, and their cosmological time.

The domain is the intersection, over top pieces ``D`` and ideal points ``u``
of ``D``, of the open futures of the null planes through ``rho_D`` orthogonal
to ``(1, u)``.  Cosmological time is the largest Lorentzian distance from
``p`` to the singularity, computed exactly cell by cell: in orthonormal
spacelike coordinates on a cell the squared distance is ``c + 2 b.s - |s|^2``
and is maximised by the Euclidean projection of ``b`` onto the cell.
"""

from dataclasses import dataclass

import numpy as np

from .lorentz import inner
from .measure import PathError, piece_positions
from .singularity import assemble, project_polygon
from .stratification import EPS_LOC, ComplexError, weight_residuals

MEMBER_MARGIN = 1e-12
BOUNDARY_BAND = 1e-9
RESIDUAL_TOL = 1e-9


class DomainError(ValueError):
    """Raised for points outside the domain or invalid domain data."""


@dataclass
class CtResult:
    T: float
    r: np.ndarray
    N: np.ndarray
    cell: str
    kind: str

    @property
    def gradient(self):
        """Lorentzian gradient of the cosmological time."""
        return -self.N


@dataclass
class _Cell:
    kind: str
    id: str
    origin: np.ndarray
    basis: np.ndarray
    shape: object


class RegularDomain:
    """Future-complete regular domain of a weighted stratification."""

    def __init__(self, S, weights, base, origin=None, check=True):
        self.S = S
        self.weights = {w: float(weights[w]) for w in S.wall_ids}
        if any(v <= 0 for v in self.weights.values()):
            raise DomainError("weights must be positive")
        self.base = base if base is not None else S.piece_ids[0]
        self.origin = np.zeros(S.n + 1) if origin is None else np.asarray(origin, dtype=float)
        if check:
            for sid, res in weight_residuals(S, self.weights).items():
                if np.linalg.norm(res) > RESIDUAL_TOL:
                    raise DomainError(f"weight equation fails at spine {sid} (residual {np.linalg.norm(res):.3e})")
        self.positions, self.cycle_residual = piece_positions(S, self.weights, self.base, self.origin)
        if self.cycle_residual > RESIDUAL_TOL * max(1.0, max(self.weights.values(), default=1.0)):
            raise DomainError(f"rho is path dependent (residual {self.cycle_residual:.3e})")
        self.sigma = assemble(S, self.weights, self.positions)
        self._cells = self._collect_cells()

    @property
    def n(self):
        return self.S.n

    def _collect_cells(self):
        cells = []
        for p, q in self.sigma.vertices.items():
            cells.append(_Cell("vertex", p, q, np.zeros((0, self.n + 1)), None))
        for w, (A, B, L) in self.sigma.edges.items():
            d = (self.sigma.vertices[B] - self.sigma.vertices[A]) / L
            cells.append(_Cell("edge", w, self.sigma.vertices[A], d[None, :], L))
        for sid, f in self.sigma.faces.items():
            cells.append(_Cell("face", sid, f.origin, f.basis, f.coords))
        return cells

    # -- membership and boundary ---------------------------------------------

    def support_value(self, p):
        """max over support planes of <p - rho_D, (1, u)>; negative exactly inside."""
        p = np.atleast_2d(np.asarray(p, dtype=float))
        best = np.full(len(p), -np.inf)
        for pid in self.S.piece_ids:
            r = self.positions[pid]
            val, _ = self.S.max_linear(pid, p[:, 1:] - r[1:], -(p[:, 0] - r[0]))
            best = np.maximum(best, val)
        return best

    def contains(self, p):
        v = self.support_value(p)
        out = v < -MEMBER_MARGIN
        return bool(out[0]) if np.ndim(p) == 1 else out

    def on_boundary(self, p):
        v = self.support_value(p)
        out = np.abs(v) <= BOUNDARY_BAND * np.maximum(1.0, np.max(np.abs(np.atleast_2d(p)), axis=1))
        return bool(out[0]) if np.ndim(p) == 1 else out

    def boundary_height(self, y):
        """Time coordinate of the boundary above the spatial point ``y`` (scene frame)."""
        single = np.ndim(y) == 1
        y = np.atleast_2d(np.asarray(y, dtype=float))
        best = np.full(len(y), -np.inf)
        for pid in self.S.piece_ids:
            r = self.positions[pid]
            val, _ = self.S.max_linear(pid, y - r[1:], r[0])
            best = np.maximum(best, val)
        return float(best[0]) if single else best

    def null_support_check(self):
        """Two non-proportional null support directions, or None."""
        found = []
        for pid in self.S.piece_ids:
            for d in np.r_[np.eye(self.n), -np.eye(self.n)]:
                _, u = self.S.max_linear(pid, d)
                found.append(u[0])
                if np.max(np.abs(found[0] - u[0])) > 1e-6:
                    return np.r_[1.0, found[0]], np.r_[1.0, u[0]]
        return None

    # -- cosmological time ---------------------------------------------------

    def ct_batch(self, P):
        """Cosmological time data for the rows of ``P``; rows outside the domain get T = nan."""
        P = np.atleast_2d(np.asarray(P, dtype=float))
        m = len(P)
        bestq = np.full(m, -np.inf)
        r = np.zeros_like(P)
        cell = np.full(m, -1)
        for ci, c in enumerate(self._cells):
            d0 = P - c.origin
            if c.kind == "vertex":
                s = np.zeros((m, 0))
            else:
                b = np.stack([inner(d0, e) for e in c.basis], axis=1)
                if c.kind == "edge":
                    s = np.clip(b, 0.0, c.shape)
                else:
                    s = project_polygon(b, c.shape)
            q = c.origin + s @ c.basis
            d = P - q
            val = -inner(d, d)
            ok = (val > 0) & (d[:, 0] > 0)
            slack = np.where(np.isfinite(bestq), 1e-12 * np.maximum(1.0, np.abs(bestq)), 0.0)
            better = ok & (val > bestq + slack)
            bestq = np.where(better, val, bestq)
            r[better] = q[better]
            cell[better] = ci
        T = np.where(np.isfinite(bestq), np.sqrt(np.maximum(bestq, 0.0)), np.nan)
        with np.errstate(invalid="ignore", divide="ignore"):
            N = (P - r) / T[:, None]
        return T, r, N, cell

    def ct_query(self, p, check_membership=True):
        p = np.asarray(p, dtype=float)
        if check_membership and not self.contains(p):
            raise DomainError(f"point {p.tolist()} is not in the domain")
        T, r, N, cell = self.ct_batch(p)
        if not np.isfinite(T[0]) or T[0] <= 0:
            raise DomainError(f"point {p.tolist()} is not in the domain")
        c = self._cells[cell[0]]
        return CtResult(float(T[0]), r[0], N[0], c.id, c.kind)

    def T(self, P):
        return self.ct_batch(P)[0]

    # -- level surfaces ------------------------------------------------------

    def rho_at(self, x, eps=EPS_LOC):
        loc = self.S.locate(np.asarray(x, dtype=float), eps)
        if loc.dim != self.n:
            raise PathError(f"rho is multivalued on {loc.kind} {loc.cell}")
        return self.positions[loc.cell]

    def level_point(self, a, x):
        """The point of the level surface T = a with normal ``x``."""
        if a <= 0:
            raise DomainError("level must be positive")
        return self.rho_at(x) + a * np.asarray(x, dtype=float)

    # -- transformations -----------------------------------------------------

    def translated(self, v):
        return RegularDomain(self.S, self.weights, self.base, self.origin + np.asarray(v, float), check=False)

    def scaled(self, s):
        if s <= 0:
            raise DomainError("scale factor must be positive")
        w = {k: s * x for k, x in self.weights.items()}
        return RegularDomain(self.S, w, self.base, s * self.origin, check=False)

    def holonomy_cocycle(self, presentation, x0=None):
        """Cocycle values rho(g x0) - g rho(x0) on the generators."""
        x0 = self.S.pieces[self.base].witness if x0 is None else np.asarray(x0, float)
        r0 = self.rho_at(x0)
        return [self.rho_at(g @ x0) - g @ r0 for g in presentation.generators]


def build_domain(S, weights, base=None, origin=None):
    """Validate the weight equations and build the regular domain."""
    try:
        return RegularDomain(S, weights, base, origin)
    except ComplexError as exc:
        raise DomainError(str(exc)) from exc


def transform_domain(D, mode, value):
    if mode == "translate":
        return D.translated(value)
    if mode == "scale":
        return D.scaled(value)
    raise DomainError(f"unknown transform {mode}")
