"""Simplicial transverse measures: wall atoms, path functionals and the map rho.

Weights are a mapping from wall id to a positive real.  Crossing a wall ``P``
out of the piece ``D`` contributes the atom ``a(P) v`` with ``v`` the unit
normal of ``P`` pointing away from ``D``.  Crossings through a spine add the
atoms of the walls swept between the entry and exit sectors.
"""

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .lorentz import inner, normalize_timelike
from .stratification import EPS_LOC, ComplexError

SEG_EPS = 1e-12


class PathError(ValueError):
    """Raised for non-admissible paths (vertex on the stratum, unresolvable crossing)."""


@dataclass
class PathMeasure:
    atoms: list = field(default_factory=list)
    total: np.ndarray = None

    def __post_init__(self):
        if self.total is None:
            self.total = np.sum([v for _, _, v in self.atoms], axis=0) if self.atoms else None


def wall_atom(S, a, wall, from_piece):
    """``a(P) v`` with ``v`` the normal of ``wall`` oriented away from ``from_piece``."""
    if wall not in S.walls:
        raise ComplexError(f"unknown wall {wall}")
    if from_piece not in S.wall_sides[wall].values():
        raise ComplexError(f"wall {wall} does not bound piece {from_piece}")
    return a[wall] * S.oriented_normal(wall, from_piece)


def sector_sum(S, a, spine, start, end):
    """Sum of atoms met going around ``spine`` from sector ``start`` to sector ``end``."""
    s = S.spines[spine]
    pieces = s.pieces
    i, j = pieces.index(start), pieces.index(end)
    k = len(pieces)
    total = np.zeros(S.n + 1)
    m = i
    while m != j:
        total += wall_atom(S, a, s.walls[m], pieces[m])
        m = (m + 1) % k
    return total


def _piece_intervals(S, x, y):
    """For every piece, the parameters s in [0, 1] with (1-s) x + s y inside the closed piece."""
    cons, owner = S.stacked_constraints()
    k = len(S.piece_ids)
    lo, hi = np.zeros(k), np.ones(k)
    if len(cons) == 0:
        return lo, hi
    al = inner(x[None, :], cons)
    be = inner(y[None, :], cons)
    d = be - al
    flat = np.abs(d) < 1e-300
    with np.errstate(divide="ignore", invalid="ignore"):
        root = -al / d
    lo_c = np.where(flat, np.where(al < 0, 1.0, 0.0), np.where(d > 0, root, 0.0))
    hi_c = np.where(flat, np.where(al < 0, 0.0, 1.0), np.where(d < 0, root, 1.0))
    np.maximum.at(lo, owner, lo_c)
    np.minimum.at(hi, owner, hi_c)
    return lo, hi


def _crossing(S, a, A, B, z, eps):
    """Atom for passing from piece A to piece B at the point z."""
    shared = [w for w, q in S.adjacency[A] if q == B]
    for w in shared:
        if S.on_wall(w, z, max(eps, 1e-9)):
            return w, wall_atom(S, a, w, A)
    for sid, s in S.spines.items():
        if A in s.pieces and B in s.pieces and S.spine_distance(sid, z) <= max(eps, 1e-9) * 10:
            return sid, sector_sum(S, a, sid, A, B)
    raise PathError(f"crossing from {A} to {B} is not resolvable to a wall or spine; perturb the path")


def path_measure(S, a, vertices, eps=EPS_LOC):
    """Transverse measure of the geodesic polyline through ``vertices``.

    Atom parameters are ``i + s`` on segment ``i`` with ``s`` the projective
    parameter of the crossing point ``(1-s) x_i + s x_{i+1}``.
    """
    pts = [np.asarray(v, dtype=float) for v in vertices]
    for v in pts:
        if S.locate(v, eps).dim != S.n:
            raise PathError("polyline vertex lies on the codimension-1 stratum")
    atoms = []
    for i in range(len(pts) - 1):
        x, y = pts[i], pts[i + 1]
        lo, hi = _piece_intervals(S, x, y)
        keep = np.flatnonzero(hi - lo > SEG_EPS)
        spans = sorted((lo[i], hi[i], S.piece_ids[i]) for i in keep)
        if not spans:
            raise PathError("segment meets no top piece")
        for (lo0, hi0, A), (lo1, hi1, B) in zip(spans, spans[1:]):
            if abs(hi0 - lo1) > 1e-9:
                raise PathError("segment runs inside the stratum")
            s = 0.5 * (hi0 + lo1)
            z = normalize_timelike((1 - s) * x + s * y)
            cell, vec = _crossing(S, a, A, B, z, eps)
            atoms.append((i + s, cell, vec))
    total = np.sum([v for _, _, v in atoms], axis=0) if atoms else np.zeros(S.n + 1)
    return PathMeasure(atoms, total)


def piece_positions(S, a, base, origin=None):
    """rho on every top piece, by breadth-first search over the dual graph.

    Returns ``(positions, cycle_residual)`` where the residual is the largest
    mismatch of an atom on a non-tree dual edge.
    """
    start = np.zeros(S.n + 1) if origin is None else np.asarray(origin, dtype=float)
    pos = {base: start}
    queue = deque([base])
    while queue:
        p = queue.popleft()
        for w, q in S.adjacency[p]:
            if q not in pos:
                pos[q] = pos[p] + wall_atom(S, a, w, p)
                queue.append(q)
    missing = set(S.piece_ids) - set(pos)
    if missing:
        raise ComplexError(f"dual graph is disconnected: unreachable pieces {sorted(missing)}")
    worst = 0.0
    for w, sides in S.wall_sides.items():
        A, B = sides[-1], sides[1]
        worst = max(worst, float(np.max(np.abs(pos[B] - pos[A] - wall_atom(S, a, w, A)))))
    return pos, worst


def rho(S, a, x, base, eps=EPS_LOC):
    """rho(x): the measure of a path from the base piece to ``x``; refused on the stratum."""
    loc = S.locate(np.asarray(x, dtype=float), eps)
    if loc.dim != S.n:
        raise PathError(f"rho is multivalued on {loc.kind} {loc.cell}")
    total = np.zeros(S.n + 1)
    cur = base
    for w, q in S.dual_path(base, loc.cell):
        total = total + wall_atom(S, a, w, cur)
        cur = q
    return total
