"""Simplicial geodesic stratifications of H^2 and H^3.

A stratification is stored by its walls (codimension-1 pieces, each carried
by the hyperplane ``<x, v> = 0`` of a unit spacelike normal ``v``), its top
pieces (intersections of half-spaces ``s <x, v> >= 0`` of bounding walls) and,
for ``n = 3``, its spine geodesics together with the cyclic star of pieces and
walls around each of them.

The ideal boundary of a top piece is an intersection of spherical caps of
``S^{n-1}`` (in the chart ``u -> (1, u)`` of null directions).  Linear
functionals are maximised over it exactly, by enumerating the unconstrained
maximiser, the maximiser on every cap boundary and the cap intersections.
"""

from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import linprog

from .lorentz import eta, inner, normalize_timelike, unit_spacelike

EPS_LOC = 1e-9
EPS_IDEAL = 1e-9
ANGLE_TOL = 1e-7
MARGIN = 1e-6


class ComplexError(ValueError):
    """Raised for structurally inconsistent stratifications."""

    def __init__(self, message, errors=None):
        super().__init__(message if not errors else message + ": " + "; ".join(errors))
        self.errors = list(errors or [])


@dataclass
class Wall:
    id: str
    normal: np.ndarray
    ideal_vertices: np.ndarray = None
    witness: np.ndarray = None


@dataclass
class TopPiece:
    id: str
    bounding: list
    witness: np.ndarray = None


@dataclass
class SpineGeodesic:
    id: str
    endpoints: np.ndarray
    star: list

    @property
    def pieces(self):
        return self.star[0::2]

    @property
    def walls(self):
        return self.star[1::2]


@dataclass
class Location:
    cell: str
    dim: int
    kind: str


@dataclass
class ValidationReport:
    errors: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    angle_sums: dict = field(default_factory=dict)
    separations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.errors

    def raise_if_failed(self):
        if self.errors:
            raise ComplexError("invalid stratification", self.errors)
        return self


def geodesic_endpoints(normal):
    """Ideal endpoints (time component 1) of the geodesic of H^2 orthogonal to ``normal``."""
    v0, vp = normal[0], np.asarray(normal[1:], dtype=float)
    q = vp @ vp
    c = v0 * vp / q
    r = np.sqrt(max(1.0 - v0 * v0 / q, 0.0))
    perp = np.array([-vp[1], vp[0]]) / np.sqrt(q)
    return np.array([np.r_[1.0, c + r * perp], np.r_[1.0, c - r * perp]])


def _circle(normal):
    """Boundary of the cap of ``normal`` on S^2 as (axis, centre, radius, basis)."""
    v0, vp = normal[0], np.asarray(normal[1:], dtype=float)
    q = np.sqrt(vp @ vp)
    axis = vp / q
    centre = (v0 / q) * axis
    radius = np.sqrt(max(1.0 - (v0 / q) ** 2, 0.0))
    return axis, centre, radius


def _circle_intersections(n1, n2):
    """Common points of the cap boundaries of two walls on S^2."""
    a1, a2 = np.asarray(n1[1:], float), np.asarray(n2[1:], float)
    b = np.array([n1[0], n2[0]])
    c = np.cross(a1, a2)
    cc = c @ c
    if cc < 1e-18:
        return np.zeros((0, 3))
    gram = np.array([[a1 @ a1, a1 @ a2], [a1 @ a2, a2 @ a2]])
    xy = np.linalg.solve(gram, b)
    base = xy[0] * a1 + xy[1] * a2
    rest = 1.0 - base @ base
    if rest < -1e-12:
        return np.zeros((0, 3))
    z = np.sqrt(max(rest, 0.0) / cc)
    return np.array([base + z * c, base - z * c])


class StratComplex:
    """Walls, top pieces and spines of a simplicial geodesic stratification."""

    def __init__(self, n, walls, pieces, spines=()):
        if n not in (2, 3):
            raise ComplexError(f"ambient dimension n must be 2 or 3, got {n}")
        self.n = n
        self.walls = {w.id: w for w in walls}
        self.pieces = {p.id: p for p in pieces}
        self.spines = {s.id: s for s in spines}
        if len(self.walls) != len(walls) or len(self.pieces) != len(pieces):
            raise ComplexError("duplicate wall or piece ids")
        self.wall_ids = list(self.walls)
        self.piece_ids = list(self.pieces)
        for w in self.walls.values():
            w.normal = np.asarray(w.normal, dtype=float)
            if w.normal.shape != (n + 1,):
                raise ComplexError(f"wall {w.id}: normal must have {n + 1} entries")
            if n == 2 and w.ideal_vertices is None:
                w.ideal_vertices = geodesic_endpoints(w.normal)
            if w.ideal_vertices is not None:
                w.ideal_vertices = np.atleast_2d(np.asarray(w.ideal_vertices, dtype=float))
        self._index_incidence()
        self._spine_geometry()
        self._piece_geometry()

    # -- combinatorics -------------------------------------------------------

    def _index_incidence(self):
        errors = []
        self.wall_sides = {w: {} for w in self.walls}
        for p in self.pieces.values():
            p.bounding = [(str(w), int(np.sign(s))) for w, s in p.bounding]
            for w, s in p.bounding:
                if w not in self.walls:
                    errors.append(f"piece {p.id} references unknown wall {w}")
                    continue
                if s in self.wall_sides[w]:
                    errors.append(f"wall {w} has two pieces on side {s:+d}")
                self.wall_sides[w][s] = p.id
        for w, sides in self.wall_sides.items():
            if set(sides) != {-1, 1}:
                errors.append(f"wall {w} must bound exactly two pieces with opposite signs (found {sorted(sides)})")
        self.structure_errors = errors
        self.adjacency = {p: [] for p in self.pieces}
        for w, sides in self.wall_sides.items():
            if set(sides) == {-1, 1}:
                self.adjacency[sides[-1]].append((w, sides[1]))
                self.adjacency[sides[1]].append((w, sides[-1]))
        self.wall_spines = {w: [] for w in self.walls}
        for s in self.spines.values():
            for w in s.walls:
                if w in self.wall_spines:
                    self.wall_spines[w].append(s.id)

    def other_piece(self, wall, piece):
        sides = self.wall_sides[wall]
        return sides[1] if sides.get(-1) == piece else sides[-1]

    def side_of(self, wall, piece):
        for s, p in self.wall_sides[wall].items():
            if p == piece:
                return s
        raise ComplexError(f"piece {piece} is not incident to wall {wall}")

    def oriented_normal(self, wall, from_piece):
        """Unit normal of ``wall`` pointing away from ``from_piece``."""
        return -self.side_of(wall, from_piece) * self.walls[wall].normal

    def dual_path(self, start, goal):
        """Sequence of (wall, piece) steps from ``start`` to ``goal`` in the dual graph."""
        prev = {start: None}
        queue = deque([start])
        while queue:
            p = queue.popleft()
            if p == goal:
                break
            for w, q in self.adjacency[p]:
                if q not in prev:
                    prev[q] = (p, w)
                    queue.append(q)
        if goal not in prev:
            raise ComplexError(f"pieces {start} and {goal} are not connected in the dual graph")
        steps = []
        p = goal
        while prev[p] is not None:
            q, w = prev[p]
            steps.append((w, p))
            p = q
        return steps[::-1]

    # -- spine geometry ------------------------------------------------------

    def _spine_geometry(self):
        self.spine_basis = {}
        self.spine_rays = {}
        self.dihedral = {}
        self.spine_errors = []
        if self.spines and self.n != 3:
            self.spine_errors.append("spines are only meaningful for n = 3")
            return
        g = eta(self.n + 1)
        for s in self.spines.values():
            s.endpoints = np.array([e / e[0] for e in np.asarray(s.endpoints, dtype=float)])
            s.star = [str(x) for x in s.star]
            if len(s.star) % 2 or len(s.star) < 4:
                self.spine_errors.append(f"spine {s.id}: star must alternate at least two pieces and two walls")
                continue
            ns = null_space(s.endpoints @ g)
            b1 = unit_spacelike(ns[:, 0])
            b2 = ns[:, 1] - inner(ns[:, 1], b1) * b1
            b2 = unit_spacelike(b2)
            self.spine_basis[s.id] = np.array([b1, b2])

    def _wall_ray(self, spine, wall, report=None):
        """Unit direction in the plane orthogonal to ``spine`` along which ``wall`` leaves it."""
        key = (spine.id, wall)
        if key in self.spine_rays:
            return self.spine_rays[key]
        b = self.spine_basis[spine.id]
        v = self.walls[wall].normal
        c = np.array([inner(v, b[0]), inner(v, b[1])])
        j = np.array([-c[1], c[0]]) @ b
        witness = self.walls[wall].witness
        if witness is not None:
            sign = 1.0 if inner(np.asarray(witness, float), j) > 0 else -1.0
        else:
            feasible = []
            for sign in (1.0, -1.0):
                d = sign * j
                ok = True
                for pid in self.wall_sides[wall].values():
                    for w, s in self.pieces[pid].bounding:
                        if w == wall or w not in spine.walls:
                            continue
                        if s * inner(d, self.walls[w].normal) < -1e-9:
                            ok = False
                feasible.append(ok)
            if feasible[0] == feasible[1]:
                msg = f"wall {wall}: extent near spine {spine.id} is ambiguous; give the wall a witness point"
                if report is not None:
                    report.append(msg)
                sign = 1.0
            else:
                sign = 1.0 if feasible[0] else -1.0
        ray = sign * j
        self.spine_rays[key] = ray
        return ray

    def dihedral_angles(self, spine_id):
        """Dihedral angle of every star piece along the spine, as (piece id, angle)."""
        if spine_id in self.dihedral:
            return self.dihedral[spine_id]
        s = self.spines[spine_id]
        b = self.spine_basis[spine_id]
        walls = s.walls
        theta = []
        for w in walls:
            r = self._wall_ray(s, w)
            theta.append(np.arctan2(inner(r, b[1]), inner(r, b[0])))
        k = len(walls)
        for direction in (1.0, -1.0):
            angles = []
            ok = True
            for i, pid in enumerate(s.pieces):
                t0, t1 = theta[i - 1], theta[i]
                gap = (direction * (t1 - t0)) % (2 * np.pi)
                if gap < 1e-12:
                    gap = 2 * np.pi if k == 1 else gap
                mid = t0 + direction * gap / 2
                d = np.cos(mid) * b[0] + np.sin(mid) * b[1]
                for w, sg in self.pieces[pid].bounding:
                    if w in walls and sg * inner(d, self.walls[w].normal) < -1e-9:
                        ok = False
                angles.append(gap)
            if ok and abs(sum(angles) - 2 * np.pi) < ANGLE_TOL:
                out = list(zip(s.pieces, angles))
                self.dihedral[spine_id] = out
                return out
        raise ComplexError(f"spine {spine_id}: star ordering is inconsistent with the wall geometry")

    def star_normals(self, spine_id):
        """Crossing normals u_i of P_i from Delta_i to Delta_{i+1}, in the spine-orthogonal basis."""
        s = self.spines[spine_id]
        b = self.spine_basis[spine_id]
        out = []
        for i, w in enumerate(s.walls):
            u = self.oriented_normal(w, s.pieces[i])
            out.append([inner(u, b[0]), inner(u, b[1])])
        return np.array(out)

    # -- piece geometry ------------------------------------------------------

    def _constraints(self, pid):
        b = self.pieces[pid].bounding
        if not b:
            return np.zeros((0, self.n + 1))
        return np.array([s * self.walls[w].normal for w, s in b])

    def _piece_geometry(self):
        self.piece_constraints = {pid: self._constraints(pid) for pid in self.pieces}
        self.piece_vertices = {}
        for pid in self.pieces:
            cons = self.piece_constraints[pid]
            cand = []
            if self.n == 2:
                for w, _ in self.pieces[pid].bounding:
                    cand.extend(self.walls[w].ideal_vertices)
            else:
                for i in range(len(cons)):
                    for j in range(i + 1, len(cons)):
                        for u in _circle_intersections(cons[i], cons[j]):
                            cand.append(np.r_[1.0, u])
            cand = np.array(cand).reshape(-1, self.n + 1)
            if len(cand) and len(cons):
                vals = cand @ (cons * np.r_[-1.0, np.ones(self.n)]).T
                cand = cand[np.all(vals >= -EPS_IDEAL, axis=1)]
            if len(cand):
                keep = [0]
                for i in range(1, len(cand)):
                    if np.min(np.max(np.abs(cand[keep] - cand[i]), axis=1)) > 1e-10:
                        keep.append(i)
                cand = cand[keep]
            self.piece_vertices[pid] = cand
        self.wall_regions = {}
        for w in self.walls:
            rays = []
            for sid in self.wall_spines[w]:
                if sid in self.spine_basis:
                    rays.append(self._wall_ray(self.spines[sid], w, self.spine_errors))
            self.wall_regions[w] = np.array(rays).reshape(-1, self.n + 1)
        self.piece_margins = {}
        for p in self.pieces.values():
            x, margin = self.interior_point(p.id)
            self.piece_margins[p.id] = margin
            if p.witness is None:
                p.witness = x
            else:
                w = np.asarray(p.witness, dtype=float)
                # keep supplied points bit-exact when already on the hyperboloid
                p.witness = w if abs(inner(w, w) + 1.0) < 1e-12 * (w @ w) else normalize_timelike(w)

    def interior_point(self, pid):
        """Deep interior point of a piece and its margin.

        The point is the Chebyshev centre of the piece in a Klein chart
        (restricted to a disc of radius 0.95).  The chart is centred at the
        origin first, then at the foot points of the bounding walls, so that
        pieces far from the origin are still found.
        """
        cons = self.piece_constraints[pid]
        n = self.n
        if len(cons) == 0:
            x = np.zeros(n + 1)
            x[0] = 1.0
            return x, 1.0
        centres = [np.eye(n + 1)[0]]
        for c in cons:
            centres.append((centres[0] + c[0] * c) / np.sqrt(1.0 + c[0] ** 2))
        best = (None, -np.inf)
        for c in centres:
            tc = _translation(c)
            local = cons @ _inverse(tc).T
            y, margin = self._klein_centre(local)
            if y is not None and margin > best[1]:
                best = (normalize_timelike(tc @ y), margin)
            if best[1] > 1e-3:
                break
        return best

    def _klein_centre(self, cons):
        n = self.n
        if n == 2:
            ang = np.linspace(0, 2 * np.pi, 48, endpoint=False)
            dirs = np.c_[np.cos(ang), np.sin(ang)]
        else:
            k = np.arange(400) + 0.5
            phi = np.arccos(1 - 2 * k / 400)
            th = np.pi * (3 - 5 ** 0.5) * k
            dirs = np.r_[np.c_[np.cos(th) * np.sin(phi), np.sin(th) * np.sin(phi), np.cos(phi)],
                         np.eye(3), -np.eye(3)]
        # variables (k_1..k_n, t): maximise t subject to s(-v0 + k.v') >= t |v'|
        a_ub = np.r_[np.c_[-cons[:, 1:], np.linalg.norm(cons[:, 1:], axis=1)], np.c_[dirs, np.zeros(len(dirs))]]
        b_ub = np.r_[-cons[:, 0], np.full(len(dirs), 0.95)]
        res = linprog(np.r_[np.zeros(n), -1.0], A_ub=a_ub, b_ub=b_ub,
                      bounds=[(-1, 1)] * n + [(None, 1.0)], method="highs")
        if not res.success:
            return None, -np.inf
        return normalize_timelike(np.r_[1.0, res.x[:n]]), float(res.x[-1])

    def max_linear(self, pid, w, offset=0.0):
        """Maximum over the ideal closure of piece ``pid`` of ``offset + w . u``.

        ``w`` has shape (n,) or (m, n) and ``offset`` broadcasts against it.
        Returns (values, maximisers).
        """
        w = np.atleast_2d(np.asarray(w, dtype=float))
        offset = np.broadcast_to(np.asarray(offset, dtype=float), (w.shape[0],))
        cons = self.piece_constraints[pid]
        sg = np.r_[-1.0, np.ones(self.n)]
        lin = cons * sg
        best = np.full(w.shape[0], -np.inf)
        arg = np.zeros((w.shape[0], self.n))

        def consider(u, val):
            nonlocal best
            if len(lin):
                feas = np.all(np.c_[np.ones(len(u)), u] @ lin.T >= -EPS_IDEAL, axis=1)
                val = np.where(feas, val, -np.inf)
            better = val > best
            best = np.where(better, val, best)
            arg[better] = u[better]

        wn = np.linalg.norm(w, axis=1)
        safe = np.where(wn > 0, wn, 1.0)
        u0 = w / safe[:, None]
        u0[wn == 0] = 0.0
        u0[wn == 0, 0] = 1.0
        consider(u0, wn)
        if self.n == 3:
            for c in cons:
                axis, centre, radius = _circle(c)
                wp = w - np.outer(w @ axis, axis)
                wpn = np.linalg.norm(wp, axis=1)
                perp = np.where(wpn[:, None] > 1e-300, wp / np.maximum(wpn, 1e-300)[:, None], 0.0)
                if np.any(wpn <= 1e-300):
                    e = np.eye(3)[np.argmin(np.abs(axis))]
                    e = e - (e @ axis) * axis
                    perp[wpn <= 1e-300] = e / np.linalg.norm(e)
                u = centre + radius * perp
                consider(u, u @ w.T if False else np.einsum("ij,ij->i", u, w))
        verts = self.piece_vertices[pid]
        if len(verts):
            vals = w @ verts[:, 1:].T
            j = np.argmax(vals, axis=1)
            vbest = vals[np.arange(len(j)), j]
            better = vbest > best
            best = np.where(better, vbest, best)
            arg[better] = verts[j[better], 1:]
        if not np.all(np.isfinite(best)):
            raise ComplexError(f"piece {pid} has an empty ideal region")
        return best + offset, arg

    # -- point location ------------------------------------------------------

    def _normal_array(self):
        if getattr(self, "_normals", None) is None:
            self._normals = np.array([self.walls[w].normal for w in self.wall_ids]).reshape(-1, self.n + 1)
        return self._normals

    def stacked_constraints(self):
        """All piece constraints as one array, with the index (into piece_ids) owning each row."""
        if getattr(self, "_stacked", None) is None:
            rows = [self.piece_constraints[pid] for pid in self.piece_ids]
            owner = np.concatenate([np.full(len(c), i) for i, c in enumerate(rows)]).astype(int)
            cons = np.concatenate([c for c in rows if len(c)]) if len(owner) else np.zeros((0, self.n + 1))
            self._stacked = (cons, owner)
        return self._stacked

    def wall_values(self, x):
        normals = self._normal_array()
        return inner(np.asarray(x, float)[None, :], normals) if len(normals) else np.zeros(0)

    def spine_distance(self, sid, x):
        b = self.spine_basis[sid]
        return float(np.hypot(inner(x, b[0]), inner(x, b[1])))

    def on_wall(self, wid, x, eps=EPS_LOC):
        if abs(inner(x, self.walls[wid].normal)) > eps:
            return False
        rays = self.wall_regions.get(wid)
        return rays is None or len(rays) == 0 or bool(np.all(inner(x[None, :], rays) >= -eps))

    def piece_margin(self, pid, x):
        cons = self.piece_constraints[pid]
        if len(cons) == 0:
            return np.inf
        return float(np.min(inner(np.asarray(x, float)[None, :], cons)))

    def locate(self, x, eps=EPS_LOC):
        """Minimum-dimensional cell containing ``x``; dead-band hits go to the lower cell."""
        x = np.asarray(x, dtype=float)
        for sid in self.spines:
            if sid in self.spine_basis and self.spine_distance(sid, x) <= eps:
                return Location(sid, 1, "spine")
        vals = self.wall_values(x)
        for k in np.flatnonzero(np.abs(vals) <= eps):
            if self.on_wall(self.wall_ids[k], x, eps):
                return Location(self.wall_ids[k], self.n - 1, "wall")
        cons, owner = self.stacked_constraints()
        margin = np.full(len(self.piece_ids), np.inf)
        if len(cons):
            np.minimum.at(margin, owner, inner(x[None, :], cons))
        return Location(self.piece_ids[int(np.argmax(margin))], self.n, "piece")

    def top_piece(self, x, eps=EPS_LOC):
        """Top piece containing ``x``; raises if ``x`` sits on the codimension-1 stratum."""
        loc = self.locate(x, eps)
        if loc.dim != self.n:
            raise ComplexError(f"point lies on {loc.kind} {loc.cell}")
        return loc.cell

    # -- validation ----------------------------------------------------------

    def validate(self, sample_pairs=32, seed=0):
        """Check every structural invariant; see :class:`ValidationReport`."""
        rep = ValidationReport()
        rep.errors.extend(self.structure_errors)
        rep.errors.extend(self.spine_errors)
        for w in self.walls.values():
            q = inner(w.normal, w.normal)
            if abs(q - 1.0) > 1e-9:
                rep.errors.append(f"wall {w.id}: normal is not unit spacelike (<v,v>={q:.3g})")
            if w.ideal_vertices is not None and len(w.ideal_vertices):
                iv = w.ideal_vertices
                if np.max(np.abs(inner(iv, w.normal[None, :]))) > 1e-8:
                    rep.errors.append(f"wall {w.id}: ideal vertex off the carrier hyperplane")
                if np.max(np.abs(inner(iv, iv))) > 1e-8:
                    rep.errors.append(f"wall {w.id}: ideal vertex is not null")
            if self.n == 3 and (w.ideal_vertices is None or len(w.ideal_vertices) < 2) and not self.wall_spines[w.id]:
                rep.warnings.append(f"wall {w.id}: no ideal vertices recorded")
        for p in self.pieces.values():
            if self.piece_margins[p.id] <= 1e-9 or p.witness is None:
                rep.errors.append(f"piece {p.id} is empty")
            elif self.piece_margin(p.id, p.witness) <= 0:
                rep.errors.append(f"piece {p.id}: witness is not interior")
        for s in self.spines.values():
            if s.id not in self.spine_basis:
                continue
            for w in s.walls:
                if w not in self.walls:
                    rep.errors.append(f"spine {s.id}: unknown wall {w}")
                    continue
                if np.max(np.abs(inner(s.endpoints, self.walls[w].normal[None, :]))) > 1e-8:
                    rep.errors.append(f"spine {s.id}: wall {w} does not contain the geodesic")
            k = len(s.walls)
            for i in range(k):
                a, w, b = s.pieces[i], s.walls[i], s.pieces[(i + 1) % k]
                if w in self.wall_sides and set(self.wall_sides[w].values()) != {a, b}:
                    rep.errors.append(f"spine {s.id}: wall {w} does not separate {a} and {b}")
            if rep.errors:
                continue
            try:
                angles = self.dihedral_angles(s.id)
                rep.angle_sums[s.id] = float(sum(a for _, a in angles))
            except ComplexError as exc:
                rep.errors.append(str(exc))
        if not rep.errors:
            rng = np.random.default_rng(seed)
            ids = self.piece_ids
            pairs = [(a, b) for i, a in enumerate(ids) for b in ids[i + 1:]]
            if len(pairs) > sample_pairs:
                pick = rng.choice(len(pairs), sample_pairs, replace=False)
                pairs = [pairs[i] for i in pick]
            for a, b in pairs:
                w = self.separating_wall(a, b)
                if w is None:
                    rep.errors.append(f"no separating wall between {a} and {b}")
                else:
                    rep.separations.append((a, b, w))
        return rep

    def separating_wall(self, a, b, tol=1e-9):
        """A wall on the dual path whose carrier puts ``a`` and ``b`` on opposite sides."""
        for w, _ in self.dual_path(a, b):
            v = self.walls[w].normal
            for sign in (1.0, -1.0):
                hi_a, _ = self.max_linear(a, sign * v[1:], -sign * v[0])
                lo_b, _ = self.max_linear(b, -sign * v[1:], sign * v[0])
                if hi_a[0] <= tol and lo_b[0] <= tol:
                    return w
        return None


def _translation(c):
    """Lorentz transformation taking the origin to the hyperboloid point ``c``."""
    c0, cp = c[0], c[1:]
    m = np.empty((len(c), len(c)))
    m[0, 0] = c0
    m[0, 1:] = cp
    m[1:, 0] = cp
    m[1:, 1:] = np.eye(len(cp)) + np.outer(cp, cp) / (1.0 + c0)
    return m


def _inverse(m):
    g = eta(len(m))
    return g @ m.T @ g


# -- weights ---------------------------------------------------------------

def weight_residuals(S, a):
    """Per spine, the balance vector sum a(P_i) u_i in the spine-orthogonal basis."""
    out = {}
    for sid, s in S.spines.items():
        u = S.star_normals(sid)
        wts = np.array([a[w] for w in s.walls])
        out[sid] = wts @ u
    return out


def weight_matrix(S):
    """The 2e x f matrix of the balance equations (columns ordered as ``S.wall_ids``)."""
    col = {w: i for i, w in enumerate(S.wall_ids)}
    rows = []
    for sid, s in S.spines.items():
        u = S.star_normals(sid)
        block = np.zeros((2, len(col)))
        for i, w in enumerate(s.walls):
            block[:, col[w]] += u[i]
        rows.append(block)
    if not rows:
        return np.zeros((0, len(col)))
    return np.vstack(rows)


@dataclass
class WeightSolution:
    basis: np.ndarray
    witness: dict = None
    cone_dim: int = 0
    lower_bound: int = 0
    certificate: np.ndarray = None

    @property
    def feasible(self):
        return self.witness is not None


def solve_weights(S, margin=MARGIN):
    """Nullspace of the balance system and a strictly positive solution, if one exists.

    When no positive solution exists the returned ``certificate`` is a vector
    ``y`` with ``A^T y >= 0`` and ``A^T y != 0`` (Stiemke alternative).
    """
    A = weight_matrix(S)
    f = len(S.wall_ids)
    e = len(S.spines)
    basis = null_space(A) if A.shape[0] else np.eye(f)
    lower = f - 2 * e
    if basis.shape[1] == 0:
        return WeightSolution(basis, None, 0, lower, _stiemke(A))
    # maximise t subject to A a = 0, a_i >= t, a_i <= 1
    c = np.r_[np.zeros(f), -1.0]
    a_eq = np.c_[A, np.zeros(A.shape[0])] if A.shape[0] else None
    b_eq = np.zeros(A.shape[0]) if A.shape[0] else None
    a_ub = np.c_[-np.eye(f), np.ones(f)]
    res = linprog(c, A_ub=a_ub, b_ub=np.zeros(f), A_eq=a_eq, b_eq=b_eq,
                  bounds=[(0, 1)] * f + [(None, 1)], method="highs")
    if not res.success or res.x[-1] < margin:
        return WeightSolution(basis, None, 0, lower, _stiemke(A))
    a = basis @ (basis.T @ res.x[:f])
    a = a / np.max(a)
    return WeightSolution(basis, dict(zip(S.wall_ids, a)), basis.shape[1], lower)


def _stiemke(A):
    m, f = A.shape
    if m == 0:
        return None
    res = linprog(np.zeros(m), A_ub=-A.T, b_ub=np.zeros(f), A_eq=(np.ones(f) @ A.T)[None, :],
                  b_eq=[1.0], bounds=[(None, None)] * m, method="highs")
    return res.x if res.success else None
