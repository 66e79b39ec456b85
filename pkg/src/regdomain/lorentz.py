"""Minkowski bilinear algebra and the hyperboloid model of hyperbolic space.

Vectors are plain ``numpy`` arrays of length ``n + 1`` with index 0 the time
coordinate.  The Lorentz form is ``<v, w> = -v0 w0 + v1 w1 + ... + vn wn``.
Points of hyperbolic space are future unit timelike vectors, ideal points are
null vectors normalised to ``v0 = 1``.
"""

from dataclasses import dataclass, field

import numpy as np

EPS_HYP = 1e-9
EPS_GROUP = 1e-9
EPS_LOX = 1e-9


class LorentzError(ValueError):
    """Raised on malformed Minkowski data (dimension, membership)."""


def eta(dim):
    """Gram matrix diag(-1, 1, ..., 1) of the Lorentz form on R^dim."""
    g = np.eye(dim)
    g[0, 0] = -1.0
    return g


def inner(u, v):
    """Lorentz form, broadcasting over leading axes."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape[-1] != v.shape[-1]:
        raise LorentzError(f"dimension mismatch: {u.shape[-1]} vs {v.shape[-1]}")
    return np.sum(u[..., 1:] * v[..., 1:], axis=-1) - u[..., 0] * v[..., 0]


def norm2(v):
    return inner(v, v)


def classify_vector(v, eps=EPS_HYP):
    """Return ``(kind, orientation)``.

    kind is one of ``spacelike``, ``timelike``, ``null``, ``zero``;
    orientation is ``future``/``past`` for causal vectors and ``n/a`` otherwise.
    """
    v = np.asarray(v, dtype=float)
    if np.max(np.abs(v)) <= eps:
        return "zero", "n/a"
    q = inner(v, v)
    scale = max(1.0, float(np.dot(v, v)))
    if q > eps * scale:
        return "spacelike", "n/a"
    kind = "timelike" if q < -eps * scale else "null"
    return kind, ("future" if v[0] > 0 else "past")


def hyperboloid_point(v, eps=EPS_HYP):
    """Validate ``v`` as a point of H^n and return it as a float array."""
    v = np.asarray(v, dtype=float)
    if abs(inner(v, v) + 1.0) > eps * max(1.0, v[0] ** 2) or v[0] <= 0:
        raise LorentzError(f"not on the hyperboloid: {v}")
    return v


def normalize_timelike(v):
    """Rescale a future timelike vector onto the hyperboloid."""
    v = np.asarray(v, dtype=float)
    q = -inner(v, v)
    if np.any(q <= 0):
        raise LorentzError("vector is not timelike")
    return v / np.sqrt(q)[..., None] if v.ndim > 1 else v / np.sqrt(q)


def null_direction(v, eps=EPS_HYP):
    """Validate a null vector and renormalise it to time coordinate 1."""
    v = np.asarray(v, dtype=float)
    if v[0] == 0:
        raise LorentzError("null direction with zero time component")
    v = v / v[0]
    if abs(inner(v, v)) > eps * 10:
        raise LorentzError(f"not a null vector: {v}")
    return v


def unit_spacelike(v):
    """Rescale a spacelike vector to Lorentz norm 1."""
    v = np.asarray(v, dtype=float)
    q = inner(v, v)
    if q <= 0:
        raise LorentzError(f"vector is not spacelike: {v}")
    return v / np.sqrt(q)


def hyp_distance(x, y):
    """Hyperbolic distance arccosh(-<x, y>), clamped against round-off."""
    c = -inner(x, y)
    return np.arccosh(np.maximum(c, 1.0))


def exp_map(x, u):
    """Exponential map of H^n at ``x`` applied to tangent vector ``u``."""
    t = np.sqrt(max(inner(u, u), 0.0))
    if t < 1e-300:
        return np.array(x, dtype=float)
    return np.cosh(t) * x + np.sinh(t) * (u / t)


def tangent_basis(x):
    """Lorentz-orthonormal basis of the tangent space of H^n at ``x``."""
    x = np.asarray(x, dtype=float)
    dim = x.size
    basis = []
    for k in range(1, dim):
        e = np.zeros(dim)
        e[k] = 1.0
        e = e + inner(e, x) * x
        for b in basis:
            e = e - inner(e, b) * b
        basis.append(e / np.sqrt(inner(e, e)))
    return np.array(basis)


def origin(n):
    e = np.zeros(n + 1)
    e[0] = 1.0
    return e


def polar_point(radius, angle):
    """Point of H^2 at hyperbolic distance ``radius`` from e0 in direction ``angle``."""
    return np.array([np.cosh(radius), np.sinh(radius) * np.cos(angle), np.sinh(radius) * np.sin(angle)])


def random_hyperboloid_points(rng, n, count, max_radius=2.0):
    """Points at hyperbolic distance at most ``max_radius`` from the origin."""
    dirs = rng.normal(size=(count, n))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    r = max_radius * rng.uniform(size=count) ** (1.0 / n)
    pts = np.empty((count, n + 1))
    pts[:, 0] = np.cosh(r)
    pts[:, 1:] = np.sinh(r)[:, None] * dirs
    return pts


def lorentz_cross(a, b):
    """Vector Lorentz-orthogonal to ``a`` and ``b`` in R^{2,1}."""
    c = np.cross(a, b)
    return np.array([-c[0], c[1], c[2]])


# -- linear isometries -------------------------------------------------------

def boost(t, dim=3, axis=1):
    """Pure boost of rapidity ``t`` in the (e0, e_axis) plane."""
    m = np.eye(dim)
    m[0, 0] = m[axis, axis] = np.cosh(t)
    m[0, axis] = m[axis, 0] = np.sinh(t)
    return m


def rotation(theta, dim=3, plane=(1, 2)):
    """Spatial rotation by ``theta`` (counter-clockwise) in the given coordinate plane."""
    i, j = plane
    m = np.eye(dim)
    c, s = np.cos(theta), np.sin(theta)
    m[i, i] = m[j, j] = c
    m[i, j] = -s
    m[j, i] = s
    return m


def lorentz_matrix(m, eps=EPS_GROUP):
    """Validate membership in SO+(n,1) and return ``m`` as a float array."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise LorentzError("Lorentz matrix must be square")
    g = eta(m.shape[0])
    resid = np.max(np.abs(m.T @ g @ m - g))
    scale = max(1.0, np.max(np.abs(m)) ** 2)
    if resid > eps * scale:
        raise LorentzError(f"not a Lorentz matrix (residual {resid:.3e})")
    if m[0, 0] <= 0:
        raise LorentzError("matrix reverses time orientation")
    if np.linalg.det(m) <= 0:
        raise LorentzError("matrix reverses spatial orientation")
    return m


def lorentz_inverse(m):
    """Inverse of a Lorentz matrix, eta m^T eta (exact up to rounding)."""
    g = eta(m.shape[0])
    return g @ m.T @ g


@dataclass
class IsometryClass:
    """Outcome of :func:`classify_isometry`."""

    kind: str
    eigenvalues: np.ndarray
    lam: float = 1.0
    attracting: np.ndarray = None
    repelling: np.ndarray = None
    fixed: np.ndarray = None
    residuals: dict = field(default_factory=dict)


def _real_eigvec(m, lam):
    u, s, vt = np.linalg.svd(m - lam * np.eye(m.shape[0]))
    return vt[-1], s[-1]


def classify_isometry(g, log_tol=1e-4, ker_tol=1e-8):
    """Elliptic / parabolic / hyperbolic classification of ``g`` in SO+(n,1).

    Hyperbolic elements carry ``lam > 1`` and their attracting and repelling
    null eigendirections (axis endpoints, normalised to time component 1).
    Residuals of every eigen-equation used are recorded.  A defective
    (parabolic) spectrum perturbs eigenvalues by about eps**(1/3), so
    expansion below ``log_tol`` is not read as hyperbolic.
    """
    g = lorentz_matrix(g)
    ev = np.linalg.eigvals(g)
    mods = np.abs(ev)
    top = float(np.max(mods))
    if np.log(top) > log_tol:
        lam = float(np.max(ev.real))
        vp, rp = _real_eigvec(g, lam)
        vm, rm = _real_eigvec(g, 1.0 / lam)
        vp = vp / vp[0]
        vm = vm / vm[0]
        res = {"attracting": float(rp), "repelling": float(rm),
               "null_attracting": float(abs(inner(vp, vp))), "null_repelling": float(abs(inner(vm, vm)))}
        return IsometryClass("hyperbolic", ev, lam, vp, vm, residuals=res)
    dim = g.shape[0]
    u, s, vt = np.linalg.svd(g - np.eye(dim))
    ker = vt[s <= ker_tol * max(1.0, s[0])]
    res = {"max_modulus_log": float(np.log(top)), "kernel_dim": int(len(ker))}
    if len(ker) == 0:
        # no fixed vector and no expansion: ill-conditioned, report as parabolic-like
        res["warning"] = "no eigenvalue 1 detected within tolerance"
        return IsometryClass("parabolic", ev, residuals=res)
    gram = ker @ eta(dim) @ ker.T
    w, vecs = np.linalg.eigh(gram)
    if w[0] < -ker_tol:
        fixed = vecs[:, 0] @ ker
        fixed = normalize_timelike(fixed if fixed[0] > 0 else -fixed)
        res["fixed"] = float(np.max(np.abs(g @ fixed - fixed)))
        return IsometryClass("elliptic", ev, fixed=fixed, residuals=res)
    # fixed subspace is degenerate: contains a null line and no timelike vector
    k = int(np.argmin(np.abs(w)))
    nv = vecs[:, k] @ ker
    nv = nv / nv[0]
    res["fixed_null"] = float(np.max(np.abs(g @ nv - nv)))
    return IsometryClass("parabolic", ev, fixed=nv, residuals=res)


def translation_length_hyp(g):
    """Translation length log(lambda) of a hyperbolic isometry."""
    c = classify_isometry(g)
    if c.kind != "hyperbolic":
        raise LorentzError(f"translation length needs a hyperbolic element, got {c.kind}")
    return float(np.log(c.lam))


def axis_point(g):
    """Point of H^n on the axis of hyperbolic ``g`` (midpoint of its null endpoints)."""
    c = classify_isometry(g)
    if c.kind != "hyperbolic":
        raise LorentzError("axis requested for a non-hyperbolic element")
    return normalize_timelike(c.attracting + c.repelling)


def loxodromic_fixed_point(g, t, eps=EPS_LOX):
    """Affine fixed point of ``x -> g x + t`` in dimension 4.

    Returns ``(z, cond)`` where ``z`` solves ``(g - I) z = -t``, or
    ``(None, cond)`` when ``|det(g - I)|`` is below ``eps``.
    """
    g = lorentz_matrix(g)
    t = np.asarray(t, dtype=float)
    if g.shape != (4, 4) or t.shape != (4,):
        raise LorentzError("loxodromic fixed points are defined in dimension 4")
    a = g - np.eye(4)
    d = np.linalg.det(a)
    cond = float(np.linalg.cond(a)) if abs(d) > 0 else float("inf")
    if abs(d) < eps:
        return None, cond
    z = np.linalg.solve(a, -t)
    return z, cond
