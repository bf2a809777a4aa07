"""Minkowski algebra in a fixed orthonormal basis, signature (-,+,+,+).

Vectors and events are plain float arrays of shape (..., 4); events are affine
points (event - event is a vector, event + vector is an event), the distinction
is by convention only.  Linear maps are (4, 4) matrices acting on components.
Units have c = 1.

An *absolute velocity* is a futurelike unit vector u (u.u = -1, u[0] > 0); a
*unit spacelike* vector n satisfies n.n = 1.  Constructors that require these
validate rather than renormalize: silent renormalization hides modeling errors.

All functions are pure and inputs are never mutated, so everything here is safe
for concurrent use.
"""

from __future__ import annotations

import numpy as np

METRIC = np.diag([-1.0, 1.0, 1.0, 1.0])
METRIC.setflags(write=False)

VELOCITY_TOL = 1e-12

E_T = np.array([1.0, 0.0, 0.0, 0.0])
E_X = np.array([0.0, 1.0, 0.0, 0.0])
E_Y = np.array([0.0, 0.0, 1.0, 0.0])
E_Z = np.array([0.0, 0.0, 0.0, 1.0])
for _e in (E_T, E_X, E_Y, E_Z):
    _e.setflags(write=False)


def lorentz_product(v, w):
    """g(v, w) = -v0*w0 + v1*w1 + v2*w2 + v3*w3, broadcasting over (..., 4)."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    return (v[..., 1:] * w[..., 1:]).sum(axis=-1) - v[..., 0] * w[..., 0]


def lower(v):
    """Components of the metric-lowered covector g.v (i.e. flip the sign of v0)."""
    v = np.asarray(v, dtype=float)
    out = v.copy()
    out[..., 0] = -out[..., 0]
    return out


def tensor(a, b):
    """Tensor product a (x) b as a linear map: (a (x) b).x = a * (b.x).

    The Lorentz product sits inside, so the matrix is outer(a, g.b).
    """
    return np.outer(np.asarray(a, dtype=float), lower(b))


def adjoint(L):
    """Adjoint L* with (L*.x).y = x.(L.y) for the Lorentz product: g L^T g."""
    return METRIC @ np.asarray(L, dtype=float).T @ METRIC


def is_velocity(u, tol=VELOCITY_TOL):
    u = np.asarray(u, dtype=float)
    return bool(abs(lorentz_product(u, u) + 1.0) <= tol and u[0] > 0.0)


def check_velocity(u, tol=VELOCITY_TOL, name="u"):
    """Validate an absolute velocity; returns it as a float array."""
    u = np.asarray(u, dtype=float)
    if u.shape != (4,):
        raise ValueError(f"{name} must have shape (4,), got {u.shape}")
    uu = lorentz_product(u, u)
    if abs(uu + 1.0) > tol:
        raise ValueError(f"{name} is not an absolute velocity: {name}.{name} = {uu!r}")
    if u[0] <= 0.0:
        raise ValueError(f"{name} is not futurelike: {name}[0] = {u[0]!r}")
    return u


def check_unit_spacelike(n, u=None, tol=VELOCITY_TOL, name="n"):
    """Validate n.n = 1 and, when u is given, u.n = 0."""
    n = np.asarray(n, dtype=float)
    if n.shape != (4,):
        raise ValueError(f"{name} must have shape (4,), got {n.shape}")
    nn = lorentz_product(n, n)
    if abs(nn - 1.0) > tol:
        raise ValueError(f"{name} is not a unit spacelike vector: {name}.{name} = {nn!r}")
    if u is not None:
        un = lorentz_product(u, n)
        if abs(un) > tol:
            raise ValueError(f"{name} is not orthogonal to the velocity: u.{name} = {un!r}")
    return n


def boost(u, u2):
    """Rotation-free Lorentz boost sending the absolute velocity u to u2.

    1 + (u2+u)(x)(u2+u)/(1 - u2.u) - 2 u2(x)u.  The denominator 1 - u2.u >= 2
    for futurelike unit vectors, so there is no degenerate case.
    """
    u = check_velocity(u, name="u")
    u2 = check_velocity(u2, name="u2")
    w = u + u2
    return np.eye(4) + tensor(w, w) / (1.0 - lorentz_product(u2, u)) - 2.0 * tensor(u2, u)


def spatial_projection(u):
    """Projection 1 + u(x)u onto the 3-space of u-spacelike vectors."""
    u = check_velocity(u, name="u")
    return np.eye(4) + tensor(u, u)


def plane_projection(u, n):
    """Projection 1 + u(x)u - n(x)n onto the 2-plane orthogonal to u and n."""
    u = check_velocity(u, name="u")
    n = check_unit_spacelike(n, u, name="n")
    return np.eye(4) + tensor(u, u) - tensor(n, n)


def velocity_from_rapidity(chi, axis=(1.0, 0.0, 0.0)):
    """Absolute velocity with rapidity chi along a spatial axis."""
    d = np.asarray(axis, dtype=float)
    d = d / np.linalg.norm(d)
    return np.concatenate(([np.cosh(chi)], np.sinh(chi) * d))


def orthonormal_spatial_triad(u, axis=None):
    """Unit spacelike vectors (e1, e2, e3), mutually orthogonal and orthogonal to u.

    When axis is given (a unit spacelike vector orthogonal to u), e1 = axis and
    the other two complete it; the construction is deterministic.
    """
    u = check_velocity(u, name="u")
    P = spatial_projection(u)
    basis = []
    seeds = [] if axis is None else [np.asarray(axis, dtype=float)]
    seeds += [E_X, E_Y, E_Z, E_T]
    for seed in seeds:
        v = P @ seed
        for e in basis:
            v = v - lorentz_product(e, v) * e
        norm2 = lorentz_product(v, v)
        if norm2 > 1e-12:
            basis.append(v / np.sqrt(norm2))
        if len(basis) == 3:
            break
    if axis is not None:
        basis[0] = check_unit_spacelike(axis, u, name="axis")
    return tuple(basis)


def random_velocity(rng):
    """Random absolute velocity: rapidity uniform in [0, 2], direction uniform on S^2.

    Moderate rapidities avoid catastrophic cancellation at extreme boosts.
    """
    chi = rng.uniform(0.0, 2.0)
    d = rng.normal(size=3)
    d /= np.linalg.norm(d)
    return velocity_from_rapidity(chi, d)


def random_unit_spacelike(rng, u):
    """Random unit vector in the 3-space orthogonal to the velocity u."""
    e1, e2, e3 = orthonormal_spatial_triad(u)
    d = rng.normal(size=3)
    d /= np.linalg.norm(d)
    return d[0] * e1 + d[1] * e2 + d[2] * e3
