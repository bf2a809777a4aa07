"""Pure numpy implementation of the hot kernels.

Worldlines are passed in canonical form.  For accel > 0 every constituent of a
rigid shell is a hyperbola about a common apex:

    p(s) = base + m (u sinh(a s) + nd cosh(a s)),   z = dp/ds = m a (u cosh + nd sinh)

with m = 1/a + eps (n_c.n) > 0; the center worldline itself is the case
m = 1/a, base = x0 - nd/a.  For accel == 0, p(s) = base + u s and z = u.

The retarded time then solves a quadratic in w = exp(a s):

    (X - T) w^2 - 2 B w + (X + T) = 0,
    T = -xi.u,  X = xi.nd,  B = (xi.xi + m^2)/(2 m),  xi = x - base,

and the retarded branch is the root with rho = -k.z > 0.  One or two Newton
polish steps on k.k restore machine-level residuals after the exp/log round
trip.  Points with no admissible root are beyond the Rindler horizon.

All reductions run in fixed node order, so results are reproducible run to run.
"""

from __future__ import annotations

import numpy as np

STATUS_OK = 0
STATUS_HORIZON = 1
STATUS_ON_WORLDLINE = 2
STATUS_NO_CONVERGE = 3

_ONWL_TOL = 1e-13
_RES_TOL = 1e-12


def _ldot(a, b):
    return (a[..., 1:] * b[..., 1:]).sum(axis=-1) - a[..., 0] * b[..., 0]


def retarded_canonical(base, u, nd, accel, m, X):
    """Batch retarded solve on the canonical worldline as seen from rows of X.

    Returns (s, k, z, rho, status) with k = x - p(s), z = dp/ds, rho = -k.z.
    Entries with nonzero status carry unusable values in the other arrays.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    M = X.shape[0]
    base = np.asarray(base, dtype=float)
    u = np.asarray(u, dtype=float)
    nd = np.asarray(nd, dtype=float)
    status = np.zeros(M, dtype=np.int64)

    if accel == 0.0:
        d = X - base
        du = _ldot(d, u)
        dd = _ldot(d, d)
        dist2 = du * du + dd
        onwl = dist2 <= _ONWL_TOL
        status[onwl] = STATUS_ON_WORLDLINE
        s = -du - np.sqrt(np.maximum(dist2, 0.0))
        k = d - s[:, None] * u
        z = np.broadcast_to(u, (M, 4))
        rho = -_ldot(k, z)
        status[(status == 0) & (rho <= 0.0)] = STATUS_NO_CONVERGE
        return s, k, z, rho, status

    xi = X - base
    T = -_ldot(xi, u)
    Xc = _ldot(xi, nd)
    B = (_ldot(xi, xi) + m * m) / (2.0 * m)
    amb = Xc - T
    apb = Xc + T
    disc = B * B - amb * apb
    bad = disc < 0.0
    sqrtD = np.sqrt(np.where(bad, 0.0, disc))
    Q = B + np.where(B >= 0.0, sqrtD, -sqrtD)

    with np.errstate(divide="ignore", invalid="ignore"):
        # stable quadratic roots; as amb -> 0 the physical root survives in w2
        w1 = np.where(np.abs(amb) > 0.0, Q / amb, np.inf)
        w2 = np.where(np.abs(Q) > 0.0, apb / Q, np.inf)

        def _rho_sign(w):
            # rho > 0 iff (T - X) w + (T + X)/w > 0
            return np.where(
                (w > 0.0) & np.isfinite(w), -amb * w + apb / np.where(w > 0, w, 1.0), -1.0
            )

        ok1 = _rho_sign(w1) > 0.0
        ok2 = _rho_sign(w2) > 0.0
        w = np.where(ok1, w1, np.where(ok2, w2, np.nan))

    horizon = bad | ~(w > 0.0) | ~np.isfinite(w)
    status[horizon] = STATUS_HORIZON
    w = np.where(horizon, 1.0, w)
    s = np.log(w) / accel

    # Newton polish: h = k.k, h' = -2 k.z
    ma = m * accel
    for _ in range(2):
        ash = accel * s
        ch, sh = np.cosh(ash), np.sinh(ash)
        k = xi - m * (sh[:, None] * u + ch[:, None] * nd)
        z = ma * (ch[:, None] * u + sh[:, None] * nd)
        h = _ldot(k, k)
        dh = -2.0 * _ldot(k, z)
        step = np.where(np.abs(dh) > 0.0, h / np.where(dh != 0.0, dh, 1.0), 0.0)
        s = s - np.where(horizon, 0.0, step)

    ash = accel * s
    ch, sh = np.cosh(ash), np.sinh(ash)
    k = xi - m * (sh[:, None] * u + ch[:, None] * nd)
    z = ma * (ch[:, None] * u + sh[:, None] * nd)
    rho = -_ldot(k, z)
    kscale = np.abs(k).max(axis=1) ** 2
    res = np.abs(_ldot(k, k))
    good = status == 0
    status[good & (kscale <= _ONWL_TOL)] = STATUS_ON_WORLDLINE
    good = status == 0
    status[good & ((rho <= 0.0) | (res > _RES_TOL * np.maximum(1.0, kscale)))] = (
        STATUS_NO_CONVERGE
    )
    return s, k, z, rho, status


def _canonical_point(x0, u, nd, accel):
    if accel == 0.0:
        return np.asarray(x0, dtype=float), 1.0
    return np.asarray(x0, dtype=float) - np.asarray(nd, dtype=float) / accel, 1.0 / accel


def lw_potential_batch(x0, u, nd, accel, q, kappa, X):
    """Lienard-Wiechert potential kappa q z(s_ret)/rho of a point charge, batched.

    Returns (A, status) with A of shape (M, 4).
    """
    base, m = _canonical_point(x0, u, nd, accel)
    s, k, z, rho, status = retarded_canonical(base, u, nd, accel, m, X)
    with np.errstate(divide="ignore", invalid="ignore"):
        A = (kappa * q) * z / rho[:, None]
    A[status != 0] = np.nan
    return A, status


def shell_potential_batch(x0, u, nd, accel, eps, sigma, kappa, nodes, weights, X):
    """Retarded potential of the charged shell at rows of X by sphere quadrature.

    A(x) = kappa sigma eps^2 sum_i w_i z_i/rho_i over constituent worldlines;
    the ratio z/(-k.z) is parametrization invariant, so center-time
    parametrization absorbs the measure factor 1 + eps a (n_c.n).
    Returns (A, status); status is the per-point worst node status.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    nodes = np.asarray(nodes, dtype=float)
    weights = np.asarray(weights, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    nd = np.asarray(nd, dtype=float)
    A = np.zeros((X.shape[0], 4))
    status = np.zeros(X.shape[0], dtype=np.int64)
    pref = kappa * sigma * eps * eps
    for node, wgt in zip(nodes, weights):
        if accel == 0.0:
            base, m = x0 + eps * node, 1.0
        else:
            m = 1.0 / accel + eps * float(_ldot(nd, node))
            base = x0 + eps * node - nd * m
        s, k, z, rho, st = retarded_canonical(base, u, nd, accel, m, X)
        status = np.maximum(status, st)
        with np.errstate(divide="ignore", invalid="ignore"):
            A += (pref * wgt) * z / rho[:, None]
    A[status != 0] = np.nan
    return A, status
