# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: batch retarded solves and potential accumulation.

Mirrors fallback.py exactly (same canonical worldline form, same quadratic
root selection, same Newton polish and status codes); test_kernels.py holds
the two implementations together.
"""

from libc.math cimport NAN, cosh, fabs, log, sinh, sqrt

import numpy as np

STATUS_OK = 0
STATUS_HORIZON = 1
STATUS_ON_WORLDLINE = 2
STATUS_NO_CONVERGE = 3

# C-level mirrors of the status codes, usable under nogil
cdef enum:
    _OK = 0
    _HORIZON = 1
    _ONWL = 2
    _NOCONV = 3

cdef double ONWL_TOL = 1e-13
cdef double RES_TOL = 1e-12


cdef inline double _ldot4(const double* a, const double* b) nogil:
    return a[1]*b[1] + a[2]*b[2] + a[3]*b[3] - a[0]*b[0]


cdef inline int _solve_one(const double* xi, const double* u, const double* nd,
                           double accel, double m,
                           double* s_out, double* k_out, double* z_out,
                           double* rho_out) nogil:
    """Retarded solve for one point; returns a status code.

    Hyperbolic branch (accel > 0): p(s) = base + m (u sinh(a s) + nd cosh(a s)),
    xi = x - base.  Solves the quadratic in w = exp(a s) and polishes with two
    Newton steps on k.k.
    """
    cdef double T, Xc, B, amb, apb, disc, sqrtD, Q, w1, w2, g1, g2, w, s
    cdef double ash, ch, sh, h, dh, rho, kscale, ma
    cdef double k[4]
    cdef double z[4]
    cdef int i, it

    T = -_ldot4(xi, u)
    Xc = _ldot4(xi, nd)
    B = (_ldot4(xi, xi) + m * m) / (2.0 * m)
    amb = Xc - T
    apb = Xc + T
    disc = B * B - amb * apb
    if disc < 0.0:
        return _HORIZON
    sqrtD = sqrt(disc)
    Q = B + sqrtD if B >= 0.0 else B - sqrtD

    w1 = Q / amb if amb != 0.0 else -1.0
    w2 = apb / Q if Q != 0.0 else -1.0
    # rho > 0 iff -amb*w + apb/w > 0
    g1 = -amb * w1 + apb / w1 if w1 > 0.0 else -1.0
    g2 = -amb * w2 + apb / w2 if w2 > 0.0 else -1.0
    if w1 > 0.0 and g1 > 0.0:
        w = w1
    elif w2 > 0.0 and g2 > 0.0:
        w = w2
    else:
        return _HORIZON

    s = log(w) / accel
    ma = m * accel
    for it in range(2):
        ash = accel * s
        ch = cosh(ash)
        sh = sinh(ash)
        h = 0.0
        dh = 0.0
        for i in range(4):
            k[i] = xi[i] - m * (sh * u[i] + ch * nd[i])
            z[i] = ma * (ch * u[i] + sh * nd[i])
        h = _ldot4(k, k)
        dh = -2.0 * _ldot4(k, z)
        if dh != 0.0:
            s = s - h / dh

    ash = accel * s
    ch = cosh(ash)
    sh = sinh(ash)
    kscale = 0.0
    for i in range(4):
        k[i] = xi[i] - m * (sh * u[i] + ch * nd[i])
        z[i] = ma * (ch * u[i] + sh * nd[i])
        if fabs(k[i]) > kscale:
            kscale = fabs(k[i])
    kscale = kscale * kscale
    if kscale <= ONWL_TOL:
        return _ONWL
    rho = -_ldot4(k, z)
    h = _ldot4(k, k)
    if rho <= 0.0 or fabs(h) > RES_TOL * (kscale if kscale > 1.0 else 1.0):
        return _NOCONV
    s_out[0] = s
    rho_out[0] = rho
    for i in range(4):
        k_out[i] = k[i]
        z_out[i] = z[i]
    return _OK


cdef inline int _solve_one_inertial(const double* d, const double* u,
                                    double* s_out, double* k_out, double* z_out,
                                    double* rho_out) nogil:
    cdef double du, dd, dist2, s
    cdef int i
    du = _ldot4(d, u)
    dd = _ldot4(d, d)
    dist2 = du * du + dd
    if dist2 <= ONWL_TOL:
        return _ONWL
    s = -du - sqrt(dist2 if dist2 > 0.0 else 0.0)
    for i in range(4):
        k_out[i] = d[i] - s * u[i]
        z_out[i] = u[i]
    s_out[0] = s
    rho_out[0] = -_ldot4(k_out, u)
    if rho_out[0] <= 0.0:
        return _NOCONV
    return _OK


def retarded_canonical(base, u, nd, double accel, double m, X):
    """Batch retarded solve; see fallback.retarded_canonical."""
    cdef const double[:, ::1] Xv = np.ascontiguousarray(np.atleast_2d(X), dtype=np.float64)
    cdef const double[::1] bv = np.ascontiguousarray(base, dtype=np.float64)
    cdef const double[::1] uv = np.ascontiguousarray(u, dtype=np.float64)
    cdef const double[::1] nv = np.ascontiguousarray(nd, dtype=np.float64)
    cdef Py_ssize_t M = Xv.shape[0], p, i
    # nan-filled so entries with nonzero status never carry stale memory
    s_arr = np.full(M, np.nan)
    k_arr = np.full((M, 4), np.nan)
    z_arr = np.full((M, 4), np.nan)
    rho_arr = np.full(M, np.nan)
    status_arr = np.zeros(M, dtype=np.int64)
    cdef double[::1] sv = s_arr
    cdef double[:, ::1] kv = k_arr
    cdef double[:, ::1] zv = z_arr
    cdef double[::1] rv = rho_arr
    cdef long long[::1] stv = status_arr
    cdef double xi[4]
    with nogil:
        for p in range(M):
            if accel == 0.0:
                for i in range(4):
                    xi[i] = Xv[p, i] - bv[i]
                stv[p] = _solve_one_inertial(xi, &uv[0], &sv[p], &kv[p, 0],
                                             &zv[p, 0], &rv[p])
            else:
                for i in range(4):
                    xi[i] = Xv[p, i] - bv[i]
                stv[p] = _solve_one(xi, &uv[0], &nv[0], accel, m, &sv[p],
                                    &kv[p, 0], &zv[p, 0], &rv[p])
    return s_arr, k_arr, z_arr, rho_arr, status_arr


def lw_potential_batch(x0, u, nd, double accel, double q, double kappa, X):
    """See fallback.lw_potential_batch."""
    cdef double m = 1.0
    base = np.asarray(x0, dtype=np.float64)
    if accel != 0.0:
        base = base - np.asarray(nd, dtype=np.float64) / accel
        m = 1.0 / accel
    s, k, z, rho, status = retarded_canonical(base, u, nd, accel, m, X)
    A = np.empty_like(z)
    cdef double[:, ::1] Av = A
    cdef double[:, ::1] zv = z
    cdef double[::1] rv = rho
    cdef long long[::1] stv = status
    cdef Py_ssize_t p, i
    cdef double pref = kappa * q
    with nogil:
        for p in range(Av.shape[0]):
            if stv[p] == _OK:
                for i in range(4):
                    Av[p, i] = pref * zv[p, i] / rv[p]
            else:
                for i in range(4):
                    Av[p, i] = NAN
    return A, status


def shell_potential_batch(x0, u, nd, double accel, double eps, double sigma,
                          double kappa, nodes, weights, X):
    """See fallback.shell_potential_batch."""
    cdef const double[:, ::1] Xv = np.ascontiguousarray(np.atleast_2d(X), dtype=np.float64)
    cdef const double[::1] x0v = np.ascontiguousarray(x0, dtype=np.float64)
    cdef const double[::1] uv = np.ascontiguousarray(u, dtype=np.float64)
    cdef const double[::1] nv = np.ascontiguousarray(nd, dtype=np.float64)
    cdef const double[:, ::1] ndsv = np.ascontiguousarray(nodes, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t M = Xv.shape[0], K = ndsv.shape[0], p, i, j
    A = np.zeros((M, 4))
    status_arr = np.zeros(M, dtype=np.int64)
    cdef double[:, ::1] Av = A
    cdef long long[::1] stv = status_arr
    cdef double pref = kappa * sigma * eps * eps
    cdef double base[4]
    cdef double xi[4]
    cdef double kvec[4]
    cdef double zvec[4]
    cdef double m, mu, s, rho, wgt
    cdef int st
    with nogil:
        for j in range(K):
            if accel == 0.0:
                m = 1.0
                for i in range(4):
                    base[i] = x0v[i] + eps * ndsv[j, i]
            else:
                mu = _ldot4(&nv[0], &ndsv[j, 0])
                m = 1.0 / accel + eps * mu
                for i in range(4):
                    base[i] = x0v[i] + eps * ndsv[j, i] - nv[i] * m
            wgt = pref * wv[j]
            for p in range(M):
                for i in range(4):
                    xi[i] = Xv[p, i] - base[i]
                if accel == 0.0:
                    st = _solve_one_inertial(xi, &uv[0], &s, kvec, zvec, &rho)
                else:
                    st = _solve_one(xi, &uv[0], &nv[0], accel, m, &s, kvec,
                                    zvec, &rho)
                if st != _OK:
                    if st > stv[p]:
                        stv[p] = st
                else:
                    for i in range(4):
                        Av[p, i] += wgt * zvec[i] / rho
    for p in range(M):
        if status_arr[p] != 0:
            A[p] = np.nan
    return A, status_arr
