"""Cross-checks between the compiled kernel core, the numpy fallback, and the
generic bracketed solver."""

import numpy as np
import pytest

from worldtube import spacetime as st
from worldtube._kernels import backends, fallback
from worldtube.retardation import solve_retarded
from worldtube.spacetime import lorentz_product
from worldtube.tube import ShellConfig, sphere_quadrature
from worldtube.worldline import ShellConstituent, UniformWorldline

BACKENDS = backends()
HAS_COMPILED = "compiled" in BACKENDS


def field_points(rng, m=200):
    return np.column_stack([
        rng.uniform(-1.5, 1.5, m),
        rng.uniform(1.2, 4.0, m),
        rng.uniform(-1.5, 1.5, m),
        rng.uniform(-1.5, 1.5, m),
    ])


@pytest.mark.parametrize("name", list(BACKENDS))
def test_retarded_canonical_vs_reference(name, rng):
    mod = BACKENDS[name]
    w = UniformWorldline(np.zeros(4), st.E_T, st.E_X, 1.0)
    X = field_points(rng)
    s, k, z, rho, status = mod.retarded_canonical(w.x0 - w.n, w.u, w.n, 1.0, 1.0, X)
    assert (status == 0).all()
    for i in range(0, len(X), 7):
        ref = solve_retarded(w, X[i])
        assert abs(s[i] - ref.s_ret) < 1e-10
        assert abs(rho[i] - ref.rho) < 1e-10
    assert np.abs(lorentz_product(k, k)).max() < 1e-11 * max(
        1.0, np.abs(k).max() ** 2)


@pytest.mark.parametrize("name", list(BACKENDS))
def test_inertial_branch(name, rng):
    mod = BACKENDS[name]
    u = st.velocity_from_rapidity(0.9, [0, 1, 0])
    w = UniformWorldline.inertial(np.zeros(4), u)
    X = field_points(rng, 100)
    s, k, z, rho, status = mod.retarded_canonical(w.x0, u, w.n, 0.0, 1.0, X)
    assert (status == 0).all()
    for i in range(0, 100, 11):
        ref = solve_retarded(w, X[i])
        assert abs(s[i] - ref.s_ret) < 1e-11


@pytest.mark.parametrize("name", list(BACKENDS))
def test_constituent_params(name, rng):
    mod = BACKENDS[name]
    w = UniformWorldline(np.zeros(4), st.E_T, st.E_X, 0.7)
    n = st.random_unit_spacelike(rng, w.u)
    c = ShellConstituent(w, 0.25, n)
    m = 1.0 / w.accel + 0.25 * lorentz_product(w.n, n)
    base = w.x0 + 0.25 * n - w.n * m
    X = field_points(rng, 50)
    s, k, z, rho, status = mod.retarded_canonical(base, w.u, w.n, w.accel, m, X)
    assert (status == 0).all()
    for i in range(0, 50, 5):
        ref = solve_retarded(c, X[i])
        assert abs(s[i] - ref.s_ret) < 1e-10
        # kernel rho is -k.z (center-time tangent), ref.rho is -k.velocity
        assert abs(rho[i] - ref.rho * c.rate) < 1e-10


@pytest.mark.parametrize("name", list(BACKENDS))
def test_horizon_status(name):
    mod = BACKENDS[name]
    w = UniformWorldline(np.zeros(4), st.E_T, st.E_X, 1.0)
    X = np.array([
        [-10.0, 0.5, 0.0, 0.0],     # beyond the horizon
        [0.0, 2.0, 0.0, 0.0],       # reachable
        [0.0, -4.0, 0.0, 0.0],      # beyond
    ])
    _, _, _, _, status = mod.retarded_canonical(w.x0 - w.n, w.u, w.n, 1.0, 1.0, X)
    assert list(status) == [fallback.STATUS_HORIZON, 0, fallback.STATUS_HORIZON]


@pytest.mark.skipif(not HAS_COMPILED, reason="compiled core not built")
def test_backends_agree(rng):
    w = UniformWorldline(np.zeros(4), st.E_T, st.E_X, 1.0)
    X = field_points(rng, 500)
    quad = sphere_quadrature(w.u, w.n, 8, 16)
    args = (w.x0, w.u, w.n, w.accel, 0.1, 1.0, 1.0 / (4 * np.pi),
            quad.nodes, quad.weights, X)
    A_c, st_c = BACKENDS["compiled"].shell_potential_batch(*args)
    A_f, st_f = BACKENDS["fallback"].shell_potential_batch(*args)
    assert (st_c == st_f).all()
    assert np.abs(A_c - A_f).max() < 1e-13 * max(1.0, np.abs(A_f).max())
    s_c = BACKENDS["compiled"].retarded_canonical(w.x0 - w.n, w.u, w.n, 1.0, 1.0, X)
    s_f = BACKENDS["fallback"].retarded_canonical(w.x0 - w.n, w.u, w.n, 1.0, 1.0, X)
    assert np.abs(s_c[0] - s_f[0]).max() < 1e-13


@pytest.mark.parametrize("name", list(BACKENDS))
def test_lw_batch_static_coulomb(name):
    mod = BACKENDS[name]
    w = UniformWorldline.inertial(np.zeros(4), st.E_T)
    X = np.array([[0.0, 2.0, 0.0, 0.0], [1.0, 0.0, 3.0, 4.0]])
    A, status = mod.lw_potential_batch(w.x0, w.u, w.n, 0.0, 2.0, 1.0 / (4 * np.pi), X)
    assert (status == 0).all()
    for x, a in zip(X, A):
        d = np.linalg.norm(x[1:])
        assert abs(a[0] - 2.0 / (4 * np.pi * d)) < 1e-14
        assert np.abs(a[1:]).max() < 1e-15


@pytest.mark.parametrize("name", list(BACKENDS))
def test_determinism(name, rng):
    mod = BACKENDS[name]
    w = UniformWorldline(np.zeros(4), st.E_T, st.E_X, 1.0)
    X = field_points(rng, 64)
    quad = sphere_quadrature(w.u, w.n, 6, 12)
    args = (w.x0, w.u, w.n, w.accel, 0.1, 1.0, 1.0, quad.nodes, quad.weights, X)
    A1, _ = mod.shell_potential_batch(*args)
    A2, _ = mod.shell_potential_batch(*args)
    assert np.array_equal(A1, A2)


@pytest.mark.parametrize("name", list(BACKENDS))
def test_shell_batch_matches_scalar_sum(name, rng):
    # kernel accumulation equals the explicit per-constituent sum
    mod = BACKENDS[name]
    w = UniformWorldline(np.zeros(4), st.E_T, st.E_X, 0.9)
    sh = ShellConfig(w, 0.2, 1.3)
    quad = sphere_quadrature(w.u, w.n, 4, 8)
    x = np.array([0.3, 2.5, -0.4, 0.8])
    A, status = mod.shell_potential_batch(w.x0, w.u, w.n, w.accel, sh.eps,
                                          sh.sigma, 1.0, quad.nodes, quad.weights,
                                          x[None, :])
    assert status[0] == 0
    total = np.zeros(4)
    for node, wgt in zip(quad.nodes, quad.weights):
        c = ShellConstituent(w, sh.eps, node)
        sol = solve_retarded(c, x)
        z = c.tangent(sol.s_ret)
        total += sh.sigma * sh.eps**2 * wgt * z / (-lorentz_product(
            x - c.position(sol.s_ret), z))
    assert np.abs(A[0] - total).max() < 1e-11
