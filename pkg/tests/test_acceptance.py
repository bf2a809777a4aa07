"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s`.  Criteria 7 and 8 share
their comparison records through a module-scoped cache, so the full suite
stays well inside the stated runtime budgets.
"""

import time

import numpy as np
import pytest

from conftest import fd_second_derivative_4th
from worldtube import compare as cmp
from worldtube import spacetime as st
from worldtube.compare import BumpTestFunction, lw_point_potential
from worldtube.retardation import HorizonError, solve_retarded
from worldtube.spacetime import lorentz_product, tensor
from worldtube.tube import ShellConfig, gram_determinant, measure_density, sphere_quadrature
from worldtube.worldline import UniformWorldline


HYPER = UniformWorldline(np.zeros(4), st.E_T, st.E_X, 1.0)

PHIS = [
    BumpTestFunction(np.array([0.0, 2.0, 0.0, 0.0]), 0.5),
    BumpTestFunction(np.array([0.5, 2.2, 0.3, 0.0]), 0.45),
    BumpTestFunction(np.array([-0.4, 1.8, 0.0, 0.5]), 0.4),
]

_RECORD_CACHE = {}


def record_for(phi_index, eps_factor):
    """Shell-vs-point comparison at eps = eps_factor * d0, fixed total charge."""
    key = (phi_index, eps_factor)
    if key not in _RECORD_CACHE:
        phi = PHIS[phi_index]
        d0 = cmp.worldline_support_distance(HYPER, phi)
        shell = ShellConfig.from_charge(HYPER, eps_factor * d0, 1.0)
        _RECORD_CACHE[key] = cmp.compare_once(shell, phi, phi_index=phi_index)
    return _RECORD_CACHE[key]


def _report(num, text):
    print(f"[PASS] criterion {num}: {text}")


def test_c01_boost_algebra(rng):
    t0 = time.perf_counter()
    worst_ortho = worst_map = 0.0
    for _ in range(1000):
        u, u2 = st.random_velocity(rng), st.random_velocity(rng)
        L = st.boost(u, u2)
        worst_ortho = max(worst_ortho, np.abs(st.adjoint(L) @ L - np.eye(4)).max())
        worst_map = max(worst_map, np.abs(L @ u - u2).max())
    elapsed = time.perf_counter() - t0
    assert worst_ortho < 1e-12
    assert worst_map < 1e-12
    assert elapsed < 1.0
    _report(1, f"1000 boosts: |L*L-1| {worst_ortho:.2e}, |Lu-u'| {worst_map:.2e}, "
               f"{elapsed:.2f} s")


def test_c02_boost_derivative_identity():
    t0 = time.perf_counter()
    gen = HYPER.accel * (tensor(HYPER.u, HYPER.n) - tensor(HYPER.n, HYPER.u))
    h = 5e-3
    worst = 0.0
    for s in np.linspace(-3.0, 3.0, 25):
        Ld_fd = (-HYPER.boost(s + 2 * h) + 8 * HYPER.boost(s + h)
                 - 8 * HYPER.boost(s - h) + HYPER.boost(s - 2 * h)) / (12 * h)
        worst = max(worst, np.abs(Ld_fd @ st.adjoint(HYPER.boost(s)) - gen).max())
    elapsed = time.perf_counter() - t0
    assert worst < 1e-8
    assert elapsed < 1.0
    _report(2, f"|L'L* - a(u(x)n - n(x)u)| vs finite differences: {worst:.2e}, "
               f"{elapsed:.2f} s")


def test_c03_measure_formula(rng):
    t0 = time.perf_counter()
    dirs = []
    e1, e2, e3 = st.orthonormal_spatial_triad(HYPER.u, axis=HYPER.n)
    for c in np.ndindex(3, 3, 3):
        f = np.array(c, dtype=float) - 1.0
        if not f.any():
            continue
        f /= np.linalg.norm(f)
        dirs.append(f[0] * e1 + f[1] * e2 + f[2] * e3)
    assert len(dirs) == 26
    worst = 0.0
    for eps in (0.05, 0.1, 0.3):
        for accel in (0.0, 0.5, 1.0):
            w = UniformWorldline(np.zeros(4), st.E_T, st.E_X, accel)
            sh = ShellConfig(w, eps, 1.0)
            for s in np.linspace(-1.5, 1.5, 8):
                for n in dirs:
                    dens = measure_density(sh, s, n)
                    num = np.sqrt(abs(gram_determinant(sh, s, n)))
                    worst = max(worst, abs(num - dens) / dens)
    elapsed = time.perf_counter() - t0
    assert worst < 1e-6
    assert elapsed < 10.0
    _report(3, f"sqrt|gram| vs eps^2(1+eps a n_c.n) on 3x3x8x26 grid: rel "
               f"{worst:.2e}, {elapsed:.2f} s")


def test_c04_moment_identities():
    t0 = time.perf_counter()
    worst = 0.0
    for u in (st.E_T, st.velocity_from_rapidity(1.0, [0.3, 1.0, -0.2])):
        n_axis = st.orthonormal_spatial_triad(u)[0]
        quad = sphere_quadrature(u, n_axis, 8, 16)
        m1 = np.einsum("k,ki->i", quad.weights, quad.nodes)
        m2 = np.einsum("k,ki,kj->ij", quad.weights, quad.nodes, st.lower(quad.nodes))
        m3 = np.einsum("k,ki,kj,kl->ijl", quad.weights, quad.nodes, quad.nodes,
                       quad.nodes)
        worst = max(worst, np.abs(m1).max(), np.abs(m3).max(),
                    np.abs(m2 - (4 * np.pi / 3) * st.spatial_projection(u)).max())
    elapsed = time.perf_counter() - t0
    assert worst < 1e-12
    assert elapsed < 1.0
    _report(4, f"sphere moments at N_theta=8, N_phi=16: {worst:.2e}, {elapsed:.2f} s")


def test_c05_retardation(rng):
    t0 = time.perf_counter()
    worst_s = worst_res = 0.0
    for _ in range(10**4):
        u = st.random_velocity(rng)
        w = UniformWorldline.inertial(rng.normal(size=4), u)
        x = w.position(rng.uniform(-3, 3)) + rng.uniform(0.05, 5.0) * \
            st.random_unit_spacelike(rng, u)
        sol = solve_retarded(w, x)
        d = x - w.x0
        du = lorentz_product(d, u)
        s_oracle = -du - np.sqrt(du * du + lorentz_product(d, d))
        worst_s = max(worst_s, abs(sol.s_ret - s_oracle))
        worst_res = max(worst_res, abs(lorentz_product(sol.k, sol.k))
                        / max(1.0, np.abs(sol.k).max() ** 2))
        assert sol.rho > 0
    # hyperbolic residuals and horizon detection
    for _ in range(200):
        x = np.concatenate([rng.uniform(-2, 2, 1), rng.uniform(0.5, 4, 1),
                            rng.uniform(-2, 2, 2)])
        try:
            sol = solve_retarded(HYPER, x)
        except HorizonError:
            continue
        worst_res = max(worst_res, abs(lorentz_product(sol.k, sol.k))
                        / max(1.0, np.abs(sol.k).max() ** 2))
        assert sol.rho > 0
    for x in (np.array([-10.0, 0.5, 0.0, 0.0]), np.array([0.0, -4.0, 0.0, 0.0])):
        with pytest.raises(HorizonError):
            solve_retarded(HYPER, x)
    elapsed = time.perf_counter() - t0
    assert worst_s < 1e-12
    assert worst_res < 1e-12
    assert elapsed < 10.0
    _report(5, f"10^4 inertial oracle |ds| {worst_s:.2e}, residual {worst_res:.2e}, "
               f"horizon raises, {elapsed:.1f} s")


def test_c06_inertial_equivalence(rng):
    t0 = time.perf_counter()
    worst = 0.0
    for chi in (0.0, 1.0, 2.0):
        u = st.velocity_from_rapidity(chi, [1.0, 0.0, 0.0])
        w = UniformWorldline.inertial(np.zeros(4), u)
        sh = ShellConfig(w, 0.1, 1.0)
        quad = sphere_quadrature(u, w.n, 16, 32)
        count = 0
        while count < 20:
            d = rng.uniform(0.25, 3.0)
            x = w.position(rng.uniform(-2, 2)) + d * st.random_unit_spacelike(rng, u)
            A_s = cmp.shell_potential(sh, x, quad)
            A_p = lw_point_potential(w, sh.charge, x)
            worst = max(worst, np.linalg.norm(A_s - A_p) / np.linalg.norm(A_p))
            count += 1
    elapsed = time.perf_counter() - t0
    assert worst < 1e-6
    assert elapsed < 60.0
    _report(6, f"shell = point for inertial motion, rapidities 0/1/2, 20 points "
               f"each: rel {worst:.2e}, {elapsed:.1f} s")


def test_c07_accelerated_inequality():
    t0 = time.perf_counter()
    margins = []
    for i in range(3):
        rec = record_for(i, 0.05)
        assert rec.verdict == "NOT_EQUAL"
        norm = np.linalg.norm(rec.delta)
        assert norm > 10.0 * rec.delta_err
        margins.append(norm / rec.delta_err)
    elapsed = time.perf_counter() - t0
    assert elapsed < 600.0
    _report(7, f"|Delta| / err = {min(margins):.0f}..{max(margins):.0f}x on 3 "
               f"test functions at eps = 0.05 d0, {elapsed:.1f} s")


def test_c08_leading_order_law():
    t0 = time.perf_counter()
    factors = (0.2, 0.1, 0.05, 0.025)
    recs = [record_for(0, f) for f in factors]
    eps = np.array([r.eps for r in recs])
    norms = np.array([np.linalg.norm(r.delta) for r in recs])
    slope = np.polyfit(np.log(eps), np.log(norms), 1)[0]
    ratio = recs[-1].ratio
    mismatch = recs[-1].mismatch
    elapsed = time.perf_counter() - t0
    assert 1.9 < slope < 2.1
    assert 0.9 < ratio < 1.1
    assert mismatch < 0.1
    assert elapsed < 1800.0
    _report(8, f"fixed-Q sweep: slope {slope:.4f} in [1.9, 2.1], smallest-eps "
               f"ratio {ratio:.4f} in [0.9, 1.1], mismatch {mismatch:.3f} < 0.1, "
               f"{elapsed:.1f} s")


def test_c09_wave_equation():
    t0 = time.perf_counter()
    worst = 0.0
    h = 0.02
    for pt in ([0.3, 2.0, 0.4, -0.2], [-0.5, 1.4, 0.0, 0.8], [1.0, 3.0, -1.0, 0.5]):
        x = np.array(pt)
        res = np.zeros(4)
        scale = np.zeros(4)
        for mu in range(4):
            d2 = fd_second_derivative_4th(
                lambda p: lw_point_potential(HYPER, 1.0, p), x, mu, h)
            res += (1.0 if mu else -1.0) * d2
            scale += np.abs(d2)
        worst = max(worst, (np.abs(res) / np.maximum(scale, 1e-300)).max())
    elapsed = time.perf_counter() - t0
    assert worst < 1e-4
    assert elapsed < 10.0
    _report(9, f"discrete d'Alembertian of the point potential: rel {worst:.2e}, "
               f"{elapsed:.2f} s")


def test_c10_prediction_vanishes_inertial():
    t0 = time.perf_counter()
    w = UniformWorldline.inertial(np.zeros(4), st.E_T)
    sh = ShellConfig(w, 0.1, 1.0)
    phi = BumpTestFunction(np.array([0.3, 2.0, 0.1, 0.0]), 0.5)
    res = cmp.predicted_difference(sh, phi)
    elapsed = time.perf_counter() - t0
    scale = cmp.KAPPA * sh.sigma * sh.eps**4
    assert np.linalg.norm(res.value) <= max(res.error, 1e-9 * scale)
    assert elapsed < 60.0
    _report(10, f"inertial prediction |value| {np.linalg.norm(res.value):.2e} <= "
                f"error {res.error:.2e}, {elapsed:.1f} s")
