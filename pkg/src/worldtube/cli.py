"""Batch harness: JSON config in, JSON report + CSV results out.

    worldtube verify  --config cfg.json [--out DIR] [--threads N] [--seed S]
    worldtube compare --config cfg.json ...
    worldtube sweep   --config cfg.json ...

verify runs the invariant suites of all modules (exit 0 iff all pass, 1 on a
suite failure, 2 on a config problem).  compare runs the shell-vs-point
verdict for each configured test function at the configured shell radius.
sweep repeats the comparison over a list of radii and fits the log-log slope.

Outputs land in --out (default ./out): report.json always, results.csv for
compare/sweep.  CSV numbers carry 17 significant digits, and every quadrature
is deterministic in fixed node order, so rerunning with the same config and
seed reproduces the CSV byte for byte.

Test-function centers are given in the worldline rest-frame tetrad
(u_c, e1, e2, e3) relative to the reference event x_c, with e1 along the
acceleration direction; coordinates are therefore boost-covariant inputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import _kernels as kernels
from . import compare as cmp
from . import spacetime as st
from .retardation import HorizonError, solve_retarded
from .spacetime import lorentz_product
from .tube import ShellConfig, gram_determinant, measure_density, sphere_quadrature
from .worldline import ShellConstituent, UniformWorldline


class ConfigError(ValueError):
    """Malformed or physically inadmissible configuration."""


DEFAULT_CONFIG = {
    "seed": 20240101,
    "out_dir": "./out",
    "worldline": {
        "accel": 1.0,
        "rapidity": 0.0,
        "boost_axis": [1.0, 0.0, 0.0],
        "accel_axis": [1.0, 0.0, 0.0],
    },
    "shell": {"radius": 0.1, "charge": 1.0},
    "test_functions": [
        {"center": [0.0, 2.0, 0.0, 0.0], "radius": 0.5, "amplitude": 1.0},
    ],
    "quadrature": {
        "n_theta": 16,
        "n_phi": 32,
        "pairing_order": 24,
        "pairing_err_order": 16,
        "prediction_order": 40,
        "prediction_err_order": 32,
        "s_order": 48,
        "lightcone_order": [12, 8, 16],
        "method": "gauss",
        "mc_samples": 1000000,
    },
    "sweep": {"eps_factors": [0.2, 0.1, 0.05, 0.025], "convention": "fixed_charge"},
    "verify": {"boost_pairs": 1000, "retardation_cases": 10000},
    "tolerances": {"inertial_equality": 1e-6, "route_equivalence_factor": 3.0},
}

_SCHEMA = {
    "seed": int,
    "out_dir": str,
    "worldline": {"accel": float, "rapidity": float, "boost_axis": list,
                  "accel_axis": list},
    "shell": {"radius": float, "charge": float, "sigma": float},
    "test_functions": list,
    "quadrature": {"n_theta": int, "n_phi": int, "pairing_order": int,
                   "pairing_err_order": int, "prediction_order": int,
                   "prediction_err_order": int, "s_order": int,
                   "lightcone_order": list, "method": str, "mc_samples": int},
    "sweep": {"eps_values": list, "eps_factors": list, "convention": str},
    "verify": {"boost_pairs": int, "retardation_cases": int},
    "tolerances": {"inertial_equality": float, "route_equivalence_factor": float},
}


def _check_keys(data, schema, path=""):
    for key, val in data.items():
        if key not in schema:
            raise ConfigError(f"unknown config key {path + key!r}")
        want = schema[key]
        if isinstance(want, dict):
            if not isinstance(val, dict):
                raise ConfigError(f"config key {path + key!r} must be an object")
            _check_keys(val, want, path + key + ".")
        elif want is float:
            if not isinstance(val, (int, float)) or isinstance(val, bool):
                raise ConfigError(f"config key {path + key!r} must be a number")
        elif not isinstance(val, want) or isinstance(val, bool) and want is int:
            raise ConfigError(f"config key {path + key!r} must be {want.__name__}")


def _merge(defaults, override):
    out = {}
    for key, val in defaults.items():
        if key in override and isinstance(val, dict):
            out[key] = _merge(val, override[key])
        elif key in override:
            out[key] = override[key]
        else:
            out[key] = json.loads(json.dumps(val))
    for key in override:
        if key not in defaults:
            out[key] = override[key]
    return out


def load_config(path):
    """Parse, validate, and default-fill a config file; raises ConfigError."""
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    _check_keys(raw, _SCHEMA)
    cfg = _merge(DEFAULT_CONFIG, raw)
    if isinstance(raw.get("shell"), dict):
        if {"charge", "sigma"} <= set(raw["shell"]):
            raise ConfigError("shell takes 'charge' or 'sigma', not both")
        if "sigma" in raw["shell"]:
            cfg["shell"].pop("charge", None)
    if not set(cfg["shell"]) & {"charge", "sigma"}:
        raise ConfigError("shell needs one of 'charge' or 'sigma'")
    for i, tf in enumerate(cfg["test_functions"]):
        if not isinstance(tf, dict):
            raise ConfigError(f"test_functions[{i}] must be an object")
        _check_keys(tf, {"center": list, "radius": float, "amplitude": float},
                    f"test_functions[{i}].")
        if "center" not in tf or "radius" not in tf:
            raise ConfigError(f"test_functions[{i}] needs 'center' and 'radius'")
        if len(tf["center"]) != 4:
            raise ConfigError(f"test_functions[{i}].center must have 4 entries")
        tf.setdefault("amplitude", 1.0)
    if isinstance(raw.get("sweep"), dict):
        if {"eps_values", "eps_factors"} <= set(raw["sweep"]):
            raise ConfigError("sweep takes 'eps_values' or 'eps_factors', not both")
        # a user-specified list replaces the default one, not joins it
        if "eps_values" in raw["sweep"]:
            cfg["sweep"].pop("eps_factors", None)
    if cfg["quadrature"]["method"] not in ("gauss", "mc"):
        raise ConfigError("quadrature.method must be 'gauss' or 'mc'")
    if cfg["sweep"]["convention"] not in ("fixed_charge", "fixed_sigma"):
        raise ConfigError("sweep.convention must be 'fixed_charge' or 'fixed_sigma'")
    # physical validation happens in build_experiment; surface as ConfigError
    try:
        build_experiment(cfg)
    except (ValueError, ConfigError) as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


def build_experiment(cfg):
    """Instantiate worldline, shell, test functions, and quadrature from config."""
    wl = cfg["worldline"]
    u = st.velocity_from_rapidity(float(wl["rapidity"]), wl["boost_axis"])
    boost = st.boost(st.E_T, u)
    axis = np.asarray(wl["accel_axis"], dtype=float)
    if np.linalg.norm(axis) == 0.0:
        raise ConfigError("worldline.accel_axis must be nonzero")
    n = boost @ np.concatenate(([0.0], axis / np.linalg.norm(axis)))
    center = UniformWorldline(np.zeros(4), u, n, float(wl["accel"]))
    if "charge" in cfg["shell"]:
        shell = ShellConfig.from_charge(center, float(cfg["shell"]["radius"]),
                                        float(cfg["shell"]["charge"]))
    else:
        shell = ShellConfig(center, float(cfg["shell"]["radius"]),
                            float(cfg["shell"]["sigma"]))
    legs = np.vstack([u, st.orthonormal_spatial_triad(u, axis=n)])
    phis = [
        cmp.BumpTestFunction(
            center.x0 + np.asarray(tf["center"], dtype=float) @ legs,
            float(tf["radius"]), float(tf["amplitude"]), u=u,
        )
        for tf in cfg["test_functions"]
    ]
    q = cfg["quadrature"]
    quad = sphere_quadrature(u, n, int(q["n_theta"]), int(q["n_phi"]))
    return center, shell, phis, quad


# ---------------------------------------------------------------------------
# invariant suite (verify)


def _suite_entry(name, worst, tol):
    return {"name": name, "worst": float(worst), "tolerance": float(tol),
            "passed": bool(worst <= tol)}


def invariant_suite(cfg, rng):
    """Invariant checks of all modules at their stated tolerances."""
    center, shell, phis, quad = build_experiment(cfg)
    out = []

    # spacetime: boost algebra on random velocity pairs
    n_pairs = int(cfg["verify"]["boost_pairs"])
    worst_ortho = worst_map = 0.0
    for _ in range(n_pairs):
        u1 = st.random_velocity(rng)
        u2 = st.random_velocity(rng)
        L = st.boost(u1, u2)
        worst_ortho = max(worst_ortho, np.abs(st.adjoint(L) @ L - np.eye(4)).max())
        worst_map = max(worst_map, np.abs(L @ u1 - u2).max())
    out.append(_suite_entry("boost_orthogonality", worst_ortho, 1e-12))
    out.append(_suite_entry("boost_maps_velocity", worst_map, 1e-12))

    # adjoint identity and projections
    worst = 0.0
    for _ in range(200):
        a, b = rng.normal(size=4), rng.normal(size=4)
        L = rng.normal(size=(4, 4))
        worst = max(worst, abs(
            lorentz_product(st.adjoint(L) @ a, b) - lorentz_product(a, L @ b)))
    out.append(_suite_entry("adjoint_identity", worst, 1e-12))
    worst = 0.0
    for _ in range(100):
        u = st.random_velocity(rng)
        nvec = st.random_unit_spacelike(rng, u)
        for P in (st.spatial_projection(u), st.plane_projection(u, nvec)):
            worst = max(worst, np.abs(P @ P - P).max(),
                        np.abs(st.adjoint(P) - P).max(), np.abs(P @ u).max())
    out.append(_suite_entry("projections", worst, 1e-12))

    # worldline normalizations and the closed boost forms
    s_grid = np.linspace(-3.0, 3.0, 25)
    worst = 0.0
    worst_form = 0.0
    a_c = center.accel
    gen = a_c * (np.outer(center.u, st.lower(center.n))
                 - np.outer(center.n, st.lower(center.u)))
    for s in s_grid:
        v = center.velocity(s)
        acc = center.acceleration(s)
        worst = max(worst, abs(lorentz_product(v, v) + 1.0),
                    abs(lorentz_product(v, acc)),
                    abs(lorentz_product(acc, acc) - a_c**2))
        L = center.boost(s)
        Ld = center.boost_dot(s)
        worst_form = max(worst_form, np.abs(L @ center.u - v).max(),
                         np.abs(Ld @ st.adjoint(L) - gen).max())
        nvec = st.random_unit_spacelike(rng, center.u)
        worst_form = max(
            worst_form,
            np.abs(L @ nvec - center.boost_apply_sphere(s, nvec)).max(),
            np.abs(Ld @ nvec - center.boost_dot_apply_sphere(s, nvec)).max(),
        )
    out.append(_suite_entry("worldline_normalization", worst, 1e-12))
    out.append(_suite_entry("boost_closed_forms", worst_form, 1e-11))

    # a -> 0 continuity
    w_small = UniformWorldline(center.x0, center.u, center.n, 1e-8)
    w_zero = UniformWorldline(center.x0, center.u, center.n, 0.0)
    s_probe = np.linspace(-2.0, 2.0, 9)
    rel = (np.abs(w_small.position(s_probe) - w_zero.position(s_probe)).max()
           / max(np.abs(w_zero.position(s_probe)).max(), 1.0))
    out.append(_suite_entry("accel_zero_continuity", rel, 1e-7))

    # z identities on random (s, n)
    worst = 0.0
    for _ in range(100):
        s = rng.uniform(-2.0, 2.0)
        nvec = st.random_unit_spacelike(rng, center.u)
        c = ShellConstituent(center, shell.eps, nvec)
        z = c.tangent(s)
        rate = c.rate
        Ln = center.boost_apply_sphere(s, nvec)
        worst = max(worst, abs(lorentz_product(z, z) + rate**2),
                    abs(lorentz_product(z, Ln)),
                    abs(lorentz_product(z, center.boost(s) @ center.u) + rate))
    out.append(_suite_entry("constituent_z_identities", worst, 1e-12))

    # tube measure vs numeric Gram determinant over the module grid
    worst = 0.0
    dirs = _grid_directions(center.u, center.n)
    for eps in (0.05, 0.1, 0.3):
        for acc in (0.0, 0.5, 1.0):
            w_acc = UniformWorldline(center.x0, center.u, center.n, acc)
            sh = ShellConfig(w_acc, eps, 1.0)
            for s in np.linspace(-1.5, 1.5, 8):
                for nvec in dirs:
                    g = gram_determinant(sh, s, nvec)
                    dens = measure_density(sh, s, nvec)
                    worst = max(worst, abs(np.sqrt(abs(g)) - dens) / dens)
    out.append(_suite_entry("measure_vs_gram", worst, 1e-6))

    # sphere moment identities
    q8 = sphere_quadrature(center.u, center.n, 8, 16)
    m1 = np.einsum("k,ki->i", q8.weights, q8.nodes)
    m2 = np.einsum("k,ki,kj->ij", q8.weights, q8.nodes, st.lower(q8.nodes))
    m3 = np.einsum("k,ki,kj,kl->ijl", q8.weights, q8.nodes, q8.nodes, q8.nodes)
    P = st.spatial_projection(center.u)
    worst = max(np.abs(m1).max(), np.abs(m3).max(),
                np.abs(m2 - (4 * np.pi / 3) * P).max(),
                abs(q8.weights.sum() - 4 * np.pi))
    out.append(_suite_entry("sphere_moments", worst, 1e-12))

    # retardation: residuals, inertial oracle, causality
    n_ret = int(cfg["verify"]["retardation_cases"])
    w_in = UniformWorldline.inertial(center.x0, center.u)
    worst = 0.0
    for _ in range(n_ret):
        x = (w_in.position(rng.uniform(-2, 2))
             + rng.uniform(0.1, 5.0) * st.random_unit_spacelike(rng, center.u))
        sol = solve_retarded(w_in, x)
        d = x - w_in.x0
        du = lorentz_product(d, w_in.u)
        s_oracle = -du - np.sqrt(du * du + lorentz_product(d, d))
        worst = max(worst, abs(sol.s_ret - s_oracle),
                    abs(lorentz_product(sol.k, sol.k)))
        if sol.rho <= 0:
            worst = np.inf
    out.append(_suite_entry("retardation_inertial_oracle", worst, 1e-12))
    w_hyp = UniformWorldline(center.x0, center.u, center.n, max(center.accel, 1.0))
    apex = w_hyp.x0 - w_hyp.n / w_hyp.accel
    horizon_ok = True
    for _ in range(50):
        x = w_hyp.position(rng.uniform(-1, 1)) + rng.uniform(0.2, 3.0) * \
            st.random_unit_spacelike(rng, center.u)
        reachable = lorentz_product(x - apex, w_hyp.n - w_hyp.u) > 1e-9
        try:
            solve_retarded(w_hyp, x)
            got = True
        except HorizonError:
            got = False
        horizon_ok = horizon_ok and (got == reachable)
    out.append(_suite_entry("horizon_detection", 0.0 if horizon_ok else 1.0, 0.5))

    # bump derivatives vs central finite differences at interior points
    # (the profile steepens without bound toward the support edge, so the
    # check stays where the function is materially nonzero)
    worst = 0.0
    for phi in phis[:1]:
        n_checked = 0
        while n_checked < 100:
            x = phi.center + rng.uniform(-0.65, 0.65, size=4) * phi.radius
            if phi(x) < 1e-3 * phi.amplitude:
                continue
            n_checked += 1
            h = 1e-5 * phi.radius
            for mu in range(4):
                e = np.zeros(4)
                e[mu] = h
                fd1 = (phi(x + e) - phi(x - e)) / (2 * h)
                worst = max(worst, abs(fd1 - phi.partial(x)[mu])
                            / max(abs(fd1), 1e-6))
    out.append(_suite_entry("bump_gradient_vs_fd", worst, 1e-6))

    # kernels vs the generic solver
    worst = 0.0
    base = (w_hyp.x0 - w_hyp.n / w_hyp.accel, 1.0 / w_hyp.accel)
    X = np.stack([
        w_hyp.position(rng.uniform(-1, 1))
        + rng.uniform(0.3, 3.0) * st.random_unit_spacelike(rng, center.u)
        for _ in range(200)
    ])
    keep = [lorentz_product(x - apex, w_hyp.n - w_hyp.u) > 1e-6 for x in X]
    X = X[np.asarray(keep)]
    s, k, z, rho, status = kernels.retarded_canonical(base[0], w_hyp.u, w_hyp.n,
                                                      w_hyp.accel, base[1], X)
    for i, x in enumerate(X):
        if status[i] != 0:
            worst = np.inf
            continue
        worst = max(worst, abs(s[i] - solve_retarded(w_hyp, x).s_ret))
    out.append(_suite_entry("kernel_vs_reference_solver", worst, 1e-10))

    # shell equals point for inertial motion, at the configured sphere orders
    tol = cfg["tolerances"]
    w_in2 = UniformWorldline.inertial(center.x0,
                                      st.velocity_from_rapidity(1.0, [1, 0, 0]))
    sh_in = ShellConfig(w_in2, shell.eps, shell.sigma)
    quad_in = sphere_quadrature(w_in2.u, w_in2.n, quad.n_theta, quad.n_phi)
    worst = 0.0
    for _ in range(20):
        x = (w_in2.position(rng.uniform(-2, 2))
             + rng.uniform(0.3, 3.0) * st.random_unit_spacelike(rng, w_in2.u))
        A_s = cmp.shell_potential(sh_in, x, quad_in)
        A_p = cmp.lw_point_potential(w_in2, sh_in.charge, x)
        worst = max(worst, np.linalg.norm(A_s - A_p) / np.linalg.norm(A_p))
    out.append(_suite_entry("inertial_equivalence", worst,
                            float(tol["inertial_equality"])))

    # route equivalence: 4D pairing of the pointwise potential vs the literal
    # iterated current integrals, at the configured direct-route orders
    q = cfg["quadrature"]
    phi_re = phis[0]
    a_pair = cmp.pair_potential_with_test(
        lambda X: cmp.lw_point_potential(center, shell.charge, X), phi_re,
        order=min(int(q["pairing_order"]), 16),
        err_order=min(int(q["pairing_err_order"]), 12))
    b_pair = cmp.pair_current_direct(
        (center, shell.charge), phi_re, s_order=int(q["s_order"]),
        lc=tuple(int(v) for v in q["lightcone_order"]))
    gap = float(np.linalg.norm(a_pair.value - b_pair.value))
    budget = float(tol["route_equivalence_factor"]) * (a_pair.error + b_pair.error)
    out.append(_suite_entry("route_equivalence_point", gap, max(budget, 1e-14)))

    # kernel-constant independence: ratios unchanged under kappa -> 2 kappa
    rec1 = cmp.compare_once(shell, phi_re, quad=quad, order=12, err_order=8,
                            pred_order=16, pred_err_order=12, kappa=cmp.KAPPA)
    rec2 = cmp.compare_once(shell, phi_re, quad=quad, order=12, err_order=8,
                            pred_order=16, pred_err_order=12, kappa=2 * cmp.KAPPA)
    drift = abs(rec1.ratio - rec2.ratio) / max(rec1.ratio, 1e-30)
    if rec1.verdict != rec2.verdict:
        drift = np.inf
    out.append(_suite_entry("kappa_independence", drift, 1e-10))

    return out


def _grid_directions(u, n_axis):
    """26 directions: axes, edge and corner diagonals of the spatial triad."""
    e1, e2, e3 = st.orthonormal_spatial_triad(u, axis=n_axis)
    dirs = []
    for c in np.ndindex(3, 3, 3):
        f = np.array(c, dtype=float) - 1.0
        if not f.any():
            continue
        f /= np.linalg.norm(f)
        dirs.append(f[0] * e1 + f[1] * e2 + f[2] * e3)
    return dirs


# ---------------------------------------------------------------------------
# commands


def _fmt(x):
    return format(float(x), ".17g")


def _write_csv(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, (int, float, np.floating))
                              else str(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def _record_dict(rec):
    return {
        "eps": rec.eps,
        "accel": rec.accel,
        "phi_index": rec.phi_index,
        "d0": rec.d0,
        "delta": [float(v) for v in rec.delta],
        "delta_error": rec.delta_err,
        "pred": [float(v) for v in rec.pred],
        "pred_error": rec.pred_err,
        "ratio": rec.ratio,
        "mismatch": rec.mismatch,
        "verdict": rec.verdict,
        "timelike_integrand": rec.timelike_ok,
    }


def cmd_verify(cfg, out_dir, seed, threads):
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    suite = invariant_suite(cfg, rng)
    ok = all(e["passed"] for e in suite)
    report = {
        "command": "verify",
        "backend": kernels.BACKEND,
        "seed": seed,
        "threads": threads,
        "config": cfg,
        "suite": suite,
        "pass": ok,
        "wall_time_s": time.perf_counter() - t0,
    }
    (out_dir / "report.json").write_text(json.dumps(report, indent=2) + "\n")
    for e in suite:
        status = "PASS" if e["passed"] else "FAIL"
        print(f"[{status}] {e['name']}: worst {e['worst']:.3e} "
              f"(tolerance {e['tolerance']:.1e})")
    print("verify:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


def _pairing_kwargs(cfg, seed):
    q = cfg["quadrature"]
    return dict(
        order=int(q["pairing_order"]),
        err_order=int(q["pairing_err_order"]),
        pred_order=int(q["prediction_order"]),
        pred_err_order=int(q["prediction_err_order"]),
        method=q["method"],
        mc_samples=int(q["mc_samples"]),
        rng=np.random.default_rng(seed),
    )


def cmd_compare(cfg, out_dir, seed, threads):
    center, shell, phis, quad = build_experiment(cfg)
    t0 = time.perf_counter()
    rows, records, error = [], [], None
    try:
        for i, phi in enumerate(phis):
            rec = cmp.compare_once(shell, phi, phi_index=i, quad=quad,
                                   **_pairing_kwargs(cfg, seed))
            records.append(rec)
            rows.append([rec.eps, rec.accel, *rec.delta, *rec.pred, rec.ratio,
                         rec.delta_err])
    except Exception as exc:   # partial results are flushed before aborting
        error = f"{type(exc).__name__}: {exc}"
    header = ["eps", "a_c", "delta_t", "delta_x", "delta_y", "delta_z",
              "pred_t", "pred_x", "pred_y", "pred_z", "ratio", "err_est"]
    _write_csv(out_dir / "results.csv", header, rows)
    report = {
        "command": "compare",
        "backend": kernels.BACKEND,
        "seed": seed,
        "threads": threads,
        "config": cfg,
        "records": [_record_dict(r) for r in records],
        "error": error,
        "wall_time_s": time.perf_counter() - t0,
    }
    (out_dir / "report.json").write_text(json.dumps(report, indent=2) + "\n")
    for rec in records:
        print(f"phi[{rec.phi_index}] eps={rec.eps:g}: |delta|="
              f"{np.linalg.norm(rec.delta):.6e} +- {rec.delta_err:.1e} "
              f"ratio={rec.ratio:.4f} -> {rec.verdict}")
    if error is not None:
        print(f"compare aborted: {error}", file=sys.stderr)
        return 1
    return 0


def cmd_sweep(cfg, out_dir, seed, threads):
    center, shell, phis, quad = build_experiment(cfg)
    sweep = cfg["sweep"]
    phi = phis[0]
    if "eps_values" in sweep:
        eps_list = [float(v) for v in sweep["eps_values"]]
    else:
        d0 = cmp.worldline_support_distance(center, phi)
        eps_list = [float(f) * d0 for f in sweep["eps_factors"]]
    if len(eps_list) < 3:
        raise ConfigError("sweep needs at least 3 radius values")
    t0 = time.perf_counter()
    rows, report_rec, error, rep = [], [], None, None
    try:
        rep = cmp.verdict_sweep(center, shell.sigma, shell.eps, phi, eps_list,
                                convention=sweep["convention"], quad=quad,
                                **_pairing_kwargs(cfg, seed))
        for rec in rep.records:
            rows.append([rec.eps, float(np.linalg.norm(rec.delta)),
                         float(np.linalg.norm(rec.pred)), rec.ratio])
            report_rec.append(_record_dict(rec))
    except Exception as exc:
        error = f"{type(exc).__name__}: {exc}"
    _write_csv(out_dir / "results.csv", ["eps", "norm_delta", "norm_pred", "ratio"],
               rows)
    report = {
        "command": "sweep",
        "backend": kernels.BACKEND,
        "seed": seed,
        "threads": threads,
        "config": cfg,
        "records": report_rec,
        "slope": None if rep is None else rep.slope,
        "slope_fit_residual": None if rep is None else rep.slope_residual,
        "smallest_eps_ratio": None if rep is None else rep.smallest_eps_ratio,
        "convention": sweep["convention"],
        "error": error,
        "wall_time_s": time.perf_counter() - t0,
    }
    (out_dir / "report.json").write_text(json.dumps(report, indent=2) + "\n")
    if rep is not None:
        print(f"sweep slope = {rep.slope:.4f}, smallest-eps ratio = "
              f"{rep.smallest_eps_ratio:.4f}")
    if error is not None:
        print(f"sweep aborted: {error}", file=sys.stderr)
        return 1
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="worldtube",
        description="world-tube shell vs point-charge retarded potential comparison",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("verify", "compare", "sweep"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON experiment config")
        p.add_argument("--out", default=None,
                       help="output directory (default: config out_dir or ./out)")
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads (default: WORLDTUBE_THREADS or 1)")
        p.add_argument("--seed", type=int, default=None,
                       help="RNG seed (default: config seed)")
    args = parser.parse_args(argv)

    threads = args.threads
    if threads is None:
        threads = int(os.environ.get("WORLDTUBE_THREADS", "1"))
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    seed = args.seed if args.seed is not None else int(cfg["seed"])
    out_dir = Path(args.out if args.out is not None else cfg["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        if args.command == "verify":
            return cmd_verify(cfg, out_dir, seed, threads)
        if args.command == "compare":
            return cmd_compare(cfg, out_dir, seed, threads)
        return cmd_sweep(cfg, out_dir, seed, threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
