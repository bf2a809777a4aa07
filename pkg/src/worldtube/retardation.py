"""Retarded proper-time solving on inertial and uniformly accelerated worldlines.

Given a field event x and a worldline r(s), the retarded time is the unique s
with (x - r(s)).(x - r(s)) = 0 and rho = -(x - r(s)).r'(s) > 0 (the past light
cone intersection).  The solver works on any object exposing position(s) and
tangent(s) (the parametric derivative; shell constituents are parametrized by
center time, so their tangent is not unit).

Algorithm: f(s) = -(x - r(s)).(x - r(s)) is positive inside the past cone and
negative between the retarded and advanced roots, so a bracket [lo, hi] with
f(lo) > 0 > f(hi) isolates the retarded root; it is located by geometric
expansion from an inertial-motion initial guess and polished by safeguarded
Newton with bisection fallback.  For hyperbolic motion, field points beyond the
null asymptote have no intersection: the bracket search exhausts the admissible
s-range with f of constant sign and raises HorizonError.

Everything is stateless; solves are independent and safe to run in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spacetime import lorentz_product

# Bracket expansion is capped at |s| = 1000/max(a, 1); hyperbolic worldlines
# recede exponentially, so the admissible window is small.  An additional
# |a s| <= 350 clamp keeps cosh/sinh (and their squares) finite in f.
_RANGE_NUM = 1.0e3
_ACCEL_RANGE = 350.0


class HorizonError(Exception):
    """No past light-cone intersection: x is outside the worldline's causal future."""


class OnWorldlineError(Exception):
    """Degenerate field point on (or numerically on) the worldline."""


@dataclass(frozen=True)
class RetardedSolution:
    """Retarded time s_ret, lightlike separation k = x - r(s_ret), rho = -k.r'(s_ret)."""

    s_ret: float
    k: np.ndarray
    rho: float


def _admissible_range(accel: float) -> float:
    bound = _RANGE_NUM / max(accel, 1.0)
    if accel > 0.0:
        bound = min(bound, _ACCEL_RANGE / accel)
    return bound


def solve_retarded(worldline, x, f_tol_scale=1e-13, max_iter=200) -> RetardedSolution:
    """Find the retarded proper time of `worldline` as seen from event x.

    Raises HorizonError when the bracket search exhausts the admissible range
    with f of constant sign, OnWorldlineError when x is on the worldline.
    """
    x = np.asarray(x, dtype=float)
    pos = worldline.position
    tan = getattr(worldline, "tangent", None) or worldline.velocity
    # rho is reported against the proper-time velocity; for worldlines
    # parametrized by center time (shell constituents) they differ by the
    # constant rate factor, which cancels in every potential formula
    vel = getattr(worldline, "velocity", None) or tan
    accel = float(getattr(worldline, "accel", 0.0))

    # Stable residual when the worldline provides one: the componentwise k.k
    # cancels catastrophically at large |a s|, which would corrupt the signs
    # the bracket search depends on.
    cone = getattr(worldline, "cone_residual", None)
    cone_prime = getattr(worldline, "cone_residual_prime", None)
    if cone is not None:
        def f(s):
            return -cone(x, s)
    else:
        def f(s):
            k = x - pos(s)
            return -lorentz_product(k, k)
    if cone_prime is not None:
        def fprime(s):
            return -cone_prime(x, s)
    else:
        def fprime(s):
            return 2.0 * lorentz_product(x - pos(s), tan(s))

    # inertial-motion estimate from the s = 0 data
    d = x - pos(0.0)
    du = lorentz_product(d, tan(0.0))
    dd = lorentz_product(d, d)
    dist2 = du * du + dd
    ftol = f_tol_scale * max(1.0, dist2)
    if dist2 <= ftol:
        raise OnWorldlineError(f"field point within tolerance of the worldline: {x!r}")
    dist = np.sqrt(max(dist2, 0.0))
    s0 = -du - dist

    bound = _admissible_range(accel)
    step = max(dist, 1e-3)

    # Walk down until f > 0 on the past side (rho > 0): out of the
    # [retarded, advanced] band where f < 0, and out of the far-future region
    # where f > 0 but rho < 0 (x in the causal past of r(s)).
    lo = float(np.clip(s0, -bound, bound))
    f_lo = f(lo)
    while f_lo < 0.0 or fprime(lo) > 0.0:
        if lo <= -bound:
            raise HorizonError(
                f"no retarded solution within |s| <= {bound:g} for x = {x!r}"
            )
        lo = max(lo - step, -bound)
        f_lo = f(lo)
        step *= 2.0

    # Expand upward, keeping lo in the past region (f > 0, f' < 0).  The sign
    # pair classifies where a proposal landed: f < 0 is inside the
    # [retarded, advanced] band (bracket found), f >= 0 with f' < 0 is still
    # the past region, and f >= 0 with f' > 0 means the step cleared the whole
    # band: shrink it.  Exhausting the range in the past region means the
    # past cone never reaches x.
    step = max(dist, 1e-3)
    hi = None
    for _ in range(max_iter):
        cand = min(lo + step, bound)
        f_c = f(cand)
        if f_c < 0.0:
            hi = cand
            break
        if fprime(cand) <= 0.0:
            if cand >= bound:
                raise HorizonError(
                    f"no retarded solution within |s| <= {bound:g} for x = {x!r}"
                )
            lo, f_lo = cand, f_c
            step *= 2.0
        else:
            step *= 0.5
            if step <= 4e-16 * (1.0 + abs(lo)):
                # tangency: the past cone only grazes the worldline; if the
                # grazing point is the field point itself, x is on the line
                k_lo = x - pos(lo)
                if float(np.max(np.abs(k_lo))) ** 2 <= 1e-10 * max(
                        1.0, float(np.max(np.abs(x))) ** 2):
                    raise OnWorldlineError(f"field point on the worldline: {x!r}")
                raise HorizonError(
                    f"no transversal retarded crossing near s = {lo!r} for x = {x!r}"
                )
    if hi is None:
        raise RuntimeError(f"bracket search did not terminate at x = {x!r}")

    # safeguarded Newton on f (f' = 2 k.tangent = -2 rho); bisect when a step
    # leaves the bracket or stalls
    s = 0.5 * (lo + hi)
    for _ in range(max_iter):
        fs = f(s)
        if fs > 0.0:
            lo = s
        elif fs < 0.0:
            hi = s
        if abs(fs) <= ftol:
            break
        df = fprime(s)
        s_new = s - fs / df if df != 0.0 else np.inf
        if not (lo < s_new < hi):
            s_new = 0.5 * (lo + hi)
        if hi - lo <= 4e-16 * (1.0 + abs(s)):
            s = s_new
            break
        s = s_new
    else:
        raise RuntimeError(f"retarded-time iteration did not converge at x = {x!r}")

    # Quadratic-convergence polish to machine precision, now on the
    # componentwise k.k: near the root its noise floor eps |k|^2 beats the
    # exponential form's eps |x - apex|^2 whenever the field point is far
    # from the apex (the stable form above is only needed for bracket signs).
    for _ in range(2):
        k = x - pos(s)
        dh = -2.0 * lorentz_product(k, tan(s))
        if dh == 0.0:
            break
        s = s - lorentz_product(k, k) / dh

    k = x - pos(s)
    rho = -lorentz_product(k, vel(s))
    if rho <= 0.0 or float(np.max(np.abs(k))) ** 2 <= ftol:
        raise OnWorldlineError(f"degenerate retarded solution at x = {x!r}")
    res = lorentz_product(k, k)
    if abs(res) > 1e-12 * max(1.0, float(np.max(np.abs(k))) ** 2):
        raise RuntimeError(f"retarded residual {res!r} out of tolerance at x = {x!r}")
    return RetardedSolution(float(s), k, float(rho))
