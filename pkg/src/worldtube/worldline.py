"""Uniformly accelerated and inertial worldlines and the rigid shell constituents.

The center worldline is

    r_c(s) = x0 + u * sinh(a s)/a + n * (cosh(a s) - 1)/a,

with proper time s, acceleration magnitude a >= 0, absolute velocity u and unit
spacelike direction n (u.n = 0).  a = 0 is inertial motion, handled by an
explicit branch plus series-stable sinh(x)/x style helpers so that a -> 0 is
continuous.

Shell constituents are the worldlines r_c(s) + eps * L(s).n for directions n on
the unit sphere of u-spacelike vectors, where L(s) is the boost from u to the
instantaneous velocity.  All public constituent APIs are parametrized by the
CENTER proper time s (the synchronization parameter); the constituent's own
proper time is derived as (1 + eps a (n_c.n)) s, never an input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import spacetime as st
from .spacetime import lorentz_product, tensor

_SERIES_CUTOFF = 1e-4


def _sinhc(x):
    """sinh(x)/x, series-stable near zero."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SERIES_CUTOFF
    xs = np.where(small, 0.0, x)
    x2 = x * x
    series = 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        direct = np.sinh(xs) / np.where(small, 1.0, xs)
    return np.where(small, series, direct)


def _coshm1_over(x):
    """(cosh(x) - 1)/x, series-stable near zero."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SERIES_CUTOFF
    xs = np.where(small, 1.0, x)
    x2 = x * x
    series = x / 2.0 * (1.0 + x2 / 12.0 * (1.0 + x2 / 30.0))
    # 2 sinh^2(x/2) keeps full relative precision in cosh(x) - 1
    direct = 2.0 * np.sinh(xs / 2.0) ** 2 / xs
    return np.where(small, series, direct)


def _coshm1(x):
    """cosh(x) - 1 without cancellation."""
    return 2.0 * np.sinh(np.asarray(x, dtype=float) / 2.0) ** 2


def _hyperbola_params(x0, u, nd, accel, scale):
    """Apex and radius of p(s) = apex + m (u sinh(a s) + nd cosh(a s)).

    scale multiplies the base radius 1/a (constituents have m = 1/a + eps mu).
    """
    m = scale / accel
    return x0 - nd * m, m


def _hyperbola_residual(x0, u, nd, accel, scale, x, s):
    """k.k for the (possibly offset) hyperbola, exponential-form stable."""
    x = np.asarray(x, dtype=float)
    if accel == 0.0:
        d = x - x0
        return lorentz_product(d, d) - 2.0 * s * lorentz_product(d, u) - s * s
    apex, m = _hyperbola_params(x0, u, nd, accel, scale)
    xi = x - apex
    T = -lorentz_product(xi, u)
    X = lorentz_product(xi, nd)
    e = np.exp(accel * np.asarray(s, dtype=float))
    # X cosh - T sinh = ((X - T) e + (X + T)/e)/2 without large-argument loss
    return lorentz_product(xi, xi) + m * m - m * ((X - T) * e + (X + T) / e)


def _hyperbola_residual_prime(x0, u, nd, accel, scale, x, s):
    """d/ds of _hyperbola_residual: equals -2 k.z with z the parametric tangent."""
    x = np.asarray(x, dtype=float)
    if accel == 0.0:
        d = x - x0
        return -2.0 * lorentz_product(d, u) - 2.0 * s
    apex, m = _hyperbola_params(x0, u, nd, accel, scale)
    xi = x - apex
    T = -lorentz_product(xi, u)
    X = lorentz_product(xi, nd)
    e = np.exp(accel * np.asarray(s, dtype=float))
    # X sinh - T cosh = ((X - T) e - (X + T)/e)/2
    return -m * accel * ((X - T) * e - (X + T) / e)


@dataclass(frozen=True)
class UniformWorldline:
    """Center worldline data (x0, u, n, accel); accel = 0 encodes inertial motion."""

    x0: np.ndarray
    u: np.ndarray
    n: np.ndarray
    accel: float

    def __post_init__(self):
        x0 = np.asarray(self.x0, dtype=float).copy()
        if x0.shape != (4,):
            raise ValueError(f"x0 must have shape (4,), got {x0.shape}")
        u = st.check_velocity(self.u).copy()
        n = st.check_unit_spacelike(self.n, u).copy()
        if not (self.accel >= 0.0 and np.isfinite(self.accel)):
            raise ValueError(f"accel must be finite and >= 0, got {self.accel!r}")
        for arr in (x0, u, n):
            arr.setflags(write=False)
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "accel", float(self.accel))

    @classmethod
    def inertial(cls, x0, u, n=None):
        """Inertial worldline; n is irrelevant and defaulted when omitted."""
        u = st.check_velocity(u)
        if n is None:
            n = st.orthonormal_spatial_triad(u)[0]
        return cls(x0, u, n, 0.0)

    def position(self, s):
        """r_c(s); broadcasts over s."""
        s = np.asarray(s, dtype=float)
        sc = s[..., None]
        if self.accel == 0.0:
            return self.x0 + self.u * sc
        x = self.accel * sc
        return self.x0 + self.u * (sc * _sinhc(x)) + self.n * (sc * _coshm1_over(x))

    def velocity(self, s):
        """Absolute velocity u cosh(a s) + n sinh(a s); broadcasts over s."""
        s = np.asarray(s, dtype=float)
        x = (self.accel * s)[..., None]
        return self.u * np.cosh(x) + self.n * np.sinh(x)

    def acceleration(self, s):
        """a (u sinh(a s) + n cosh(a s)); broadcasts over s."""
        s = np.asarray(s, dtype=float)
        x = (self.accel * s)[..., None]
        return self.accel * (self.u * np.sinh(x) + self.n * np.cosh(x))

    # solve_retarded duck-typing: the parametric derivative equals the velocity
    tangent = velocity

    def boost(self, s):
        """L(s): the rotation-free boost from u to velocity(s)."""
        return st.boost(self.u, self.velocity(float(s)))

    def boost_dot(self, s):
        """dL/ds in closed form (derivative of the boost formula)."""
        v = self.velocity(float(s))
        vdot = self.acceleration(float(s))
        w = v + self.u
        denom = 1.0 - lorentz_product(v, self.u)
        return (
            (tensor(vdot, w) + tensor(w, vdot)) / denom
            + tensor(w, w) * (lorentz_product(vdot, self.u) / denom**2)
            - 2.0 * tensor(vdot, self.u)
        )

    def boost_apply_sphere(self, s, n):
        """L(s).n for n in S_c(1), via the closed form.

        L(s).n = n + (n_c.n)(u sinh(a s) + n_c (cosh(a s) - 1)); broadcasts over
        s and over rows of n.
        """
        n = np.asarray(n, dtype=float)
        s = np.asarray(s, dtype=float)
        x = (self.accel * s)[..., None]
        mu = lorentz_product(self.n, n)[..., None]
        return n + mu * (self.u * np.sinh(x) + self.n * _coshm1(x))

    def boost_dot_apply_sphere(self, s, n):
        """dL/ds.n = (n_c.n) a (u cosh(a s) + n_c sinh(a s)) for n in S_c(1)."""
        n = np.asarray(n, dtype=float)
        s = np.asarray(s, dtype=float)
        x = (self.accel * s)[..., None]
        mu = lorentz_product(self.n, n)[..., None]
        return mu * self.accel * (self.u * np.cosh(x) + self.n * np.sinh(x))

    def cone_residual(self, x, s):
        """(x - r(s)).(x - r(s)) in a cancellation-free form.

        The componentwise evaluation loses all digits once |a s| is large
        (the squares grow like exp(2|a s|) while the result grows like
        exp(|a s|)); the exponential form below stays sign-accurate over the
        whole bracket-search range, which the retarded solver relies on.
        """
        return _hyperbola_residual(self.x0, self.u, self.n, self.accel, 1.0, x, s)

    def cone_residual_prime(self, x, s):
        """d/ds of cone_residual; equals -2 (x - r(s)).r'(s)."""
        return _hyperbola_residual_prime(self.x0, self.u, self.n, self.accel,
                                         1.0, x, s)


def sync_radius(w: UniformWorldline, x):
    """Distance from the center worldline to event x at the synchronization instant.

    The world tube of radius eps is exactly the level set sync_radius = eps, so
    this is the interior/exterior test.  Events outside the synchronization
    wedge of a hyperbolic worldline cannot lie in any tube; they get +inf.
    """
    x = np.asarray(x, dtype=float)
    a = w.accel
    if a == 0.0:
        d = x - w.x0
        du = lorentz_product(d, w.u)
        return float(np.sqrt(max(lorentz_product(d, d) + du * du, 0.0)))
    xi = x - (w.x0 - w.n / a)
    T = -lorentz_product(xi, w.u)
    X = lorentz_product(xi, w.n)
    if X <= abs(T):
        return np.inf
    perp2 = max(lorentz_product(xi, xi) + T * T - X * X, 0.0)
    return float(np.sqrt((np.sqrt(X * X - T * T) - 1.0 / a) ** 2 + perp2))


@dataclass(frozen=True)
class ShellConstituent:
    """One shell worldline: direction n in S_c(1) at radius eps from the center.

    Requires 1 + eps a (n_c.n) > 0 (the tube stays inside the Rindler wedge);
    the constituent's proper acceleration is a / (1 + eps a (n_c.n)).
    """

    parent: UniformWorldline
    eps: float
    n: np.ndarray

    def __post_init__(self):
        if not (self.eps >= 0.0 and np.isfinite(self.eps)):
            raise ValueError(f"eps must be finite and >= 0, got {self.eps!r}")
        n = st.check_unit_spacelike(self.n, self.parent.u).copy()
        n.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "eps", float(self.eps))
        if self.rate <= 0.0:
            raise ValueError(
                f"constituent leaves the Rindler wedge: 1 + eps*a*(n_c.n) = {self.rate!r}"
            )

    @property
    def mu(self) -> float:
        """n_c.n"""
        return float(lorentz_product(self.parent.n, self.n))

    @property
    def rate(self) -> float:
        """d(constituent proper time)/d(center proper time) = 1 + eps a (n_c.n)."""
        return 1.0 + self.eps * self.parent.accel * self.mu

    @property
    def accel(self) -> float:
        """Proper acceleration magnitude a / (1 + eps a (n_c.n))."""
        return self.parent.accel / self.rate

    def proper_time(self, s):
        """Constituent proper time at center proper time s."""
        return self.rate * np.asarray(s, dtype=float)

    def position(self, s):
        """r_c(s) + eps L(s).n; broadcasts over s."""
        w = self.parent
        return w.position(s) + self.eps * w.boost_apply_sphere(s, self.n)

    def tangent(self, s):
        """z(s, n) = d position/ds = r_c'(s) + eps L'(s).n.

        Satisfies z.z = -(1 + eps a (n_c.n))^2; equals rate * velocity(s).
        """
        w = self.parent
        return w.velocity(s) + self.eps * w.boost_dot_apply_sphere(s, self.n)

    def velocity(self, s):
        """The constituent's absolute velocity (unit tangent) at center time s."""
        return self.tangent(s) / self.rate

    def cone_residual(self, x, s):
        """(x - p(s)).(x - p(s)), exponential-form stable (see UniformWorldline)."""
        w = self.parent
        base = w.x0 + self.eps * np.asarray(self.n)
        if w.accel == 0.0:
            return _hyperbola_residual(base, w.u, w.n, 0.0, 1.0, x, s)
        return _hyperbola_residual(base, w.u, w.n, w.accel, self.rate, x, s)

    def cone_residual_prime(self, x, s):
        """d/ds of cone_residual; equals -2 (x - p(s)).z(s)."""
        w = self.parent
        base = w.x0 + self.eps * np.asarray(self.n)
        if w.accel == 0.0:
            return _hyperbola_residual_prime(base, w.u, w.n, 0.0, 1.0, x, s)
        return _hyperbola_residual_prime(base, w.u, w.n, w.accel, self.rate, x, s)
