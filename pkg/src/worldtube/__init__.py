"""worldtube: retarded potentials of a rigid charged shell vs a central point charge.

Builds the world tube of a uniformly accelerated (or inertial) rigid spherical
shell in Minkowski spacetime, solves retarded times on its constituent
worldlines, computes shell and Lienard-Wiechert point potentials, pairs both
against compactly supported test functions, and verifies that they agree for
inertial motion but differ at leading order eps^2 under uniform acceleration,
matching the closed-form difference.
"""

from ._kernels import BACKEND
from .compare import (
    KAPPA,
    BumpTestFunction,
    PairingResult,
    lw_point_potential,
    pair_current_direct,
    pair_potential_with_test,
    predicted_difference,
    shell_potential,
    verdict,
    verdict_sweep,
)
from .retardation import HorizonError, OnWorldlineError, RetardedSolution, solve_retarded
from .tube import ShellConfig, SphereQuadrature, sphere_quadrature
from .worldline import ShellConstituent, UniformWorldline

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "KAPPA",
    "BumpTestFunction",
    "HorizonError",
    "OnWorldlineError",
    "PairingResult",
    "RetardedSolution",
    "ShellConfig",
    "ShellConstituent",
    "SphereQuadrature",
    "UniformWorldline",
    "lw_point_potential",
    "pair_current_direct",
    "pair_potential_with_test",
    "predicted_difference",
    "shell_potential",
    "solve_retarded",
    "sphere_quadrature",
    "verdict",
    "verdict_sweep",
    "__version__",
]
