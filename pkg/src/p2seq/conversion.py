"""Conversion of field profiles into Painleve II data on moving intervals.

A solution E of the field equation with endpoint values E(0), E(1) maps to
a solution y of  y'' = 2y^3 + z*y + C  on [a, b] with zero endpoint slopes
through

    beta  = (2*sigma/nu + (E(0)^2 - E(1)^2)/2)^(1/3)
    gamma = (1 - sigma - nu*E(0)^2/2) / (nu*beta^2) = a,   b = a + beta
    C     = (nu*tau*(E(0)^2 - E(1)^2) - 4*mu) / (4*nu*beta^3)
    y(z)  = E((z - gamma)/beta) / (2*beta).

Applying the same map to each series partial sum yields a *sequence* of
approximants, each living on its own interval [a_n, b_n] with its own
constant C_n; as the partial sums converge, the intervals and constants
converge along with the profiles.  Partial sums carry no positivity
guarantee for the cube-root argument, so per-order conversions flag
invalid entries instead of failing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridMismatchError, InvalidConversionError
from .mesh import MIN_NODES, GridFunction
from .params import Parameters
from .series import SeriesState

__all__ = ["PiiInstance", "PiiProfile", "ExtraordinaryApproximant",
           "convert", "convert_profile", "extraordinary_sequence",
           "pii_residual"]


@dataclass(frozen=True)
class PiiInstance:
    """Interval [a, b] and constant c of one Painleve II problem."""

    a: float
    b: float
    c: float
    beta: float
    gamma: float


@dataclass(frozen=True)
class PiiProfile:
    """A function and its derivative sampled on [a, b]."""

    z: np.ndarray
    values: np.ndarray
    derivs: np.ndarray


@dataclass(frozen=True)
class ExtraordinaryApproximant:
    """One converted partial sum; instance and profile are None if invalid."""

    order: int
    instance: PiiInstance | None
    profile: PiiProfile | None
    valid: bool


def _cube_root_argument(e0: float, e1: float, params: Parameters) -> float:
    return 2.0 * params.sigma / params.nu + 0.5 * (e0 * e0 - e1 * e1)


def convert(e0: float, e1: float, params: Parameters) -> PiiInstance:
    """Interval and constant generated by endpoint values (e0, e1).

    Exact solutions always give a positive cube-root argument; for other
    inputs a non-positive argument raises InvalidConversionError.
    """
    arg = _cube_root_argument(e0, e1, params)
    if not arg > 0.0:
        raise InvalidConversionError(
            f"cube root argument {arg:.6g} is not positive")
    beta = arg ** (1.0 / 3.0)
    gamma = (1.0 - params.sigma - 0.5 * params.nu * e0 * e0) / (params.nu * beta * beta)
    c = (params.nu * params.tau * (e0 * e0 - e1 * e1) - 4.0 * params.mu) \
        / (4.0 * params.nu * arg)
    return PiiInstance(a=gamma, b=gamma + beta, c=c, beta=beta, gamma=gamma)


def convert_profile(sol: GridFunction, inst: PiiInstance) -> PiiProfile:
    """Map a profile on [0, 1] onto [a, b]: y = E/(2 beta), y' = E'/(2 beta^2)."""
    z = inst.gamma + inst.beta * sol.grid.nodes
    return PiiProfile(z=z,
                      values=sol.values / (2.0 * inst.beta),
                      derivs=sol.derivs / (2.0 * inst.beta ** 2))


def extraordinary_sequence(state: SeriesState, up_to: int) -> list[ExtraordinaryApproximant]:
    """Convert every partial sum through order up_to, one interval each."""
    if state.order < up_to:
        raise GridMismatchError(
            f"state holds {state.order} orders, asked for {up_to}")
    out = []
    vals = np.zeros(state.grid.size)
    derivs = np.zeros(state.grid.size)
    for n in range(1, up_to + 1):
        term = state.terms[n - 1]
        vals = vals + term.profile.values
        derivs = derivs + term.profile.derivs
        e0 = state.partial_end0[n - 1]
        e1 = state.partial_end1[n - 1]
        try:
            inst = convert(e0, e1, state.params)
        except InvalidConversionError:
            out.append(ExtraordinaryApproximant(order=n, instance=None,
                                                profile=None, valid=False))
            continue
        prof = convert_profile(
            GridFunction(grid=state.grid, values=vals, derivs=derivs), inst)
        out.append(ExtraordinaryApproximant(order=n, instance=inst,
                                            profile=prof, valid=True))
    return out


def pii_residual(profile: PiiProfile, inst: PiiInstance) -> float:
    """Max-norm residual of y'' - 2y^3 - z*y - c at interior nodes.

    The second derivative is formed by central differences of the sampled
    values, so the result carries an O(h^2) discretization floor.
    """
    n = len(profile.z)
    if n < MIN_NODES:
        raise GridMismatchError(
            f"profile needs at least {MIN_NODES} nodes, got {n}")
    h = (inst.b - inst.a) / (n - 1)
    y = profile.values
    ypp = (y[:-2] - 2.0 * y[1:-1] + y[2:]) / (h * h)
    zi = profile.z[1:-1]
    yi = y[1:-1]
    return float(np.max(np.abs(ypp - 2.0 * yi ** 3 - zi * yi - inst.c)))
