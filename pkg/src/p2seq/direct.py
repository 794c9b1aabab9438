"""Ordinary perturbation of Painleve II about y = 0 on a fixed interval.

Replacing the constant C by eps*C and expanding y in powers of eps turns
y'' = 2y^3 + z*y + C on [a, b] with Neumann conditions into one linear
problem per order,

    y_n'' - z*y_n = S_n,   S_1 = C,   S_n = 2 * sum_{i+j+k=n} y_i y_j y_k,

each solved by variation of parameters with the plain Airy kernel (the
Wronskian of Ai and Bi is 1/pi).  Quadratures run on the unit grid under
the affine map z = a + (b - a)*x.

Whether the resulting partial sums approach the converted reference
profile depends on the instance: they do when the cubic term is uniformly
small against z*y and C, and they blow up when it is not.  The divergence
verdict fires on a monotone growth of the sup discrepancy by a factor of
ten across ten consecutive orders (or on overflow).
"""

from __future__ import annotations

import math

import numpy as np

from .airy import airy_quads
from .conversion import PiiInstance, PiiProfile
from .errors import GridMismatchError
from .mesh import Grid
from .series import solve_linear_neumann

__all__ = ["DirectSeriesState", "direct_term", "direct_partial_sums",
           "nonlinearity_ratios", "DIVERGENCE_CAP"]

DIVERGENCE_CAP = 60
_GROWTH_WINDOW = 10
_GROWTH_FACTOR = 10.0
_CONVERGED_TOL = 1e-6


class DirectSeriesState:
    """Direct-series orders on one instance, with running caches."""

    def __init__(self, instance: PiiInstance, grid: Grid):
        self.instance = instance
        self.grid = grid
        self.z = instance.a + (instance.b - instance.a) * grid.nodes
        ai, bi, aip, bip = airy_quads(self.z)
        self._u, self._v, self._up, self._vp = ai, bi, aip, bip
        self.terms: list[np.ndarray] = []
        self.term_derivs: list[np.ndarray] = []
        self._pair: dict[int, np.ndarray] = {}
        self._sum_vals = np.zeros(grid.size)
        self.overflowed_at: int | None = None

    @property
    def order(self) -> int:
        return len(self.terms)

    def _pair_sum(self, m: int) -> np.ndarray:
        q = self._pair.get(m)
        if q is None:
            q = np.zeros(self.grid.size)
            for i in range(1, m):
                q += self.terms[i - 1] * self.terms[m - i - 1]
            self._pair[m] = q
        return q


def direct_term(state: DirectSeriesState, n: int) -> np.ndarray:
    """Compute, store and return the order-n profile (values on the z grid)."""
    if state.order != n - 1:
        raise GridMismatchError(
            f"state holds {state.order} orders, cannot form order {n}")
    if n == 1:
        rhs = np.full(state.grid.size, state.instance.c)
    else:
        rhs = np.zeros(state.grid.size)
        for k in range(1, n - 1):
            rhs += state._pair_sum(n - k) * state.terms[k - 1]
        rhs *= 2.0
    with np.errstate(over="ignore", invalid="ignore"):
        y, yp, _, _ = solve_linear_neumann(
            rhs, state._u, state._up, state._v, state._vp,
            1.0 / math.pi, 1.0, state.grid,
            jacobian=state.instance.b - state.instance.a)
    if not np.all(np.isfinite(y)):
        state.overflowed_at = n
        y = np.where(np.isfinite(y), y, np.inf)
    state.terms.append(y)
    state.term_derivs.append(yp)
    state._sum_vals = state._sum_vals + y
    return y


def direct_partial_sums(state: DirectSeriesState, reference: PiiProfile,
                        up_to: int) -> tuple[np.ndarray, str]:
    """Sup-norm discrepancies of the partial sums against a reference.

    Returns (discrepancies, verdict) with one entry per order 1..up_to and
    verdict one of "converged", "diverged", "undecided".  Orders past an
    overflow are reported as inf without being computed.
    """
    if len(reference.values) != state.grid.size:
        raise GridMismatchError("reference profile lives on a different grid")
    disc = np.full(up_to, np.inf)
    vals = np.zeros(state.grid.size)
    for n in range(1, up_to + 1):
        if state.overflowed_at is not None and state.order < n:
            break
        if state.order < n:
            direct_term(state, n)
        vals = vals + state.terms[n - 1]
        with np.errstate(invalid="ignore"):
            d = np.max(np.abs(vals - reference.values))
        disc[n - 1] = d if np.isfinite(d) else np.inf
        if state.overflowed_at == n:
            break
    verdict = "undecided"
    if _fires_growth(disc):
        verdict = "diverged"
    elif np.nanmin(disc) <= _CONVERGED_TOL:
        verdict = "converged"
    return disc, verdict


def _fires_growth(disc: np.ndarray) -> bool:
    if np.any(~np.isfinite(disc)):
        return True
    for i in range(len(disc) - _GROWTH_WINDOW + 1):
        w = disc[i:i + _GROWTH_WINDOW]
        if np.all(np.diff(w) > 0) and w[-1] >= _GROWTH_FACTOR * w[0]:
            return True
    return False


def nonlinearity_ratios(profile: PiiProfile, c: float) -> tuple[float, float]:
    """Pointwise size of the cubic term against z*y and against c.

    Returns (max |2y^3 / (z y)|, max |2y^3 / c|); small values of both are
    what make the direct expansion behave.
    """
    y = profile.values
    with np.errstate(divide="ignore"):
        r1 = float(np.max(np.abs(2.0 * y * y / profile.z)))
    r2 = float(np.max(np.abs(2.0 * y ** 3 / c)))
    return r1, r2
