"""Order-by-order perturbation series for the field equation.

Writing the solution and its endpoint values as a power series in a
book-keeping parameter that multiplies mu (set to one when summing), each
order solves the same linear two-point problem

    nu*En'' = (1 - sigma + 2*sigma*x)*En + Rn(x),    En'(0) = 0 = En'(1),

whose homogeneous solutions are the scaled Airy pair A, B.  Collecting
powers of the cubic and endpoint-coupled terms gives, for n >= 2,

    Rn = (nu/2) * sum_{i+j+k=n} Ei*Ej*Ek
       + (nu/2) * x * sum_{i+j+k=n} [Ei(0)Ej(0) - Ei(1)Ej(1)] * Ek
       - (nu/2) * sum_{i+j+k=n} Ei(0)Ej(0) * Ek
       + (nu*tau/2) * sum_{i+j=n} [Ei(0)Ej(0) - Ei(1)Ej(1)]

with all indices >= 1, and R1 = -2*mu.  Each order is then solved in
closed form by variation of parameters, with the two boundary constants
fixed by the Neumann conditions.

Convolutions are O(n) per order through cached pair sums, so a 500-order
build on the default grid costs a few seconds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .airy import ScaledAiryBasis, scaled_basis
from .errors import ConvergenceError, DegenerateBasisError, GridMismatchError
from .mesh import Grid, GridFunction, cumulative_integral, max_abs_combined
from .params import Parameters
from .reference import ReferenceSolution

__all__ = ["SeriesTerm", "SeriesState", "rhs_term", "solve_term",
           "extend_series", "delta_n", "delta_sequence", "partial_sum",
           "series_residual", "solve_linear_neumann"]

MAX_ORDER = 500
_DEGENERATE_TOL = 1e-13


@dataclass(frozen=True)
class SeriesTerm:
    """One series order with its boundary-condition constants."""

    order: int
    profile: GridFunction
    end0: float
    end1: float
    d_a: float
    d_b: float


class SeriesState:
    """Series orders plus the running caches needed to extend them.

    Holds the sampled basis, every computed term, cumulative endpoint
    sums, the running partial-sum profile, and cached pair convolutions
    Q_m(x) = sum_{i+j=m} Ei(x)Ej(x).  Externally immutable between
    extend_series calls.
    """

    def __init__(self, params: Parameters, grid: Grid):
        self.params = params
        self.grid = grid
        self.basis: ScaledAiryBasis = scaled_basis(params)
        a, b, ap, bp = self.basis.sample(grid.nodes)
        self._a, self._b, self._ap, self._bp = a, b, ap, bp
        self.terms: list[SeriesTerm] = []
        self.partial_end0: list[float] = []
        self.partial_end1: list[float] = []
        self._vals: list[np.ndarray] = []
        self._rhs: list[np.ndarray] = []
        self._pair: dict[int, np.ndarray] = {}
        self._sum_vals = np.zeros(grid.size)
        self._sum_derivs = np.zeros(grid.size)
        self._sum_rhs = np.zeros(grid.size)

    @property
    def order(self) -> int:
        return len(self.terms)

    def _pair_sum(self, m: int) -> np.ndarray:
        q = self._pair.get(m)
        if q is None:
            q = np.zeros(self.grid.size)
            for i in range(1, m):
                q += self._vals[i - 1] * self._vals[m - i - 1]
            self._pair[m] = q
        return q


def solve_linear_neumann(rhs, u, up, v, vp, wronskian: float, stiffness: float,
                         grid: Grid, jacobian: float = 1.0):
    """Variation-of-parameters solve of a forced linear two-point problem.

    Solves stiffness*y'' - q*y = rhs with y' = 0 at both ends, where u, v
    are homogeneous solutions sampled on the grid, up, vp their derivatives
    in the physical coordinate, and wronskian = u*vp - up*v (constant).
    jacobian is the physical length of one unit of grid coordinate, applied
    to the running integrals.  Returns (y, y', d_a, d_b).
    """
    rhs = np.asarray(rhs, dtype=float)
    ib = jacobian * cumulative_integral(rhs * v, grid)
    ia = jacobian * cumulative_integral(rhs * u, grid)
    den = up[-1] * vp[0] - up[0] * vp[-1]
    if abs(den) < _DEGENERATE_TOL:
        raise DegenerateBasisError(
            f"boundary determinant {den:.3e} below {_DEGENERATE_TOL:g}")
    c = 1.0 / (stiffness * wronskian)
    d_a = vp[0] * (up[-1] * ib[-1] - vp[-1] * ia[-1]) * c / den
    d_b = -up[0] * d_a / vp[0]
    y = -c * (u * ib - v * ia) + d_a * u + d_b * v
    # The boundary terms of differentiating the running integrals cancel
    # identically, so the derivative is the same combination with u', v'.
    yp = -c * (up * ib - vp * ia) + d_a * up + d_b * vp
    return y, yp, d_a, d_b


def rhs_term(state: SeriesState, n: int) -> np.ndarray:
    """Forcing Rn of order n assembled from orders 1 .. n-1."""
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    if state.order < n - 1:
        raise GridMismatchError(
            f"state holds {state.order} orders, cannot form order {n}")
    p = state.params
    if n == 1:
        return np.full(state.grid.size, -2.0 * p.mu)
    x = state.grid.nodes
    cubic = np.zeros(state.grid.size)
    bsum_x = np.zeros(state.grid.size)
    bsum_0 = np.zeros(state.grid.size)
    for k in range(1, n - 1):
        q = state._pair_sum(n - k)
        ek = state._vals[k - 1]
        cubic += ek * q
        bsum_x += (q[0] - q[-1]) * ek
        bsum_0 += q[0] * ek
    pn = state._pair_sum(n)
    half_nu = 0.5 * p.nu
    return (half_nu * cubic + half_nu * x * bsum_x - half_nu * bsum_0
            + half_nu * p.tau * (pn[0] - pn[-1]))


def _solve_sampled(state: SeriesState, rn: np.ndarray, n: int) -> SeriesTerm:
    y, yp, d_a, d_b = solve_linear_neumann(
        rn, state._a, state._ap, state._b, state._bp,
        state.basis.wronskian, state.params.nu, state.grid)
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(yp))):
        raise ConvergenceError(f"series term overflowed at order {n}")
    profile = GridFunction(grid=state.grid, values=y, derivs=yp)
    return SeriesTerm(order=n, profile=profile, end0=float(y[0]),
                      end1=float(y[-1]), d_a=float(d_a), d_b=float(d_b))


def solve_term(params: Parameters, basis: ScaledAiryBasis, rn, grid: Grid) -> SeriesTerm:
    """Solve one order equation for a given forcing (order tag 0: ad hoc)."""
    rn = np.asarray(rn, dtype=float)
    if rn.shape != (grid.size,):
        raise GridMismatchError(
            f"forcing must have {grid.size} samples, got {rn.shape}")
    a, b, ap, bp = basis.sample(grid.nodes)
    y, yp, d_a, d_b = solve_linear_neumann(
        rn, a, ap, b, bp, basis.wronskian, params.nu, grid)
    profile = GridFunction(grid=grid, values=y, derivs=yp)
    return SeriesTerm(order=0, profile=profile, end0=float(y[0]),
                      end1=float(y[-1]), d_a=float(d_a), d_b=float(d_b))


def extend_series(state: SeriesState, up_to: int) -> SeriesState:
    """Compute all orders through up_to (a no-op if already there)."""
    if up_to > MAX_ORDER:
        raise ValueError(f"orders above {MAX_ORDER} are not supported")
    while state.order < up_to:
        n = state.order + 1
        rn = rhs_term(state, n)
        term = _solve_sampled(state, rn, n)
        state.terms.append(term)
        state._vals.append(term.profile.values)
        state._rhs.append(rn)
        state._sum_vals = state._sum_vals + term.profile.values
        state._sum_derivs = state._sum_derivs + term.profile.derivs
        state._sum_rhs = state._sum_rhs + rn
        prev0 = state.partial_end0[-1] if state.partial_end0 else 0.0
        prev1 = state.partial_end1[-1] if state.partial_end1 else 0.0
        state.partial_end0.append(prev0 + term.end0)
        state.partial_end1.append(prev1 + term.end1)
    return state


def partial_sum(state: SeriesState, n: int) -> GridFunction:
    """Partial-sum profile through order n."""
    if not 1 <= n <= state.order:
        raise GridMismatchError(f"state holds {state.order} orders, asked for {n}")
    if n == state.order:
        return GridFunction(grid=state.grid, values=state._sum_vals.copy(),
                            derivs=state._sum_derivs.copy())
    vals = np.sum(state._vals[:n], axis=0)
    derivs = np.sum([t.profile.derivs for t in state.terms[:n]], axis=0)
    return GridFunction(grid=state.grid, values=vals, derivs=derivs)


def delta_n(state: SeriesState, reference: ReferenceSolution, n: int) -> float:
    """Error measure: max over nodes of value plus derivative discrepancy."""
    return max_abs_combined(partial_sum(state, n), reference.profile)


def delta_sequence(state: SeriesState, reference: ReferenceSolution) -> np.ndarray:
    """delta_n for every computed order, in one cumulative pass."""
    vals = np.zeros(state.grid.size)
    derivs = np.zeros(state.grid.size)
    out = np.empty(state.order)
    rv = reference.profile.values
    rd = reference.profile.derivs
    for i, t in enumerate(state.terms):
        vals += t.profile.values
        derivs += t.profile.derivs
        out[i] = np.max(np.abs(vals - rv) + np.abs(derivs - rd))
    return out


def series_residual(state: SeriesState, n: int | None = None) -> float:
    """Residual of the full nonlinear equation at the partial sum.

    The second derivative of the sum is exact through the per-order
    identities nu*Ek'' = q*Ek + Rk, so this measures pure truncation.
    """
    p = state.params
    x = state.grid.nodes
    if n is None or n == state.order:
        s, sp = state._sum_vals, None
        sum_rhs = state._sum_rhs
    else:
        s = partial_sum(state, n).values
        sum_rhs = np.sum(state._rhs[:n], axis=0)
    q = 1.0 - p.sigma + 2.0 * p.sigma * x
    lhs = 2.0 * (q * s + sum_rhs)            # = 2*nu*E''
    d = s[0] ** 2 - s[-1] ** 2
    rhs = (p.nu * s ** 3 + (4.0 * p.sigma + p.nu * d) * x * s
           + (2.0 - 2.0 * p.sigma - p.nu * s[0] ** 2) * s
           + p.nu * p.tau * d - 4.0 * p.mu)
    return float(np.max(np.abs(lhs - rhs)))
