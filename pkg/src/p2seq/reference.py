"""Reference solve of the endpoint-coupled field boundary value problem.

The equation on 0 < x < 1 is

    2*nu*E'' = nu*E^3 + (4*sigma + nu*(E(0)^2 - E(1)^2))*x*E
               + (2 - 2*sigma - nu*E(0)^2)*E
               + nu*tau*(E(0)^2 - E(1)^2) - 4*mu,     E'(0) = 0 = E'(1),

where the unknown endpoint values appear inside the equation itself.  The
discretization treats that nonlocal coupling exactly: the unknown vector is
the full nodal set, so E(0) and E(1) are simply the first and last unknowns
and contribute two dense columns to an otherwise banded Jacobian.

Stencils are fourth order (five-point interior second differences, biased
six-point rows next to the boundary, five-point one-sided first-derivative
rows for the Neumann conditions).  Second-order differences would leave a
truncation error of order 1e-7 on the default 2049-node grid, which would
swamp the 1e-7 agreement floor required of the series comparisons; fourth
order puts the discrete solution within ~1e-11 of the true one.  Note that
the evaluated residual of any converged profile bottoms out at the float64
backward-error level eps * ||J|| * ||E|| (about 1e-7 at h = 1/2048 for
amplitude ~4), because nodal rounding alone perturbs the stiff stencil rows
by that much; see residual_floor.

Globalization is continuation in mu from the exact zero solution at mu = 0
in steps of at most 0.25, with a step-halving damped Newton iteration at
each continuation point.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ClassificationError, ConvergenceError, ParameterError
from .mesh import Grid, GridFunction
from .params import Parameters

__all__ = ["SolutionType", "ReferenceSolution", "solve_reference",
           "classify_type", "fd_derivative", "residual_floor"]

_MAX_CONT_STEP = 0.25
_MAX_NEWTON = 30
_MAX_HALVINGS = 20
_UPDATE_TOL = 1e-12

# One-sided five-point first derivative at the left end, coefficients / (12 h).
_D1_LEFT = np.array([-25.0, 48.0, -36.0, 16.0, -3.0])
# Four-point biased second derivative at the node next to the left end,
# coefficients / (12 h^2); exact through degree five.
_D2_NEXT = np.array([10.0, -15.0, -4.0, 14.0, -6.0, 1.0])


class SolutionType(enum.Enum):
    TYPE_A = "TypeA"   # positive, monotonically decreasing
    TYPE_B = "TypeB"   # negative, monotonically increasing
    NULL = "Null"      # identically zero (mu = 0)


@dataclass(frozen=True)
class ReferenceSolution:
    """Converged profile with endpoint values and classification."""

    params: Parameters
    profile: GridFunction
    e0: float
    e1: float
    solution_type: SolutionType
    residual_norm: float


def fd_derivative(values: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order finite-difference first derivative on a uniform mesh."""
    v = np.asarray(values, dtype=float)
    n = len(v)
    out = np.empty(n)
    out[2:-2] = (v[:-4] - 8.0 * v[1:-3] + 8.0 * v[3:-1] - v[4:]) / (12.0 * h)
    out[0] = np.dot(_D1_LEFT, v[:5]) / (12.0 * h)
    out[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2]
              - 6.0 * v[3] + v[4]) / (12.0 * h)
    out[-1] = -np.dot(_D1_LEFT, v[-5:][::-1]) / (12.0 * h)
    out[-2] = -(-3.0 * v[-1] - 10.0 * v[-2] + 18.0 * v[-3]
                - 6.0 * v[-4] + v[-5]) / (12.0 * h)
    return out


class _Discretization:
    """Static stencil data for one grid."""

    def __init__(self, grid: Grid):
        self.grid = grid
        n = grid.size
        h = grid.spacing
        rows, cols, vals = [], [], []

        def add(i, j, v):
            rows.append(i)
            cols.append(j)
            vals.append(v)

        c = 1.0 / (12.0 * h * h)
        for j, w in enumerate(_D2_NEXT):
            add(1, j, w * c)
            add(n - 2, n - 1 - j, w * c)
        main = np.arange(2, n - 2)
        for off, w in ((-2, -1.0), (-1, 16.0), (0, -30.0), (1, 16.0), (2, -1.0)):
            rows.extend(main)
            cols.extend(main + off)
            vals.extend(np.full(len(main), w * c))

        b = 1.0 / (12.0 * h)
        self.bc_left = np.zeros(n)
        self.bc_left[:5] = _D1_LEFT * b
        self.bc_right = np.zeros(n)
        self.bc_right[-5:] = -_D1_LEFT[::-1] * b

        # Static COO pattern pieces reused every Jacobian assembly.
        self._jrows = np.asarray(rows)
        self._jcols = np.asarray(cols)
        self._jvals = np.asarray(vals)


def _d2_apply(u: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order second differences at interior nodes, difference form.

    Every stencil has zero coefficient sum, so it is evaluated on nodal
    differences (scale h*u') rather than raw values (scale u); this keeps
    the roundoff floor of the residual near 1e-13 instead of 1e-8.
    Entries 0 and -1 of the result are unused and left at zero.
    """
    out = np.zeros_like(u)
    c = u[2:-2]
    out[2:-2] = (-(u[:-4] - c) + 16.0 * (u[1:-3] - c)
                 + 16.0 * (u[3:-1] - c) - (u[4:] - c))
    out[1] = (10.0 * (u[0] - u[1]) - 4.0 * (u[2] - u[1])
              + 14.0 * (u[3] - u[1]) - 6.0 * (u[4] - u[1]) + (u[5] - u[1]))
    out[-2] = (10.0 * (u[-1] - u[-2]) - 4.0 * (u[-3] - u[-2])
               + 14.0 * (u[-4] - u[-2]) - 6.0 * (u[-5] - u[-2])
               + (u[-6] - u[-2]))
    return out / (12.0 * h * h)


def _neumann_rows(u: np.ndarray, h: float) -> tuple[float, float]:
    """One-sided first derivatives at both ends, difference form."""
    left = (48.0 * (u[1] - u[0]) - 36.0 * (u[2] - u[0])
            + 16.0 * (u[3] - u[0]) - 3.0 * (u[4] - u[0])) / (12.0 * h)
    right = -(48.0 * (u[-2] - u[-1]) - 36.0 * (u[-3] - u[-1])
              + 16.0 * (u[-4] - u[-1]) - 3.0 * (u[-5] - u[-1])) / (12.0 * h)
    return left, right


def _residual(u: np.ndarray, disc: _Discretization, p: Parameters,
              mu: float) -> np.ndarray:
    x = disc.grid.nodes
    e0, e1 = u[0], u[-1]
    d = e0 * e0 - e1 * e1
    f = 2.0 * p.nu * _d2_apply(u, disc.grid.spacing)
    f -= (p.nu * u ** 3
          + (4.0 * p.sigma + p.nu * d) * x * u
          + (2.0 - 2.0 * p.sigma - p.nu * e0 * e0) * u
          + p.nu * p.tau * d - 4.0 * mu)
    f[0], f[-1] = _neumann_rows(u, disc.grid.spacing)
    return f


def _jacobian(u: np.ndarray, disc: _Discretization, p: Parameters) -> sp.csc_matrix:
    n = disc.grid.size
    x = disc.grid.nodes
    e0, e1 = u[0], u[-1]
    d = e0 * e0 - e1 * e1

    rows = [disc._jrows]
    cols = [disc._jcols]
    vals = [2.0 * p.nu * disc._jvals]

    interior = np.arange(1, n - 1)
    diag = -(3.0 * p.nu * u[interior] ** 2
             + (4.0 * p.sigma + p.nu * d) * x[interior]
             + (2.0 - 2.0 * p.sigma - p.nu * e0 * e0))
    rows.append(interior)
    cols.append(interior)
    vals.append(diag)

    col0 = -2.0 * p.nu * e0 * (x[interior] * u[interior] - u[interior] + p.tau)
    rows.append(interior)
    cols.append(np.zeros_like(interior))
    vals.append(col0)

    coln = 2.0 * p.nu * e1 * (x[interior] * u[interior] + p.tau)
    rows.append(interior)
    cols.append(np.full_like(interior, n - 1))
    vals.append(coln)

    bcols = np.arange(5)
    rows.append(np.zeros(5, dtype=int))
    cols.append(bcols)
    vals.append(disc.bc_left[:5])
    rows.append(np.full(5, n - 1, dtype=int))
    cols.append(n - 5 + bcols)
    vals.append(disc.bc_right[-5:])

    j = sp.coo_matrix((np.concatenate(vals),
                       (np.concatenate(rows), np.concatenate(cols))),
                      shape=(n, n))
    return j.tocsc()


def residual_floor(nu: float, h: float, amplitude: float) -> float:
    """Backward-error level of the interior residual rows in float64.

    Rounding each nodal value to the nearest double perturbs the stencil
    rows by up to eps * 2*nu * (64/12) / h^2 * |E|; no double-precision
    nodal vector can push the evaluated residual below this, so it is the
    honest convergence bar whenever it exceeds the requested tolerance.
    """
    eps = float(np.finfo(float).eps)
    return eps * 2.0 * nu * (64.0 / 12.0) / (h * h) * max(1.0, amplitude)


def _newton(u: np.ndarray, disc: _Discretization, p: Parameters, mu: float,
            tol: float) -> tuple[np.ndarray, float]:
    h = disc.grid.spacing
    f = _residual(u, disc, p, mu)
    fnorm = float(np.max(np.abs(f)))
    for _ in range(_MAX_NEWTON):
        bar = max(tol, residual_floor(p.nu, h, float(np.max(np.abs(u)))))
        delta = spla.spsolve(_jacobian(u, disc, p), -f)
        lam = 1.0
        for _ in range(_MAX_HALVINGS):
            u_try = u + lam * delta
            f_try = _residual(u_try, disc, p, mu)
            fnorm_try = float(np.max(np.abs(f_try)))
            if fnorm_try < fnorm or fnorm_try <= bar:
                break
            lam *= 0.5
        else:
            raise ConvergenceError(
                f"damped Newton stalled at mu={mu:g} (residual {fnorm:.3e})",
                residual=fnorm)
        u, f, fnorm = u_try, f_try, fnorm_try
        scale = max(1.0, float(np.max(np.abs(u))))
        if lam * float(np.max(np.abs(delta))) <= _UPDATE_TOL * scale and fnorm <= bar:
            return u, fnorm
    raise ConvergenceError(
        f"Newton did not converge at mu={mu:g} (residual {fnorm:.3e})",
        residual=fnorm)


def solve_reference(params: Parameters, grid: Grid,
                    tol: float = 1e-10) -> ReferenceSolution:
    """Solve the field equation with its own endpoint values coupled in.

    Continuation starts from the exact zero solution at mu = 0 and walks to
    the requested mu in steps of at most 0.25, halving the step (down to
    1/64) wherever Newton fails.  Raises ConvergenceError if a point cannot
    be reached, ParameterError for an invalid quadruple or tolerance.
    """
    if not isinstance(params, Parameters):
        raise ParameterError("solve_reference expects a Parameters instance")
    if tol < 1e-12:
        raise ParameterError(f"tol must be >= 1e-12, got {tol:g}")
    disc = _Discretization(grid)
    n = grid.size
    u = np.zeros(n)

    mu_now = 0.0
    step = _MAX_CONT_STEP
    while mu_now != params.mu:
        remaining = params.mu - mu_now
        if abs(remaining) <= step:
            mu_next = params.mu
        else:
            mu_next = mu_now + step * np.sign(remaining)
        try:
            u_next, _ = _newton(u.copy(), disc, params, mu_next, tol)
        except ConvergenceError:
            if step <= _MAX_CONT_STEP / 256.0:
                raise
            step *= 0.5
            continue
        u, mu_now = u_next, mu_next

    f = _residual(u, disc, params, params.mu)
    residual_norm = float(np.max(np.abs(f[1:-1])))
    derivs = fd_derivative(u, grid.spacing)
    profile = GridFunction(grid=grid, values=u, derivs=derivs)
    if params.mu > 0:
        expected = SolutionType.TYPE_A
    elif params.mu < 0:
        expected = SolutionType.TYPE_B
    else:
        expected = SolutionType.NULL
    sol = ReferenceSolution(params=params, profile=profile,
                            e0=float(u[0]), e1=float(u[-1]),
                            solution_type=expected,
                            residual_norm=residual_norm)
    observed = classify_type(sol)
    if observed is not expected:
        raise ClassificationError(
            f"solution classified as {observed.value} but mu={params.mu:g} "
            f"implies {expected.value}")
    return sol


def classify_type(sol: ReferenceSolution,
                  zero_tol: float = 1e-10,
                  slope_tol: float = 1e-8) -> SolutionType:
    """Sign/monotonicity classification of a converged profile.

    Positive and non-increasing is one class, negative and non-decreasing
    the other, identically zero is the null class; anything else raises
    ClassificationError (a converged solve cannot produce it).
    """
    v = sol.profile.values
    dv = sol.profile.derivs
    if np.max(np.abs(v)) <= zero_tol:
        return SolutionType.NULL
    if np.min(v) > 0.0 and np.max(dv) <= slope_tol:
        return SolutionType.TYPE_A
    if np.max(v) < 0.0 and np.min(dv) >= -slope_tol:
        return SolutionType.TYPE_B
    raise ClassificationError(
        "profile is neither positive-decreasing nor negative-increasing")
