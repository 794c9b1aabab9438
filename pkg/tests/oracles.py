"""Independent numerical oracles used by the test suite.

Everything here deliberately avoids the package's own solution paths: the
linear two-point solves use second-order finite differences with ghost
nodes (the package uses Airy kernels and quadrature), and the expansion
oracle extracts series orders from the full nonlinear equation by generic
truncated power-series arithmetic (the package uses a closed-form forcing
recursion).  Richardson extrapolation of the two-resolution FD results
gives the oracles ~1e-9 accuracy, comfortably below the 1e-6 comparison
tolerances.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_banded


def fd_linear_neumann(q_vals: np.ndarray, rhs: np.ndarray, length: float,
                      stiffness: float = 1.0) -> np.ndarray:
    """Second-order FD solve of stiffness*y'' - q*y = rhs, y'(ends) = 0.

    The grid is uniform with the given physical length; Neumann conditions
    are imposed by ghost-node elimination.
    """
    n = len(q_vals)
    h = length / (n - 1)
    c = stiffness / (h * h)
    ab = np.zeros((3, n))
    ab[0, 1:] = c
    ab[2, :-1] = c
    ab[1, :] = -2.0 * c - q_vals
    ab[0, 1] = 2.0 * c
    ab[2, -2] = 2.0 * c
    return solve_banded((1, 1), ab, np.asarray(rhs, dtype=float))


def fd_linear_neumann_rich(q_of_x, rhs_of_x, length: float, n_coarse: int,
                           stiffness: float = 1.0) -> np.ndarray:
    """Richardson-extrapolated FD solve, returned on the coarse nodes."""
    xc = np.linspace(0.0, 1.0, n_coarse)
    xf = np.linspace(0.0, 1.0, 2 * n_coarse - 1)
    yc = fd_linear_neumann(q_of_x(xc), rhs_of_x(xc), length, stiffness)
    yf = fd_linear_neumann(q_of_x(xf), rhs_of_x(xf), length, stiffness)
    return (4.0 * yf[::2] - yc) / 3.0


def expansion_orders(params, n_nodes: int, n_orders: int) -> list[np.ndarray]:
    """Series orders of the field equation by power-series bookkeeping.

    The solution and its endpoint values are expanded in the parameter
    that multiplies mu; the coefficient of each power is read off the
    discretized full equation via generic polynomial convolution, then
    solved with one banded factorization.  No closed-form forcing is used.
    """
    h = 1.0 / (n_nodes - 1)
    x = np.linspace(0.0, 1.0, n_nodes)
    q = 1.0 - params.sigma + 2.0 * params.sigma * x
    c = params.nu / (h * h)
    ab = np.zeros((3, n_nodes))
    ab[0, 1:] = c
    ab[2, :-1] = c
    ab[1, :] = -2.0 * c - q
    ab[0, 1] = 2.0 * c
    ab[2, -2] = 2.0 * c

    u: dict[int, np.ndarray] = {}
    esq: dict[int, np.ndarray] = {}
    for k in range(1, n_orders + 1):
        if k == 1:
            g = np.full(n_nodes, -2.0 * params.mu)
        else:
            cube = np.zeros(n_nodes)
            dsum = np.zeros(n_nodes)
            e02 = np.zeros(n_nodes)
            for m in range(2, k):
                sq = esq[m]
                cube += sq * u[k - m]
                dsum += (sq[0] - sq[-1]) * u[k - m]
                e02 += sq[0] * u[k - m]
            sq_k = sum(u[i] * u[k - i] for i in range(1, k))
            esq[k] = sq_k
            g = 0.5 * params.nu * (cube + x * dsum - e02
                                   + params.tau * (sq_k[0] - sq_k[-1]))
        u[k] = solve_banded((1, 1), ab, g)
    return [u[k] for k in range(1, n_orders + 1)]


def expansion_orders_rich(params, n_coarse: int, n_orders: int) -> list[np.ndarray]:
    """Richardson-extrapolated expansion orders on the coarse nodes."""
    coarse = expansion_orders(params, n_coarse, n_orders)
    fine = expansion_orders(params, 2 * n_coarse - 1, n_orders)
    return [(4.0 * f[::2] - c) / 3.0 for c, f in zip(coarse, fine)]


def fd_second_derivative(values: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order interior second differences (difference form).

    Returns an array over interior indices 2 .. n-3 only.
    """
    v = np.asarray(values, dtype=float)
    c = v[2:-2]
    out = (-(v[:-4] - c) + 16.0 * (v[1:-3] - c)
           + 16.0 * (v[3:-1] - c) - (v[4:] - c))
    return out / (12.0 * h * h)
