"""Uniform mesh on [0, 1], sampled functions and running quadrature.

The running integral uses composite Simpson pairs for even node indices and
a cubic (four point) half-panel rule for odd ones, so every prefix value is
fourth-order accurate and the final entry equals the plain composite
Simpson value of the whole interval.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatchError

__all__ = ["Grid", "GridFunction", "cumulative_integral", "max_abs_combined"]

MIN_NODES = 257
DEFAULT_NODES = 2049


@dataclass(frozen=True)
class Grid:
    """Uniform nodes on [0, 1] with composite Simpson weights."""

    nodes: np.ndarray
    weights: np.ndarray
    spacing: float

    def __post_init__(self):
        n = len(self.nodes)
        if n < MIN_NODES or n % 2 == 0:
            raise GridMismatchError(
                f"grid needs an odd node count >= {MIN_NODES}, got {n}")
        if self.nodes[0] != 0.0 or self.nodes[-1] != 1.0:
            raise GridMismatchError("grid must span [0, 1] inclusive")
        if np.any(np.diff(self.nodes) <= 0):
            raise GridMismatchError("grid nodes must be strictly increasing")

    @classmethod
    def uniform(cls, n_nodes: int = DEFAULT_NODES) -> "Grid":
        nodes = np.linspace(0.0, 1.0, n_nodes)
        h = 1.0 / (n_nodes - 1)
        w = np.full(n_nodes, 2.0 * h / 3.0)
        w[1::2] = 4.0 * h / 3.0
        w[0] = w[-1] = h / 3.0
        return cls(nodes=nodes, weights=w, spacing=h)

    @property
    def size(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class GridFunction:
    """Values and first-derivative values sampled on a grid."""

    grid: Grid
    values: np.ndarray
    derivs: np.ndarray

    def __post_init__(self):
        n = self.grid.size
        if len(self.values) != n or len(self.derivs) != n:
            raise GridMismatchError(
                f"profile arrays must have {n} entries per grid node")
        if not (np.all(np.isfinite(self.values)) and np.all(np.isfinite(self.derivs))):
            raise GridMismatchError("profile entries must all be finite")


def _check_sampled(f: np.ndarray, grid: Grid) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape != (grid.size,):
        raise GridMismatchError(
            f"expected {grid.size} samples, got shape {f.shape}")
    return f


def cumulative_integral(f, grid: Grid) -> np.ndarray:
    """Running integral F[k] = int_0^{x_k} f, fourth order on smooth f.

    Even indices accumulate Simpson pairs; each odd index adds the integral
    of the local cubic through its four surrounding nodes over the trailing
    half panel.  F[-1] is the full composite Simpson integral over [0, 1].
    """
    f = _check_sampled(f, grid)
    h = grid.spacing
    n = grid.size
    out = np.empty(n)
    out[0] = 0.0
    # Simpson pairs: F[2m] = F[2m-2] + h/3 (f[2m-2] + 4 f[2m-1] + f[2m])
    pair = (h / 3.0) * (f[0:-2:2] + 4.0 * f[1:-1:2] + f[2::2])
    out[2::2] = np.cumsum(pair)
    # Half panels ending at odd nodes, cubic through nodes (k-2, k-1, k, k+1)
    # shifted so the panel is [x_{k-1}, x_k]:
    #   int = h (-f[k-2] + 13 f[k-1] + 13 f[k] - f[k+1]) / 24
    # with a one-sided variant for the first panel.
    out[1] = h * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]) / 24.0
    if n > 3:
        k = np.arange(3, n, 2)
        half = h * (-f[k - 2] + 13.0 * f[k - 1] + 13.0 * f[k] - f[k + 1]) / 24.0
        out[3::2] = out[2:-1:2] + half
    return out


def max_abs_combined(f: GridFunction, g: GridFunction) -> float:
    """max over nodes of |f - g| + |f' - g'|."""
    if f.grid is not g.grid and not np.array_equal(f.grid.nodes, g.grid.nodes):
        raise GridMismatchError("profiles live on different grids")
    return float(np.max(np.abs(f.values - g.values)
                        + np.abs(f.derivs - g.derivs)))
