"""Parameter quadruple (sigma, tau, nu, mu) of the field boundary value problem."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError


@dataclass(frozen=True)
class Parameters:
    """Dimensionless parameters of the endpoint-coupled field equation.

    Admissible ranges: nu > 0, 0 < sigma < 1, -1 < tau < 1, mu any finite
    real.  mu = 0 yields the identically zero solution.
    """

    sigma: float
    tau: float
    nu: float
    mu: float

    def __post_init__(self):
        for name in ("sigma", "tau", "nu", "mu"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ParameterError(f"{name} must be finite, got {v!r}")
        if not self.nu > 0.0:
            raise ParameterError(f"nu must be positive, got {self.nu}")
        if not 0.0 < self.sigma < 1.0:
            raise ParameterError(f"sigma must lie in (0, 1), got {self.sigma}")
        if not -1.0 < self.tau < 1.0:
            raise ParameterError(f"tau must lie in (-1, 1), got {self.tau}")
