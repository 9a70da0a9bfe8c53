"""Model parameters for the damped sigma-evolution equation."""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["ModelParams"]


@dataclass(frozen=True)
class ModelParams:
    """The tuple (n, sigma, alpha, p, m).

    ``n`` is the space dimension, ``sigma >= 1`` the fractional-Laplacian
    order, ``alpha in (0, n)`` the smoothing order of the nonlocal
    nonlinearity, ``p > 1`` the nonlinearity power, and ``m in [1, 2]``
    the integrability exponent of the data (``m = 2`` encodes the
    pure-L2 regime).
    """

    n: int
    sigma: float
    alpha: float
    p: float
    m: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer; got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        if self.sigma < 1:
            raise ValueError(f"sigma must be >= 1; got {self.sigma}")
        if not 0.0 < self.alpha < self.n:
            raise ValueError(
                f"alpha must lie in (0, n) = (0, {self.n}); got {self.alpha}")
        if self.p <= 1:
            raise ValueError(f"p must be > 1; got {self.p}")
        if not 1.0 <= self.m <= 2.0:
            raise ValueError(f"m must lie in [1, 2]; got {self.m}")
