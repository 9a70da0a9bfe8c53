"""Initial-velocity profiles for simulation runs."""

from __future__ import annotations

import numpy as np

from .grid import Grid, RealField, _forward_coeffs, _inverse_values

__all__ = ["PROFILES", "make_profile"]

PROFILES = ("gaussian", "bump", "noise_bandlimited", "spectral_tail")

# Shift used by the mean-zero (dipole) variant, in units of the profile width.
DIPOLE_SHIFT = 1.0


def _gaussian(grid: Grid) -> np.ndarray:
    mesh = grid.meshgrid()
    r2 = sum(x * x for x in mesh)
    return np.exp(-r2 / 2.0)


def _bump(grid: Grid) -> np.ndarray:
    mesh = grid.meshgrid()
    r2 = sum(x * x for x in mesh)
    out = np.zeros(grid.shape)
    inside = r2 < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - r2[inside]))
    return out


def _noise_bandlimited(grid: Grid, seed: int) -> np.ndarray:
    n = grid.spec.points_per_axis
    rng = np.random.default_rng(seed)
    white = rng.standard_normal(grid.shape)
    coeffs = _forward_coeffs(grid, white)
    j2 = np.meshgrid(*[idx * idx for idx in grid.indices], indexing="ij")
    jmag = np.sqrt(sum(j2))
    coeffs[jmag > n / 8.0] = 0.0
    field = _inverse_values(grid, coeffs)
    peak = np.max(np.abs(field))
    return field / peak if peak > 0 else field


def _spectral_tail(grid: Grid, n: int, m: float) -> np.ndarray:
    # Data saturating the L^m estimates: transform ~ |xi|^(-n(1-1/m)) at the
    # origin (floored at the first nonzero mode), with a smooth taper.
    gam = n * (1.0 - 1.0 / m)
    xi_floor = 2.0 * np.pi / grid.box_length
    q = np.maximum(grid.xi_mag, xi_floor)
    coeffs = (q ** (-gam) * np.exp(-grid.xi_mag ** 2 / 2.0)).astype(np.complex128)
    field = _inverse_values(grid, coeffs)
    l2 = np.sqrt(np.sum(field * field) * grid.cell_volume)
    return field / l2 if l2 > 0 else field


def _dipole(grid: Grid, values: np.ndarray) -> np.ndarray:
    # Difference of copies shifted by +-DIPOLE_SHIFT along the first axis;
    # the transform then vanishes linearly at xi = 0 (true mean-zero data,
    # not just a zeroed DC mode).
    coeffs = _forward_coeffs(grid, values)
    xi1 = grid.wavenumbers[0]
    shape = [1] * grid.dim
    shape[0] = xi1.size
    factor = -2j * np.sin(xi1 * DIPOLE_SHIFT).reshape(shape)
    return _inverse_values(grid, coeffs * factor)


def make_profile(grid: Grid, profile: str, amplitude: float,
                 seed: int = 0, mean_zero: bool = False,
                 n: int | None = None, m: float | None = None) -> RealField:
    """Build an initial-velocity field on ``grid``.

    ``gaussian`` and ``bump`` peak at ``amplitude``;
    ``noise_bandlimited`` is seeded noise restricted to modes
    ``|j| <= N/8`` with unit peak; ``spectral_tail`` has unit L2 norm
    and a transform tailored to the integrability exponent ``m``.
    """
    if profile == "gaussian":
        values = _gaussian(grid)
    elif profile == "bump":
        values = _bump(grid)
    elif profile == "noise_bandlimited":
        values = _noise_bandlimited(grid, seed)
    elif profile == "spectral_tail":
        if n is None or m is None:
            raise ValueError("spectral_tail profile needs n and m")
        values = _spectral_tail(grid, n, m)
    else:
        raise ValueError(f"unknown data profile '{profile}'")
    if mean_zero:
        values = _dipole(grid, values)
    return RealField(grid, amplitude * values)
