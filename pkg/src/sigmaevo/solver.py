"""Time integration of the full semilinear equation.

The integrator is exponential: the linear flow is advanced exactly per
mode by the closed-form kernel matrix ``[[A, K1], [dA, dK1]]``, and the
forcing contribution of the nonlocal nonlinearity is added through a
second-order predictor-corrector Duhamel increment.  The predictor uses
the forcing at the step start with the closed-form response weight
``int_0^dt K1``; the corrector replaces it by the trapezoidal blend of
the forcing at the start and at the predicted end state.  With the
nonlinearity switched off every step is exact.

Runaway growth is reported as a labeled blow-up signal, never as a
crash: the model proves nothing about blow-up, so the solver only
flags it.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .data import PROFILES, make_profile
from .grid import (Grid, GridSpec, RealField, SpectralField, build_grid,
                   _forward_coeffs, _inverse_values)
from .params import ModelParams
from .propagator import duhamel_weight, kernel_arrays
from . import operators

__all__ = [
    "SolverConfig",
    "Trajectory",
    "XTNorm",
    "BlowUpSignal",
    "StepTables",
    "make_data",
    "nonlinearity",
    "etd_step",
    "integrate",
    "horizon_limit",
    "xt_decay_exponent",
    "xt_weighted_sums",
    "xt_norm",
    "xt_distance",
    "zero_trajectory",
]

# Growth factor over the initial data norms that triggers the blow-up label.
BLOWUP_FACTOR = 1e6
# Floor applied to |u| before the pointwise power, so that |0|^p underflows
# back to 0 instead of tripping log(0).
ABS_FLOOR = 1e-300


class BlowUpSignal(Exception):
    """Raised when the integration detects runaway or non-finite growth."""

    def __init__(self, time: float, step: int, reason: str):
        super().__init__(f"blow-up signal at t={time:g} (step {step}): {reason}")
        self.time = time
        self.step = step
        self.reason = reason


@dataclass(frozen=True)
class SolverConfig:
    """Everything needed to run one simulation."""

    params: ModelParams
    grid: GridSpec
    dt: float
    t_end: float
    data_amplitude: float
    data_profile: str = "gaussian"
    dealias: bool = True
    mean_zero: bool = False
    seed: int = 0
    snapshot_interval: float | None = None
    store_states: bool = False
    nonlinearity_enabled: bool = True

    def __post_init__(self):
        if not 0 < self.dt <= 0.5:
            raise ValueError(f"dt must lie in (0, 0.5]; got {self.dt}")
        if self.t_end < self.dt:
            raise ValueError(f"t_end must be >= dt; got {self.t_end}")
        if self.data_amplitude < 0:
            raise ValueError(
                f"data_amplitude must be nonnegative; got {self.data_amplitude}")
        if self.data_profile not in PROFILES:
            raise ValueError(f"unknown data profile '{self.data_profile}'")
        if self.params.n != self.grid.dim:
            raise ValueError(
                f"params.n = {self.params.n} does not match grid dim = {self.grid.dim}")


def horizon_limit(config: SolverConfig) -> float:
    """Largest t_end for which the box still mimics whole-space decay.

    The slowest nonzero mode decays like ``exp(-(2 pi / L)^(2 sigma) t)``;
    past roughly a tenth of its e-folding scale the discrete spectrum
    fakes saturation, so runs beyond that are rejected.
    """
    ratio = config.grid.box_length / (2.0 * np.pi)
    return 0.1 * ratio ** (2.0 * config.params.sigma)


def make_data(config: SolverConfig, grid: Grid | None = None) -> RealField:
    """Initial velocity for ``config`` (see :mod:`sigmaevo.data`)."""
    if grid is None:
        grid = build_grid(config.grid)
    return make_profile(grid, config.data_profile, config.data_amplitude,
                        seed=config.seed, mean_zero=config.mean_zero,
                        n=config.params.n, m=config.params.m)


def _dealias_mask(grid: Grid) -> np.ndarray:
    n = grid.spec.points_per_axis
    keep = np.ones(grid.shape, dtype=bool)
    for axis, idx in enumerate(grid.indices):
        shape = [1] * grid.dim
        shape[axis] = idx.size
        keep &= (np.abs(idx) <= n / 3.0).reshape(shape)
    return keep


class StepTables:
    """Per-mode coefficient tables reused by every step of one run."""

    def __init__(self, grid: Grid, params: ModelParams, dt: float,
                 dealias: bool):
        self.grid = grid
        self.params = params
        self.dt = dt
        k = grid.xi_mag ** (2.0 * params.sigma)
        self.A, self.K1, self.dA, self.dK1 = kernel_arrays(k, dt)
        self.IK1 = duhamel_weight(k, dt)
        self.riesz_mult = operators.riesz_symbol(params.alpha).evaluate(grid)
        self.mask = _dealias_mask(grid) if dealias else None
        self.xi_sigma = grid.xi_mag ** params.sigma


def _abs_power(values: np.ndarray, p: float) -> np.ndarray:
    # Overflow is not an error here; it surfaces as a blow-up signal.
    with np.errstate(over="ignore"):
        return np.maximum(np.abs(values), ABS_FLOOR) ** p


def _nonlinearity_hat(u_hat: np.ndarray, tables: StepTables,
                      t: float, step: int) -> np.ndarray:
    """Spectral coefficients of the smoothed pointwise power of u."""
    grid = tables.grid
    u_phys = _inverse_values(grid, u_hat)
    if not np.all(np.isfinite(u_phys)):
        raise BlowUpSignal(t, step, "non-finite state in nonlinearity")
    powed = _abs_power(u_phys, tables.params.p)
    if not np.all(np.isfinite(powed)):
        raise BlowUpSignal(t, step, "overflow in pointwise power")
    f_hat = _forward_coeffs(grid, powed)
    if tables.mask is not None:
        f_hat[~tables.mask] = 0.0
    f_hat *= tables.riesz_mult
    return f_hat


def nonlinearity(u: RealField, params: ModelParams, dealias: bool = True
                 ) -> RealField:
    """Pointwise ``|u|^p`` followed by the smoothing multiplier.

    With ``dealias`` the two-thirds mask is applied to the transform of
    the pointwise power before smoothing.
    """
    # dt is irrelevant here; only the smoothing multiplier and mask are used
    tables = StepTables(u.grid, params, dt=0.1, dealias=dealias)
    u_hat = _forward_coeffs(u.grid, u.values)
    f_hat = _nonlinearity_hat(u_hat, tables, t=0.0, step=0)
    return RealField(u.grid, _inverse_values(u.grid, f_hat))


def _etd_step_arrays(u_hat: np.ndarray, ut_hat: np.ndarray,
                     tables: StepTables, t: float, step: int,
                     nonlinear: bool) -> tuple[np.ndarray, np.ndarray]:
    hom_u = tables.A * u_hat + tables.K1 * ut_hat
    hom_ut = tables.dA * u_hat + tables.dK1 * ut_hat
    if not nonlinear:
        return hom_u, hom_ut
    f0 = _nonlinearity_hat(u_hat, tables, t, step)
    u_pred = hom_u + tables.IK1 * f0
    f1 = _nonlinearity_hat(u_pred, tables, t, step)
    favg = 0.5 * (f0 + f1)
    return hom_u + tables.IK1 * favg, hom_ut + tables.K1 * favg


def etd_step(state: tuple[SpectralField, SpectralField], dt: float,
             params: ModelParams, dealias: bool = True,
             nonlinear: bool = True) -> tuple[SpectralField, SpectralField]:
    """Advance one step; exact whenever the forcing vanishes."""
    if not 0 < dt <= 0.5:
        raise ValueError(f"dt must lie in (0, 0.5]; got {dt}")
    u, ut = state
    tables = StepTables(u.grid, params, dt, dealias)
    nu, nut = _etd_step_arrays(u.coeffs, ut.coeffs, tables, 0.0, 0, nonlinear)
    return SpectralField(u.grid, nu), SpectralField(u.grid, nut)


@dataclass
class Trajectory:
    """Sampled states and norms along one integration."""

    times: np.ndarray
    l2: np.ndarray
    dt_l2: np.ndarray
    hsigma: np.ndarray
    lm: np.ndarray
    params: ModelParams
    grid: Grid
    states: list[tuple[np.ndarray, np.ndarray]] | None = None
    final_state: tuple[np.ndarray, np.ndarray] | None = None
    blew_up: bool = False
    blowup_time: float | None = None

    def __post_init__(self):
        if len(self.times) == 0:
            raise ValueError("trajectory must contain at least one snapshot")
        if np.any(np.diff(self.times) <= 0) or self.times[0] != 0.0:
            raise ValueError("snapshot times must start at 0 and increase")

    @property
    def truncated(self) -> bool:
        return self.blew_up


def _spectral_l2(grid: Grid, coeffs: np.ndarray) -> float:
    total = np.sum(coeffs.real ** 2 + coeffs.imag ** 2)
    return float(np.sqrt(total / grid.box_length ** grid.dim))


def _record_norms(grid: Grid, tables: StepTables, u_hat, ut_hat, m: float):
    l2 = _spectral_l2(grid, u_hat)
    dt_l2 = _spectral_l2(grid, ut_hat)
    hs = _spectral_l2(grid, tables.xi_sigma * u_hat)
    u_phys = _inverse_values(grid, u_hat)
    lm = float((np.sum(np.abs(u_phys) ** m) * grid.cell_volume) ** (1.0 / m))
    return l2, dt_l2, hs, lm


def integrate(config: SolverConfig) -> Trajectory:
    """Run the exponential integrator over ``[0, t_end]``.

    Norms are recorded every ``snapshot_interval`` time units (default:
    every step up to 1200 snapshots, then coarsened).  A blow-up signal
    truncates the trajectory and labels it, which is a normal outcome.
    """
    limit = horizon_limit(config)
    if config.t_end > limit * (1.0 + 1e-9):
        raise ValueError(
            f"t_end = {config.t_end} exceeds the box-validity horizon "
            f"{limit:.6g}; enlarge the box")

    grid = build_grid(config.grid)
    params = config.params
    tables = StepTables(grid, params, config.dt, config.dealias)

    u1 = make_data(config, grid)
    u_hat = np.zeros(grid.shape, dtype=np.complex128)
    ut_hat = _forward_coeffs(grid, u1.values)

    n_steps = int(round(config.t_end / config.dt))
    if config.snapshot_interval is None:
        every = max(1, int(np.ceil(n_steps / 1200)))
    else:
        every = max(1, int(round(config.snapshot_interval / config.dt)))

    times = [0.0]
    records = [_record_norms(grid, tables, u_hat, ut_hat, params.m)]
    states = [(u_hat.copy(), ut_hat.copy())] if config.store_states else None
    ref = max(max(records[0]), ABS_FLOOR)

    blew_up = False
    blowup_time = None
    for step in range(1, n_steps + 1):
        t = step * config.dt
        try:
            u_hat, ut_hat = _etd_step_arrays(
                u_hat, ut_hat, tables, t, step,
                nonlinear=config.nonlinearity_enabled)
        except BlowUpSignal as sig:
            blew_up = True
            blowup_time = sig.time
            break
        if step % every == 0 or step == n_steps:
            rec = _record_norms(grid, tables, u_hat, ut_hat, params.m)
            times.append(t)
            records.append(rec)
            if config.store_states:
                states.append((u_hat.copy(), ut_hat.copy()))
            if not all(np.isfinite(rec)) or max(rec) > BLOWUP_FACTOR * ref:
                blew_up = True
                blowup_time = t
                break

    arr = np.array(records)
    return Trajectory(times=np.array(times), l2=arr[:, 0], dt_l2=arr[:, 1],
                      hsigma=arr[:, 2], lm=arr[:, 3], params=params,
                      grid=grid, states=states,
                      final_state=(u_hat.copy(), ut_hat.copy()),
                      blew_up=blew_up, blowup_time=blowup_time)


def zero_trajectory(config: SolverConfig) -> Trajectory:
    """All-zero trajectory on the snapshot times of ``config`` (dense)."""
    cfg = replace(config, data_amplitude=0.0, store_states=True,
                  snapshot_interval=config.dt, nonlinearity_enabled=False)
    return integrate(cfg)


# ---------------------------------------------------------------------------
# Decay-weighted supremum norm over a trajectory.

@dataclass(frozen=True)
class XTNorm:
    """Supremum over snapshots of the decay-weighted norm sum."""

    value: float
    l2_supremum: float
    hsigma_supremum: float
    dt_supremum: float


def xt_decay_exponent(params: ModelParams) -> float:
    """Base weight exponent ``(n / (2 sigma)) (1/m - 1/2)``."""
    return (params.n / (2.0 * params.sigma)) * (1.0 / params.m - 0.5)


def xt_weighted_sums(times: np.ndarray, l2: np.ndarray, hsigma: np.ndarray,
                     dt_l2: np.ndarray, params: ModelParams) -> np.ndarray:
    """Weighted term sum per snapshot; its sup over time is the norm."""
    base = xt_decay_exponent(params)
    w = 1.0 + np.asarray(times)
    return (w ** base * l2 + w ** (base + 0.5) * hsigma
            + w ** (base + 1.0) * dt_l2)


def xt_norm(traj: Trajectory, params: ModelParams | None = None,
            t_max: float | None = None) -> XTNorm:
    """Decay-weighted supremum norm of a trajectory.

    ``t_max`` restricts the supremum to snapshots with ``t <= t_max``.
    """
    params = params or traj.params
    sel = slice(None) if t_max is None else traj.times <= t_max
    times = traj.times[sel]
    if times.size == 0:
        raise ValueError("no snapshots in the requested time range")
    base = xt_decay_exponent(params)
    w = 1.0 + times
    term_l2 = w ** base * traj.l2[sel]
    term_hs = w ** (base + 0.5) * traj.hsigma[sel]
    term_dt = w ** (base + 1.0) * traj.dt_l2[sel]
    return XTNorm(value=float(np.max(term_l2 + term_hs + term_dt)),
                  l2_supremum=float(np.max(term_l2)),
                  hsigma_supremum=float(np.max(term_hs)),
                  dt_supremum=float(np.max(term_dt)))


def xt_distance(a: Trajectory, b: Trajectory,
                params: ModelParams | None = None) -> float:
    """Decay-weighted supremum distance between two state-storing trajectories."""
    if a.states is None or b.states is None:
        raise ValueError("both trajectories must store states")
    if len(a.times) != len(b.times) or not np.allclose(a.times, b.times):
        raise ValueError("trajectories must share snapshot times")
    params = params or a.params
    grid = a.grid
    xs = grid.xi_mag ** params.sigma
    l2 = np.empty(len(a.times))
    hs = np.empty(len(a.times))
    dt = np.empty(len(a.times))
    for i, ((ua, uta), (ub, utb)) in enumerate(zip(a.states, b.states)):
        du = ua - ub
        dut = uta - utb
        l2[i] = _spectral_l2(grid, du)
        hs[i] = _spectral_l2(grid, xs * du)
        dt[i] = _spectral_l2(grid, dut)
    return float(np.max(xt_weighted_sums(a.times, l2, hs, dt, params)))
