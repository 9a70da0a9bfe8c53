"""Fixed-point view of the Duhamel representation.

``picard_apply`` evaluates the solution map

    O(u)(t) = linear flow from u1  +  int_0^t K1(t - tau) F(u(tau)) dtau

on every snapshot of a densely stored trajectory, with the time
convolution quadratured by the trapezoid rule over the stored snapshots.
Iterating from the zero trajectory demonstrates the contraction of the
map for small data amplitudes.
"""

from __future__ import annotations

import numpy as np

from .grid import RealField, _forward_coeffs
from .propagator import kernel_arrays
from .solver import (SolverConfig, StepTables, Trajectory, _nonlinearity_hat,
                     _record_norms)

__all__ = ["picard_apply"]

MAX_HORIZON = 10.0
MAX_DT = 0.05


def picard_apply(traj_in: Trajectory, u1: RealField, config: SolverConfig
                 ) -> Trajectory:
    """One application of the solution map to a stored trajectory.

    Requires a short horizon (``t_end <= 10``) and dense snapshots
    (``dt <= 0.05``, states stored at every step).
    """
    if config.t_end > MAX_HORIZON:
        raise ValueError(
            f"t_end = {config.t_end} exceeds the fixed-point horizon {MAX_HORIZON}")
    if config.dt > MAX_DT:
        raise ValueError(
            f"snapshot spacing dt = {config.dt} too coarse; need <= {MAX_DT}")
    if traj_in.states is None:
        raise ValueError("input trajectory must store states")
    dts = np.diff(traj_in.times)
    if not np.allclose(dts, config.dt, rtol=1e-9, atol=1e-12):
        raise ValueError("input trajectory must be stored densely (every step)")

    grid = traj_in.grid
    params = config.params
    tables = StepTables(grid, params, config.dt, config.dealias)
    u1_hat = _forward_coeffs(grid, u1.values)

    n_snap = len(traj_in.times)
    # Forcing at every stored snapshot.
    f_hats = [_nonlinearity_hat(state[0], tables, t, i)
              for i, (t, state) in enumerate(zip(traj_in.times, traj_in.states))]

    # Kernel tables per lag l*dt, evaluated once.
    k = grid.xi_mag ** (2.0 * params.sigma)
    K1_lag = np.empty((n_snap,) + grid.shape)
    dK1_lag = np.empty((n_snap,) + grid.shape)
    for l in range(n_snap):
        _, K1_lag[l], _, dK1_lag[l] = kernel_arrays(k, l * config.dt)

    dt = config.dt
    times = []
    records = []
    states = []
    for i in range(n_snap):
        t = traj_in.times[i]
        u_hat = K1_lag[i] * u1_hat
        ut_hat = dK1_lag[i] * u1_hat
        if i > 0:
            w = np.full(i + 1, dt)
            w[0] = w[-1] = 0.5 * dt
            for j in range(i + 1):
                u_hat = u_hat + (w[j] * K1_lag[i - j]) * f_hats[j]
                ut_hat = ut_hat + (w[j] * dK1_lag[i - j]) * f_hats[j]
        times.append(t)
        records.append(_record_norms(grid, tables, u_hat, ut_hat, params.m))
        states.append((u_hat, ut_hat))

    arr = np.array(records)
    return Trajectory(times=np.array(times), l2=arr[:, 0], dt_l2=arr[:, 1],
                      hsigma=arr[:, 2], lm=arr[:, 3], params=params,
                      grid=grid, states=states)
