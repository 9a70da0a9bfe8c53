import numpy as np
import pytest

from sigmaevo.grid import GridSpec, build_grid, transform_forward
from sigmaevo.params import ModelParams
from sigmaevo.picard import picard_apply
from sigmaevo.propagator import propagate_linear
from sigmaevo.solver import (SolverConfig, integrate, make_data, xt_distance,
                             xt_norm, zero_trajectory)

PARAMS = ModelParams(n=1, sigma=1.0, alpha=0.5, p=4.0, m=1.0)


def dense_config(eps, n=512, t_end=4.0, dt=0.04):
    return SolverConfig(params=PARAMS, grid=GridSpec(1, n, 100.0), dt=dt,
                        t_end=t_end, data_amplitude=eps, store_states=True,
                        snapshot_interval=dt)


def test_map_of_zero_is_linear_flow():
    cfg = dense_config(0.01)
    traj0 = zero_trajectory(cfg)
    grid = traj0.grid
    u1 = make_data(cfg, grid)
    out = picard_apply(traj0, u1, cfg)
    u1_hat = transform_forward(u1)
    for i, t in enumerate(out.times):
        u, ut = propagate_linear(u1_hat, PARAMS.sigma, float(t))
        scale = max(np.max(np.abs(ut.coeffs)), 1e-300)
        assert np.max(np.abs(out.states[i][0] - u.coeffs)) <= 1e-12 * scale
        assert np.max(np.abs(out.states[i][1] - ut.coeffs)) <= 1e-12 * scale


def test_fixed_point_self_consistency():
    cfg = dense_config(0.01)
    traj = integrate(cfg)
    grid = traj.grid
    out = picard_apply(traj, make_data(cfg, grid), cfg)
    dist = xt_distance(out, traj)
    assert dist <= 0.05 * xt_norm(traj).value


def test_iterates_contract_from_zero():
    cfg = dense_config(0.001)
    grid = build_grid(cfg.grid)
    u1 = make_data(cfg, grid)
    iters = [zero_trajectory(cfg)]
    for _ in range(5):
        iters.append(picard_apply(iters[-1], u1, cfg))
    d = [xt_distance(iters[i + 1], iters[i]) for i in range(5)]
    for k in range(1, 5):
        assert d[k] <= 0.5 * d[k - 1]


def test_contraction_ratio_grows_with_amplitude():
    ratios = []
    for eps in (0.001, 0.01, 0.1):
        cfg = dense_config(eps, n=256, t_end=2.0)
        grid = build_grid(cfg.grid)
        u1 = make_data(cfg, grid)
        u0 = zero_trajectory(cfg)
        u1_traj = picard_apply(u0, u1, cfg)
        u2_traj = picard_apply(u1_traj, u1, cfg)
        u3_traj = picard_apply(u2_traj, u1, cfg)
        d1 = xt_distance(u1_traj, u0)
        d2 = xt_distance(u2_traj, u1_traj)
        d3 = xt_distance(u3_traj, u2_traj)
        ratios.append(max(d2 / d1, d3 / d2))
    assert ratios[0] < ratios[1] < ratios[2]


def test_density_and_horizon_preconditions():
    coarse = SolverConfig(params=PARAMS, grid=GridSpec(1, 256, 100.0), dt=0.1,
                          t_end=4.0, data_amplitude=0.01, store_states=True,
                          snapshot_interval=0.1)
    traj = integrate(coarse)
    u1 = make_data(coarse, traj.grid)
    with pytest.raises(ValueError, match="coarse"):
        picard_apply(traj, u1, coarse)

    long_cfg = SolverConfig(params=PARAMS, grid=GridSpec(1, 256, 300.0),
                            dt=0.04, t_end=20.0, data_amplitude=0.01,
                            store_states=True, snapshot_interval=0.04)
    traj2 = integrate(long_cfg)
    with pytest.raises(ValueError, match="horizon"):
        picard_apply(traj2, make_data(long_cfg, traj2.grid), long_cfg)

    stateless = dense_config(0.01)
    traj3 = integrate(SolverConfig(params=PARAMS, grid=stateless.grid,
                                   dt=stateless.dt, t_end=stateless.t_end,
                                   data_amplitude=0.01))
    with pytest.raises(ValueError, match="store"):
        picard_apply(traj3, make_data(stateless), stateless)
