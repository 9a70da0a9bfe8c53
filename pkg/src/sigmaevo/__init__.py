"""Pseudo-spectral simulator and decay-rate laboratory for doubly damped
sigma-evolution equations with a smoothing nonlocal nonlinearity."""

__version__ = "0.1.0"

from .grid import (GridSpec, Grid, RealField, SpectralField, build_grid,
                   transform_forward, transform_inverse, field_from_function)
from .operators import (MultiplierSymbol, apply_symbol, fractional_laplacian,
                        riesz_potential, riesz_oracle, riesz_constant,
                        lebesgue_norm, sobolev_seminorm, sobolev_norm_inhom)
from .params import ModelParams
from .propagator import (PropagatorKernels, kernels, propagate_linear,
                         decay_exponent, ode_oracle)
from .solver import (SolverConfig, Trajectory, XTNorm, BlowUpSignal,
                     make_data, nonlinearity, etd_step, integrate,
                     horizon_limit, xt_norm, xt_distance, zero_trajectory)
from .picard import picard_apply
from .theory import (AdmissibilityReport, critical_exponent, admissibility,
                     gn_theta, duhamel_decay, nonlinearity_decay_exponent,
                     integral_inequality_check)
from .decay import (NormTimeSeries, DecayFit, RateVerdict, run_linear,
                    run_semilinear, fit_decay, check_rate, sweep,
                    default_window, suggest_box_length)
from .fieldio import save_field, load_field, write_norms_csv, write_sweep_csv

__all__ = [
    "GridSpec", "Grid", "RealField", "SpectralField", "build_grid",
    "transform_forward", "transform_inverse", "field_from_function",
    "MultiplierSymbol", "apply_symbol", "fractional_laplacian",
    "riesz_potential", "riesz_oracle", "riesz_constant",
    "lebesgue_norm", "sobolev_seminorm", "sobolev_norm_inhom",
    "ModelParams",
    "PropagatorKernels", "kernels", "propagate_linear", "decay_exponent",
    "ode_oracle",
    "SolverConfig", "Trajectory", "XTNorm", "BlowUpSignal", "make_data",
    "nonlinearity", "etd_step", "integrate", "horizon_limit", "xt_norm",
    "xt_distance", "zero_trajectory", "picard_apply",
    "AdmissibilityReport", "critical_exponent", "admissibility", "gn_theta",
    "duhamel_decay", "nonlinearity_decay_exponent",
    "integral_inequality_check",
    "NormTimeSeries", "DecayFit", "RateVerdict", "run_linear",
    "run_semilinear", "fit_decay", "check_rate", "sweep", "default_window",
    "suggest_box_length",
    "save_field", "load_field", "write_norms_csv", "write_sweep_csv",
]
