"""Closed-form exponent bookkeeping for the semilinear model.

Everything here is arithmetic on the parameter tuple (n, sigma, alpha,
p, m): the critical exponent, the admissible range of p (with its
dimension branch), interpolation exponents, the boundedness exponents of
the smoothing operator, and the decay exponent of the nonlinearity along
a decaying solution.  Comparisons against bounds are made at tolerance
1e-12, honoring strict vs non-strict inequalities.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from scipy.integrate import quad

from .params import ModelParams

__all__ = [
    "AdmissibilityReport",
    "critical_exponent",
    "admissibility",
    "gn_theta",
    "duhamel_decay",
    "nonlinearity_decay_exponent",
    "integral_inequality_check",
    "report_to_json",
    "write_region_sweep_csv",
]

TOL = 1e-12


def _ge(x: float, bound: float) -> bool:
    return x >= bound - TOL


def _le(x: float, bound: float) -> bool:
    return x <= bound + TOL


def _gt(x: float, bound: float) -> bool:
    return x > bound + TOL


def critical_exponent(n: int, m: float, sigma: float) -> float:
    """Threshold power ``1 + 2 m sigma / n`` separating the small-data
    global-existence range from blow-up for the local power nonlinearity."""
    if n < 1:
        raise ValueError(f"n must be >= 1; got {n}")
    if not 1.0 <= m < 2.0:
        raise ValueError(f"m must lie in [1, 2); got {m}")
    if sigma < 1:
        raise ValueError(f"sigma must be >= 1; got {sigma}")
    return 1.0 + 2.0 * m * sigma / n


def gn_theta(q: float, n: int, sigma: float) -> float:
    """Interpolation exponent ``(n / sigma)(1/2 - 1/q)``.

    Callers check membership in [0, 1] themselves.
    """
    if not 1.0 < q < np.inf:
        raise ValueError(f"q must lie in (1, inf); got {q}")
    return (n / sigma) * (0.5 - 1.0 / q)


def duhamel_decay(a: float, b: float) -> float | None:
    """Decay exponent ``min(a, b)`` of the time convolution of
    ``(1+t)^-a`` and ``(1+t)^-b``; None when ``max(a, b) <= 1``."""
    if max(a, b) <= 1.0:
        return None
    return min(a, b)


def nonlinearity_decay_exponent(params: ModelParams, s: float) -> float:
    """Decay exponent of the nonlinearity's ``L^s`` norm along a solution
    obeying the weighted norm bounds: ``-np/(2 m sigma) + (n/(2 sigma))(1/s + alpha/n)``."""
    if not (s == 2 or s == params.m):
        raise ValueError(f"s must be 2 or m = {params.m}; got {s}")
    n, sig, m, p, alpha = (params.n, params.sigma, params.m,
                           params.p, params.alpha)
    return -n * p / (2.0 * m * sig) + (n / (2.0 * sig)) * (1.0 / s + alpha / n)


@dataclass(frozen=True)
class AdmissibilityReport:
    """Truth values and bounds for the small-data global existence range."""

    params: ModelParams
    p_crit: float
    p_lower: float
    p_lower_ok: bool
    p_upper: float          # +inf in the low-dimension branch
    p_upper_ok: bool
    dim_bound: float        # threshold on n for the high-dimension branch
    in_low_dim_branch: bool
    dim_ok: bool
    p_integrability: float  # strict lower bound making Duhamel decay summable
    p_integrability_ok: bool
    gn_theta_s2: float
    gn_theta_s2_ok: bool
    gn_theta_sm: float
    gn_theta_sm_ok: bool
    riesz_q_s2: float
    riesz_q_s2_ok: bool
    riesz_q_sm: float
    riesz_q_sm_ok: bool
    overall: bool
    warnings: list[str] = field(default_factory=list)


def _dimension_bound(sigma: float, m: float, alpha: float) -> float:
    if m >= 2.0:
        return np.inf
    return float(
        (4.0 * sigma + np.sqrt(16.0 * sigma * (sigma + m * (2.0 - m) * alpha)))
        / (2.0 * (2.0 - m)))


def admissibility(params: ModelParams) -> AdmissibilityReport:
    """Evaluate every admissibility condition at ``params``.

    A report is always produced; hypothesis failures of the smoothing
    boundedness exponents are surfaced as warnings, not hard failures.
    """
    n, sig, alpha, p, m = (params.n, params.sigma, params.alpha,
                           params.p, params.m)
    warnings: list[str] = []

    p_crit = 1.0 + 2.0 * m * sig / n  # reduces to the critical exponent
    p_lower = 2.0 / m + 2.0 * alpha / n
    p_lower_ok = _ge(p, p_lower)

    in_low_dim = n <= 2.0 * sig + TOL
    dim_bound = _dimension_bound(sig, m, alpha)
    if in_low_dim:
        p_upper = np.inf
        p_upper_ok = True
        dim_ok = True
    else:
        p_upper = (n + 2.0 * alpha) / (n - 2.0 * sig)
        p_upper_ok = _le(p, p_upper)
        dim_ok = _le(n, dim_bound)

    p_integ = 1.0 + (2.0 * sig + alpha) * m / n
    p_integ_ok = _gt(p, p_integ)

    q_s2 = 2.0 * n / (n + 2.0 * alpha)
    q_sm = m * n / (n + m * alpha)
    q_s2_ok = (q_s2 > 1.0 + TOL) and (q_s2 < n / alpha - TOL)
    q_sm_ok = (q_sm > 1.0 + TOL) and (q_sm < n / alpha - TOL)
    for name, q, ok in (("q_s2", q_s2, q_s2_ok), ("q_sm", q_sm, q_sm_ok)):
        if not ok:
            warnings.append(
                f"smoothing boundedness hypothesis fails for {name} = {q:.6g} "
                f"(needs q in (1, n/alpha) = (1, {n / alpha:.6g}))")

    theta_s2 = gn_theta(2.0 * n * p / (n + 2.0 * alpha), n, sig)
    theta_sm = gn_theta(m * n * p / (n + m * alpha), n, sig)
    theta_s2_ok = -TOL <= theta_s2 <= 1.0 + TOL
    theta_sm_ok = -TOL <= theta_sm <= 1.0 + TOL
    for name, th, ok in (("theta_s2", theta_s2, theta_s2_ok),
                         ("theta_sm", theta_sm, theta_sm_ok)):
        if not ok:
            warnings.append(
                f"interpolation exponent {name} = {th:.6g} lies outside [0, 1]")

    overall = p_lower_ok and p_upper_ok and dim_ok and p_integ_ok

    return AdmissibilityReport(
        params=params, p_crit=p_crit,
        p_lower=p_lower, p_lower_ok=p_lower_ok,
        p_upper=p_upper, p_upper_ok=p_upper_ok,
        dim_bound=dim_bound, in_low_dim_branch=bool(in_low_dim), dim_ok=dim_ok,
        p_integrability=p_integ, p_integrability_ok=p_integ_ok,
        gn_theta_s2=theta_s2, gn_theta_s2_ok=theta_s2_ok,
        gn_theta_sm=theta_sm, gn_theta_sm_ok=theta_sm_ok,
        riesz_q_s2=q_s2, riesz_q_s2_ok=q_s2_ok,
        riesz_q_sm=q_sm, riesz_q_sm_ok=q_sm_ok,
        overall=overall, warnings=warnings)


def integral_inequality_check(a: float, b: float, t_grid) -> float:
    """Max over ``t_grid`` of the convolution integral over its predicted bound.

    Quadratures ``int_0^t (1+t-tau)^-a (1+tau)^-b dtau`` adaptively
    (tolerance 1e-10) and divides by ``(1+t)^-min(a,b)``.  Requires
    ``max(a, b) > 1`` and ``t_grid`` inside [1, 1e4].
    """
    if max(a, b) <= 1.0:
        raise ValueError(f"need max(a, b) > 1; got a={a}, b={b}")
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0 or np.any(t_grid < 1.0) or np.any(t_grid > 1e4):
        raise ValueError("t_grid must be nonempty and lie inside [1, 1e4]")

    def integrand(tau, t):
        return (1.0 + t - tau) ** (-a) * (1.0 + tau) ** (-b)

    worst = 0.0
    for t in t_grid:
        lo, _ = quad(integrand, 0.0, t / 2.0, args=(t,),
                     epsabs=1e-10, epsrel=1e-10, limit=200)
        hi, _ = quad(integrand, t / 2.0, t, args=(t,),
                     epsabs=1e-10, epsrel=1e-10, limit=200)
        ratio = (lo + hi) / (1.0 + t) ** (-min(a, b))
        worst = max(worst, ratio)
    return worst


def report_to_json(report: AdmissibilityReport, path: str | Path | None = None
                   ) -> str:
    """Serialize a report (bounds, flags, warnings) as JSON."""
    payload = asdict(report)
    payload["params"] = asdict(report.params)
    text = json.dumps(payload, indent=2, default=lambda x: repr(x))
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def write_region_sweep_csv(path: str | Path, p_values, n_values,
                           sigma: float, alpha: float, m: float) -> None:
    """Admissibility flags over a (p, n) grid at fixed (sigma, alpha, m)."""
    rows = []
    for n in n_values:
        for p in p_values:
            try:
                rep = admissibility(ModelParams(n=n, sigma=sigma, alpha=alpha,
                                                p=p, m=m))
            except ValueError as exc:
                rows.append({"n": n, "p": p, "error": str(exc)})
                continue
            rows.append({
                "n": n, "p": p, "p_crit": rep.p_crit,
                "p_lower": rep.p_lower, "p_lower_ok": rep.p_lower_ok,
                "p_upper": rep.p_upper, "p_upper_ok": rep.p_upper_ok,
                "dim_bound": rep.dim_bound, "dim_ok": rep.dim_ok,
                "p_integrability": rep.p_integrability,
                "p_integrability_ok": rep.p_integrability_ok,
                "gn_theta_s2": rep.gn_theta_s2,
                "gn_theta_s2_ok": rep.gn_theta_s2_ok,
                "gn_theta_sm": rep.gn_theta_sm,
                "gn_theta_sm_ok": rep.gn_theta_sm_ok,
                "riesz_q_s2": rep.riesz_q_s2, "riesz_q_s2_ok": rep.riesz_q_s2_ok,
                "riesz_q_sm": rep.riesz_q_sm, "riesz_q_sm_ok": rep.riesz_q_sm_ok,
                "overall": rep.overall, "error": "",
            })
    fields = list(rows[0].keys()) if rows else ["n", "p", "error"]
    for row in rows:
        for key in fields:
            row.setdefault(key, "")
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _render(v) for k, v in row.items()})


def _render(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)
