"""The four experiment suites driven by the command line."""

from __future__ import annotations

import math

import numpy as np

from . import corridor, spectral
from .config import ExperimentConfig
from .equivalence import equivalence_check
from .lattice import ClassicalField, ModelParams, build_lattice
from .results import ResultRow

APPROX_RATIO_TARGET = 4.0
APPROX_RATIO_HALF_WIDTH = 1.5
FIT_TOL_APPROX = 1e-10
FIT_TOL_RESIDUE = 1e-8
LIFETIME_RTOL = 1e-12
CORRIDOR_HALF_WIDTH_TOL = 1e-10
SUBSTITUTION_RTOL = 1e-14


def _dims_label(dims) -> str:
    return "x".join(str(d) for d in dims)


def _rel(a, b) -> float:
    return abs(a - b) / max(abs(b), np.finfo(float).tiny)


def run_equivalence(cfg: ExperimentConfig) -> list[ResultRow]:
    c = cfg.equivalence
    rng = np.random.default_rng(c.seed)
    rows = []
    case = 0
    for dims in c.lattices:
        lattice = build_lattice(dims, c.spacing)
        for mass in c.masses:
            for eps in c.epsilons:
                params = ModelParams(mass, eps)
                for draw in range(c.draws):
                    if c.phi_cl == "random":
                        vals = rng.uniform(c.phi_cl_low, c.phi_cl_high, lattice.n_sites)
                    else:
                        vals = np.full(lattice.n_sites, c.phi_cl_value)
                    rep = equivalence_check(lattice, params, ClassicalField(lattice, vals), c.rtol)
                    rows.append(ResultRow(
                        "equivalence", case, "source_vs_corridor",
                        {"lattice": _dims_label(dims), "spacing": c.spacing, "mass": mass,
                         "epsilon": eps, "draw": draw},
                        {"lhs": rep.lhs, "rhs": rep.rhs},
                        rep.abs_gap, rep.tolerance,
                    ))
                    case += 1
    return rows


def run_propagator(cfg: ExperimentConfig) -> list[ResultRow]:
    c = cfg.propagator
    rows = []
    case = 0
    for wk in c.omega_k:
        for t in c.t_values:
            for eps in c.epsilons:
                q = spectral.SpectralQuery(wk, eps, t)
                res = spectral.omega_integral_residue(q).value
                approx = spectral.omega_integral_approx(q).value
                base = {"omega_k": wk, "epsilon": eps, "t": t}
                if abs(t) <= spectral.MAX_QUADRATURE_T:
                    quad = spectral.omega_integral_quadrature(q, c.tol)
                    rows.append(ResultRow(
                        "propagator", case, "quadrature_vs_residue", base,
                        {"value_quad": quad.value, "value_res": res, "value_approx": approx},
                        abs(quad.value - res), c.tol, "method=quadrature"))
                else:
                    rows.append(ResultRow(
                        "propagator", case, "quadrature_vs_residue", base,
                        {"value_res": res, "value_approx": approx},
                        0.0, c.tol, "method=residue-only: |t| beyond quadrature policy"))
                case += 1
            if t == 0:
                continue
            # successive epsilon halvings: the approx gap should drop by ~4
            for e1, e2 in zip(c.epsilons, c.epsilons[1:]):
                if not math.isclose(e2, e1 / 2) or e1 > 0.1 * wk**2:
                    continue
                q1 = spectral.SpectralQuery(wk, e1, t)
                q2 = spectral.SpectralQuery(wk, e2, t)
                checks = [("approx_rel_gap_ratio", True)]
                if spectral.in_quadratic_regime(q1):
                    checks.insert(0, ("approx_gap_ratio", False))
                for name, relative in checks:
                    g1 = spectral.approx_gap(q1, relative)
                    g2 = spectral.approx_gap(q2, relative)
                    ratio = g1 / g2
                    rows.append(ResultRow(
                        "propagator", case, name,
                        {"omega_k": wk, "epsilon": e1, "t": t},
                        {"gap_eps": g1, "gap_half_eps": g2, "ratio": ratio},
                        abs(ratio - APPROX_RATIO_TARGET), APPROX_RATIO_HALF_WIDTH))
                    case += 1
    return rows


def _t_grid(c, wk, eps):
    return [spectral.SpectralQuery(wk, eps, float(t))
            for t in np.linspace(c.t_min, c.t_max, c.n_t)]


def run_lifetime(cfg: ExperimentConfig) -> list[ResultRow]:
    c = cfg.lifetime
    rows = []
    case = 0
    for wk in c.omega_k:
        for eps in c.epsilons:
            grid = _t_grid(c, wk, eps)
            base = {"omega_k": wk, "epsilon": eps}
            fit_a = spectral.fit_decay_envelope(grid, spectral.Method.APPROX)
            want_a = spectral.approx_decay_rate(wk, eps)
            rows.append(ResultRow("lifetime", case, "fit_rate_approx", base,
                                  {"rate": fit_a.rate, "expected": want_a},
                                  abs(fit_a.rate - want_a), FIT_TOL_APPROX))
            case += 1
            fit_r = spectral.fit_decay_envelope(grid, spectral.Method.RESIDUE)
            want_r = spectral.exact_decay_rate(wk, eps)
            rows.append(ResultRow("lifetime", case, "fit_rate_residue", base,
                                  {"rate": fit_r.rate, "expected": want_r},
                                  abs(fit_r.rate - want_r), FIT_TOL_RESIDUE))
            case += 1
            # total lifetime = both directions' 1/e times of the fitted envelope
            tau = spectral.lifetime(wk, eps)
            tau_fit = 2.0 / fit_a.rate
            rows.append(ResultRow("lifetime", case, "lifetime_vs_envelope", base,
                                  {"tau": tau, "tau_from_fit": tau_fit},
                                  _rel(tau, tau_fit), 1e-8))
            case += 1
    for m in c.masses:
        for eps in c.epsilons:
            for gamma in c.gammas:
                r = spectral.lifetime_boosted(m, eps, gamma)
                via_omega = spectral.lifetime(gamma * m, eps)
                gap = max(_rel(r.tau, r.gamma * r.tau_rest), _rel(r.tau, via_omega),
                          _rel(r.tau_rest, 4 * m / eps))
                rows.append(ResultRow("lifetime", case, "boosted_lifetime",
                                      {"mass": m, "epsilon": eps, "gamma": gamma},
                                      {"tau_rest": r.tau_rest, "tau": r.tau, "tau_via_omega": via_omega},
                                      gap, LIFETIME_RTOL))
                case += 1
    return rows


def run_corridor(cfg: ExperimentConfig) -> list[ResultRow]:
    c = cfg.corridor
    rows = []
    case = 0
    for eps in c.epsilons:
        ref_dv = c.dv[0]
        ref_dphi = corridor.delta_phi_formula(eps, ref_dv)
        for dv in c.dv:
            stats = corridor.sample_corridor(eps, dv, c.n_samples, c.seed)
            base = {"epsilon": eps, "dv": dv}
            rows.append(ResultRow("corridor", case, "half_width_vs_delta_phi", base,
                                  {"half_width_1e": stats.half_width_1e,
                                   "delta_phi": stats.predicted_delta_phi},
                                  abs(stats.half_width_1e - stats.predicted_delta_phi),
                                  CORRIDOR_HALF_WIDTH_TOL))
            case += 1
            rows.append(ResultRow("corridor", case, "mc_sigma_vs_delta_phi",
                                  {**base, "n_samples": c.n_samples, "seed": c.seed},
                                  {"sqrt2_sigma_sample": math.sqrt(2) * stats.sigma_sample,
                                   "delta_phi": stats.predicted_delta_phi,
                                   "sigma_sample": stats.sigma_sample,
                                   "sigma_true": stats.sigma_true},
                                  abs(math.sqrt(2) * stats.sigma_sample - stats.predicted_delta_phi),
                                  math.sqrt(2) * stats.standard_error * c.band_sigmas,
                                  f"{c.band_sigmas:g}-sigma statistical band"))
            case += 1
            scaled = stats.predicted_delta_phi * math.sqrt(dv / ref_dv)
            rows.append(ResultRow("corridor", case, "dv_scaling", base,
                                  {"delta_phi_rescaled": scaled, "delta_phi_ref": ref_dphi},
                                  _rel(scaled, ref_dphi), SUBSTITUTION_RTOL))
            case += 1
            via_tau = corridor.delta_phi_from_lifetime(c.tau, c.mass, dv)
            via_eps = corridor.delta_phi_formula(4 * c.mass / c.tau, dv)
            rows.append(ResultRow("corridor", case, "lifetime_substitution",
                                  {**base, "tau": c.tau, "mass": c.mass},
                                  {"delta_phi_from_tau": via_tau, "delta_phi_from_eps": via_eps},
                                  _rel(via_tau, via_eps), SUBSTITUTION_RTOL))
            case += 1
    return rows


RUNNERS = {
    "equivalence": run_equivalence,
    "propagator": run_propagator,
    "lifetime": run_lifetime,
    "corridor": run_corridor,
}


def run(experiment: str, cfg: ExperimentConfig) -> list[ResultRow]:
    if experiment == "all":
        return [row for name in RUNNERS for row in RUNNERS[name](cfg)]
    return RUNNERS[experiment](cfg)
