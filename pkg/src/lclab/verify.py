"""The end-to-end verification pipeline behind ``verify-theorem``.

Steps run in the order of the underlying argument so a failure localizes
which numeric counterpart broke: (1) the product density equals
K0(|x|)/pi against the quadrature oracle, (2) both MGF routes match
1/sqrt(1-t^2), (3) the difference MGF factorizes to 1/(1-t^2), (4) the
FFT self-difference matches the Laplace density in sup-node norm, (5) the
shape verdicts (product fails log-concavity, its self-difference and
Laplace hold, K0 is log-convex, K0'/K0 increases), and optionally (6) a
KS run over the committed seed table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import dist, mc, shape, specfun, transform

_DENSITY_PROBES = (0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0)
_MGF_T = (0.0, 0.25, -0.25, 0.5, -0.5, 0.9, -0.9)
_FACTORIZATION_T = (0.1, -0.1, 0.3, -0.3, 0.5, -0.5, 0.8, -0.8)
_SUP_NODE_TOL = 1e-3
_FACTORIZATION_TOL = 1e-7
_CONVEXITY_INTERVAL = (0.01, 30.0)
_CONVEXITY_PROBES = 2048
_CONVEXITY_TOL = 1e-10
_RATIO_INTERVAL = (0.1, 20.0)
_RATIO_PROBES = 512


@dataclass(frozen=True)
class StepResult:
    name: str
    passed: bool
    metrics: dict[str, float] = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def as_dict(self) -> dict:
        return {"step_name": self.name, "status": self.status, "metrics": dict(self.metrics)}


@dataclass(frozen=True)
class VerificationReport:
    steps: tuple[StepResult, ...]
    parameters: dict[str, float]

    @property
    def overall(self) -> bool:
        return all(s.passed for s in self.steps)

    @property
    def first_failure(self) -> str | None:
        for s in self.steps:
            if not s.passed:
                return s.name
        return None

    def as_dict(self) -> dict:
        return {
            "overall": "pass" if self.overall else "fail",
            "parameters": dict(self.parameters),
            "steps": [s.as_dict() for s in self.steps],
        }


def _density_identity_step() -> StepResult:
    worst = 0.0
    for x in _DENSITY_PROBES:
        oracle = specfun.bessel_k0_quadrature_oracle(x, 1e-14).value / math.pi
        worst = max(worst, abs(dist.normal_product_density(x) / oracle - 1.0))
    return StepResult(
        "density-identity",
        worst <= 1e-12,
        {"max_rel_err": worst, "tol": 1e-12, "n_probes": float(len(_DENSITY_PROBES))},
    )


def _mgf_identity_step(tol_mgf: float) -> StepResult:
    product = dist.normal_product()
    worst_density = 0.0
    worst_conditioning = 0.0
    for t in _MGF_T:
        closed = 1.0 / math.sqrt(1.0 - t * t)
        worst_density = max(
            worst_density, abs(transform.mgf_via_density(product, t, tol_mgf).value - closed)
        )
        worst_conditioning = max(
            worst_conditioning, abs(transform.mgf_via_conditioning(t, tol_mgf).value - closed)
        )
    passed = worst_density <= tol_mgf and worst_conditioning <= tol_mgf
    return StepResult(
        "mgf-identity",
        passed,
        {
            "max_abs_err_density_route": worst_density,
            "max_abs_err_conditioning_route": worst_conditioning,
            "tol": tol_mgf,
        },
    )


def _mgf_factorization_step(tol_mgf: float) -> StepResult:
    product = dist.normal_product()
    worst = 0.0
    for t in _FACTORIZATION_T:
        m_pos = transform.mgf_via_density(product, t, tol_mgf).value
        m_neg = transform.mgf_via_density(product, -t, tol_mgf).value
        closed = transform.mgf_difference_closed_form(t).value
        worst = max(worst, abs(m_pos * m_neg - closed))
    return StepResult(
        "mgf-factorization",
        worst <= _FACTORIZATION_TOL,
        {"max_abs_err": worst, "tol": _FACTORIZATION_TOL},
    )


def _laplace_identification_step(diff: dist.GridDensity) -> StepResult:
    sup = float(np.max(np.abs(diff.values - dist.laplace_density(diff.nodes))))
    return StepResult(
        "laplace-identification",
        sup <= _SUP_NODE_TOL,
        {"sup_node_distance": sup, "tol": _SUP_NODE_TOL},
    )


def _shape_step(
    product_grid: dist.GridDensity,
    diff: dist.GridDensity,
    laplace_grid: dist.GridDensity,
    tol_shape: float,
) -> StepResult:
    product_verdict = shape.check_log_concavity_grid(product_grid, tol_shape)
    diff_verdict = shape.check_log_concavity_grid(diff, tol_shape)
    laplace_verdict = shape.check_log_concavity_grid(laplace_grid, tol_shape)
    convex = shape.check_log_convexity_interval(
        specfun.k0_values, *_CONVEXITY_INTERVAL, _CONVEXITY_PROBES, _CONVEXITY_TOL
    )
    ratio = shape.check_ratio_monotonicity(*_RATIO_INTERVAL, _RATIO_PROBES)
    passed = (
        not product_verdict.holds
        and diff_verdict.holds
        and laplace_verdict.holds
        and convex.holds
        and ratio.holds
    )
    metrics = {
        "product_fails": float(not product_verdict.holds),
        "self_difference_holds": float(diff_verdict.holds),
        "laplace_holds": float(laplace_verdict.holds),
        "k0_log_convex_holds": float(convex.holds),
        "k_ratio_increasing_holds": float(ratio.holds),
        "tol_shape": tol_shape,
        "tol_convexity": _CONVEXITY_TOL,
    }
    if product_verdict.witness is not None:
        metrics["product_witness_violation"] = product_verdict.witness.violation
        metrics["product_witness_m"] = product_verdict.witness.midpoint
    return StepResult("shape-verdicts", passed, metrics)


def _monte_carlo_step(seeds, n: int, alpha: float) -> StepResult:
    good = mc.ks_over_seeds(
        mc.Generator.PRODUCT_SELF_DIFFERENCE, seeds, n, dist.laplace_cdf, alpha
    )
    bad = mc.ks_over_seeds(mc.Generator.NORMAL_PRODUCT, seeds, n, dist.laplace_cdf, alpha)
    n_pass = sum(r.passed for r in good)
    n_bad_fail = sum(not r.passed for r in bad)
    passed = n_pass >= len(seeds) - 1 and n_bad_fail == len(seeds)
    return StepResult(
        "monte-carlo",
        passed,
        {
            "laplace_ks_passes": float(n_pass),
            "seeds": float(len(seeds)),
            "max_scaled_statistic": max(r.scaled for r in good),
            "product_law_ks_failures": float(n_bad_fail),
            "min_product_scaled_statistic": min(r.scaled for r in bad),
            "alpha": alpha,
            "threshold": good[0].threshold,
            "n": float(n),
        },
    )


def run_verification(
    half_width: float = 12.0,
    n_cells: int = 4096,
    tol_shape: float = 1e-9,
    tol_mgf: float = 1e-8,
    with_mc: bool = False,
    seeds=mc.GOLDEN_SEEDS,
    mc_n: int = 10**6,
    mc_alpha: float = 0.001,
) -> VerificationReport:
    """Run the full pipeline and collect one report."""
    product_grid = dist.discretize(dist.normal_product(), half_width, n_cells)
    laplace_grid = dist.discretize(dist.laplace(), half_width, n_cells)
    diff = transform.self_difference(product_grid)

    steps = [
        _density_identity_step(),
        _mgf_identity_step(tol_mgf),
        _mgf_factorization_step(tol_mgf),
        _laplace_identification_step(diff),
        _shape_step(product_grid, diff, laplace_grid, tol_shape),
    ]
    if with_mc:
        steps.append(_monte_carlo_step(tuple(seeds), mc_n, mc_alpha))

    # deterministic table fingerprint (hash() of ints varies across builds)
    table_id = 0
    for i, s in enumerate(seeds):
        table_id = (table_id * 1000003 + int(s) * (i + 1)) % 10**9
    parameters = {
        "half_width": half_width,
        "n_cells": float(n_cells),
        "tol_shape": tol_shape,
        "tol_mgf": tol_mgf,
        "with_mc": float(with_mc),
        "seed_table_id": float(table_id),
    }
    return VerificationReport(tuple(steps), parameters)
