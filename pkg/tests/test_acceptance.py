"""Acceptance criteria, each at its stated size and tolerance.

Every test records one PASS/FAIL line, printed in the terminal summary.
"""

import time

import numpy as np
import pytest

from coupled_otto import analysis, oracles
from coupled_otto.coherence import coherence_rel_entropy, measure_erase_cycle, work_coherence_criterion
from coupled_otto.cycle import CycleSpec, cycle_work_batch, occupancy_AB, run_cycle
from coupled_otto.linalg import eigvalsh
from coupled_otto.model import ModelParams, build_total_hamiltonian, closed_form_spectrum, max_delta
from coupled_otto.thermal import gibbs_state
from coupled_otto.verify import run_verify, sample_params, sample_specs

SEED = 20240611


@pytest.fixture
def gen():
    return np.random.default_rng(SEED)


def ordered_specs(rng, n):
    out = []
    for s in sample_specs(rng, n):
        lo, hi = sorted((s.delta1, s.delta2))
        out.append(CycleSpec(s.omega, lo, hi, s.coupling, s.beta1, s.beta2, 3))
    return out


def test_01_first_law(gen, acceptance):
    specs = sample_specs(gen, 1000)
    t0 = time.perf_counter()
    heat_err = split_err = 0.0
    for spec in specs:
        _, ex = run_cycle(spec)
        heat_err = max(heat_err, abs(ex.W - (ex.Q1 + ex.Q2)))
        split_err = max(split_err, abs(ex.W - (ex.W_A + ex.W_B)))
    elapsed = time.perf_counter() - t0
    ok = heat_err <= 1e-10 and split_err <= 1e-8 and elapsed < 5.0
    acceptance("1 first law", ok, f"max|W-Q|={heat_err:.1e} max|W-WA-WB|={split_err:.1e} t={elapsed:.2f}s")


def test_02_closed_form_vs_oracle(gen, acceptance):
    work_err = 0.0
    for spec in sample_specs(gen, 100):
        _, ex = run_cycle(spec)
        work_err = max(work_err, abs(ex.W - oracles.discretized_cycle_work(spec, steps=10_000)))
    omega, coupling, delta, _, _, _ = sample_params(gen, 1000)
    spec_err = 0.0
    for o, j, d in zip(omega, coupling, delta):
        params = ModelParams(float(o), float(d), float(j))
        closed = closed_form_spectrum(params).energies
        spec_err = max(spec_err, np.max(np.abs(eigvalsh(build_total_hamiltonian(params)) - closed)))
    ok = work_err <= 1e-6 and spec_err <= 1e-12
    acceptance("2 closed form vs oracle", ok, f"work err={work_err:.1e} spectrum err={spec_err:.1e}")


def test_03_uncoupled_impossibility(gen, acceptance):
    n = 1000
    omega = gen.uniform(0.5, 2.0, n)
    d2 = gen.uniform(0, 0.999, n) * omega
    b1, b2 = np.exp(gen.uniform(np.log(0.1), np.log(10), (2, n)))
    W = cycle_work_batch(omega, 0.0, 0.0, d2, b1, b2)
    for i in range(0, n, 100):
        _, ex = run_cycle(CycleSpec(omega[i], 0.0, d2[i], 0.0, b1[i], b2[i], 3))
        assert ex.W == W[i]
    acceptance("3 uncoupled impossibility", bool(np.all(W <= 0)), f"max W={W.max():.1e} over {n}")


# Probe points (delta1, delta2) chosen on both sides of the diagonal.
FIG2_PROBES = [(0.02, 0.1), (0.1, 0.2), (0.2, 0.3), (0.3, 0.4), (0.05, 0.3), (0.1, 0.6),
               (0.3, 0.9), (0.7, 0.6), (0.9, 0.85), (0.4, 0.35), (0.95, 0.6), (0.3, 0.05),
               (0.6, 0.1), (0.9, 0.3)]


def test_04_window_topology(acceptance):
    omega, j = 1.0, 0.2
    upper, lower, problems, inside = [], [], [], 0
    for b1 in (0.5, 1.0, 2.0):
        g = analysis.window_scan(omega, j, b1, 3 * b1, 200)
        upper.append(g.positive_fraction("upper"))
        lower.append(g.positive_fraction("lower"))
        if np.any(np.diag(g.W) != 0):
            problems.append(f"beta1={b1}: diagonal not zero")
        # away from the diagonal the sign flips only across f = 0
        ok = ~np.isnan(g.boundary)
        f_edge = analysis.f_function(omega, j, g.delta1[ok], g.boundary[ok], b1, 3 * b1)
        if np.any(np.abs(f_edge) > 1e-9):
            problems.append(f"beta1={b1}: boundary off f=0")
        for d1, d2 in FIG2_PROBES:
            w = oracles.discretized_cycle_work(CycleSpec(omega, d1, d2, j, b1, 3 * b1, 3), steps=2000)
            inside += w > 0
            if (w > 0) != bool(g.in_window(d1, d2)):
                problems.append(f"beta1={b1}: probe {(d1, d2)} W={w:.2e}")
    # Cooling both baths grows the Delta2 > Delta1 branch and removes the other.
    trend = upper[0] < upper[1] < upper[2] and lower[0] > lower[1] > lower[2] and upper[0] == 0
    ok = not problems and trend and 0 < inside < 3 * len(FIG2_PROBES)
    detail = f"upper={np.round(upper, 3).tolist()} lower={np.round(lower, 4).tolist()} " + "; ".join(problems)
    acceptance("4 window topology", ok, detail.strip())


def test_05_limit_necessity(gen, acceptance):
    n = 100_000
    omega, coupling, d1, d2, b1, b2 = sample_params(gen, n)
    b1, b2 = np.minimum(b1, b2), np.maximum(b1, b2)
    keep = b1 < b2
    omega, coupling, d1, d2, b1, b2 = (x[keep] for x in (omega, coupling, d1, d2, b1, b2))
    W = cycle_work_batch(omega, coupling, d1, d2, b1, b2)
    low, high = analysis.limit_conditions(omega, coupling, d1, d2, b1, b2)
    bad = np.count_nonzero((W > 0) & (d2 > d1) & ~low) + np.count_nonzero((W > 0) & (d2 < d1) & ~high)
    acceptance("5 limit-condition necessity", bad == 0,
               f"{bad} counterexamples in {W.size} samples ({np.count_nonzero(W > 0)} with W>0)")


def test_06_efficiency_bounds(acceptance):
    omega, j, d1 = 1.0, 0.2, 0.5
    d2 = np.linspace(0, max_delta(omega, j), 10_000, endpoint=False)
    worst, slowest, defined = np.inf, 0.0, 0
    for b1 in (5.0, 2.5, 0.1, 0.5):
        t0 = time.perf_counter()
        sweep = analysis.efficiency_sweep(omega, j, d1, b1, 2 * b1, d2)
        slowest = max(slowest, time.perf_counter() - t0)
        m = ~np.isnan(sweep.eta)
        defined += np.count_nonzero(m)
        if np.any(m):
            worst = min(worst, np.min(sweep.eta_up[m] - sweep.eta[m]), np.min(0.5 - sweep.eta_up[m]))
        assert sweep.eta_carnot == 0.5
    ok = defined > 0 and worst > 1e-12 and slowest < 2.0
    acceptance("6 efficiency bounds", ok, f"min margin={worst:.2e} over {defined} points, slowest sweep={slowest:.3f}s")


def test_07_appendix_identity(gen, acceptance):
    worst = 0.0
    specs = sample_specs(gen, 1000)
    for s in specs:
        lo, hi = sorted((s.delta1, s.delta2))
        worst = max(worst, analysis.appendix_identity_check(s.omega, s.coupling, lo, hi, s.beta1, s.beta2))
    acceptance("7 appendix identity", worst <= 1e-12, f"max residual={worst:.1e}")


def test_08_coherence_criterion(gen, acceptance):
    bad = 0
    specs = [s for s in ordered_specs(gen, 10_000) if s.delta1 < s.delta2]
    for spec in specs:
        out = work_coherence_criterion(spec)
        bad += not (out.applicable and out.agree)
    acceptance("8 coherence criterion", bad == 0 and len(specs) > 9990,
               f"{bad} disagreements in {len(specs)} samples")


def test_09_measure_erase(gen, acceptance):
    audit, positive, nonzero_uncoupled = 0.0, 0, 0
    specs = sample_specs(gen, 500)
    for i, spec in enumerate(specs):
        if i % 4 == 0:
            spec = CycleSpec(spec.omega, spec.delta1, spec.delta2, 0.0, spec.beta1, spec.beta2, 3)
        rep = measure_erase_cycle(spec)
        ends, _ = run_cycle(spec)
        expected = -coherence_rel_entropy(ends.rho_d) / spec.beta2
        audit = max(audit, abs(rep.stepwise_sum - expected), abs(rep.w_total_bound - expected))
        positive += rep.w_total_bound > 0
        if spec.coupling == 0:
            nonzero_uncoupled += rep.w_total_bound != 0.0
    ok = audit <= 1e-10 and positive == 0 and nonzero_uncoupled == 0
    acceptance("9 measure-erase bound", ok,
               f"audit={audit:.1e} positive={positive} nonzero at J=0={nonzero_uncoupled}")


def test_10_occupancy_formula(gen, acceptance):
    worst = 0.0
    for spec in sample_specs(gen, 100):
        for beta, start, end, params in ((spec.beta1, spec.delta1, spec.delta2, spec.params1),
                                         (spec.beta2, spec.delta2, spec.delta1, spec.params2)):
            pops = gibbs_state(params, beta).populations
            deltas = np.linspace(start, end, 100)
            theta = 0.5 * np.arctan2(spec.coupling, deltas)
            pa, pb = occupancy_AB(pops, theta)
            states = oracles.stroke_states(pops.as_array(), params, deltas)
            for k, rho in enumerate(states):
                ta, tb = oracles.partial_trace_occupations(rho)
                worst = max(worst, abs(ta - pa[k]), abs(tb - pb[k]))
    acceptance("10 occupancy formula", worst <= 1e-12, f"max err={worst:.1e} over 100x2x100 points")


def test_11_performance(acceptance):
    analysis.window_scan(1.0, 0.2, 1.0, 3.0, 20)  # warm-up
    t0 = time.perf_counter()
    analysis.window_scan(1.0, 0.2, 1.0, 3.0, 200)
    scan = time.perf_counter() - t0
    t0 = time.perf_counter()
    report = run_verify(0, 1000)
    verify = time.perf_counter() - t0
    ok = scan < 2.0 and verify < 30.0 and report.passed
    acceptance("11 performance", ok, f"200x200 scan={scan:.3f}s verify={verify:.1f}s passed={report.passed}")
