"""Randomized invariant suites behind the ``verify`` command.

Random draws use numpy's PCG64 generator. Each suite gets its own child
stream spawned from ``SeedSequence(seed)``, so results do not depend on
which suites run or in what order. Reproducibility holds for this package
only; another implementation given the same seed will draw different
parameters.

Sampling domain for coupled cycles: Omega ~ U[0.5, 2], J/Omega ~ U[0.05, 0.9],
Delta_i ~ U[0, 0.999 sqrt(Omega^2 - J^2)), ln beta_i ~ U[ln 0.1, ln 10].
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import analysis, coherence, oracles
from .cycle import CycleSpec, cycle_heats_batch, cycle_work_batch, occupancy_AB, run_cycle, trace_heats
from .linalg import eig_hermitian, von_neumann_entropy
from .model import ModelParams, build_total_hamiltonian, closed_form_spectrum
from .thermal import gibbs_state

TOL_FIRST_LAW = 1e-10
TOL_DECOMPOSITION = 1e-8
TOL_WORK_ORACLE = 1e-6
TOL_SPECTRUM = 1e-12
TOL_EIGENSPACE = 1e-10
TOL_GIBBS = 1e-11
TOL_IDENTITY = 1e-12
TOL_ENTROPY = 1e-10
TOL_OCCUPANCY = 1e-12
TOL_MEASURE_ERASE = 1e-10
TOL_MARGIN = 1e-12


@dataclass
class SuiteResult:
    name: str
    cases: int
    failures: int = 0
    counterexample: Optional[dict] = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass
class VerifyReport:
    seed: int
    cases: int
    suites: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)


def sample_params(rng: np.random.Generator, n, coupling_range=(0.05, 0.9)):
    """Arrays (omega, J, delta1, delta2, beta1, beta2) from the documented domain."""
    omega = rng.uniform(0.5, 2.0, n)
    coupling = rng.uniform(*coupling_range, n) * omega
    top = np.sqrt(omega**2 - coupling**2) * 0.999
    delta1 = rng.uniform(0.0, 1.0, n) * top
    delta2 = rng.uniform(0.0, 1.0, n) * top
    beta1 = np.exp(rng.uniform(np.log(0.1), np.log(10.0), n))
    beta2 = np.exp(rng.uniform(np.log(0.1), np.log(10.0), n))
    return omega, coupling, delta1, delta2, beta1, beta2


def sample_specs(rng, n, **kw):
    omega, coupling, delta1, delta2, beta1, beta2 = sample_params(rng, n, **kw)
    return [
        CycleSpec(float(omega[i]), float(delta1[i]), float(delta2[i]), float(coupling[i]),
                  float(beta1[i]), float(beta2[i]))
        for i in range(n)
    ]


def _spec_dict(spec: CycleSpec):
    return {
        "omega": spec.omega,
        "delta1": spec.delta1,
        "delta2": spec.delta2,
        "j": spec.coupling,
        "beta1": spec.beta1,
        "beta2": spec.beta2,
    }


def _record(result: SuiteResult, ok: bool, params: dict, detail: str = ""):
    if not ok:
        result.failures += 1
        if result.counterexample is None:
            result.counterexample = params
            result.detail = detail


def suite_first_law(rng, n):
    res = SuiteResult("first_law", n)
    for spec in sample_specs(rng, n):
        ends, ex = run_cycle(spec)
        q1t, q2t = trace_heats(ends, spec)
        err_q = abs(ex.W - (ex.Q1 + ex.Q2))
        err_t = abs(ex.W - (q1t + q2t))
        _record(res, max(err_q, err_t) <= TOL_FIRST_LAW, _spec_dict(spec),
                f"|W-(Q1+Q2)|={err_q:.3e}, trace form {err_t:.3e}")
    return res


def suite_decomposition(rng, n):
    res = SuiteResult("decomposition", n)
    for spec in sample_specs(rng, n):
        _, ex = run_cycle(spec)
        err = abs(ex.W - (ex.W_A + ex.W_B))
        _record(res, err <= TOL_DECOMPOSITION, _spec_dict(spec), f"|W-(W_A+W_B)|={err:.3e}")
    return res


def suite_adiabatic_invariance(rng, n):
    res = SuiteResult("adiabatic_invariance", n)
    for spec in sample_specs(rng, n):
        ends, _ = run_cycle(spec)
        err = max(
            abs(von_neumann_entropy(ends.rho_a) - von_neumann_entropy(ends.rho_b)),
            abs(von_neumann_entropy(ends.rho_c) - von_neumann_entropy(ends.rho_d)),
        )
        _record(res, err <= TOL_ENTROPY, _spec_dict(spec), f"entropy drift {err:.3e}")
    return res


def suite_spectrum_oracle(rng, n):
    res = SuiteResult("spectrum_oracle", n)
    omega, coupling, delta, _, _, _ = sample_params(rng, n)
    for o, j, d in zip(omega, coupling, delta):
        params = ModelParams(float(o), float(d), float(j))
        spec = closed_form_spectrum(params)
        num = eig_hermitian(build_total_hamiltonian(params))
        err_e = float(np.max(np.abs(np.sort(spec.energies) - num.eigenvalues)))
        overlap = spec.eigenvectors.conj().T @ num.eigenvectors
        err_v = float(np.max(np.abs(overlap.conj().T @ overlap - np.eye(4))))
        # Non-degenerate levels: the overlap must also be diagonal.
        err_d = float(np.max(np.abs(np.abs(overlap) - np.eye(4))))
        ok = err_e <= TOL_SPECTRUM and max(err_v, err_d) <= TOL_EIGENSPACE
        _record(res, ok, {"omega": o, "delta": d, "j": j}, f"energy err {err_e:.3e}, overlap err {max(err_v, err_d):.3e}")
    return res


def suite_gibbs_oracle(rng, n):
    res = SuiteResult("gibbs_oracle", n)
    omega, coupling, delta, _, beta, _ = sample_params(rng, n)
    for o, j, d, b in zip(omega, coupling, delta, beta):
        params = ModelParams(float(o), float(d), float(j))
        rho = gibbs_state(params, float(b)).state
        ref = oracles.numeric_gibbs(build_total_hamiltonian(params), float(b))
        err = float(np.max(np.abs(rho - ref)))
        _record(res, err <= TOL_GIBBS, {"omega": o, "delta": d, "j": j, "beta": b}, f"max diff {err:.3e}")
    return res


def suite_work_oracle(rng, n):
    res = SuiteResult("work_oracle", n)
    for spec in sample_specs(rng, n):
        _, ex = run_cycle(spec)
        err = abs(ex.W - oracles.discretized_cycle_work(spec))
        _record(res, err <= TOL_WORK_ORACLE, _spec_dict(spec), f"|W - oracle|={err:.3e}")
    return res


def suite_uncoupled(rng, n):
    res = SuiteResult("uncoupled_impossibility", n)
    omega, _, _, delta2, beta1, beta2 = sample_params(rng, n, coupling_range=(0.0, 0.0))
    W = cycle_work_batch(omega, 0.0, 0.0, delta2, beta1, beta2)
    bad = np.flatnonzero(W > 0)
    res.failures = int(bad.size)
    if bad.size:
        i = bad[0]
        res.counterexample = {"omega": omega[i], "delta1": 0.0, "delta2": delta2[i], "j": 0.0,
                              "beta1": beta1[i], "beta2": beta2[i]}
        res.detail = f"W={W[i]:.3e} > 0"
    return res


def suite_appendix_identity(rng, n):
    res = SuiteResult("appendix_identity", n)
    omega, coupling, a, b, beta1, beta2 = sample_params(rng, n)
    d1, d2 = np.minimum(a, b), np.maximum(a, b)
    for row in zip(omega, coupling, d1, d2, beta1, beta2):
        row = tuple(float(x) for x in row)
        r1 = analysis.appendix_identity_check(*row)
        # Same pair with the detunings swapped exercises the middle-level form.
        o, j, x1, x2, b1, b2 = row
        r2 = analysis.middle_levels_oracle(o, j, x2, x1, b1, b2).residual
        params = dict(zip(("omega", "j", "delta1", "delta2", "beta1", "beta2"), row))
        _record(res, max(r1, r2) <= TOL_IDENTITY, params, f"residuals {r1:.3e}, {r2:.3e}")
    return res


def _ordered_betas(beta1, beta2):
    lo, hi = np.minimum(beta1, beta2), np.maximum(beta1, beta2)
    keep = lo < hi
    return lo, hi, keep


def suite_limit_necessity(rng, n):
    m = 100 * n
    res = SuiteResult("limit_necessity", m)
    omega, coupling, d1, d2, b1, b2 = sample_params(rng, m)
    b1, b2, keep = _ordered_betas(b1, b2)
    W = cycle_work_batch(omega, coupling, d1, d2, b1, b2)
    low, high = analysis.limit_conditions(omega, coupling, d1, d2, b1, b2)
    bad = keep & (W > 0) & (((d2 > d1) & ~low) | ((d2 < d1) & ~high))
    res.failures = int(bad.sum())
    if res.failures:
        i = np.flatnonzero(bad)[0]
        res.counterexample = {"omega": omega[i], "j": coupling[i], "delta1": d1[i], "delta2": d2[i],
                              "beta1": b1[i], "beta2": b2[i]}
    return res


def suite_efficiency_bound(rng, n):
    m = 100 * n
    res = SuiteResult("efficiency_bound", m)
    omega, coupling, d1, d2, b1, b2 = sample_params(rng, m)
    b1, b2, keep = _ordered_betas(b1, b2)
    W = cycle_work_batch(omega, coupling, d1, d2, b1, b2)
    q1, _ = cycle_heats_batch(omega, coupling, d1, d2, b1, b2)
    engine = keep & (W > 0) & (q1 > 0) & (d1 != d2)
    with np.errstate(divide="ignore", invalid="ignore"):
        eta = W / q1
    eta_up = analysis.efficiency_bound_batch(omega, coupling, d1, d2)
    carnot = 1.0 - b1 / b2
    ok = (eta_up - eta > TOL_MARGIN) & (carnot - eta_up > TOL_MARGIN)
    bad = engine & ~ok
    res.failures = int(bad.sum())
    res.detail = f"{int(engine.sum())} engine samples"
    if res.failures:
        i = np.flatnonzero(bad)[0]
        res.counterexample = {"omega": omega[i], "j": coupling[i], "delta1": d1[i], "delta2": d2[i],
                              "beta1": b1[i], "beta2": b2[i]}
    return res


def suite_coherence_criterion(rng, n):
    res = SuiteResult("coherence_criterion", n)
    omega, coupling, a, b, beta1, beta2 = sample_params(rng, n)
    d1, d2 = np.minimum(a, b), np.maximum(a, b)
    for row in zip(omega, d1, d2, coupling, beta1, beta2):
        spec = CycleSpec(*(float(x) for x in row), stroke_samples=3)
        out = coherence.work_coherence_criterion(spec)
        _record(res, out.agree or not out.applicable, _spec_dict(spec), f"sign(W)={out.W_sign}, sign(dC)={out.coherence_gain_sign}")
    return res


def suite_measure_erase(rng, n):
    res = SuiteResult("measure_erase", n)
    specs = sample_specs(rng, n)
    # Every fourth case uncoupled, where the bound must vanish exactly.
    specs = [s if i % 4 else CycleSpec(s.omega, s.delta1, s.delta2, 0.0, s.beta1, s.beta2, 3)
             for i, s in enumerate(specs)]
    for spec in specs:
        rep = coherence.measure_erase_cycle(spec)
        audit = abs(rep.stepwise_sum - rep.w_total_bound)
        ok = audit <= TOL_MEASURE_ERASE and rep.w_total_bound <= 0.0 and rep.w_decoherence == 0.0
        if spec.coupling == 0.0:
            ok = ok and rep.w_total_bound == 0.0
        _record(res, ok, _spec_dict(spec), f"audit {audit:.3e}, bound {rep.w_total_bound:.3e}")
    return res


def suite_occupancy(rng, n, points=100):
    res = SuiteResult("occupancy_formula", n)
    for spec in sample_specs(rng, n):
        for pops, start, end in (
            (gibbs_state(spec.params1, spec.beta1).populations, spec.delta1, spec.delta2),
            (gibbs_state(spec.params2, spec.beta2).populations, spec.delta2, spec.delta1),
        ):
            deltas = np.linspace(start, end, points)
            states = oracles.stroke_states(pops.as_array(), spec.params1, deltas)
            ref_a = states[:, 0, 0].real + states[:, 1, 1].real
            ref_b = states[:, 0, 0].real + states[:, 2, 2].real
            pa, pb = occupancy_AB(pops, 0.5 * np.arctan2(spec.coupling, deltas))
            err = float(max(np.max(np.abs(pa - ref_a)), np.max(np.abs(pb - ref_b))))
            _record(res, err <= TOL_OCCUPANCY, _spec_dict(spec), f"max diff {err:.3e}")
    return res


# (name, suite, case-count scaling from the --cases value)
SUITES: list[tuple[str, Callable, Callable[[int], int]]] = [
    ("first_law", suite_first_law, lambda n: n),
    ("decomposition", suite_decomposition, lambda n: n),
    ("adiabatic_invariance", suite_adiabatic_invariance, lambda n: n),
    ("spectrum_oracle", suite_spectrum_oracle, lambda n: n),
    ("gibbs_oracle", suite_gibbs_oracle, lambda n: n),
    ("work_oracle", suite_work_oracle, lambda n: -(-n // 10)),
    ("uncoupled_impossibility", suite_uncoupled, lambda n: n),
    ("appendix_identity", suite_appendix_identity, lambda n: n),
    ("limit_necessity", suite_limit_necessity, lambda n: n),
    ("efficiency_bound", suite_efficiency_bound, lambda n: n),
    ("coherence_criterion", suite_coherence_criterion, lambda n: n),
    ("measure_erase", suite_measure_erase, lambda n: n),
    ("occupancy_formula", suite_occupancy, lambda n: -(-n // 10)),
]


def run_verify(seed: int, cases: int, only=None) -> VerifyReport:
    report = VerifyReport(seed=seed, cases=cases)
    children = np.random.SeedSequence(seed).spawn(len(SUITES))
    for (name, fn, scale), child in zip(SUITES, children):
        if only is not None and name not in only:
            continue
        n = scale(cases)
        if n == 0:
            report.suites.append(SuiteResult(name, 0))
            continue
        rng = np.random.Generator(np.random.PCG64(child))
        report.suites.append(fn(rng, n))
    return report
