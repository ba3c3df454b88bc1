"""Four-stroke Otto cycle of the coupled pair.

Stroke a->b drives Delta from Delta1 to Delta2 with populations frozen,
b->c thermalizes at beta2, c->d drives Delta back from Delta2 to Delta1,
and d->a thermalizes at beta1. Sign conventions: W > 0 is work done BY the
qubits, Q > 0 is heat absorbed BY the qubits.

The returning stroke ends on the Delta1 Hamiltonian. Some write-ups of this
cycle say the Hamiltonian is reversed "back to H_L2"; closure of the cycle
(rho_d must be diagonal at Delta1) fixes it to Delta1 here.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .exceptions import ContractViolation, ParameterError
from .linalg import check_density
from .model import (
    ModelParams,
    build_total_hamiltonian,
    closed_form_spectrum,
    validate_cycle_constraint,
)
from .thermal import Populations, gibbs_population_gap, gibbs_populations, gibbs_state

DEFAULT_STROKE_SAMPLES = 1001
DIAGONAL_TOL = 1e-10


@dataclass(frozen=True)
class CycleSpec:
    omega: float
    delta1: float
    delta2: float
    coupling: float
    beta1: float
    beta2: float
    stroke_samples: int = DEFAULT_STROKE_SAMPLES

    def __post_init__(self):
        validate_cycle_constraint(self.omega, self.delta1, self.delta2, self.coupling).raise_if_invalid()
        for name in ("beta1", "beta2"):
            b = getattr(self, name)
            if not (np.isfinite(b) and b > 0):
                raise ParameterError(f"{name} must be finite and > 0, got {b!r}")
        if int(self.stroke_samples) != self.stroke_samples or self.stroke_samples < 3:
            raise ParameterError(f"stroke_samples must be an integer >= 3, got {self.stroke_samples!r}")

    @property
    def params1(self) -> ModelParams:
        return ModelParams(self.omega, self.delta1, self.coupling)

    @property
    def params2(self) -> ModelParams:
        return ModelParams(self.omega, self.delta2, self.coupling)

    @property
    def gap1(self) -> float:
        return float(np.hypot(self.delta1, self.coupling))

    @property
    def gap2(self) -> float:
        return float(np.hypot(self.delta2, self.coupling))

    @property
    def t1(self) -> float:
        return 1.0 / self.beta1

    @property
    def t2(self) -> float:
        return 1.0 / self.beta2


@dataclass(frozen=True)
class CycleEndpoints:
    rho_a: np.ndarray
    rho_b: np.ndarray
    rho_c: np.ndarray
    rho_d: np.ndarray
    pops_a: Populations
    pops_c: Populations


@dataclass(frozen=True)
class EnergyExchange:
    W: float
    W_A: float
    W_B: float
    Q1: float
    Q2: float
    eta: Optional[float]


@dataclass(frozen=True)
class OccupancySample:
    delta: float
    omega_A: float
    omega_B: float
    pA: float
    pB: float
    stroke: str = ""


@dataclass
class Trajectory:
    """Occupation samples along both work strokes plus the four corners."""

    strokes: dict = field(default_factory=dict)
    endpoints: dict = field(default_factory=dict)


def _spectrum(params: ModelParams):
    # J = 0 with Delta = 0 keeps the product basis, the limit along the stroke.
    return closed_form_spectrum(params, allow_degenerate=params.coupling == 0.0)


def closed_form_work(gap_a, gap_c, d1, d2):
    """Net cycle work from the population gaps p_- - p_+ at a and c."""
    return (np.asarray(gap_a) - np.asarray(gap_c)) * (np.asarray(d2) - np.asarray(d1))


def closed_form_heats(pops_a, pops_c, omega, d1, d2):
    """Heats (Q1, Q2) absorbed on the isochores; populations in LEVELS order."""
    dp = np.asarray(pops_a) - np.asarray(pops_c)
    d_outer = dp[..., 3] - dp[..., 0]
    d_mid = dp[..., 1] - dp[..., 2]
    q1 = d_outer * omega - d_mid * d1
    q2 = -d_outer * omega + d_mid * d2
    return q1, q2


def efficiency(W, Q1) -> Optional[float]:
    """W/Q1 in the engine regime (W > 0 and Q1 > 0), otherwise ``None``."""
    if W > 0 and Q1 > 0:
        return float(W / Q1)
    return None


def stroke_work_global(pops: Populations, start: ModelParams, end: ModelParams) -> float:
    """Work output of one adiabatic stroke with frozen populations."""
    d_from = np.hypot(start.delta, start.coupling)
    d_to = np.hypot(end.delta, end.coupling)
    return float((pops.pminus - pops.pplus) * (d_to - d_from))


def occupancy_AB(pops: Populations, theta):
    """Local excited-state occupations (pA, pB) at mixing angle ``theta``.

    ``theta`` may be an array; the outputs broadcast against it.
    """
    base = pops.p0 + 0.5 * (pops.pminus + pops.pplus)
    split = 0.5 * (pops.pminus - pops.pplus) * np.cos(2.0 * np.asarray(theta))
    return base + split, base - split


def _mixing_angle(delta, coupling):
    return 0.5 * np.arctan2(coupling, np.asarray(delta, dtype=float))


def simpson(y, x):
    """Composite Simpson integral of samples ``y`` at nodes ``x`` (uniform spacing).

    Odd counts use the 1/3 rule throughout; even counts close the last three
    intervals with the 3/8 rule.
    """
    y = np.asarray(y, dtype=float)
    n = y.shape[-1]
    if n < 3:
        raise ParameterError(f"Simpson integration needs >= 3 samples, got {n}")
    h = (x[-1] - x[0]) / (n - 1)
    if n % 2 == 1:
        w = np.ones(n)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        return float(h / 3.0 * np.dot(y, w))
    if n == 4:
        return float(3.0 * h / 8.0 * (y[0] + 3 * y[1] + 3 * y[2] + y[3]))
    head = simpson(y[: n - 3], x[: n - 3])
    tail = 3.0 * h / 8.0 * (y[n - 4] + 3 * y[n - 3] + 3 * y[n - 2] + y[n - 1])
    return head + float(tail)


def per_qubit_stroke_work(pops: Populations, omega, coupling, delta_start, delta_end, samples=DEFAULT_STROKE_SAMPLES):
    """Work done by qubit A and qubit B along one adiabatic stroke.

    With omega_A = (Omega - Delta)/2 and generalized force 2 p, the works
    are W_A = int pA dDelta and W_B = -int pB dDelta. The quadrature nodes
    are uniform in asinh(Delta / J), where the integrands are smooth even
    for J << Delta; for J = 0 they are uniform in Delta and the integrands
    are constant.
    """
    if samples < 3:
        raise ParameterError(f"samples must be >= 3, got {samples}")
    if delta_start == delta_end:
        return 0.0, 0.0
    if coupling > 0:
        u = np.linspace(np.arcsinh(delta_start / coupling), np.arcsinh(delta_end / coupling), samples)
        delta = coupling * np.sinh(u)
        jac = coupling * np.cosh(u)
        theta = _mixing_angle(delta, coupling)
        pa, pb = occupancy_AB(pops, theta)
        return simpson(pa * jac, u), -simpson(pb * jac, u)
    delta = np.linspace(delta_start, delta_end, samples)
    pa, pb = occupancy_AB(pops, np.zeros(samples))
    return simpson(pa, delta), -simpson(pb, delta)


def adiabatic_transport(rho, start: ModelParams, end: ModelParams):
    """Carry the eigenstate populations of ``rho`` from the ``start`` basis to ``end``."""
    rho = check_density(rho)
    v_from = _spectrum(start).eigenvectors
    v_to = _spectrum(end).eigenvectors
    in_basis = v_from.conj().T @ rho @ v_from
    off = in_basis - np.diag(np.diagonal(in_basis))
    if np.max(np.abs(off)) > DIAGONAL_TOL:
        raise ContractViolation("state is not diagonal in the source eigenbasis")
    p = np.diagonal(in_basis).real
    return (v_to * p) @ v_to.conj().T


def _state_from_populations(params: ModelParams, pops: np.ndarray):
    v = _spectrum(params).eigenvectors
    return (v * pops) @ v.conj().T


def run_cycle(spec: CycleSpec):
    """Run all four strokes; returns ``(CycleEndpoints, EnergyExchange)``."""
    p1, p2 = spec.params1, spec.params2
    therm_a = gibbs_state(p1, spec.beta1)
    therm_c = gibbs_state(p2, spec.beta2)
    pa = therm_a.populations
    pc = therm_c.populations
    rho_b = _state_from_populations(p2, pa.as_array())
    rho_d = _state_from_populations(p1, pc.as_array())
    d1, d2 = spec.gap1, spec.gap2

    W = float(closed_form_work(pa.pminus - pa.pplus, pc.pminus - pc.pplus, d1, d2))
    q1, q2 = closed_form_heats(pa.as_array(), pc.as_array(), spec.omega, d1, d2)
    wa_ab, wb_ab = per_qubit_stroke_work(pa, spec.omega, spec.coupling, spec.delta1, spec.delta2, spec.stroke_samples)
    wa_cd, wb_cd = per_qubit_stroke_work(pc, spec.omega, spec.coupling, spec.delta2, spec.delta1, spec.stroke_samples)

    endpoints = CycleEndpoints(
        rho_a=therm_a.state, rho_b=rho_b, rho_c=therm_c.state, rho_d=rho_d, pops_a=pa, pops_c=pc
    )
    exchange = EnergyExchange(
        W=W,
        W_A=wa_ab + wa_cd,
        W_B=wb_ab + wb_cd,
        Q1=float(q1),
        Q2=float(q2),
        eta=efficiency(W, float(q1)),
    )
    return endpoints, exchange


def trace_heats(endpoints: CycleEndpoints, spec: CycleSpec):
    """Q1 = tr[(rho_a - rho_d) H1], Q2 = tr[(rho_c - rho_b) H2] straight from the states."""
    h1 = build_total_hamiltonian(spec.params1)
    h2 = build_total_hamiltonian(spec.params2)
    q1 = np.trace((endpoints.rho_a - endpoints.rho_d) @ h1).real
    q2 = np.trace((endpoints.rho_c - endpoints.rho_b) @ h2).real
    return float(q1), float(q2)


def _stroke_samples(label, pops, spec, start, end):
    delta = np.linspace(start, end, spec.stroke_samples)
    pa, pb = occupancy_AB(pops, _mixing_angle(delta, spec.coupling))
    return [
        OccupancySample(float(d), 0.5 * (spec.omega - d), 0.5 * (spec.omega + d), float(a), float(b), label)
        for d, a, b in zip(delta, pa, pb)
    ]


def trajectory(spec: CycleSpec) -> Trajectory:
    """Occupations along a->b and c->d (linear in Delta) and at the corners a, b, c, d."""
    pa = gibbs_state(spec.params1, spec.beta1).populations
    pc = gibbs_state(spec.params2, spec.beta2).populations
    traj = Trajectory()
    traj.strokes["a->b"] = _stroke_samples("a->b", pa, spec, spec.delta1, spec.delta2)
    traj.strokes["c->d"] = _stroke_samples("c->d", pc, spec, spec.delta2, spec.delta1)
    corners = {"a": (pa, spec.delta1), "b": (pa, spec.delta2), "c": (pc, spec.delta2), "d": (pc, spec.delta1)}
    for label, (pops, d) in corners.items():
        a, b = occupancy_AB(pops, _mixing_angle(d, spec.coupling))
        traj.endpoints[label] = OccupancySample(
            float(d), 0.5 * (spec.omega - d), 0.5 * (spec.omega + d), float(a), float(b), label
        )
    return traj


def cycle_work_batch(omega, coupling, delta1, delta2, beta1, beta2):
    """Vectorized net work W over broadcast parameter arrays."""
    d1 = np.hypot(delta1, coupling)
    d2 = np.hypot(delta2, coupling)
    return closed_form_work(gibbs_population_gap(omega, d1, beta1), gibbs_population_gap(omega, d2, beta2), d1, d2)


def cycle_heats_batch(omega, coupling, delta1, delta2, beta1, beta2):
    d1 = np.hypot(delta1, coupling)
    d2 = np.hypot(delta2, coupling)
    return closed_form_heats(gibbs_populations(omega, d1, beta1), gibbs_populations(omega, d2, beta2), omega, d1, d2)
