"""XX-coupled two-qubit Hamiltonian and its closed-form spectrum.

The local fields are parametrized by their sum ``omega`` (Omega) and
difference ``delta`` (Delta): omega_A = (Omega - Delta)/2 and
omega_B = (Omega + Delta)/2. The Hamiltonian is

    H = omega_A (1 + sz_A) + omega_B (1 + sz_B) + J (s+_A s-_B + s-_A s+_B)

with s+ = |0><1| raising to the local excited state ``|0>``.

Eigenstates are indexed in ascending energy order throughout the package,
see :data:`LEVELS`: ``|11>`` (0), ``|phi_->`` (Omega - D), ``|phi_+>``
(Omega + D), ``|00>`` (2 Omega), with D = sqrt(Delta^2 + J^2).
"""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DegenerateSpectrumError, LevelCrossingError, ParameterError

LEVELS = ("1", "-", "+", "0")

# Product-basis indices (|00>, |01>, |10>, |11>).
I00, I01, I10, I11 = 0, 1, 2, 3


@dataclass(frozen=True)
class ModelParams:
    omega: float
    delta: float
    coupling: float

    def __post_init__(self):
        for name in ("omega", "delta", "coupling"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value!r}")
        if self.omega <= 0:
            raise ParameterError(f"omega must be > 0, got {self.omega!r}")
        if self.delta < 0:
            raise ParameterError(f"delta must be >= 0, got {self.delta!r}")
        if self.coupling < 0:
            raise ParameterError(f"coupling must be >= 0, got {self.coupling!r}")

    @property
    def omega_a(self) -> float:
        return 0.5 * (self.omega - self.delta)

    @property
    def omega_b(self) -> float:
        return 0.5 * (self.omega + self.delta)

    @property
    def gap(self) -> float:
        return float(np.hypot(self.delta, self.coupling))

    def replace(self, **changes) -> "ModelParams":
        kw = {"omega": self.omega, "delta": self.delta, "coupling": self.coupling}
        kw.update(changes)
        return ModelParams(**kw)


def max_delta(omega, coupling):
    """Supremum of admissible detunings, sqrt(Omega^2 - J^2)."""
    return np.sqrt(np.maximum(np.asarray(omega, dtype=float) ** 2 - np.asarray(coupling, dtype=float) ** 2, 0.0))


@dataclass(frozen=True)
class Spectrum:
    e0: float
    eplus: float
    eminus: float
    e1: float
    gap: float
    theta: float
    eigenvectors: np.ndarray = field(repr=False, compare=False)

    @property
    def energies(self) -> np.ndarray:
        """Energies in :data:`LEVELS` (ascending) order."""
        return np.array([self.e1, self.eminus, self.eplus, self.e0])


def build_local_hamiltonian(params: ModelParams) -> np.ndarray:
    o, d = params.omega, params.delta
    return np.diag([2.0 * o, o - d, o + d, 0.0]).astype(np.complex128)


def build_total_hamiltonian(params: ModelParams) -> np.ndarray:
    h = build_local_hamiltonian(params)
    h[I01, I10] = params.coupling
    h[I10, I01] = params.coupling
    return h


def interaction_hamiltonian(coupling: float) -> np.ndarray:
    h = np.zeros((4, 4), dtype=np.complex128)
    h[I01, I10] = h[I10, I01] = coupling
    return h


def eigenvectors_for_angle(theta) -> np.ndarray:
    """Columns |11>, |phi_->, |phi_+>, |00> for mixing angle ``theta``."""
    c, s = np.cos(theta), np.sin(theta)
    v = np.zeros((4, 4), dtype=np.complex128)
    v[I11, 0] = 1.0
    v[I01, 1], v[I10, 1] = c, -s
    v[I10, 2], v[I01, 2] = c, s
    v[I00, 3] = 1.0
    return v


def check_no_crossing(params: ModelParams):
    if params.coupling >= params.omega:
        raise LevelCrossingError(
            f"coupling J={params.coupling!r} must be smaller than omega={params.omega!r}"
        )
    bound = float(max_delta(params.omega, params.coupling))
    if params.delta >= bound:
        raise LevelCrossingError(
            f"delta={params.delta!r} reaches the level crossing at sqrt(omega^2 - J^2)={bound!r}"
        )


def closed_form_spectrum(params: ModelParams, *, allow_degenerate=False) -> Spectrum:
    """Analytic eigensystem of :func:`build_total_hamiltonian`.

    The mixing angle is theta = atan2(J, Delta)/2 in [0, pi/4]. With
    Delta = J = 0 the doublet is degenerate and this raises unless
    ``allow_degenerate`` is set, in which case theta = 0 (the product basis,
    the continuous limit along an uncoupled stroke) is returned.
    """
    check_no_crossing(params)
    d = params.gap
    if d == 0.0 and not allow_degenerate:
        raise DegenerateSpectrumError("delta = J = 0: mixing angle undefined")
    theta = 0.5 * float(np.arctan2(params.coupling, params.delta))
    o = params.omega
    return Spectrum(
        e0=2.0 * o,
        eplus=o + d,
        eminus=o - d,
        e1=0.0,
        gap=d,
        theta=theta,
        eigenvectors=eigenvectors_for_angle(theta),
    )


@dataclass
class ConstraintReport:
    ok: bool
    violations: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    level_crossing: bool = False

    def raise_if_invalid(self):
        if self.ok:
            return
        message = "; ".join(self.violations)
        if self.level_crossing:
            raise LevelCrossingError(message)
        raise ParameterError(message)


def validate_cycle_constraint(omega, delta1, delta2, coupling) -> ConstraintReport:
    """Check both detunings lie in [0, sqrt(Omega^2 - J^2)).

    Never raises; problems are listed in the returned report. Equal
    detunings are allowed but flagged, the cycle then encloses no area.
    """
    report = ConstraintReport(ok=True)
    values = {"omega": omega, "delta1": delta1, "delta2": delta2, "coupling": coupling}
    for name, value in values.items():
        try:
            finite = np.isfinite(float(value))
        except (TypeError, ValueError):
            finite = False
        if not finite:
            report.violations.append(f"{name} must be a finite number, got {value!r}")
    if report.violations:
        report.ok = False
        return report
    if omega <= 0:
        report.violations.append(f"omega must be > 0, got {omega!r}")
    if coupling < 0:
        report.violations.append(f"coupling must be >= 0, got {coupling!r}")
    elif omega > 0 and coupling >= omega:
        report.violations.append(f"coupling J={coupling!r} must be smaller than omega={omega!r}")
        report.level_crossing = True
    if not report.violations:
        bound = float(max_delta(omega, coupling))
        for name in ("delta1", "delta2"):
            value = values[name]
            if value < 0:
                report.violations.append(f"{name} must be >= 0, got {value!r}")
            elif value >= bound:
                report.level_crossing = True
                report.violations.append(
                    f"{name}={value!r} reaches the level crossing at sqrt(omega^2 - J^2)={bound!r}"
                )
    if delta1 == delta2:
        report.warnings.append("delta1 == delta2: zero-area cycle, no work is exchanged")
    report.ok = not report.violations
    return report
