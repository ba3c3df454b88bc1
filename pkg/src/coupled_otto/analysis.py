"""Positive-work windows, limit conditions, efficiency bounds and the
two-level reference engines used to bound the coupled cycle.

Everything here is vectorized over numpy broadcasting; scalar inputs give
0-d results that convert cleanly with ``float``.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .cycle import cycle_heats_batch, cycle_work_batch
from .exceptions import ParameterError
from .model import max_delta
from .thermal import gibbs_population_gap

BISECT_TOL = 1e-10


def f_function(omega, coupling, delta1, delta2, beta1, beta2):
    """Difference of population gaps (p_- - p_+)_a - (p_- - p_+)_c."""
    d1 = np.hypot(delta1, coupling)
    d2 = np.hypot(delta2, coupling)
    return gibbs_population_gap(omega, d1, beta1) - gibbs_population_gap(omega, d2, beta2)


def f_high_temperature(omega, coupling, delta1, delta2, beta1, beta2):
    return 0.5 * (beta1 * np.hypot(delta1, coupling) - beta2 * np.hypot(delta2, coupling))


def f_low_temperature(omega, coupling, delta1, delta2, beta1, beta2):
    d1 = np.hypot(delta1, coupling)
    d2 = np.hypot(delta2, coupling)
    return np.exp(-beta1 * (omega - d1)) - np.exp(-beta2 * (omega - d2))


def _bisect_decreasing(fun, lo, hi, tol=BISECT_TOL):
    """Vectorized bisection for the root of a decreasing ``fun`` on [lo, hi].

    Entries without a sign change come back as NaN.
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    flo, fhi = fun(lo), fun(hi)
    ok = (flo > 0) & (fhi < 0)
    while np.any(ok & (hi - lo > tol)):
        mid = 0.5 * (lo + hi)
        fm = fun(mid)
        go_right = fm > 0
        lo = np.where(go_right, mid, lo)
        hi = np.where(go_right, hi, mid)
    root = 0.5 * (lo + hi)
    exact_lo = flo == 0
    root = np.where(exact_lo, lo, root)
    return np.where(ok | exact_lo, root, np.nan)


def f_zero_curve(omega, coupling, beta1, beta2, delta1_values, tol=BISECT_TOL):
    """Delta2 at which f vanishes, for each Delta1 (NaN when f keeps one sign)."""
    d1 = np.asarray(delta1_values, dtype=float)
    top = float(max_delta(omega, coupling))
    return _bisect_decreasing(
        lambda d2: f_function(omega, coupling, d1, d2, beta1, beta2),
        np.zeros_like(d1),
        np.full_like(d1, top),
        tol,
    )


@dataclass
class WindowGrid:
    """Closed-form cycle quantities on a Delta1 x Delta2 grid.

    Arrays are indexed ``[i, j]`` with ``i`` along ``delta1`` and ``j`` along
    ``delta2`` (row-major in Delta1). ``boundary`` holds the bisected f = 0
    curve, one Delta2 per Delta1 entry.
    """

    delta1: np.ndarray
    delta2: np.ndarray
    W: np.ndarray
    f: np.ndarray
    d2_minus_d1: np.ndarray
    sign: np.ndarray
    boundary: np.ndarray
    omega: float
    coupling: float
    beta1: float
    beta2: float

    def positive_fraction(self, branch: str = "all") -> float:
        upper = self.delta2[None, :] > self.delta1[:, None]
        mask = {"all": np.ones_like(upper), "upper": upper, "lower": ~upper}[branch]
        return float(np.mean((self.W > 0)[mask]))

    def in_window(self, delta1, delta2):
        """True where Delta2 lies strictly between Delta1 and the f = 0 curve."""
        d1 = np.asarray(delta1, dtype=float)
        d2 = np.asarray(delta2, dtype=float)
        edge = f_zero_curve(self.omega, self.coupling, self.beta1, self.beta2, d1)
        f_diag = f_function(self.omega, self.coupling, d1, d1, self.beta1, self.beta2)
        # No root means f keeps the sign it has on the diagonal over the whole column.
        top = float(max_delta(self.omega, self.coupling))
        edge = np.where(np.isnan(edge), np.where(f_diag > 0, top, 0.0), edge)
        lo = np.minimum(d1, edge)
        hi = np.maximum(d1, edge)
        return (d2 > lo) & (d2 < hi)


def window_scan(omega, coupling, beta1, beta2, grid_size) -> WindowGrid:
    """Evaluate W = f (D2 - D1) on a grid_size^2 lattice over [0, sqrt(Omega^2 - J^2))^2."""
    if grid_size < 2:
        raise ParameterError(f"grid_size must be >= 2, got {grid_size}")
    axis = np.linspace(0.0, float(max_delta(omega, coupling)), grid_size, endpoint=False)
    d1, d2 = np.meshgrid(axis, axis, indexing="ij")
    f = f_function(omega, coupling, d1, d2, beta1, beta2)
    dd = np.hypot(d2, coupling) - np.hypot(d1, coupling)
    W = f * dd
    return WindowGrid(
        delta1=axis,
        delta2=axis.copy(),
        W=W,
        f=f,
        d2_minus_d1=dd,
        sign=np.sign(W).astype(int),
        boundary=f_zero_curve(omega, coupling, beta1, beta2, axis),
        omega=float(omega),
        coupling=float(coupling),
        beta1=float(beta1),
        beta2=float(beta2),
    )


def limit_conditions(omega, coupling, delta1, delta2, beta1, beta2):
    """(low_T_ok, high_T_ok): the positive-work conditions of the two limits.

    low T:  beta2 (Omega - D2) > beta1 (Omega - D1)
    high T: beta2 D2 > beta1 D1
    """
    d1 = np.hypot(delta1, coupling)
    d2 = np.hypot(delta2, coupling)
    low = beta2 * (omega - d2) > beta1 * (omega - d1)
    high = beta2 * d2 > beta1 * d1
    return low, high


def efficiency_bound(omega, coupling, delta1, delta2):
    """Upper efficiency bound from the dominant effective two-level engine."""
    if delta1 == delta2:
        raise ParameterError("efficiency bound undefined for delta1 == delta2")
    return float(efficiency_bound_batch(omega, coupling, delta1, delta2))


def efficiency_bound_batch(omega, coupling, delta1, delta2):
    """Vectorized :func:`efficiency_bound`; NaN where delta1 == delta2."""
    delta1 = np.asarray(delta1, dtype=float)
    delta2 = np.asarray(delta2, dtype=float)
    d1 = np.hypot(delta1, coupling)
    d2 = np.hypot(delta2, coupling)
    with np.errstate(divide="ignore", invalid="ignore"):
        lower_branch = 1.0 - d2 / d1
        upper_branch = 1.0 - (omega - d2) / (omega - d1)
    out = np.where(delta2 < delta1, lower_branch, upper_branch)
    return np.where(delta1 == delta2, np.nan, out)


def positive_work_range(omega, coupling, delta1, beta1, beta2):
    """Largest Delta2 interval compatible with the limit conditions (beta1 < beta2).

    Solves beta2 D2 = beta1 D1 for the lower end and
    beta2 (Omega - D2) = beta1 (Omega - D1) for the upper end, then clips to
    the admissible detunings. Returns ``None`` unless beta1 < beta2.
    """
    if not beta1 < beta2:
        return None
    d1 = np.hypot(delta1, coupling)
    r = beta1 / beta2
    d_lo = r * d1
    d_hi = omega - r * (omega - d1)
    top = float(max_delta(omega, coupling))
    lo = float(np.sqrt(max(d_lo**2 - coupling**2, 0.0)))
    hi = float(min(np.sqrt(max(d_hi**2 - coupling**2, 0.0)), top))
    return lo, hi


@dataclass(frozen=True)
class EfficiencyPoint:
    delta2: float
    eta: Optional[float]
    eta_up: Optional[float]
    eta_carnot: float


@dataclass
class EfficiencySweep:
    delta2: np.ndarray
    W: np.ndarray
    Q1: np.ndarray
    eta: np.ndarray  # NaN where undefined
    eta_up: np.ndarray  # NaN at delta2 == delta1
    eta_carnot: float
    positive_work: np.ndarray
    work_range: Optional[tuple]

    def points(self):
        def opt(x):
            return None if np.isnan(x) else float(x)

        return [
            EfficiencyPoint(float(d), opt(e), opt(u), self.eta_carnot)
            for d, e, u in zip(self.delta2, self.eta, self.eta_up)
        ]


def efficiency_sweep(omega, coupling, delta1, beta1, beta2, delta2_values) -> EfficiencySweep:
    d2 = np.asarray(delta2_values, dtype=float)
    W = cycle_work_batch(omega, coupling, delta1, d2, beta1, beta2)
    q1, _ = cycle_heats_batch(omega, coupling, delta1, d2, beta1, beta2)
    engine = (W > 0) & (q1 > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        eta = np.where(engine, W / q1, np.nan)
    return EfficiencySweep(
        delta2=d2,
        W=W,
        Q1=q1,
        eta=eta,
        eta_up=efficiency_bound_batch(omega, coupling, delta1, d2),
        eta_carnot=1.0 - beta1 / beta2,
        positive_work=W > 0,
        work_range=positive_work_range(omega, coupling, delta1, beta1, beta2),
    )


def two_level_oracle(omega1, omega2, beta1, beta2):
    """(W', Q1', eta') of a qubit Otto engine with gap 2 omega1 -> 2 omega2."""
    if omega1 <= 0 or omega2 <= 0:
        raise ParameterError("two-level frequencies must be > 0")
    dt = np.tanh(beta2 * omega2) - np.tanh(beta1 * omega1)
    return float(dt * (omega1 - omega2)), float(dt * omega1), float(1.0 - omega2 / omega1)


def appendix_identity_check(omega, coupling, delta1, delta2, beta1, beta2) -> float:
    """|(W - W') - (w2' - w1')[tanh(b1 w1') - tanh(b2 w2')]|.

    W' is the lowest-pair engine with omega_i = (Omega - D_i)/2 and
    w_i' = (Omega + D_i)/2.
    """
    if delta2 < delta1:
        raise ParameterError("identity is stated for delta2 >= delta1")
    d1 = float(np.hypot(delta1, coupling))
    d2 = float(np.hypot(delta2, coupling))
    W = float(cycle_work_batch(omega, coupling, delta1, delta2, beta1, beta2))
    w_prime, _, _ = two_level_oracle(0.5 * (omega - d1), 0.5 * (omega - d2), beta1, beta2)
    u1, u2 = 0.5 * (omega + d1), 0.5 * (omega + d2)
    rhs = (u2 - u1) * (np.tanh(beta1 * u1) - np.tanh(beta2 * u2))
    return abs((W - w_prime) - rhs)


def _tail_terms(omega, d, beta):
    # exp(-beta(Omega - D)), exp(-beta(Omega + D)), exp(-2 beta Omega): all <= 1.
    return np.exp(-beta * (omega - d)), np.exp(-beta * (omega + d)), np.exp(-2.0 * beta * omega)


def middle_weight(omega, d, beta):
    """cosh(bD) / [cosh(bD) + cosh(bO)]."""
    lo, hi, top = _tail_terms(omega, d, beta)
    return (lo + hi) / (1.0 + top + lo + hi)


def outer_weight(omega, d, beta):
    """sinh(bO) / [cosh(bO) + cosh(bD)]."""
    lo, hi, top = _tail_terms(omega, d, beta)
    return (1.0 - top) / (1.0 + top + lo + hi)


@dataclass(frozen=True)
class MiddleLevelsReport:
    W_middle: float
    P1: float
    P2: float
    S1: float
    S2: float
    W_weighted: float
    W_closed_form: float

    @property
    def residual(self) -> float:
        return abs(self.W_weighted - self.W_closed_form)


def middle_levels_oracle(omega, coupling, delta1, delta2, beta1, beta2) -> MiddleLevelsReport:
    """Engine restricted to |phi_+/->, and the weights rewriting W in its terms."""
    d1 = float(np.hypot(delta1, coupling))
    d2 = float(np.hypot(delta2, coupling))
    t1, t2 = np.tanh(beta1 * d1), np.tanh(beta2 * d2)
    P1, P2 = float(middle_weight(omega, d1, beta1)), float(middle_weight(omega, d2, beta2))
    return MiddleLevelsReport(
        W_middle=float((t2 - t1) * (d1 - d2)),
        P1=P1,
        P2=P2,
        S1=float(outer_weight(omega, d1, beta1)),
        S2=float(outer_weight(omega, d2, beta2)),
        W_weighted=float((P2 * t2 - P1 * t1) * (d1 - d2)),
        W_closed_form=float(cycle_work_batch(omega, coupling, delta1, delta2, beta1, beta2)),
    )
