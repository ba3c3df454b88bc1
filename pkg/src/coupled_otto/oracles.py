"""Independent numerical routes used to cross-check the closed forms.

Nothing here reads the analytic spectrum: Hamiltonians are built as
matrices and diagonalized numerically, Gibbs states come from the spectral
function of the matrix, and occupations come from explicit partial traces.
"""

import numpy as np

from .cycle import CycleSpec
from .linalg import eig_hermitian, eig_hermitian_batch, partial_trace, spectral_function
from .model import ModelParams, build_total_hamiltonian, I01, I10

ORACLE_STEPS = 10_000


def numeric_gibbs(h, beta):
    """exp(-beta H)/Z via the spectral function of the matrix."""
    lam0 = eig_hermitian(h).eigenvalues[0]
    rho = spectral_function(h, lambda lam: np.exp(-beta * (lam - lam0)))
    return rho / np.trace(rho).real


def eigen_populations(rho, h):
    """Occupations <v_n|rho|v_n> of the numerically found eigenvectors, ascending energy."""
    _, v = eig_hermitian(h)
    return np.einsum("in,ij,jn->n", v.conj(), rho, v).real


def _hamiltonians(omega, coupling, deltas):
    n = deltas.shape[0]
    h = np.zeros((n, 4, 4), dtype=np.complex128)
    h[:, 0, 0] = 2.0 * omega
    h[:, I01, I01] = omega - deltas
    h[:, I10, I10] = omega + deltas
    h[:, I01, I10] = coupling
    h[:, I10, I01] = coupling
    return h


def discretized_stroke_work(pops, omega, coupling, delta_start, delta_end, steps=ORACLE_STEPS):
    """-sum tr(rho dH) along a linear Delta path with frozen eigen-populations.

    ``pops`` are ascending-energy occupations; the state at every midpoint
    is rebuilt from a fresh numerical diagonalization.
    """
    grid = np.linspace(delta_start, delta_end, steps + 1)
    mid = 0.5 * (grid[1:] + grid[:-1])
    _, v = eig_hermitian_batch(_hamiltonians(omega, coupling, mid))
    rho = np.einsum("bin,n,bjn->bij", v, np.asarray(pops, dtype=float), v.conj())
    # dH = diag(0, -dDelta, +dDelta, 0) in the product basis.
    force = (rho[:, I10, I10] - rho[:, I01, I01]).real
    return float(-np.sum(force * np.diff(grid)))


def discretized_cycle_work(spec: CycleSpec, steps=ORACLE_STEPS):
    """Net work of the cycle by brute-force integration of -tr(rho dH)."""
    h1 = build_total_hamiltonian(spec.params1)
    h2 = build_total_hamiltonian(spec.params2)
    pops_a = eigen_populations(numeric_gibbs(h1, spec.beta1), h1)
    pops_c = eigen_populations(numeric_gibbs(h2, spec.beta2), h2)
    w_ab = discretized_stroke_work(pops_a, spec.omega, spec.coupling, spec.delta1, spec.delta2, steps)
    w_cd = discretized_stroke_work(pops_c, spec.omega, spec.coupling, spec.delta2, spec.delta1, steps)
    return w_ab + w_cd


def partial_trace_occupations(rho):
    """(pA, pB): weight of the local excited state |0> in each reduced state."""
    return float(partial_trace(rho, "A")[0, 0].real), float(partial_trace(rho, "B")[0, 0].real)


def stroke_states(pops, params: ModelParams, deltas):
    """States along a stroke built from numeric eigenvectors and frozen populations."""
    deltas = np.asarray(deltas, dtype=float)
    _, v = eig_hermitian_batch(_hamiltonians(params.omega, params.coupling, deltas))
    return np.einsum("bin,n,bjn->bij", v, np.asarray(pops, dtype=float), v.conj())


def two_level_otto(omega1, omega2, beta1, beta2):
    """(W, Q1) of a qubit Otto engine from explicit excited-state populations."""
    def excited(beta, omega):
        return np.exp(-2.0 * beta * omega) / (1.0 + np.exp(-2.0 * beta * omega))

    p_hot = excited(beta1, omega1)
    p_cold = excited(beta2, omega2)
    q1 = 2.0 * omega1 * (p_hot - p_cold)
    q2 = 2.0 * omega2 * (p_cold - p_hot)
    return q1 + q2, q1
