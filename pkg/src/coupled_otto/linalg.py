"""Dense complex linear algebra for two-qubit operators.

Conventions used by every module in the package:

* Product basis ordering is ``|00>, |01>, |10>, |11>`` with qubit A the left
  tensor factor.
* ``|0>`` is the local EXCITED state and ``|1>`` the local ground state, so
  ``|11>`` is the global ground state of the uncoupled Hamiltonian.
* Entropies are in nats (k_B = 1).

Operators are plain ``numpy`` arrays; the ``check_*`` helpers enforce the
Hermitian / density-matrix contracts where an operation requires them.
"""

from typing import Callable, Literal, NamedTuple

import numpy as np

from . import _accel
from .exceptions import ContractViolation, SpectralRangeError

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
POSITIVITY_TOL = 1e-12

BASIS_LABELS = ("00", "01", "10", "11")


class EigenSystem(NamedTuple):
    """Ascending eigenvalues and matching orthonormal eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _as_square(m, name="matrix"):
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ContractViolation(f"{name} must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ContractViolation(f"{name} has non-finite entries")
    return arr


def check_hermitian(m, name="operator"):
    """Return ``m`` as a complex array, raising if it is not Hermitian."""
    arr = _as_square(m, name)
    scale = max(1.0, float(np.max(np.abs(arr), initial=0.0)))
    err = float(np.max(np.abs(arr - arr.conj().T), initial=0.0))
    if err > HERMITIAN_TOL * scale:
        raise ContractViolation(f"{name} is not Hermitian (max |M - M^H| = {err:.3e})")
    return arr


def check_density(rho, name="rho"):
    """Return ``rho`` as a complex array, raising if it is not a valid state."""
    arr = check_hermitian(rho, name)
    tr = np.trace(arr).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise ContractViolation(f"{name} has trace {tr!r}, expected 1")
    lam_min = eigvalsh(arr)[0]
    if lam_min < -POSITIVITY_TOL:
        raise ContractViolation(f"{name} has negative eigenvalue {lam_min:.3e}")
    return arr


def _fix_phases(vecs):
    # Largest-magnitude component of every column made real positive.
    idx = np.argmax(np.abs(vecs), axis=-2)
    pivot = np.take_along_axis(vecs, idx[..., None, :], axis=-2)
    return vecs * (np.conj(pivot) / np.abs(pivot))


def eig_hermitian_batch(h_batch):
    """Diagonalize a stack of Hermitian matrices of shape ``(..., n, n)``.

    No Hermiticity check is made here; callers feed matrices they built.
    Returns ascending eigenvalues and phase-fixed eigenvectors as columns.
    """
    h = np.ascontiguousarray(h_batch, dtype=np.complex128)
    lead = h.shape[:-2]
    n = h.shape[-1]
    flat = h.reshape((-1, n, n))
    w, v = _accel.jacobi_eigh(flat)
    order = np.argsort(w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    v = np.take_along_axis(v, order[:, None, :], axis=2)
    v = _fix_phases(v)
    return w.reshape(lead + (n,)), v.reshape(lead + (n, n))


def eig_hermitian(h) -> EigenSystem:
    """Full eigensystem of a Hermitian matrix via cyclic Jacobi rotations.

    Eigenvalues come back ascending. Each eigenvector is normalized and its
    largest-magnitude component is real and positive, which makes
    comparisons against closed forms deterministic away from degeneracies.
    """
    arr = check_hermitian(h, "H")
    w, v = eig_hermitian_batch(arr[None])
    return EigenSystem(w[0], v[0])


def eigvalsh(h):
    w, _ = eig_hermitian_batch(np.asarray(h, dtype=np.complex128)[None])
    return w[0]


def spectral_function(h, f: Callable[[np.ndarray], np.ndarray]):
    """Return ``sum_n f(lambda_n) |v_n><v_n|`` for Hermitian ``h``.

    ``f`` is applied to the eigenvalue array. A non-finite image raises
    :class:`SpectralRangeError`.
    """
    vals, vecs = eig_hermitian(h)
    with np.errstate(over="ignore", invalid="ignore"):
        fvals = np.asarray(f(vals), dtype=np.float64)
    if not np.all(np.isfinite(fvals)):
        raise SpectralRangeError(f"spectral function not finite on spectrum {vals}")
    out = (vecs * fvals) @ vecs.conj().T
    return 0.5 * (out + out.conj().T)


def partial_trace(rho, keep: Literal["A", "B"]):
    """Reduced 2x2 state of qubit ``keep`` from a 4x4 two-qubit state."""
    arr = np.asarray(rho, dtype=np.complex128)
    if arr.shape != (4, 4):
        raise ContractViolation(f"expected a 4x4 state, got {arr.shape}")
    t = arr.reshape(2, 2, 2, 2)
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    if keep == "B":
        return np.einsum("jijk->ik", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def von_neumann_entropy(rho) -> float:
    """S = -sum lambda ln lambda in nats, with 0 ln 0 = 0."""
    lam = eigvalsh(np.asarray(rho, dtype=np.complex128))
    lam = lam[lam > 0.0]
    return float(-np.sum(lam * np.log(lam)))


def dephase_local(rho):
    """Delete all off-diagonal entries in the product basis."""
    arr = np.asarray(rho, dtype=np.complex128)
    return np.diag(np.diagonal(arr).copy())


def random_hermitian(rng: np.random.Generator, n=4, scale=1.0):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * 0.5 * (a + a.conj().T)


def random_density(rng: np.random.Generator, n=4, rank=None):
    """Random mixed state from a Ginibre matrix of the given rank."""
    k = n if rank is None else rank
    g = rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real
