"""Gibbs states of the coupled pair and their eigenstate populations."""

from dataclasses import dataclass

import numpy as np

from .exceptions import ParameterError
from .model import ModelParams, closed_form_spectrum


@dataclass(frozen=True)
class Populations:
    """Occupations of |00>, |11>, |phi_+> and |phi_->."""

    p0: float
    p1: float
    pplus: float
    pminus: float

    def as_array(self) -> np.ndarray:
        """Populations in ascending-energy (``LEVELS``) order."""
        return np.array([self.p1, self.pminus, self.pplus, self.p0])

    @classmethod
    def from_array(cls, p) -> "Populations":
        p1, pm, pp, p0 = (float(x) for x in p)
        return cls(p0=p0, p1=p1, pplus=pp, pminus=pm)


@dataclass(frozen=True)
class ThermalPoint:
    params: ModelParams
    beta: float
    state: np.ndarray
    populations: Populations
    partition_function: float

    @property
    def temperature(self) -> float:
        return 1.0 / self.beta


def _check_beta(beta):
    b = np.asarray(beta, dtype=float)
    if not np.all(np.isfinite(b)) or np.any(b <= 0):
        raise ParameterError(f"beta must be finite and > 0, got {beta!r}")


def level_energies(omega, gap):
    """Energies (..., 4) in ascending order: 0, Omega - D, Omega + D, 2 Omega."""
    omega = np.asarray(omega, dtype=float)
    gap = np.asarray(gap, dtype=float)
    zero = np.zeros(np.broadcast(omega, gap).shape)
    return np.stack([zero, omega - gap + zero, omega + gap + zero, 2.0 * omega + zero], axis=-1)


def boltzmann_weights(energies, beta):
    """Normalized exp(-beta E) along the last axis, shifted by the min energy."""
    e = np.asarray(energies, dtype=float)
    b = np.asarray(beta, dtype=float)[..., None]
    x = -b * (e - e.min(axis=-1, keepdims=True))
    w = np.exp(x)
    return w / w.sum(axis=-1, keepdims=True)


def gibbs_populations(omega, gap, beta):
    """Vectorized Gibbs populations in ``LEVELS`` order, shape (..., 4)."""
    _check_beta(beta)
    return boltzmann_weights(level_energies(omega, gap), beta)


def gibbs_population_gap(omega, gap, beta):
    """p_- - p_+ of a Gibbs state, sinh(bD)/(cosh(bO) + cosh(bD)) evaluated stably."""
    p = gibbs_populations(omega, gap, beta)
    return p[..., 1] - p[..., 2]


def gibbs_state(params: ModelParams, beta: float) -> ThermalPoint:
    """Thermal state exp(-beta H)/Z built from the closed-form spectrum."""
    _check_beta(beta)
    spec = closed_form_spectrum(params, allow_degenerate=params.coupling == 0.0)
    e = spec.energies
    shift = e.min()
    w = np.exp(-beta * (e - shift))
    pops = w / w.sum()
    log_z = np.log(w.sum()) - beta * shift
    v = spec.eigenvectors
    rho = (v * pops) @ v.conj().T
    return ThermalPoint(
        params=params,
        beta=float(beta),
        state=rho,
        populations=Populations.from_array(pops),
        partition_function=float(np.exp(log_z)),
    )


def population_gap(pops: Populations) -> float:
    return pops.pminus - pops.pplus
