"""Exact quantum Otto cycle with two XX-coupled qubits as working substance.

Basis convention: product states ordered |00>, |01>, |10>, |11> with qubit A
on the left, and |0> the local EXCITED state.
"""

from .analysis import (
    efficiency_bound,
    efficiency_sweep,
    f_function,
    limit_conditions,
    two_level_oracle,
    window_scan,
)
from .coherence import coherence_l1, coherence_rel_entropy, measure_erase_cycle, work_coherence_criterion
from .cycle import CycleSpec, EnergyExchange, run_cycle, trajectory
from .exceptions import (
    ContractViolation,
    DegenerateSpectrumError,
    LevelCrossingError,
    OttoError,
    ParameterError,
    SpectralRangeError,
)
from .model import ModelParams, build_total_hamiltonian, closed_form_spectrum
from .thermal import Populations, gibbs_state

__version__ = "0.1.0"

__all__ = [
    "ContractViolation",
    "CycleSpec",
    "DegenerateSpectrumError",
    "EnergyExchange",
    "LevelCrossingError",
    "ModelParams",
    "OttoError",
    "ParameterError",
    "Populations",
    "SpectralRangeError",
    "build_total_hamiltonian",
    "closed_form_spectrum",
    "coherence_l1",
    "coherence_rel_entropy",
    "efficiency_bound",
    "efficiency_sweep",
    "f_function",
    "gibbs_state",
    "limit_conditions",
    "measure_erase_cycle",
    "run_cycle",
    "trajectory",
    "two_level_oracle",
    "window_scan",
    "work_coherence_criterion",
]
