"""Exception hierarchy shared by every module."""


class OttoError(Exception):
    """Base class for all errors raised by :mod:`coupled_otto`."""


class ContractViolation(OttoError, ValueError):
    """An input broke a documented precondition (non-Hermitian, not a state, ...)."""


class ParameterError(OttoError, ValueError):
    """A physical or numerical parameter is out of its domain."""


class LevelCrossingError(ParameterError):
    """The requested detuning would close the gap between E_- and the ground level."""


class DegenerateSpectrumError(ParameterError):
    """Delta = J = 0: the middle doublet is degenerate and the mixing angle is undefined."""


class SpectralRangeError(OttoError, ArithmeticError):
    """A spectral function produced a non-finite value on the spectrum."""
