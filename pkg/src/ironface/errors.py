"""Exception types shared across the toolkit."""


class IronfaceError(Exception):
    """Base class for all toolkit errors."""


class SingularSpectralParameter(IronfaceError):
    """A weight denominator vanished at the requested spectral parameter."""


class SizeTooLarge(IronfaceError):
    """Requested operator exceeds the dense size limit."""


class FitFailure(IronfaceError):
    """A least-squares fit did not reach the required residual."""


class ConvergenceFailure(IronfaceError):
    """An iterative solver did not converge."""


class MappingMismatch(IronfaceError):
    """Two spectra that should coincide do not."""


class DegeneracyAmbiguity(IronfaceError):
    """Eigenvalue selection is ambiguous because of degeneracies."""


class DivisionByZeroAtRoot(IronfaceError):
    """A Bethe root sits on a zero of the second eigenvalue term."""


class QuadratureFailure(IronfaceError):
    """Numerical quadrature failed to reach its tolerance."""


class OutOfStrip(IronfaceError):
    """Kernel argument lies outside its strip of analyticity."""


class GridTooCoarse(IronfaceError):
    """Grid does not resolve the driving term."""
