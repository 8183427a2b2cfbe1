"""Exception hierarchy shared by every unibound module."""


class UniboundError(Exception):
    """Base class for all errors raised by this package."""


class InputError(UniboundError, ValueError):
    """Malformed input: bad JSON shape, broken type invariants, a >= b, ..."""


class PreconditionError(UniboundError, ValueError):
    """The inputs are well formed but outside the range where a bound holds."""


class UnsupportedRegimeError(PreconditionError):
    """Odd-order bound requested on a support that may go negative."""


class ConsistencyError(UniboundError, ArithmeticError):
    """An internal numerical identity failed (e.g. a division residual)."""


class LemmaViolationError(ConsistencyError):
    """The cofactor of a moment polynomial went negative on its domain."""


class ConstraintInfeasibleError(UniboundError, ArithmeticError):
    """The witness constraint has no root in the bracketing interval."""


class DegenerateWitnessError(UniboundError, ValueError):
    """A tightness witness was requested for mean == mode."""
