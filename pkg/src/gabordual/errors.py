"""Exception types shared across the library."""


class GaborDualError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(GaborDualError, ValueError):
    """A parameter is outside its valid range."""


class UnsupportedOrderError(GaborDualError, ValueError):
    """A derivative order beyond what an evaluator supplies exactly."""


class DegenerateWindowError(GaborDualError, ArithmeticError):
    """The window (or its periodization) vanishes where it must not."""


class PreconditionError(GaborDualError, ValueError):
    """A construction hypothesis fails for the given window."""


class PainlessRegionError(ParameterError):
    """Operation is only defined in the painless region b <= 1/2."""


class EndpointUndefinedError(GaborDualError, ValueError):
    """A recovered parametrizing function has no defined endpoint value."""


class DegenerateSignalError(GaborDualError, ValueError):
    """Test signal has numerically zero energy."""
