"""Exception hierarchy."""


class ParameterError(ValueError):
    """Invalid physical parameter set or configuration."""


class NonPositiveRate(ParameterError):
    pass


class ZeroDetuning(ParameterError):
    pass


class NegativeAmplitude(ParameterError):
    pass


class ConfigError(ParameterError):
    """Malformed or unknown entries in a key=value config file."""


class TunnelingNotZero(ParameterError):
    pass


class DomainError(ValueError):
    """Closed-form expression evaluated outside its domain (negative radicand)."""


class DegenerateDrive(ValueError):
    pass


class NumericalError(RuntimeError):
    """Base class for integration or linear-algebra failures."""


class StepSizeUnderflow(NumericalError):
    pass


class CommutatorDrift(NumericalError):
    pass


class NegativePhonon(NumericalError):
    pass


class QuadratureNotConverged(NumericalError):
    pass


class SingularLyapunov(NumericalError):
    pass
