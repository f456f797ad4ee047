"""Exception hierarchy shared by all casimir_lab modules."""


class CasimirError(Exception):
    """Base class for every error raised by casimir_lab."""


class DomainError(CasimirError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class UnsupportedModelError(CasimirError, TypeError):
    """The material model does not carry the data an operation needs."""


class IndeterminateError(CasimirError):
    """A zero-frequency scattering quantity has no definite value.

    Raised for the perpendicular mode of a dissipative (Drude) metal at
    vanishing frequency, and for any finite-temperature force request that
    would depend on it.
    """


class ConfigurationError(CasimirError, ValueError):
    """The evaluation point or run configuration is incomplete."""


class ConvergenceError(CasimirError, RuntimeError):
    """A sum or quadrature failed to reach the requested tolerance."""

    def __init__(self, message, *, achieved=None, requested=None, terms=None):
        super().__init__(message)
        self.achieved = achieved
        self.requested = requested
        self.terms = terms
