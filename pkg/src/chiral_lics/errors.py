"""Exception and warning types shared across the package."""


class ParameterError(ValueError):
    """Invalid physical parameters (negative rates, non-finite values, bad dimensions)."""


class IntegrationError(RuntimeError):
    """Adaptive integration failed; ``t_fail`` holds the time where it stopped."""

    def __init__(self, message, t_fail=None):
        super().__init__(message)
        self.t_fail = t_fail


class TrapNotFoundError(RuntimeError):
    """No trapping detuning inside the requested bracket.

    ``trace`` is the list of ``(delta, min|Im lambda|)`` samples that were scanned.
    """

    def __init__(self, message, trace=()):
        super().__init__(message)
        self.trace = list(trace)


class StructuralError(RuntimeError):
    """A rotated Hamiltonian is not block diagonal to the required tolerance."""


class ScenarioError(ValueError):
    """Scenario document violates the schema; ``path`` names the offending field."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class AdiabaticityWarning(UserWarning):
    """STIRAP transfer fidelity too low for the adiabatic regime."""
