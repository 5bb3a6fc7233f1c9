"""Enantioselective ionization through laser-induced continuum structure (LICS).

Effective non-Hermitian Hamiltonians for cyclic two-level and degenerate
multilevel LICS systems, amplitude propagation, trapping-detuning search,
dark/bright block diagonalization and STIRAP preparation of the enantiomer
superpositions.
"""

__version__ = "0.1.0"

from .errors import (
    AdiabaticityWarning,
    IntegrationError,
    ParameterError,
    ScenarioError,
    StructuralError,
    TrapNotFoundError,
)
from .model import (
    CyclicLicsParams,
    MultiLicsParams,
    basis_labels,
    build_cyclic_hamiltonian,
    build_multilevel_hamiltonian,
)
from .propagator import EvolutionResult, evolve_constant, evolve_timedep, ionization

__all__ = [
    "__version__",
    "AdiabaticityWarning",
    "IntegrationError",
    "ParameterError",
    "ScenarioError",
    "StructuralError",
    "TrapNotFoundError",
    "CyclicLicsParams",
    "MultiLicsParams",
    "basis_labels",
    "build_cyclic_hamiltonian",
    "build_multilevel_hamiltonian",
    "EvolutionResult",
    "evolve_constant",
    "evolve_timedep",
    "ionization",
]
