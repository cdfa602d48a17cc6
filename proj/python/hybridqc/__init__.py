"""Hybrid quantum-classical dynamics: two qubits coupled to a classical oscillator."""

from ._hybridqc import (
    ConfigError,
    HybridModel,
    IntegrationError,
    IntegratorConfig,
    ModelKind,
    RunError,
    Scheme,
    amplitude_spectrum,
    build_quantum_hamiltonian,
    integrate,
    preset_names,
    preset_toml,
    run,
    total_energy,
    unitary_evolve,
)

__all__ = [
    "ConfigError",
    "HybridModel",
    "IntegrationError",
    "IntegratorConfig",
    "ModelKind",
    "RunError",
    "Scheme",
    "amplitude_spectrum",
    "build_quantum_hamiltonian",
    "integrate",
    "preset_names",
    "preset_toml",
    "run",
    "total_energy",
    "unitary_evolve",
]
