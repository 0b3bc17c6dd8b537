"""Driven tight-binding chains: propagation, Floquet spectra and effective-model checks."""

from ._floqlab import (
    CsvTable,
    DomainError,
    DrivenSystem,
    FloquetMode,
    NumericalError,
    PropertyReport,
    bessel_j0,
    canonical_system,
    dark_mode,
    dark_state_closed_form,
    effective_matrix,
    floquet_spectrum,
    fold_quasi_energy,
    hamiltonian_at,
    hermitian_eigen,
    localization,
    min_p1_oracle,
    min_population,
    monodromy,
    propagate,
    run_experiment,
    tridiag_det_sequence,
    unitary_eigen,
    verify_properties,
)

__version__ = "0.1.0"
__all__ = [name for name in dir() if not name.startswith("_")]
