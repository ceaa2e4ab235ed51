"""Separability analysis of bipartite Bell diagonal states on p qubits per party."""

from bellsep.bell_model import (
    BellSpectrum,
    OmegaDiagonal,
    lambdas_from_omega,
    omega_from_density,
    omega_from_lambdas,
    purity,
    to_density_matrix,
    validate,
)
from bellsep.separability import (
    PptVerdict,
    SeparabilityReport,
    SeparableDecomposition,
    Verdict,
    analyze,
    build_decomposition,
    criterion_sum,
    criterion_verdict,
    ppt_eigenvalues_closed_form,
    ppt_verdict,
    verify_decomposition,
)

__version__ = "0.1.0"

__all__ = [
    "BellSpectrum",
    "OmegaDiagonal",
    "PptVerdict",
    "SeparabilityReport",
    "SeparableDecomposition",
    "Verdict",
    "analyze",
    "build_decomposition",
    "criterion_sum",
    "criterion_verdict",
    "lambdas_from_omega",
    "omega_from_density",
    "omega_from_lambdas",
    "ppt_eigenvalues_closed_form",
    "ppt_verdict",
    "purity",
    "to_density_matrix",
    "validate",
    "verify_decomposition",
]
