"""Exact derivation and numerical checks of the u-free heat equation attached
to the sixth Painleve equation."""

from .forms import (
    LaxPair,
    SingularLocusError,
    Theta,
    build_lax,
    compat_residual,
    hamiltonian_check,
    pvi_rhs,
    residues,
    riccati_forms,
    theta_correspondence,
    x_flow,
)
from .pipeline import (
    CertificationError,
    EliminationCertificate,
    HeatOperator,
    compute_F,
    heat_operator,
    picard_reduction,
    run_pipeline,
)

__version__ = "0.1.0"
