"""Coherence measures for small density matrices."""

from .axioms import (
    AxiomReport,
    SweepRow,
    ViolationWitness,
    audit,
    check_c1,
    check_c2a,
    check_c2b,
    check_c3,
    find_intersection,
    reproduce_counterexample,
    sweep_rz,
    verify_class_theorem,
)
from .channels import KrausChannel, amplitude_damping_like, apply, subselect, validate
from .linalg import fidelity, hermitian_eig, psd_sqrt, trace_norm
from .measures import (
    Measure,
    OptimizationResult,
    brute_force_min,
    c_fidelity,
    c_l1,
    c_relative_entropy,
    c_trace,
    coherence,
    evaluate,
    x_class_eigenvalues,
)
from .states import (
    BlochVector,
    QutritClassState,
    dephase,
    from_bloch,
    is_incoherent,
    make_qutrit_class,
    random_state,
    to_bloch,
)

__version__ = "0.1.0"
