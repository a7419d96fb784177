"""Schur-parameter recurrence algorithms for hermitian Laurent modifications
of moment functionals on the unit circle."""

from .algebra import (
    ComplexPoly,
    HermitianLaurent,
    JMatrix,
    decompose_in_mop_basis,
    is_self_reciprocal,
    jmatrix_det,
    proportional,
    reverse,
)
from .associated import (
    AssociatedSolution,
    associated_from_perturbation,
    associated_solution,
    rotation_residual,
    verify_associated,
)
from .classification import (
    ConstantSolution,
    DegreeDropReport,
    R1Verdict,
    bisector_family_step,
    constant_solution,
    degree_drop_test,
    modification_of,
    r1_admissibility,
    verify_constant_relation,
)
from .direct import ConsistencyReport, direct_init, direct_r1, run_direct
from .inverse import (
    InverseState,
    inverse_init_i1,
    inverse_init_i2,
    inverse_init_i3,
    reduce_degree,
    rel_ic_solve,
    run_inverse,
)
from .lebesgue_inverse import (
    ChainClassification,
    ChainTrajectory,
    LebesgueProblem,
    LebesgueSolution,
    classify,
    emit_figure_data,
    emit_newton_curve,
    newton_f,
    oscillatory_s,
    s_sequence,
    sigma_sequence,
    sigma_value,
    solution_trajectory,
)
from .opuc_core import (
    MomentSequence,
    MopPair,
    SchurSequence,
    TransferMatrix,
    apply_laurent,
    cd_kernel,
    moments_to_schur,
    schur_to_moments,
    szego_forward,
)

__version__ = "0.1.0"

__all__ = [
    "ComplexPoly",
    "HermitianLaurent",
    "JMatrix",
    "decompose_in_mop_basis",
    "is_self_reciprocal",
    "jmatrix_det",
    "proportional",
    "reverse",
    "AssociatedSolution",
    "associated_from_perturbation",
    "associated_solution",
    "rotation_residual",
    "verify_associated",
    "ConstantSolution",
    "DegreeDropReport",
    "R1Verdict",
    "bisector_family_step",
    "constant_solution",
    "degree_drop_test",
    "modification_of",
    "r1_admissibility",
    "verify_constant_relation",
    "ConsistencyReport",
    "direct_init",
    "direct_r1",
    "run_direct",
    "InverseState",
    "inverse_init_i1",
    "inverse_init_i2",
    "inverse_init_i3",
    "reduce_degree",
    "rel_ic_solve",
    "run_inverse",
    "ChainClassification",
    "ChainTrajectory",
    "LebesgueProblem",
    "LebesgueSolution",
    "classify",
    "emit_figure_data",
    "emit_newton_curve",
    "newton_f",
    "oscillatory_s",
    "s_sequence",
    "sigma_sequence",
    "sigma_value",
    "solution_trajectory",
    "MomentSequence",
    "MopPair",
    "SchurSequence",
    "TransferMatrix",
    "apply_laurent",
    "cd_kernel",
    "moments_to_schur",
    "schur_to_moments",
    "szego_forward",
    "__version__",
]
