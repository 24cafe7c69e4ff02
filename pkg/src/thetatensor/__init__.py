"""Theta-body relaxations of tensor nuclear p-norms.

The package builds the structured semidefinite programs that evaluate
theta-k gauges of the nuclear p-norm unit bodies for p in {1, 2, even >= 4,
inf}, recovers low-rank tensors from Gaussian measurements, certifies
k-sos membership in the quotient ring, and estimates Gaussian-width-based
measurement bounds.
"""

from thetatensor.tensors import (
    Shape,
    Tensor,
    ModeTransform,
    wedge_vee,
    bar_wedge_vee,
    is_reduced_pair,
    rank1_tensor,
    rank1_residual,
    random_low_rank,
    matricize,
    mode_transform,
)
from thetatensor.groebner import (
    Monomial,
    Polynomial,
    IdealSpec,
    GroebnerBasis,
    RANK1,
    build_groebner,
    reduce_poly,
    normal_form_G0,
    normal_form_Ginf,
    s_polynomial,
    buchberger_check,
    monomial_basis,
)
from thetatensor.moment import (
    MomentLayout,
    ConicProblem,
    build_moment_layout,
    theta1_closed_form,
    assemble_norm_sdp,
    assemble_recovery_sdp,
    assemble_sos_sdp,
)
from thetatensor.solver import SolverSettings, ConicSolution, project_psd, solve
from thetatensor.recovery import (
    MeasurementEnsemble,
    RecoveryResult,
    theta_norm,
    recover,
    certify_sos,
    run_recovery_experiment,
)
from thetatensor.gwidth import (
    ConeIndexSets,
    WidthEstimate,
    index_sets,
    gauge_NI,
    estimate_width_bound,
)

__version__ = "0.1.0"
