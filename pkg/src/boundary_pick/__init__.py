"""Boundary Nevanlinna-Pick interpolation for generalized Schur functions.

Typical use::

    from boundary_pick import InterpolationData, build_pick_system, build_theta
    from boundary_pick import SchurParameter, apply_parameter, verify_interpolation

    sys = build_pick_system(InterpolationData([1, -1], [1, -1], [1, 0]))
    th = build_theta(sys, mu=1j)
    w = apply_parameter(th, SchurParameter.constant(0.0))
    report = verify_interpolation(w, sys)
"""

from . import tolerances
from .degenerate import (
    DegenerateReport,
    DegenerateSolution,
    classical_singular_solution,
    solve_degenerate,
    verify_degenerate,
)
from .errors import *  # noqa: F401,F403
from .hermitian import (
    Signature,
    hermitian_eigen,
    invert,
    rank,
    schur_complement,
    signature,
)
from .interpolant import (
    GeneralizedSchurFunction,
    InterpolationReport,
    NodeReport,
    Prediction,
    SolutionMembership,
    apply_parameter,
    fmi_kernel_check,
    negative_squares_count,
    predict_node_behavior,
    verify_interpolation,
)
from .params import (
    BoundaryData,
    NodeCondition,
    SchurParameter,
    boundary_data_radial,
    boundary_data_rational,
    classify_node,
)
from .pick import (
    Feasibility,
    InterpolationData,
    PickSystem,
    build_pick_system,
    omission_feasibility,
    problems_equivalent,
    verify_stein,
)
from .rational import (
    BlaschkeProduct,
    Polynomial,
    RationalFunction,
    blaschke_factorize,
    count_poles_in_disk,
    mobius_apply,
    poly_roots,
    reduce,
)
from .theta import (
    ThetaFactorization,
    ThetaFunction,
    build_theta,
    factorize_theta,
    kernel_K_theta,
    residue_at_node,
    theta_eval,
    theta_inverse_eval,
)

__version__ = "0.1.0"
