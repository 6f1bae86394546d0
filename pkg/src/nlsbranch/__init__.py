"""Ground-state branches and normalized minimizers for radial NLS-type equations.

The library discretizes stationary equations A u + V u = lambda u + f(r, u)
with A the radial (possibly fractional) Laplacian, solves for positive
ground-state profiles, continues them in lambda, minimizes the energy on
L2 spheres, and verifies the integral identities and monotonicity
structure of the underlying variational arguments as executable
diagnostics.
"""

from .grids import (
    DiscreteOperator,
    RadialGrid,
    ShiftedSystem,
    build_fractional_laplacian_1d,
    build_radial_laplacian,
    integrate,
    sphere_area,
)
from .problems import (
    HypothesisReport,
    ProblemSpec,
    ball_hardy_problem,
    check_hypotheses,
    cubic_quintic_problem,
    eval_action_gradient,
    eval_energy,
    eval_mass,
    frac_power_problem,
    linear_lambda1,
    nls_potential_problem,
    problem_preset,
    two_power_problem,
)
from .solve import (
    Branch,
    Solution,
    StepControl,
    branch_tangent,
    continue_branch,
    nehari_project,
    newton_solve,
    sign_changes,
    solve_from_bump,
)
from .spectrum import SpectrumReport, linearized_operator, morse_index
from .massmin import (
    CrossingResult,
    MassCurve,
    MinimizerResult,
    counterexample_crossing,
    lambda_set_scan,
    m_expression_check,
    mass_curve,
    minimize_on_sphere,
    scaling_exponent,
)
from .diagnostics import (
    IdentityReport,
    gn_coercivity_check,
    identity_B8_check,
    identity_D8_check,
    identity_suite,
    nehari_bound_check,
    pohozaev_residual,
)
from .config import ExperimentConfig

__version__ = "0.1.0"
