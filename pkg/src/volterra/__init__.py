"""Nonlinear second-kind Volterra integral equations on [alpha, beta].

Solvers, hypothesis certification, and solution sensitivities for
equations x(t) + integral_alpha^t v(t, tau, x(tau)) dtau = a(t) posed
over absolutely continuous functions vanishing at alpha with square
integrable derivative.
"""

__version__ = "0.1.0"

from .certification import (
    HypothesisReport,
    check_A3,
    check_A4,
    check_example1,
    check_example2,
    coercivity_constants,
)
from .config import ProblemConfig
from .errors import (
    ConfigError,
    DimMismatch,
    GridMismatch,
    KernelContract,
    LineSearchStalled,
    MaxIterExceeded,
    MissingBounds,
    NotAnchoredAtAlpha,
    OutsideTriangle,
    SingularBlock,
    SolverError,
    VolterraError,
)
from .function_space import (
    Grid,
    GridFunction,
    ac_norm,
    axpy,
    from_callable,
    l2_norm,
    random_anchored,
    read_csv,
    scale,
    sub,
    sup_norm,
    verify_embedding,
    write_csv,
    zeros,
)
from .kernels import (
    GrowthBounds,
    KernelSpec,
    TriangularDomain,
    eval_checked,
    example1_kernel,
    example2_kernel,
    linear_kernel,
    scalar_kernel,
    zero_kernel,
)
from .linear_solver import (
    NeumannBound,
    NeumannReport,
    apply_T,
    collocation_solve,
    estimate_l_rho,
    iterate_bound,
    neumann_solve,
    tail_bound,
)
from .nonlinear_solver import (
    SolveReport,
    multistart_uniqueness,
    solve_gradient,
    solve_newton,
)
from .operator import (
    apply_V,
    apply_V_dt,
    directional_dF,
    frechet_apply,
    functional_F,
    functional_gradient,
)
from .sensitivity import (
    directional_sensitivity,
    fd_sensitivity_check,
    robustness_modulus,
)

__all__ = [
    "ConfigError",
    "DimMismatch",
    "Grid",
    "GridFunction",
    "GridMismatch",
    "GrowthBounds",
    "HypothesisReport",
    "KernelContract",
    "KernelSpec",
    "LineSearchStalled",
    "MaxIterExceeded",
    "MissingBounds",
    "NeumannBound",
    "NeumannReport",
    "NotAnchoredAtAlpha",
    "OutsideTriangle",
    "ProblemConfig",
    "SingularBlock",
    "SolveReport",
    "SolverError",
    "TriangularDomain",
    "VolterraError",
    "__version__",
    "ac_norm",
    "apply_T",
    "apply_V",
    "apply_V_dt",
    "axpy",
    "check_A3",
    "check_A4",
    "check_example1",
    "check_example2",
    "coercivity_constants",
    "collocation_solve",
    "directional_dF",
    "directional_sensitivity",
    "estimate_l_rho",
    "eval_checked",
    "example1_kernel",
    "example2_kernel",
    "fd_sensitivity_check",
    "frechet_apply",
    "from_callable",
    "functional_F",
    "functional_gradient",
    "iterate_bound",
    "l2_norm",
    "linear_kernel",
    "multistart_uniqueness",
    "neumann_solve",
    "random_anchored",
    "read_csv",
    "robustness_modulus",
    "scalar_kernel",
    "scale",
    "solve_gradient",
    "solve_newton",
    "sub",
    "sup_norm",
    "tail_bound",
    "verify_embedding",
    "write_csv",
    "zero_kernel",
    "zeros",
]
