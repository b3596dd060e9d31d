"""Compact 9-point finite difference schemes for elliptic problems whose
piecewise-constant coefficient jumps across two crossing interface lines.

Two scheme families are provided on uniform Cartesian grids:

* a high-order family: consistency order 6 at interior points, 7 on the
  interface lines and at their intersection when those lie on grid lines,
  and 4 next to them when they do not;
* a maximum-principle family for the non-aligned case: order 3 next to the
  lines and 2 next to the intersection, with every row satisfying the sign
  and summation conditions that make the system matrix an M-matrix.
"""

from .errors import (CrossFDError, DegenerateStencilError,
                     InconsistentSpecError, MissingDerivativeError,
                     MixedAlignmentError, NoSolutionError,
                     NonConvergenceError, SingularMatrixError)
from .mesh import (Domain, Grid, InterfaceMode, PointClass, PointKind,
                   build_grid, classify, mode, subdomain_of)
from .problems import (PolyProblem, ProblemSpec, SymbolicProblem,
                       exact_values, list_examples, make_example,
                       make_piecewise_polynomial, verify_spec)
from .assembly import (MMatrixReport, SparseSystem, assemble, build_row,
                       row_residual, validate_m_matrix)
from .solve import Solution, SolveOptions, solve
from .cli import (ConvergenceReport, StudyConfig, run_consistency_audit,
                  run_convergence, run_mmatrix_audit)

__version__ = "0.1.0"

__all__ = [
    "CrossFDError", "DegenerateStencilError", "InconsistentSpecError",
    "MissingDerivativeError", "MixedAlignmentError", "NoSolutionError",
    "NonConvergenceError", "SingularMatrixError",
    "Domain", "Grid", "InterfaceMode", "PointClass", "PointKind",
    "build_grid", "classify", "mode", "subdomain_of",
    "PolyProblem", "ProblemSpec", "SymbolicProblem", "exact_values",
    "list_examples", "make_example", "make_piecewise_polynomial",
    "verify_spec",
    "MMatrixReport", "SparseSystem", "assemble", "build_row",
    "row_residual", "validate_m_matrix",
    "Solution", "SolveOptions", "solve",
    "ConvergenceReport", "StudyConfig", "run_consistency_audit",
    "run_convergence", "run_mmatrix_audit",
    "__version__",
]
