"""Convergence studies, consistency audits and M-matrix audits, plus the CLI.

Exit codes: 0 success, 1 usage error, 2 numerical failure,
3 audit violation under --strict.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

import numpy as np

from .assembly import MMatrixReport, assemble, row_residual, validate_m_matrix
from .errors import CrossFDError
from .mesh import Grid, PointKind, build_grid, classify
from .problems import ProblemSpec, exact_values, list_examples, make_example
from .solve import SolveOptions, solve

__all__ = [
    "StudyConfig",
    "LevelResult",
    "ConvergenceReport",
    "run_convergence",
    "run_consistency_audit",
    "run_mmatrix_audit",
    "main",
]


@dataclass(frozen=True)
class StudyConfig:
    """One convergence study: problem, scheme and refinement range."""

    problem: str
    scheme: str = "high"
    jmin: int = 2
    jmax: int = 5
    out: str = "text"
    plot: str | None = None
    solver: SolveOptions = field(default_factory=SolveOptions)

    def __post_init__(self):
        if self.jmin < 2 or self.jmax < self.jmin:
            raise ValueError("need 2 <= jmin <= jmax")


@dataclass
class LevelResult:
    J: int
    h: float
    eps_l2: float
    err_max: float
    order_l2: float | None
    order_max: float | None
    assemble_ms: float
    solve_ms: float


@dataclass
class ConvergenceReport:
    problem: str
    scheme: str
    levels: list[LevelResult]
    failure: str | None = None

    CSV_HEADER = "J,h,eps_l2,order_l2,err_max,order_max,assemble_ms,solve_ms"

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for r in self.levels:
            o1 = "" if r.order_l2 is None else f"{r.order_l2:.1f}"
            o2 = "" if r.order_max is None else f"{r.order_max:.1f}"
            lines.append(f"{r.J},{r.h:.10g},{r.eps_l2:.3E},{o1},"
                         f"{r.err_max:.3E},{o2},{r.assemble_ms:.1f},"
                         f"{r.solve_ms:.1f}")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        head = (f"problem {self.problem}, scheme {self.scheme}\n"
                f"{'J':>3} {'h':>12} {'rel l2':>10} {'ord':>5} "
                f"{'max':>10} {'ord':>5} {'asm ms':>8} {'slv ms':>8}")
        lines = [head]
        for r in self.levels:
            o1 = "   --" if r.order_l2 is None else f"{r.order_l2:5.1f}"
            o2 = "   --" if r.order_max is None else f"{r.order_max:5.1f}"
            lines.append(f"{r.J:>3} {r.h:>12.6g} {r.eps_l2:>10.3E} {o1} "
                         f"{r.err_max:>10.3E} {o2} {r.assemble_ms:>8.1f} "
                         f"{r.solve_ms:>8.1f}")
        if self.failure:
            lines.append(f"aborted: {self.failure}")
        return "\n".join(lines) + "\n"


def _resolve(problem) -> ProblemSpec:
    return make_example(problem) if isinstance(problem, str) else problem


def grid_norms(problem: ProblemSpec, grid: Grid, values: np.ndarray
               ) -> tuple[float, float]:
    """Relative l2 and max errors over all grid points, boundary included."""
    U = exact_values(problem, grid)
    diff = values - U
    h2 = grid.h * grid.h
    eps = float(np.sqrt(h2 * np.sum(diff * diff))
                / np.sqrt(h2 * np.sum(U * U)))
    return eps, float(np.max(np.abs(diff)))


def run_convergence(config: StudyConfig, problem: ProblemSpec | None = None
                    ) -> ConvergenceReport:
    """Assemble, solve and measure errors across the refinement range."""
    prob = problem if problem is not None else _resolve(config.problem)
    report = ConvergenceReport(problem=prob.name, scheme=config.scheme,
                               levels=[])
    prev: LevelResult | None = None
    for J in range(config.jmin, config.jmax + 1):
        try:
            grid = build_grid(prob.domain, 2 ** J)
            system = assemble(grid, prob, config.scheme)
            sol = solve(system, config.solver)
        except CrossFDError as exc:
            report.failure = f"J={J}: {exc}"
            break
        eps, emax = grid_norms(prob, grid, sol.values)
        level = LevelResult(
            J=J, h=grid.h, eps_l2=eps, err_max=emax,
            order_l2=None if prev is None else float(np.log2(prev.eps_l2 / eps)),
            order_max=None if prev is None else float(np.log2(prev.err_max / emax)),
            assemble_ms=system.assemble_seconds * 1e3,
            solve_ms=sol.solve_seconds * 1e3,
        )
        report.levels.append(level)
        prev = level
    if config.plot:
        _plot_report(prob, config, report)
    return report


def _plot_report(prob, config, report) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    if report.levels:
        hs = [r.h for r in report.levels]
        axes[0].loglog(hs, [r.eps_l2 for r in report.levels], "o-",
                       label="rel l2")
        axes[0].loglog(hs, [r.err_max for r in report.levels], "s-",
                       label="max")
        axes[0].set_xlabel("h")
        axes[0].set_ylabel("error")
        axes[0].legend()
        axes[0].set_title(f"{prob.name} ({config.scheme})")
        J = report.levels[-1].J
        grid = build_grid(prob.domain, 2 ** J)
        sol = solve(assemble(grid, prob, config.scheme), config.solver)
        err = np.abs(sol.values - exact_values(prob, grid))
        im = axes[1].imshow(err, origin="lower",
                            extent=(prob.domain.l1, prob.domain.l2,
                                    prob.domain.l3, prob.domain.l4))
        fig.colorbar(im, ax=axes[1])
        axes[1].set_title(f"|error| at J={J}")
    fig.tight_layout()
    fig.savefig(config.plot, dpi=120)
    plt.close(fig)


# ---------------------------------------------------------------------------
# Consistency audit.
# ---------------------------------------------------------------------------

#: audit class name -> (point kinds, scheme that produces the rows)
AUDIT_CLASSES = {
    "interior": ((PointKind.INTERIOR,), "high"),
    "gamma": ((PointKind.ON_GAMMA,), "high"),
    "cross": ((PointKind.ON_CROSS,), "high"),
    "near_gamma4": ((PointKind.NEAR_GAMMA_V, PointKind.NEAR_GAMMA_H), "high"),
    "near_cross4": ((PointKind.NEAR_CROSS,), "high"),
    "near_gamma3": ((PointKind.NEAR_GAMMA_V, PointKind.NEAR_GAMMA_H), "mmatrix"),
    "near_cross2": ((PointKind.NEAR_CROSS,), "mmatrix"),
}


def _audit_points(grid: Grid, kinds) -> list:
    """Rows of the requested kinds; interior rows are subsampled on two
    diagonals plus the middle row (auditing every interior row would cost
    much and add nothing: their stencil is identical)."""
    pts = []
    if PointKind.INTERIOR in kinds:
        cand = [(i, i % (grid.n2 - 1) + 1) for i in range(1, grid.n1)]
        cand += [(i, grid.n2 - 1 - (i % (grid.n2 - 1))) for i in range(1, grid.n1)]
        cand += [(i, grid.n2 // 2) for i in range(1, grid.n1)]
        for i, j in cand:
            cls = classify(grid, i, j)
            if cls.kind is PointKind.INTERIOR:
                pts.append((i, j, cls))
    near = [k for k in kinds if k is not PointKind.INTERIOR]
    if near:
        from .assembly import _special_points
        for (i, j), cls in sorted(_special_points(grid).items()):
            if cls.kind in near:
                pts.append((i, j, cls))
    return pts


def run_consistency_audit(problem, classes=None, jmin: int = 3,
                          jmax: int = 7) -> dict:
    """Max scaled residual per class and refinement level, with fitted slope.

    Returns {class: {"levels": [(J, residual), ...], "slope": float}}.
    Classes absent from the problem's interface mode are skipped.
    """
    prob = _resolve(problem)
    selected = dict(AUDIT_CLASSES) if classes is None else \
        {c: AUDIT_CLASSES[c] for c in classes}
    table: dict = {name: [] for name in selected}
    for J in range(jmin, jmax + 1):
        grid = build_grid(prob.domain, 2 ** J)
        for name, (kinds, scheme) in selected.items():
            worst = 0.0
            found = False
            for i, j, cls in _audit_points(grid, kinds):
                found = True
                worst = max(worst, row_residual(prob, grid, cls, i, j, scheme))
            if found:
                table[name].append((J, worst))
    out = {}
    for name, seq in table.items():
        if not seq:
            continue
        Js = np.array([J for J, _ in seq], dtype=float)
        rs = np.array([max(r, 1e-300) for _, r in seq])
        slope = float(-np.polyfit(Js, np.log2(rs), 1)[0]) if len(seq) > 1 else None
        out[name] = {"levels": seq, "slope": slope}
    return out


def _audit_text(audit: dict) -> str:
    lines = []
    for name, entry in audit.items():
        levels = " ".join(f"J={J}:{r:.3E}" for J, r in entry["levels"])
        slope = entry["slope"]
        shown = "  n/a" if slope is None else f"{slope:5.2f}"
        lines.append(f"{name:>12}  slope={shown}  {levels}")
    return "\n".join(lines) + "\n"


def run_mmatrix_audit(problem, scheme: str, J: int) -> MMatrixReport:
    """Assemble at one level and check every row's sign/sum conditions."""
    prob = _resolve(problem)
    grid = build_grid(prob.domain, 2 ** J)
    return validate_m_matrix(assemble(grid, prob, scheme))


# ---------------------------------------------------------------------------
# Command line.
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="crossfd",
                     description="Compact 9-point schemes for elliptic "
                                 "cross-interface problems")
    sub = parser.add_subparsers(dest="command", required=True)

    conv = sub.add_parser("converge", help="run a convergence study")
    conv.add_argument("--problem", required=True)
    conv.add_argument("--scheme", choices=("high", "mmatrix"), default="high")
    conv.add_argument("--jmin", type=int, default=2)
    conv.add_argument("--jmax", type=int, default=5)
    conv.add_argument("--out", choices=("text", "csv"), default="text")
    conv.add_argument("--plot", default=None, metavar="PATH")

    cons = sub.add_parser("consistency", help="residual-slope audit per row class")
    cons.add_argument("--problem", required=True)
    cons.add_argument("--jmin", type=int, default=3)
    cons.add_argument("--jmax", type=int, default=7)
    cons.add_argument("--classes", default=None,
                      help="comma-separated subset of: "
                           + ",".join(AUDIT_CLASSES))

    mm = sub.add_parser("mmatrix", help="sign/summation audit of one assembly")
    mm.add_argument("--problem", required=True)
    mm.add_argument("--scheme", choices=("high", "mmatrix"), default="high")
    mm.add_argument("--j", type=int, default=4)
    mm.add_argument("--strict", action="store_true")

    sub.add_parser("list-problems", help="names of the shipped problems")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "list-problems":
            for name in list_examples():
                print(name)
            return 0
        if args.command == "converge":
            config = StudyConfig(problem=args.problem, scheme=args.scheme,
                                 jmin=args.jmin, jmax=args.jmax,
                                 out=args.out, plot=args.plot)
            report = run_convergence(config)
            sys.stdout.write(report.to_csv() if args.out == "csv"
                             else report.to_text())
            return 2 if report.failure else 0
        if args.command == "consistency":
            classes = args.classes.split(",") if args.classes else None
            if classes:
                unknown = [c for c in classes if c not in AUDIT_CLASSES]
                if unknown:
                    print(f"unknown audit classes: {unknown}", file=sys.stderr)
                    return 1
            audit = run_consistency_audit(args.problem, classes,
                                          args.jmin, args.jmax)
            sys.stdout.write(_audit_text(audit))
            return 0
        if args.command == "mmatrix":
            report = run_mmatrix_audit(args.problem, args.scheme, args.j)
            print(report.summary())
            for i, j, kind, off, rsum in report.violations[:20]:
                print(f"  row ({i},{j}) [{kind}]: worst off-center {off:.3e}, "
                      f"row sum {rsum:.3e}")
            if args.strict and not report.ok:
                return 3
            return 0
    except KeyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CrossFDError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
