import numpy as np
import pytest

from crossfd.cli import (ConvergenceReport, StudyConfig, main,
                         run_consistency_audit, run_convergence,
                         run_mmatrix_audit)
from crossfd.mesh import build_grid
from crossfd.problems import exact_values
from crossfd.assembly import assemble
from crossfd.solve import solve


def test_run_convergence_basic(ex41):
    rep = run_convergence(StudyConfig(problem="ex41", jmin=2, jmax=3),
                          problem=ex41)
    assert [r.J for r in rep.levels] == [2, 3]
    assert rep.levels[0].order_l2 is None
    assert rep.levels[1].order_l2 == pytest.approx(6.2, abs=0.3)
    assert rep.failure is None


def test_norms_match_naive_double_loop(ex41):
    grid = build_grid(ex41.domain, 8)
    sol = solve(assemble(grid, ex41))
    U = exact_values(ex41, grid)
    num = den = 0.0
    emax = 0.0
    for j in range(grid.n2 + 1):
        for i in range(grid.n1 + 1):
            d = sol.values[j, i] - U[j, i]
            num += grid.h ** 2 * d * d
            den += grid.h ** 2 * U[j, i] ** 2
            emax = max(emax, abs(d))
    from crossfd.cli import grid_norms
    eps, mx = grid_norms(ex41, grid, sol.values)
    assert eps == pytest.approx(np.sqrt(num / den), rel=1e-13)
    assert mx == pytest.approx(emax, rel=0, abs=0)


def test_csv_schema_and_reproducibility(ex44):
    config = StudyConfig(problem="ex44", jmin=3, jmax=4, out="csv")
    rep1 = run_convergence(config, problem=ex44)
    rep2 = run_convergence(config, problem=ex44)
    csv1, csv2 = rep1.to_csv(), rep2.to_csv()
    assert csv1.splitlines()[0] == ConvergenceReport.CSV_HEADER
    strip = lambda text: ["," .join(line.split(",")[:6])
                          for line in text.splitlines()]
    # all result fields are byte-identical between runs; only the two
    # timing columns may differ
    assert strip(csv1) == strip(csv2)
    row = csv1.splitlines()[1].split(",")
    assert row[0] == "3"
    assert "E" in row[2] and row[3] == ""   # first level has no order


def test_run_convergence_partial_report_on_failure():
    import math

    from crossfd.problems import make_piecewise_polynomial

    # mixed alignment: the vertical line is on grid lines, the horizontal not
    prob = make_piecewise_polynomial(3, (1.0, 2.0, 3.0, 4.0),
                                     xi=0.5, zeta=math.pi / 8)
    rep = run_convergence(StudyConfig(problem="broken", jmin=2, jmax=4),
                          problem=prob)
    assert rep.failure is not None
    assert not rep.levels
    assert "aborted" in rep.to_text()


def test_report_text_contains_orders(ex41):
    rep = run_convergence(StudyConfig(problem="ex41", jmin=2, jmax=3),
                          problem=ex41)
    text = rep.to_text()
    assert "problem ex41" in text
    assert "6." in text


def test_consistency_audit_class_selection(smooth):
    audit = run_consistency_audit(smooth, classes=["near_cross2"],
                                  jmin=3, jmax=5)
    assert set(audit) == {"near_cross2"}
    levels = audit["near_cross2"]["levels"]
    assert [J for J, _ in levels] == [3, 4, 5]
    assert audit["near_cross2"]["slope"] > 1.0


def test_consistency_audit_skips_absent_classes(ex41):
    audit = run_consistency_audit(ex41, classes=["gamma", "near_gamma4"],
                                  jmin=3, jmax=4)
    assert "gamma" in audit
    assert "near_gamma4" not in audit  # aligned grids have no near rows


def test_mmatrix_audit_api(ex41):
    report = run_mmatrix_audit(ex41, "high", 4)
    assert report.ok


def test_cli_list_problems(capsys):
    assert main(["list-problems"]) == 0
    out = capsys.readouterr().out
    assert "ex41" in out and "smooth" in out


def test_cli_converge_text(capsys):
    assert main(["converge", "--problem", "harmonic", "--jmin", "2",
                 "--jmax", "3"]) == 0
    out = capsys.readouterr().out
    assert "problem harmonic" in out


def test_cli_unknown_problem_is_usage_error(capsys):
    assert main(["converge", "--problem", "nope"]) == 1


def test_cli_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["converge"])  # missing --problem
    assert exc.value.code == 1


def test_cli_mmatrix_strict_exit_code():
    # ex44's vertical offsets at J=4 fall below the safe band for the
    # order-4 rows, so the strict audit must flag the high-order scheme and
    # clear the sign-safe one
    code = main(["mmatrix", "--problem", "ex44", "--scheme", "high",
                 "--j", "4", "--strict"])
    assert code == 3
    code = main(["mmatrix", "--problem", "ex44", "--scheme", "mmatrix",
                 "--j", "4", "--strict"])
    assert code == 0


def test_cli_consistency_bad_class(capsys):
    assert main(["consistency", "--problem", "smooth",
                 "--classes", "bogus"]) == 1


def test_cli_plot_writes_file(tmp_path):
    pytest.importorskip("matplotlib")
    out = tmp_path / "study.png"
    assert main(["converge", "--problem", "harmonic", "--jmin", "2",
                 "--jmax", "3", "--plot", str(out)]) == 0
    assert out.exists() and out.stat().st_size > 0
