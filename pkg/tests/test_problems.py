import math

import numpy as np
import pytest
import sympy as sp

from crossfd.errors import InconsistentSpecError, MissingDerivativeError
from crossfd.mesh import build_grid
from crossfd.problems import (SymbolicProblem, exact_values, list_examples,
                              make_example, make_piecewise_polynomial,
                              verify_spec)


def test_registry_lists_shipped_problems():
    names = list_examples()
    for name in ("ex41", "ex42", "ex43", "ex44", "ex45", "ex46",
                 "harmonic", "smooth"):
        assert name in names
    with pytest.raises(KeyError):
        make_example("ex99")


def test_ex41_metadata(ex41):
    assert ex41.a == (1e-5, 1e5, 1e-5, 1e5)
    assert (ex41.xi, ex41.zeta) == (0.5, 0.5)
    # the solution is continuous across the interface
    ys = np.linspace(0.55, 0.95, 7)
    for p in (1, 2, 3, 4):
        t = ys if p in (1, 2) else np.linspace(0.05, 0.45, 7)
        assert np.max(np.abs(ex41.phi_deriv(p, 0, t))) < 1e-12


def test_ex43_metadata():
    p = make_example("ex43")
    assert (p.xi, p.zeta) == (0.25, 0.125)
    assert p.a[2] == 2e-4


def test_ex44_metadata(ex44):
    assert (ex44.xi, ex44.zeta) == (math.pi / 5, math.pi / 8)
    # jumps are genuinely nonzero here
    assert abs(ex44.phi_deriv(1, 0, 0.7)) > 1e-3


@pytest.mark.parametrize("name", ["ex41", "ex42", "ex43", "ex44", "ex45",
                                  "ex46", "harmonic", "smooth"])
def test_every_example_verifies(name):
    verify_spec(make_example(name), samples=1000)


def test_verify_spec_catches_wrong_psi_sign():
    x, y = sp.symbols("x y")
    bad = SymbolicProblem("bad", (1.0, 2.0, 3.0, 4.0), 0.5, 0.5,
                          [x**2 * y, x * y**2 + 1, sp.sin(x) * y, x + y],
                          xy=(x, y))
    bad._psi_exprs[1] = -bad._psi_exprs[1]
    with pytest.raises(InconsistentSpecError, match="psi"):
        verify_spec(bad, samples=100)


def test_piecewise_polynomial_constant_branches():
    pp = make_piecewise_polynomial(
        0, (1.0, 2.0, 3.0, 4.0),
        branches=[np.array([[5.0]])] * 4)
    for p in (1, 2, 3, 4):
        assert pp.phi_deriv(p, 0, 0.3) == 0.0
        assert pp.f_deriv(p, 0, 0, 0.3, 0.7) == 0.0
    # one-sided flux jump across the vertical line vanishes for constants
    assert pp.psi_deriv(1, 0, 0.7) == 0.0


def test_piecewise_polynomial_same_branch_equal_a():
    c = np.array([[1.0, 2.0], [3.0, 0.0]])
    pp = make_piecewise_polynomial(1, (2.0,) * 4, branches=[c] * 4)
    for p in (1, 2, 3, 4):
        assert pp.phi_deriv(p, 0, 0.3) == 0.0
        assert pp.psi_deriv(p, 0, 0.3) == 0.0


def test_piecewise_polynomial_random_jumps_verify():
    pp = make_piecewise_polynomial(4, (1.0, 3.0, 0.5, 2.0),
                                   rng=np.random.default_rng(3))
    verify_spec(pp, samples=300)


def test_derivative_order_caps_enforced(ex41):
    with pytest.raises(MissingDerivativeError):
        ex41.f_deriv(1, 4, 2, 0.2, 0.7)
    with pytest.raises(MissingDerivativeError):
        ex41.phi_deriv(1, 8, 0.7)
    with pytest.raises(MissingDerivativeError):
        ex41.psi_deriv(1, 7, 0.7)


def test_exact_values_shape_and_boundary(ex41):
    grid = build_grid(ex41.domain, 8)
    U = exact_values(ex41, grid)
    assert U.shape == (9, 9)
    assert U[0, 3] == pytest.approx(ex41.g(grid.x(3), grid.y(0)))


def test_mixed_partial_order_independence(ex44):
    # d/dx then d/dy agrees with d/dy then d/dx through the closed forms
    xs = np.array([0.3, 0.8])
    ys = np.array([0.2, 0.6])
    for p in (1, 2, 3, 4):
        a = ex44.u_deriv(p, 2, 1, xs, ys)
        step = 1e-6
        fd = (ex44.u_deriv(p, 2, 0, xs, ys + step)
              - ex44.u_deriv(p, 2, 0, xs, ys - step)) / (2 * step)
        assert np.allclose(a, fd, rtol=1e-5, atol=1e-5 * np.max(np.abs(a) + 1))
