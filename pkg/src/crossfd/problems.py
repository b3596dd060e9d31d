"""Problem definitions: coefficients plus analytic derivative oracles.

A problem supplies, for each panel p, the derivatives of the exact solution
u_p and the source f_p = -a_p * laplace(u_p), the two jump functions along
each interface segment, and the boundary data g.  All derivatives are
closed forms (differentiated symbolically once and compiled), never finite
differences: the high-order load formulas consume up to seventh derivatives
at accuracies where numerical differentiation noise would dominate.

Jump conventions (normals point toward +x across the vertical segments and
+y across the horizontal ones):

    segment 1:  phi_1(y) = u_2 - u_1,  psi_1(y) = a_2 du_2/dx - a_1 du_1/dx
    segment 2:  phi_2(y) = u_3 - u_4,  psi_2(y) = a_3 du_3/dx - a_4 du_4/dx
    segment 3:  phi_3(x) = u_2 - u_3,  psi_3(x) = a_2 du_2/dy - a_3 du_3/dy
    segment 4:  phi_4(x) = u_1 - u_4,  psi_4(x) = a_1 du_1/dy - a_4 du_4/dy

all evaluated as one-sided limits on the line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import sympy as sp

from .errors import InconsistentSpecError, MissingDerivativeError
from .mesh import Domain, Grid, subdomain_of

__all__ = [
    "ProblemSpec",
    "SymbolicProblem",
    "PolyProblem",
    "make_example",
    "make_piecewise_polynomial",
    "verify_spec",
    "list_examples",
    "exact_values",
]

#: derivative orders every problem must serve (solution, source, jumps)
U_ORDER, F_ORDER, PHI_ORDER, PSI_ORDER = 7, 5, 7, 6


@dataclass
class ProblemSpec:
    """Oracle bundle for one cross-interface problem.

    Concrete problems populate the callable tables; consumers only use the
    ``*_deriv`` accessors, which enforce the declared maximum orders.
    """

    name: str
    a: tuple[float, float, float, float]
    xi: float
    zeta: float
    domain: Domain
    u_order: int = U_ORDER
    f_order: int = F_ORDER
    phi_order: int = PHI_ORDER
    psi_order: int = PSI_ORDER
    _cache: dict = field(default_factory=dict, repr=False)

    # -- hooks implemented by concrete problems ---------------------------
    def _build_u(self, p: int, m: int, n: int):
        raise NotImplementedError

    def _build_f(self, p: int, m: int, n: int):
        raise NotImplementedError

    def _build_phi(self, p: int, n: int):
        raise NotImplementedError

    def _build_psi(self, p: int, n: int):
        raise NotImplementedError

    # -- public oracle surface --------------------------------------------
    def _fn(self, kind: str, p: int, m: int, n: int = 0):
        key = (kind, p, m, n)
        fn = self._cache.get(key)
        if fn is None:
            builder = getattr(self, f"_build_{kind}")
            fn = builder(p, m, n) if kind in ("u", "f") else builder(p, m)
            self._cache[key] = fn
        return fn

    def u_deriv(self, p: int, m: int, n: int, x, y):
        if m + n > self.u_order:
            raise MissingDerivativeError(
                f"u derivative order {m + n} beyond declared {self.u_order}")
        return self._fn("u", p, m, n)(x, y)

    def f_deriv(self, p: int, m: int, n: int, x, y):
        if m + n > self.f_order:
            raise MissingDerivativeError(
                f"f derivative order {m + n} beyond declared {self.f_order}")
        return self._fn("f", p, m, n)(x, y)

    def phi_deriv(self, p: int, n: int, t):
        if n > self.phi_order:
            raise MissingDerivativeError(
                f"phi derivative order {n} beyond declared {self.phi_order}")
        return self._fn("phi", p, n)(t)

    def psi_deriv(self, p: int, n: int, t):
        if n > self.psi_order:
            raise MissingDerivativeError(
                f"psi derivative order {n} beyond declared {self.psi_order}")
        return self._fn("psi", p, n)(t)

    def g(self, x, y):
        """Dirichlet boundary data: the exact solution on the boundary."""
        return self.exact(x, y)

    def exact(self, x, y):
        """Exact solution with on-line ties resolved toward +x/+y."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.ndim == 0 and y.ndim == 0:
            p = subdomain_of(self.xi, self.zeta, float(x), float(y))
            return float(self.u_deriv(p, 0, 0, float(x), float(y)))
        x, y = np.broadcast_arrays(x, y)
        out = np.empty(x.shape)
        east, north = x >= self.xi, y >= self.zeta
        panels = np.where(north, np.where(east, 2, 1), np.where(east, 3, 4))
        for p in (1, 2, 3, 4):
            mask = panels == p
            if np.any(mask):
                out[mask] = self.u_deriv(p, 0, 0, x[mask], y[mask])
        return out


def _as_array_fn_2d(fn):
    """Wrap a compiled expression so constants broadcast over arrays."""
    def wrapped(x, y):
        out = fn(x, y)
        if np.ndim(out) == 0 and (np.ndim(x) > 0 or np.ndim(y) > 0):
            return np.full(np.broadcast_shapes(np.shape(x), np.shape(y)),
                           float(out))
        return out
    return wrapped


def _as_array_fn_1d(fn):
    def wrapped(t):
        out = fn(t)
        if np.ndim(out) == 0 and np.ndim(t) > 0:
            return np.full(np.shape(t), float(out))
        return out
    return wrapped


class SymbolicProblem(ProblemSpec):
    """Problem built from four closed-form solution branches.

    Sources and jump data are derived symbolically from the branches, so the
    bundle is consistent with the PDE and the interface conditions by
    construction.  Derivative closures are compiled lazily and cached.
    """

    def __init__(self, name, a, xi, zeta, u_exprs, domain=None,
                 xy=None, **caps):
        if domain is None:
            domain = Domain(0.0, 1.0, 0.0, 1.0, float(xi), float(zeta))
        super().__init__(name=name, a=tuple(float(v) for v in a),
                         xi=float(xi), zeta=float(zeta), domain=domain, **caps)
        self._x, self._y = xy if xy is not None else sp.symbols("x y")
        self._u_exprs = dict(enumerate(u_exprs, start=1))
        self._f_exprs = {
            p: -self.a[p - 1] * (sp.diff(u, self._x, 2) + sp.diff(u, self._y, 2))
            for p, u in self._u_exprs.items()
        }
        x, y = self._x, self._y
        ue = self._u_exprs
        a1, a2, a3, a4 = self.a
        xi_s, zeta_s = sp.Float(self.xi, 17), sp.Float(self.zeta, 17)
        ux = {p: sp.diff(u, x) for p, u in ue.items()}
        uy = {p: sp.diff(u, y) for p, u in ue.items()}
        self._phi_exprs = {
            1: (ue[2] - ue[1]).subs(x, xi_s),
            2: (ue[3] - ue[4]).subs(x, xi_s),
            3: (ue[2] - ue[3]).subs(y, zeta_s),
            4: (ue[1] - ue[4]).subs(y, zeta_s),
        }
        self._psi_exprs = {
            1: (a2 * ux[2] - a1 * ux[1]).subs(x, xi_s),
            2: (a3 * ux[3] - a4 * ux[4]).subs(x, xi_s),
            3: (a2 * uy[2] - a3 * uy[3]).subs(y, zeta_s),
            4: (a1 * uy[1] - a4 * uy[4]).subs(y, zeta_s),
        }

    def _build_u(self, p, m, n):
        expr = sp.diff(self._u_exprs[p], self._x, m, self._y, n)
        return _as_array_fn_2d(sp.lambdify((self._x, self._y), expr, "numpy"))

    def _build_f(self, p, m, n):
        expr = sp.diff(self._f_exprs[p], self._x, m, self._y, n)
        return _as_array_fn_2d(sp.lambdify((self._x, self._y), expr, "numpy"))

    def _build_phi(self, p, n):
        t = self._y if p in (1, 2) else self._x
        expr = sp.diff(self._phi_exprs[p], t, n)
        return _as_array_fn_1d(sp.lambdify(t, expr, "numpy"))

    def _build_psi(self, p, n):
        t = self._y if p in (1, 2) else self._x
        expr = sp.diff(self._psi_exprs[p], t, n)
        return _as_array_fn_1d(sp.lambdify(t, expr, "numpy"))


# ---------------------------------------------------------------------------
# Exact piecewise-polynomial problems (oracles for the exactness tests).
# ---------------------------------------------------------------------------

def poly_dx(c: np.ndarray) -> np.ndarray:
    """d/dx on a coefficient array c[m, n] of sum c x^m y^n."""
    if c.shape[0] == 1:
        return np.zeros((1, c.shape[1]))
    return c[1:, :] * np.arange(1, c.shape[0])[:, None]


def poly_dy(c: np.ndarray) -> np.ndarray:
    if c.shape[1] == 1:
        return np.zeros((c.shape[0], 1))
    return c[:, 1:] * np.arange(1, c.shape[1])[None, :]


def poly_eval(c: np.ndarray, x, y):
    """Evaluate a 2D coefficient array by Horner in both variables."""
    acc = 0.0
    for row in c[::-1]:
        inner = 0.0
        for coef in row[::-1]:
            inner = inner * y + coef
        acc = acc * x + inner
    return acc


def poly_restrict(c: np.ndarray, axis: str, value: float) -> np.ndarray:
    """1D coefficients of the polynomial restricted to x=value or y=value."""
    powers = value ** np.arange(c.shape[0 if axis == "x" else 1])
    if axis == "x":
        return powers @ c
    return c @ powers


def poly1_deriv(b: np.ndarray, n: int) -> np.ndarray:
    for _ in range(n):
        if len(b) == 1:
            return np.zeros(1)
        b = b[1:] * np.arange(1, len(b))
    return b


def poly1_eval(b: np.ndarray, t):
    acc = 0.0
    for coef in b[::-1]:
        acc = acc * t + coef
    return acc


class PolyProblem(ProblemSpec):
    """Four polynomial branches with exactly computed sources and jumps.

    Serves as the brute-force oracle for the polynomial-exactness tests:
    every derivative is an exact coefficient-array operation.
    """

    def __init__(self, name, a, xi, zeta, branches, domain=None):
        if domain is None:
            domain = Domain(0.0, 1.0, 0.0, 1.0, float(xi), float(zeta))
        super().__init__(name=name, a=tuple(float(v) for v in a),
                         xi=float(xi), zeta=float(zeta), domain=domain,
                         u_order=99, f_order=99, phi_order=99, psi_order=99)
        self._u = {p: np.asarray(c, dtype=float) for p, c in
                   enumerate(branches, start=1)}
        self._f = {
            p: -self.a[p - 1] * _padded_sum(poly_dx(poly_dx(c)),
                                            poly_dy(poly_dy(c)))
            for p, c in self._u.items()
        }
        u, a_ = self._u, self.a
        self._phi1d = {
            1: _padded_sum(poly_restrict(u[2], "x", self.xi),
                           -poly_restrict(u[1], "x", self.xi)),
            2: _padded_sum(poly_restrict(u[3], "x", self.xi),
                           -poly_restrict(u[4], "x", self.xi)),
            3: _padded_sum(poly_restrict(u[2], "y", self.zeta),
                           -poly_restrict(u[3], "y", self.zeta)),
            4: _padded_sum(poly_restrict(u[1], "y", self.zeta),
                           -poly_restrict(u[4], "y", self.zeta)),
        }
        self._psi1d = {
            1: _padded_sum(a_[1] * poly_restrict(poly_dx(u[2]), "x", self.xi),
                           -a_[0] * poly_restrict(poly_dx(u[1]), "x", self.xi)),
            2: _padded_sum(a_[2] * poly_restrict(poly_dx(u[3]), "x", self.xi),
                           -a_[3] * poly_restrict(poly_dx(u[4]), "x", self.xi)),
            3: _padded_sum(a_[1] * poly_restrict(poly_dy(u[2]), "y", self.zeta),
                           -a_[2] * poly_restrict(poly_dy(u[3]), "y", self.zeta)),
            4: _padded_sum(a_[0] * poly_restrict(poly_dy(u[1]), "y", self.zeta),
                           -a_[3] * poly_restrict(poly_dy(u[4]), "y", self.zeta)),
        }

    def branch(self, p: int) -> np.ndarray:
        return self._u[p]

    def _build_u(self, p, m, n):
        c = self._u[p]
        for _ in range(m):
            c = poly_dx(c)
        for _ in range(n):
            c = poly_dy(c)
        return lambda x, y, c=c: poly_eval(c, x, y)

    def _build_f(self, p, m, n):
        c = self._f[p]
        for _ in range(m):
            c = poly_dx(c)
        for _ in range(n):
            c = poly_dy(c)
        return lambda x, y, c=c: poly_eval(c, x, y)

    def _build_phi(self, p, n):
        b = poly1_deriv(self._phi1d[p], n)
        return lambda t, b=b: poly1_eval(b, t)

    def _build_psi(self, p, n):
        b = poly1_deriv(self._psi1d[p], n)
        return lambda t, b=b: poly1_eval(b, t)


def _padded_sum(*arrays: np.ndarray) -> np.ndarray:
    """Sum coefficient arrays of different shapes, zero-padding to fit."""
    arrays = [np.atleast_1d(np.asarray(a, dtype=float)) for a in arrays]
    nd = arrays[0].ndim
    shape = tuple(max(a.shape[d] for a in arrays) for d in range(nd))
    out = np.zeros(shape)
    for a in arrays:
        sl = tuple(slice(0, s) for s in a.shape)
        out[sl] += a
    return out


def make_piecewise_polynomial(degree: int, a, xi=0.5, zeta=0.5, rng=None,
                              branches=None, name="poly",
                              domain=None) -> PolyProblem:
    """Random (or given) polynomial branches with exact jump data.

    The jump functions are computed from the branches, so the problem
    always satisfies its own interface conditions exactly.
    """
    if branches is None:
        if rng is None:
            rng = np.random.default_rng(0)
        branches = []
        for _ in range(4):
            c = rng.integers(-5, 6, size=(degree + 1, degree + 1)).astype(float)
            for m in range(degree + 1):
                for n in range(degree + 1):
                    if m + n > degree:
                        c[m, n] = 0.0
            branches.append(c)
    return PolyProblem(name, a, xi, zeta, branches, domain=domain)


# ---------------------------------------------------------------------------
# The shipped manufactured problems.
# ---------------------------------------------------------------------------

def _example_registry():
    x, y = sp.symbols("x y")
    pi = sp.pi

    def ex41():
        sy = sp.sin(2 * pi * (1 - y)) * sp.exp(-y)
        return SymbolicProblem(
            "ex41", (1e-5, 1e5, 1e-5, 1e5), 0.5, 0.5,
            [
                -sp.sin(2 * pi * x) * sp.exp(-y) - sy,
                -sp.sin(2 * pi * (1 - x)) * sp.exp(-y) - sy,
                -sp.sin(2 * pi * (1 - x)) * sp.exp(-y) - sp.sin(2 * pi * y) * sp.exp(-y),
                -sp.sin(2 * pi * x) * sp.exp(-y) - sp.sin(2 * pi * y) * sp.exp(-y),
            ],
            xy=(x, y),
        )

    def ex42():
        e = sp.exp(-x + y)
        return SymbolicProblem(
            "ex42", (1e7, 1e-3, 1e4, 1e-6), 0.5, 0.5,
            [
                (x**3 + (1 - y)**3) * e,
                ((1 - x)**3 + (1 - y)**3) * e,
                ((1 - x)**3 + y**3) * e,
                (x**3 + y**3) * e,
            ],
            xy=(x, y),
        )

    def ex43():
        a = (1e-4, 1e5, 2e-4, 1e6)
        base = sp.sin(8 * pi * x) * sp.sin(8 * pi * y)
        return SymbolicProblem(
            "ex43", a, 0.25, 0.125,
            [base / ap for ap in a],
            xy=(x, y),
        )

    def ex44():
        return SymbolicProblem(
            "ex44", (1e4, 1e-4, 1e4, 1e-4), math.pi / 5, math.pi / 8,
            [
                sp.cos(5 * x) * sp.cos(5 * y),
                sp.cos(12 * x) * sp.exp(y - x),
                sp.sin(5 * x) * sp.cos(5 * y),
                sp.sin(12 * y) * sp.exp(x - y),
            ],
            xy=(x, y),
        )

    def ex45():
        return SymbolicProblem(
            "ex45", (1e4, 1e-6, 1e5, 1e-5), math.pi / 4, math.pi / 10,
            [sp.sin(16 * y), sp.cos(16 * x), sp.sin(16 * y), sp.cos(16 * x)],
            xy=(x, y),
        )

    def ex46():
        a = (1e-4, 1e5, 1e-4, 1e6)
        return SymbolicProblem(
            "ex46", a, math.pi / 6, math.pi / 8,
            [
                sp.sin(4 * (x + y)) / a[0],
                sp.cos(2 * (x - y)) / a[1],
                sp.sin(4 * (x - y)) / a[2],
                sp.cos(2 * (x + y)) / a[3],
            ],
            xy=(x, y),
        )

    def harmonic():
        # One global harmonic polynomial with equal coefficients: zero
        # source, zero jumps; the solver must reproduce it to rounding.
        u = x**2 - y**2
        return SymbolicProblem("harmonic", (1.0, 1.0, 1.0, 1.0), 0.5, 0.5,
                               [u, u, u, u], xy=(x, y))

    def smooth():
        # Low-frequency unaligned problem with moderate contrast; stays in
        # the asymptotic range from h = 1/8 on, which makes it the default
        # data for consistency-slope audits of the near-interface cases.
        return SymbolicProblem(
            "smooth", (2.0, 0.5, 3.0, 0.2), math.pi / 5, math.pi / 8,
            [
                sp.cos(3 * x) * sp.cos(3 * y),
                sp.cos(4 * x) * sp.exp(y - x),
                sp.sin(3 * x) * sp.cos(3 * y),
                sp.sin(4 * y) * sp.exp(x - y),
            ],
            xy=(x, y),
        )

    return {fn.__name__: fn for fn in (ex41, ex42, ex43, ex44, ex45, ex46,
                                       harmonic, smooth)}


_EXAMPLES = _example_registry()


def list_examples() -> list[str]:
    return sorted(_EXAMPLES)


def make_example(name: str) -> SymbolicProblem:
    """Build one of the shipped manufactured problems by name (ex41..ex46)."""
    try:
        builder = _EXAMPLES[name]
    except KeyError:
        raise KeyError(
            f"unknown example {name!r}; available: {', '.join(list_examples())}"
        ) from None
    return builder()


def exact_values(problem: ProblemSpec, grid: Grid) -> np.ndarray:
    """Exact solution at every grid point, shaped (n2+1, n1+1)."""
    X, Y = np.meshgrid(grid.xs(), grid.ys())
    return problem.exact(X, Y)


# ---------------------------------------------------------------------------
# Finite-difference consistency spot checks.
# ---------------------------------------------------------------------------

def _panel_box(problem, p):
    d = problem.domain
    if p == 1:
        return d.l1, problem.xi, problem.zeta, d.l4
    if p == 2:
        return problem.xi, d.l2, problem.zeta, d.l4
    if p == 3:
        return problem.xi, d.l2, d.l3, problem.zeta
    return d.l1, problem.xi, d.l3, problem.zeta


def verify_spec(problem: ProblemSpec, samples: int = 1000, rng=None,
                step: float = 1e-6, tol: float = 1e-5) -> dict:
    """Spot-check a problem's oracles against each other.

    Checks, at random points: f = -a * laplace(u) panel by panel, the jump
    oracles against one-sided solution limits, and first-derivative ladders
    of u, phi, psi by central differences with the given step.  Returns a
    report dict; raises InconsistentSpecError naming the worst offender if
    any check exceeds the tolerance (relative to the sampled scale).
    """
    if rng is None:
        rng = np.random.default_rng(12345)
    per_panel = max(1, samples // 4)
    worst: dict[str, float] = {}

    def record(check, rel):
        worst[check] = max(worst.get(check, 0.0), rel)

    for p in (1, 2, 3, 4):
        x0, x1, y0, y1 = _panel_box(problem, p)
        pad_x, pad_y = 0.05 * (x1 - x0), 0.05 * (y1 - y0)
        xs = rng.uniform(x0 + pad_x, x1 - pad_x, per_panel)
        ys = rng.uniform(y0 + pad_y, y1 - pad_y, per_panel)
        f = problem.f_deriv(p, 0, 0, xs, ys)
        lap = (problem.u_deriv(p, 2, 0, xs, ys)
               + problem.u_deriv(p, 0, 2, xs, ys))
        scale = np.max(np.abs(f)) + np.max(np.abs(lap)) * problem.a[p - 1] + 1e-300
        record("pde", np.max(np.abs(f + problem.a[p - 1] * lap)) / scale)
        # derivative ladder of u in both directions
        for (m, n, axis) in ((0, 0, "x"), (0, 0, "y"), (1, 0, "x"), (0, 1, "y")):
            lo = problem.u_deriv(p, m, n, xs - (step if axis == "x" else 0),
                                 ys - (step if axis == "y" else 0))
            hi = problem.u_deriv(p, m, n, xs + (step if axis == "x" else 0),
                                 ys + (step if axis == "y" else 0))
            fd = (hi - lo) / (2 * step)
            ex = problem.u_deriv(p, m + (axis == "x"), n + (axis == "y"), xs, ys)
            scale = np.max(np.abs(ex)) + np.max(np.abs(fd)) + 1e-300
            record("u_ladder", np.max(np.abs(fd - ex)) / scale)

    a1, a2, a3, a4 = problem.a
    d = problem.domain
    t_v = rng.uniform(d.l3 + 0.02, d.l4 - 0.02, per_panel)
    t_h = rng.uniform(d.l1 + 0.02, d.l2 - 0.02, per_panel)
    tv1, tv2 = t_v[t_v > problem.zeta], t_v[t_v < problem.zeta]
    th3, th4 = t_h[t_h > problem.xi], t_h[t_h < problem.xi]
    jump_defs = {
        1: (tv1, lambda t: problem.u_deriv(2, 0, 0, problem.xi, t)
            - problem.u_deriv(1, 0, 0, problem.xi, t),
            lambda t: a2 * problem.u_deriv(2, 1, 0, problem.xi, t)
            - a1 * problem.u_deriv(1, 1, 0, problem.xi, t)),
        2: (tv2, lambda t: problem.u_deriv(3, 0, 0, problem.xi, t)
            - problem.u_deriv(4, 0, 0, problem.xi, t),
            lambda t: a3 * problem.u_deriv(3, 1, 0, problem.xi, t)
            - a4 * problem.u_deriv(4, 1, 0, problem.xi, t)),
        3: (th3, lambda t: problem.u_deriv(2, 0, 0, t, problem.zeta)
            - problem.u_deriv(3, 0, 0, t, problem.zeta),
            lambda t: a2 * problem.u_deriv(2, 0, 1, t, problem.zeta)
            - a3 * problem.u_deriv(3, 0, 1, t, problem.zeta)),
        4: (th4, lambda t: problem.u_deriv(1, 0, 0, t, problem.zeta)
            - problem.u_deriv(4, 0, 0, t, problem.zeta),
            lambda t: a1 * problem.u_deriv(1, 0, 1, t, problem.zeta)
            - a4 * problem.u_deriv(4, 0, 1, t, problem.zeta)),
    }
    u_scale = 0.0
    for p in (1, 2, 3, 4):
        x0, x1, y0, y1 = _panel_box(problem, p)
        u_scale = max(u_scale, float(np.max(np.abs(problem.u_deriv(
            p, 0, 0, rng.uniform(x0, x1, 50), rng.uniform(y0, y1, 50))))))
    flux_scale = u_scale * max(problem.a)
    for p, (ts, phi_ref, psi_ref) in jump_defs.items():
        if len(ts) == 0:
            continue
        dphi = np.max(np.abs(problem.phi_deriv(p, 0, ts) - phi_ref(ts)))
        record("phi_jump", dphi / (u_scale + 1e-300))
        dpsi = np.max(np.abs(problem.psi_deriv(p, 0, ts) - psi_ref(ts)))
        record("psi_jump", dpsi / (flux_scale + 1e-300))
        # ladder: phi'(t), psi'(t) against central differences
        for check, fn, base in (("phi_ladder", problem.phi_deriv, u_scale),
                                ("psi_ladder", problem.psi_deriv, flux_scale)):
            fd = (fn(p, 0, ts + step) - fn(p, 0, ts - step)) / (2 * step)
            ex = fn(p, 1, ts)
            scale = np.max(np.abs(ex)) + np.max(np.abs(fd)) + base
            record(check, np.max(np.abs(fd - ex)) / (scale + 1e-300))

    failures = {k: v for k, v in worst.items() if v > tol}
    report = {"worst": worst, "tolerance": tol, "ok": not failures}
    if failures:
        name = max(failures, key=failures.get)
        raise InconsistentSpecError(
            f"problem {problem.name!r} fails {sorted(failures)} at tolerance "
            f"{tol}; worst offender {name} with relative error {failures[name]:.3e}"
        )
    return report
