"""Global sparse system: per-point rows, Dirichlet folding, M-matrix checks.

Unknowns are the interior grid values in row-major order (j outer, i
inner).  Each row keeps the scheme's native scaling: interior rows carry
h^-2, interface-touching rows h^-1, on both sides of the equation.
Boundary values are eliminated into the right-hand side, but the sign and
summation checks run on the full pre-elimination 3x3 blocks.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .mesh import Grid, PointClass, PointKind, classify, mode, subdomain_of
from .problems import ProblemSpec
from . import rhs as rhs_mod
from . import stencils as st_mod
from .stencils import DerivedStencil, apply_symmetry, check_conditions

__all__ = [
    "SCHEMES",
    "RowRecord",
    "SparseSystem",
    "MMatrixReport",
    "build_row",
    "stencil_point_panel",
    "row_residual",
    "assemble",
    "validate_m_matrix",
]

SCHEMES = ("high", "mmatrix")

_INTERIOR_F_KEYS = ((0, 0), (2, 0), (0, 2), (4, 0), (0, 4), (2, 2))

# stencil-block transform restoring global orientation, by (kind, side/quad)
_GAMMA_TRANSFORM = {
    (PointKind.NEAR_GAMMA_V, -1): "identity",
    (PointKind.NEAR_GAMMA_V, 1): "reflect-x",
    (PointKind.NEAR_GAMMA_H, -1): "transpose",
    (PointKind.NEAR_GAMMA_H, 1): "transpose-reflect",
}
_CROSS_TRANSFORM = {2: "identity", 1: "reflect-x", 3: "reflect-y",
                    4: "reflect-xy"}


@dataclass(frozen=True)
class RowRecord:
    """Pre-elimination provenance of one special (interface-touching) row."""

    i: int
    j: int
    kind: str
    weights: np.ndarray
    scale_exponent: int
    order: int


@dataclass
class SparseSystem:
    """Assembled linear system plus everything needed to interpret it."""

    grid: Grid
    matrix: sp.csr_matrix
    rhs: np.ndarray
    boundary_values: np.ndarray  # (n2+1, n1+1), g on the boundary ring
    interior_weights: np.ndarray
    n_interior_rows: int
    special_rows: list[RowRecord] = field(default_factory=list)
    assemble_seconds: float = 0.0

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def index(self, i: int, j: int) -> int:
        return (j - 1) * (self.grid.n1 - 1) + (i - 1)

    def export_triplets(self, path) -> None:
        """Dump the matrix in coordinate text format (row col value)."""
        coo = self.matrix.tocoo()
        with open(path, "w") as f:
            f.write(f"{coo.shape[0]} {coo.shape[1]} {coo.nnz}\n")
            for r, c, v in zip(coo.row, coo.col, coo.data):
                f.write(f"{r} {c} {v!r}\n")


@dataclass
class MMatrixReport:
    """Row-wise sign/summation verdicts on the pre-elimination blocks."""

    ok: bool
    n_rows: int
    n_sign_bad: int
    n_sum_bad: int
    worst_sign: float       # largest off-center weight, scaled by the block
    worst_sum: float        # largest |row sum|, scaled
    violations: list        # (i, j, kind, worst_off, row_sum), special rows
    interior_ok: bool = True

    def summary(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        return (f"{verdict}: {self.n_rows} rows, {self.n_sign_bad} sign "
                f"violations, {self.n_sum_bad} sum violations "
                f"(worst off-center {self.worst_sign:.3e}, "
                f"worst row sum {self.worst_sum:.3e})")


def _interior_f_table(problem: ProblemSpec, p: int, x: float, y: float) -> dict:
    return {(m, n): float(problem.f_deriv(p, m, n, x, y))
            for m, n in _INTERIOR_F_KEYS}


def build_row(problem: ProblemSpec, grid: Grid, cls: PointClass,
              i: int, j: int, scheme: str
              ) -> tuple[np.ndarray, rhs_mod.RowLoad, DerivedStencil]:
    """Global-orientation weights, load and canonical stencil for one row."""
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}, got {scheme!r}")
    kind = cls.kind
    if kind is PointKind.INTERIOR:
        st = st_mod.interior_stencil()
        ftab = _interior_f_table(problem, cls.subdomain, grid.x(i), grid.y(j))
        load = rhs_mod.interior_load(ftab, problem.a[cls.subdomain - 1], grid.h)
        return st.weights, load, st
    if kind is PointKind.ON_GAMMA:
        data = rhs_mod.gather_interface_data(problem, grid, cls, i, j, M=7)
        st = DerivedStencil(st_mod.gamma_vertical_block(data.a_minus / data.a_plus),
                            scale_exponent=1, order=7)
        load = rhs_mod.gamma_load(data, st)
        W = st.weights.T if cls.gamma in (3, 4) else st.weights
        return np.ascontiguousarray(W), load, st
    if kind is PointKind.ON_CROSS:
        data = rhs_mod.gather_cross_data(problem, grid, cls, M=7)
        st = st_mod.cross_stencil(problem.a)
        load = rhs_mod.cross_load(data, st)
        return st.weights, load, st
    if kind in (PointKind.NEAR_GAMMA_V, PointKind.NEAR_GAMMA_H):
        if scheme == "high":
            M, build, eval_load = 4, st_mod.near_gamma_order4, \
                rhs_mod.near_gamma_order4_load
        else:
            M, build, eval_load = 3, st_mod.near_gamma_order3, \
                rhs_mod.near_gamma_order3_load
        data = rhs_mod.gather_interface_data(problem, grid, cls, i, j, M=M)
        st = build(data.w, data.a_minus, data.a_plus)
        load = eval_load(data, st)
        W = apply_symmetry(st, _GAMMA_TRANSFORM[(kind, cls.side)]).weights
        return W, load, st
    if kind is PointKind.NEAR_CROSS:
        if scheme == "high":
            M, build, eval_load = 4, st_mod.near_cross_order4, \
                rhs_mod.near_cross_order4_load
        else:
            M, build, eval_load = 2, st_mod.near_cross_order2, \
                rhs_mod.near_cross_order2_load
        data = rhs_mod.gather_cross_data(problem, grid, cls, M=M)
        st = build(data.w1, data.w2, data.a)
        load = eval_load(data, st)
        W = apply_symmetry(st, _CROSS_TRANSFORM[cls.quadrant]).weights
        return W, load, st
    raise ValueError(f"no row for point kind {kind}")


def stencil_point_panel(problem: ProblemSpec, cls: PointClass,
                        k: int, l: int, x: float, y: float) -> int:
    """Panel whose smooth extension a row's expansion reads at offset (k, l).

    Interior rows use their own panel everywhere.  An on-interface row
    splits its points across the two panels of its own segment, so a
    stencil point landing on the *other* line is still read as that
    segment's one-sided closure limit.  All remaining rows take the strict
    side of the point (ties toward +x/+y match the cross row's layout).
    """
    if cls.kind is PointKind.INTERIOR:
        return cls.subdomain
    if cls.kind is PointKind.ON_GAMMA:
        far, near = {1: (1, 2), 2: (4, 3), 3: (3, 2), 4: (4, 1)}[cls.gamma]
        if cls.gamma in (1, 2):
            return far if k == -1 else near
        return far if l == -1 else near
    return subdomain_of(problem.xi, problem.zeta, x, y)


def row_residual(problem: ProblemSpec, grid: Grid, cls: PointClass,
                 i: int, j: int, scheme: str) -> float:
    """Scaled consistency residual h^-s |L_h u - F| with the exact solution.

    Each stencil value is read from the panel the row's expansion assigns
    to it (see :func:`stencil_point_panel`); with a discontinuous solution
    the distinction matters for interface rows whose stencil touches the
    other interface line.
    """
    W, load, st = build_row(problem, grid, cls, i, j, scheme)
    x, y, h = grid.x(i), grid.y(j), grid.h
    terms = [-load.value]
    for k in (-1, 0, 1):
        for l in (-1, 0, 1):
            p = stencil_point_panel(problem, cls, k, l, x + k * h, y + l * h)
            u = float(problem.u_deriv(p, 0, 0, x + k * h, y + l * h))
            terms.append(W[k + 1, l + 1] * u)
    return abs(math.fsum(terms)) * h ** (-st.scale_exponent)


def _special_points(grid: Grid) -> dict[tuple[int, int], PointClass]:
    """Classification of every non-interior, non-boundary grid point."""
    d = grid.domain
    cols: set[int] = set()
    rows: set[int] = set()
    t = (d.xi - d.l1) / grid.h
    for c in (int(np.floor(t)), int(np.ceil(t))):
        cols.update((c - 1, c, c + 1))
    t = (d.zeta - d.l3) / grid.h
    for r in (int(np.floor(t)), int(np.ceil(t))):
        rows.update((r - 1, r, r + 1))
    out = {}
    for i in sorted(cols):
        if 1 <= i <= grid.n1 - 1:
            for j in range(1, grid.n2):
                cls = classify(grid, i, j)
                if cls.kind is not PointKind.INTERIOR:
                    out[(i, j)] = cls
    for j in sorted(rows):
        if 1 <= j <= grid.n2 - 1:
            for i in range(1, grid.n1):
                if (i, j) in out:
                    continue
                cls = classify(grid, i, j)
                if cls.kind is not PointKind.INTERIOR:
                    out[(i, j)] = cls
    return out


def assemble(grid: Grid, problem: ProblemSpec, scheme: str = "high"
             ) -> SparseSystem:
    """Assemble the full sparse system for one problem on one grid."""
    t0 = time.perf_counter()
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}, got {scheme!r}")
    mode(grid)  # raises on mixed alignment
    n1, n2, h = grid.n1, grid.n2, grid.h
    nun = (n1 - 1) * (n2 - 1)
    xs, ys = grid.xs(), grid.ys()
    X, Y = np.meshgrid(xs, ys)

    gvals = np.zeros((n2 + 1, n1 + 1))
    ring = np.zeros((n2 + 1, n1 + 1), dtype=bool)
    ring[0, :] = ring[-1, :] = True
    ring[:, 0] = ring[:, -1] = True
    gvals[ring] = problem.exact(X[ring], Y[ring])

    special = _special_points(grid)

    # ----- interior rows, vectorized ------------------------------------
    II, JJ = np.meshgrid(np.arange(1, n1), np.arange(1, n2))
    keep = np.ones(II.shape, dtype=bool)
    for (i, j) in special:
        keep[j - 1, i - 1] = False
    Ii, Ji = II[keep], JJ[keep]
    Xi, Yi = X[Ji, Ii], Y[Ji, Ii]
    panels = np.where(Yi >= problem.zeta,
                      np.where(Xi >= problem.xi, 2, 1),
                      np.where(Xi >= problem.xi, 3, 4))
    Fint = np.zeros(len(Ii))
    for p in (1, 2, 3, 4):
        m = panels == p
        if not np.any(m):
            continue
        xp, yp = Xi[m], Yi[m]
        fd = {key: np.asarray(problem.f_deriv(p, key[0], key[1], xp, yp),
                              dtype=float)
              for key in _INTERIOR_F_KEYS}
        F = (6.0 * fd[(0, 0)] + 0.5 * h * h * (fd[(2, 0)] + fd[(0, 2)])
             + h**4 / 60.0 * (fd[(4, 0)] + fd[(0, 4)])
             + h**4 / 15.0 * fd[(2, 2)])
        Fint[m] = h * h * F / problem.a[p - 1]

    w_int = st_mod.interior_stencil().weights
    scale_int = h ** -2.0
    rows_idx = (Ji - 1) * (n1 - 1) + (Ii - 1)
    b = np.zeros(nun)
    b[rows_idx] = Fint * scale_int
    coo_r: list[np.ndarray] = []
    coo_c: list[np.ndarray] = []
    coo_v: list[np.ndarray] = []
    for k in (-1, 0, 1):
        for l in (-1, 0, 1):
            wij = w_int[k + 1, l + 1] * scale_int
            ni, nj = Ii + k, Ji + l
            inner = (ni >= 1) & (ni <= n1 - 1) & (nj >= 1) & (nj <= n2 - 1)
            coo_r.append(rows_idx[inner])
            coo_c.append((nj[inner] - 1) * (n1 - 1) + (ni[inner] - 1))
            coo_v.append(np.full(int(inner.sum()), wij))
            bdry = ~inner
            if np.any(bdry):
                np.subtract.at(b, rows_idx[bdry],
                               wij * gvals[nj[bdry], ni[bdry]])

    # ----- interface-touching rows, one at a time ------------------------
    records: list[RowRecord] = []
    for (i, j), cls in sorted(special.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        W, load, st = build_row(problem, grid, cls, i, j, scheme)
        s = h ** float(-st.scale_exponent)
        r = (j - 1) * (n1 - 1) + (i - 1)
        b[r] = load.value * s
        for k in (-1, 0, 1):
            for l in (-1, 0, 1):
                ni, nj = i + k, j + l
                v = W[k + 1, l + 1] * s
                if 1 <= ni <= n1 - 1 and 1 <= nj <= n2 - 1:
                    coo_r.append(np.array([r]))
                    coo_c.append(np.array([(nj - 1) * (n1 - 1) + (ni - 1)]))
                    coo_v.append(np.array([v]))
                else:
                    b[r] -= v * gvals[nj, ni]
        records.append(RowRecord(i=i, j=j, kind=cls.kind.value,
                                 weights=W, scale_exponent=st.scale_exponent,
                                 order=st.order))

    A = sp.coo_matrix(
        (np.concatenate(coo_v), (np.concatenate(coo_r), np.concatenate(coo_c))),
        shape=(nun, nun),
    ).tocsr()
    A.sum_duplicates()
    return SparseSystem(
        grid=grid, matrix=A, rhs=b, boundary_values=gvals,
        interior_weights=w_int, n_interior_rows=int(keep.sum()),
        special_rows=records, assemble_seconds=time.perf_counter() - t0,
    )


def validate_m_matrix(system: SparseSystem, tol: float = 1e-12
                      ) -> MMatrixReport:
    """Check the sign and summation conditions row by row.

    The checks run on the pre-elimination 3x3 blocks; the identical
    interior blocks are checked once and counted.
    """
    sign_ok, sum_ok, worst_off, worst_sum = check_conditions(
        system.interior_weights, tol)
    interior_ok = sign_ok and sum_ok
    n_sign = 0 if sign_ok else system.n_interior_rows
    n_sum = 0 if sum_ok else system.n_interior_rows
    scale = max(float(np.max(np.abs(system.interior_weights))), 1e-300)
    worst_sign_rel = worst_off / scale
    worst_sum_rel = abs(worst_sum) / scale
    violations = []
    for rec in system.special_rows:
        s_ok, z_ok, off, rsum = check_conditions(rec.weights, tol)
        scale = max(float(np.max(np.abs(rec.weights))), 1e-300)
        worst_sign_rel = max(worst_sign_rel, off / scale)
        worst_sum_rel = max(worst_sum_rel, abs(rsum) / scale)
        if not s_ok:
            n_sign += 1
        if not z_ok:
            n_sum += 1
        if not (s_ok and z_ok):
            violations.append((rec.i, rec.j, rec.kind, off, rsum))
    n_rows = system.n_interior_rows + len(system.special_rows)
    return MMatrixReport(
        ok=(n_sign == 0 and n_sum == 0),
        n_rows=n_rows, n_sign_bad=n_sign, n_sum_bad=n_sum,
        worst_sign=worst_sign_rel, worst_sum=worst_sum_rel,
        violations=violations, interior_ok=interior_ok,
    )
