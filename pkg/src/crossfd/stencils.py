"""Coefficient blocks for every point class of the compact 9-point schemes.

All builders produce the canonical orientation: a vertical interface sitting
at x = x_center - w*h (w = 0 when the point lies on the line), and for the
cross cases the intersection sitting at (x_center - w1*h, y_center - w2*h),
i.e. in the lower-left quadrant of the stencil.  Mirrored orientations are
obtained with :func:`apply_symmetry`; the right-hand-side module applies the
matching involution to its input data so both sides of a row transform
together.

Blocks are stored as 3x3 arrays ``C[k+1, l+1]`` where k is the x-offset and
l the y-offset of the stencil point in units of h.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DegenerateStencilError, NoSolutionError
from .taylor import eval_G, lambda1_set, odd

_FACT = [math.factorial(k) for k in range(18)]

__all__ = [
    "DerivedStencil",
    "RhoChoice",
    "interior_stencil",
    "gamma_stencil",
    "gamma_vertical_block",
    "cross_stencil",
    "near_gamma_order4",
    "near_gamma_order3",
    "near_cross_order4",
    "near_cross_order2",
    "rho_interval",
    "choose_rho",
    "derive_by_nullspace",
    "apply_symmetry",
    "format_stencil",
    "check_conditions",
    "gamma_consistency_matrix",
    "cross_consistency_matrix",
]

# Offsets w (or 1-w) below this are rejected by the unaligned builders: the
# conditioning of the order-4 systems for w -> 0 is not covered by the
# theory and a grid that close to alignment should be classified aligned.
W_GUARD = 1e-8


@dataclass(frozen=True)
class DerivedStencil:
    """A 3x3 coefficient block plus the metadata a scheme row needs.

    ``scale_exponent`` is s in the row equation h^(-s) * L_h u_h = RHS.
    ``split`` carries the two corner weights (c, c_tilde) of the near-cross
    order-4 construction whose sum is ``weights[0, 0]``; the load formula
    needs them separately.
    """

    weights: np.ndarray
    scale_exponent: int
    order: int
    split: tuple[float, float] | None = None

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (3, 3) or not np.all(np.isfinite(w)):
            raise ValueError("stencil weights must be a finite 3x3 block")
        object.__setattr__(self, "weights", w)
        w.setflags(write=False)


@dataclass(frozen=True)
class RhoChoice:
    """A free-parameter value together with its admissible interval."""

    rho: float
    interval: tuple[float, float]


def _check_positive(*coeffs: float) -> None:
    for a in coeffs:
        if not a > 0:
            raise ValueError(f"coefficients must be positive, got {a}")


def _check_w(*ws: float) -> None:
    for w in ws:
        if not (0.0 < w < 1.0):
            raise ValueError(f"offset {w} outside (0, 1)")
        if not (W_GUARD <= w <= 1.0 - W_GUARD):
            raise DegenerateStencilError(
                f"offset {w} within {W_GUARD} of a grid line; the unaligned "
                "blocks are not analyzed there and the grid should be "
                "treated as aligned"
            )


def interior_stencil() -> DerivedStencil:
    """Order-6 block for points whose 3x3 closure stays in one panel."""
    C = np.array([
        [-1.0, -4.0, -1.0],
        [-4.0, 20.0, -4.0],
        [-1.0, -4.0, -1.0],
    ])
    return DerivedStencil(C, scale_exponent=2, order=6)


def gamma_vertical_block(alpha: float) -> np.ndarray:
    """Order-7 block for a point on a vertical interface line.

    ``alpha`` is the ratio (coefficient left of the line) / (right of it).
    """
    _check_positive(alpha)
    return np.array([
        [-alpha, -4.0 * alpha, -alpha],
        [-2.0 * (1.0 + alpha), 10.0 * (1.0 + alpha), -2.0 * (1.0 + alpha)],
        [-1.0, -4.0, -1.0],
    ])


#: coefficient ratio used by the on-interface block of each segment,
#: (far side) / (near side) in the segment's canonical frame.
_GAMMA_ALPHA = {
    1: lambda a: a[0] / a[1],   # vertical, above the cross: left/right
    2: lambda a: a[3] / a[2],   # vertical, below: left/right
    3: lambda a: a[2] / a[1],   # horizontal, right of the cross: below/above
    4: lambda a: a[3] / a[0],   # horizontal, left: below/above
}


def gamma_stencil(p: int, a: tuple[float, float, float, float]) -> DerivedStencil:
    """Order-7 block for a grid point on interface segment p (1..4).

    Segments 1 and 2 are the vertical pieces (above and below the cross),
    3 and 4 the horizontal ones (right and left); the horizontal blocks are
    the transpose of the vertical one.
    """
    _check_positive(*a)
    if p not in (1, 2, 3, 4):
        raise ValueError(f"interface segment must be 1..4, got {p}")
    C = gamma_vertical_block(_GAMMA_ALPHA[p](a))
    if p in (3, 4):
        C = C.T.copy()
    return DerivedStencil(C, scale_exponent=1, order=7)


def cross_stencil(a: tuple[float, float, float, float]) -> DerivedStencil:
    """Order-7 block for the grid point sitting exactly on the cross."""
    a1, a2, a3, a4 = a
    _check_positive(a1, a2, a3, a4)
    C = np.empty((3, 3))
    C[0, 2] = -a1 ** 2 * (a2 + a3) / (a2 ** 2 * (a1 + a4))
    C[1, 2] = -2.0 * (a1 + a2) / a2
    C[2, 2] = -1.0
    C[0, 1] = -2.0 * a1 * (a2 + a3) / a2 ** 2
    C[1, 1] = 5.0 * (a2 + a3) * (a1 + a2) / a2 ** 2
    C[2, 1] = -2.0 * (a2 + a3) / a2
    C[0, 0] = -a1 * a4 * (a2 + a3) / (a2 ** 2 * (a1 + a4))
    C[1, 0] = -2.0 * a3 * (a1 + a2) / a2 ** 2
    C[2, 0] = -a3 / a2
    return DerivedStencil(C, scale_exponent=1, order=7)


def _order4_polys(w):
    """The r, t1 and s polynomials of the order-4 near-interface block.

    Generic in the scalar type: called with a Fraction the values are exact.
    """
    r = [
        (2 * w + 1) ** 2 * (w + 2) * (w - 1) ** 2,
        4 * w**5 - 4 * w**4 + 5 * w**3 + 6 * w**2 - 5 * w + 2,
        -8 * w**5 + 6 * w**3 - 2 * w**2 + 4,
        4 * w**4 - 4 * w**3 + w**2 + 1,
        -4 * w**4 + 4 * w**3 - w**2 + 1,
        -((2 * w + 1) ** 2) * (w - 1) ** 3,
        8 * w**5 - 20 * w**4 + 14 * w**3 - 3 * w**2 + 1,
        -8 * w**4 + 8 * w**3 + 10 * w**2 - 6 * w + 4,
        8 * w**4 - 8 * w**3 - 10 * w**2 + 6 * w + 4,
        8 * w**5 - 16 * w**4 + 14 * w**3 - 8 * w**2 - 2 * w + 4,
        8 * w**5 - 24 * w**4 + 38 * w**3 - 22 * w**2 + 8 * w,
        -16 * w**5 + 40 * w**4 - 52 * w**3 + 30 * w**2 - 6 * w + 4,
    ]
    t1 = -4 * w**5 + 12 * w**4 - 13 * w**3 + 8 * w**2 - w
    s = [
        -8 * w**5 - 8 * w**4 + 10 * w**3 + 26 * w**2 - 10 * w - 10,
        -8 * w**5 + 8 * w**4 - 22 * w**3 - 18 * w**2 + 10 * w - 10,
        16 * w**5 + 12 * w**3 - 8 * w**2 - 20,
    ]
    return r, t1, s


def near_gamma_order4(w: float, a_minus: float, a_plus: float) -> DerivedStencil:
    """Order-4 block for a point with a vertical interface at x_c - w*h.

    ``a_minus`` is the coefficient on the far side of the line (x < x*),
    ``a_plus`` the one on the point's own side.  Entries are evaluated in
    exact rational arithmetic: the rational-function identities behind the
    summation condition then hold to the final rounding even for
    coefficient ratios of many orders of magnitude.
    """
    _check_positive(a_minus, a_plus)
    _check_w(w)
    alpha = Fraction(a_minus) / Fraction(a_plus)
    r, t1, s = _order4_polys(Fraction(w))
    a2 = alpha * alpha
    beta = r[0] + r[1] * a2 + r[2] * alpha
    C = np.empty((3, 3))
    C[0, 2] = -(r[3] * a2 + r[4] * alpha) / beta
    C[1, 2] = -1.0
    C[2, 2] = -(r[5] + t1 * a2 + r[6] * alpha) / beta
    C[0, 1] = -(r[7] * a2 + r[8] * alpha) / beta
    C[1, 1] = -(s[0] + s[1] * a2 + s[2] * alpha) / beta
    C[2, 1] = -(r[9] + r[10] * a2 + r[11] * alpha) / beta
    C[:, 0] = C[:, 2]
    return DerivedStencil(C, scale_exponent=1, order=4)


def _order3_polys(w):
    """The r, s and t polynomials of the order-3 sign-safe block.

    Generic in the scalar type, like :func:`_order4_polys`.
    """
    r = [
        12 * (w**3 - w**2 - w + 1),
        4 * (w**3 + 3 * w**2 + 2 * w),
        4 * (-4 * w**3 + w + 3),
        4 * (2 * w**3 + w + 3),
        4 * (-2 * w**3 - w + 3),
    ]
    s = [
        6 * (-(w**2) + 2 * w - 1),
        -6 * (w**2 + 2 * w + 1),
        12 * (w**2 - 1),
        4 * (-4 * w**3 + w - 3),
        4 * (4 * w**3 - w - 3),
        12 * (-2 * w**3 + 3 * w**2 - 1),
        4 * (-2 * w**3 - 3 * w**2 - w),
        4 * (8 * w**3 - 6 * w**2 + w - 3),
    ]
    t = [
        -4 * w**3 + 6 * w**2 - 2 * w,
        4 * w**3 - 6 * w**2 + 2 * w,
        -6 * w**3 + 9 * w**2 - 3,
        -2 * w**3 - 3 * w**2 - w,
        8 * w**3 - 6 * w**2 + w - 3,
        8 * w**3 - 12 * w**2 - 2 * w,
        -8 * w**3 + 12 * w**2 + 2 * w - 6,
        6 * (-(w**2) + 2 * w - 1),
        -6 * w**2,
        12 * (w**2 - w),
    ]
    return r, s, t


def rho_interval(alpha: float, w: float) -> tuple[float, float]:
    """Admissible range of the free parameter of the order-3 block.

    Any value inside it keeps the center weight positive and every off-center
    weight nonpositive, for this ``alpha`` and offset ``w``.
    """
    _check_positive(alpha)
    _check_w(w)
    r, s, t = _order3_polys(w)
    a2 = alpha * alpha
    lo = max(
        -(t[2] + t[3] * a2 + t[4] * alpha) / (s[0] + s[1] * a2 + s[2] * alpha),
        -(t[5] * a2 + t[6] * alpha) / (s[3] * a2 + s[4] * alpha),
        -(t[7] + t[8] * a2 + t[9] * alpha) / (s[5] + s[6] * a2 + s[7] * alpha),
    )
    hi = min(0.0, -(t[0] * a2 + t[1] * alpha) / (r[3] * a2 + r[4] * alpha))
    return lo, hi


def choose_rho(alpha: float, w: float, rho: float | None = None) -> RhoChoice:
    """Validated free-parameter choice for the order-3 block.

    Defaults to the midpoint of the admissible interval: deterministic and
    maximally interior to the sign-feasible set.
    """
    lo, hi = rho_interval(alpha, w)
    if rho is None:
        rho = 0.5 * (lo + hi)
    elif not (lo <= rho <= hi):
        raise ValueError(f"rho={rho} outside the admissible interval "
                         f"[{lo}, {hi}] for alpha={alpha}, w={w}")
    return RhoChoice(rho=rho, interval=(lo, hi))


def near_gamma_order3(w: float, a_minus: float, a_plus: float,
                      rho: float | None = None) -> DerivedStencil:
    """Order-3 block satisfying the sign and summation conditions.

    When ``rho`` is omitted the midpoint of :func:`rho_interval` is used;
    a supplied value must lie inside that interval.
    """
    _check_positive(a_minus, a_plus)
    _check_w(w)
    alpha = a_minus / a_plus
    rho = choose_rho(alpha, w, rho).rho
    # exact rational evaluation, as in the order-4 builder
    r, s, t = _order3_polys(Fraction(w))
    al = Fraction(a_minus) / Fraction(a_plus)
    a2 = al * al
    rho_f = Fraction(rho)
    beta = r[0] + r[1] * a2 + r[2] * al
    C = np.empty((3, 3))
    C[1, 1] = 1.0
    C[0, 2] = ((r[3] * a2 + r[4] * al) * rho_f + t[0] * a2 + t[1] * al) / beta
    C[0, 0] = C[0, 2]
    C[2, 2] = rho
    C[2, 0] = rho
    C[1, 2] = ((s[0] + s[1] * a2 + s[2] * al) * rho_f
               + t[2] + t[3] * a2 + t[4] * al) / beta
    C[1, 0] = C[1, 2]
    C[0, 1] = ((s[3] * a2 + s[4] * al) * rho_f + t[5] * a2 + t[6] * al) / beta
    C[2, 1] = ((s[5] + s[6] * a2 + s[7] * al) * rho_f
               + t[7] + t[8] * a2 + t[9] * al) / beta
    return DerivedStencil(C, scale_exponent=1, order=3)


def near_cross_order2(w1: float, w2: float,
                      a: tuple[float, float, float, float]) -> DerivedStencil:
    """Order-2 sign-safe block for a point diagonal to the cross.

    Canonical quadrant: the cross sits at (x_c - w1*h, y_c - w2*h).  All
    four corner weights vanish, so the far-corner panel never enters.
    """
    _check_positive(*a)
    _check_w(w1, w2)
    a1, a2, a3, _ = (Fraction(v) for v in a)
    w1, w2 = Fraction(w1), Fraction(w2)
    r = [
        2 * w2**2 - w2 + 1,
        -2 * w2**2 + w2 + 1,
        -2 * w1**2 + w1 + 1,
        2 * w1**2 - w1 + 1,
        -w2 * (2 * w1**2 - w1 - 1),
        (w2 - 1) * (2 * w1**2 - w1 - 1),
        w2 * (2 * w1**2 - w1 + 1),
        -(w2 - 1) * (2 * w1**2 - w1 + 1),
        -(2 * w2**2 - w2 + 1) * (w1 - 1),
        (2 * w2**2 - w2 - 1) * (w1 - 1),
        (2 * w2**2 - w2 + 1) * w1,
        -(2 * w2**2 - w2 - 1) * w1,
    ]
    s = [
        2 * (w1 - 1) * (w1 * w2 + w2**2 + w1 + 1),
        2 * (1 - w2) * (w1 - 1) * (w1 + w2 + 1),
        -2 * (w2 + 1) * w1**2 - 2 * (w2**2 - w2) * w1 - 2 * w2**2 - 2,
        2 * (w2 - 1) * (w1**2 + w1 * w2 + w2 + 1),
    ]
    beta = -(a1 * a2 * s[3] + a1 * a3 * s[2] + a2 ** 2 * s[1] + a2 * a3 * s[0])
    C = np.zeros((3, 3))
    C[1, 1] = 1.0
    C[0, 1] = -(a1 * a2 * r[1] + a1 * a3 * r[0]) / beta
    C[1, 0] = -(a1 * a3 * r[3] + a2 * a3 * r[2]) / beta
    C[1, 2] = -(a1 * a2 * r[7] + a1 * a3 * r[6] + a2**2 * r[5] + a2 * a3 * r[4]) / beta
    C[2, 1] = -(a1 * a2 * r[11] + a1 * a3 * r[10] + a2**2 * r[9] + a2 * a3 * r[8]) / beta
    return DerivedStencil(C, scale_exponent=1, order=2)


# ---------------------------------------------------------------------------
# Consistency systems and the null-space route to the same stencils.
#
# Every entry of these small systems is a rational number once the offsets
# and coefficients are (floats are exact rationals, factorials are
# integers), so the null space is computed with exact fraction arithmetic:
# rank decisions need no threshold and the coefficient ratios of up to
# ~1e12 that the target problems carry cannot wash out a pivot.
# ---------------------------------------------------------------------------

def _gamma_rows(M: int, w, ratio, gfun) -> list[list]:
    """Rows of the vertical-interface consistency system, generic field.

    ``ratio`` is a_plus / a_minus; the far column carries the flux-transfer
    factor ratio**m.  Columns follow (k, l) lexicographic order.
    """
    rows = []
    for m, n in lambda1_set(M):
        row = []
        for k in (-1, 0, 1):
            fac = ratio ** m if k == -1 else 1
            for l in (-1, 0, 1):
                row.append(fac * gfun(m, n, w + k, l))
        rows.append(row)
    return rows


def _cross_rows(M: int, w1, w2, a, include_corner_split: bool, gfun,
                ) -> list[list]:
    """Rows of the cross-point consistency system, generic field.

    Columns are the nine stencil weights in (k, l) lexicographic order; when
    ``include_corner_split`` is true a tenth column holds the second corner
    weight that routes the far-corner panel through the other pair of
    interface segments.
    """
    a1, a2, a3, a4 = a
    rows = []
    for m, n in lambda1_set(M):
        z = n + m - odd(n)
        sgn = (-1) ** (n // 2)
        row = []
        for k in (-1, 0, 1):
            for l in (-1, 0, 1):
                if k == -1 and l >= 0:
                    v = (a2 / a1) ** m * gfun(m, n, w1 + k, w2 + l)
                elif k >= 0 and l >= 0:
                    v = gfun(m, n, w1 + k, w2 + l)
                elif k >= 0 and l == -1:
                    v = sgn * (a2 / a3) ** odd(n) * gfun(odd(n), z, w2 - 1, w1 + k)
                else:  # (k, l) == (-1, -1)
                    v = (sgn * (a2 / a1) ** m * (a1 / a4) ** odd(n)
                         * gfun(odd(n), z, w2 - 1, w1 - 1))
                row.append(v)
        if include_corner_split:
            q = n - (-1) ** m * odd(n + m)
            row.append((-1) ** (n // 2 + q // 2) * (a2 / a3) ** odd(n)
                       * (a3 / a4) ** m * gfun(m, n, w1 - 1, w2 - 1))
        rows.append(row)
    return rows


def gamma_consistency_matrix(M: int, w: float, ratio: float) -> np.ndarray:
    """Float h-free consistency rows for a point near/on a vertical line."""
    return np.array(_gamma_rows(M, float(w), float(ratio), eval_G))


def cross_consistency_matrix(M: int, w1: float, w2: float,
                             a: tuple[float, float, float, float],
                             include_corner_split: bool) -> np.ndarray:
    """Float h-free consistency rows for a point near/on the cross."""
    return np.array(_cross_rows(M, float(w1), float(w2),
                                tuple(float(v) for v in a),
                                include_corner_split, eval_G))


def _eval_G_frac(m: int, n: int, x, y) -> Fraction:
    """Exact rational value of G_{m,n} at rational (x, y)."""
    x, y = Fraction(x), Fraction(y)
    return sum(
        ((-1) ** l * x ** (m + 2 * l) * y ** (n - 2 * l)
         / (_FACT[m + 2 * l] * _FACT[n - 2 * l])
         for l in range(n // 2 + 1)),
        start=Fraction(0),
    )


def _null_direction(rows: list[list[Fraction]]) -> np.ndarray:
    """The single null direction of an exact rational matrix.

    Gauss-Jordan elimination over the rationals; raises NoSolutionError
    when the matrix has full column rank and DegenerateStencilError when
    the null space has dimension above one.
    """
    nrow, ncol = len(rows), len(rows[0])
    A = [list(r) for r in rows]
    pivot_cols: list[int] = []
    r = 0
    for c in range(ncol):
        pivot = next((i for i in range(r, nrow) if A[i][c] != 0), None)
        if pivot is None:
            continue
        A[r], A[pivot] = A[pivot], A[r]
        pv = A[r][c]
        A[r] = [v / pv for v in A[r]]
        for i in range(nrow):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [vi - f * vr for vi, vr in zip(A[i], A[r])]
        pivot_cols.append(c)
        r += 1
        if r == nrow:
            break
    free_cols = [c for c in range(ncol) if c not in pivot_cols]
    if not free_cols:
        raise NoSolutionError(
            "consistency system has full column rank; no nontrivial stencil"
        )
    if len(free_cols) > 1:
        raise DegenerateStencilError(
            f"consistency system null space has dimension {len(free_cols)}"
        )
    free = free_cols[0]
    v = [Fraction(0)] * ncol
    v[free] = Fraction(1)
    for prow, pcol in enumerate(pivot_cols):
        v[pcol] = -A[prow][free]
    return np.array([float(x) for x in v])


def derive_by_nullspace(case: str, M: int, *, w: float = 0.0,
                        w1: float = 0.0, w2: float = 0.0,
                        a: tuple[float, float, float, float] | None = None,
                        a_minus: float | None = None,
                        a_plus: float | None = None) -> DerivedStencil:
    """Re-derive a stencil from its consistency system's null space.

    ``case`` selects the system: ``"gamma"`` (vertical interface, on-line
    for w=0 or offset w), ``"cross"`` (point on the cross) and
    ``"near_cross"`` (cross at offsets w1, w2, with the split corner
    unknown).  Used as an independent cross-check of the closed forms.
    """
    if case == "gamma":
        if a_minus is None or a_plus is None:
            raise ValueError("gamma case needs a_minus and a_plus")
        ratio = Fraction(a_plus) / Fraction(a_minus)
        rows = _gamma_rows(M, Fraction(w), ratio, _eval_G_frac)
        v = _null_direction(rows)
        return DerivedStencil(v.reshape(3, 3), scale_exponent=1, order=M)
    if a is None:
        raise ValueError(f"{case} case needs the four coefficients")
    afrac = tuple(Fraction(v) for v in a)
    if case == "cross":
        rows = _cross_rows(M, Fraction(0), Fraction(0), afrac, False,
                           _eval_G_frac)
        v = _null_direction(rows)
        return DerivedStencil(v.reshape(3, 3), scale_exponent=1, order=M)
    if case == "near_cross":
        rows = _cross_rows(M, Fraction(w1), Fraction(w2), afrac, True,
                           _eval_G_frac)
        try:
            v = _null_direction(rows)
        except DegenerateStencilError:
            # With equal coefficients the two expansion routes to the far
            # corner coincide and only the SUM of the two corner weights is
            # determined; pin the second one to zero and resolve.
            pin = [Fraction(0)] * 10
            pin[9] = Fraction(1)
            v = _null_direction(rows + [pin])
        if abs(v[4]) < 1e-14 * np.max(np.abs(v)):
            raise DegenerateStencilError("null direction has zero center weight")
        v = v / v[4]  # normalize the center weight to 1
        C = v[:9].reshape(3, 3).copy()
        c_corner, c_tilde = C[0, 0], v[9]
        C[0, 0] = c_corner + c_tilde
        return DerivedStencil(C, scale_exponent=1, order=M,
                              split=(c_corner, c_tilde))
    raise ValueError(f"unknown case {case!r}")


def near_cross_order4(w1: float, w2: float,
                      a: tuple[float, float, float, float]) -> DerivedStencil:
    """Order-4 block for a point diagonal to the cross (canonical quadrant).

    No closed form exists; the block is the unique null direction of the
    order-4 consistency system with the far corner split over the two
    expansion routes that reach it.
    """
    _check_positive(*a)
    _check_w(w1, w2)
    return derive_by_nullspace("near_cross", 4, w1=w1, w2=w2, a=a)


# ---------------------------------------------------------------------------
# Symmetry transforms and the sign/summation conditions.
# ---------------------------------------------------------------------------

_TRANSFORMS = {
    "identity": lambda C: C,
    "reflect-x": lambda C: C[::-1, :],
    "reflect-y": lambda C: C[:, ::-1],
    "reflect-xy": lambda C: C[::-1, ::-1],
    "transpose": lambda C: C.T,
    # transpose composed with a reflection of the new x axis: used for a
    # horizontal interface lying above the point
    "transpose-reflect": lambda C: C.T[:, ::-1],
}


def apply_symmetry(st: DerivedStencil, transform: str) -> DerivedStencil:
    """Re-index a stencil block under a reflection or transposition."""
    try:
        f = _TRANSFORMS[transform]
    except KeyError:
        raise ValueError(f"unknown transform {transform!r}") from None
    return DerivedStencil(np.ascontiguousarray(f(st.weights)),
                          st.scale_exponent, st.order, st.split)


def format_stencil(st: DerivedStencil, fmt: str = "text") -> str:
    """Render a 3x3 block for inspection, y axis pointing up.

    ``fmt`` is "text" (padded columns) or "csv" (one line per l-row).
    """
    rows = [[st.weights[k + 1, l + 1] for k in (-1, 0, 1)] for l in (1, 0, -1)]
    if fmt == "csv":
        return "\n".join(",".join(repr(v) for v in row) for row in rows) + "\n"
    if fmt == "text":
        lines = [" ".join(f"{v:>14.6g}" for v in row) for row in rows]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def check_conditions(weights: np.ndarray, tol: float = 1e-12
                     ) -> tuple[bool, bool, float, float]:
    """Sign and summation conditions of the maximum-principle analysis.

    Returns (sign_ok, sum_ok, worst_off_center, row_sum) where
    ``worst_off_center`` is the largest off-center weight (should be <= 0)
    and ``row_sum`` the total (should vanish).  Tolerances are relative to
    the block's magnitude.
    """
    scale = float(np.max(np.abs(weights)))
    off = weights.copy()
    off[1, 1] = -np.inf
    worst = float(np.max(off))
    sign_ok = weights[1, 1] > 0 and worst <= tol * scale
    row_sum = float(np.sum(weights))
    sum_ok = abs(row_sum) <= tol * max(1.0, scale)
    return sign_ok, sum_ok, worst, row_sum
