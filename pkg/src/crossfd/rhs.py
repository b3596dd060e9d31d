"""Row loads: the scalar right-hand side of each scheme row.

Every load builder works in a canonical local frame:

* interface rows: vertical line at x* = x_center - w*h, far side to the
  left (w = 0 when the point sits on the line);
* cross rows: intersection at (x_center - w1*h, y_center - w2*h), i.e. in
  the lower-left stencil quadrant.

Mirrored and transposed orientations are handled on the data, not in the
formulas: :func:`gather_interface_data` and :func:`gather_cross_data`
express the problem's derivative tables in the local frame (reflections
negate odd derivative orders, swap panel labels and flip the sign of the
solution jump; the flux jump is invariant because the normal flips together
with the differentiation direction).  The scalar load is frame-invariant,
so only the stencil block needs re-indexing afterwards.

Load values follow one convention: ``RowLoad.value`` is the right-hand
side of the *unscaled* row equation  L_h u = value; assembly divides both
sides by h**scale_exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import MissingDerivativeError
from .mesh import Grid, PointClass, PointKind
from .problems import ProblemSpec
from .stencils import DerivedStencil
from .taylor import (agg_quadrant, agg_vertical, eval_G, eval_H,
                     lambda1_set, lambda_set, odd)

__all__ = [
    "RowLoad",
    "InterfaceData",
    "CrossData",
    "reflect_interface_data",
    "reflect_cross_data",
    "gather_interface_data",
    "gather_cross_data",
    "interior_load",
    "gamma_load",
    "near_gamma_order4_load",
    "near_gamma_order3_load",
    "cross_load",
    "near_cross_order4_load",
    "near_cross_order2_load",
]


@dataclass(frozen=True)
class RowLoad:
    """Unscaled row right-hand side and the row's h-power."""

    value: float
    scale_exponent: int


@dataclass(frozen=True)
class InterfaceData:
    """Two-sided derivative data in the canonical vertical frame.

    ``f_minus``/``f_plus`` map (m, n) to source derivatives at the
    interface point on the far and the center side; ``phi``/``psi`` map n
    to jump derivatives along the line.
    """

    w: float
    h: float
    a_minus: float
    a_plus: float
    f_minus: dict
    f_plus: dict
    phi: dict
    psi: dict


@dataclass(frozen=True)
class CrossData:
    """Four-panel derivative data in the canonical cross frame.

    Panel and segment labels follow the canonical layout (cross lower-left
    of the center, center in panel 2).  ``f[p]`` maps (m, n) to source
    derivatives at the cross; ``phi[p]``/``psi[p]`` map n to jump
    derivatives of segment p at the cross.
    """

    w1: float
    w2: float
    h: float
    a: tuple
    f: dict
    phi: dict
    psi: dict


def reflect_interface_data(d: InterfaceData) -> InterfaceData:
    """Mirror the local frame about the center (x -> -x).

    Sides swap, odd x-derivatives change sign, the solution jump reverses,
    the flux jump is invariant (normal and derivative flip together).
    """
    flip = lambda tab: {(m, n): (-1.0) ** m * v for (m, n), v in tab.items()}
    return InterfaceData(
        w=d.w, h=d.h, a_minus=d.a_plus, a_plus=d.a_minus,
        f_minus=flip(d.f_plus), f_plus=flip(d.f_minus),
        phi={n: -v for n, v in d.phi.items()},
        psi=dict(d.psi),
    )


def _reflect_cross(d: CrossData, axis: str) -> CrossData:
    """Mirror the local cross frame about one axis through the center."""
    if axis == "x":
        relabel = {1: 2, 2: 1, 3: 4, 4: 3}
        parity = lambda m, n: (-1.0) ** m
        # vertical segments keep their place but the jump reverses; the
        # horizontal segments trade places and their parameter reverses
        phi = {1: {n: -v for n, v in d.phi[1].items()},
               2: {n: -v for n, v in d.phi[2].items()}}
        psi = {1: dict(d.psi[1]), 2: dict(d.psi[2])}
        phi[3] = {n: (-1.0) ** n * v for n, v in d.phi[4].items()}
        phi[4] = {n: (-1.0) ** n * v for n, v in d.phi[3].items()}
        psi[3] = {n: (-1.0) ** n * v for n, v in d.psi[4].items()}
        psi[4] = {n: (-1.0) ** n * v for n, v in d.psi[3].items()}
    else:
        relabel = {1: 4, 2: 3, 3: 2, 4: 1}
        parity = lambda m, n: (-1.0) ** n
        phi = {3: {n: -v for n, v in d.phi[3].items()},
               4: {n: -v for n, v in d.phi[4].items()}}
        psi = {3: dict(d.psi[3]), 4: dict(d.psi[4])}
        phi[1] = {n: (-1.0) ** n * v for n, v in d.phi[2].items()}
        phi[2] = {n: (-1.0) ** n * v for n, v in d.phi[1].items()}
        psi[1] = {n: (-1.0) ** n * v for n, v in d.psi[2].items()}
        psi[2] = {n: (-1.0) ** n * v for n, v in d.psi[1].items()}
    a = tuple(d.a[relabel[p] - 1] for p in (1, 2, 3, 4))
    f = {p: {(m, n): parity(m, n) * v
             for (m, n), v in d.f[relabel[p]].items()}
         for p in (1, 2, 3, 4)}
    return CrossData(w1=d.w1, w2=d.w2, h=d.h, a=a, f=f, phi=phi, psi=psi)


def reflect_cross_data(d: CrossData, quadrant: int) -> CrossData:
    """Map globally-labelled cross data into the frame of a given quadrant.

    ``quadrant`` is the panel containing the stencil center; panel 2 is the
    canonical one (identity).
    """
    if quadrant == 2:
        return d
    if quadrant == 1:
        return _reflect_cross(d, "x")
    if quadrant == 3:
        return _reflect_cross(d, "y")
    if quadrant == 4:
        return _reflect_cross(_reflect_cross(d, "x"), "y")
    raise ValueError(f"quadrant must be 1..4, got {quadrant}")


# Segment geometry: (far panel, near panel) in the segment's own frame,
# where "near" is the side the jump's plus limit comes from.
_SEGMENT_SIDES = {1: (1, 2), 2: (4, 3), 3: (3, 2), 4: (4, 1)}


def _f_table(problem, p, x, y, order, swap):
    tab = {}
    for m, n in lambda_set(order):
        v = problem.f_deriv(p, n, m, x, y) if swap else \
            problem.f_deriv(p, m, n, x, y)
        tab[(m, n)] = float(v)
    return tab


def gather_interface_data(problem: ProblemSpec, grid: Grid, cls: PointClass,
                          i: int, j: int, M: int) -> InterfaceData:
    """Local-frame data for an on- or near-interface row of order M.

    Source tables are filled to total order M-2, the solution jump to M and
    the flux jump to M-1, exactly what the order-M load formula consumes.
    """
    d = grid.domain
    x, y = grid.x(i), grid.y(j)
    vertical = cls.kind in (PointKind.ON_GAMMA, PointKind.NEAR_GAMMA_V) \
        and cls.gamma in (1, 2)
    if cls.kind == PointKind.ON_GAMMA:
        w, side = 0.0, -1
        xs, ys = (d.xi, y) if vertical else (x, d.zeta)
    elif cls.kind == PointKind.NEAR_GAMMA_V:
        w, side = cls.w, cls.side
        xs, ys = d.xi, y
    elif cls.kind == PointKind.NEAR_GAMMA_H:
        w, side = cls.w, cls.side
        xs, ys = x, d.zeta
    else:
        raise ValueError(f"not an interface point class: {cls}")
    far, near = _SEGMENT_SIDES[cls.gamma]
    t = ys if vertical else xs
    data = InterfaceData(
        w=w, h=grid.h,
        a_minus=problem.a[far - 1], a_plus=problem.a[near - 1],
        f_minus=_f_table(problem, far, xs, ys, M - 2, swap=not vertical),
        f_plus=_f_table(problem, near, xs, ys, M - 2, swap=not vertical),
        phi={n: float(problem.phi_deriv(cls.gamma, n, t)) for n in range(M + 1)},
        psi={n: float(problem.psi_deriv(cls.gamma, n, t)) for n in range(M)},
    )
    if side > 0:
        data = reflect_interface_data(data)
    return data


def gather_cross_data(problem: ProblemSpec, grid: Grid, cls: PointClass,
                      M: int) -> CrossData:
    """Local-frame data for the cross row or a near-cross row of order M."""
    xi, zeta = problem.xi, problem.zeta
    if cls.kind == PointKind.ON_CROSS:
        w1 = w2 = 0.0
        quadrant = 2
    elif cls.kind == PointKind.NEAR_CROSS:
        w1, w2, quadrant = cls.w1, cls.w2, cls.quadrant
    else:
        raise ValueError(f"not a cross point class: {cls}")
    f = {p: _f_table(problem, p, xi, zeta, M - 2, swap=False)
         for p in (1, 2, 3, 4)}
    phi = {}
    psi = {}
    for p in (1, 2, 3, 4):
        t = zeta if p in (1, 2) else xi
        phi[p] = {n: float(problem.phi_deriv(p, n, t)) for n in range(M + 1)}
        psi[p] = {n: float(problem.psi_deriv(p, n, t)) for n in range(M)}
    data = CrossData(w1=w1, w2=w2, h=grid.h, a=problem.a,
                     f=f, phi=phi, psi=psi)
    return reflect_cross_data(data, quadrant)


# ---------------------------------------------------------------------------
# Load builders.
# ---------------------------------------------------------------------------

def interior_load(f_table: dict, a_value: float, h: float) -> RowLoad:
    """Order-6 interior load from source derivatives at the grid point.

    ``f_table`` must contain (0,0), (2,0), (0,2), (4,0), (0,4), (2,2).
    """
    try:
        F = (6.0 * f_table[(0, 0)]
             + 0.5 * h * h * (f_table[(2, 0)] + f_table[(0, 2)])
             + h**4 / 60.0 * (f_table[(4, 0)] + f_table[(0, 4)])
             + h**4 / 15.0 * f_table[(2, 2)])
    except KeyError as missing:
        raise MissingDerivativeError(
            f"interior load needs source derivative {missing}") from None
    return RowLoad(value=h * h * F / a_value, scale_exponent=2)


def _require(tab: dict, keys, what: str):
    missing = [k for k in keys if k not in tab]
    if missing:
        raise MissingDerivativeError(f"{what} table missing orders {missing}")


def _interface_F(data: InterfaceData, C: np.ndarray, M: int) -> float:
    """Shared order-M interface load in the canonical vertical frame."""
    fkeys = lambda_set(M - 2)
    _require(data.f_minus, fkeys, "far-side source")
    _require(data.f_plus, fkeys, "near-side source")
    _require(data.phi, range(M + 1), "solution jump")
    _require(data.psi, range(M), "flux jump")
    w, h = data.w, data.h
    terms = []
    for m, n in fkeys:
        terms.append(data.f_minus[(m, n)] / data.a_minus
                     * agg_vertical(C, m, n, w, h, "Hminus"))
        terms.append(data.f_plus[(m, n)] / data.a_plus
                     * agg_vertical(C, m, n, w, h, "Hplus"))
    for n in range(M + 1):
        terms.append(-data.phi[n] * agg_vertical(C, 0, n, w, h, "G"))
    for n in range(M):
        terms.append(-data.psi[n] / data.a_minus
                     * agg_vertical(C, 1, n, w, h, "G"))
    return math.fsum(terms)


def gamma_load(data: InterfaceData, st: DerivedStencil) -> RowLoad:
    """Order-7 load for a grid point on an interface segment (w = 0)."""
    return RowLoad(_interface_F(data, st.weights, 7), st.scale_exponent)


def near_gamma_order4_load(data: InterfaceData, st: DerivedStencil) -> RowLoad:
    """Order-4 load for a point one cell away from an interface line."""
    return RowLoad(_interface_F(data, st.weights, 4), st.scale_exponent)


def near_gamma_order3_load(data: InterfaceData, st: DerivedStencil) -> RowLoad:
    """Order-3 load paired with the sign-safe near-interface block."""
    return RowLoad(_interface_F(data, st.weights, 3), st.scale_exponent)


def _cross_F(data: CrossData, C: np.ndarray, M: int,
             split: tuple[float, float] | None) -> float:
    """Shared order-M cross load in the canonical frame.

    When ``split`` is given, the far-corner weight is split into the part
    routed through segments 1/4 (first component, used by the plain corner
    aggregates) and the part routed through segments 2/3 (second component,
    used by the tilde terms carrying the other segments' data).
    """
    a1, a2, a3, a4 = data.a
    w1, w2, h = data.w1, data.w2, data.h
    f, phi, psi = data.f, data.phi, data.psi
    fkeys = lambda_set(M - 2)
    for p in (1, 2, 3, 4):
        _require(f[p], fkeys, f"panel {p} source")
        _require(phi[p], range(M + 1), f"segment {p} solution jump")
        _require(psi[p], range(M), f"segment {p} flux jump")

    if split is None:
        c_corner, c_tilde = C[0, 0], 0.0
    else:
        c_corner, c_tilde = split
    C4 = np.array(C)
    C4[0, 0] = c_corner

    def Gq(p, m, n):
        return agg_quadrant(C4 if p == 4 else C, p, m, n, w1, w2, h, "G")

    def Hq(p, m, n):
        return agg_quadrant(C4 if p == 4 else C, p, m, n, w1, w2, h, "H")

    # Tilde kernels: the corner reached through segments 2/3 keeps the
    # vertical-frame kernel orientation (no index/argument swap).
    def Gt(m, n):
        return c_tilde * eval_G(m, n, w1 - 1.0, w2 - 1.0) * h ** (m + n)

    def Ht(m, n):
        return c_tilde * eval_H(m, n, w1 - 1.0, w2 - 1.0) * h ** (m + n + 2)

    terms = []
    # plain source sums over all four panels (plus the tilde corner route)
    for m, n in fkeys:
        for p in (1, 2, 3, 4):
            terms.append(f[p][(m, n)] / data.a[p - 1] * Hq(p, m, n))
        if c_tilde != 0.0:
            terms.append(f[4][(m, n)] / a4 * Ht(m, n))
    # derivative-transfer chains entering through the lower panels; the
    # pair (nn, mm) runs over swapped index order, nn in {0, 1}
    for nn, mm in lambda1_set(M):
        g3 = Gq(3, mm, nn)
        g4 = Gq(4, mm, nn)
        sgn = -(-1.0) ** (mm // 2)
        if mm >= 2:
            s2 = math.fsum((-1.0) ** s * f[2][(mm - 2 * s, nn + 2 * s - 2)]
                           for s in range(1, mm // 2 + 1))
            s1 = math.fsum((-1.0) ** s * f[1][(mm - 2 * s, nn + 2 * s - 2)]
                           for s in range(1, mm // 2 + 1))
            terms.append(s2 / a2 * (a2 / a3) ** nn * g3)
            terms.append(s1 / a1 * (a1 / a4) ** nn * g4)
        if odd(mm + 1):
            terms.append(sgn * phi[1][mm + nn] * (a1 / a4) ** nn * g4)
        if odd(mm):
            terms.append(sgn * psi[1][mm + nn - 1] / a1 * (a1 / a4) ** nn * g4)
    # plain jump sums
    for m in range(M + 1):
        terms.append(-phi[1][m] * Gq(1, 0, m))
        terms.append(-phi[3][m] * Gq(3, m, 0))
        terms.append(-phi[4][m] * Gq(4, m, 0))
        if c_tilde != 0.0:
            terms.append(-phi[2][m] * Gt(0, m))
    for m in range(M):
        terms.append(-psi[1][m] / a1 * Gq(1, 1, m))
        terms.append(-psi[3][m] / a3 * Gq(3, m, 1))
        terms.append(-psi[4][m] / a4 * Gq(4, m, 1))
        if c_tilde != 0.0:
            terms.append(-psi[2][m] / a4 * Gt(1, m))
    # chains entering through the tilde corner route (segments 2/3 data)
    if c_tilde != 0.0:
        for m, n in lambda1_set(M):
            q = n - (-1) ** m * odd(n + m)
            gt = Gt(m, n)
            fac = (a3 / a4) ** m
            if q >= 2:
                sf2 = math.fsum(
                    (-1.0) ** (s + n // 2) * f[2][(q - 2 * s, odd(n) + 2 * s - 2)]
                    for s in range(1, q // 2 + 1))
                terms.append(sf2 / a2 * (a2 / a3) ** odd(n) * fac * gt)
            if n >= 2:
                sf3 = math.fsum((-1.0) ** s * f[3][(m + 2 * s - 2, n - 2 * s)]
                                for s in range(1, n // 2 + 1))
                terms.append(sf3 / a3 * fac * gt)
            sgn = -(-1.0) ** (n // 2)
            if odd(n + 1):
                terms.append(sgn * phi[3][m + n] * fac * gt)
            if odd(n):
                terms.append(sgn * psi[3][m + n - 1] / a3 * fac * gt)
    return math.fsum(terms)


def cross_load(data: CrossData, st: DerivedStencil) -> RowLoad:
    """Order-7 load for the grid point on the cross (w1 = w2 = 0)."""
    return RowLoad(_cross_F(data, st.weights, 7, split=None),
                   st.scale_exponent)


def near_cross_order4_load(data: CrossData, st: DerivedStencil) -> RowLoad:
    """Order-4 load for a point diagonal to the cross, using the corner split."""
    if st.split is None:
        raise ValueError("near-cross order-4 load needs the corner split")
    return RowLoad(_cross_F(data, st.weights, 4, split=st.split),
                   st.scale_exponent)


def near_cross_order2_load(data: CrossData, st: DerivedStencil) -> RowLoad:
    """Order-2 load paired with the sign-safe near-cross block."""
    return RowLoad(_cross_F(data, st.weights, 2, split=None),
                   st.scale_exponent)
