"""Domain, uniform grid, interface geometry and grid-point classification.

The domain is a rectangle split into four panels by one vertical and one
horizontal interface line crossing at (xi, zeta).  Panels are numbered
counterclockwise from the upper left:

    1 | 2        interface segments:  1 vertical above the cross,
    --+--  zeta                       2 vertical below,
    4 | 3                             3 horizontal right,
      xi                              4 horizontal left.

Every grid point is classified into the stencil case it needs.  The
classification fixes the orientation conventions once: the stencil and
right-hand-side builders only ever see a canonical case together with the
offsets and the transform that maps it back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import MixedAlignmentError

__all__ = [
    "Domain",
    "Grid",
    "InterfaceMode",
    "PointKind",
    "PointClass",
    "build_grid",
    "classify",
    "mode",
    "subdomain_of",
]

# A coordinate counts as "on" a grid line when its fractional offset is
# below this, scaled by the coordinate's own magnitude in units of h.
# Dyadic cross points then classify exactly aligned for every dyadic h,
# irrational ones never do, and near-degenerate offsets (which the
# unaligned stencil theory does not cover) are refused instead of kept.
ALIGN_TOL = 1e-12


@dataclass(frozen=True)
class Domain:
    """Rectangle (l1, l2) x (l3, l4) with the interface cross at (xi, zeta).

    The height must be an integer multiple of the width so one spacing h
    serves both directions.
    """

    l1: float
    l2: float
    l3: float
    l4: float
    xi: float
    zeta: float

    def __post_init__(self):
        if not (self.l1 < self.xi < self.l2):
            raise ValueError(f"xi={self.xi} outside ({self.l1}, {self.l2})")
        if not (self.l3 < self.zeta < self.l4):
            raise ValueError(f"zeta={self.zeta} outside ({self.l3}, {self.l4})")
        ratio = (self.l4 - self.l3) / (self.l2 - self.l1)
        if ratio < 1 - ALIGN_TOL or abs(ratio - round(ratio)) > ALIGN_TOL * max(1.0, ratio):
            raise ValueError(
                f"domain height must be a positive integer multiple of its "
                f"width, got ratio {ratio}"
            )

    @property
    def aspect(self) -> int:
        """Height as an integer number of widths."""
        return round((self.l4 - self.l3) / (self.l2 - self.l1))


@dataclass(frozen=True)
class Grid:
    """Uniform Cartesian grid with n1 cells across and n2 = aspect*n1 up."""

    domain: Domain
    n1: int
    n2: int
    h: float

    def x(self, i) -> float:
        return self.domain.l1 + i * self.h

    def y(self, j) -> float:
        return self.domain.l3 + j * self.h

    def xs(self) -> np.ndarray:
        return self.domain.l1 + self.h * np.arange(self.n1 + 1)

    def ys(self) -> np.ndarray:
        return self.domain.l3 + self.h * np.arange(self.n2 + 1)


class InterfaceMode(Enum):
    ALIGNED = "aligned"
    UNALIGNED = "unaligned"


class PointKind(Enum):
    BOUNDARY = "boundary"
    INTERIOR = "interior"
    ON_GAMMA = "on_gamma"
    ON_CROSS = "on_cross"
    NEAR_GAMMA_V = "near_gamma_v"
    NEAR_GAMMA_H = "near_gamma_h"
    NEAR_CROSS = "near_cross"


@dataclass(frozen=True)
class PointClass:
    """Classification of one grid point.

    ``subdomain``  panel index for INTERIOR points.
    ``gamma``      interface segment (1..4) for ON_GAMMA and NEAR_GAMMA_*.
    ``side``       for NEAR_GAMMA_*: -1 when the interface lies toward
                   smaller coordinate (west of the point for a vertical
                   line, south for a horizontal one), +1 otherwise.
    ``w``          near-interface offset as a fraction of h, in (0, 1).
    ``quadrant``   for NEAR_CROSS: panel containing the point.
    ``w1, w2``     near-cross offsets |x - xi|/h and |y - zeta|/h.
    """

    kind: PointKind
    subdomain: int | None = None
    gamma: int | None = None
    side: int | None = None
    w: float | None = None
    quadrant: int | None = None
    w1: float | None = None
    w2: float | None = None


def build_grid(domain: Domain, n1: int) -> Grid:
    """Grid with n1 cells across the width; the height gets aspect*n1."""
    if n1 < 2:
        raise ValueError(f"n1 must be at least 2, got {n1}")
    h = (domain.l2 - domain.l1) / n1
    n2 = domain.aspect * n1
    return Grid(domain=domain, n1=n1, n2=n2, h=h)


def _line_offset(coord: float, origin: float, h: float) -> tuple[float, bool]:
    """Fractional grid offset of a coordinate and whether it is on a line.

    Returns (frac, aligned) with frac in [0, 1) measured from the grid line
    below; ``aligned`` uses the magnitude-aware tolerance so exact dyadic
    data stays exact and irrational coordinates never round onto the grid.
    """
    t = (coord - origin) / h
    frac = t - math.floor(t)
    tol = ALIGN_TOL * max(1.0, abs(coord) / h)
    if frac < tol or frac > 1.0 - tol:
        return frac, True
    return frac, False


def mode(grid: Grid) -> InterfaceMode:
    """Whether both interface lines lie on grid lines, or neither does."""
    d = grid.domain
    _, ax = _line_offset(d.xi, d.l1, grid.h)
    _, ay = _line_offset(d.zeta, d.l3, grid.h)
    if ax and ay:
        return InterfaceMode.ALIGNED
    if not ax and not ay:
        return InterfaceMode.UNALIGNED
    which = "vertical" if ax else "horizontal"
    raise MixedAlignmentError(
        f"only the {which} interface line falls on grid lines at h={grid.h}; "
        "half-aligned crosses are not supported"
    )


def subdomain_of(xi: float, zeta: float, x: float, y: float) -> int:
    """Panel index of a point, with on-line ties resolved toward +x/+y.

    The tie rule matches the one-sided limits the aligned scheme uses as
    nodal values on the interface, so a single helper serves both exact
    solution evaluation and stencil-point branch selection.
    """
    east = x >= xi
    north = y >= zeta
    if north:
        return 2 if east else 1
    return 3 if east else 4


def classify(grid: Grid, i: int, j: int) -> PointClass:
    """Classify grid point (i, j) into the stencil case it requires."""
    if not (0 <= i <= grid.n1 and 0 <= j <= grid.n2):
        raise IndexError(f"grid index ({i}, {j}) out of range")
    if i == 0 or i == grid.n1 or j == 0 or j == grid.n2:
        return PointClass(PointKind.BOUNDARY)
    d = grid.domain
    gmode = mode(grid)
    x, y = grid.x(i), grid.y(j)
    if gmode is InterfaceMode.ALIGNED:
        i_xi = round((d.xi - d.l1) / grid.h)
        j_zeta = round((d.zeta - d.l3) / grid.h)
        on_v, on_h = i == i_xi, j == j_zeta
        if on_v and on_h:
            return PointClass(PointKind.ON_CROSS)
        if on_v:
            return PointClass(PointKind.ON_GAMMA, gamma=1 if y > d.zeta else 2)
        if on_h:
            return PointClass(PointKind.ON_GAMMA, gamma=3 if x > d.xi else 4)
        return PointClass(PointKind.INTERIOR,
                          subdomain=subdomain_of(d.xi, d.zeta, x, y))
    # Unaligned: both lines run strictly between grid lines.
    dx = (d.xi - x) / grid.h
    dy = (d.zeta - y) / grid.h
    near_v, near_h = abs(dx) < 1.0, abs(dy) < 1.0
    if near_v and near_h:
        quadrant = subdomain_of(d.xi, d.zeta, x, y)
        return PointClass(PointKind.NEAR_CROSS, quadrant=quadrant,
                          w1=abs(dx), w2=abs(dy))
    if near_v:
        return PointClass(PointKind.NEAR_GAMMA_V,
                          gamma=1 if y > d.zeta else 2,
                          side=-1 if dx < 0 else 1, w=abs(dx))
    if near_h:
        return PointClass(PointKind.NEAR_GAMMA_H,
                          gamma=3 if x > d.xi else 4,
                          side=-1 if dy < 0 else 1, w=abs(dy))
    return PointClass(PointKind.INTERIOR,
                      subdomain=subdomain_of(d.xi, d.zeta, x, y))
