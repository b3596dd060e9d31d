import math

import numpy as np
import pytest

from crossfd.assembly import build_row, stencil_point_panel
from crossfd.problems import make_example


@pytest.fixture(scope="session")
def ex41():
    return make_example("ex41")


@pytest.fixture(scope="session")
def ex44():
    return make_example("ex44")


@pytest.fixture(scope="session")
def smooth():
    return make_example("smooth")


def relative_row_residual(problem, grid, cls, i, j, scheme):
    """|L_h u - F| over the row's own magnitude, exact u per panel."""
    W, load, _ = build_row(problem, grid, cls, i, j, scheme)
    x, y, h = grid.x(i), grid.y(j), grid.h
    terms = [-load.value]
    mags = [abs(load.value)]
    for k in (-1, 0, 1):
        for l in (-1, 0, 1):
            p = stencil_point_panel(problem, cls, k, l, x + k * h, y + l * h)
            u = float(problem.u_deriv(p, 0, 0, x + k * h, y + l * h))
            terms.append(W[k + 1, l + 1] * u)
            mags.append(abs(W[k + 1, l + 1] * u))
    return abs(math.fsum(terms)) / max(max(mags), 1e-300)


def fitted_slope(levels):
    """Least-squares log2 slope of (J, residual) pairs."""
    Js = np.array([J for J, _ in levels], dtype=float)
    rs = np.array([max(r, 1e-300) for _, r in levels])
    return float(-np.polyfit(Js, np.log2(rs), 1)[0])
