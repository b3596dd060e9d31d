import math

import numpy as np
import pytest

from crossfd.errors import MixedAlignmentError
from crossfd.mesh import (Domain, InterfaceMode, PointKind, build_grid,
                          classify, mode, subdomain_of)


def test_build_grid_unit_square():
    g = build_grid(Domain(0, 1, 0, 1, 0.5, 0.5), 8)
    assert g.h == 0.125
    assert g.n2 == 8
    assert np.allclose(g.xs(), np.arange(9) / 8)


def test_build_grid_tall_domain():
    g = build_grid(Domain(0, 1, 0, 2, 0.5, 1.0), 4)
    assert g.n2 == 8
    assert g.h == 0.25
    # both spacings agree to rounding
    assert abs((g.domain.l4 - g.domain.l3) / g.n2 - g.h) <= 4 * np.finfo(float).eps


def test_build_grid_rejects_non_integer_aspect():
    with pytest.raises(ValueError):
        Domain(0, 1, 0, 1.5, 0.5, 0.75)


def test_build_grid_rejects_tiny_n1():
    with pytest.raises(ValueError):
        build_grid(Domain(0, 1, 0, 1, 0.5, 0.5), 1)


def test_domain_validates_cross_location():
    with pytest.raises(ValueError):
        Domain(0, 1, 0, 1, 1.5, 0.5)
    with pytest.raises(ValueError):
        Domain(0, 1, 0, 1, 0.5, 0.0)


def test_mode_aligned_and_unaligned():
    d_al = Domain(0, 1, 0, 1, 0.5, 0.5)
    assert mode(build_grid(d_al, 32)) is InterfaceMode.ALIGNED
    d_un = Domain(0, 1, 0, 1, math.pi / 5, math.pi / 8)
    assert mode(build_grid(d_un, 32)) is InterfaceMode.UNALIGNED


def test_mode_mixed_alignment_rejected():
    d = Domain(0, 1, 0, 1, 0.5, math.pi / 8)
    with pytest.raises(MixedAlignmentError):
        mode(build_grid(d, 32))
    with pytest.raises(MixedAlignmentError):
        classify(build_grid(d, 32), 3, 3)


def test_classify_aligned_cases():
    g = build_grid(Domain(0, 1, 0, 1, 0.5, 0.5), 8)
    assert classify(g, 4, 4).kind is PointKind.ON_CROSS
    c = classify(g, 4, 6)
    assert c.kind is PointKind.ON_GAMMA and c.gamma == 1
    c = classify(g, 4, 2)
    assert c.kind is PointKind.ON_GAMMA and c.gamma == 2
    c = classify(g, 6, 4)
    assert c.kind is PointKind.ON_GAMMA and c.gamma == 3
    c = classify(g, 2, 4)
    assert c.kind is PointKind.ON_GAMMA and c.gamma == 4
    c = classify(g, 2, 6)
    assert c.kind is PointKind.INTERIOR and c.subdomain == 1
    assert classify(g, 0, 3).kind is PointKind.BOUNDARY
    assert classify(g, 3, 8).kind is PointKind.BOUNDARY


def test_classify_unaligned_near_gamma_offsets():
    xi, zeta = math.pi / 5, math.pi / 8
    g = build_grid(Domain(0, 1, 0, 1, xi, zeta), 16)
    # the column just west of the vertical line, far from the cross
    i = int(xi / g.h)
    j = 12
    assert abs(g.y(j) - zeta) >= g.h
    c = classify(g, i, j)
    assert c.kind is PointKind.NEAR_GAMMA_V
    assert c.side == 1 and c.gamma == 1
    assert c.w == pytest.approx((xi - g.x(i)) / g.h)
    c_east = classify(g, i + 1, j)
    assert c_east.kind is PointKind.NEAR_GAMMA_V and c_east.side == -1
    assert c_east.w == pytest.approx((g.x(i + 1) - xi) / g.h)
    assert c.w + c_east.w == pytest.approx(1.0)


def test_classify_unaligned_near_cross():
    xi, zeta = math.pi / 5, math.pi / 8
    g = build_grid(Domain(0, 1, 0, 1, xi, zeta), 16)
    i, j = int(xi / g.h), int(zeta / g.h)
    quads = {}
    for di in (0, 1):
        for dj in (0, 1):
            c = classify(g, i + di, j + dj)
            assert c.kind is PointKind.NEAR_CROSS
            quads[c.quadrant] = (c.w1, c.w2)
    assert set(quads) == {1, 2, 3, 4}
    # offsets pair up across the cross
    assert quads[2][0] + quads[1][0] == pytest.approx(1.0)
    assert quads[2][1] + quads[3][1] == pytest.approx(1.0)


def test_partition_property():
    """Every interior point gets exactly one class; the counts add up."""
    for dom, n1 in ((Domain(0, 1, 0, 1, 0.5, 0.5), 8),
                    (Domain(0, 1, 0, 1, math.pi / 5, math.pi / 8), 12),
                    (Domain(0, 1, 0, 2, 0.25, 1.25), 8)):
        g = build_grid(dom, n1)
        counts = {}
        for j in range(1, g.n2):
            for i in range(1, g.n1):
                kind = classify(g, i, j).kind
                assert kind is not PointKind.BOUNDARY
                counts[kind] = counts.get(kind, 0) + 1
        assert sum(counts.values()) == (g.n1 - 1) * (g.n2 - 1)
        if mode(g) is InterfaceMode.ALIGNED:
            assert PointKind.NEAR_GAMMA_V not in counts
            assert PointKind.NEAR_GAMMA_H not in counts
            assert PointKind.NEAR_CROSS not in counts
        else:
            assert PointKind.ON_GAMMA not in counts
            assert PointKind.ON_CROSS not in counts


def test_reflection_symmetry_of_classification():
    """Mirroring the domain about the vertical line swaps east/west points."""
    xi, zeta = 0.43, math.pi / 8  # xi dyadic-free on this grid
    g = build_grid(Domain(0, 1, 0, 1, xi, zeta), 16)
    g_ref = build_grid(Domain(0, 1, 0, 1, 1 - xi, zeta), 16)
    for j in range(1, g.n2):
        for i in range(1, g.n1):
            c = classify(g, i, j)
            cr = classify(g_ref, g.n1 - i, j)
            assert c.kind is cr.kind
            if c.kind is PointKind.NEAR_GAMMA_V:
                assert c.w == pytest.approx(cr.w, rel=1e-9)
                assert c.side == -cr.side


def test_subdomain_tie_rule():
    assert subdomain_of(0.5, 0.5, 0.5, 0.7) == 2    # on the line: +x side
    assert subdomain_of(0.5, 0.5, 0.5, 0.2) == 3
    assert subdomain_of(0.5, 0.5, 0.2, 0.5) == 1    # +y side
    assert subdomain_of(0.5, 0.5, 0.5, 0.5) == 2
    assert subdomain_of(0.5, 0.5, 0.2, 0.2) == 4
