import numpy as np
import pytest

from crossfd.errors import NoSolutionError
from crossfd.stencils import (DerivedStencil, apply_symmetry,
                              check_conditions, cross_stencil,
                              derive_by_nullspace, gamma_stencil,
                              gamma_vertical_block, interior_stencil,
                              near_cross_order2, near_cross_order4,
                              near_gamma_order3, near_gamma_order4,
                              rho_interval)


def _match_direction(got: np.ndarray, want: np.ndarray) -> float:
    """Relative mismatch after projecting out the free scale."""
    v, w = got.ravel(), want.ravel()
    scale = (v @ w) / (v @ v)
    return float(np.max(np.abs(scale * v - w)) / np.max(np.abs(w)))


def test_interior_block():
    st = interior_stencil()
    assert st.weights[1, 1] == 20.0
    assert st.weights.sum() == 0.0
    assert st.scale_exponent == 2 and st.order == 6
    s_ok, z_ok, _, _ = check_conditions(st.weights)
    assert s_ok and z_ok


def test_gamma_block_alpha_one_is_interior():
    st = gamma_stencil(1, (3.0, 3.0, 1.0, 1.0))
    assert np.array_equal(st.weights, interior_stencil().weights)


def test_gamma_block_alpha_two_values():
    st = gamma_stencil(1, (2.0, 1.0, 7.0, 7.0))
    C = st.weights
    assert C[0, 1] == -8.0          # far arm
    assert C[1, 1] == 30.0
    assert C[1, 0] == C[1, 2] == -6.0
    assert C[0, 0] == C[0, 2] == -2.0
    assert C[2, 1] == -4.0
    assert C[2, 0] == C[2, 2] == -1.0
    assert st.scale_exponent == 1 and st.order == 7


def test_gamma_segments_share_one_shape():
    a = (2.0, 5.0, 0.25, 1.5)
    # vertical segments: plain block with the segment's own ratio
    v1 = gamma_stencil(1, a).weights
    assert np.array_equal(v1, gamma_vertical_block(a[0] / a[1]))
    v2 = gamma_stencil(2, a).weights
    assert np.array_equal(v2, gamma_vertical_block(a[3] / a[2]))
    # horizontal segments: the transpose
    h3 = gamma_stencil(3, a).weights
    assert np.array_equal(h3, gamma_vertical_block(a[2] / a[1]).T)
    h4 = gamma_stencil(4, a).weights
    assert np.array_equal(h4, gamma_vertical_block(a[3] / a[0]).T)


def test_cross_block_values_and_sum():
    assert np.array_equal(cross_stencil((1.0, 1.0, 1.0, 1.0)).weights,
                          interior_stencil().weights)
    rng = np.random.default_rng(0)
    for _ in range(25):
        a = tuple(10.0 ** rng.uniform(-5, 5, 4))
        st = cross_stencil(a)
        assert st.weights[2, 2] == -1.0
        assert abs(st.weights.sum()) <= 1e-12 * np.abs(st.weights).max()
        s_ok, z_ok, _, _ = check_conditions(st.weights)
        assert s_ok and z_ok


def test_near_gamma4_printed_values():
    st = near_gamma_order4(0.37, 1.0, 2.0)
    C = st.weights
    assert C[1, 2] == -1.0 and C[1, 0] == -1.0
    assert np.array_equal(C[:, 0], C[:, 2])   # up-down symmetric
    assert st.order == 4


def test_near_gamma4_beta_at_half():
    from crossfd.stencils import _order4_polys
    r, t1, s = _order4_polys(0.5)
    assert r[0] == pytest.approx(2.5)
    assert r[1] == pytest.approx(1.5)
    assert r[2] == pytest.approx(4.0)
    assert r[0] + r[1] + r[2] == pytest.approx(8.0)  # beta at ratio 1


def test_near_gamma4_sum_condition_random():
    rng = np.random.default_rng(1)
    for _ in range(50):
        w = rng.uniform(0.02, 0.98)
        am, ap = 10.0 ** rng.uniform(-4, 4, 2)
        C = near_gamma_order4(w, am, ap).weights
        assert abs(C.sum()) <= 1e-12 * np.abs(C).max()


def test_near_gamma4_sign_failure_exists():
    """Small offsets break the sign condition for suitable ratios."""
    st = near_gamma_order4(0.1, 100.0, 1.0)
    sign_ok, _, worst, _ = check_conditions(st.weights)
    assert not sign_ok
    assert worst > 0  # an off-center weight went positive
    # while mid-range offsets stay safe for the same ratio
    sign_ok, _, _, _ = check_conditions(near_gamma_order4(0.5, 100.0, 1.0).weights)
    assert sign_ok


def test_near_gamma4_rejects_degenerate_w():
    from crossfd.errors import DegenerateStencilError
    with pytest.raises(DegenerateStencilError):
        near_gamma_order4(1e-12, 1.0, 1.0)
    with pytest.raises(DegenerateStencilError):
        near_gamma_order4(1.0 - 1e-12, 1.0, 1.0)
    with pytest.raises(ValueError):
        near_gamma_order4(-0.5, 1.0, 1.0)


def test_rho_interval_nonempty_sweep():
    rng = np.random.default_rng(2)
    for _ in range(300):
        alpha = 10.0 ** rng.uniform(-6, 6)
        w = rng.uniform(0.01, 0.99)
        lo, hi = rho_interval(alpha, w)
        assert lo <= hi


def test_rho_interval_contains_printed_subinterval():
    # ratio <= 1 and w <= 1/2 always admits [-0.2, -0.018]
    rng = np.random.default_rng(3)
    for _ in range(200):
        alpha = 10.0 ** rng.uniform(-6, 0)
        w = rng.uniform(0.01, 0.5)
        lo, hi = rho_interval(alpha, w)
        assert lo <= -0.2 + 1e-12
        assert hi >= -0.018 - 1e-12


def test_near_gamma3_conditions_random():
    rng = np.random.default_rng(4)
    for _ in range(100):
        w = rng.uniform(0.02, 0.98)
        am, ap = 10.0 ** rng.uniform(-5, 5, 2)
        st = near_gamma_order3(w, am, ap)
        s_ok, z_ok, _, _ = check_conditions(st.weights)
        assert s_ok and z_ok
        assert st.order == 3


def test_near_gamma3_rejects_out_of_interval_rho():
    lo, hi = rho_interval(2.0, 0.3)
    with pytest.raises(ValueError):
        near_gamma_order3(0.3, 2.0, 1.0, rho=hi + 0.5)
    st = near_gamma_order3(0.3, 2.0, 1.0, rho=0.5 * (lo + hi))
    assert check_conditions(st.weights)[0]


def test_near_cross2_conditions_and_corners():
    rng = np.random.default_rng(5)
    for _ in range(100):
        a = tuple(10.0 ** rng.uniform(-5, 5, 4))
        w1, w2 = rng.uniform(0.02, 0.98, 2)
        st = near_cross_order2(w1, w2, a)
        C = st.weights
        assert C[0, 0] == C[0, 2] == C[2, 0] == C[2, 2] == 0.0
        assert C[1, 1] == 1.0
        s_ok, z_ok, worst, _ = check_conditions(C)
        assert s_ok and z_ok
        assert worst <= 0.0
        assert st.order == 2


def test_near_cross4_defining_property():
    from crossfd.stencils import cross_consistency_matrix
    rng = np.random.default_rng(6)
    for _ in range(10):
        a = tuple(10.0 ** rng.uniform(-3, 3, 4))
        w1, w2 = rng.uniform(0.05, 0.95, 2)
        st = near_cross_order4(w1, w2, a)
        c1, ct = st.split
        vec = np.empty(10)
        C = st.weights.copy()
        C[0, 0] = c1
        vec[:9] = C.ravel()
        vec[9] = ct
        A = cross_consistency_matrix(4, w1, w2, a, include_corner_split=True)
        resid = np.abs(A @ vec)
        scale = np.max(np.abs(A), axis=1) * np.max(np.abs(vec))
        assert np.all(resid <= 1e-10 * scale)
        assert abs(st.weights.sum()) <= 1e-12 * np.abs(st.weights).max()


def test_near_cross4_equal_coefficients_small_offset_limit():
    st = derive_by_nullspace("near_cross", 4, w1=2.0 ** -20, w2=2.0 ** -20,
                             a=(1.0, 1.0, 1.0, 1.0))
    err = _match_direction(st.weights, interior_stencil().weights)
    assert err <= 1e-9


def test_nullspace_recovers_gamma_block():
    rng = np.random.default_rng(7)
    for _ in range(10):
        am, ap = 10.0 ** rng.uniform(-5, 5, 2)
        st = derive_by_nullspace("gamma", 7, w=0.0, a_minus=am, a_plus=ap)
        err = _match_direction(st.weights, gamma_vertical_block(am / ap))
        assert err <= 1e-10


def test_nullspace_recovers_cross_block():
    rng = np.random.default_rng(8)
    for _ in range(10):
        a = tuple(10.0 ** rng.uniform(-5, 5, 4))
        st = derive_by_nullspace("cross", 7, a=a)
        err = _match_direction(st.weights, cross_stencil(a).weights)
        assert err <= 1e-10


def test_nullspace_recovers_near_gamma4_block():
    rng = np.random.default_rng(9)
    for _ in range(10):
        am, ap = 10.0 ** rng.uniform(-4, 4, 2)
        w = rng.uniform(0.05, 0.95)
        st = derive_by_nullspace("gamma", 4, w=w, a_minus=am, a_plus=ap)
        err = _match_direction(st.weights, near_gamma_order4(w, am, ap).weights)
        assert err <= 1e-10


def test_nullspace_no_solution_beyond_maximal_order():
    with pytest.raises(NoSolutionError):
        derive_by_nullspace("gamma", 8, w=0.0, a_minus=2.0, a_plus=1.0)
    with pytest.raises(NoSolutionError):
        derive_by_nullspace("near_cross", 5, w1=0.3, w2=0.6,
                            a=(3.0, 0.7, 11.0, 0.2))


def test_nullspace_cosine_similarity():
    st = derive_by_nullspace("gamma", 7, w=0.0, a_minus=5.0, a_plus=0.2)
    v = st.weights.ravel()
    w = gamma_vertical_block(25.0).ravel()
    cos = abs(v @ w) / (np.linalg.norm(v) * np.linalg.norm(w))
    assert cos >= 1.0 - 1e-10


def test_apply_symmetry_involutions():
    rng = np.random.default_rng(10)
    st = DerivedStencil(rng.normal(size=(3, 3)), 1, 4)
    twice = apply_symmetry(apply_symmetry(st, "reflect-x"), "reflect-x")
    assert np.array_equal(twice.weights, st.weights)
    assert np.array_equal(apply_symmetry(st, "transpose").weights,
                          st.weights.T)
    sym = interior_stencil()
    assert np.array_equal(apply_symmetry(sym, "transpose").weights,
                          sym.weights)
    with pytest.raises(ValueError):
        apply_symmetry(st, "rotate")


def test_stencil_weights_validated():
    with pytest.raises(ValueError):
        DerivedStencil(np.zeros((2, 2)), 1, 4)
    with pytest.raises(ValueError):
        DerivedStencil(np.full((3, 3), np.nan), 1, 4)
    with pytest.raises(ValueError):
        gamma_stencil(1, (1.0, -1.0, 1.0, 1.0))
    with pytest.raises(ValueError):
        cross_stencil((0.0, 1.0, 1.0, 1.0))
