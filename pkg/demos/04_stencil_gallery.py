"""The coefficient blocks behind each row type, and their cross-checks.

Blocks print with the y axis pointing up (third row = l { -1 }).  The
closed forms are re-derived independently from the null space of their
h-free consistency systems; the printed mismatch is pure rounding.
"""

import numpy as np

from crossfd.stencils import (check_conditions, cross_stencil,
                              derive_by_nullspace, gamma_stencil,
                              interior_stencil, near_cross_order4,
                              near_gamma_order3, near_gamma_order4,
                              rho_interval)


def show(title, st):
    sign_ok, sum_ok, _, rsum = check_conditions(st.weights)
    print(f"{title}  (order {st.order}, row scale h^-{st.scale_exponent}, "
          f"sign {'ok' if sign_ok else 'VIOLATED'}, row sum {rsum:.1e})")
    print(np.array2string(st.weights.T[::-1], precision=4, suppress_small=True))
    print()


a = (2.0, 1.0, 5.0, 0.5)

show("interior", interior_stencil())
show("on the vertical interface, ratio 2", gamma_stencil(1, a))
show("on the cross, a = (2, 1, 5, 0.5)", cross_stencil(a))
show("one cell from the line, w = 0.3", near_gamma_order4(0.3, 2.0, 1.0))
show("same point, sign-safe order 3", near_gamma_order3(0.3, 2.0, 1.0))
print(f"admissible free-parameter range at (ratio 2, w 0.3): "
      f"[{rho_interval(2.0, 0.3)[0]:.4f}, {rho_interval(2.0, 0.3)[1]:.4f}]\n")

st = near_cross_order4(0.3, 0.45, a)
show("diagonal to the cross, w = (0.3, 0.45)", st)
print(f"corner split across the two expansion routes: "
      f"{st.split[0]:.5f} + {st.split[1]:.5f} = {st.weights[0, 0]:.5f}\n")

derived = derive_by_nullspace("cross", 7, a=a)
closed = cross_stencil(a).weights
scale = (derived.weights.ravel() @ closed.ravel()) \
    / (derived.weights.ravel() @ derived.weights.ravel())
err = np.max(np.abs(scale * derived.weights - closed)) / np.max(np.abs(closed))
print(f"null-space re-derivation of the cross block: relative mismatch {err:.1e}")
