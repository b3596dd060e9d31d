"""Bivariate Taylor kernels and their stencil-weighted sums.

The interface-aware expansions used by the 9-point schemes write values of
the solution at stencil points as combinations of derivatives of a single
reference panel taken at an interface point.  Two polynomial families carry
those combinations:

* ``G`` kernels multiply solution derivatives,
    G_{m,n}(x, y) = sum_{l=0}^{floor(n/2)} (-1)^l x^(m+2l) y^(n-2l)
                    / ((m+2l)! (n-2l)!)
* ``H`` kernels multiply source derivatives,
    H_{m,n}(x, y) = sum_{l=1}^{1+floor(n/2)} (-1)^l x^(m+2l) y^(n-2l+2)
                    / ((m+2l)! (n-2l+2)!)

Every monomial of G has total degree m+n and every monomial of H has total
degree m+n+2, so both are homogeneous: evaluating at offsets measured in
units of h and scaling once by the matching power of h is exact and keeps
the small consistency systems free of h.

The aggregate routines sum a kernel over sub-blocks of a 3x3 stencil in the
patterns the right-hand-side formulas need: one-sided column sums for a
vertical interface, one-sided row sums for a horizontal one, and the four
quadrant-restricted sums used at the interface cross point.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "odd",
    "floor_half",
    "lambda_set",
    "lambda1_set",
    "lambda2_set",
    "eval_G",
    "eval_H",
    "agg_vertical",
    "agg_horizontal",
    "agg_quadrant",
]

# Exact integer factorials, precomputed well past the largest index a
# degree-7 scheme can request (m + 2l <= 13 for the H kernels).
_FACT = [math.factorial(k) for k in range(18)]


def odd(m: int) -> int:
    """1 for odd m, 0 for even m."""
    return m & 1


def floor_half(m: int) -> int:
    """floor(m / 2) for nonnegative m."""
    return m >> 1


def lambda_set(M: int) -> list[tuple[int, int]]:
    """All derivative index pairs (m, n) with m + n <= M."""
    if M < 0:
        return []
    return [(m, n) for m in range(M + 1) for n in range(M + 1 - m)]


def lambda1_set(M: int) -> list[tuple[int, int]]:
    """Pairs of ``lambda_set(M)`` restricted to m in {0, 1}."""
    if M < 0:
        return []
    return [(m, n) for m in (0, 1) if m <= M for n in range(M + 1 - m)]


def lambda2_set(M: int) -> list[tuple[int, int]]:
    """Complement of ``lambda1_set(M)`` inside ``lambda_set(M)``."""
    return [(m, n) for (m, n) in lambda_set(M) if m >= 2]


def eval_G(m: int, n: int, x: float, y: float) -> float:
    """Evaluate the solution-derivative kernel G_{m,n} at (x, y)."""
    terms = [
        (-1.0) ** l * x ** (m + 2 * l) * y ** (n - 2 * l)
        / (_FACT[m + 2 * l] * _FACT[n - 2 * l])
        for l in range(n // 2 + 1)
    ]
    return math.fsum(terms)


def eval_H(m: int, n: int, x: float, y: float) -> float:
    """Evaluate the source-derivative kernel H_{m,n} at (x, y)."""
    terms = [
        (-1.0) ** l * x ** (m + 2 * l) * y ** (n - 2 * l + 2)
        / (_FACT[m + 2 * l] * _FACT[n - 2 * l + 2])
        for l in range(1, n // 2 + 2)
    ]
    return math.fsum(terms)


_KERNELS = {"G": eval_G, "H": eval_H}


def _hpow(kind: str, m: int, n: int, h: float) -> float:
    """Homogeneity factor restoring physical units after unit-h evaluation."""
    return h ** (m + n) if kind == "G" else h ** (m + n + 2)


def agg_vertical(C: np.ndarray, m: int, n: int, w: float, h: float,
                 which: str) -> float:
    """Stencil-weighted kernel sums for a vertical interface at x = -w*h.

    ``C`` is the 3x3 coefficient block indexed ``C[k+1, l+1]`` for offsets
    k, l in {-1, 0, 1}.  ``which`` selects the sum:

    * ``"G"``      : sum_l C[-1,l] G_{m,n}((w-1)h, l h)
    * ``"Hminus"`` : same with H (far-side column),
    * ``"Hplus"``  : sum_{k=0,1} sum_l C[k,l] H_{m,n}((w+k)h, l h).
    """
    if which == "G":
        kern, cols, kind = eval_G, (-1,), "G"
    elif which == "Hminus":
        kern, cols, kind = eval_H, (-1,), "H"
    elif which == "Hplus":
        kern, cols, kind = eval_H, (0, 1), "H"
    else:
        raise ValueError(f"unknown vertical aggregate {which!r}")
    terms = [
        C[k + 1, l + 1] * kern(m, n, w + k, float(l))
        for k in cols
        for l in (-1, 0, 1)
    ]
    return math.fsum(terms) * _hpow(kind, m, n, h)


def agg_horizontal(C: np.ndarray, m: int, n: int, w: float, h: float,
                   which: str) -> float:
    """Mirror of :func:`agg_vertical` for a horizontal interface at y = -w*h.

    Kernel indices and arguments are swapped: rows take the place of
    columns and every kernel is evaluated as K_{n,m}(.., k h).
    """
    if which == "G":
        kern, rows, kind = eval_G, (-1,), "G"
    elif which == "Hminus":
        kern, rows, kind = eval_H, (-1,), "H"
    elif which == "Hplus":
        kern, rows, kind = eval_H, (0, 1), "H"
    else:
        raise ValueError(f"unknown horizontal aggregate {which!r}")
    terms = [
        C[k + 1, l + 1] * kern(n, m, w + l, float(k))
        for l in rows
        for k in (-1, 0, 1)
    ]
    return math.fsum(terms) * _hpow(kind, m, n, h)


# Stencil offsets belonging to each quadrant around the cross point when the
# cross sits at (-w1*h, -w2*h) relative to the center: panel 1 is the far
# column above the horizontal line, panel 2 the center's own quadrant, panel
# 3 the near columns below the line, panel 4 the far corner.
_QUAD_OFFSETS = {
    1: tuple((-1, l) for l in (0, 1)),
    2: tuple((k, l) for k in (0, 1) for l in (0, 1)),
    3: tuple((k, -1) for k in (0, 1)),
    4: ((-1, -1),),
}


def agg_quadrant(C: np.ndarray, p: int, m: int, n: int, w1: float, w2: float,
                 h: float, kind: str) -> float:
    """Quadrant-restricted kernel sums around the interface cross point.

    Panels 1 and 2 evaluate K_{m,n}((w1+k)h, (w2+l)h); panels 3 and 4 swap
    both the kernel indices and the arguments, K_{n,m}((w2-1)h, (w1+k)h),
    matching the horizontal-line expansions they come from.
    """
    kern = _KERNELS[kind]
    if p in (1, 2):
        terms = [
            C[k + 1, l + 1] * kern(m, n, w1 + k, w2 + l)
            for k, l in _QUAD_OFFSETS[p]
        ]
    elif p in (3, 4):
        terms = [
            C[k + 1, l + 1] * kern(n, m, w2 - 1, w1 + k)
            for k, l in _QUAD_OFFSETS[p]
        ]
    else:
        raise ValueError(f"quadrant must be 1..4, got {p}")
    return math.fsum(terms) * _hpow(kind, m, n, h)
