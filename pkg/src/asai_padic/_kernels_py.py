"""Pure-Python (numpy) versions of the exhaustive Schwartz-model kernels.

Values of psi on p^{-K}Z_p / Z_p are p^K-th roots of unity; a sum of them is
held as a histogram of exponents. Such a sum vanishes exactly when, for
every residue a mod p^{K-1}, the counts at a, a + p^{K-1}, ... agree, since
the only relations among p^K-th roots of unity are the coset sums.
"""

from __future__ import annotations

import numpy as np


def _nonzero_rows(h: np.ndarray, p: int) -> np.ndarray:
    """Boolean per row: the exponent histogram is a nonzero cyclotomic number."""
    P = h.shape[1]
    step = P // p
    cos = h.reshape(h.shape[0], p, step)
    return np.any(cos != cos[:, :1, :], axis=(1, 2))


def unit_average_mismatches(p: int, r: int, M: int) -> int:
    """Points (m, n) of (Z/p^M)^2 where
    sum_{u in (Z/p^r)^x} Phi^{(r)}(um, un) != q^r 1[p^r | m] - q^{r-1} 1[p^{r-1} | m]."""
    P = p ** r
    N = p ** M
    units = np.array([u for u in range(1, P) if u % p], dtype=np.int64)
    bad = 0
    for m in range(N):
        # Phi^{(r)}(um, un) = psi(um / p^r) for integral arguments
        e = (-(units * m)) % P
        h = np.zeros((N, P), dtype=np.int64)
        rows = np.repeat(np.arange(N), units.size)
        np.add.at(h, (rows, np.tile(e, N)), 1)
        # un is integral for every n, so the indicator in y is 1
        h[:, 0] -= (P if m % P == 0 else 0) - (P // p if m % (P // p) == 0 else 0)
        bad += int(_nonzero_rows(h, p).sum())
    return bad


def distribution_mismatches(p: int, r: int, M: int, rhs_coeff: int = -1) -> int:
    """Points (m, n) of (Z/p^M)^2 where
    sum_{x, y mod p} Phi^{(r+1)}(m + m x p^r + n y p^r, n) != q^2 psi(m / p^{r+1}) 1[p | m, p | n].

    rhs_coeff overrides the q^2 on the right (negative means q^2); it exists so
    that a deliberately wrong claim can be shown to be detected.
    """
    if rhs_coeff < 0:
        rhs_coeff = p * p
    P = p ** (r + 1)
    N = p ** M
    pr = p ** r
    xs, ys = np.meshgrid(np.arange(p, dtype=np.int64), np.arange(p, dtype=np.int64), indexing="ij")
    xs, ys = xs.ravel(), ys.ravel()
    ns = np.arange(N, dtype=np.int64)
    bad = 0
    for m in range(N):
        a = (m + m * xs[None, :] * pr + ns[:, None] * ys[None, :] * pr) % P
        e = (-a) % P
        h = np.zeros((N, P), dtype=np.int64)
        np.add.at(h, (np.repeat(np.arange(N), xs.size), e.ravel()), 1)
        if m % p == 0:
            sel = ns % p == 0
            h[sel, (-m) % P] -= rhs_coeff
        bad += int(_nonzero_rows(h, p).sum())
    return bad
