"""Brute-force lattice membership over an integer box, independent of the HNF code.

A vector x lies in the Z-span of the rows of G (rank r) iff every
(r+1)-minor of [G; x] vanishes and the gcd of the r-minors of [G; x]
equals the gcd of the r-minors of G.  Minors involving x are linear in x,
so the whole box is tested with one matrix product.
"""

from functools import reduce
from itertools import combinations
from math import gcd

import numpy as np


def _idet(m) -> int:
    m = np.asarray(m, dtype=float)
    return int(round(np.linalg.det(m))) if m.size else 1


def box(radius: int = 25, dim: int = 3) -> np.ndarray:
    axes = [np.arange(-radius, radius + 1)] * dim
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, dim).astype(np.int64)


def _linear_minors(g: np.ndarray, size: int) -> np.ndarray:
    """Coefficient vectors of all size-minors of [g; x] that use the x row."""
    n = g.shape[1]
    out = []
    for rows in combinations(range(g.shape[0]), size - 1):
        for cols in combinations(range(n), size):
            coef = np.zeros(n, dtype=np.int64)
            for t in cols:
                x = np.zeros(n, dtype=np.int64)
                x[t] = 1
                m = np.vstack([g[list(rows)], x[None, :]])[:, list(cols)] if rows else x[None, list(cols)]
                coef[t] = _idet(m)
            out.append(coef)
    return np.array(out, dtype=np.int64).reshape(-1, n)


def member_mask(generators, points: np.ndarray, saturated: bool = False) -> np.ndarray:
    """Boolean mask of ``points`` lying in the lattice (or its saturation) spanned by ``generators``."""
    n = points.shape[1]
    g = np.array(generators, dtype=np.int64).reshape(-1, n)
    r = int(np.linalg.matrix_rank(g)) if g.size else 0
    if r == 0:
        return ~points.any(axis=1)
    mask = np.ones(len(points), dtype=bool)
    if r < n:
        upper = _linear_minors(g, r + 1)
        mask &= ~(points @ upper.T).any(axis=1)
    if saturated:
        return mask
    base = reduce(gcd, (abs(_idet(g[list(rs)][:, list(cs)]))
                        for rs in combinations(range(g.shape[0]), r)
                        for cs in combinations(range(n), r)), 0)
    lin = points @ _linear_minors(g, r).T
    d = np.gcd.reduce(np.abs(lin), axis=1)
    # the x-free minors are multiples of base, so gcd(all) = gcd(d, base)
    return mask & (np.gcd(d, base) == base)
