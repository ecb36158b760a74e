"""Univariate root finding: companion-matrix eigenvalues plus Newton polish."""

from __future__ import annotations

import numpy as np

CLUSTER_TOL = 1e-7


def trim_leading(coeffs, tol: float = 0.0) -> np.ndarray:
    """Drop leading coefficients with modulus ``<= tol * max|coeff|``."""
    c = np.asarray(coeffs, dtype=complex)
    if c.size == 0:
        return c
    scale = float(np.max(np.abs(c)))
    k = 0
    while k < c.size - 1 and abs(c[k]) <= tol * scale:
        k += 1
    return c[k:]


def polish(coeffs, roots, steps: int = 3) -> np.ndarray:
    """Newton-refine each root; a step is kept only if it reduces ``|p|``."""
    c = np.asarray(coeffs, dtype=complex)
    dc = np.polyder(c) if c.size > 1 else np.zeros(1, dtype=complex)
    out = np.array(roots, dtype=complex)
    for i, r in enumerate(out):
        val = np.polyval(c, r)
        for _ in range(steps):
            d = np.polyval(dc, r)
            if d == 0:
                break
            cand = r - val / d
            cand_val = np.polyval(c, cand)
            if abs(cand_val) >= abs(val):
                break
            r, val = cand, cand_val
        out[i] = r
    return out


def find_roots(coeffs, steps: int = 3) -> np.ndarray:
    """All roots of a polynomial (highest coefficient first), with multiplicity."""
    c = trim_leading(coeffs)
    if c.size <= 1:
        return np.zeros(0, dtype=complex)
    return polish(c, np.roots(c), steps)


def sort_key(z: complex, digits: int = 9) -> tuple[float, float]:
    # rounding keeps the order stable under last-bit noise
    return (round(z.real, digits) + 0.0, round(z.imag, digits) + 0.0)


def cluster(values, tol: float = CLUSTER_TOL) -> list[list[int]]:
    """Group indices of values closer than ``tol * (1 + max|v|)`` (single linkage)."""
    vals = np.asarray(values, dtype=complex)
    if vals.size == 0:
        return []
    thresh = tol * (1.0 + float(np.max(np.abs(vals))))
    parent = list(range(vals.size))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(vals.size):
        for j in range(i + 1, vals.size):
            if abs(vals[i] - vals[j]) <= thresh:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(vals.size):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: sort_key(complex(np.mean(vals[g]))))
