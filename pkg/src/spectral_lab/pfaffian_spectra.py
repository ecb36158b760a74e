"""Pfaffian characteristic polynomial of an omega-symmetric endomorphism.

For ``A`` symmetric with respect to ``omega`` the matrix ``omega (xI - A)``
is skew, and ``p(x) = Pf(omega (xI - A)) / Pf(omega)`` is monic of degree
``dim / 2`` with ``p(x)**2 == det(xI - A)``.  Polynomials are returned as
coefficient arrays, highest degree first.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import scalars as sc
from .errors import (
    ClusteredSpectrumError,
    DegreeMismatchError,
    DimensionMismatchError,
    NotSymmetricError,
)
from .polyroots import CLUSTER_TOL, cluster, find_roots, sort_key
from .structured_linalg import DEFAULT_TOL, SymplecticSpace, check_form_symmetric, pfaffian

__all__ = [
    "PfaffianSpectrum",
    "Eigenspace",
    "pfaffian_char_poly",
    "pfaffian_spectrum",
    "verify_det_square",
    "verify_annihilator",
    "eigenspace_decomposition",
    "refine_eigenvalues",
]


@dataclass(frozen=True)
class Eigenspace:
    eigenvalue: complex
    basis: np.ndarray  # dim x 2, orthonormal columns
    gram: np.ndarray  # omega restricted to the basis


@dataclass(frozen=True)
class PfaffianSpectrum:
    coefficients: tuple  # [1, a_1, ..., a_m]
    eigen_data: tuple  # (eigenvalue, multiplicity, eigenspace_dim)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1


def _unit_circle(n: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n) / n)


def _checked(a, space: SymplecticSpace, tol: float):
    arr, exact = sc.as_matrix(a)
    if arr.shape[0] != space.dim:
        raise DimensionMismatchError(f"matrix dim {arr.shape[0]} != space dim {space.dim}")
    residual = check_form_symmetric(arr, space)
    exact = exact and space.exact
    if (exact and residual != 0) or residual > tol:
        raise NotSymmetricError(f"matrix is not omega-symmetric (residual {residual:.3e})")
    return arr, exact


def pfaffian_char_poly(a, space: SymplecticSpace, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Monic ``p`` with ``p(x)**2 == det(xI - a)``.

    Exact input: ``Pf(omega (xI - a)) / Pf(omega)`` is evaluated at
    ``x = 0..m`` and interpolated in Q(i), giving exact coefficients.
    Floating input: evaluated at the ``m + 1`` roots of unity scaled by
    ``1 + ||a||`` and recovered with an inverse DFT.
    """
    arr, exact = _checked(a, space, tol)
    n = arr.shape[0]
    m = n // 2
    if exact:
        omega = space.omega
        pf_omega = pfaffian(omega)
        eye = sc.identity(n, True)
        xs = list(range(m + 1))
        ys = [pfaffian(omega @ (x * eye - arr)) / pf_omega for x in xs]
        return np.array(sc.interpolate_exact(xs, ys), dtype=object)

    arr = sc.to_complex(arr)
    omega = sc.to_complex(space.omega)
    pf_omega = pfaffian(omega, tol=tol)
    radius = 1.0 + sc.norm(arr)
    xs = radius * _unit_circle(m + 1)
    vals = np.empty(m + 1, dtype=complex)
    for k, x in enumerate(xs):
        mat = omega @ (x * np.eye(n) - arr)
        # symmetry was validated above; drop the rounding-level symmetric part
        vals[k] = pfaffian(0.5 * (mat - mat.T), tol=np.inf) / pf_omega
    ascending = np.fft.fft(vals) / (m + 1) / radius ** np.arange(m + 1)
    coeffs = ascending[::-1].copy()
    coeffs[0] = 1.0
    return coeffs


def verify_det_square(a, p, space: SymplecticSpace) -> float:
    """Scaled ``max_k |p(x_k)**2 - det(x_k I - a)|`` over ``2m + 1`` sample points."""
    arr, exact = sc.as_matrix(a)
    if arr.shape[0] != space.dim:
        raise DimensionMismatchError(f"matrix dim {arr.shape[0]} != space dim {space.dim}")
    n = arr.shape[0]
    m = n // 2
    if len(p) - 1 != m:
        raise DegreeMismatchError(f"expected degree {m}, got {len(p) - 1}")
    radius = 1.0 + sc.norm(arr)
    scale = max(1.0, radius ** (2 * m))
    if exact and sc.is_exact(p):
        eye = sc.identity(n, True)
        diffs = [sc.polyval(p, x) ** 2 - sc.exact_det(x * eye - arr) for x in range(2 * m + 1)]
        if sc.all_zero(np.array(diffs, dtype=object)):
            return 0.0
        return max(abs(d) for d in diffs) / scale
    arr = sc.to_complex(arr)
    pc = sc.to_complex(np.asarray(p))
    xs = radius * _unit_circle(2 * m + 1)
    diffs = [np.polyval(pc, x) ** 2 - np.linalg.det(x * np.eye(n) - arr) for x in xs]
    return float(np.max(np.abs(diffs))) / scale


def verify_annihilator(a, p) -> float:
    """``||p(a)|| / max(1, ||a||**deg p)``."""
    arr, exact = sc.as_matrix(a)
    if exact and sc.is_exact(p):
        value = sc.polyval(list(p), arr)
        if sc.all_zero(value):
            return 0.0
    else:
        arr = sc.to_complex(arr)
        value = sc.polyval(list(sc.to_complex(np.asarray(p))), arr)
    return sc.norm(value) / max(1.0, sc.norm(arr) ** (len(p) - 1))


def refine_eigenvalues(a, roots) -> np.ndarray:
    """Replace each root of the Pfaffian polynomial by the mean of its two nearest eigenvalues.

    The interpolated coefficients lose accuracy when ``||a||`` is much
    larger than the spectral radius; the dense eigensolver does not.
    Each Pfaffian root is a double eigenvalue of ``a``.
    """
    arr = sc.to_complex(sc.as_matrix(a)[0])
    eig = list(np.linalg.eigvals(arr))
    out = []
    for r in roots:
        order = sorted(range(len(eig)), key=lambda k: abs(eig[k] - r))[:2]
        out.append(np.mean([eig[k] for k in order]))
        for k in sorted(order, reverse=True):
            eig.pop(k)
    return np.array(out, dtype=complex)


def eigenspace_decomposition(
    a, space: SymplecticSpace, tol: float = DEFAULT_TOL, cluster_tol: float = CLUSTER_TOL
) -> list[Eigenspace]:
    """Split into ``m`` two-dimensional eigenspaces (floating arithmetic).

    Raises :class:`ClusteredSpectrumError` when two roots of the Pfaffian
    polynomial are within ``cluster_tol * (1 + max|root|)``.
    """
    arr, _ = _checked(a, space, tol)
    coeffs = sc.to_complex(pfaffian_char_poly(arr, space, tol))
    arr = sc.to_complex(arr)
    omega = sc.to_complex(space.omega)
    roots = refine_eigenvalues(arr, find_roots(coeffs))
    groups = cluster(roots, cluster_tol)
    if any(len(g) > 1 for g in groups):
        raise ClusteredSpectrumError("Pfaffian polynomial has colliding roots")
    n = arr.shape[0]
    out = []
    for lam in sorted(roots, key=sort_key):
        _, _, vh = np.linalg.svd(arr - lam * np.eye(n))
        basis = vh[-2:].conj().T
        out.append(Eigenspace(complex(lam), basis, basis.T @ omega @ basis))
    return out


def pfaffian_spectrum(
    a, space: SymplecticSpace, tol: float = DEFAULT_TOL, cluster_tol: float = CLUSTER_TOL
) -> PfaffianSpectrum:
    """Coefficients plus clustered roots with their geometric eigenspace dimensions."""
    coeffs = pfaffian_char_poly(a, space, tol)
    arr = sc.to_complex(sc.as_matrix(a)[0])
    n = arr.shape[0]
    roots = find_roots(sc.to_complex(coeffs))
    data = []
    scale = max(1.0, sc.norm(arr))
    for group in cluster(roots, cluster_tol):
        lam = complex(np.mean(roots[group]))
        sv = np.linalg.svd(arr - lam * np.eye(n), compute_uv=False)
        # loose threshold: a k-fold root is only accurate to about eps**(1/k)
        kernel_dim = int(np.sum(sv <= max(cluster_tol, 1e-6) * scale))
        data.append((lam, len(group), kernel_dim))
    return PfaffianSpectrum(tuple(coeffs), tuple(data))
