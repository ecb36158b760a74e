"""Skew forms, Pfaffians and adjoints with respect to a symplectic form.

Bilinear forms are stored as matrices acting as ``form(u, v) = u^T @ omega @ v``.
All functions accept either backend (see :mod:`spectral_lab.scalars`) and
return results in the backend of their input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import scalars as sc
from .errors import (
    DegenerateFormError,
    DimensionMismatchError,
    NotSkewError,
    OddDimensionError,
    SpectralLabError,
)

DEFAULT_TOL = 1e-9

__all__ = [
    "DEFAULT_TOL",
    "SymplecticSpace",
    "QuaternionicStructure",
    "HermitianForm",
    "standard_form",
    "standard_quaternionic",
    "pfaffian",
    "form_transpose",
    "adjoint_between",
    "check_form_symmetric",
    "hermitian_signature",
    "check_quaternionic",
    "skew_residual",
]


def skew_residual(s, exact: bool | None = None) -> float:
    """``||s + s^T|| / max(1, ||s||)``; exactly 0.0 for exact skew input."""
    arr = np.asarray(s)
    total = arr + arr.T
    if (arr.dtype == object or exact) and sc.all_zero(total):
        return 0.0
    return sc.norm(total) / max(1.0, sc.norm(arr))


def _require_skew(a: np.ndarray, exact: bool, tol: float) -> None:
    if exact:
        if not sc.all_zero(a + a.T):
            raise NotSkewError("matrix is not skew-symmetric")
    elif skew_residual(a) > tol:
        raise NotSkewError(f"skew residual {skew_residual(a):.3e} exceeds {tol:.1e}")


@dataclass(frozen=True, eq=False)
class SymplecticSpace:
    """Even-dimensional space with a nondegenerate skew form ``omega``."""

    omega: np.ndarray
    tol: float = DEFAULT_TOL
    exact: bool = field(init=False)
    omega_inv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        omega, exact = sc.as_matrix(self.omega)
        if omega.shape[0] % 2:
            raise OddDimensionError(f"symplectic space must be even-dimensional, got {omega.shape[0]}")
        _require_skew(omega, exact, self.tol)
        if exact:
            try:
                inv = sc.exact_inverse(omega)
            except SpectralLabError:
                raise DegenerateFormError("omega is degenerate") from None
        else:
            if np.linalg.cond(omega) > 1 / self.tol:
                raise DegenerateFormError("omega is numerically degenerate")
            inv = np.linalg.inv(omega)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "exact", exact)
        object.__setattr__(self, "omega_inv", inv)

    @property
    def dim(self) -> int:
        return self.omega.shape[0]

    def pair(self, u, v):
        return np.asarray(u) @ self.omega @ np.asarray(v)

    def to_floating(self) -> "SymplecticSpace":
        if not self.exact:
            return self
        return SymplecticSpace(sc.to_complex(self.omega), tol=self.tol)


@dataclass(frozen=True, eq=False)
class QuaternionicStructure:
    """Antilinear map ``v -> j_matrix @ conj(v)``."""

    j_matrix: np.ndarray


@dataclass(frozen=True, eq=False)
class HermitianForm:
    """Hermitian form ``h(u, v) = v^H @ h_matrix @ u``."""

    h_matrix: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        h = sc.to_complex(self.h_matrix)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise DimensionMismatchError(f"expected a square matrix, got shape {h.shape}")
        if np.linalg.norm(h - h.conj().T) > self.tol * max(1.0, np.linalg.norm(h)):
            raise SpectralLabError("matrix is not conjugate-symmetric")
        object.__setattr__(self, "h_matrix", h)


def standard_form(m: int, exact: bool = True) -> np.ndarray:
    """The ``2m x 2m`` form ``[[0, I], [-I, 0]]`` pairing ``e_i`` with ``e_{m+i}``."""
    eye = sc.identity(m, exact)
    zero = sc.zeros((m, m), exact)
    return np.block([[zero, eye], [-eye, zero]])


def standard_quaternionic(m: int) -> QuaternionicStructure:
    """Block-diagonal stack of ``m`` copies of ``[[0, -1], [1, 0]]``."""
    block = np.array([[0, -1], [1, 0]], dtype=complex)
    return QuaternionicStructure(np.kron(np.eye(m), block))


def pfaffian(s, tol: float = DEFAULT_TOL):
    """Pfaffian of a skew-symmetric matrix.

    Skew Gaussian elimination (Parlett-Reid): at step ``k`` the pivot
    ``s[k, k+1]`` is chosen by a simultaneous row/column swap, multiplied
    into the result, and the trailing block is updated by a rank-2
    congruence.  Exact input is pivoted on the first nonzero entry, floating
    input on the entry of largest modulus.

    Normalized so that ``pfaffian([[0, 1], [-1, 0]]) == 1``.
    """
    a, exact = sc.as_matrix(s)
    n = a.shape[0]
    if n % 2:
        raise OddDimensionError(f"Pfaffian needs even dimension, got {n}")
    _require_skew(a, exact, tol)
    a = a.copy()
    pf = sc.GaussianRational(1) if exact else 1.0 + 0j
    for k in range(0, n - 1, 2):
        col = a[k + 1:, k]
        if exact:
            piv = next((i for i, x in enumerate(col) if x), None)
        else:
            piv = int(np.argmax(np.abs(col)))
            if col[piv] == 0:
                piv = None
        if piv is None:
            return sc.GaussianRational(0) if exact else 0j
        kp = k + 1 + piv
        if kp != k + 1:
            a[[k + 1, kp], k:] = a[[kp, k + 1], k:]
            a[k:, [k + 1, kp]] = a[k:, [kp, k + 1]]
            pf = -pf
        pivot = a[k, k + 1]
        pf = pf * pivot
        if k + 2 < n:
            tau = a[k, k + 2:] / pivot
            lower = a[k + 2:, k + 1]
            a[k + 2:, k + 2:] = a[k + 2:, k + 2:] + np.outer(tau, lower) - np.outer(lower, tau)
    return pf


def adjoint_between(b, source: SymplecticSpace, target: SymplecticSpace) -> np.ndarray:
    """Adjoint of ``b: source -> target``.

    Returns ``b_adj: target -> source`` with
    ``source.pair(b_adj @ u, v) == target.pair(u, b @ v)``.
    """
    b_arr, exact = sc.as_matrix(b, square=False)
    if b_arr.shape != (target.dim, source.dim):
        raise DimensionMismatchError(
            f"map of shape {b_arr.shape} does not go from dim {source.dim} to dim {target.dim}"
        )
    if exact and source.exact and target.exact:
        return source.omega_inv @ b_arr.T @ target.omega
    src, tgt = source.to_floating(), target.to_floating()
    return src.omega_inv @ sc.to_complex(b_arr).T @ tgt.omega


def form_transpose(a, space: SymplecticSpace) -> np.ndarray:
    """Symplectic transpose ``omega^{-1} a^T omega``."""
    return adjoint_between(a, space, space)


def check_form_symmetric(a, space: SymplecticSpace) -> float:
    """Relative residual ``||a - a^T_omega|| / max(1, ||a||)``."""
    arr, _ = sc.as_matrix(a)
    if arr.shape[0] != space.dim:
        raise DimensionMismatchError(f"matrix dim {arr.shape[0]} != space dim {space.dim}")
    diff = arr - form_transpose(arr, space)
    if sc.all_zero(diff):
        return 0.0
    return sc.norm(diff) / max(1.0, sc.norm(arr))


def hermitian_signature(h: HermitianForm) -> tuple[int, int]:
    """Counts of positive and negative eigenvalues of a nondegenerate hermitian form."""
    mat = h.h_matrix
    eig = np.linalg.eigvalsh(mat)
    scale = max(1.0, float(np.max(np.abs(eig))) if eig.size else 1.0)
    if eig.size and np.min(np.abs(eig)) <= h.tol * scale:
        raise DegenerateFormError("hermitian form has an eigenvalue at zero")
    return int(np.sum(eig > 0)), int(np.sum(eig < 0))


def check_quaternionic(j: QuaternionicStructure) -> float:
    """``||J0 conj(J0) + I||``, zero exactly when ``J^2 = -1``."""
    j0 = np.asarray(j.j_matrix)
    if j0.ndim != 2 or j0.shape[0] != j0.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {j0.shape}")
    if j0.dtype == object or np.issubdtype(j0.dtype, np.integer):
        ex = sc.to_exact(j0)
        conj = np.vectorize(lambda x: x.conjugate(), otypes=[object])(ex)
        return sc.norm(ex @ conj + sc.identity(j0.shape[0], True))
    j0 = j0.astype(complex)
    return sc.norm(j0 @ j0.conj() + np.eye(j0.shape[0]))
