"""Higgs-field models for the three quaternionic real forms.

Block order is always ``V = W (+) W*`` (resp. ``W1 (+) W2``) with the first
summand first; the involution ``iota = diag(I, -I)`` and all sign rules
refer to that order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import scalars as sc
from .errors import (
    ClusteredSpectrumError,
    DimensionMismatchError,
    MixedKernelVectorError,
    NoKernelError,
    NotSkewError,
    SingularGammaError,
    SpectralLabError,
    UnpairedEigenvalueError,
)
from .pfaffian_spectra import pfaffian_char_poly, refine_eigenvalues
from .polyroots import CLUSTER_TOL, cluster, find_roots, sort_key
from .structured_linalg import (
    DEFAULT_TOL,
    HermitianForm,
    QuaternionicStructure,
    SymplecticSpace,
    adjoint_between,
    check_form_symmetric,
    skew_residual,
    standard_form,
)

BLOCK_TOL = 1e-8

__all__ = [
    "Group",
    "HiggsModel",
    "CayleyResult",
    "PairingRecord",
    "build_sl_quaternion",
    "build_so_star",
    "build_sp_mm",
    "involution_pairing",
    "fixed_point_signs",
    "cayley_compose",
    "random_model",
    "random_degenerate_model",
    "involution_matrix",
    "model_residual",
    "real_structure",
]


class Group(enum.Enum):
    SL_H = "SL_H"  # SL(m, H),  complexification SL(2m, C)
    SO_STAR = "SO_STAR"  # SO(2m, H), complexification SO(4m, C)
    SP_MM = "SP_MM"  # Sp(m, m),  complexification Sp(4m, C)

    @classmethod
    def parse(cls, value) -> "Group":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise SpectralLabError(f"unknown group {value!r}") from None

    @property
    def is_off_diagonal(self) -> bool:
        return self is not Group.SL_H

    def x_degree(self, m: int) -> int:
        """Degree of the Pfaffian polynomial, i.e. the number of sheets."""
        return m if self is Group.SL_H else 2 * m


@dataclass(frozen=True, eq=False)
class HiggsModel:
    group: Group
    m: int
    phi: np.ndarray
    space: SymplecticSpace
    beta: np.ndarray | None = None
    gamma: np.ndarray | None = None
    space1: SymplecticSpace | None = None
    space2: SymplecticSpace | None = None

    @property
    def dim(self) -> int:
        return self.phi.shape[0]

    @property
    def exact(self) -> bool:
        return self.phi.dtype == object

    @property
    def first_block(self) -> slice:
        """W (SO_STAR) or W1 (SP_MM)."""
        return slice(0, self.dim // 2)

    @property
    def second_block(self) -> slice:
        """W* (SO_STAR) or W2 (SP_MM)."""
        return slice(self.dim // 2, self.dim)


def involution_matrix(n: int, exact: bool = False) -> np.ndarray:
    """``iota(w, xi) = (w, -xi)`` on a space of dimension ``2n``."""
    eye = sc.identity(n, exact)
    zero = sc.zeros((n, n), exact)
    return np.block([[eye, zero], [zero, -eye]])


def _off_diagonal(beta: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    exact = beta.dtype == object
    n = beta.shape[0]
    zero = sc.zeros((n, n), exact)
    return np.block([[zero, beta], [gamma, zero]])


def _require_skew(mat: np.ndarray, exact: bool, tol: float, name: str) -> None:
    if exact:
        if not sc.all_zero(mat + mat.T):
            raise NotSkewError(f"{name} is not skew-symmetric")
    elif skew_residual(mat) > tol:
        raise NotSkewError(f"{name} is not skew-symmetric")


def _match_backends(*mats):
    arrs = [sc.as_matrix(x)[0] for x in mats]
    if all(a.dtype == object for a in arrs):
        return arrs, True
    return [sc.to_complex(a) for a in arrs], False


def model_residual(model: HiggsModel) -> float:
    """``check_form_symmetric(phi, omega_V)``."""
    return check_form_symmetric(model.phi, model.space)


def build_sl_quaternion(phi_form, space: SymplecticSpace, tol: float = DEFAULT_TOL) -> HiggsModel:
    """Higgs field ``omega^{-1} phi`` from a skew form ``phi``."""
    phi_form, exact = sc.as_matrix(phi_form)
    if phi_form.shape[0] != space.dim:
        raise DimensionMismatchError(f"form dim {phi_form.shape[0]} != space dim {space.dim}")
    _require_skew(phi_form, exact, tol, "phi")
    if exact and space.exact:
        phi = space.omega_inv @ phi_form
    else:
        space = space.to_floating()
        phi = space.omega_inv @ sc.to_complex(phi_form)
    return HiggsModel(Group.SL_H, space.dim // 2, phi, space)


def build_so_star(beta, gamma, tol: float = DEFAULT_TOL) -> HiggsModel:
    """Off-diagonal field ``[[0, beta], [gamma, 0]]`` on ``W (+) W*``.

    The form on ``V`` is ``omega((w1, xi1), (w2, xi2)) = xi2(w1) - xi1(w2)``,
    i.e. the matrix ``[[0, I], [-I, 0]]``.
    """
    (beta, gamma), exact = _match_backends(beta, gamma)
    if beta.shape != gamma.shape or beta.shape[0] % 2:
        raise DimensionMismatchError("beta and gamma must be square of the same even size")
    _require_skew(beta, exact, tol, "beta")
    _require_skew(gamma, exact, tol, "gamma")
    n = beta.shape[0]
    space = SymplecticSpace(standard_form(n, exact), tol=tol)
    phi = _off_diagonal(beta, gamma)
    return HiggsModel(Group.SO_STAR, n // 2, phi, space, beta=beta, gamma=gamma)


def build_sp_mm(beta, space1: SymplecticSpace, space2: SymplecticSpace, tol: float = DEFAULT_TOL) -> HiggsModel:
    """Off-diagonal field ``[[0, beta], [-beta^T, 0]]`` on ``W1 (+) W2``.

    ``beta: W2 -> W1`` and ``beta^T: W1 -> W2`` is its adjoint for
    ``omega_1``, ``omega_2``.  The form on ``V`` is ``diag(omega_1, -omega_2)``;
    the sign on ``omega_2`` is what makes the field symmetric.
    """
    beta, exact = sc.as_matrix(beta, square=False)
    if beta.shape != (space1.dim, space2.dim) or space1.dim != space2.dim:
        raise DimensionMismatchError("beta must map W2 to W1 with dim W1 == dim W2")
    exact = exact and space1.exact and space2.exact
    if not exact:
        beta = sc.to_complex(beta)
        space1, space2 = space1.to_floating(), space2.to_floating()
    gamma = -adjoint_between(beta, space2, space1)
    n = beta.shape[0]
    zero = sc.zeros((n, n), exact)
    omega = np.block([[space1.omega, zero], [zero, -space2.omega]])
    space = SymplecticSpace(omega, tol=tol)
    phi = _off_diagonal(beta, gamma)
    return HiggsModel(Group.SP_MM, n // 2, phi, space, beta=beta, gamma=gamma, space1=space1, space2=space2)


def real_structure(group: Group, m: int) -> tuple[QuaternionicStructure, HermitianForm]:
    """Standard antilinear ``J`` and the hermitian form it induces.

    SP_MM: ``h(u, v) = omega(u, J v)`` with ``omega = diag(omega_0, -omega_0)``.
    SO_STAR: ``h(u, v) = (u, J v)`` with the inner product pairing ``W`` and ``W*``.
    SL_H: ``h(u, v) = omega(u, J v)`` on ``(C^{2m}, omega_0)``, which is definite.
    """
    group = Group.parse(group)
    j2 = np.array([[0, -1], [1, 0]], dtype=complex)
    w2 = np.array([[0, 1], [-1, 0]], dtype=complex)
    if group is Group.SO_STAR:
        n = 2 * m
        eye, zero = np.eye(n), np.zeros((n, n))
        bilinear = np.block([[zero, eye], [eye, zero]])
        j0 = np.block([[zero, eye], [-eye, zero]]).astype(complex)
    else:
        copies = m if group is Group.SL_H else 2 * m
        j0 = np.kron(np.eye(copies), j2)
        signs = np.ones(copies)
        if group is Group.SP_MM:
            signs[m:] = -1
        bilinear = np.kron(np.diag(signs), w2)
    # u^T B J0 conj(v) = conj(v)^T (B J0)^T u
    return QuaternionicStructure(j0), HermitianForm((bilinear @ j0).T)


@dataclass(frozen=True)
class PairingRecord:
    eigenvalue: complex
    partner: complex
    residual: float


def _require_off_diagonal(model: HiggsModel) -> None:
    if not model.group.is_off_diagonal:
        raise SpectralLabError(f"{model.group.value} models carry no involution")


def involution_pairing(model: HiggsModel, tol: float = DEFAULT_TOL, cluster_tol: float = CLUSTER_TOL) -> list[PairingRecord]:
    """Match eigenvalues into ``(lambda, -lambda)`` pairs and test ``iota`` as intertwiner.

    For each pair the residual is ``||(phi + lambda) iota B|| / max(1, ||phi||)``
    where ``B`` spans the ``lambda``-eigenspace: zero iff ``iota`` carries it
    into the ``-lambda``-eigenspace.
    """
    _require_off_diagonal(model)
    phi = sc.to_complex(model.phi)
    n = phi.shape[0]
    iota = involution_matrix(n // 2)
    scale = max(1.0, sc.norm(phi))
    conj_residual = sc.norm(iota @ phi @ iota + phi) / scale
    coeffs = sc.to_complex(pfaffian_char_poly(model.phi, model.space, tol))
    roots = refine_eigenvalues(phi, find_roots(coeffs))
    thresh = cluster_tol * (1.0 + float(np.max(np.abs(roots))) if roots.size else 1.0)

    if roots.size and np.all(np.abs(roots) <= thresh):
        return [PairingRecord(0j, 0j, conj_residual)]

    unused = list(range(roots.size))
    pairs = []
    while unused:
        i = unused.pop(0)
        target = -roots[i]
        j = min(unused, key=lambda k: abs(roots[k] - target), default=None)
        if j is None or abs(roots[j] - target) > thresh:
            raise UnpairedEigenvalueError(f"eigenvalue {roots[i]:.6g} has no partner {target:.6g}")
        unused.remove(j)
        pairs.append((roots[i], roots[j]))

    if any(len(g) > 1 for g in cluster(roots, cluster_tol)):
        raise ClusteredSpectrumError("spectrum has colliding eigenvalues")

    records = []
    for lam, partner in sorted(pairs, key=lambda pr: sort_key(pr[0])):
        _, _, vh = np.linalg.svd(phi - lam * np.eye(n))
        basis = vh[-2:].conj().T
        residual = sc.norm((phi + lam * np.eye(n)) @ iota @ basis) / scale
        records.append(PairingRecord(complex(lam), complex(partner), max(residual, conj_residual)))
    return records


def fixed_point_signs(model: HiggsModel, tol: float = DEFAULT_TOL, block_tol: float = BLOCK_TOL) -> list[int]:
    """Signs of the involution on ``ker phi``.

    ``iota`` preserves ``ker phi`` whenever ``iota phi iota = -phi``; its
    eigenvectors there are classified ``+1`` when they lie in the first
    block and ``-1`` in the second.  Returned in decreasing order.
    """
    _require_off_diagonal(model)
    phi = sc.to_complex(model.phi)
    n = phi.shape[0]
    scale = max(1.0, sc.norm(phi))
    _, sv, vh = np.linalg.svd(phi)
    kernel = vh[sv <= tol * scale].conj().T
    if kernel.shape[1] == 0:
        raise NoKernelError("phi is invertible: no fixed point here")
    iota = involution_matrix(n // 2)
    restricted = kernel.conj().T @ iota @ kernel
    _, vecs = np.linalg.eigh(0.5 * (restricted + restricted.conj().T))
    signs = []
    first, second = model.first_block, model.second_block
    for u in vecs.T:
        v = kernel @ u
        size = np.linalg.norm(v)
        off_first = np.linalg.norm(v[second])  # distance from the first block
        off_second = np.linalg.norm(v[first])
        if off_first <= block_tol * size:
            signs.append(1)
        elif off_second <= block_tol * size:
            signs.append(-1)
        else:
            raise MixedKernelVectorError(
                f"kernel vector mixes blocks ({off_first / size:.2e}, {off_second / size:.2e})"
            )
    return sorted(signs, reverse=True)


@dataclass(frozen=True, eq=False)
class CayleyResult:
    psi: np.ndarray
    space: SymplecticSpace  # the skew form defined by gamma
    symmetry_residual: float
    char_poly: np.ndarray

    @property
    def symmetric(self) -> bool:
        return self.symmetry_residual <= self.space.tol


def cayley_compose(beta, gamma, tol: float = DEFAULT_TOL) -> CayleyResult:
    """``psi = beta @ gamma``, symmetric for the skew form ``gamma`` when ``gamma`` is invertible."""
    (beta, gamma), exact = _match_backends(beta, gamma)
    _require_skew(beta, exact, tol, "beta")
    _require_skew(gamma, exact, tol, "gamma")
    try:
        space = SymplecticSpace(gamma, tol=tol)
    except SpectralLabError:
        raise SingularGammaError("gamma is singular: not the maximal case") from None
    psi = beta @ gamma
    residual = check_form_symmetric(psi, space)
    return CayleyResult(psi, space, residual, pfaffian_char_poly(psi, space, tol))


# random instances --------------------------------------------------------

def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed & 0xFFFFFFFFFFFFFFFF)


def _random_matrix(rng: np.random.Generator, shape, exact: bool) -> np.ndarray:
    if exact:
        num = rng.integers(-9, 10, size=(2,) + tuple(shape))
        den = rng.integers(1, 5, size=(2,) + tuple(shape))
        out = np.empty(shape, dtype=object)
        for idx in np.ndindex(*shape):
            out[idx] = sc.GaussianRational(Fraction(int(num[0][idx]), int(den[0][idx])),
                                           Fraction(int(num[1][idx]), int(den[1][idx])))
        return out
    return rng.uniform(-1, 1, shape) + 1j * rng.uniform(-1, 1, shape)


def _random_skew(rng, n: int, exact: bool) -> np.ndarray:
    a = _random_matrix(rng, (n, n), exact)
    for i in range(n):
        a[i, i] = 0 * a[i, i]
        for j in range(i):
            a[i, j] = -a[j, i]
    return a


def _random_nondegenerate_skew(rng, n: int, exact: bool) -> np.ndarray:
    while True:
        s = _random_skew(rng, n, exact)
        try:
            SymplecticSpace(s)
        except SpectralLabError:
            continue
        return s


def random_model(group, m: int, seed: int, exact: bool = False) -> HiggsModel:
    """Deterministic random model of the given group.

    Floating entries have real and imaginary parts uniform in ``[-1, 1]``;
    exact entries have parts ``p/q`` with ``p in [-9, 9]``, ``q in [1, 4]``.
    SL_H and SP_MM draw random nondegenerate forms as well.
    """
    group = Group.parse(group)
    if m < 1:
        raise SpectralLabError("m must be at least 1")
    rng = _rng(seed)
    n = 2 * m
    if group is Group.SL_H:
        space = SymplecticSpace(_random_nondegenerate_skew(rng, n, exact))
        return build_sl_quaternion(_random_skew(rng, n, exact), space)
    if group is Group.SO_STAR:
        return build_so_star(_random_skew(rng, n, exact), _random_skew(rng, n, exact))
    space1 = SymplecticSpace(_random_nondegenerate_skew(rng, n, exact))
    space2 = SymplecticSpace(_random_nondegenerate_skew(rng, n, exact))
    return build_sp_mm(_random_matrix(rng, (n, n), exact), space1, space2)


def random_degenerate_model(group, m: int, seed: int) -> HiggsModel:
    """Floating SO_STAR / SP_MM model sitting over a fixed point (``det phi = 0``).

    SO_STAR: ``gamma`` (or ``beta``, chosen by the seed) is skew of rank
    ``2m - 2``.  SP_MM: ``beta`` has rank ``2m - 1``.
    """
    group = Group.parse(group)
    rng = _rng(seed)
    n = 2 * m
    if group is Group.SO_STAR:
        basis = _random_matrix(rng, (n, n), False)
        core = np.zeros((n, n), dtype=complex)
        core[: n - 2, : n - 2] = _random_skew(rng, n - 2, False)
        singular = basis.T @ core @ basis
        generic = _random_skew(rng, n, False)
        if rng.integers(2):
            return build_so_star(singular, generic)
        return build_so_star(generic, singular)
    if group is Group.SP_MM:
        left = _random_matrix(rng, (n, n), False)
        right = _random_matrix(rng, (n, n), False)
        mask = np.ones(n)
        mask[-1] = 0
        beta = left @ np.diag(mask) @ right
        space1 = SymplecticSpace(_random_nondegenerate_skew(rng, n, False))
        space2 = SymplecticSpace(_random_nondegenerate_skew(rng, n, False))
        return build_sp_mm(beta, space1, space2)
    raise SpectralLabError("degenerate models exist only for SO_STAR and SP_MM")
