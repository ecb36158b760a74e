"""Fiber of the direct image over a regular base point.

Over a regular ``z0`` the fiber is ``V = (+)_y E_y``, one 2-dimensional
summand per sheet ``y`` of ``p(., z0) = 0``.  Vectors in ``V`` are laid out
sheet by sheet: coordinate ``2 i + a`` is component ``a`` of sheet ``i``.
The skew pairing is the residue sum

    <s, s'> = sum_i vol_i * det(s_i, s'_i) / p_x(y_i, z0)

so the derivative of the projection enters as the weight ``1 / p_x``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadLiftError,
    DegenerateFormError,
    DegeneratePairingError,
    DimensionMismatchError,
    NonRegularPointError,
    WrongGroupError,
)
from .pfaffian_spectra import pfaffian_char_poly
from .plane_curve import PlaneCurve, fiber_roots
from .structured_linalg import DEFAULT_TOL, SymplecticSpace, check_form_symmetric

J2 = np.array([[0, 1], [-1, 0]], dtype=complex)
LIFT_TOL = 1e-9

__all__ = [
    "FiberModel",
    "EquivariantLift",
    "MultiplicationOperator",
    "SplitResult",
    "assemble_fiber",
    "residue_pairing",
    "pairing_gram",
    "multiplication_operator",
    "uniform_lift",
    "random_lift",
    "equivariant_split",
    "retrivialize",
]


@dataclass(frozen=True, eq=False)
class FiberModel:
    curve: PlaneCurve
    z0: complex
    sheets: tuple  # x-roots y_1..y_k; even curves list sigma-pairs consecutively
    weights: tuple  # 1 / p_x(y_i, z0)
    volumes: tuple  # area form on E_{y_i} is volumes[i] * det
    partners: tuple | None  # index of sigma(y_i), even curves only

    @property
    def k(self) -> int:
        return len(self.sheets)

    @property
    def dim(self) -> int:
        return 2 * self.k


@dataclass(frozen=True, eq=False)
class EquivariantLift:
    """Maps ``tau_i: E_{y_i} -> E_{sigma(y_i)}``, one per sheet, with ``det = epsilon``."""

    epsilon: int
    maps: tuple


@dataclass(frozen=True, eq=False)
class MultiplicationOperator:
    matrix: np.ndarray
    space: SymplecticSpace
    symmetry_residual: float
    char_poly: np.ndarray
    round_trip_residual: float  # relative distance of char_poly from p(., z0)


@dataclass(frozen=True, eq=False)
class SplitResult:
    epsilon: int
    v_plus: np.ndarray  # columns span the invariant part
    v_minus: np.ndarray
    gram_plus: np.ndarray
    gram_minus: np.ndarray
    gram_cross: np.ndarray
    intra_residual: float  # scaled max |entry| of the two diagonal blocks
    cross_residual: float  # scaled max |entry| of the cross block
    nondegeneracy: float  # scaled smallest singular value of the block(s) that must be invertible
    verdict: str  # double_lagrangian | orthogonal_sum | inconsistent

    @property
    def holds(self) -> bool:
        expected = "double_lagrangian" if self.epsilon == 1 else "orthogonal_sum"
        return self.verdict == expected


def assemble_fiber(curve: PlaneCurve, z0, volumes=None) -> FiberModel:
    z0 = complex(z0)
    roots = fiber_roots(curve, z0)
    if not roots.regular:
        raise NonRegularPointError(f"z0 = {z0} is a branch point")
    sheets = roots.roots
    weights = tuple(1.0 / curve.dx(y, z0) for y in sheets)
    if volumes is None:
        volumes = (1.0,) * len(sheets)
    elif len(volumes) != len(sheets):
        raise DimensionMismatchError("one volume per sheet")
    partners = None
    if curve.is_even:
        partners = tuple(i + 1 if i % 2 == 0 else i - 1 for i in range(len(sheets)))
    return FiberModel(curve, z0, tuple(sheets), weights, tuple(complex(v) for v in volumes), partners)


def _section(fiber: FiberModel, s) -> np.ndarray:
    """Section values as a ``(k, 2)`` array; a dict is keyed by sheet value."""
    if isinstance(s, dict):
        out = np.zeros((fiber.k, 2), dtype=complex)
        sheets = np.array(fiber.sheets)
        for label, vec in s.items():
            i = int(np.argmin(np.abs(sheets - label)))
            if abs(sheets[i] - label) > 1e-6 * (1 + abs(label)):
                raise DimensionMismatchError(f"no sheet at x = {label}")
            out[i] = vec
        return out
    arr = np.asarray(s, dtype=complex)
    if arr.shape != (fiber.k, 2):
        raise DimensionMismatchError(f"section must have shape ({fiber.k}, 2), got {arr.shape}")
    return arr


def residue_pairing(fiber: FiberModel, s, s2) -> complex:
    a, b = _section(fiber, s), _section(fiber, s2)
    dets = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
    return complex(np.sum(np.array(fiber.volumes) * np.array(fiber.weights) * dets))


def pairing_gram(fiber: FiberModel) -> np.ndarray:
    """Matrix of the residue pairing in the sheet-by-sheet basis of ``V``."""
    scale = np.array(fiber.volumes) * np.array(fiber.weights)
    return np.kron(np.diag(scale), J2)


def multiplication_operator(fiber: FiberModel, tol: float = DEFAULT_TOL) -> MultiplicationOperator:
    """``x`` acting as ``y_i`` on ``E_{y_i}``, with its Pfaffian polynomial for the pairing."""
    try:
        space = SymplecticSpace(pairing_gram(fiber), tol=tol)
    except DegenerateFormError:
        raise DegeneratePairingError("residue pairing is degenerate") from None
    mat = np.kron(np.diag(np.array(fiber.sheets, dtype=complex)), np.eye(2))
    residual = check_form_symmetric(mat, space)
    char_poly = pfaffian_char_poly(mat, space, tol)
    target = fiber.curve.at(fiber.z0)
    round_trip = float(np.max(np.abs(char_poly - target))) / max(1.0, float(np.max(np.abs(target))))
    return MultiplicationOperator(mat, space, residual, char_poly, round_trip)


def _require_even(fiber: FiberModel) -> None:
    if fiber.partners is None:
        raise WrongGroupError("equivariant splittings need an SO_STAR / SP_MM curve")


def uniform_lift(fiber: FiberModel, tau) -> EquivariantLift:
    """Use ``tau`` from each pair's first sheet to its partner and ``tau^-1`` back."""
    _require_even(fiber)
    tau = np.asarray(tau, dtype=complex)
    inv = np.linalg.inv(tau)
    maps = [tau if i % 2 == 0 else inv for i in range(fiber.k)]
    det = np.linalg.det(tau)
    return EquivariantLift(1 if det.real >= 0 else -1, tuple(maps))


def random_lift(fiber: FiberModel, epsilon: int, seed: int) -> EquivariantLift:
    """Random ``tau`` per pair with ``det tau = epsilon`` (normalized by the volumes)."""
    _require_even(fiber)
    rng = np.random.default_rng(seed & 0xFFFFFFFFFFFFFFFF)
    maps = [None] * fiber.k
    for i in range(0, fiber.k, 2):
        j = fiber.partners[i]
        raw = rng.uniform(-1, 1, (2, 2)) + 1j * rng.uniform(-1, 1, (2, 2))
        det_target = epsilon * fiber.volumes[i] / fiber.volumes[j]
        tau = raw * np.sqrt(det_target / np.linalg.det(raw))
        maps[i], maps[j] = tau, np.linalg.inv(tau)
    return EquivariantLift(epsilon, tuple(maps))


def _check_lift(fiber: FiberModel, lift: EquivariantLift) -> None:
    if lift.epsilon not in (1, -1):
        raise BadLiftError("epsilon must be +1 or -1")
    if len(lift.maps) != fiber.k:
        raise BadLiftError("one map per sheet")
    for i, tau in enumerate(lift.maps):
        tau = np.asarray(tau, dtype=complex)
        j = fiber.partners[i]
        # determinant measured against the area forms of E_i and E_j
        det = np.linalg.det(tau) * fiber.volumes[j] / fiber.volumes[i]
        if abs(det - lift.epsilon) > LIFT_TOL:
            raise BadLiftError(f"map on sheet {i} has determinant {det:.6g}, expected {lift.epsilon}")
        back = np.asarray(lift.maps[j], dtype=complex) @ tau
        if np.linalg.norm(back - np.eye(2)) > 1e-9 * max(1.0, np.linalg.norm(tau) ** 2):
            raise BadLiftError(f"lift does not square to the identity on sheet {i}")


def equivariant_split(fiber: FiberModel, lift: EquivariantLift, tol: float = DEFAULT_TOL) -> SplitResult:
    """Split ``V`` into the +1 / -1 parts of the lifted involution and test the pairing.

    ``epsilon = +1``: both parts should be Lagrangian and paired with each
    other (``V = W (+) W*``).  ``epsilon = -1``: the parts should be
    orthogonal and each nondegenerate (``V = W1 (+) W2``).
    """
    _require_even(fiber)
    _check_lift(fiber, lift)
    k = fiber.k
    lifted = np.zeros((2 * k, 2 * k), dtype=complex)
    for i, tau in enumerate(lift.maps):
        j = fiber.partners[i]
        lifted[2 * j:2 * j + 2, 2 * i:2 * i + 2] = tau
    plus, minus = [], []
    for i in range(0, k, 2):
        for a in range(2):
            e = np.zeros(2 * k, dtype=complex)
            e[2 * i + a] = 1
            plus.append(e + lifted @ e)
            minus.append(e - lifted @ e)
    v_plus, v_minus = np.array(plus).T, np.array(minus).T
    gram = pairing_gram(fiber)
    g_pp = v_plus.T @ gram @ v_plus
    g_mm = v_minus.T @ gram @ v_minus
    g_pm = v_plus.T @ gram @ v_minus

    weight = float(np.max(np.abs(np.array(fiber.volumes) * np.array(fiber.weights))))
    section = float(max(np.max(np.abs(v_plus)), np.max(np.abs(v_minus))))
    scale = weight * section ** 2
    intra = float(max(np.max(np.abs(g_pp)), np.max(np.abs(g_mm)))) / scale
    cross = float(np.max(np.abs(g_pm))) / scale

    def smallest_sv(block):
        return float(np.linalg.svd(block, compute_uv=False)[-1]) / scale

    if lift.epsilon == 1:
        nondeg = smallest_sv(g_pm)
        ok = intra <= tol and nondeg > tol
        verdict = "double_lagrangian" if ok else "inconsistent"
    else:
        nondeg = min(smallest_sv(g_pp), smallest_sv(g_mm))
        ok = cross <= tol and nondeg > tol
        verdict = "orthogonal_sum" if ok else "inconsistent"
    return SplitResult(lift.epsilon, v_plus, v_minus, g_pp, g_mm, g_pm, intra, cross, nondeg, verdict)


def retrivialize(fiber: FiberModel, lift: EquivariantLift, sheet: int, c: complex):
    """Multiply the area form of ``E_{y_sheet}`` by ``c``, adjusting coordinates to match.

    Coordinates on that summand are divided by ``sqrt(c)``, so the lift's
    matrices into and out of it are rescaled; the intrinsic lift is unchanged.
    """
    c = complex(c)
    root = np.sqrt(c)
    volumes = list(fiber.volumes)
    volumes[sheet] *= c
    maps = [np.asarray(t, dtype=complex).copy() for t in lift.maps]
    j = fiber.partners[sheet]
    maps[sheet] = maps[sheet] * root
    maps[j] = maps[j] / root
    new_fiber = FiberModel(fiber.curve, fiber.z0, fiber.sheets, fiber.weights, tuple(volumes), fiber.partners)
    return new_fiber, EquivariantLift(lift.epsilon, tuple(maps))
