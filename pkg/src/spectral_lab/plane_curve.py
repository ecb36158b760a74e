"""Local model of a spectral curve ``p(x, z) = 0`` over a disc ``|z| <= R``.

Coefficients ``a_i(z)`` are polynomials in the base coordinate ``z`` stored
with ascending powers (constant term first).  Polynomials in the fiber
variable ``x`` are stored highest degree first, as elsewhere in the package.

Shapes:

* ``SL_H``: ``x^m + a_2 x^(m-2) + ... + a_m`` (no ``x^(m-1)`` term)
* ``SO_STAR`` / ``SP_MM``: ``x^(2m) + a_1 x^(2m-2) + ... + a_m`` (even in ``x``)
* quotient of an even curve: ``w^m + a_1 w^(m-1) + ... + a_m`` with ``w = x^2``
"""

from __future__ import annotations

import json
import numbers
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import scalars as sc
from .errors import BadDegreePatternError, NonReducedError, WrongGroupError
from .polyroots import CLUSTER_TOL, cluster, find_roots, sort_key
from .real_forms import Group

DEFAULT_RADIUS = 1.5
DISC_TOL = 1e-9
SINGULAR_TOL = 1e-6
NEWTON_STEPS = 3

__all__ = [
    "PlaneCurve",
    "PointOnBase",
    "BranchPoint",
    "SmoothnessVerdict",
    "FiberRoots",
    "curve_from_coefficients",
    "curve_from_polynomial",
    "random_curve",
    "resultant",
    "smoothness_check",
    "branch_points",
    "sigma_fixed_points",
    "quotient_curve",
    "fiber_roots",
    "classify_point",
    "curve_to_json",
    "curve_from_json",
]


def _zpoly(a) -> tuple:
    if isinstance(a, numbers.Number) or isinstance(a, sc.GaussianRational):
        a = [a]
    a = list(a)
    return tuple(a) if a else (0,)


def _all_exact(values) -> bool:
    return all(isinstance(v, (numbers.Integral, Fraction, sc.GaussianRational)) for v in values)


@dataclass(frozen=True, eq=False)
class PlaneCurve:
    group: Group
    m: int
    coefficients: tuple  # a_i(z), ascending powers of z, in the reduced pattern
    radius: float = DEFAULT_RADIUS
    quotient: bool = False

    @property
    def is_even(self) -> bool:
        return self.group.is_off_diagonal and not self.quotient

    @property
    def x_degree(self) -> int:
        if self.quotient:
            return self.m
        return self.group.x_degree(self.m)

    @property
    def z_degree(self) -> int:
        return max((len(a) - 1 for a in self.coefficients), default=0)

    @property
    def exact(self) -> bool:
        return _all_exact([c for a in self.coefficients for c in a])

    def x_coefficients(self) -> list[tuple]:
        """Coefficient of each power of ``x`` (highest first) as a z-polynomial."""
        n = self.x_degree
        full = [(0,)] * (n + 1)
        full[0] = (1,)
        if self.quotient:
            for i, a in enumerate(self.coefficients, start=1):
                full[i] = a
        elif self.group is Group.SL_H:
            for i, a in enumerate(self.coefficients, start=2):
                full[i] = a
        else:
            for i, a in enumerate(self.coefficients, start=1):
                full[2 * i] = a
        return full

    def coefficient_grid(self) -> np.ndarray:
        """``grid[k, j]`` is the coefficient of ``x^(n-k) z^j``."""
        full = self.x_coefficients()
        d = self.z_degree
        exact = self.exact
        grid = sc.zeros((len(full), d + 1), exact)
        for k, a in enumerate(full):
            for j, c in enumerate(a):
                grid[k, j] = sc.to_exact([c])[0] if exact else complex(c)
        return grid

    @cached_property
    def _grid_c(self) -> np.ndarray:
        return sc.to_complex(self.coefficient_grid())

    def at(self, z0) -> np.ndarray:
        """Coefficients of ``p(., z0)`` in ``x`` (floating)."""
        return self._grid_c @ (complex(z0) ** np.arange(self._grid_c.shape[1]))

    def _partials(self, x, z):
        """``(p, p_x, p_z, p_xx, p_xz)`` at ``(x, z)``."""
        grid = self._grid_c
        n = grid.shape[0] - 1
        pw = n - np.arange(n + 1)  # x-exponent of each row
        x = complex(x)
        xp = x ** pw
        dxp = np.where(pw >= 1, pw * x ** np.maximum(pw - 1, 0), 0)
        ddxp = np.where(pw >= 2, pw * (pw - 1) * x ** np.maximum(pw - 2, 0), 0)
        j = np.arange(grid.shape[1])
        z = complex(z)
        zc = grid @ z ** j
        dzc = grid @ np.where(j >= 1, j * z ** np.maximum(j - 1, 0), 0)
        return (complex(xp @ zc), complex(dxp @ zc), complex(xp @ dzc),
                complex(ddxp @ zc), complex(dxp @ dzc))

    def evaluate(self, x, z) -> complex:
        return self._partials(x, z)[0]

    def dx(self, x, z) -> complex:
        return self._partials(x, z)[1]

    def dz(self, x, z) -> complex:
        return self._partials(x, z)[2]

    def scale(self) -> float:
        return max(1.0, float(np.max(np.abs(self._grid_c))))

    def in_disc(self, z) -> bool:
        return abs(z) <= self.radius + DISC_TOL


@dataclass(frozen=True)
class PointOnBase:
    z0: complex
    classification: str  # regular | branch | sigma_fixed_image


@dataclass(frozen=True)
class BranchPoint:
    z: complex
    multiplicity: int


@dataclass(frozen=True)
class SmoothnessVerdict:
    smooth: bool
    singular_at: tuple = ()  # (x, z) pairs
    non_reduced: bool = False


@dataclass(frozen=True)
class FiberRoots:
    roots: tuple  # with multiplicity; even curves list sigma-pairs consecutively
    multiplicities: tuple  # (root, multiplicity) per distinct root
    pairs: tuple | None  # ((y, -y), ...) for even curves
    regular: bool


# construction -------------------------------------------------------------

def _pattern_length(group: Group, m: int) -> int:
    return m - 1 if group is Group.SL_H else m


def curve_from_coefficients(group, m: int, a, radius: float = DEFAULT_RADIUS) -> PlaneCurve:
    """Curve from the reduced coefficient list ``[a_2..a_m]`` (SL_H) or ``[a_1..a_m]``."""
    group = Group.parse(group)
    a = list(a)
    if m < 1 or len(a) != _pattern_length(group, m):
        raise BadDegreePatternError(
            f"{group.value} with m={m} takes {_pattern_length(group, m)} coefficients, got {len(a)}"
        )
    return PlaneCurve(group, m, tuple(_zpoly(c) for c in a), float(radius))


def curve_from_polynomial(group, m: int, x_coeffs, radius: float = DEFAULT_RADIUS) -> PlaneCurve:
    """Curve from every ``x``-coefficient (highest first), validating the shape."""
    group = Group.parse(group)
    full = [_zpoly(c) for c in x_coeffs]
    n = group.x_degree(m)
    if len(full) != n + 1:
        raise BadDegreePatternError(f"expected degree {n} in x, got {len(full) - 1}")
    if not (full[0][0] == 1 and not any(full[0][1:])):
        raise BadDegreePatternError("polynomial must be monic in x")

    def vanishes(c):
        return not any(c)

    if group is Group.SL_H:
        if n >= 1 and not vanishes(full[1]):
            raise BadDegreePatternError("SL_H curves have no x^(m-1) term")
        reduced = full[2:]
    else:
        odd = [k for k in range(1, n + 1, 2) if not vanishes(full[k])]
        if odd:
            raise BadDegreePatternError(f"{group.value} curves are even in x; odd terms at x^{n - odd[0]}")
        reduced = full[2::2]
    return PlaneCurve(group, m, tuple(reduced), float(radius))


def random_curve(group, m: int, seed: int, degree: int = 4, radius: float = DEFAULT_RADIUS) -> PlaneCurve:
    """Coefficients of each ``a_i`` have real and imaginary parts uniform in ``[-1, 1]``."""
    group = Group.parse(group)
    rng = np.random.default_rng(seed & 0xFFFFFFFFFFFFFFFF)
    count = _pattern_length(group, m)
    raw = rng.uniform(-1, 1, (count, degree + 1)) + 1j * rng.uniform(-1, 1, (count, degree + 1))
    return PlaneCurve(group, m, tuple(tuple(complex(c) for c in row) for row in raw), float(radius))


# resultant ----------------------------------------------------------------

def _sylvester(f, g) -> np.ndarray:
    nf, ng = len(f) - 1, len(g) - 1
    size = nf + ng
    exact = f.dtype == object
    mat = sc.zeros((size, size), exact)
    for i in range(ng):
        mat[i, i:i + nf + 1] = f
    for i in range(nf):
        mat[ng + i, i:i + ng + 1] = g
    return mat


def _fiber_poly(grid: np.ndarray, z) -> np.ndarray:
    out = np.empty(grid.shape[0], dtype=grid.dtype)
    for k, row in enumerate(grid):
        out[k] = sc.polyval(list(row[::-1]), z)
    return out


def _derivative(f: np.ndarray) -> np.ndarray:
    n = len(f) - 1
    return np.array([(n - k) * f[k] for k in range(n)], dtype=f.dtype)


def _resultant_data(curve: PlaneCurve) -> tuple[np.ndarray, bool]:
    """Resultant coefficients plus whether it vanishes identically."""
    grid = curve.coefficient_grid()
    n = grid.shape[0] - 1
    if n < 1:
        return np.array([1.0 + 0j]), False
    bound = (2 * n - 1) * curve.z_degree
    if curve.exact:
        nodes = list(range(bound + 1))
        values = []
        for z in nodes:
            f = _fiber_poly(grid, sc.GaussianRational(z))
            values.append(sc.exact_det(_sylvester(f, _derivative(f))))
        coeffs = np.array(sc.interpolate_exact(nodes, values)[::-1], dtype=object)
        return coeffs, sc.all_zero(coeffs)
    rho = max(1.0, curve.radius)
    nodes = rho * np.exp(2j * np.pi * np.arange(bound + 1) / (bound + 1))
    values = np.empty(bound + 1, dtype=complex)
    ratio = 0.0
    for k, z in enumerate(nodes):
        f = _fiber_poly(grid, z)
        syl = _sylvester(f, _derivative(f))
        values[k] = np.linalg.det(syl)
        # Hadamard's bound at this node
        ratio = max(ratio, abs(values[k]) / float(np.prod(np.linalg.norm(syl, axis=1))))
    coeffs = np.fft.fft(values) / (bound + 1) / rho ** np.arange(bound + 1)
    return coeffs, ratio <= 1e-12


def resultant(curve: PlaneCurve) -> np.ndarray:
    """``Res_x(p, dp/dx)`` as a polynomial in ``z`` (ascending powers).

    Exact curves: Sylvester determinants at integer nodes, interpolated in
    Q(i).  Floating curves: determinants at roots of unity scaled by
    ``max(1, R)``, recovered with an inverse DFT.  Both use the degree
    bound ``(2n - 1) * deg_z``.
    """
    return _resultant_data(curve)[0]


def _refine_branch(curve: PlaneCurve, z: complex, x: complex | None = None, steps: int = 8):
    """Newton on ``(p, dp/dx) = 0`` in ``(x, z)``; returns the refined pair."""
    if x is None:
        xs = find_roots(curve.at(z))
        if xs.size == 0:
            return None, z
        x = min(xs, key=lambda r: abs(curve.dx(r, z)))
    for _ in range(steps):
        p, px, pz, pxx, pxz = curve._partials(x, z)
        res = abs(p) + abs(px)
        if res == 0:
            break
        jac = np.array([[px, pz], [pxx, pxz]])
        try:
            dx, dz = np.linalg.solve(jac, [-p, -px])
        except np.linalg.LinAlgError:
            break
        cand = curve._partials(x + dx, z + dz)
        if abs(cand[0]) + abs(cand[1]) >= res or not np.isfinite(dx) or not np.isfinite(dz):
            break
        x, z = x + dx, z + dz
    return x, z


def branch_points(curve: PlaneCurve) -> list[BranchPoint]:
    """Zeros of the discriminant inside the disc, with multiplicities."""
    res, vanishes = _resultant_data(curve)
    if vanishes:
        raise NonReducedError("p and dp/dx share a factor: curve is not reduced")
    coeffs = sc.to_complex(res)[::-1]
    approx = find_roots(coeffs, NEWTON_STEPS)
    # generous pre-filter; refinement can move roots slightly across the boundary
    approx = [z for z in approx if abs(z) <= curve.radius * 1.1 + 0.1]
    refined = np.array([_refine_branch(curve, z)[1] for z in approx], dtype=complex)
    out = []
    for group in cluster(refined, CLUSTER_TOL):
        z = complex(np.mean(refined[group]))
        if curve.in_disc(z):
            out.append(BranchPoint(z, len(group)))
    return out


def _collisions(roots: np.ndarray, tol: float) -> list[complex]:
    return [complex(np.mean(roots[g])) for g in cluster(roots, tol) if len(g) > 1]


def smoothness_check(curve: PlaneCurve, tol: float = SINGULAR_TOL) -> SmoothnessVerdict:
    """Singular points over the disc: common zeros of ``p``, ``p_x`` and ``p_z``."""
    try:
        points = branch_points(curve)
    except NonReducedError:
        return SmoothnessVerdict(False, (), True)
    scale = curve.scale()
    singular = []
    for bp in points:
        roots = find_roots(curve.at(bp.z))
        # sqrt-eps loose: near a double root, roots only agree to ~1e-8
        for x in _collisions(roots, 1e-6):
            if abs(curve.dz(x, bp.z)) <= tol * scale:
                singular.append((x, bp.z))
    return SmoothnessVerdict(not singular, tuple(singular), False)


def _require_even(curve: PlaneCurve) -> None:
    if not curve.is_even:
        raise WrongGroupError("only SO_STAR / SP_MM spectral curves carry the involution x -> -x")


def sigma_fixed_points(curve: PlaneCurve) -> list[complex]:
    """Zeros of ``a_m`` in the disc, i.e. the images of points with ``x = 0``."""
    _require_even(curve)
    a_m = curve.coefficients[-1]
    if not any(a_m):
        raise NonReducedError("a_m vanishes identically: x^2 divides p")
    roots = find_roots(sc.to_complex(np.array(a_m, dtype=object))[::-1], NEWTON_STEPS)
    return sorted((complex(z) for z in roots if curve.in_disc(z)), key=sort_key)


def quotient_curve(curve: PlaneCurve) -> PlaneCurve:
    """The curve ``w^m + a_1 w^(m-1) + ... + a_m = 0`` with ``w = x^2``."""
    _require_even(curve)
    return PlaneCurve(curve.group, curve.m, curve.coefficients, curve.radius, quotient=True)


def _pair_key(y: complex) -> tuple:
    # representative of {y, -y}: positive real part, or positive imaginary on the axis
    rep = y if (y.real > 0 or (y.real == 0 and y.imag >= 0)) else -y
    return sort_key(rep)


def fiber_roots(curve: PlaneCurve, z0, cluster_tol: float = CLUSTER_TOL) -> FiberRoots:
    roots = find_roots(curve.at(z0), NEWTON_STEPS)
    groups = cluster(roots, cluster_tol)
    regular = all(len(g) == 1 for g in groups)
    mult = tuple((complex(np.mean(roots[g])), len(g)) for g in groups)
    if not curve.is_even:
        ordered = tuple(complex(r) for r in sorted(roots, key=sort_key))
        return FiberRoots(ordered, mult, None, regular)

    thresh = cluster_tol * (1.0 + (float(np.max(np.abs(roots))) if roots.size else 0.0))
    unused = sorted(range(roots.size), key=lambda i: _pair_key(roots[i]))
    pairs = []
    while unused:
        i = unused.pop(0)
        j = min(unused, key=lambda k: abs(roots[k] + roots[i]), default=None)
        if j is None or abs(roots[j] + roots[i]) > thresh:
            # cannot happen for an even polynomial beyond rounding
            raise WrongGroupError(f"root {roots[i]} has no sigma-partner")
        unused.remove(j)
        y = roots[i] if _is_rep(roots[i]) else roots[j]
        pairs.append((complex(y), complex(-y if abs(y) > thresh else y)))
    pairs.sort(key=lambda pr: _pair_key(pr[0]))
    ordered = tuple(v for pr in pairs for v in pr)
    return FiberRoots(ordered, mult, tuple(pairs), regular)


def _is_rep(y: complex) -> bool:
    return y.real > 0 or (y.real == 0 and y.imag >= 0)


def classify_point(curve: PlaneCurve, z0) -> PointOnBase:
    if curve.is_even:
        a_m = sc.to_complex(np.array(curve.coefficients[-1], dtype=object))
        if abs(np.polyval(a_m[::-1], z0)) <= CLUSTER_TOL * curve.scale():
            return PointOnBase(complex(z0), "sigma_fixed_image")
    fr = fiber_roots(curve, z0)
    return PointOnBase(complex(z0), "regular" if fr.regular else "branch")


# serialization --------------------------------------------------------------

def curve_to_json(curve: PlaneCurve) -> str:
    """``{"group", "m", "R", "coefficients": [[[re, im], ...], ...]}`` (+ ``quotient`` if set)."""
    payload = {
        "group": curve.group.value,
        "m": curve.m,
        "R": curve.radius,
        "coefficients": [[[complex(c).real, complex(c).imag] for c in a] for a in curve.coefficients],
    }
    if curve.quotient:
        payload["quotient"] = True
    return json.dumps(payload, sort_keys=True)


def curve_from_json(text: str) -> PlaneCurve:
    data = json.loads(text)
    coeffs = [[complex(re, im) for re, im in a] for a in data["coefficients"]]
    curve = curve_from_coefficients(data["group"], int(data["m"]), coeffs, float(data.get("R", DEFAULT_RADIUS)))
    if data.get("quotient"):
        curve = quotient_curve(curve)
    return curve
