"""Integer bookkeeping: genera, degrees, dimension counts and component counts.

Everything is exact Python ``int`` arithmetic.  ``g = 1`` is evaluated
literally and flagged ``degenerate`` in reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DegenerateCaseError, MOutOfRangeError
from .real_forms import Group

__all__ = [
    "NumerologyReport",
    "GRRResult",
    "LefschetzResult",
    "MilnorWoodVerdict",
    "spectral_genus",
    "determinant_degree",
    "grr_degree",
    "lefschetz_degree",
    "milnor_wood",
    "moduli_dimensions",
    "component_count",
    "complex_group_dimension",
    "fixed_point_count",
    "sections_dimension",
    "identity_sweep",
]


def sections_dimension(j: int, g: int) -> int:
    """``h^0(K^j)`` on a curve of genus ``g`` for ``j >= 2`` (Riemann-Roch)."""
    return (2 * j - 1) * (g - 1)


def complex_group_dimension(group, m: int) -> int:
    group = Group.parse(group)
    if group is Group.SL_H:
        return 4 * m * m - 1  # SL(2m, C)
    if group is Group.SO_STAR:
        return 2 * m * (4 * m - 1)  # SO(4m, C)
    return 2 * m * (4 * m + 1)  # Sp(4m, C)


def fixed_point_count(m: int, g: int) -> int:
    """Zeros of ``a_m``, a section of ``K^(2m)``."""
    return 4 * m * (g - 1)


def spectral_genus(group, m: int, g: int) -> tuple[int, int | None]:
    """Genus of the spectral curve and, for the off-diagonal groups, of its quotient."""
    group = Group.parse(group)
    if group is Group.SL_H:
        return m * m * (g - 1) + 1, None
    return 4 * m * m * (g - 1) + 1, m * (2 * m - 1) * (g - 1) + 1


def determinant_degree(m: int, g: int) -> int:
    """``deg E = deg pi^*K^(m-1) = m (m-1)(2g-2)`` for an ``m``-sheeted cover."""
    return m * (m - 1) * (2 * g - 2)


@dataclass(frozen=True)
class GRRResult:
    deg_W: int
    threshold: int  # largest deg L allowed by semistability
    semistable: bool


def grr_degree(m: int, g: int, deg_L: int) -> GRRResult:
    """Degree of the rank-``m`` direct image of ``L`` from ``(1-g)m + deg W = (1-g_S) + deg L``."""
    g_s, _ = spectral_genus(Group.SL_H, m, g)
    deg_W = (1 - g_s) + deg_L - (1 - g) * m
    threshold = m * (m - 1) * (g - 1)
    return GRRResult(deg_W, threshold, deg_L <= threshold)


@dataclass(frozen=True)
class LefschetzResult:
    h_diff: int  # h0(E+ (x) L) - h0(E- (x) L)
    h_sum: int  # h0(V (x) L)
    h_plus: int
    deg_W: int


def lefschetz_degree(m: int, g: int, M: int, deg_L: int) -> LefschetzResult:
    """``deg W`` when the involution acts by ``+1`` at ``M`` of the fixed points.

    Solves the fixed-point formula, Riemann-Roch for ``V`` and Riemann-Roch
    for ``W`` for ``deg W``; the answer ``2M - 4m(g-1)`` does not involve
    ``deg_L``.
    """
    fixed = fixed_point_count(m, g)
    if not 0 <= M <= fixed:
        raise MOutOfRangeError(f"M must lie in [0, {fixed}], got {M}")
    h_diff = 2 * (M - (fixed - M))
    h_sum = 4 * m * (1 - g + deg_L)
    h_plus, rem = divmod(h_sum + h_diff, 2)
    assert rem == 0
    deg_W = h_plus - 2 * m * ((1 - g) + deg_L)
    assert deg_W == 2 * M - 4 * m * (g - 1)
    return LefschetzResult(h_diff, h_sum, h_plus, deg_W)


@dataclass(frozen=True)
class MilnorWoodVerdict:
    bound: int
    deg_W: int
    passes: bool


def milnor_wood(m: int, g: int, deg_W: int) -> MilnorWoodVerdict:
    bound = 4 * m * (g - 1)
    return MilnorWoodVerdict(bound, deg_W, abs(deg_W) <= bound)


def component_count(m: int, g: int) -> int:
    """Components of the SO_STAR fiber: ``2 ** (4m(g-1) - 1)``."""
    fixed = fixed_point_count(m, g)
    if fixed < 1:
        raise DegenerateCaseError("no fixed points: the count needs 4m(g-1) >= 1")
    return 2 ** (fixed - 1)


@dataclass(frozen=True)
class NumerologyReport:
    group: Group
    m: int
    g: int
    g_S: int
    g_Sbar: int | None
    deg_E: int
    base_dim: int
    fiber_dim: int
    parabolic_dim: int
    total_dim: int
    expected_total: int  # (g - 1) * dim G^c
    real_dim: int  # (2g - 2) * dim G^r
    milnor_wood_bound: int | None
    component_count: int | None
    degenerate: bool
    degree_table: tuple = field(default=())  # (M, deg W, M odd) for SO_STAR

    @property
    def consistent(self) -> bool:
        return self.total_dim == self.expected_total and self.real_dim == 2 * self.total_dim

    def as_dict(self) -> dict:
        return {
            "group": self.group.value,
            "m": self.m,
            "g": self.g,
            "g_S": self.g_S,
            "g_Sbar": self.g_Sbar,
            "deg_E": self.deg_E,
            "base_dim": self.base_dim,
            "fiber_dim": self.fiber_dim,
            "parabolic_dim": self.parabolic_dim,
            "total_dim": self.total_dim,
            "expected_total": self.expected_total,
            "real_dim": self.real_dim,
            "milnor_wood_bound": self.milnor_wood_bound,
            # may exceed 64 bits
            "component_count": None if self.component_count is None else str(self.component_count),
            "degenerate": self.degenerate,
            "consistent": self.consistent,
            "degree_table": [list(row) for row in self.degree_table],
        }


def moduli_dimensions(group, m: int, g: int) -> NumerologyReport:
    """Base, fiber and (for SP_MM) parabolic dimensions of the integrable system.

    The base is the space of Pfaffian polynomials, counted from
    ``h^0(K^j)``; the fiber is the moduli of rank-2 bundles with fixed
    determinant on ``S`` (SL_H) or on the quotient ``S/sigma``.
    """
    group = Group.parse(group)
    g_s, g_sbar = spectral_genus(group, m, g)
    n = group.x_degree(m)
    parabolic = 0
    mw = comps = None
    table = ()
    if group is Group.SL_H:
        base = sum(sections_dimension(j, g) for j in range(2, m + 1))
        fiber = 3 * (g_s - 1)
    else:
        base = sum(sections_dimension(2 * i, g) for i in range(1, m + 1))
        fiber = 3 * (g_sbar - 1)
        mw = 4 * m * (g - 1)
        if group is Group.SP_MM:
            parabolic = fixed_point_count(m, g)  # one P^1 of flags per fixed point
        else:
            if fixed_point_count(m, g) >= 1:
                comps = component_count(m, g)
            table = tuple(
                (M, lefschetz_degree(m, g, M, 0).deg_W, M % 2 == 1)
                for M in range(fixed_point_count(m, g) + 1)
            )
    dim_gc = complex_group_dimension(group, m)
    return NumerologyReport(
        group=group,
        m=m,
        g=g,
        g_S=g_s,
        g_Sbar=g_sbar,
        deg_E=determinant_degree(n, g),
        base_dim=base,
        fiber_dim=fiber,
        parabolic_dim=parabolic,
        total_dim=base + fiber + parabolic,
        expected_total=(g - 1) * dim_gc,
        real_dim=(2 * g - 2) * dim_gc,
        milnor_wood_bound=mw,
        component_count=comps,
        degenerate=g <= 1,
        degree_table=table,
    )


def identity_sweep(max_m: int = 20, max_g: int = 20, full_m_range: int = 4) -> tuple[int, list[str]]:
    """Check every closed-form identity over ``1 <= m <= max_m``, ``2 <= g <= max_g``.

    The fixed-point degree formula is checked at ``M`` in
    ``{0, 1, 2m(g-1), 4m(g-1)}`` for every pair and at every admissible
    ``M`` when ``m, g - 1 <= full_m_range``; ``deg L`` runs over
    ``[-50, 50]`` each time.  Returns ``(checked, failures)``.
    """
    checked = 0
    failures = []

    def expect(ok: bool, label: str) -> None:
        nonlocal checked
        checked += 1
        if not ok:
            failures.append(label)

    for m in range(1, max_m + 1):
        for g in range(2, max_g + 1):
            for group in Group:
                rep = moduli_dimensions(group, m, g)
                expect(rep.consistent, f"dimension {group.value} m={m} g={g}")
            fixed = fixed_point_count(m, g)
            if m <= full_m_range and g - 1 <= full_m_range:
                ms = range(fixed + 1)
            else:
                ms = sorted({0, 1, fixed // 2, fixed})
            for M in ms:
                target = 2 * M - 4 * m * (g - 1)
                ok = all(lefschetz_degree(m, g, M, d).deg_W == target for d in range(-50, 51))
                expect(ok, f"lefschetz m={m} g={g} M={M}")
            mw = milnor_wood(m, g, 0).bound
            expect(mw == lefschetz_degree(m, g, fixed, 0).deg_W == -lefschetz_degree(m, g, 0, 0).deg_W,
                   f"milnor-wood extremes m={m} g={g}")
            deg_E = determinant_degree(m, g)
            for d in range(-50, 51):
                res = grr_degree(m, g, d)
                expect(res.semistable == (res.deg_W <= 0) == (2 * d <= deg_E), f"grr chain m={m} g={g} L={d}")
            expect(component_count(m, g) == 2 ** (fixed - 1), f"components m={m} g={g}")
    return checked, failures
