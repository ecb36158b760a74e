import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spectral_lab.errors import BadLiftError, DimensionMismatchError, NonRegularPointError, WrongGroupError
from spectral_lab.fiber import (
    EquivariantLift,
    assemble_fiber,
    equivariant_split,
    multiplication_operator,
    pairing_gram,
    random_lift,
    residue_pairing,
    retrivialize,
    uniform_lift,
)
from spectral_lab.plane_curve import curve_from_coefficients, random_curve
from spectral_lab.real_forms import Group

SL_DOUBLE = curve_from_coefficients("SL_H", 2, [[0, -1]])  # x^2 - z
SO_DOUBLE = curve_from_coefficients("SO_STAR", 1, [[0, -1]])  # x^2 - z, as an even curve
QUARTIC = curve_from_coefficients("SP_MM", 2, [[-5], [4]])  # x^4 - 5x^2 + 4


def weights_by_sheet(fiber):
    return {round(complex(y).real): complex(w) for y, w in zip(fiber.sheets, fiber.weights)}


def test_assemble_examples():
    fiber = assemble_fiber(SL_DOUBLE, 1)
    assert fiber.dim == 4
    assert weights_by_sheet(fiber) == pytest.approx({1: 0.5, -1: -0.5})
    with pytest.raises(NonRegularPointError):
        assemble_fiber(SL_DOUBLE, 0)
    quartic = assemble_fiber(QUARTIC, 0.2)
    # 1 / (4 y^3 - 10 y)
    assert weights_by_sheet(quartic) == pytest.approx({1: -1 / 6, -1: 1 / 6, 2: 1 / 12, -2: -1 / 12})
    assert quartic.partners == (1, 0, 3, 2)


def test_pairing_examples():
    fiber = assemble_fiber(SL_DOUBLE, 1)
    s = [[1, 2], [3, 4]]
    assert residue_pairing(fiber, s, s) == 0
    on_plus = {1: (1, 0)}
    on_minus = {-1: (0, 1)}
    assert residue_pairing(fiber, on_plus, on_minus) == 0
    assert residue_pairing(fiber, [[1, 0], [1, 0]], [[0, 1], [0, 1]]) == pytest.approx(0)
    assert residue_pairing(fiber, {1: (1, 0)}, {1: (0, 1)}) == pytest.approx(0.5)
    with pytest.raises(DimensionMismatchError):
        residue_pairing(fiber, [[1, 0]], s)
    with pytest.raises(DimensionMismatchError):
        residue_pairing(fiber, {3: (1, 0)}, s)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_pairing_is_bilinear_and_skew(seed):
    rng = np.random.default_rng(seed)
    fiber = assemble_fiber(QUARTIC, complex(rng.uniform(-1, 1), rng.uniform(-1, 1)))
    s, t, u = (rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2)) for _ in range(3))
    a = complex(rng.normal(), rng.normal())
    assert abs(residue_pairing(fiber, s, t) + residue_pairing(fiber, t, s)) < 1e-12
    lhs = residue_pairing(fiber, a * s + u, t)
    rhs = a * residue_pairing(fiber, s, t) + residue_pairing(fiber, u, t)
    assert abs(lhs - rhs) < 1e-12


def test_pairing_skew_exactly_in_rationals():
    # integer sections and power-of-two weights: every product is exact in floating point
    fiber = assemble_fiber(SL_DOUBLE, 1)
    rng = np.random.default_rng(0)
    for _ in range(20):
        s, t = rng.integers(-9, 10, (2, 2)), rng.integers(-9, 10, (2, 2))
        assert residue_pairing(fiber, s, t) == -residue_pairing(fiber, t, s)


def test_multiplication_operator_examples():
    op = multiplication_operator(assemble_fiber(SL_DOUBLE, 1))
    diag = np.diag(op.matrix).real
    assert sorted(diag) == [-1, -1, 1, 1]
    assert op.symmetry_residual == 0.0
    assert np.allclose(op.char_poly, [1, 0, -1], atol=1e-14)
    op = multiplication_operator(assemble_fiber(QUARTIC, 0.7j))
    assert np.allclose(op.char_poly, [1, 0, -5, 0, 4], atol=1e-12)
    assert op.round_trip_residual <= 1e-12


@pytest.mark.parametrize("group", list(Group))
@pytest.mark.parametrize("m", [1, 2, 3])
def test_round_trip_on_random_curves(group, m):
    if group is Group.SL_H and m == 1:
        return
    for seed in range(5):
        curve = random_curve(group, m, seed)
        fiber = assemble_fiber(curve, 0.1 + 0.2j)
        op = multiplication_operator(fiber)
        assert op.round_trip_residual <= 1e-8
        assert op.symmetry_residual <= 1e-12
        assert abs(np.linalg.det(pairing_gram(fiber))) > 0


def test_even_fiber_weights_are_odd():
    fiber = assemble_fiber(random_curve("SO_STAR", 3, 4), 0.3)
    for i, j in enumerate(fiber.partners):
        assert fiber.sheets[j] == pytest.approx(-fiber.sheets[i])
        assert fiber.weights[j] == pytest.approx(-fiber.weights[i])


def test_split_examples():
    fiber = assemble_fiber(SO_DOUBLE, 1)
    plus = equivariant_split(fiber, uniform_lift(fiber, np.eye(2)))
    assert plus.verdict == "double_lagrangian" and plus.holds
    assert np.max(np.abs(plus.gram_plus)) == 0 and np.max(np.abs(plus.gram_minus)) == 0
    assert abs(np.linalg.det(plus.gram_cross)) > 0
    minus = equivariant_split(fiber, uniform_lift(fiber, np.diag([1.0, -1.0])))
    assert minus.verdict == "orthogonal_sum" and minus.holds
    assert np.max(np.abs(minus.gram_cross)) == 0
    assert abs(np.linalg.det(minus.gram_plus)) > 0 and abs(np.linalg.det(minus.gram_minus)) > 0
    with pytest.raises(BadLiftError):
        equivariant_split(fiber, uniform_lift(fiber, np.diag([1.0, 2.0])))


def test_bad_lifts_and_wrong_group():
    fiber = assemble_fiber(SO_DOUBLE, 1)
    not_involution = EquivariantLift(1, (np.eye(2), np.array([[1.0, 1.0], [0.0, 1.0]])))
    with pytest.raises(BadLiftError):
        equivariant_split(fiber, not_involution)
    with pytest.raises(BadLiftError):
        equivariant_split(fiber, EquivariantLift(2, (np.eye(2), np.eye(2))))
    with pytest.raises(WrongGroupError):
        uniform_lift(assemble_fiber(SL_DOUBLE, 1), np.eye(2))


@pytest.mark.parametrize("group", [Group.SO_STAR, Group.SP_MM])
@pytest.mark.parametrize("epsilon", [1, -1])
def test_split_dichotomy_on_random_fibers(group, epsilon):
    for seed in range(25):
        curve = random_curve(group, 1 + seed % 3, seed)
        fiber = assemble_fiber(curve, 0.05 * (seed % 7) + 0.1j)
        result = equivariant_split(fiber, random_lift(fiber, epsilon, seed))
        assert result.holds, (seed, result.intra_residual, result.cross_residual)


@pytest.mark.parametrize("epsilon", [1, -1])
def test_retrivialization_keeps_verdicts(epsilon):
    rng = np.random.default_rng(5)
    for seed in range(10):
        fiber = assemble_fiber(random_curve("SP_MM", 2, seed), 0.2)
        lift = random_lift(fiber, epsilon, seed)
        before = equivariant_split(fiber, lift).verdict
        for sheet in range(fiber.k):
            c = complex(rng.uniform(0.5, 2), rng.uniform(0.5, 2))
            fiber, lift = retrivialize(fiber, lift, sheet, c)
        assert equivariant_split(fiber, lift).verdict == before
