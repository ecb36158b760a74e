import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spectral_lab.errors import BadDegreePatternError, NonReducedError, WrongGroupError
from spectral_lab.plane_curve import (
    branch_points,
    classify_point,
    curve_from_coefficients,
    curve_from_json,
    curve_to_json,
    curve_from_polynomial,
    fiber_roots,
    quotient_curve,
    random_curve,
    resultant,
    sigma_fixed_points,
    smoothness_check,
)
from spectral_lab.polyroots import find_roots
from spectral_lab.real_forms import Group


def zs(points):
    return sorted((complex(p.z) if hasattr(p, "z") else complex(p) for p in points),
                  key=lambda z: (round(z.real, 6), round(z.imag, 6)))


# construction -------------------------------------------------------------------

def test_sl_double_cover():
    curve = curve_from_coefficients("SL_H", 2, [[0, -1]])
    assert curve.x_coefficients() == [(1,), (0,), (0, -1)]
    assert curve.evaluate(2, 4) == 0


def test_so_star_linear_curve():
    curve = curve_from_coefficients("SO_STAR", 1, [[0, 1]])
    assert curve.x_degree == 2 and curve.is_even
    assert curve.evaluate(1j, 1) == 0  # x^2 + z


def test_bad_degree_patterns():
    with pytest.raises(BadDegreePatternError):
        curve_from_polynomial("SO_STAR", 1, [1, [0, 1], 0])
    with pytest.raises(BadDegreePatternError):
        curve_from_polynomial("SO_STAR", 2, [1, 0, 3, 1, 0])
    with pytest.raises(BadDegreePatternError):
        curve_from_polynomial("SL_H", 3, [1, 1, 0, 0])
    with pytest.raises(BadDegreePatternError):
        curve_from_polynomial("SL_H", 2, [2, 0, 1])
    with pytest.raises(BadDegreePatternError):
        curve_from_coefficients("SP_MM", 2, [[1]])
    ok = curve_from_polynomial("SP_MM", 2, [1, 0, [1, 1], 0, -4])
    assert ok.coefficients == ((1, 1), (-4,))


# smoothness and branch points --------------------------------------------------

def test_smoothness_examples():
    assert smoothness_check(curve_from_coefficients("SL_H", 2, [[0, -1]])).smooth
    non_reduced = smoothness_check(curve_from_coefficients("SL_H", 2, [[0]]))
    assert not non_reduced.smooth and non_reduced.non_reduced
    node = smoothness_check(curve_from_coefficients("SL_H", 2, [[0, 0, -1]]))
    assert not node.smooth and not node.non_reduced
    (x, z), = node.singular_at
    assert abs(x) < 1e-6 and abs(z) < 1e-6


def test_node_partials_vanish_by_direct_evaluation():
    curve = curve_from_coefficients("SL_H", 2, [[0, 0, -1]])
    assert curve.evaluate(0, 0) == 0 and curve.dx(0, 0) == 0 and curve.dz(0, 0) == 0


def test_branch_point_examples():
    assert zs(branch_points(curve_from_coefficients("SL_H", 2, [[0, -1]]))) == [0]
    two = branch_points(curve_from_coefficients("SL_H", 2, [[1, 0, -1]], radius=2))
    assert np.allclose(zs(two), [-1, 1], atol=1e-12)
    assert branch_points(curve_from_coefficients("SL_H", 2, [[-1]])) == []
    with pytest.raises(NonReducedError):
        branch_points(curve_from_coefficients("SL_H", 2, [[0]]))


def test_branch_points_respect_the_disc():
    curve = curve_from_coefficients("SL_H", 2, [[1, 0, -1]], radius=0.5)
    assert branch_points(curve) == []


def test_exact_and_floating_resultants_agree():
    exact = curve_from_coefficients("SL_H", 2, [[1, 0, -1]])
    floating = curve_from_coefficients("SL_H", 2, [[1.0, 0.0, -1.0]])
    # Res_x(x^2 + a, 2x) = 4a
    # coefficients are padded up to the degree bound (2n - 1) deg_z
    padded = [4, 0, -4, 0, 0, 0, 0]
    assert [complex(c) for c in resultant(exact)] == padded
    assert np.allclose(resultant(floating), padded, atol=1e-12)


# involution --------------------------------------------------------------------

def test_sigma_fixed_point_examples():
    assert sigma_fixed_points(curve_from_coefficients("SO_STAR", 1, [[0, 1]])) == [0]
    curve = curve_from_coefficients("SP_MM", 2, [[3], [-1, 0, 1]], radius=2)
    assert np.allclose(zs(sigma_fixed_points(curve)), [-1, 1], atol=1e-12)
    assert sigma_fixed_points(curve_from_coefficients("SO_STAR", 1, [[5, 1]])) == []
    with pytest.raises(WrongGroupError):
        sigma_fixed_points(curve_from_coefficients("SL_H", 2, [[0, -1]]))
    with pytest.raises(WrongGroupError):
        quotient_curve(curve_from_coefficients("SL_H", 2, [[0, -1]]))


def test_quotient_reindexing():
    q = quotient_curve(curve_from_coefficients("SO_STAR", 1, [[0, 1]]))
    assert q.x_degree == 1 and q.x_coefficients() == [(1,), (0, 1)]
    assert branch_points(q) == []
    q = quotient_curve(curve_from_coefficients("SP_MM", 2, [[3], [-1, 0, 1]], radius=2))
    assert q.x_coefficients() == [(1,), (3,), (-1, 0, 1)]
    # w = 0 lies over the zeros of a_m
    for z in (1, -1):
        assert q.evaluate(0, z) == 0


@pytest.mark.parametrize("seed", range(8))
def test_quotient_branch_decomposition(seed):
    curve = random_curve("SO_STAR", 2, seed, degree=3)
    original = zs(branch_points(curve))
    expected = zs(list(sigma_fixed_points(curve)) + [b.z for b in branch_points(quotient_curve(curve))])
    assert len(original) == len(expected)
    assert np.allclose(original, expected, atol=1e-6)


# fibers ------------------------------------------------------------------------

def test_fiber_root_examples():
    curve = curve_from_coefficients("SL_H", 2, [[0, -1]])
    fr = fiber_roots(curve, 1)
    assert fr.regular and np.allclose(sorted(fr.roots, key=lambda z: z.real), [-1, 1])
    fr = fiber_roots(curve, 0)
    assert not fr.regular and fr.multiplicities == ((0j, 2),)
    even = curve_from_coefficients("SO_STAR", 2, [[-5], [4]])
    for z0 in (0, 0.3 + 0.2j, -1.1):
        fr = fiber_roots(even, z0)
        assert fr.regular
        assert np.allclose(fr.pairs, [(1, -1), (2, -2)], atol=1e-12)


def test_classify_point():
    curve = curve_from_coefficients("SO_STAR", 1, [[0, 1]])
    assert classify_point(curve, 0).classification == "sigma_fixed_image"
    assert classify_point(curve, 0.5).classification == "regular"
    sl = curve_from_coefficients("SL_H", 2, [[0, -1]])
    assert classify_point(sl, 0).classification == "branch"


def test_json_round_trip():
    curve = random_curve("SP_MM", 2, 3)
    back = curve_from_json(curve_to_json(curve))
    assert back.group is Group.SP_MM and back.m == 2 and back.radius == curve.radius
    assert np.array_equal(back.coefficient_grid(), curve.coefficient_grid())
    q = quotient_curve(curve)
    assert curve_from_json(curve_to_json(q)).quotient


# properties --------------------------------------------------------------------

@settings(max_examples=25, deadline=None)
@given(st.sampled_from(list(Group)), st.integers(1, 3), st.integers(0, 2 ** 32 - 1))
def test_branch_points_are_exactly_the_collisions(group, m, seed):
    curve = random_curve(group, m, seed, degree=2)
    if group is Group.SL_H and m == 1:
        return
    for bp in branch_points(curve):
        roots = np.sort_complex(find_roots(curve.at(bp.z)))
        gaps = np.abs(roots[:, None] - roots[None, :]) + np.eye(len(roots))
        assert gaps.min() < 1e-5
    rng = np.random.default_rng(seed)
    z0 = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    dist = min((abs(z0 - b.z) for b in branch_points(curve)), default=1.0)
    fr = fiber_roots(curve, z0)
    assert len(fr.roots) == curve.x_degree
    if dist > 1e-3:
        assert fr.regular


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([Group.SO_STAR, Group.SP_MM]), st.integers(1, 3), st.integers(0, 2 ** 32 - 1))
def test_even_curve_properties(group, m, seed):
    curve = random_curve(group, m, seed, degree=3)
    branch = [b.z for b in branch_points(curve)]
    for z in sigma_fixed_points(curve):
        assert min(abs(z - b) for b in branch) < 1e-6
    rng = np.random.default_rng(seed)
    z0 = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    roots = np.array(fiber_roots(curve, z0).roots)
    for y in roots:
        assert np.min(np.abs(roots + y)) < 1e-8 * (1 + np.max(np.abs(roots)))


def test_random_curves_are_smooth():
    smooth = sum(smoothness_check(random_curve(g, 2, s)).smooth for g in Group for s in range(30))
    assert smooth == 90
