"""Acceptance criteria 1-8, each reported as one PASS/FAIL line."""

import subprocess
import sys
import time

import numpy as np
import pytest

from spectral_lab import numerology as nm
from spectral_lab.errors import NonRegularPointError
from spectral_lab.fiber import assemble_fiber, equivariant_split, multiplication_operator, random_lift
from spectral_lab.pfaffian_spectra import pfaffian_char_poly, verify_annihilator, verify_det_square
from spectral_lab.plane_curve import random_curve, sigma_fixed_points, smoothness_check
from spectral_lab.real_forms import Group, fixed_point_signs, involution_pairing, random_degenerate_model, random_model
from spectral_lab.seeding import derive_seed

TRIALS = 200
EVEN = (Group.SO_STAR, Group.SP_MM)


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}  {title}: {detail}")
        return ok
    return emit


def regular_point(curve, rng):
    while True:
        r = curve.radius * np.sqrt(rng.uniform())
        z0 = r * np.exp(2j * np.pi * rng.uniform())
        try:
            return assemble_fiber(curve, z0)
        except NonRegularPointError:
            continue


def test_criterion_1_pfaffian_identities(report):
    start = time.perf_counter()
    failures = 0
    for m in (1, 2, 3):
        for trial in range(TRIALS):
            mod = random_model("SL_H", m, derive_seed(1, "acceptance-1", m, trial), exact=True)
            p = pfaffian_char_poly(mod.phi, mod.space)
            if verify_det_square(mod.phi, p, mod.space) != 0.0 or verify_annihilator(mod.phi, p) != 0.0:
                failures += 1
    elapsed = time.perf_counter() - start
    ok = report(1, "p^2 = det(x - A) and p(A) = 0 exactly", failures == 0 and elapsed < 30,
                f"{3 * TRIALS} exact models, {failures} failures, {elapsed:.1f}s (limit 30s)")
    assert ok


def test_criterion_2_eigenvalue_pairing(report):
    start = time.perf_counter()
    failures, worst = 0, 0.0
    for group in EVEN:
        for trial in range(TRIALS):
            m = 1 + trial % 3
            mod = random_model(group, m, derive_seed(2, group.value, trial))
            eig = np.linalg.eigvals(mod.phi)
            scale = max(1.0, float(np.max(np.abs(eig))))
            symmetric = all(np.min(np.abs(eig + lam)) <= 1e-8 * scale for lam in eig)
            residual = max(r.residual for r in involution_pairing(mod))
            worst = max(worst, residual)
            failures += not (symmetric and residual <= 1e-9)
    elapsed = time.perf_counter() - start
    ok = report(2, "eigenvalues pair as (lambda, -lambda)", failures == 0 and elapsed < 30,
                f"{2 * TRIALS} models, {failures} failures, worst residual {worst:.2e}, {elapsed:.1f}s (limit 30s)")
    assert ok


def test_criterion_3_split_dichotomy(report):
    start = time.perf_counter()
    failures, worst = 0, 0.0
    for trial in range(TRIALS):
        seed = derive_seed(3, "acceptance-3", trial)
        rng = np.random.default_rng(seed)
        curve = random_curve(EVEN[trial % 2], 1 + trial % 3, seed)
        fiber = regular_point(curve, rng)
        for epsilon in (1, -1):
            res = equivariant_split(fiber, random_lift(fiber, epsilon, seed + epsilon))
            worst = max(worst, res.intra_residual if epsilon == 1 else res.cross_residual)
            failures += not res.holds
    elapsed = time.perf_counter() - start
    ok = report(3, "+1 lifts are double Lagrangian, -1 lifts split orthogonally",
                failures == 0 and elapsed < 60,
                f"{TRIALS} fibers x 2 lifts, {failures} failures, worst block {worst:.2e}, {elapsed:.1f}s (limit 60s)")
    assert ok


def test_criterion_4_round_trip(report):
    failures, worst = 0, 0.0
    for trial in range(TRIALS):
        seed = derive_seed(4, "acceptance-4", trial)
        group = list(Group)[trial % 3]
        m = 2 + trial % 2 if group is Group.SL_H else 1 + trial % 3
        curve = random_curve(group, m, seed)
        op = multiplication_operator(regular_point(curve, np.random.default_rng(seed)))
        worst = max(worst, op.round_trip_residual)
        failures += op.round_trip_residual > 1e-8
    ok = report(4, "operator Pfaffian polynomial recovers p(., z0)", failures == 0,
                f"{TRIALS} samples, {failures} failures, worst relative error {worst:.2e}")
    assert ok


def winding_number(coeffs_ascending, radius, samples=1 << 14):
    z = radius * np.exp(2j * np.pi * np.arange(samples + 1) / samples)
    values = np.polyval(np.asarray(coeffs_ascending, dtype=complex)[::-1], z)
    return int(round(np.sum(np.diff(np.unwrap(np.angle(values)))) / (2 * np.pi)))


def test_criterion_5_fixed_point_accounting(report):
    sign_failures = 0
    for m in (1, 2, 3):
        for seed in range(TRIALS // 2):
            so = fixed_point_signs(random_degenerate_model("SO_STAR", m, seed))
            sp = fixed_point_signs(random_degenerate_model("SP_MM", m, seed))
            sign_failures += len(set(so)) != 1
            sign_failures += sum(sp) != 0 or not sp
    count_failures = 0
    for trial in range(TRIALS):
        curve = random_curve(EVEN[trial % 2], 1 + trial % 3, derive_seed(5, "acceptance-5", trial))
        a_m = curve.coefficients[-1]
        direct = np.roots(np.asarray(a_m, dtype=complex)[::-1])
        inside = int(np.sum(np.abs(direct) <= curve.radius + 1e-9))
        found = len(sigma_fixed_points(curve))
        count_failures += not (found == inside == winding_number(a_m, curve.radius))
    ok = report(5, "fixed-point signs and zeros of a_m", sign_failures == 0 and count_failures == 0,
                f"{6 * TRIALS // 2} degenerate models with {sign_failures} sign failures, "
                f"{TRIALS} curves with {count_failures} count mismatches")
    assert ok


def test_criterion_6_numerology(report):
    start = time.perf_counter()
    checked, failures = nm.identity_sweep()
    examples = [
        nm.moduli_dimensions("SL_H", 2, 2).total_dim == 15,
        nm.moduli_dimensions("SO_STAR", 1, 2).total_dim == 6,
        nm.moduli_dimensions("SP_MM", 1, 2).total_dim == 10,
        nm.component_count(1, 2) == 8,
    ]
    elapsed = time.perf_counter() - start
    bad = len(failures) + examples.count(False)
    ok = report(6, "integer identities for 1 <= m, g <= 20", bad == 0 and elapsed < 5,
                f"{checked + len(examples)} identities, {bad} failures, {elapsed:.2f}s (limit 5s)")
    assert ok


def test_criterion_7_bertini_rate(report):
    rates = {}
    for group in Group:
        runs = []
        for _ in range(2):
            runs.append([smoothness_check(random_curve(group, 2, derive_seed(7, group.value, t))).smooth
                         for t in range(TRIALS)])
        assert runs[0] == runs[1], "smoothness verdicts are not deterministic"
        rates[group.value] = sum(runs[0]) / TRIALS
    ok = report(7, "random curves are smooth", all(r >= 0.99 for r in rates.values()),
                ", ".join(f"{k} {v:.3f}" for k, v in rates.items()) + " (minimum 0.99)")
    assert ok


def test_criterion_8_determinism(report):
    outputs = []
    configs = [("SL_H", "2"), ("SO_STAR", "1"), ("SP_MM", "1")]
    for group, m in configs:
        argv = [sys.executable, "-m", "spectral_lab.cli", "full-suite", "--group", group, "--m", m,
                "--trials", "20", "--seed", "2026", "--backend", "exact"]
        runs = [subprocess.run(argv, capture_output=True, check=False) for _ in range(2)]
        outputs.append((runs[0].returncode, runs[0].stdout == runs[1].stdout, len(runs[0].stdout)))
    identical = all(same and code == 0 for code, same, _ in outputs)
    ok = report(8, "full-suite JSON is byte identical across runs", identical,
                ", ".join(f"{g} m={m}: exit {c}, {'identical' if s else 'DIFFERENT'} ({n} bytes)"
                          for (g, m), (c, s, n) in zip(configs, outputs)))
    assert ok
