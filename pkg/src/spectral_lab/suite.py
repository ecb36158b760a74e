"""Seeded verification suite and report rendering."""

from __future__ import annotations

import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import numerology as nm
from . import scalars as sc
from .errors import ConfigError, SpectralLabError
from .fiber import (
    assemble_fiber,
    multiplication_operator,
    pairing_gram,
    random_lift,
    equivariant_split,
    retrivialize,
)
from .pfaffian_spectra import pfaffian_char_poly, verify_annihilator, verify_det_square
from .plane_curve import (
    DEFAULT_RADIUS,
    branch_points,
    fiber_roots,
    random_curve,
    sigma_fixed_points,
    smoothness_check,
)
from .real_forms import (
    Group,
    cayley_compose,
    fixed_point_signs,
    involution_pairing,
    model_residual,
    random_degenerate_model,
    random_model,
    real_structure,
)
from .seeding import derive_seed
from .structured_linalg import check_quaternionic, hermitian_signature

__all__ = [
    "SuiteConfig",
    "CheckResult",
    "Report",
    "SECTIONS",
    "run_suite",
    "emit_report",
]

SECTIONS = ("matrix", "curve", "fiber", "numerology")
ROUND_TRIP_TOL = 1e-8
BERTINI_RATE = 0.99
THREADS_ENV = "SPECTRAL_LAB_THREADS"


@dataclass(frozen=True)
class SuiteConfig:
    group: Group = Group.SL_H
    m: int = 2
    genus: int = 2
    seed: int = 0
    trials: int = 200
    tolerance: float = 1e-9
    coeff_degree: int = 4
    disc_radius: float = DEFAULT_RADIUS
    backend: str = "exact"
    format: str = "json"
    sections: tuple = SECTIONS

    def __post_init__(self):
        try:
            object.__setattr__(self, "group", Group.parse(self.group))
        except SpectralLabError as exc:
            raise ConfigError(str(exc)) from None

    def validate(self) -> "SuiteConfig":
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if not self.tolerance > 0:
            raise ConfigError("tolerance must be positive")
        if self.m < 1:
            raise ConfigError("m must be at least 1")
        if self.genus < 1:
            raise ConfigError("genus must be at least 1")
        if self.coeff_degree < 1:
            raise ConfigError("coeff_degree must be at least 1")
        if not self.disc_radius > 0:
            raise ConfigError("disc_radius must be positive")
        if self.backend not in ("exact", "floating"):
            raise ConfigError(f"unknown backend {self.backend!r}")
        if self.format not in ("json", "text"):
            raise ConfigError(f"unknown format {self.format!r}")
        unknown = set(self.sections) - set(SECTIONS)
        if unknown:
            raise ConfigError(f"unknown sections {sorted(unknown)}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        return self

    def echo(self) -> dict:
        out = asdict(self)
        out["group"] = self.group.value
        out["sections"] = list(self.sections)
        return out


@dataclass
class CheckResult:
    name: str
    anchor: str  # the identity being tested
    trials: int
    failures: int
    worst_residual: float | None
    threshold: float | None
    kind: str = "identity"  # identity | rate
    rate: float | None = None
    min_rate: float | None = None
    errors: list = field(default_factory=list)  # first few exception messages

    @property
    def passed(self) -> bool:
        if self.kind == "rate":
            return self.trials == 0 or (self.rate is not None and self.rate >= self.min_rate)
        return self.failures == 0

    def as_dict(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out


@dataclass
class Report:
    config: dict
    checks: list
    numerology: dict | None = None

    @property
    def exit_status(self) -> int:
        ok = all(c.passed for c in self.checks)
        if self.numerology is not None:
            ok = ok and self.numerology["sweep_failures"] == 0 and self.numerology["report"]["consistent"]
        return 0 if ok else 1

    def ordered_checks(self) -> list:
        # failures first, then by name; stable whatever order trials finished in
        return sorted(self.checks, key=lambda c: (c.passed, c.name))

    def as_dict(self) -> dict:
        return {
            "config": self.config,
            "checks": [c.as_dict() for c in self.ordered_checks()],
            "numerology": self.numerology,
            "exit_status": self.exit_status,
        }


# trial plumbing ------------------------------------------------------------

def _threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def _map_trials(fn, seeds: list) -> list:
    threads = _threads()
    if threads == 1:
        return [fn(s) for s in seeds]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, seeds))  # map keeps trial order


def _guard(fn, width: int):
    def run(seed):
        try:
            return [row + (None,) for row in fn(seed)]
        except SpectralLabError as exc:
            return [(None, False, f"{type(exc).__name__}: {exc}")] * width
    return run


def _check_group(config: SuiteConfig, stream: str, specs: list, fn, trials=None) -> list:
    """Run ``fn(seed) -> [(residual, ok), ...]`` once per trial; one row per ``(name, anchor, threshold)``.

    All rows of a group share the trial's instance, so it is built once.
    """
    count = config.trials if trials is None else trials
    seeds = [derive_seed(config.seed, stream, i) for i in range(count)]
    results = _map_trials(_guard(fn, len(specs)), seeds)
    rows = []
    for k, (name, anchor, threshold) in enumerate(specs):
        column = [trial[k] for trial in results]
        residuals = [r for r, _, _ in column if r is not None]
        errors = [e for _, _, e in column if e is not None]
        rows.append(CheckResult(
            name=name,
            anchor=anchor,
            trials=count,
            failures=sum(1 for _, ok, _ in column if not ok),
            worst_residual=float(max(residuals)) if residuals else None,
            threshold=threshold,
            errors=errors[:3],
        ))
    return rows


def _check(config: SuiteConfig, name: str, anchor: str, threshold, fn, trials=None) -> CheckResult:
    """Single-row form of :func:`_check_group`; the seed stream is keyed by ``name``."""
    return _check_group(config, name, [(name, anchor, threshold)], lambda s: [fn(s)], trials)[0]


def _within(residual: float, tol: float, exact: bool) -> bool:
    return residual == 0 if exact else residual <= tol


# sections ------------------------------------------------------------------

def _matrix_checks(config: SuiteConfig) -> list:
    group, m, tol = config.group, config.m, config.tolerance
    exact = config.backend == "exact"
    threshold = 0.0 if exact else tol

    def identities(seed):
        mod = random_model(group, m, seed, exact=exact)
        p = pfaffian_char_poly(mod.phi, mod.space, tol)
        rows = [model_residual(mod), verify_det_square(mod.phi, p, mod.space), verify_annihilator(mod.phi, p)]
        return [(r, _within(r, tol, exact)) for r in rows]

    checks = _check_group(config, "identities", [
        ("model_symmetry", "omega(Phi u, v) = omega(u, Phi v)", threshold),
        ("det_square", "p(x)^2 = det(xI - Phi)", threshold),
        ("annihilator", "p(Phi) = 0", threshold),
    ], identities)

    if group is Group.SL_H:
        def structure(_seed):
            j, h = real_structure(group, m)
            r = check_quaternionic(j)
            sig = hermitian_signature(h)
            return r, r <= tol and 0 in sig

        checks.append(_check(config, "quaternionic_structure", "J conj(J) = -1, h definite",
                             tol, structure, trials=1))
        return checks

    def pairing(seed):
        # eigenvector geometry is floating-point work in either backend
        records = involution_pairing(random_model(group, m, seed), tol)
        r = max(rec.residual for rec in records)
        return r, r <= tol

    expected = "equal" if group is Group.SO_STAR else "balanced"

    def signs(seed):
        s = fixed_point_signs(random_degenerate_model(group, m, seed), tol)
        ok = len(set(s)) == 1 if group is Group.SO_STAR else sum(s) == 0
        return float(abs(sum(s))) if group is Group.SP_MM else 0.0, ok

    checks += [
        _check(config, "eigen_pairing", "Phi(w, -xi) = (-lambda w, lambda xi)", tol, pairing),
        _check(config, "fixed_point_signs", f"iota on ker Phi has {expected} signs", None, signs),
    ]
    if group is Group.SO_STAR:
        def cayley(seed):
            mod = random_model(group, m, seed, exact=exact)
            res = cayley_compose(mod.beta, mod.gamma, tol)
            p_phi = pfaffian_char_poly(mod.phi, mod.space, tol)
            lifted = np.zeros(2 * m + 1, dtype=object if exact else complex)
            lifted[::2] = res.char_poly  # p_Psi(x^2)
            diff = np.asarray(p_phi - lifted)
            if exact:
                r = 0.0 if sc.all_zero(diff) else float(np.max(np.abs(sc.to_complex(diff))))
            else:
                r = float(np.max(np.abs(diff))) / max(1.0, float(np.max(np.abs(p_phi))))
            r = max(r, res.symmetry_residual)
            return r, _within(r, tol, exact)

        checks.append(_check(config, "cayley", "p_Phi(x) = p_Psi(x^2), Psi = beta gamma", threshold, cayley))
    return checks


def _curve(config: SuiteConfig, seed: int):
    return random_curve(config.group, config.m, seed, config.coeff_degree, config.disc_radius)


def _curve_checks(config: SuiteConfig) -> list:
    def smooth(seed):
        verdict = smoothness_check(_curve(config, seed))
        return 0.0 if verdict.smooth else 1.0, verdict.smooth

    bertini = _check(config, "bertini_rate", "generic spectral curve is smooth", None, smooth)
    bertini.kind = "rate"
    bertini.min_rate = BERTINI_RATE
    bertini.rate = 1.0 - bertini.failures / bertini.trials
    bertini.worst_residual = None
    checks = [bertini]
    if not config.group.is_off_diagonal:
        return checks

    def fixed_points(seed):
        curve = _curve(config, seed)
        fixed = sigma_fixed_points(curve)
        # resultant route: branch points whose fiber collides at x = 0
        at_zero = []
        for bp in branch_points(curve):
            roots = fiber_roots(curve, bp.z)
            if any(n > 1 and abs(y) <= 1e-6 for y, n in roots.multiplicities):
                at_zero.append(bp.z)
        worst = 0.0
        for z in fixed:
            worst = max(worst, min((abs(z - w) for w in at_zero), default=np.inf))
        ok = len(fixed) == len(at_zero) and worst <= 1e-6
        return (float(worst) if np.isfinite(worst) else 1.0), ok

    checks.append(_check(config, "fixed_point_count", "sigma-fixed points = zeros of a_m",
                         1e-6, fixed_points))
    return checks


def _regular_fiber(config: SuiteConfig, seed: int):
    curve = _curve(config, seed)
    rng = np.random.default_rng(seed)
    while True:
        z0 = config.disc_radius * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        if fiber_roots(curve, z0).regular:
            return assemble_fiber(curve, z0), rng


def _fiber_checks(config: SuiteConfig) -> list:
    tol = config.tolerance

    def pairing(seed):
        fiber, _ = _regular_fiber(config, seed)
        gram = pairing_gram(fiber)
        sv = np.linalg.svd(gram, compute_uv=False)
        skew = float(np.max(np.abs(gram + gram.T))) / float(sv[0])
        nondeg = float(sv[-1] / sv[0])
        return skew, skew <= tol and nondeg > tol

    def round_trip(seed):
        fiber, _ = _regular_fiber(config, seed)
        op = multiplication_operator(fiber, tol)
        r = op.round_trip_residual
        return r, r <= ROUND_TRIP_TOL and op.symmetry_residual <= tol

    checks = [
        _check(config, "fiber_pairing", "<s, s'> = sum vol_i det(s_i, s'_i) / p_x(y_i)", tol, pairing),
        _check(config, "round_trip", "Pf-char poly of x on V = p(x, z0)", ROUND_TRIP_TOL, round_trip),
    ]
    if not config.group.is_off_diagonal:
        return checks

    def split(epsilon):
        def run(seed):
            fiber, rng = _regular_fiber(config, seed)
            lift = random_lift(fiber, epsilon, derive_seed(seed, "lift"))
            result = equivariant_split(fiber, lift, tol)
            sheet = int(rng.integers(fiber.k))
            c = complex(*rng.uniform(0.5, 2.0, 2))
            moved = equivariant_split(*retrivialize(fiber, lift, sheet, c), tol=tol)
            r = max(result.intra_residual, moved.intra_residual) if epsilon == 1 else \
                max(result.cross_residual, moved.cross_residual)
            return r, result.holds and moved.holds
        return run

    checks += [
        _check(config, "split_plus", "eps = +1: V = W + W*, both Lagrangian", tol, split(1)),
        _check(config, "split_minus", "eps = -1: V = W1 + W2, orthogonal", tol, split(-1)),
    ]
    return checks


def _numerology_block(config: SuiteConfig) -> dict:
    checked, failures = nm.identity_sweep()
    return {
        "report": nm.moduli_dimensions(config.group, config.m, config.genus).as_dict(),
        "sweep_checked": checked,
        "sweep_failures": len(failures),
        "sweep_failed": failures[:10],
    }


def run_suite(config: SuiteConfig) -> Report:
    config.validate()
    checks = []
    if "matrix" in config.sections:
        checks += _matrix_checks(config)
    if "curve" in config.sections:
        checks += _curve_checks(config)
    if "fiber" in config.sections:
        checks += _fiber_checks(config)
    block = _numerology_block(config) if "numerology" in config.sections else None
    return Report(config.echo(), checks, block)


# rendering -----------------------------------------------------------------

def _fmt(x) -> str:
    return "-" if x is None else f"{x:.3e}"


def emit_report(report: Report, format: str = "json") -> str:
    if format == "json":
        return json.dumps(report.as_dict(), sort_keys=True, indent=2) + "\n"
    if format != "text":
        raise ConfigError(f"unknown format {format!r}")
    out = io.StringIO()
    cfg = report.config
    out.write(f"group={cfg['group']} m={cfg['m']} genus={cfg['genus']} seed={cfg['seed']} "
              f"trials={cfg['trials']} tol={cfg['tolerance']} backend={cfg['backend']}\n")
    header = f"{'status':<6}  {'check':<22} {'trials':>6} {'fail':>5} {'worst':>10}  anchor"
    out.write(header + "\n" + "-" * len(header) + "\n")
    for c in report.ordered_checks():
        status = "PASS" if c.passed else "FAIL"
        worst = f"{c.rate:.3f}" if c.kind == "rate" else _fmt(c.worst_residual)
        out.write(f"{status:<6}  {c.name:<22} {c.trials:>6} {c.failures:>5} {worst:>10}  {c.anchor}\n")
    if report.numerology is not None:
        block = report.numerology
        rep = block["report"]
        status = "PASS" if block["sweep_failures"] == 0 and rep["consistent"] else "FAIL"
        out.write(f"\nnumerology {status}: {block['sweep_checked']} identities, "
                  f"{block['sweep_failures']} failures\n")
        for key in ("g_S", "g_Sbar", "deg_E", "base_dim", "fiber_dim", "parabolic_dim",
                    "total_dim", "expected_total", "milnor_wood_bound", "component_count", "degenerate"):
            out.write(f"  {key:<18} {rep[key]}\n")
    out.write(f"\nexit status {report.exit_status}\n")
    return out.getvalue()
