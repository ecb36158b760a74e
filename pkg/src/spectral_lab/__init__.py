"""Pfaffian spectral data for Higgs fields of quaternionic real forms.

Submodules:

* ``structured_linalg``: symplectic spaces, Pfaffians, form adjoints
* ``pfaffian_spectra``: Pfaffian characteristic polynomial and eigenspaces
* ``real_forms``: SL_H, SO_STAR and SP_MM Higgs field models
* ``plane_curve``: local spectral curves over a disc
* ``fiber``: the direct-image fiber and its residue pairing
* ``numerology``: genus, degree and dimension formulas
* ``suite`` / ``cli``: seeded verification runs and reports
"""

from .errors import *  # noqa: F401,F403
from .fiber import (
    EquivariantLift,
    FiberModel,
    assemble_fiber,
    equivariant_split,
    multiplication_operator,
    random_lift,
    residue_pairing,
    retrivialize,
    uniform_lift,
)
from .numerology import (
    NumerologyReport,
    component_count,
    determinant_degree,
    grr_degree,
    lefschetz_degree,
    milnor_wood,
    moduli_dimensions,
    spectral_genus,
)
from .pfaffian_spectra import (
    eigenspace_decomposition,
    pfaffian_char_poly,
    pfaffian_spectrum,
    verify_annihilator,
    verify_det_square,
)
from .plane_curve import (
    PlaneCurve,
    branch_points,
    classify_point,
    curve_from_coefficients,
    curve_from_json,
    curve_from_polynomial,
    curve_to_json,
    fiber_roots,
    quotient_curve,
    random_curve,
    resultant,
    sigma_fixed_points,
    smoothness_check,
)
from .real_forms import (
    Group,
    HiggsModel,
    build_sl_quaternion,
    build_so_star,
    build_sp_mm,
    cayley_compose,
    fixed_point_signs,
    involution_pairing,
    random_degenerate_model,
    random_model,
)
from .scalars import GaussianRational, gr
from .structured_linalg import (
    HermitianForm,
    QuaternionicStructure,
    SymplecticSpace,
    adjoint_between,
    check_form_symmetric,
    form_transpose,
    pfaffian,
    standard_form,
)
from .suite import Report, SuiteConfig, emit_report, run_suite

__version__ = "0.1.0"
