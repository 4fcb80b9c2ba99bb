"""Relatives of the Hermitian curve: C_A : (x^r, y^r, z^r) A (x, y, z)^t = 0 over F_q, r = sqrt(q)."""
from .census import SweepPlan, SweepReport, sweep_congruence, sweep_corollary_bounds, sweep_properties
from .classify import (
    OutOfTheoremScope,
    TypeA,
    TypeB,
    TypeC,
    class_census,
    classify,
    equivalent,
    normalize_two_inflexions,
)
from .curve import Curve, omega_curve
from .errors import HermrelError
from .field import (
    Field,
    build_field,
    parse_field,
    solve_artin_schreier,
    solve_kummer,
    solve_semilinear,
)

__version__ = "0.1.0"

__all__ = [
    "Field", "build_field", "parse_field", "solve_artin_schreier", "solve_kummer",
    "solve_semilinear", "Curve", "omega_curve", "TypeA", "TypeB", "TypeC",
    "OutOfTheoremScope", "classify", "equivalent", "normalize_two_inflexions",
    "class_census", "SweepPlan", "SweepReport", "sweep_congruence",
    "sweep_corollary_bounds", "sweep_properties", "HermrelError",
]  # fmt: skip
