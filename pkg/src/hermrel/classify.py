"""Curves with two or more rational inflexions: normal form, types, equivalence."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field as dc_field
from typing import Union

import numpy as np

from . import batch
from . import projective as pj
from .curve import Curve, diagonal_curve, omega_curve, omega_matrix
from .errors import (
    BudgetExceededError,
    MethodUnavailableError,
    NotApplicableError,
    NotTypeBError,
    ShapeAssertionError,
    TooFewInflexionsError,
)
from .field import Field, norm_preimages, solve_kummer, special_elements

BRUTEFORCE_BUDGET = 10**5


# ---- classes -------------------------------------------------------------


@dataclass(frozen=True)
class TypeA:
    tag = "A"

    @property
    def invariant(self):
        return None


@dataclass(frozen=True)
class TypeB:
    eta: int
    tag = "B"

    @property
    def invariant(self) -> int:
        return self.eta


@dataclass(frozen=True)
class TypeC:
    omega: int
    tag = "C"

    @property
    def invariant(self) -> int:
        return self.omega


@dataclass(frozen=True)
class OutOfTheoremScope:
    inflexion_count: int
    tag = "out_of_scope"

    @property
    def invariant(self):
        return None


CurveClass = Union[TypeA, TypeB, TypeC, OutOfTheoremScope]


def eta_coset_rep(F: Field, eta: int) -> int:
    """Smallest code in eta * F_sqrt(q)^*."""
    return min(F.mul(eta, s) for s in F.subfield if s)


def omega_pair_rep(F: Field, omega: int) -> int:
    """Smallest code among omega and omega^(-sqrt(q))."""
    return min(omega, F.pow(omega, -F.sqrt_q))


def class_of_omega(F: Field, omega: int) -> CurveClass:
    """The class of x^r y + omega x y^r + z^(r+1), read off omega directly."""
    if omega == 0:
        raise ValueError("omega must be nonzero")
    if omega == 1:
        return TypeA()
    if F.norm(omega) == 1:
        beta = solve_kummer(F, F.inv(omega))[0]
        return TypeB(eta_coset_rep(F, F.frob(beta)))
    return TypeC(omega_pair_rep(F, omega))


def canonical_invariant(cls: CurveClass) -> int:
    if isinstance(cls, (TypeB, TypeC)):
        return cls.invariant
    raise NotApplicableError(f"{type(cls).__name__} has no invariant")


# ---- normal form ---------------------------------------------------------


@dataclass(frozen=True)
class NormalForm:
    """T with C.transform(T) = C_omega, from the inflexions P and Q."""

    omega: int
    transform: tuple
    inflexions: tuple


def rational_inflexions(C: Curve) -> list:
    return C.inflexions()


def normalize_two_inflexions(C: Curve, pair=None) -> NormalForm:
    F = C.field
    if pair is None:
        flex = C.inflexions()
        if len(flex) < 2:
            raise TooFewInflexionsError(f"{C} has {len(flex)} rational inflexions")
        pair = (flex[0], flex[1])
    P, Q = (pj.normalize(F, X) for X in pair)
    if P == Q or not (C.is_inflexion(P) and C.is_inflexion(Q)):
        raise TooFewInflexionsError("need two distinct rational inflexions")

    T1 = pj.frame_to_triangle(F, C.tangent_line(P), C.tangent_line(Q), pj.line_through(F, P, Q))
    B = pj.mat_mul(F, pj.mat_mul(F, pj.star(F, T1), C.matrix), T1)
    if any(B[k] for k in (0, 2, 4, 5, 6, 7)) or not (B[1] and B[3] and B[8]):
        raise ShapeAssertionError(f"unexpected shape {B} after moving the inflexions")
    a12, a21 = F.div(B[1], B[8]), F.div(B[3], B[8])
    omega = F.mul(a21, F.pow(a12, -F.sqrt_q))
    # y -> a12*y
    T = pj.normalize(F, pj.mat_mul(F, T1, pj.diag(1, F.inv(a12), 1)))
    if pj.congruence_transform(F, C.matrix, T) != omega_matrix(omega):
        raise ShapeAssertionError("composite transform does not reach the normal form")
    return NormalForm(omega, T, (P, Q))


def classify(C: Curve) -> CurveClass:
    flex = C.inflexions()
    if len(flex) < 2:
        return OutOfTheoremScope(len(flex))
    nf = normalize_two_inflexions(C, (flex[0], flex[1]))
    cls = class_of_omega(C.field, nf.omega)
    if isinstance(cls, TypeA) and not C.is_hermitian():
        raise ShapeAssertionError(f"{C} normalizes to omega = 1 but is not Hermitian")
    return cls


def classification_report(C: Curve) -> dict:
    F = C.field
    pts = C.rational_points()
    flex = [P for P in pts if C.is_inflexion(P)]
    out = {
        "q": F.q,
        "A": list(C.matrix),
        "type": "out_of_scope",
        "invariant": None,
        "omega": None,
        "transform": None,
        "n_points": len(pts),
        "n_inflexions": len(flex),
    }
    if len(flex) >= 2:
        nf = normalize_two_inflexions(C, (flex[0], flex[1]))
        cls = classify(C)
        out.update(type=cls.tag, invariant=cls.invariant, omega=nf.omega, transform=list(nf.transform))
    return out


# ---- type (b) diagonalization ----------------------------------------------


@dataclass(frozen=True)
class Diagonalization:
    eta: int
    beta: int
    chain: tuple  # (rescale of x, the fixed T0)
    transform: tuple


def type_b_diagonalize(F: Field, omega: int) -> Diagonalization:
    """T with T* A_omega T = diag[1, 1, eta] in PGL, for Nm omega = 1, omega != 1."""
    if omega in (0, 1) or F.norm(omega) != 1:
        raise NotTypeBError(f"omega = {omega} is not of type (b)")
    beta = solve_kummer(F, F.inv(omega))[0]  # beta^(1 - r) = omega
    eta = F.frob(beta)
    T1 = pj.diag(F.inv(beta), 1, 1)  # beta*x -> x
    sp = special_elements(F)
    u, alpha = sp.trace_one, sp.norm_minus_one
    T0 = (u, F.mul(alpha, F.frob(u)), 0, 1, F.neg(alpha), 0, 0, 0, 1)
    T = pj.normalize(F, pj.mat_mul(F, T1, T0))
    if pj.congruence_transform(F, omega_matrix(omega), T) != pj.diag(1, 1, eta):
        raise ShapeAssertionError(f"diagonalization of omega = {omega} failed")
    return Diagonalization(eta, beta, (T1, T0), T)


# ---- equivalence ---------------------------------------------------------


@dataclass(frozen=True)
class Equivalence:
    equivalent: bool
    witness: tuple | None = None
    method: str = "theorem"


def _omega_link(F: Field, w1: int, w2: int) -> tuple:
    """T with T* A_w1 T = A_w2 in PGL for two omegas of the same class."""
    if w1 == w2:
        return pj.IDENTITY
    if F.norm(w1) != 1:
        # omega' = omega^(-r): swap x and y
        return (0, 1, 0, F.pow(w1, -F.sqrt_q), 0, 0, 0, 0, 1)
    d1, d2 = type_b_diagonalize(F, w1), type_b_diagonalize(F, w2)
    lam = F.div(d2.eta, d1.eta)
    a = norm_preimages(F, lam)[0]
    # A_w1 -> diag[1,1,eta1] -> diag[1,1,eta2] -> A_w2
    return pj.mat_mul(F, pj.mat_mul(F, d1.transform, pj.diag(1, 1, a)), pj.mat_inv(F, d2.transform))


def equivalent(C1: Curve, C2: Curve, method: str = "theorem", *, budget: int = BRUTEFORCE_BUDGET) -> Equivalence:
    """Decide whether C1 and C2 are projectively equivalent over F_q.

    A witness T satisfies T* A1 T = A2 in PGL, i.e. C1.transform(T) == C2;
    every witness is checked by direct congruence before it is returned.
    """
    F = C1.field
    if C2.field is not F:
        raise ValueError("curves live over different fields")
    if method == "bruteforce":
        return _bruteforce(C1, C2, budget)
    if method != "theorem":
        raise ValueError(f"unknown method {method!r}")

    f1, f2 = C1.inflexions(), C2.inflexions()
    if len(f1) < 2 or len(f2) < 2:
        raise MethodUnavailableError("theorem method needs two rational inflexions on both curves")
    n1 = normalize_two_inflexions(C1, (f1[0], f1[1]))
    n2 = normalize_two_inflexions(C2, (f2[0], f2[1]))
    if class_of_omega(F, n1.omega) != class_of_omega(F, n2.omega):
        return Equivalence(False)
    link = _omega_link(F, n1.omega, n2.omega)
    W = pj.normalize(F, pj.mat_mul(F, pj.mat_mul(F, n1.transform, link), pj.mat_inv(F, n2.transform)))
    if pj.congruence_transform(F, C1.matrix, W) != C2.matrix:
        raise ShapeAssertionError("theorem witness failed verification")
    return Equivalence(True, W)


def _bruteforce(C1: Curve, C2: Curve, budget: int) -> Equivalence:
    F = C1.field
    size = pj.pgl_order(F.q)
    if size > budget:
        raise BudgetExceededError(f"|PGL(3,{F.q})| = {size} exceeds the budget {budget}")
    Ts = batch.pgl_elements(F)
    hit = np.flatnonzero(batch.proportional_to(F, batch.congruence_batch(F, C1.matrix, Ts), C2.matrix))
    if hit.size == 0:
        return Equivalence(False, method="bruteforce")
    W = tuple(int(x) for x in Ts[hit[0]])
    if pj.congruence_transform(F, C1.matrix, W) != C2.matrix:
        raise ShapeAssertionError("brute-force witness failed verification")
    return Equivalence(True, W, method="bruteforce")


def orbit(F: Field, A, *, budget: int = BRUTEFORCE_BUDGET) -> frozenset:
    """All normalized T* A T; only for tiny q."""
    size = pj.pgl_order(F.q)
    if size > budget:
        raise BudgetExceededError(f"|PGL(3,{F.q})| = {size} exceeds the budget {budget}")
    images = batch.normalize_batch(F, batch.congruence_batch(F, A, batch.pgl_elements(F)))
    return frozenset(map(tuple, np.unique(images, axis=0).tolist()))


# ---- class census --------------------------------------------------------


def expected_table(F: Field) -> dict:
    r, q = F.sqrt_q, F.q
    return {
        "A": {"classes": 1, "N_q": r**3 + 1, "inflexions": r**3 + 1},
        "B": {"classes": r, "N_q": r + 1, "inflexions": r + 1},
        "C": {"classes": (r + 1) * (r - 2) // 2, "N_q": q + 1, "inflexions": 2},
    }


@dataclass
class Table1Report:
    q: int
    rows: dict
    consistent: bool
    notes: list = dc_field(default_factory=list)

    def matches_expected(self, F: Field) -> bool:
        exp = expected_table(F)
        for tag, want in exp.items():
            got = self.rows.get(tag)
            if want["classes"] == 0:
                if got is not None:
                    return False
                continue
            if got is None or got != want:
                return False
        return self.consistent

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "rows": [{"type": t, **self.rows[t]} for t in sorted(self.rows)],
            "consistent": self.consistent,
            "notes": list(self.notes),
        }

    def to_csv(self) -> str:
        lines = ["type,classes,N_q,inflexions"]
        for t in sorted(self.rows):
            row = self.rows[t]
            lines.append(f"{t},{row['classes']},{row['N_q']},{row['inflexions']}")
        return "\n".join(lines) + "\n"


def class_census(F: Field) -> Table1Report:
    """Classify every C_omega, omega in F_q^*, and tabulate per type."""
    buckets: dict[str, set] = defaultdict(set)
    stats: dict[str, set] = defaultdict(set)
    consistent = True
    for omega in range(1, F.q):
        C = omega_curve(F, omega)
        cls = classify(C)
        if cls != class_of_omega(F, omega):
            consistent = False
        buckets[cls.tag].add(cls.invariant)
        stats[cls.tag].add((C.point_count(), len(C.inflexions())))
    rows = {}
    for tag, invariants in buckets.items():
        if len(stats[tag]) != 1:
            consistent = False
        n_points, n_flex = min(stats[tag])
        rows[tag] = {"classes": len(invariants), "N_q": n_points, "inflexions": n_flex}
    notes = []
    if F.sqrt_q == 2:
        notes.append("type C is empty at q = 4: (sqrt(q)+1)(sqrt(q)-2)/2 = 0")
    return Table1Report(F.q, rows, consistent, notes)


__all__ = [
    "TypeA", "TypeB", "TypeC", "OutOfTheoremScope", "CurveClass", "NormalForm",
    "Diagonalization", "Equivalence", "Table1Report", "rational_inflexions",
    "normalize_two_inflexions", "classify", "classification_report", "class_of_omega",
    "type_b_diagonalize", "canonical_invariant", "equivalent", "class_census", "orbit",
    "expected_table", "eta_coset_rep", "omega_pair_rep", "diagonal_curve",
]  # fmt: skip
