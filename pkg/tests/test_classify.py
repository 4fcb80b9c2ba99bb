import itertools
import random

import pytest

from hermrel import errors
from hermrel import projective as pj
from hermrel.classify import (
    OutOfTheoremScope,
    TypeA,
    TypeB,
    TypeC,
    canonical_invariant,
    class_census,
    class_of_omega,
    classification_report,
    classify,
    diagonal_curve,
    equivalent,
    eta_coset_rep,
    normalize_two_inflexions,
    omega_pair_rep,
    orbit,
    rational_inflexions,
    type_b_diagonalize,
)
from hermrel.curve import Curve, omega_curve
from hermrel.field import parse_field

from conftest import random_invertible

FIELDS = ["2^2", "3^2", "2^4", "5^2"]


def test_worked_classes(F9):
    assert classify(Curve(F9, pj.IDENTITY)) == TypeA()
    assert isinstance(classify(omega_curve(F9, 2)), TypeB)
    assert classify(omega_curve(F9, 4)) == TypeC(4)
    assert classify(omega_curve(F9, 8)) == TypeC(4)
    assert F9.pow(4, -3) == 8


def test_rational_inflexions(F9):
    assert len(rational_inflexions(Curve(F9, pj.IDENTITY))) == 28
    flex = rational_inflexions(omega_curve(F9, 2))
    assert len(flex) == 4 and all(P[2] == 0 for P in flex)
    assert rational_inflexions(omega_curve(F9, 4)) == [(1, 0, 0), (0, 1, 0)]


def test_normal_form_fixed_point(F9):
    for w in range(1, 9):
        nf = normalize_two_inflexions(omega_curve(F9, w))
        assert nf.omega == w
        assert pj.congruence_transform(F9, omega_curve(F9, w).matrix, nf.transform) == omega_curve(F9, w).matrix


def test_normal_form_of_hermitian_and_diagonal(F9):
    assert normalize_two_inflexions(Curve(F9, pj.IDENTITY)).omega == 1
    nf = normalize_two_inflexions(diagonal_curve(F9, 1, 1, 3))
    assert nf.omega != 1 and F9.norm(nf.omega) == 1
    assert classify(diagonal_curve(F9, 1, 1, 3)) == TypeB(eta_coset_rep(F9, 3))


def test_too_few_inflexions(F9):
    C = Curve(F9, (1, 1, 0, 0, 1, 0, 0, 0, 1))
    assert classify(C) == OutOfTheoremScope(len(C.inflexions()))
    with pytest.raises(errors.TooFewInflexionsError):
        normalize_two_inflexions(C)
    with pytest.raises(errors.NotApplicableError):
        canonical_invariant(TypeA())


@pytest.mark.parametrize("spec", FIELDS)
def test_pipeline_soundness(spec):
    F = parse_field(spec)
    for w in range(1, F.q):
        C = omega_curve(F, w)
        assert classify(C) == class_of_omega(F, w)
        report = classification_report(C)
        assert report["omega"] == w and report["type"] == class_of_omega(F, w).tag


@pytest.mark.parametrize("spec", FIELDS)
def test_invariance_under_pgl(spec):
    F = parse_field(spec)
    rng = random.Random(spec + "invariance")
    for _ in range(1000):
        w = rng.randrange(1, F.q)
        T = random_invertible(F, rng)
        C = omega_curve(F, w)
        assert classify(C.transform(T)) == class_of_omega(F, w)


@pytest.mark.parametrize("spec", FIELDS)
def test_other_inflexion_pair(spec):
    F = parse_field(spec)
    rng = random.Random(spec + "pair")
    for _ in range(40):
        C = omega_curve(F, rng.randrange(1, F.q)).transform(random_invertible(F, rng))
        flex = C.inflexions()
        P, Q = rng.sample(flex, 2)
        nf = normalize_two_inflexions(C, (P, Q))
        assert pj.congruence_transform(F, C.matrix, nf.transform) == omega_curve(F, nf.omega).matrix
        assert class_of_omega(F, nf.omega) == classify(C)


@pytest.mark.parametrize("spec", FIELDS)
def test_line_and_affine_counts(spec):
    F = parse_field(spec)
    r = F.sqrt_q
    for w in range(1, F.q):
        pts = omega_curve(F, w).rational_points()
        on_line = sum(1 for P in pts if P[2] == 0)
        affine = len(pts) - on_line
        assert on_line == (r + 1 if F.norm(w) == 1 else 2)
        if w == 1:
            assert affine == r * (F.q - 1)
        elif F.norm(w) == 1:
            assert affine == 0
        else:
            assert affine == F.q - 1


@pytest.mark.parametrize("spec", FIELDS)
def test_type_b_diagonalize(spec):
    F = parse_field(spec)
    r = F.sqrt_q
    minus_one = F.neg(1)
    for w in range(2, F.q):
        if F.norm(w) != 1:
            with pytest.raises(errors.NotTypeBError):
                type_b_diagonalize(F, w)
            continue
        d = type_b_diagonalize(F, w)
        assert not F.in_subfield(d.eta)
        assert pj.congruence_transform(F, omega_curve(F, w).matrix, d.transform) == pj.diag(1, 1, d.eta)
        pts = diagonal_curve(F, 1, 1, d.eta).rational_points()
        assert len(pts) == r + 1
        assert sorted(pts) == sorted(pj.normalize(F, (z, 1, 0)) for z in range(1, F.q) if F.norm(z) == minus_one)
    with pytest.raises(errors.NotTypeBError):
        type_b_diagonalize(F, 1)


def test_canonical_invariants():
    F9, F4 = parse_field("3^2"), parse_field("2^2")
    assert omega_pair_rep(F9, 4) == omega_pair_rep(F9, 8) == 4
    for eta in range(1, 9):
        if not F9.in_subfield(eta):
            assert eta_coset_rep(F9, eta) == eta_coset_rep(F9, F9.mul(2, eta))
    assert eta_coset_rep(F4, 2) != eta_coset_rep(F4, 3)
    assert canonical_invariant(TypeC(4)) == 4


def test_equivalence_examples():
    F4, F9 = parse_field("2^2"), parse_field("3^2")
    C = omega_curve(F9, 4)
    e = equivalent(C, C)
    assert e.equivalent and C.transform(e.witness) == C
    a, b = diagonal_curve(F4, 1, 1, 2), diagonal_curve(F4, 1, 1, 3)
    assert not equivalent(a, b).equivalent
    assert not equivalent(a, b, "bruteforce").equivalent
    e = equivalent(omega_curve(F9, 4), omega_curve(F9, 8))
    assert e.equivalent and omega_curve(F9, 4).transform(e.witness) == omega_curve(F9, 8)
    with pytest.raises(errors.BudgetExceededError):
        equivalent(C, C, "bruteforce")
    with pytest.raises(errors.MethodUnavailableError):
        equivalent(Curve(F9, (1, 1, 0, 0, 1, 0, 0, 0, 1)), C)


def test_equivalence_oracle_q4(F4):
    curves = [omega_curve(F4, w) for w in range(1, 4)]
    curves += [diagonal_curve(F4, 1, 1, eta) for eta in (2, 3)]
    for C1, C2 in itertools.product(curves, repeat=2):
        a, b = equivalent(C1, C2), equivalent(C1, C2, "bruteforce")
        assert a.equivalent == b.equivalent
        for e in (a, b):
            if e.equivalent:
                assert C1.transform(e.witness) == C2


def test_orbit_size_matches_classes(F4):
    # the orbits of C_w partition by class, matching the invariant comparison
    orbits = {w: orbit(F4, omega_curve(F4, w).matrix) for w in range(1, 4)}
    for w1, w2 in itertools.product(range(1, 4), repeat=2):
        same = omega_curve(F4, w2).matrix in orbits[w1]
        assert same == (class_of_omega(F4, w1) == class_of_omega(F4, w2))


@pytest.mark.parametrize("spec", ["3^2", "2^4", "5^2"])
def test_theorem_witness_random(spec):
    F = parse_field(spec)
    rng = random.Random(spec + "witness")
    for _ in range(30):
        w1 = rng.randrange(1, F.q)
        C1 = omega_curve(F, w1).transform(random_invertible(F, rng))
        w2 = rng.randrange(1, F.q)
        C2 = omega_curve(F, w2).transform(random_invertible(F, rng))
        e = equivalent(C1, C2)
        assert e.equivalent == (class_of_omega(F, w1) == class_of_omega(F, w2))
        if e.equivalent:
            assert C1.transform(e.witness) == C2


@pytest.mark.parametrize(
    "spec,counts", [("2^2", (1, 2, 0)), ("3^2", (1, 3, 2)), ("2^4", (1, 4, 5)), ("5^2", (1, 5, 9))]
)
def test_table1(spec, counts):
    F = parse_field(spec)
    r = F.sqrt_q
    report = class_census(F)
    assert report.matches_expected(F)
    rows = {row["type"]: row for row in report.to_dict()["rows"]}
    assert tuple(rows.get(t, {"classes": 0})["classes"] for t in "ABC") == counts
    assert rows["A"]["N_q"] == rows["A"]["inflexions"] == r**3 + 1
    assert rows["B"]["N_q"] == rows["B"]["inflexions"] == r + 1
    if "C" in rows:
        assert rows["C"]["N_q"] == F.q + 1 and rows["C"]["inflexions"] == 2
    else:
        assert any("empty" in note for note in report.notes)


def test_table1_csv(F9):
    assert class_census(F9).to_csv() == "type,classes,N_q,inflexions\nA,1,28,28\nB,3,4,4\nC,2,10,2\n"


def test_residual_law():
    for spec in ("3^2", "5^2"):
        F = parse_field(spec)
        for w in range(1, F.q):
            if not isinstance(class_of_omega(F, w), TypeC):
                continue
            C = omega_curve(F, w)
            for P in C.rational_points():
                if P[2] == 0:
                    continue
                x0 = F.div(P[0], P[2])
                x1, _, z1 = C.tangent_divisor(P).residual
                assert z1 != 0 and F.div(x1, z1) == F.div(x0, w)
