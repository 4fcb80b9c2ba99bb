"""Self-checks run by ``hermrel verify-all`` for a single field."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from . import projective as pj
from .census import SweepPlan, sweep_congruence, sweep_corollary_bounds, sweep_properties
from .classify import TypeC, class_census, class_of_omega, diagonal_curve, equivalent
from .curve import Curve, omega_curve
from .field import Field, solve_artin_schreier, solve_kummer, solve_semilinear


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def check_field(F: Field) -> CheckResult:
    r = F.sqrt_q
    elems = range(F.q)
    frob_ok = all(F.frob(F.frob(a)) == a for a in elems)
    traces = [F.trace(a) for a in elems]
    norms = [F.norm(a) for a in range(1, F.q)]
    sub = set(F.subfield)
    ok = (
        frob_ok
        and len(sub) == r
        and traces.count(0) == r
        and set(traces) == sub
        and norms.count(1) == r + 1
        and set(norms) == sub - {0}
    )
    return CheckResult("field", ok, f"|ker Tr| = {traces.count(0)}, |ker Nm| = {norms.count(1)}")


def _scan(F: Field, fn) -> list[int]:
    return [x for x in range(F.q) if fn(x) == 0]


def check_solvers(F: Field, sample: int = 2000, seed: int = 0) -> CheckResult:
    r = F.sqrt_q
    pairs = [(a, b) for a in range(1, F.q) for b in range(F.q)]
    if F.q > 25:
        pairs = random.Random(seed).sample(pairs, min(sample, len(pairs)))
    bad = 0
    for alpha, beta in pairs:
        roots = solve_semilinear(F, alpha, beta)
        if roots != _scan(F, lambda x: F.add(F.add(F.frob(x), F.mul(alpha, x)), beta)):
            bad += 1
        if F.norm(alpha) != 1:
            expected = 1
        else:
            expected = r if beta == 0 or alpha == F.pow(beta, 1 - r) else 0
        bad += len(roots) != expected
    for beta in range(F.q):
        roots = solve_artin_schreier(F, beta)
        bad += roots != _scan(F, lambda x: F.sub(F.sub(F.frob(x), x), beta))
        bad += len(roots) != (r if F.trace(beta) == 0 else 0)
        if beta:
            roots = solve_kummer(F, beta)
            scan = [x for x in range(1, F.q) if F.pow(x, r - 1) == beta]
            bad += roots != scan
            bad += len(roots) != (r - 1 if F.norm(beta) == 1 else 0)
    return CheckResult("solvers", bad == 0, f"{len(pairs)} (alpha, beta) pairs, {bad} mismatches")


def check_hermitian(F: Field) -> CheckResult:
    C = Curve(F, pj.IDENTITY)
    r = F.sqrt_q
    n = C.point_count()
    flex = len(C.inflexions())
    ok = n == r**3 + 1 and flex == n and C.is_hermitian()
    if F.q == 4:
        w = F.generator
        ok = ok and Curve(F, pj.diag(1, w, F.mul(w, w))).point_count() == 9
    return CheckResult("hermitian", ok, f"N = {n}, inflexions = {flex}")


def check_table1(F: Field) -> CheckResult:
    report = class_census(F)
    return CheckResult("table1", report.matches_expected(F), report.to_csv().strip().replace("\n", "; "))


def check_residual_law(F: Field) -> CheckResult:
    checked = bad = 0
    for omega in range(1, F.q):
        if not isinstance(class_of_omega(F, omega), TypeC):
            continue
        C = omega_curve(F, omega)
        for P in C.rational_points():
            if P[2] == 0:
                continue
            x0 = F.div(P[0], P[2])
            x1, _, z1 = C.tangent_divisor(P).residual
            checked += 1
            if z1 == 0 or F.div(x1, z1) != F.div(x0, omega):
                bad += 1
    return CheckResult("residual_law", bad == 0, f"{checked} affine points, {bad} failures")


def check_equivalence_oracle(F: Field) -> CheckResult:
    curves = [omega_curve(F, w) for w in range(1, F.q)]
    curves += [diagonal_curve(F, 1, 1, eta) for eta in range(1, F.q) if not F.in_subfield(eta)]
    bad = 0
    for C1, C2 in itertools.product(curves, repeat=2):
        a = equivalent(C1, C2)
        b = equivalent(C1, C2, "bruteforce")
        bad += a.equivalent != b.equivalent
        for e in (a, b):
            if e.equivalent and C1.transform(e.witness) != C2:
                bad += 1
    n = len(curves) ** 2
    return CheckResult("equivalence_oracle", bad == 0, f"{n} pairs, {bad} disagreements")


def _sweep_result(name: str, report) -> CheckResult:
    return CheckResult(name, report.ok, f"{report.curves} curves, {len(report.violations)} violations")


def verify_all(F: Field, *, seed: int = 20240601, workers: int = 1, samples: int = 20_000) -> list[CheckResult]:
    results = [check_field(F), check_solvers(F, seed=seed), check_hermitian(F), check_table1(F), check_residual_law(F)]
    exhaustive = F.q**9 <= SweepPlan(F.spec).budget
    mode = "exhaustive" if exhaustive else "sampled"
    plan = SweepPlan(F.spec, mode=mode, count=samples, seed=seed, workers=workers)
    results.append(_sweep_result("congruence", sweep_congruence(plan)))
    results.append(_sweep_result("bounds", sweep_corollary_bounds(plan)))
    props = SweepPlan(F.spec, count=min(samples, 500), seed=seed, workers=workers, extension_count=20)
    if F.q > 49:
        props = SweepPlan(F.spec, count=min(samples, 500), seed=seed, workers=workers, extension_count=0)
    results.append(_sweep_result("props", sweep_properties(props)))
    if F.q == 4:
        results.append(check_equivalence_oracle(F))
    return results
