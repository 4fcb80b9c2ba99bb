"""Sweeps over many matrices A checking the global statements about C_A.

Work is cut into fixed-size blocks.  A block's matrices depend only on the
plan and the block number (sampled blocks draw from a Philox stream keyed by
(seed, block)), and block reports merge associatively, so the merged report
does not depend on how many workers ran the blocks.
"""
from __future__ import annotations

import json
import logging
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field, replace

import numpy as np

from . import batch
from . import projective as pj
from .classify import orbit
from .curve import Curve
from .errors import BudgetExceededError
from .field import MAX_EXTENSION_BASE_Q, Field, extension, parse_field

log = logging.getLogger(__name__)

CHECKS = ("congruence", "m_bounds", "mirror_props", "dual_incidence", "multiplicity_dichotomy")
DEFAULT_CHECKS = {
    "congruence": ("congruence", "m_bounds"),
    "bounds": ("congruence", "m_bounds"),
    "props": ("mirror_props", "dual_incidence", "multiplicity_dichotomy"),
}
EXHAUSTIVE_BUDGET = 1 << 24
_EXHAUSTIVE_BLOCK = 1 << 16


@dataclass(frozen=True)
class SweepPlan:
    field: str
    mode: str = "sampled"
    count: int = 10_000
    seed: int = 20240601
    checks: tuple = ()
    workers: int = 1
    block_size: int = 4096
    extension_count: int = 100
    budget: int = EXHAUSTIVE_BUDGET

    def __post_init__(self):
        if self.mode not in ("exhaustive", "sampled"):
            raise ValueError(f"mode must be exhaustive or sampled, not {self.mode!r}")
        unknown = set(self.checks) - set(CHECKS)
        if unknown:
            raise ValueError(f"unknown checks: {sorted(unknown)}")
        if self.workers < 1 or self.block_size < 1 or self.count < 0:
            raise ValueError("workers and block_size must be positive, count nonnegative")
        object.__setattr__(self, "checks", tuple(sorted(set(self.checks))))

    def with_default_checks(self, kind: str) -> "SweepPlan":
        return self if self.checks else replace(self, checks=DEFAULT_CHECKS[kind])


def parse_plan_file(text: str, **overrides) -> SweepPlan:
    """Plan from ``key=value`` lines; ``#`` starts a comment."""
    values: dict = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"plan line without '=': {raw!r}")
        values[key.strip()] = value.strip()
    values.update({k: v for k, v in overrides.items() if v is not None})
    ints = ("count", "seed", "workers", "block_size", "extension_count", "budget")
    kwargs = {}
    for key, value in values.items():
        if key in ints:
            kwargs[key] = int(value)
        elif key == "checks":
            kwargs[key] = tuple(c.strip() for c in value.split(",") if c.strip()) if isinstance(value, str) else tuple(value)
        elif key in ("field", "mode"):
            kwargs[key] = value
        else:
            raise ValueError(f"unknown plan key {key!r}")
    if "field" not in kwargs:
        raise ValueError("plan has no field")
    return SweepPlan(**kwargs)


# ---- reports -------------------------------------------------------------


@dataclass
class SweepReport:
    kind: str
    field: str
    q: int
    mode: str
    seed: int
    checks: tuple
    curves: int = 0
    gl_matrices: int = 0
    histogram: Counter = dc_field(default_factory=Counter)  # (N, inflexions) -> count
    m_histogram: Counter = dc_field(default_factory=Counter)
    counters: Counter = dc_field(default_factory=Counter)
    violations: list = dc_field(default_factory=list)
    stats: dict = dc_field(default_factory=dict)  # timing; not part of the canonical report

    def merge(self, other: "SweepReport") -> "SweepReport":
        head = (self.kind, self.field, self.q, self.mode, self.seed, self.checks)
        if head != (other.kind, other.field, other.q, other.mode, other.seed, other.checks):
            raise ValueError("cannot merge reports of different sweeps")
        return SweepReport(
            *head,
            curves=self.curves + other.curves,
            gl_matrices=self.gl_matrices + other.gl_matrices,
            histogram=self.histogram + other.histogram,
            m_histogram=self.m_histogram + other.m_histogram,
            counters=self.counters + other.counters,
            violations=sorted(self.violations + other.violations, key=_violation_key),
        )

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self, include_stats: bool = False) -> dict:
        out = {
            "kind": self.kind,
            "field": self.field,
            "q": self.q,
            "mode": self.mode,
            "seed": self.seed,
            "checks": list(self.checks),
            "curves": self.curves,
            "gl_matrices": self.gl_matrices,
            "histogram": [
                {"N": n, "inflexions": k, "count": c} for (n, k), c in sorted(self.histogram.items())
            ],
            "m_histogram": [{"m": m, "count": c} for m, c in sorted(self.m_histogram.items())],
            "counters": dict(sorted(self.counters.items())),
            "violations": list(self.violations),
        }
        if include_stats:
            out["stats"] = dict(self.stats)
        return out

    def to_json(self, include_stats: bool = False) -> str:
        return json.dumps(self.to_dict(include_stats), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        lines = ["kind,field,N,inflexions,m,count"]
        r = _sqrt_from_spec(self.field)
        for (n, k), c in sorted(self.histogram.items()):
            m = (n - 1) // r if (n - 1) % r == 0 else ""
            lines.append(f"{self.kind},{self.field},{n},{k},{m},{c}")
        return "\n".join(lines) + "\n"


def _sqrt_from_spec(spec: str) -> int:
    return parse_field(spec).sqrt_q


def _violation_key(v: dict):
    return (v["index"], v["check"], v.get("detail", ""))


def _violation(check: str, index: int, A, detail: str) -> dict:
    return {"check": check, "index": int(index), "A": [int(a) for a in A], "detail": detail}


# ---- blocks --------------------------------------------------------------


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))


def sample_block(F: Field, plan: SweepPlan, block: int) -> tuple[np.ndarray, np.ndarray]:
    """Invertible matrices of sampled block ``block`` and their global sample indices."""
    start = block * plan.block_size
    size = max(0, min(plan.block_size, plan.count - start))
    if size == 0:
        return np.zeros((0, 9), dtype=np.int64), np.zeros(0, dtype=np.int64)
    rng = _block_rng(plan.seed, block)
    kept = []
    have = 0
    while have < size:
        draw = rng.integers(0, F.q, size=(size - have + 16, 9), dtype=np.int64)
        draw = draw[batch.det_batch(F, draw) != 0]
        kept.append(draw)
        have += draw.shape[0]
    mats = np.concatenate(kept)[:size]
    return mats, np.arange(start, start + size, dtype=np.int64)


def _block_count(F: Field, plan: SweepPlan) -> int:
    if plan.mode == "exhaustive":
        total = F.q**9
        if total > plan.budget:
            raise BudgetExceededError(
                f"exhaustive sweep over {F.q}^9 = {total} matrices exceeds the budget {plan.budget}"
            )
        return -(-total // _EXHAUSTIVE_BLOCK)
    return -(-plan.count // plan.block_size)


def _block_matrices(F: Field, plan: SweepPlan, block: int):
    if plan.mode == "exhaustive":
        start = block * _EXHAUSTIVE_BLOCK
        return batch.pgl_rows(F, start, min(start + _EXHAUSTIVE_BLOCK, F.q**9))
    return sample_block(F, plan, block)


def _empty(kind: str, F: Field, plan: SweepPlan) -> SweepReport:
    return SweepReport(kind, F.spec, F.q, plan.mode, plan.seed if plan.mode == "sampled" else 0, plan.checks)


_special_orbits: dict = {}


def _q4_special_orbit(F: Field) -> frozenset:
    """PGL orbit of diag[1, w, w^2] at q = 4."""
    if F.spec not in _special_orbits:
        w = F.generator
        _special_orbits[F.spec] = orbit(F, pj.diag(1, w, F.mul(w, w)))
    return _special_orbits[F.spec]


def _scan_block(kind: str, plan: SweepPlan, block: int) -> SweepReport:
    """congruence / bounds block: batched point and inflexion counts."""
    F = parse_field(plan.field)
    rep = _empty(kind, F, plan)
    mats, index = _block_matrices(F, plan, block)
    if mats.shape[0] == 0:
        return rep
    r, q = F.sqrt_q, F.q
    mask = batch.on_curve_mask(F, mats)
    counts = mask.sum(axis=1)
    flex = batch.inflexion_counts(F, mats, mask)
    rep.curves = int(mats.shape[0])
    rep.gl_matrices = rep.curves * (q - 1) if plan.mode == "exhaustive" else rep.curves
    rep.histogram.update(zip(counts.tolist(), flex.tolist()))

    m, rem = np.divmod(counts - 1, r)
    good = rem == 0
    rep.m_histogram.update(m[good].tolist())
    if "congruence" in plan.checks:
        for k in np.flatnonzero(~good).tolist():
            rep.violations.append(_violation("congruence", index[k], mats[k], f"N = {counts[k]} is not 1 mod {r}"))
    if "m_bounds" in plan.checks:
        in_range = good & ((m == q) | ((m >= 0) & (m <= r + 2)))
        for k in np.flatnonzero(good & ~in_range).tolist():
            rep.violations.append(_violation("m_bounds", index[k], mats[k], f"m = {m[k]} outside {{q}} and [0, {r + 2}]"))
        if kind == "bounds":
            maximal = np.flatnonzero(good & (m == q))
            normed = batch.normalize_batch(F, mats[maximal])
            herm = batch.hermitian_mask(F, normed)
            rep.counters["maximal_hermitian"] += int(herm.sum())
            for k, row, is_h in zip(maximal.tolist(), normed.tolist(), herm.tolist()):
                if is_h:
                    continue
                if q == 4 and tuple(row) in _q4_special_orbit(F):
                    rep.counters["maximal_special_q4"] += 1
                    continue
                rep.violations.append(_violation("m_bounds", index[k], mats[k], "m = q but not Hermitian"))
    rep.violations.sort(key=_violation_key)
    return rep


def _check_curve_props(rep: SweepReport, plan: SweepPlan, F: Field, idx: int, A, with_extension: bool):
    C = Curve(F, A)
    r = F.sqrt_q
    pts = C.rational_points()
    M = C.mirror()
    checks = plan.checks

    def bad(check, detail):
        rep.violations.append(_violation(check, idx, A, detail))

    if "mirror_props" in checks and set(pts) != set(M.rational_points()):
        bad("mirror_props", "C_A(F_q) != C_A*(F_q)")
    D = C.dual() if "dual_incidence" in checks else None
    for P in pts:
        d = C.tangent_divisor(P)
        rep.counters["points"] += 1
        if "multiplicity_dichotomy" in checks:
            if d.multiplicity not in (r, r + 1) or d.coefficients[:2] != (0, 0):
                bad("multiplicity_dichotomy", f"P = {P}: multiplicity {d.multiplicity}")
            elif not (C.contains(d.residual) and pj.incident(F, d.residual, d.line)):
                bad("multiplicity_dichotomy", f"P = {P}: residual {d.residual} not on curve and tangent")
        if D is not None and not D.contains(d.line):
            bad("dual_incidence", f"tangent at {P} is not on the dual curve")
        if "mirror_props" in checks:
            dm = M.tangent_divisor(P)
            if d.is_inflexion != dm.is_inflexion:
                bad("mirror_props", f"inflexion status differs at {P}")
            elif d.is_inflexion and d.line != dm.line:
                bad("mirror_props", f"tangent lines differ at inflexion {P}")
            elif not d.is_inflexion:
                back = M.tangent_divisor(d.residual)
                if back.residual != P or back.multiplicity != r:
                    bad("mirror_props", f"mirror reciprocity fails for {P} -> {d.residual}")
    if with_extension:
        E = C.base_change()
        rep.counters["extension_curves"] += 1
        for P in E.rational_points():
            d = E.tangent_divisor(P)
            rep.counters["extension_points"] += 1
            if d.multiplicity not in (r, r + 1) or not E.contains(d.residual):
                bad("multiplicity_dichotomy", f"over F_{E.field.q}, P = {P}: multiplicity {d.multiplicity}")
    return len(pts), len(C.inflexions())


def _props_block(kind: str, plan: SweepPlan, block: int) -> SweepReport:
    F = parse_field(plan.field)
    rep = _empty(kind, F, plan)
    mats, index = _block_matrices(F, plan, block)
    extend = "multiplicity_dichotomy" in plan.checks and F.q > 4 and F.q <= MAX_EXTENSION_BASE_Q
    for row, idx in zip(mats.tolist(), index.tolist()):
        n_pts, n_flex = _check_curve_props(rep, plan, F, idx, tuple(row), extend and idx < plan.extension_count)
        rep.curves += 1
        rep.histogram[(n_pts, n_flex)] += 1
        if (n_pts - 1) % F.sqrt_q == 0:
            rep.m_histogram[(n_pts - 1) // F.sqrt_q] += 1
    rep.gl_matrices = rep.curves * (F.q - 1) if plan.mode == "exhaustive" else rep.curves
    rep.violations.sort(key=_violation_key)
    return rep


_RUNNERS = {"congruence": _scan_block, "bounds": _scan_block, "props": _props_block}


def _run_block(args) -> SweepReport:
    kind, plan, block = args
    return _RUNNERS[kind](kind, plan, block)


def run_sweep(kind: str, plan: SweepPlan) -> SweepReport:
    plan = plan.with_default_checks(kind)
    F = parse_field(plan.field)
    if kind == "props" and "multiplicity_dichotomy" in plan.checks and 4 < F.q and plan.extension_count:
        extension(F)  # fail early with EmbeddingUnavailable for large q
    nblocks = _block_count(F, plan)
    jobs = [(kind, plan, b) for b in range(nblocks)]
    started = time.perf_counter()
    report = _empty(kind, F, plan)
    if plan.workers == 1 or nblocks <= 1:
        for job in jobs:
            report = report.merge(_run_block(job))
    else:
        with ProcessPoolExecutor(max_workers=plan.workers) as pool:
            for part in pool.map(_run_block, jobs):
                report = report.merge(part)
    wall = time.perf_counter() - started
    report.stats = {
        "wall_seconds": round(wall, 3),
        "workers": plan.workers,
        "curves_per_second": round(report.curves / wall, 1) if wall else None,
    }
    log.info("%s sweep over %s: %d curves in %.2fs", kind, F.spec, report.curves, wall)
    return report


def sweep_congruence(plan: SweepPlan) -> SweepReport:
    """N_q = 1 mod sqrt(q) and the m-bounds for every matrix in the plan."""
    return run_sweep("congruence", plan)


def sweep_corollary_bounds(plan: SweepPlan) -> SweepReport:
    """As sweep_congruence, plus: m = q only for Hermitian curves (or, at q = 4,
    curves equivalent to diag[1, w, w^2], found by brute force)."""
    return run_sweep("bounds", plan)


def sweep_properties(plan: SweepPlan) -> SweepReport:
    """Mirror, dual and tangent-multiplicity properties curve by curve."""
    return run_sweep("props", plan)


SWEEPS = {"congruence": sweep_congruence, "bounds": sweep_corollary_bounds, "props": sweep_properties}

__all__ = [
    "SweepPlan", "SweepReport", "parse_plan_file", "sample_block", "run_sweep",
    "sweep_congruence", "sweep_corollary_bounds", "sweep_properties", "SWEEPS", "CHECKS",
]  # fmt: skip
