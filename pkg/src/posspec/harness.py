"""Configuration-driven corpus generation and theorem verification."""

from __future__ import annotations

import time
import zlib
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .lattice import LatticeContext, NormKind
from .lch import (DiscreteLCH, C0Representation, automatic_continuity_check, c0_norm_report,
                  c0_rep_to_spectral_measure, measure_regularity_check, monotone_class_extend,
                  random_lch_measure, restrict, retrieval_formulas_check, riesz_to_measure,
                  spectral_regularity_check)
from .measurable import (SignedMeasure, char, constant, partition_variation,
                         total_variation)
from .operators import op_zero
from .report import Check, jsonable
from .representation import (_random_functions, commutant_equality_check, generate,
                             generated_subalgebra_check, monotone_convergence_check,
                             norm_identity_report, probe_grid, weak_characterization_error)
from .serialization import SUITES, MalformedInputError, check_schema, CONFIG_SCHEMA
from .spectral import (SCHEMA_VERSION, PositiveSpectralMeasure, cone_probe_pairs, mu_pair,
                       random_generate, signed_probe_pairs, validate, variation_bound_check)
from .tolerance import DEFAULT_TOLERANCE

MEASURE_SUITES = ("definition", "norms", "variation", "weak", "monotone", "commutant",
                  "subalgebra")
LCH_SUITES = ("riesz", "regularity", "retrieval", "roundtrip", "continuity")


@dataclass(frozen=True)
class VerificationConfig:
    seed: int = 42
    tolerance: float = DEFAULT_TOLERANCE
    corpus_size: int = 100
    dims: Tuple[int, ...] = (2, 3, 4, 5, 6)
    atom_counts: Tuple[int, ...] = (1, 2, 3, 4, 5, 6)
    norm_kinds: Tuple[str, ...] = ("linf", "l1", "l2", "wl1", "wlinf")
    styles: Tuple[str, ...] = ("band", "rank1")
    max_points: int = 6
    suites: Tuple[str, ...] = SUITES
    instances: Tuple[dict, ...] = ()

    def __post_init__(self) -> None:
        for name in ("dims", "atom_counts", "norm_kinds", "styles", "suites", "instances"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.corpus_size < 1:
            raise ValueError("corpus_size must be positive")
        if not self.dims or any(not 1 <= d <= 8 for d in self.dims):
            raise ValueError("dims must lie in 1..8")
        if not self.atom_counts or any(not 1 <= a <= 16 for a in self.atom_counts):
            raise ValueError("atom_counts must lie in 1..16")
        if not 1 <= self.max_points <= 10:
            raise ValueError("max_points must lie in 1..10")
        for kind in self.norm_kinds:
            NormKind(kind)
        unknown = set(self.suites) - set(SUITES)
        if unknown:
            raise ValueError(f"unknown suites: {sorted(unknown)}")

    @classmethod
    def from_json(cls, data: dict) -> "VerificationConfig":
        check_schema(data, CONFIG_SCHEMA, "config")
        fields = {k: v for k, v in data.items() if k != "schema_version"}
        try:
            return cls(**fields)
        except ValueError as exc:
            raise MalformedInputError(f"config: {exc}") from None

    def to_json(self) -> dict:
        out = {"schema_version": SCHEMA_VERSION}
        out.update({k: list(v) if isinstance(v, tuple) else v
                    for k, v in asdict(self).items()})
        return out

    def with_overrides(self, seed: Optional[int] = None, tolerance: Optional[float] = None,
                       suites: Optional[Sequence[str]] = None) -> "VerificationConfig":
        changes: dict = {}
        if seed is not None:
            changes["seed"] = seed
        if tolerance is not None:
            changes["tolerance"] = tolerance
        if suites is not None:
            changes["suites"] = tuple(suites)
        return replace(self, **changes)


# -- corpora ------------------------------------------------------------------

@dataclass(frozen=True)
class MeasureInstance:
    instance_id: str
    measure: PositiveSpectralMeasure
    style: str


@dataclass(frozen=True)
class LCHInstance:
    instance_id: str
    lch: DiscreteLCH
    measure: PositiveSpectralMeasure
    regular: bool


def _context(rng: np.random.Generator, dim: int, kind: str) -> LatticeContext:
    nk = NormKind(kind)
    weights = tuple(rng.uniform(0.5, 2.0, dim).round(3)) if nk.weighted else None
    return LatticeContext(dim, nk, weights)


def _pick(rng: np.random.Generator, options: Sequence):
    return options[int(rng.integers(len(options)))]


def measure_corpus(config: VerificationConfig) -> List[MeasureInstance]:
    out = []
    for i in range(config.corpus_size):
        rng = np.random.default_rng([config.seed, 0, i])
        dim = _pick(rng, config.dims)
        ctx = _context(rng, dim, _pick(rng, config.norm_kinds))
        style = _pick(rng, config.styles)
        atoms = _pick(rng, config.atom_counts)
        if style == "rank1":
            atoms = min(atoms, dim)
        p = random_generate(ctx, atoms, int(rng.integers(2 ** 31)), style)
        out.append(MeasureInstance(f"m{i:04d}", p, style))
    return out


def lch_corpus(config: VerificationConfig) -> List[LCHInstance]:
    out = []
    for i in range(config.corpus_size):
        rng = np.random.default_rng([config.seed, 1, i])
        lch = DiscreteLCH(int(rng.integers(1, config.max_points + 1)), bool(rng.random() < 0.6))
        regular = not lch.has_tail or bool(rng.random() < 0.5)
        ctx = _context(rng, _pick(rng, config.dims), _pick(rng, config.norm_kinds))
        p = random_lch_measure(lch, ctx, int(rng.integers(2 ** 31)), _pick(rng, config.styles),
                               regular)
        out.append(LCHInstance(f"x{i:04d}", lch, p, regular))
    return out


def supplied_instances(config: VerificationConfig):
    from .serialization import parse_measure

    measures, models = [], []
    for k, data in enumerate(config.instances):
        p = parse_measure(data)
        if "lch" in data:
            lch = DiscreteLCH.from_json(data["lch"])
            if p.space != lch.space:
                raise MalformedInputError(
                    f"supplied instance {k}: atoms {p.space.atoms} != {lch.space.atoms}")
            regular = not lch.has_tail or not np.any(p.atom_projections[-1].matrix)
            models.append(LCHInstance(f"supplied-{k:03d}", lch, p, regular))
        else:
            measures.append(MeasureInstance(f"supplied-{k:03d}", p, "supplied"))
    return measures, models


# -- suites over plain spectral measures -----------------------------------------

def _summary_check(name: str, anchor: str, failures: int, total: int, tol: float,
                   witness=None) -> Check:
    return Check(name, anchor, failures == 0, lhs=failures, rhs=0, tolerance=tol,
                 witness=witness if failures else None)


def suite_definition(inst: MeasureInstance, cfg: VerificationConfig) -> List[Check]:
    return validate(inst.measure, cfg.tolerance, seed=cfg.seed).checks


def suite_norms(inst: MeasureInstance, cfg: VerificationConfig) -> List[Check]:
    funcs = _random_functions(inst.measure.space, 16, cfg.seed)
    return norm_identity_report(generate(inst.measure), funcs, cfg.tolerance).checks


def suite_variation(inst: MeasureInstance, cfg: VerificationConfig) -> List[Check]:
    p = inst.measure
    probes = cone_probe_pairs(p.ctx, 8, cfg.seed) + signed_probe_pairs(p.ctx, 8, cfg.seed)
    results = [(x, xs, variation_bound_check(p, x, xs, cfg.tolerance)) for x, xs in probes]
    bad = [(x, xs, r) for x, xs, r in results if not r.passed]
    witness = None
    if bad:
        x, xs, r = bad[0]
        witness = {"x": x.coords, "xstar": xs.coords, "totvar": r.totvar, "bound": r.bound}
    cone = [r for _, _, r in results if r.cone_signed]
    return [
        _summary_check("variation-bounds", "total-variation-bound", len(bad), len(results),
                       cfg.tolerance, witness),
        Check("cone-signed-equality", "total-variation-bound/equality",
              all(r.equality for r in cone), lhs=len(cone),
              rhs=sum(r.equality for r in cone), tolerance=cfg.tolerance),
    ]


def suite_weak(inst: MeasureInstance, cfg: VerificationConfig) -> List[Check]:
    p = inst.measure
    rep = generate(p)
    space = p.space
    probes = probe_grid(p.ctx, cfg.seed, 8)
    funcs = [char(space.of_indices([i])) for i in range(len(space))]
    funcs += _random_functions(space, 8, cfg.seed)
    err = max(weak_characterization_error(rep, f, probes) for f in funcs)
    checks = [Check("weak-characterization", "generated-representation/weak", err <= cfg.tolerance,
                    lhs=err, rhs=0.0, tolerance=cfg.tolerance)]
    if len(space) <= 6:
        mismatches = []
        for x, xs in probes:
            mu = mu_pair(p, x, xs)
            tv, oracle = total_variation(mu), partition_variation(mu)
            if tv != oracle:
                mismatches.append({"totvar": tv, "partition_sup": oracle})
        checks.append(Check("partition-oracle", "total-variation/partitions", not mismatches,
                            lhs=len(mismatches), rhs=0, tolerance=0.0,
                            witness=mismatches[0] if mismatches else None))
    return checks


def suite_monotone(inst: MeasureInstance, cfg: VerificationConfig) -> List[Check]:
    p = inst.measure
    rep = generate(p)
    space = p.space
    probes = probe_grid(p.ctx, cfg.seed, 8)
    sets = [char(space.of_indices(range(k))) for k in range(1, len(space) + 1)]
    one = constant(space)
    scaled = [constant(space, 1.0 - 1.0 / n) for n in range(1, 9)]
    checks = []
    for tag, chain in (("indicators", sets), ("scaled-unit", scaled)):
        rep_chk = monotone_convergence_check(rep, chain, one, probes, cfg.tolerance)
        for c in rep_chk.checks:
            c.name = f"{tag}:{c.name}"
        checks.extend(rep_chk.checks)
    return checks


def suite_commutant(inst: MeasureInstance, cfg: VerificationConfig) -> List[Check]:
    return commutant_equality_check(generate(inst.measure), cfg.seed, cfg.tolerance).checks


def suite_subalgebra(inst: MeasureInstance, cfg: VerificationConfig) -> List[Check]:
    return generated_subalgebra_check(generate(inst.measure), cfg.seed, cfg.tolerance).checks


# -- suites over the locally compact model ------------------------------------------

def _id_key(instance_id: str) -> int:
    return zlib.crc32(instance_id.encode("utf-8"))


def _regular_version(inst: LCHInstance) -> PositiveSpectralMeasure:
    if inst.regular:
        return inst.measure
    projs = list(inst.measure.atom_projections)
    projs[inst.lch.tail_index] = op_zero(inst.measure.ctx)
    return PositiveSpectralMeasure(inst.measure.space, inst.measure.ctx, tuple(projs))


def suite_riesz(inst: LCHInstance, cfg: VerificationConfig) -> List[Check]:
    lch = inst.lch
    rng = np.random.default_rng([cfg.seed, 2, _id_key(inst.instance_id)])
    w = rng.normal(size=lch.cutoff).round(6)
    w[rng.random(lch.cutoff) < 0.2] = 0.0
    tail = round(abs(float(rng.normal())), 6) if lch.has_tail else 0.0
    result = riesz_to_measure(lch, w, tail)
    checks = list(result.report.checks)
    mod = SignedMeasure(lch.space, np.abs(result.measure.values))
    reg = measure_regularity_check(lch, mod, lch.space.full(), cfg.seed, cfg.tolerance)
    gap = reg.info["inner_gap"]
    checks.append(Check("inner-gap-is-tail-mass", "regular-borel-measure/inner",
                        abs(gap - tail) <= cfg.tolerance * max(1.0, tail), lhs=gap, rhs=tail,
                        tolerance=cfg.tolerance))
    checks.append(reg["outer-regular"])
    return checks


def suite_regularity(inst: LCHInstance, cfg: VerificationConfig) -> List[Check]:
    report = spectral_regularity_check(inst.lch, inst.measure, seed=cfg.seed, tol=cfg.tolerance)
    checks = list(report.checks)
    checks.append(Check("corpus-label", "regular-spectral-measure",
                        report.info["regular"] == inst.regular, lhs=report.info["regular"],
                        rhs=inst.regular, tolerance=cfg.tolerance))
    return checks


def _random_sets(inst: LCHInstance, seed: int):
    lch = inst.lch
    rng = np.random.default_rng([seed, 3, _id_key(inst.instance_id)])
    v = lch.space.of_indices(np.flatnonzero(rng.random(len(lch.space)) < 0.5))
    k = lch.space.of_indices(np.flatnonzero(rng.random(lch.cutoff) < 0.5))
    return v, k


def suite_retrieval(inst: LCHInstance, cfg: VerificationConfig) -> List[Check]:
    p = _regular_version(inst)
    rep = restrict(generate(p), inst.lch)
    v, k = _random_sets(inst, cfg.seed)
    report = retrieval_formulas_check(rep, p, v, k, cfg.seed, cfg.tolerance)
    return report.checks


def suite_roundtrip(inst: LCHInstance, cfg: VerificationConfig) -> List[Check]:
    tol = cfg.tolerance
    p = _regular_version(inst)
    rep = restrict(generate(p), inst.lch)
    q = c0_rep_to_spectral_measure(rep, cfg.seed, tol)
    checks = [Check("generate-restrict-extract", "kb-existence/bijection", q.identical_to(p),
                    tolerance=0.0)]
    again = restrict(generate(q), inst.lch)
    same = all(np.array_equal(a.matrix, b.matrix)
               for a, b in zip(again.point_images, rep.point_images))
    checks.append(Check("restrict-extract-generate", "kb-existence/bijection", same,
                        tolerance=0.0))
    if not inst.regular:
        # an irregular measure and its regular part restrict to the same pi;
        # extraction must return the regular one
        irregular_rep = restrict(generate(inst.measure), inst.lch)
        q_irr = c0_rep_to_spectral_measure(irregular_rep, cfg.seed, tol)
        checks.append(Check("unique-regular-generator", "kb-existence/unique",
                            q_irr.identical_to(p) and not q_irr.identical_to(inst.measure),
                            tolerance=0.0))
    if inst.lch.cutoff <= 12:
        checks.extend(c0_norm_report(rep, p, tol).checks)
    ext = monotone_class_extend(rep, cfg.seed, 64, tol)
    checks.extend(ext.report.checks)
    return checks


def suite_continuity(inst: LCHInstance, cfg: VerificationConfig) -> List[Check]:
    compact = DiscreteLCH(inst.lch.cutoff, False)
    images = inst.measure.atom_projections[:inst.lch.cutoff]
    rep = C0Representation(compact, inst.measure.ctx, images)
    return automatic_continuity_check(rep, cfg.seed, cfg.tolerance).checks


SUITE_RUNNERS: Dict[str, Callable] = {
    "definition": suite_definition, "norms": suite_norms, "variation": suite_variation,
    "weak": suite_weak, "monotone": suite_monotone, "commutant": suite_commutant,
    "subalgebra": suite_subalgebra, "riesz": suite_riesz, "regularity": suite_regularity,
    "retrieval": suite_retrieval, "roundtrip": suite_roundtrip, "continuity": suite_continuity,
}


# -- reports --------------------------------------------------------------------

@dataclass
class VerificationReport:
    config: VerificationConfig
    entries: List[dict] = field(default_factory=list)

    @property
    def summary(self) -> dict:
        passed = sum(1 for e in self.entries if e["pass"])
        by_suite: Dict[str, Dict[str, int]] = {}
        for e in self.entries:
            s = by_suite.setdefault(e["suite"], {"passed": 0, "failed": 0})
            s["passed" if e["pass"] else "failed"] += 1
        return {"total": len(self.entries), "passed": passed,
                "failed": len(self.entries) - passed, "by_suite": by_suite}

    @property
    def passed(self) -> bool:
        return all(e["pass"] for e in self.entries)

    def to_json(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "config": self.config.to_json(),
                "entries": self.entries, "summary": self.summary}


def _entry(suite: str, instance_id: str, check: Check, runtime_ms: float) -> dict:
    out = check.to_json()
    out["check"] = out.pop("name")
    out.update(suite=suite, instance_id=instance_id, runtime_ms=round(runtime_ms, 3))
    return out


def run_suite(suite: str, instances: Sequence[Union[MeasureInstance, LCHInstance]],
              cfg: VerificationConfig) -> List[dict]:
    runner = SUITE_RUNNERS[suite]
    entries = []
    for inst in instances:
        start = time.perf_counter()
        try:
            checks = runner(inst, cfg)
        except Exception as exc:  # a crash is a failed case, not a crashed run
            checks = [Check("error", suite, False, witness=f"{type(exc).__name__}: {exc}")]
        ms = (time.perf_counter() - start) * 1000.0
        entries.extend(_entry(suite, inst.instance_id, c, ms) for c in checks)
    return entries


def verify(cfg: VerificationConfig) -> VerificationReport:
    """Run the configured suites over the generated and supplied instances."""
    extra_measures, extra_models = supplied_instances(cfg)
    measures = models = None
    report = VerificationReport(cfg)
    for suite in sorted(set(cfg.suites)):
        if suite in MEASURE_SUITES:
            if measures is None:
                measures = measure_corpus(cfg) + extra_measures
            instances = measures
        else:
            if models is None:
                models = lch_corpus(cfg) + extra_models
            instances = models
        report.entries.extend(run_suite(suite, instances, cfg))
    report.entries.sort(key=lambda e: (e["suite"], e["instance_id"]))
    return report


def strip_runtime(report_json: dict) -> dict:
    """The report with timing fields removed, for determinism comparisons."""
    out = dict(report_json)
    out["entries"] = [{k: v for k, v in e.items() if k != "runtime_ms"}
                      for e in report_json["entries"]]
    return out


def generate_corpus(cfg: VerificationConfig) -> Dict[str, dict]:
    """File name to JSON spec for every generated instance."""
    files = {}
    for inst in measure_corpus(cfg):
        files[f"{inst.instance_id}.json"] = inst.measure.to_json()
    for inst in lch_corpus(cfg):
        data = inst.measure.to_json()
        data["lch"] = inst.lch.to_json()
        files[f"{inst.instance_id}.json"] = data
    return files


def render_text(report_json: dict) -> str:
    lines = []
    s = report_json["summary"]
    lines.append(f"{s['passed']}/{s['total']} checks passed, {s['failed']} failed")
    for suite, counts in sorted(s.get("by_suite", {}).items()):
        lines.append(f"  {suite:<12} passed {counts['passed']:>6}  failed {counts['failed']:>4}")
    failures = [e for e in report_json["entries"] if not e["pass"]]
    if failures:
        lines.append("failures:")
    for e in failures:
        line = f"  [{e['suite']}] {e['instance_id']} {e['check']} ({e['theorem_anchor']})"
        line += f" lhs={jsonable(e.get('lhs'))} rhs={jsonable(e.get('rhs'))}"
        if "witness" in e:
            line += f" witness={e['witness']}"
        lines.append(line)
    return "\n".join(lines) + "\n"
