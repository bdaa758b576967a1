"""Acceptance criteria 1 to 10, one test each, reporting a pass/fail line."""

import subprocess
import sys
import time
from fractions import Fraction

import numpy as np

from posspec.harness import VerificationConfig, lch_corpus, measure_corpus
from posspec.lattice import LatticeContext
from posspec.lch import (C0Representation, DiscreteLCH, c0_function_grid,
                         c0_rep_to_spectral_measure, monotone_class_extend, random_lch_measure,
                         restrict, retrieval_formulas_check, riesz_to_measure,
                         spectral_regularity_check)
from posspec.measurable import BorelFunction, char, total_variation
from posspec.operators import operator_norm
from posspec.representation import (commutant_equality_check, generate,
                                    generated_subalgebra_check, probe_grid, regular_rep_norm,
                                    rep_norm, weak_characterization_error)
from posspec.serialization import parse_measure, read_json, shipped
from posspec.spectral import (PositiveSpectralMeasure, cone_probe_pairs, mu_pair,
                              signed_probe_pairs, validate, variation_bound_check)

import oracles

DEFAULT = VerificationConfig()


def rank_one_u13():
    return PositiveSpectralMeasure.from_matrices(LatticeContext(2), [("a", [[1, 0], [3, 0]])])


def test_criterion_01_norm_identity(record_criterion):
    start = time.perf_counter()
    cfg = VerificationConfig(seed=1, corpus_size=240, norm_kinds=("l1", "linf"))
    measures = [inst.measure for inst in measure_corpus(cfg)] + [rank_one_u13()]
    worst, big, styles = 0.0, 0, {inst.style for inst in measure_corpus(cfg)}
    for p in measures:
        unit = operator_norm(p.total)
        oracle = oracles.operator_norm(p.ctx.norm_kind.value, p.total.matrix, p.ctx.weights)
        rep = generate(p)
        worst = max(worst, abs(rep_norm(rep) - unit), abs(regular_rep_norm(rep) - unit),
                    abs(unit - oracle))
        big += unit > 1.0
    u13 = rep_norm(generate(rank_one_u13()))
    elapsed = time.perf_counter() - start
    ok = (len(measures) >= 200 and worst <= 1e-9 and big >= 20 and u13 == 3.0
          and styles == {"band", "rank1"} and elapsed <= 30.0)
    record_criterion(1, ok, f"{len(measures)} measures, max error {worst:.2e}, "
                            f"{big} with norm > 1, u=(1,3) -> {u13}, {elapsed:.1f}s")
    assert ok


def test_criterion_02_definition(record_criterion):
    corpus = [inst.measure for inst in measure_corpus(DEFAULT)]
    corpus += [inst.measure for inst in lch_corpus(DEFAULT)]
    failures = sum(not validate(p).passed for p in corpus)
    counter = validate(parse_measure(read_json(shipped("one_sided_counterexample.json"))))
    ann = counter["annihilation"]
    counter_ok = (not counter.passed and not ann.passed and ann.witness["pair"] == ["b", "a"]
                  and ann.witness["product"] == [[0.0, 0.0], [1.0, 0.0]])
    perturbed = PositiveSpectralMeasure.from_matrices(
        LatticeContext(3), [("a", np.diag([1.01, 0, 0])), ("b", np.diag([0, 1.0, 1.0]))])
    pert = validate(perturbed)
    pert_ok = not pert.passed and pert["atom-idempotence"].witness == ["a"]
    ok = failures == 0 and counter_ok and pert_ok
    record_criterion(2, ok, f"{len(corpus)} corpus measures, {failures} rejected; "
                            f"counterexample witness {ann.witness['pair']}, "
                            f"perturbation witness {pert['atom-idempotence'].witness}")
    assert ok


def test_criterion_03_total_variation(record_criterion):
    pairs = bad = cone = cone_eq = 0
    for inst in measure_corpus(DEFAULT):
        p = inst.measure
        probes = cone_probe_pairs(p.ctx, 6, 3) + signed_probe_pairs(p.ctx, 6, 3)
        for x, xs in probes:
            r = variation_bound_check(p, x, xs)
            tv = float(np.sum(np.abs(mu_pair(p, x, xs).values)))
            pairs += 1
            bad += not r.passed or abs(tv - r.totvar) > 1e-12 * max(1.0, tv)
            if r.cone_signed:
                cone += 1
                cone_eq += r.equality
    p = PositiveSpectralMeasure.from_matrices(LatticeContext(2), [("a", [[1, 1], [0, 0]])])
    ctx = p.ctx
    strict = variation_bound_check(p, ctx.vector([1, -1]), ctx.vector([1, 0]))
    strict_ok = strict.totvar == 0.0 and strict.bound == 2.0 and strict.passed
    ok = pairs >= 1000 and bad == 0 and cone == cone_eq and strict_ok
    record_criterion(3, ok, f"{pairs} pairs, {bad} violations, {cone_eq}/{cone} cone-signed "
                            f"equalities, witness totvar {strict.totvar} < bound {strict.bound}")
    assert ok


def test_criterion_04_weak_characterization(record_criterion):
    worst, mismatches, compared = 0.0, 0, 0
    for inst in measure_corpus(DEFAULT):
        p = inst.measure
        rep = generate(p)
        probes = probe_grid(p.ctx, DEFAULT.seed)
        rng = np.random.default_rng(len(p.space))
        funcs = [char(p.space.of_indices([i])) for i in range(len(p.space))]
        funcs += [BorelFunction(p.space, rng.uniform(-2, 2, len(p.space))) for _ in range(4)]
        worst = max(worst, max(weak_characterization_error(rep, f, probes) for f in funcs))
        if len(p.space) <= 6:
            for x, xs in probes:
                mu = mu_pair(p, x, xs)
                compared += 1
                mismatches += total_variation(mu) != float(oracles.partition_variation(mu.values))
    ok = worst <= 1e-9 and mismatches == 0 and compared > 0
    record_criterion(4, ok, f"max weak error {worst:.2e}; partition oracle mismatches "
                            f"{mismatches}/{compared}")
    assert ok


def test_criterion_05_commutant_subalgebra(record_criterion):
    failures = 0
    for inst in measure_corpus(DEFAULT):
        rep = generate(inst.measure)
        c = commutant_equality_check(rep, DEFAULT.seed)
        a = generated_subalgebra_check(rep, DEFAULT.seed)
        mats = [q.matrix for q in inst.measure.atom_projections]
        dim = inst.measure.ctx.dim
        failures += not (c.passed and a.passed
                         and set(c.info["dimensions"].values()) ==
                         {oracles.commutant_dimension(mats, dim)}
                         and set(a.info["dimensions"].values()) ==
                         {oracles.algebra_dimension(mats, dim)})
    diag = PositiveSpectralMeasure.from_matrices(
        LatticeContext(3), [("a", np.diag([1.0, 0, 0])), ("b", np.diag([0, 1.0, 0]))])
    dims = set(commutant_equality_check(generate(diag)).info["dimensions"].values())
    ok = failures == 0 and dims == {3}
    record_criterion(5, ok, f"{DEFAULT.corpus_size} instances, {failures} failures; "
                            f"diagonal example commutant dimension {sorted(dims)}")
    assert ok


def test_criterion_06_riesz(record_criterion):
    failures = 0
    rng = np.random.default_rng(6)
    for _ in range(150):
        n = int(rng.integers(1, 11))
        w = rng.normal(size=n) * 10.0 ** rng.integers(-3, 4, size=n)
        r = riesz_to_measure(DiscreteLCH(n), w)
        exact = float(sum((abs(Fraction(float(v))) for v in w), Fraction(0)))
        failures += not (r.report.passed and r.functional_norm == exact == r.total_variation)
    example = riesz_to_measure(DiscreteLCH(3), [1.0, -2.0, 0.5]).functional_norm
    ok = failures == 0 and example == 3.5
    record_criterion(6, ok, f"150 measures, {failures} mismatches; (1,-2,0.5) -> {example}")
    assert ok


def test_criterion_07_regularity(record_criterion):
    wrong, inexact, irregular = 0, 0, 0
    for inst in lch_corpus(DEFAULT):
        r = spectral_regularity_check(inst.lch, inst.measure, seed=DEFAULT.seed)
        tail = inst.lch.tail_index
        predicate = tail is None or not np.any(inst.measure.atom_projections[tail].matrix)
        wrong += r.info["regular"] != predicate or not r.passed
        irregular += not predicate
        inexact += r.info["order_outer_error"] != 0.0
        inexact += predicate and r.info["order_inner_error"] != 0.0
    ok = wrong == 0 and inexact == 0 and irregular > 0
    record_criterion(7, ok, f"{DEFAULT.corpus_size} instances ({irregular} irregular), "
                            f"{wrong} wrong verdicts, {inexact} inexact identities")
    assert ok


def test_criterion_08_retrieval(record_criterion):
    cfg = VerificationConfig(seed=8, corpus_size=80, max_points=10)
    failures, inexact, models = 0, 0, 0
    for k, inst in enumerate(lch_corpus(cfg)):
        lch = inst.lch
        rep = restrict(generate(inst.measure), lch)
        p = c0_rep_to_spectral_measure(rep, k)
        rng = np.random.default_rng(k)
        v = lch.space.of_indices(np.flatnonzero(rng.random(len(lch.space)) < 0.5))
        kk = lch.space.of_indices(np.flatnonzero(rng.random(lch.cutoff) < 0.5))
        r = retrieval_formulas_check(rep, p, v, kk, k)
        models += 1
        failures += not r.passed
        inexact += not all(r.info[f"{n}:exact"]
                           for n in ("open-supremum", "compact-infimum", "total-supremum"))
    ok = failures == 0 and inexact == 0
    record_criterion(8, ok, f"{models} models with up to 10 points, {failures} failures, "
                            f"{inexact} inexact suprema or infima")
    assert ok


def test_criterion_09_roundtrip(record_criterion):
    bad_forward = bad_backward = bad_ext = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        lch = DiscreteLCH(int(rng.integers(1, 7)), bool(seed % 2))
        ctx = LatticeContext(int(rng.integers(2, 5)), ["l1", "linf", "l2"][seed % 3])
        p = random_lch_measure(lch, ctx, seed, ["band", "rank1"][seed % 4 // 2])
        rep = restrict(generate(p), lch)
        q = c0_rep_to_spectral_measure(rep, seed)
        bad_forward += not q.identical_to(p)
        again = restrict(generate(q), lch)
        same = all(np.array_equal(again(f).matrix, rep(f).matrix)
                   for f in c0_function_grid(lch, seed))
        bad_backward += not same or not isinstance(again, C0Representation)
        bad_ext += not monotone_class_extend(rep, seed, 64).report.passed
    ok = bad_forward == bad_backward == bad_ext == 0
    record_criterion(9, ok, f"100 seeds: {bad_forward} forward, {bad_backward} backward, "
                            f"{bad_ext} extension failures")
    assert ok


def test_criterion_10_default_verify_run(record_criterion, tmp_path):
    start = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "posspec", "verify", "--seed", "42",
                           "--out", str(tmp_path / "report.json")],
                          capture_output=True, text=True, timeout=600)
    elapsed = time.perf_counter() - start
    report = read_json(tmp_path / "report.json") if proc.returncode in (0, 1) else None
    total = report["summary"]["total"] if report else 0
    suites = set(report["summary"]["by_suite"]) if report else set()
    ok = proc.returncode == 0 and elapsed <= 120.0 and suites == set(DEFAULT.suites)
    record_criterion(10, ok, f"exit {proc.returncode}, {total} checks over {len(suites)} "
                             f"suites in {elapsed:.1f}s")
    assert ok, proc.stderr
