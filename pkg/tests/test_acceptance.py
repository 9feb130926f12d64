"""Acceptance gate: one test and one PASS/FAIL line per criterion, at the stated tolerances."""

import itertools
import json
import math
import random
import time
from fractions import Fraction

import pytest

import conftest
from bergman_toeplitz.calculus import Truncation, build_commutator, max_abs_entry, max_rel_entry
from bergman_toeplitz.core import DomainSpec, pair_to_json
from bergman_toeplitz.decide import EXACT, classify_trivial, decide_commute, degree_only_identity
from bergman_toeplitz.fixtures import (
    ball_family_pair,
    ball_reference_pair,
    holomorphic_agreement,
    holomorphic_tuples,
    monomial_agreement,
    monomial_tuples,
    weighted_six_dim_pair,
)
from bergman_toeplitz.gamma import (
    GammaRatioIdentity,
    RationalFunction,
    decide_gamma_identity,
    sample_identity_residual,
)
from bergman_toeplitz.sweeps import (
    TRIVIAL_CLAUSES,
    SweepBounds,
    commute_sweep,
    oracle_sweep,
    semicommute_fixtures,
    semicommute_sweep,
    trivial_commuting_pair,
)

SEED = 0x5EED
SWEEP_CASES = 500
ORACLE_CASES = 10
ORACLE_SAMPLES = 10**7
ORACLE_THREADS = 4


def report(criterion, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
    print(line)
    conftest.ACCEPTANCE_LINES.append(line)
    return ok


def _timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0


def _canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


@pytest.fixture(scope="module")
def commute_run():
    return _timed(commute_sweep, SWEEP_CASES, SEED, 1)


@pytest.fixture(scope="module")
def oracle_run():
    return _timed(oracle_sweep, ORACLE_CASES, SEED, ORACLE_SAMPLES, ORACLE_THREADS)


def test_criterion_1_weighted_six_dim_pair():
    t0 = time.perf_counter()
    pair = weighted_six_dim_pair()
    verdict = decide_commute(pair)
    op = build_commutator(pair.domain, pair.first, pair.second, Truncation.degree(8))
    entry = max_abs_entry(op)
    elapsed = time.perf_counter() - t0
    ok = verdict.answer == "Yes" and verdict.mode == EXACT and entry <= 1e-9 and elapsed <= 10
    report(1, ok, f"{verdict.answer}/{verdict.mode}, max interior entry {entry:.2e}, {elapsed:.2f}s")
    assert ok


def test_criterion_2_ball_families():
    instances = [(f"family{f} T={T}", ball_family_pair(f, T)) for f, T in itertools.product((1, 2, 3), range(1, 6))]
    instances += [(f"reference l={l} k={k}", ball_reference_pair(l, k)) for l, k in ((7, 4), (9, 12))]
    failures = []
    for name, pair in instances:
        t0 = time.perf_counter()
        verdict = decide_commute(pair)
        triviality = classify_trivial(pair, verdict)
        elapsed = time.perf_counter() - t0
        if not (verdict and not triviality.clauses and elapsed <= 1.0):
            failures.append(f"{name} ({verdict.answer}, clauses {sorted(triviality.clauses)}, {elapsed:.2f}s)")
    detail = f"{len(instances) - len(failures)}/{len(instances)} Yes and non-trivial"
    if failures:
        detail += "; failing: " + ", ".join(failures)
    report(2, not failures, detail)
    assert not failures


def test_criterion_3_commute_sweep(commute_run):
    records, elapsed = commute_run
    agree = sum(r["agree"] for r in records)
    yes = sum(r["answer"] == "Yes" for r in records)
    non_trivial = sum(r["triviality"]["non_trivial"] for r in records)
    ok = agree == len(records) == SWEEP_CASES and elapsed <= 300
    report(3, ok, f"{agree}/{len(records)} agree ({yes} Yes, {non_trivial} non-trivial), {elapsed:.1f}s")
    assert ok


def test_criterion_4_semicommute_sweep():
    records, elapsed = _timed(semicommute_sweep, SWEEP_CASES, SEED, 1)
    agree = sum(r["agree"] for r in records)
    fixtures = semicommute_fixtures()
    fixtures_in = all(records[i]["pair"] == pair_to_json(pair) for i, (_, pair) in enumerate(fixtures))
    fixture_answers = [records[i]["answer"] for i in range(len(fixtures))]
    ok = agree == len(records) == SWEEP_CASES and fixtures_in and fixture_answers == ["Yes", "No"]
    report(4, ok, f"{agree}/{len(records)} agree, fixtures {fixture_answers}, {elapsed:.1f}s")
    assert ok


def _telescoped(rng):
    """x_j = y_{sigma(j)} + d_j with integer d_j; rhs is the product of the Pochhammer factors."""
    size = rng.randint(1, 4)
    y = [Fraction(rng.randint(0, 20), rng.randint(1, 4)) for _ in range(size)]
    shifts = [rng.randint(-3, 3) for _ in range(size)]
    shifts = [max(d, -math.floor(v)) for d, v in zip(shifts, y)]
    order = list(range(size))
    rng.shuffle(order)
    x = [y[j] + shifts[j] for j in order]
    num, den = [], []
    for v, d in zip(y, shifts):
        if d >= 0:
            num.extend(v + i for i in range(d))
        else:
            den.extend(v + i for i in range(d, 0))
    return GammaRatioIdentity(x, y, RationalFunction.from_shifts(num, den))


def _perturbed(rng, ident):
    x = list(ident.x)
    j = rng.randrange(len(x))
    if rng.random() < 0.5:
        step = Fraction(rng.randint(1, 2))
    else:
        step = Fraction(rng.randint(1, 3), rng.choice((2, 3, 4)))
    # step down when that keeps the argument non-negative, otherwise up
    x[j] += -step if rng.random() < 0.5 and x[j] >= step else step
    return GammaRatioIdentity(x, ident.y, ident.rhs)


def test_criterion_5_gamma_decider():
    rng = random.Random(f"gamma:{SEED:x}")
    true_ok, worst = 0, 0.0
    false_ok = 0
    for _ in range(200):
        ident = _telescoped(rng)
        residual = sample_identity_residual(ident)
        worst = max(worst, residual)
        true_ok += decide_gamma_identity(ident) and residual <= 1e-8
        pert = _perturbed(rng, ident)
        false_ok += pert.x != ident.x and not decide_gamma_identity(pert)
    degree_only_ok = 0
    pos = lambda: Fraction(rng.randint(1, 48), rng.randint(1, 4))  # noqa: E731
    for _ in range(100):
        p_hat, t_hat = pos(), pos()
        s_hat = t_hat + Fraction(rng.randint(0, 48), rng.randint(1, 4))
        a = Fraction(rng.randint(-24, 48), rng.randint(1, 4))
        b = Fraction(rng.randint(-24, 48), rng.randint(1, 4))
        degree_only_ok += not decide_gamma_identity(degree_only_identity(p_hat, s_hat, t_hat, a, b))
    ok = true_ok == 200 and false_ok == 200 and degree_only_ok == 100
    report(
        5,
        ok,
        f"true {true_ok}/200 (max residual {worst:.1e}), perturbed rejected {false_ok}/200, "
        f"degree-only identity rejected {degree_only_ok}/100",
    )
    assert ok


def test_criterion_6_predictable_and_special_cases(commute_run):
    rng = random.Random(f"clauses:{SEED:x}")
    bounds = SweepBounds()
    clause_counts = {}
    for clause in TRIVIAL_CLAUSES:
        good = 0
        for _ in range(50):
            pair = None
            while pair is None:
                n = rng.choice(bounds.dims)
                domain = DomainSpec(tuple(rng.randint(1, bounds.max_m) for _ in range(n)))
                pair = trivial_commuting_pair(rng, domain, bounds, clause)
            verdict = decide_commute(pair)
            good += bool(verdict) and clause in classify_trivial(pair, verdict).clauses
        clause_counts[clause] = good
    mono = sum(monomial_agreement(*args) for args in monomial_tuples(200, SEED))
    holo = sum(holomorphic_agreement(*args) for args in holomorphic_tuples(200, SEED))
    records, _ = commute_run
    yes = [r for r in records if r["answer"] == "Yes"]
    necessary = sum(r["integrality"] and r["eq14"] for r in yes)
    ok = all(v == 50 for v in clause_counts.values()) and mono == 200 and holo == 200 and necessary == len(yes)
    report(
        6,
        ok,
        f"clauses {clause_counts}, monomial {mono}/200, holomorphic {holo}/200, "
        f"necessary conditions {necessary}/{len(yes)}",
    )
    assert ok


def test_criterion_7_oracle(oracle_run):
    result, elapsed = oracle_run
    cases = result["cases"]
    within = sum(c["rel_err"] <= 0.01 and c["z"] <= 3 for c in cases)
    volumes = sum(v["z"] <= 3 for v in result["volumes"])
    worst_rel = max(c["rel_err"] for c in cases)
    worst_z = max(c["z"] for c in (*cases, *result["volumes"]))
    ok = within == ORACLE_CASES and volumes == 2 and elapsed <= 120
    report(
        7,
        ok,
        f"{within}/{ORACLE_CASES} coefficients, {volumes}/2 volumes "
        f"(max rel {worst_rel:.1e}, max z {worst_z:.2f}), {elapsed:.1f}s",
    )
    assert ok


def test_criterion_8_determinism(commute_run, oracle_run):
    sweep_docs = {_canonical_json(commute_run[0])}
    sweep_docs |= {_canonical_json(commute_sweep(SWEEP_CASES, SEED, t)) for t in (4, 8)}
    oracle_docs = {_canonical_json(oracle_run[0])}
    oracle_docs |= {
        _canonical_json(oracle_sweep(ORACLE_CASES, SEED, ORACLE_SAMPLES, t)) for t in (1, 8) if t != ORACLE_THREADS
    }
    ok = len(sweep_docs) == 1 and len(oracle_docs) == 1
    report(8, ok, f"distinct outputs over threads 1/4/8: sweep {len(sweep_docs)}, oracle {len(oracle_docs)}")
    assert ok
