"""Seeded randomized cross-checks of the deciders against truncated matrices and Monte Carlo.

Every case is drawn from its own generator seeded by (seed, index), so a sweep is the
same set of cases whatever the thread count, and records come back in index order.

Matrix entries are judged relative to the two terms they are the difference of:
a commutator entry c_12 - c_21 is reported as |c_12 - c_21| / max(|c_12|, |c_21|).
Absolute entries shrink like the monomial norms and say little on their own.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .calculus import (
    Truncation,
    action_coefficient,
    build_commutator,
    build_semicommutator,
    live_entry_count,
    max_abs_entry,
    max_rel_entry,
)
from .core import DomainSpec, MonomialSymbol, ProblemPair, pair_to_json, symbol_to_json, weighted_degree
from .decide import (
    classify_trivial,
    decide_commute,
    decide_semicommute,
    necessary_eq14,
    necessary_integrality,
    semicommute_clauses,
    trivial_clauses_from_degrees,
)
from .oracle import McConfig, mc_volume, oracle_action_coefficient
from .search import radial_candidates

ZERO_TOL = 1e-9
NONZERO_TOL = 1e-4
SWEEP_TRUNCATION = Truncation.degree(10)
MAX_ENTRY = 6
MAX_RADIAL = 12
MAX_DEN = 4
MAX_REDRAWS = 200


@dataclass(frozen=True)
class SweepBounds:
    dims: tuple = (2, 3)
    max_m: int = 4
    max_entry: int = MAX_ENTRY
    max_den: int = MAX_DEN
    max_radial: int = MAX_RADIAL

    def radial_grid(self) -> list[Fraction]:
        return sorted({Fraction(u, v) for v in range(1, self.max_den + 1) for u in range(self.max_radial * v + 1)})


def case_rng(seed: int, index: int) -> random.Random:
    return random.Random(f"{seed:x}:{index}")


def _radial(rng, bounds: SweepBounds) -> Fraction:
    den = rng.randint(1, bounds.max_den)
    return Fraction(rng.randint(0, bounds.max_radial * den), den)


def _domain(rng, bounds: SweepBounds) -> DomainSpec:
    n = rng.choice(bounds.dims)
    return DomainSpec(tuple(rng.randint(1, bounds.max_m) for _ in range(n)))


def _vector(rng, n, bounds):
    return tuple(rng.randint(0, bounds.max_entry) for _ in range(n))


def _quad(rng, bounds) -> tuple:
    """A coordinate quadruple satisfying a randomly chosen Condition (I) clause."""
    x1, x2, y1, y2 = (rng.randint(0, bounds.max_entry) for _ in range(4))
    clause = rng.choice(("i", "ii", "iii", "iv", "v", "vi"))
    if clause == "i":
        x1 = x2 = 0
    elif clause == "ii":
        y1 = y2 = 0
    elif clause == "iii":
        x1 = y1 = 0
    elif clause == "iv":
        x2 = y2 = 0
    elif clause == "v":
        x2, y2 = x1, y1
    else:
        y1, y2 = x1, x2
    return x1, x2, y1, y2


def _condition_I_exponents(rng, n, bounds):
    quads = [_quad(rng, bounds) for _ in range(n)]
    return tuple(tuple(q[j] for q in quads) for j in range(4))


def _pair(domain, p, q, s, t, l, k) -> ProblemPair:
    return ProblemPair(domain, MonomialSymbol(l, p, q), MonomialSymbol(k, s, t))


def _in_range(v, bounds) -> bool:
    return 0 <= v <= bounds.max_radial


TRIVIAL_CLAUSES = ("c1", "c2", "c3", "c4", "c5")


def trivial_commuting_pair(rng, domain, bounds, clause: str | None = None) -> ProblemPair | None:
    """A pair built to fall under one predictable clause; None when a drawn degree leaves the radial range."""
    n = domain.n
    wd = lambda idx: weighted_degree(domain, idx)  # noqa: E731
    zero = (0,) * n
    if clause is None:
        clause = rng.choice(TRIVIAL_CLAUSES)
    if clause == "c1":
        s, t = _vector(rng, n, bounds), _vector(rng, n, bounds)
        pair = _pair(domain, zero, zero, s, t, Fraction(0), _radial(rng, bounds))
        return pair if rng.random() < 0.5 else pair.swapped()
    if clause == "c2":
        p, s = _vector(rng, n, bounds), _vector(rng, n, bounds)
        l, k = wd(p), wd(s)
        return _pair(domain, p, zero, s, zero, l, k) if _in_range(l, bounds) and _in_range(k, bounds) else None
    if clause == "c3":
        q, t = _vector(rng, n, bounds), _vector(rng, n, bounds)
        l, k = wd(q), wd(t)
        return _pair(domain, zero, q, zero, t, l, k) if _in_range(l, bounds) and _in_range(k, bounds) else None
    if clause == "c4":
        p, s = _vector(rng, n, bounds), _vector(rng, n, bounds)
        return _pair(domain, p, p, s, s, _radial(rng, bounds), _radial(rng, bounds))
    p, q = _vector(rng, n, bounds), _vector(rng, n, bounds)
    l = _radial(rng, bounds)
    return _pair(domain, p, q, p, q, l, l)


def _solved_commuting(rng, domain, bounds, grid) -> ProblemPair | None:
    """Condition (I) exponents with (l, k) solved from the Gamma identity, non-trivial when possible."""
    p, q, s, t = _condition_I_exponents(rng, domain.n, bounds)
    degs = tuple(weighted_degree(domain, idx) for idx in (p, q, s, t))
    hits = radial_candidates(degs, grid, grid)
    if not hits:
        return None
    non_trivial = [lk for lk in hits if not trivial_clauses_from_degrees(*degs, *lk, True)]
    return _pair(domain, p, q, s, t, *rng.choice(non_trivial or hits))


def _nontrivial_commuting(rng, domain, bounds, grid, attempts: int = 50) -> ProblemPair | None:
    """Rejection-sample small Condition (I) exponents until (l, k) can be solved non-trivially."""
    small = SweepBounds(bounds.dims, bounds.max_m, min(2, bounds.max_entry), bounds.max_den, bounds.max_radial)
    for _ in range(attempts):
        p, q, s, t = _condition_I_exponents(rng, domain.n, small)
        degs = tuple(weighted_degree(domain, idx) for idx in (p, q, s, t))
        hits = [lk for lk in radial_candidates(degs, grid, grid)
                if not trivial_clauses_from_degrees(*degs, *lk, True)]
        if hits:
            return _pair(domain, p, q, s, t, *rng.choice(hits))
    return None


def _perturb(rng, pair: ProblemPair, bounds) -> ProblemPair | None:
    step = Fraction(rng.choice((-1, 1)), rng.randint(1, bounds.max_den))
    if rng.random() < 0.5:
        l = pair.first.l + step
        if not _in_range(l, bounds):
            return None
        return ProblemPair(pair.domain, MonomialSymbol(l, pair.first.p, pair.first.q), pair.second)
    k = pair.second.l + step
    if not _in_range(k, bounds):
        return None
    return ProblemPair(pair.domain, pair.first, MonomialSymbol(k, pair.second.p, pair.second.q))


COMMUTE_CATEGORIES = (
    ("uniform", 0.25),
    ("condition_I", 0.25),
    ("trivial", 0.2),
    ("solved", 0.15),
    ("nontrivial", 0.05),
    ("perturbed", 0.1),
)


def draw_commuting(rng, bounds: SweepBounds, grid) -> tuple[str, ProblemPair]:
    names = [c for c, _ in COMMUTE_CATEGORIES]
    weights = [w for _, w in COMMUTE_CATEGORIES]
    category = rng.choices(names, weights)[0]
    while True:
        domain = _domain(rng, bounds)
        n = domain.n
        if category == "uniform":
            p, q, s, t = (_vector(rng, n, bounds) for _ in range(4))
            pair = _pair(domain, p, q, s, t, _radial(rng, bounds), _radial(rng, bounds))
        elif category == "condition_I":
            pair = _pair(domain, *_condition_I_exponents(rng, n, bounds), _radial(rng, bounds), _radial(rng, bounds))
        elif category == "trivial":
            pair = trivial_commuting_pair(rng, domain, bounds)
        elif category == "solved":
            pair = _solved_commuting(rng, domain, bounds, grid)
        elif category == "nontrivial":
            pair = _nontrivial_commuting(rng, domain, bounds, grid)
        else:
            base = _solved_commuting(rng, domain, bounds, grid)
            pair = None if base is None else _perturb(rng, base, bounds)
        if pair is not None:
            return category, pair


def _tol_agrees(verdict: bool, max_abs: float, max_rel: float) -> bool:
    if verdict:
        return max_abs <= ZERO_TOL and max_rel <= ZERO_TOL
    return max_rel >= NONZERO_TOL


def _commute_case(seed: int, index: int, bounds: SweepBounds, grid, trunc: Truncation) -> dict:
    rng = case_rng(seed, index)
    redraws = 0
    while True:
        category, pair = draw_commuting(rng, bounds, grid)
        op = build_commutator(pair.domain, pair.first, pair.second, trunc)
        if live_entry_count(op) > 0 or redraws >= MAX_REDRAWS:
            break
        # nothing in the window can see this pair; draw again
        redraws += 1
    verdict = decide_commute(pair)
    max_abs, max_rel = max_abs_entry(op), max_rel_entry(op)
    report = classify_trivial(pair, verdict)
    return {
        "index": index,
        "category": category,
        "redraws": redraws,
        "pair": pair_to_json(pair),
        "answer": verdict.answer,
        "triviality": report.to_json(),
        "live_entries": live_entry_count(op),
        "max_abs_entry": max_abs,
        "max_rel_entry": max_rel,
        "agree": _tol_agrees(bool(verdict), max_abs, max_rel),
        "integrality": necessary_integrality(*pair.pqst, pair.domain),
        "eq14": necessary_eq14(pair),
    }


def _run(cases, work, threads: int) -> list[dict]:
    if threads < 1:
        raise ValueError("threads must be >= 1")
    if threads == 1:
        return [work(i) for i in cases]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(work, cases))


def commute_sweep(count: int, seed: int, threads: int = 1, bounds: SweepBounds = SweepBounds(),
                  trunc: Truncation = SWEEP_TRUNCATION) -> list[dict]:
    """decide_commute against the truncated commutator for ``count`` seeded cases."""
    grid = bounds.radial_grid()
    return _run(range(count), lambda i: _commute_case(seed, i, bounds, grid, trunc), threads)


def semicommute_fixtures() -> list[tuple[str, ProblemPair]]:
    dom = DomainSpec((1, 1))
    positive = ProblemPair(dom, MonomialSymbol(1, (1, 0), (1, 1)), MonomialSymbol(3, (2, 0), (0, 0)))
    z1 = MonomialSymbol.monomial(dom, (1, 0), (0, 0))
    z1_bar = MonomialSymbol.monomial(dom, (0, 0), (1, 0))
    return [("fixture_positive", positive), ("fixture_negative", ProblemPair(dom, z1, z1_bar))]


def _semicommuting_clause(rng, domain, bounds) -> ProblemPair | None:
    n = domain.n
    zero = (0,) * n
    clause = rng.choice(("i", "ii", "iii", "iv"))
    p, q, s, t = (_vector(rng, n, bounds) for _ in range(4))
    l, k = _radial(rng, bounds), _radial(rng, bounds)
    wd = lambda idx: weighted_degree(domain, idx)  # noqa: E731
    if clause in ("i", "ii"):
        t = zero
    else:
        p = zero
    if clause == "i":
        l = wd(q) - wd(p)
    elif clause == "ii":
        k = wd(s)
    elif clause == "iii":
        l = wd(q)
    else:
        k = wd(s) - wd(t)
    if not (_in_range(l, bounds) and _in_range(k, bounds)):
        return None
    return _pair(domain, p, q, s, t, l, k)


SEMICOMMUTE_CATEGORIES = (
    ("uniform", 0.25),
    ("clause", 0.35),
    ("near_miss", 0.25),
    ("holomorphic_or_anti", 0.15),
)


def draw_semicommuting(rng, bounds: SweepBounds) -> tuple[str, ProblemPair]:
    names = [c for c, _ in SEMICOMMUTE_CATEGORIES]
    weights = [w for _, w in SEMICOMMUTE_CATEGORIES]
    category = rng.choices(names, weights)[0]
    while True:
        domain = _domain(rng, bounds)
        n = domain.n
        if category == "uniform":
            p, q, s, t = (_vector(rng, n, bounds) for _ in range(4))
            pair = _pair(domain, p, q, s, t, _radial(rng, bounds), _radial(rng, bounds))
        elif category == "clause":
            pair = _semicommuting_clause(rng, domain, bounds)
        elif category == "near_miss":
            base = _semicommuting_clause(rng, domain, bounds)
            pair = None if base is None else _perturb(rng, base, bounds)
        else:
            # p = 0 or t = 0 with unconstrained radial exponents
            p, q, s, t = (_vector(rng, n, bounds) for _ in range(4))
            if rng.random() < 0.5:
                p = (0,) * n
            else:
                t = (0,) * n
            pair = _pair(domain, p, q, s, t, _radial(rng, bounds), _radial(rng, bounds))
        if pair is not None:
            return category, pair


def _semicommute_case(seed, index, bounds, trunc, fixtures) -> dict:
    rng = case_rng(seed, index)
    redraws = 0
    if index < len(fixtures):
        category, pair = fixtures[index]
        op = build_semicommutator(pair.domain, pair.first, pair.second, trunc)
    else:
        while True:
            category, pair = draw_semicommuting(rng, bounds)
            op = build_semicommutator(pair.domain, pair.first, pair.second, trunc)
            if live_entry_count(op) > 0 or redraws >= MAX_REDRAWS:
                break
            redraws += 1
    verdict = decide_semicommute(pair)
    max_abs, max_rel = max_abs_entry(op), max_rel_entry(op)
    return {
        "index": index,
        "category": category,
        "redraws": redraws,
        "pair": pair_to_json(pair),
        "answer": verdict.answer,
        "clauses": semicommute_clauses(pair),
        "live_entries": live_entry_count(op),
        "max_abs_entry": max_abs,
        "max_rel_entry": max_rel,
        "agree": _tol_agrees(bool(verdict), max_abs, max_rel),
    }


def semicommute_sweep(count: int, seed: int, threads: int = 1, bounds: SweepBounds = SweepBounds(),
                      trunc: Truncation = SWEEP_TRUNCATION) -> list[dict]:
    """decide_semicommute against the truncated semi-commutator; the two fixtures come first."""
    fixtures = semicommute_fixtures()
    return _run(range(count), lambda i: _semicommute_case(seed, i, bounds, trunc, fixtures), threads)


def draw_oracle_case(rng) -> tuple[DomainSpec, MonomialSymbol, tuple]:
    """n = 2, m_i <= 2, entries <= 2, and beta chosen so the coefficient is non-zero.

    The radial exponent is |p^| + |q^| plus a rational in [0, 2], which keeps the
    integrand bounded near the origin.
    """
    domain = DomainSpec(tuple(rng.randint(1, 2) for _ in range(2)))
    p = tuple(rng.randint(0, 2) for _ in range(2))
    q = tuple(rng.randint(0, 2) for _ in range(2))
    beta = tuple(max(rng.randint(0, 2), qi - pi) for pi, qi in zip(p, q))
    extra = Fraction(rng.randint(0, 8), 4)
    sym = MonomialSymbol(weighted_degree(domain, p) + weighted_degree(domain, q) + extra, p, q)
    return domain, sym, beta


def oracle_sweep(count: int, seed: int, samples: int, threads: int = 1) -> dict:
    """Monte-Carlo action coefficients and volumes next to their closed forms."""
    cases = []
    for index in range(count):
        domain, sym, beta = draw_oracle_case(case_rng(seed, index))
        cfg = McConfig(samples=samples, seed=seed + index, threads=threads)
        mc = oracle_action_coefficient(domain, sym, beta, cfg)
        exact = action_coefficient(domain, sym, beta).coefficient
        cases.append(
            {
                "index": index,
                "m": list(domain.m),
                "symbol": symbol_to_json(sym),
                "beta": list(beta),
                "exact": exact,
                "mc": mc.to_json(),
                "rel_err": abs(mc.real - exact) / abs(exact),
                "z": abs(mc.real - exact) / mc.stderr if mc.stderr > 0 else math.inf,
            }
        )
    volumes = []
    for m, exact in (((1, 1), math.pi**2 / 2), ((2, 2), math.pi**3 / 4)):
        res = mc_volume(DomainSpec(m), McConfig(samples=samples, seed=seed, threads=threads))
        volumes.append({"m": list(m), "exact": exact, "mc": res.to_json(),
                        "z": abs(res.real - exact) / res.stderr})
    return {"schema": "btc/1", "seed": seed, "samples": samples, "cases": cases, "volumes": volumes}
