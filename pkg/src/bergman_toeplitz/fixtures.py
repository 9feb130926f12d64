"""Known commuting pairs and consistency checks, bundled for ``verify-examples`` and the tests."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .calculus import Truncation, build_commutator, max_abs_entry
from .core import DomainSpec, MonomialSymbol, ProblemPair, weighted_degree
from .decide import (
    classify_trivial,
    decide_commute,
    decide_commute_holomorphic,
    decide_commute_monomial,
)

BALL3 = DomainSpec((1, 1, 1))


def weighted_six_dim_pair() -> ProblemPair:
    """m = (4,...,4) in six variables; degrees (2, 1, 4, 2) with l = 3, k = 2."""
    domain = DomainSpec((4,) * 6)
    first = MonomialSymbol(3, (0, 2, 0, 1, 1, 4), (0, 1, 1, 0, 1, 1))
    second = MonomialSymbol(2, (2, 0, 0, 8, 2, 4), (3, 0, 2, 0, 2, 1))
    return ProblemPair(domain, first, second)


def ball_reference_pair(l, k) -> ProblemPair:
    """p=(1,1,0), q=(1,0,0), s=(2,2,4), t=(2,0,2) on the 3-ball; degrees (2, 1, 8, 4)."""
    return ProblemPair(
        BALL3,
        MonomialSymbol(l, (1, 1, 0), (1, 0, 0)),
        MonomialSymbol(k, (2, 2, 4), (2, 0, 2)),
    )


def ball_family_pair(family: int, T: int) -> ProblemPair:
    """Concrete 3-ball members of the three degree families, indexed by T.

    Families 1 and 2 have degrees (2, 1, 2T, T) with (l, k) = (2T-1, T) and (2T+1, 3T);
    family 3 has degrees (2T, 2, T, 1) with (l, k) = (4T-2, 3T-1). Every coordinate
    quadruple satisfies Condition (I).
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    if family in (1, 2):
        if T == 4:
            s, t = (2, 2, 4), (2, 0, 2)
        else:
            s, t = (0, T, T), (0, 0, T)
        l, k = (2 * T - 1, T) if family == 1 else (2 * T + 1, 3 * T)
        return ProblemPair(BALL3, MonomialSymbol(l, (1, 1, 0), (1, 0, 0)), MonomialSymbol(k, s, t))
    if family == 3:
        return ProblemPair(
            BALL3,
            MonomialSymbol(4 * T - 2, (0, T, T), (2, 0, 0)),
            MonomialSymbol(3 * T - 1, (0, T, 0), (1, 0, 0)),
        )
    raise ValueError(f"unknown family {family}")


def monomial_tuples(count: int, seed: int):
    """Seeded (domain, p, q, s, t) draws, half of them built to satisfy Condition (I) coordinatewise."""
    rng = random.Random(f"monomial:{seed:x}")
    for _ in range(count):
        domain = DomainSpec(tuple(rng.randint(1, 3) for _ in range(rng.choice((2, 3)))))
        if rng.random() < 0.5:
            vecs = [tuple(rng.randint(0, 3) for _ in range(domain.n)) for _ in range(4)]
        else:
            quads = []
            for _ in range(domain.n):
                a, b = rng.randint(0, 3), rng.randint(0, 3)
                quads.append(rng.choice([(0, 0, a, b), (a, b, 0, 0), (0, a, 0, b), (a, 0, b, 0), (a, a, b, b), (a, b, a, b)]))
            vecs = [tuple(q[j] for q in quads) for j in range(4)]
        yield (domain, *vecs)


def holomorphic_tuples(count: int, seed: int):
    """Seeded (domain, p != 0, second symbol) draws; a third have a holomorphic second symbol."""
    rng = random.Random(f"holomorphic:{seed:x}")
    for _ in range(count):
        domain = DomainSpec(tuple(rng.randint(1, 3) for _ in range(rng.choice((2, 3)))))
        p = tuple(rng.randint(0, 3) for _ in range(domain.n))
        if not any(p):
            p = (1,) + p[1:]
        s = tuple(rng.randint(0, 3) for _ in range(domain.n))
        t = tuple(rng.randint(0, 3) for _ in range(domain.n))
        den = rng.randint(1, 4)
        k = Fraction(rng.randint(0, 12 * den), den)
        roll = rng.random()
        if roll < 1 / 3:
            t, k = (0,) * domain.n, weighted_degree(domain, s)
        elif roll < 1 / 2:
            t = (0,) * domain.n
        yield domain, p, MonomialSymbol(k, s, t)


def monomial_agreement(domain, p, q, s, t) -> bool:
    pair = ProblemPair(domain, MonomialSymbol.monomial(domain, p, q), MonomialSymbol.monomial(domain, s, t))
    return decide_commute_monomial(domain, p, q, s, t).answer == decide_commute(pair).answer


def holomorphic_agreement(domain, p, second) -> bool:
    pair = ProblemPair(domain, MonomialSymbol.monomial(domain, p, (0,) * domain.n), second)
    return decide_commute_holomorphic(domain, p, second).answer == decide_commute(pair).answer


def _commuting_nontrivial(pair: ProblemPair) -> dict:
    verdict = decide_commute(pair)
    report = classify_trivial(pair, verdict)
    return {
        "pass": bool(verdict) and report.non_trivial,
        "answer": verdict.answer,
        "mode": verdict.mode,
        "triviality": report.to_json(),
    }


def run_fixtures(count: int = 50, seed: int = 0x5EED) -> list[dict]:
    """Evaluate every bundled fixture; one record per fixture with a ``pass`` flag."""
    out = []
    pair = weighted_six_dim_pair()
    verdict = decide_commute(pair)
    entry = max_abs_entry(build_commutator(pair.domain, pair.first, pair.second, Truncation.degree(8)))
    out.append(
        {
            "fixture": "weighted_six_dim",
            "pass": bool(verdict) and verdict.mode == "Exact" and entry <= 1e-9,
            "answer": verdict.answer,
            "mode": verdict.mode,
            "max_interior_entry": entry,
        }
    )
    for l, k in ((7, 4), (9, 12)):
        out.append({"fixture": f"ball_reference_l{l}_k{k}", **_commuting_nontrivial(ball_reference_pair(l, k))})
    miss = decide_commute(ball_reference_pair(8, 4))
    out.append({"fixture": "ball_reference_l8_k4_rejected", "pass": not miss, "answer": miss.answer})
    for family, T in itertools.product((1, 2, 3), range(1, 6)):
        out.append({"fixture": f"ball_family{family}_T{T}", **_commuting_nontrivial(ball_family_pair(family, T))})
    mono = [monomial_agreement(*args) for args in monomial_tuples(count, seed)]
    out.append({"fixture": "monomial_special_case", "pass": all(mono), "cases": len(mono), "agree": sum(mono)})
    holo = [holomorphic_agreement(*args) for args in holomorphic_tuples(count, seed)]
    out.append({"fixture": "holomorphic_special_case", "pass": all(holo), "cases": len(holo), "agree": sum(holo)})
    return out
