"""Bounded enumeration of commuting and semi-commuting pairs.

Commuting pairs are found degree tuple by degree tuple. Coordinate quadruples that
satisfy Condition (I) are combined into the reachable tuples (|p^|, |q^|, |s^|, |t^|);
the Gamma identity depends only on that tuple and (l, k), so each tuple is decided
once per radial pair and then expanded into its concrete realizations.
"""

from __future__ import annotations

import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .core import (
    DomainSpec,
    InputError,
    MonomialSymbol,
    ProblemPair,
    as_multi_index,
    as_rational,
    condition_I,
    pair_to_json,
    weighted_degree,
)
from .decide import (
    TRIVIAL_CLAUSES,
    TrivialityReport,
    commute_identity_holds,
    decide_semicommute,
    integrality_from_degrees,
    semicommute_clauses,
    trivial_clauses_from_degrees,
)
from .gamma import gamma_ratio_divisor, shifts_divisor


@dataclass(frozen=True)
class SearchSpace:
    """Exponent entries in 0..max_entry, radial exponents r = u/v with v <= max_den and 0 <= r <= radial_cap.

    ``pins`` fixes parts of the pair: any of first_l, first_p, first_q, second_l,
    second_p, second_q. ``require_clauses`` keeps only commuting pairs hitting one of
    the listed triviality clauses; ``non_trivial`` keeps only pairs hitting none.
    """

    domain: DomainSpec
    max_entry: int
    max_den: int = 1
    radial_cap: Fraction = Fraction(0)
    non_trivial: bool = False
    require_clauses: Optional[frozenset] = None
    exclude_zero_p: bool = False
    exclude_zero_t: bool = False
    pins: tuple = ()
    prune: bool = True

    def __post_init__(self):
        if isinstance(self.max_entry, bool) or not isinstance(self.max_entry, int) or self.max_entry < 0:
            raise InputError("max_entry must be a natural number")
        if isinstance(self.max_den, bool) or not isinstance(self.max_den, int) or self.max_den < 1:
            raise InputError("max_den must be a positive integer")
        cap = as_rational(self.radial_cap)
        if cap < 0:
            raise InputError("radial_cap must be >= 0")
        object.__setattr__(self, "radial_cap", cap)
        pins = dict(self.pins)
        unknown = set(pins) - {"first_l", "first_p", "first_q", "second_l", "second_p", "second_q"}
        if unknown:
            raise InputError(f"unknown pins: {sorted(unknown)}")
        for key, value in pins.items():
            if key.endswith("_l"):
                pins[key] = as_rational(value)
            else:
                idx = as_multi_index(value)
                if len(idx) != self.domain.n:
                    raise InputError(f"pin {key} has the wrong dimension")
                pins[key] = idx
        object.__setattr__(self, "pins", tuple(sorted(pins.items())))
        if self.require_clauses is not None:
            clauses = frozenset(self.require_clauses)
            if not clauses <= set(TRIVIAL_CLAUSES):
                raise InputError(f"unknown triviality clauses: {sorted(clauses - set(TRIVIAL_CLAUSES))}")
            object.__setattr__(self, "require_clauses", clauses)

    def pin(self, key):
        return dict(self.pins).get(key)

    def radial_values(self) -> list[Fraction]:
        vals = {
            Fraction(u, v)
            for v in range(1, self.max_den + 1)
            for u in range(0, math.floor(self.radial_cap * v) + 1)
        }
        return sorted(vals)

    def _radial(self, key) -> list[Fraction]:
        pinned = self.pin(key)
        return [pinned] if pinned is not None else self.radial_values()

    def _entries(self, key, i) -> range | tuple:
        pinned = self.pin(key)
        return (pinned[i],) if pinned is not None else range(self.max_entry + 1)

    def _vectors(self, key) -> list[tuple]:
        pinned = self.pin(key)
        if pinned is not None:
            return [pinned]
        return list(itertools.product(range(self.max_entry + 1), repeat=self.domain.n))

    def cardinality(self) -> int:
        """Number of ordered (first, second) tuples in the space, before any filter."""
        total = len(self._radial("first_l")) * len(self._radial("second_l"))
        for key in ("first_p", "first_q", "second_p", "second_q"):
            total *= len(self._vectors(key))
        return total


def _key(pair: ProblemPair) -> tuple:
    p, q, s, t = pair.pqst
    return (p, q, s, t, pair.first.l, pair.second.l)


def _swapped_key(pair: ProblemPair) -> tuple:
    p, q, s, t = pair.pqst
    return (s, t, p, q, pair.second.l, pair.first.l)


def _make_pair(domain, p, q, s, t, l, k) -> ProblemPair:
    return ProblemPair(domain, MonomialSymbol(l, p, q), MonomialSymbol(k, s, t))


def _coordinate_quads(space: SearchSpace, i: int) -> list[tuple]:
    return [
        quad
        for quad in itertools.product(*(space._entries(k, i) for k in ("first_p", "first_q", "second_p", "second_q")))
        if condition_I(*quad)[0]
    ]


def _cancel(pos, neg) -> tuple:
    pos, neg = list(pos), list(neg)
    for x in list(pos):
        if x in neg:
            neg.remove(x)
            pos.remove(x)
    return tuple(sorted(pos)), tuple(sorted(neg))


def radial_candidates(degrees: tuple, l_values, k_values) -> list[tuple]:
    """All (l, k) in the grid for which the commuting Gamma identity holds.

    Compares the root multisets of the telescoped Gamma ratio and of the right-hand
    side, which for products of monic linear factors is the same as comparing the
    functions. Values are scaled to integers so the inner loop avoids Fractions.
    """
    p_hat, q_hat, s_hat, t_hat = degrees
    mu, nu = p_hat - q_hat, s_hat - t_hat
    target = gamma_ratio_divisor((p_hat, nu + 1, mu + s_hat), (s_hat, mu + 1, nu + p_hat))
    if target is None:
        return []
    if sum(e for e in target.values() if e > 0) > 2 or sum(-e for e in target.values() if e < 0) > 2:
        return []
    scale = 2 * math.lcm(*(Fraction(v).denominator for v in (*degrees, *l_values, *k_values)))
    pos = sorted(int(c * scale) for c, e in target.items() for _ in range(max(e, 0)))
    neg = sorted(int(c * scale) for c, e in target.items() for _ in range(max(-e, 0)))
    want = (tuple(pos), tuple(neg))
    mu_s, nu_s = int(mu * scale), int(nu * scale)
    b_index = {}
    for k in k_values:
        b_index.setdefault(int(k * scale + nu_s) // 2, []).append(k)
    out = []
    for l in l_values:
        a = int(l * scale + mu_s) // 2
        # b must match a target root or cancel against a or a + nu; with mu = 0 it cancels itself
        if mu_s == 0:
            options = list(b_index)
        else:
            options = {*pos, *(x - mu_s for x in neg), a, a + nu_s - mu_s}
        for b in options:
            if b in b_index and _cancel((b, a + nu_s), (a, b + mu_s)) == want:
                out.extend((l, k) for k in b_index[b])
    return sorted(out)


def _eq14_holds(degrees, l, k) -> bool:
    """Unit-shift necessary condition, compared as root multisets of monic factors."""
    p_hat, q_hat, s_hat, t_hat = degrees
    mu, nu = p_hat - q_hat, s_hat - t_hat
    a, b = (l + mu) / 2, (k + nu) / 2
    lhs = shifts_divisor([p_hat, nu + 1, mu + s_hat], [s_hat, mu + 1, nu + p_hat])
    rhs = shifts_divisor([b + 1, a + nu + 1, a, b + mu], [b, a + nu, a + 1, b + mu + 1])
    return lhs == rhs


class _DegreeTable:
    """Reachable scaled degree tuples after each coordinate, for expansion by backtracking."""

    def __init__(self, space: SearchSpace):
        self.domain = space.domain
        self.scale = math.lcm(*space.domain.m)
        self.quads = [_coordinate_quads(space, i) for i in range(space.domain.n)]
        self.levels = [{(0, 0, 0, 0)}]
        for i, quads in enumerate(self.quads):
            w = self.scale // self.domain.m[i]
            contrib = {tuple(w * v for v in quad) for quad in quads}
            self.levels.append({tuple(a + b for a, b in zip(state, c)) for state in self.levels[-1] for c in contrib})

    def degree_tuples(self) -> list[tuple]:
        return sorted(self.levels[-1])

    def to_degrees(self, scaled: tuple) -> tuple:
        return tuple(Fraction(v, self.scale) for v in scaled)

    def realizations(self, scaled: tuple) -> list[tuple]:
        """Every (p, q, s, t) whose scaled degree tuple is ``scaled``."""
        out = []

        def walk(i, remaining, suffix):
            if i < 0:
                if remaining == (0, 0, 0, 0):
                    out.append(suffix)
                return
            w = self.scale // self.domain.m[i]
            for quad in self.quads[i]:
                rest = tuple(r - w * v for r, v in zip(remaining, quad))
                if rest in self.levels[i]:
                    walk(i - 1, rest, [quad] + suffix)

        walk(self.domain.n - 1, scaled, [])
        return [tuple(tuple(quad[j] for quad in coords) for j in range(4)) for coords in out]


def _keep(space: SearchSpace, report: TrivialityReport) -> bool:
    if space.non_trivial and not report.non_trivial:
        return False
    if space.require_clauses is not None and not (report.clauses & space.require_clauses):
        return False
    return True


def _zero_filters(space, p, t) -> bool:
    if space.exclude_zero_p and not any(p):
        return False
    if space.exclude_zero_t and not any(t):
        return False
    return True


def _commuting_for_tuple(space: SearchSpace, table: _DegreeTable, scaled: tuple) -> list[tuple]:
    degs = table.to_degrees(scaled)
    l_values, k_values = space._radial("first_l"), space._radial("second_l")
    if space.prune:
        if not integrality_from_degrees(*degs):
            return []
        grid = radial_candidates(degs, l_values, k_values)
    else:
        grid = [(l, k) for l in l_values for k in k_values]
    hits = []
    for l, k in grid:
        # every realization satisfies Condition (I), so the report is shared
        clauses = trivial_clauses_from_degrees(*degs, l, k, True)
        report = TrivialityReport(clauses, not clauses)
        if not _keep(space, report):
            continue
        if space.prune and not _eq14_holds(degs, l, k):
            continue
        if commute_identity_holds(*degs, l, k):
            hits.append((l, k, report))
    if not hits:
        return []
    out = []
    for p, q, s, t in table.realizations(scaled):
        if not _zero_filters(space, p, t):
            continue
        for l, k, report in hits:
            pair = _make_pair(table.domain, p, q, s, t, l, k)
            if _key(pair) > _swapped_key(pair):
                continue
            out.append((_key(pair), pair, report))
    return out


def enumerate_commuting(space: SearchSpace, threads: int = 1) -> Iterator[tuple[ProblemPair, TrivialityReport]]:
    """Yield every commuting pair in the space, in canonical order, one orientation per pair."""
    if threads < 1:
        raise InputError("threads must be >= 1")
    table = _DegreeTable(space)
    tuples = table.degree_tuples()
    if threads == 1:
        chunks = [_commuting_for_tuple(space, table, d) for d in tuples]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda d: _commuting_for_tuple(space, table, d), tuples))
    found = sorted(itertools.chain.from_iterable(chunks), key=lambda item: item[0])
    for _, pair, report in found:
        yield pair, report


def enumerate_semicommuting(space: SearchSpace, threads: int = 1) -> Iterator[ProblemPair]:
    """Yield every ordered pair with T1 T2 = T_{product symbol}, in canonical order."""
    if threads < 1:
        raise InputError("threads must be >= 1")
    domain = space.domain
    firsts = [(p, q) for p in space._vectors("first_p") for q in space._vectors("first_q")]
    seconds = [(s, t) for s in space._vectors("second_p") for t in space._vectors("second_q")]
    l_values, k_values = space._radial("first_l"), space._radial("second_l")

    def work(first):
        p, q = first
        p_hat, q_hat = weighted_degree(domain, p), weighted_degree(domain, q)
        out = []
        for s, t in seconds:
            if (any(p) and any(t)) or not _zero_filters(space, p, t):
                continue
            s_hat, t_hat = weighted_degree(domain, s), weighted_degree(domain, t)
            # each clause pins one radial exponent and leaves the other free
            l_pins, k_pins = set(), set()
            if not any(t):
                l_pins.add(q_hat - p_hat)
                k_pins.add(s_hat)
            if not any(p):
                l_pins.add(q_hat)
                k_pins.add(s_hat - t_hat)
            hits = {(l, k) for l in l_values for k in k_values if l in l_pins or k in k_pins}
            for l, k in hits:
                pair = _make_pair(domain, p, q, s, t, l, k)
                if not decide_semicommute(pair):
                    raise AssertionError(f"search emitted a pair the decider rejects: {pair}")
                out.append((_key(pair), pair))
        return out

    if threads == 1:
        chunks = [work(f) for f in firsts]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(work, firsts))
    for _, pair in sorted(itertools.chain.from_iterable(chunks), key=lambda item: item[0]):
        yield pair


def commuting_record(pair: ProblemPair, report: TrivialityReport) -> dict:
    return {**pair_to_json(pair), "triviality": report.to_json()}


def semicommuting_record(pair: ProblemPair) -> dict:
    return {**pair_to_json(pair), "clauses": semicommute_clauses(pair)}


def to_json_lines(records) -> str:
    return "".join(json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n" for rec in records)
