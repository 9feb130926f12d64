"""Decision procedures for commuting and semi-commuting monomial-type Toeplitz pairs.

Two operators T1 = T_{r^l zeta^p conj(zeta)^q} and T2 = T_{r^k zeta^s conj(zeta)^t}
commute exactly when every coordinate quadruple (p_i, q_i, s_i, t_i) satisfies
Condition (I) and a three-by-three Gamma-ratio identity in the weighted degrees holds.
They semi-commute (T1 T2 = T_{product symbol}) exactly when one of four linear
conditions holds. Any finite-rank (semi-)commutator is already zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .core import (
    DomainSpec,
    InputError,
    MonomialSymbol,
    ProblemPair,
    condition_I,
    coordinatewise_condition_I,
    degrees,
    mu_nu_a_b,
    weighted_degree,
)
from .gamma import (
    RESIDUAL_THRESHOLD,
    GammaRatioIdentity,
    RationalFunction,
    decide_gamma_identity,
    default_points,
    sample_identity_residual,
)

YES, NO = "Yes", "No"
EXACT, NUMERIC = "Exact", "Numeric"
TRIVIAL_CLAUSES = ("c1", "c2", "c3", "c4", "c5")


@dataclass(frozen=True)
class Verdict:
    answer: str
    mode: str
    witness: dict = field(default_factory=dict)

    def __bool__(self):
        return self.answer == YES

    def to_json(self) -> dict:
        return {"schema": "btc/1", "answer": self.answer, "mode": self.mode, "witness": self.witness}


@dataclass(frozen=True)
class TrivialityReport:
    clauses: frozenset
    non_trivial: bool

    def to_json(self) -> dict:
        return {"clauses": sorted(self.clauses), "non_trivial": self.non_trivial}


def _fmt(v) -> str:
    return str(v) if isinstance(v, Fraction) else repr(float(v))


def _identity_json(identity: GammaRatioIdentity) -> dict:
    return {
        "x": [_fmt(v) for v in identity.x],
        "y": [_fmt(v) for v in identity.y],
        "rhs_num": [_fmt(c) for c in identity.rhs.num.coeffs],
        "rhs_den": [_fmt(c) for c in identity.rhs.den.coeffs],
    }


def commute_identity(pair: ProblemPair) -> GammaRatioIdentity:
    """The Gamma-ratio identity in the weighted degrees that commuting pairs must satisfy."""
    return commute_identity_from_degrees(*degrees(pair), pair.first.l, pair.second.l)


def commute_identity_from_degrees(p_hat, q_hat, s_hat, t_hat, l, k) -> GammaRatioIdentity:
    mu, nu = p_hat - q_hat, s_hat - t_hat
    a, b = (l + mu) / 2, (k + nu) / 2
    return GammaRatioIdentity(
        x=(p_hat, nu + 1, mu + s_hat),
        y=(s_hat, mu + 1, nu + p_hat),
        rhs=RationalFunction.from_shifts([b, a + nu], [a, b + mu]),
    )


def semicommute_identity(pair: ProblemPair) -> GammaRatioIdentity:
    """Identity equivalent (together with p_i t_i = 0 for all i) to T1 T2 = T_{product}."""
    p_hat, _, s_hat, _ = degrees(pair)
    mu, nu, a, b = mu_nu_a_b(pair.domain, pair.first, pair.second)
    return GammaRatioIdentity(
        x=(nu + 1, p_hat + s_hat),
        y=(s_hat, nu + p_hat),
        rhs=RationalFunction.from_shifts([b, a + nu], [a + b]),
    )


def degree_only_identity(p_hat, s_hat, t_hat, a, b) -> GammaRatioIdentity:
    """Gamma(eta+s)Gamma(eta+s-t+p) / (Gamma(eta+s-t+1)Gamma(eta+p+s)) = (eta+a+b)/((eta+b)(eta+a+s-t)).

    Has no solution (a, b) once both p and t are positive.
    """
    nu = s_hat - t_hat
    return GammaRatioIdentity(
        x=(s_hat, nu + p_hat),
        y=(nu + 1, p_hat + s_hat),
        rhs=RationalFunction.from_shifts([a + b], [b, a + nu]),
    )


@lru_cache(maxsize=1 << 16)
def commute_identity_holds(p_hat, q_hat, s_hat, t_hat, l, k) -> bool:
    """Exact decision of the degree identity; depends only on these six rationals."""
    return decide_gamma_identity(commute_identity_from_degrees(p_hat, q_hat, s_hat, t_hat, l, k))


def _safe_points(identity: GammaRatioIdentity, poles) -> list[float]:
    # slide the sample window right so Gamma arguments and denominator factors stay >= 1
    worst = min([float(v) for v in (*identity.x, *identity.y)] + [float(v) for v in poles] + [0.0])
    offset = max(0.0, -worst)
    return [eta + offset for eta in default_points()]


def _numeric_identity(identity: GammaRatioIdentity, poles) -> tuple[bool, float]:
    residual = sample_identity_residual(identity, _safe_points(identity, poles))
    return residual <= RESIDUAL_THRESHOLD, residual


def decide_commute(pair: ProblemPair) -> Verdict:
    p, q, s, t = pair.pqst
    mode = EXACT if pair.exact else NUMERIC
    ok, coord, clauses = coordinatewise_condition_I(p, q, s, t)
    if not ok:
        return Verdict(
            NO,
            mode,
            {
                "reason": "condition_I",
                "coordinate": coord + 1,
                "quadruple": [p[coord], q[coord], s[coord], t[coord]],
                "clauses": sorted(clauses),
            },
        )
    identity = commute_identity(pair)
    witness = {"reason": "gamma_identity", "identity": _identity_json(identity)}
    if mode == EXACT:
        holds = commute_identity_holds(*degrees(pair), pair.first.l, pair.second.l)
    else:
        mu, nu, a, b = mu_nu_a_b(pair.domain, pair.first, pair.second)
        holds, residual = _numeric_identity(identity, [a, b + mu])
        witness["residual"] = residual
    if holds:
        witness["reason"] = "condition_I_and_gamma_identity"
    return Verdict(YES if holds else NO, mode, witness)


def _close(x, y) -> bool:
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x == y
    return math.isclose(float(x), float(y), rel_tol=1e-12, abs_tol=1e-12)


def semicommute_clauses(pair: ProblemPair) -> list[str]:
    p_hat, q_hat, s_hat, t_hat = degrees(pair)
    l, k = pair.first.l, pair.second.l
    t_zero = not any(pair.second.q)
    p_zero = not any(pair.first.p)
    hits = []
    if t_zero and _close(l, q_hat - p_hat):
        hits.append("i")
    if t_zero and _close(k, s_hat):
        hits.append("ii")
    if p_zero and _close(l, q_hat):
        hits.append("iii")
    if p_zero and _close(k, s_hat - t_hat):
        hits.append("iv")
    return hits


def decide_semicommute(pair: ProblemPair) -> Verdict:
    mode = EXACT if pair.exact else NUMERIC
    hits = semicommute_clauses(pair)
    if hits:
        return Verdict(YES, mode, {"reason": "semicommute_clause", "clauses": hits})
    return Verdict(NO, mode, {"reason": "no_semicommute_clause", "clauses": []})


def classify_trivial(pair: ProblemPair, verdict: Verdict | None = None) -> TrivialityReport:
    """Which of the five predictable commuting situations apply (exact tests)."""
    cond_ok = coordinatewise_condition_I(*pair.pqst)[0]
    hits = trivial_clauses_from_degrees(*degrees(pair), pair.first.l, pair.second.l, cond_ok)
    if verdict is None:
        verdict = decide_commute(pair)
    return TrivialityReport(hits, bool(verdict) and not hits)


def trivial_clauses_from_degrees(p_hat, q_hat, s_hat, t_hat, l, k, cond_ok: bool) -> frozenset:
    hits = set()
    if (l == 0 and p_hat == 0 and q_hat == 0) or (k == 0 and s_hat == 0 and t_hat == 0):
        hits.add("c1")
    if q_hat == 0 and t_hat == 0 and _close(l, p_hat) and _close(k, s_hat):
        hits.add("c2")
    if p_hat == 0 and s_hat == 0 and _close(l, q_hat) and _close(k, t_hat):
        hits.add("c3")
    if cond_ok and p_hat == q_hat and s_hat == t_hat:
        hits.add("c4")
    if cond_ok and p_hat == s_hat and q_hat == t_hat and _close(l, k):
        hits.add("c5")
    return frozenset(hits)


def _is_int(v) -> bool:
    return Fraction(v).denominator == 1


def necessary_integrality(p, q, s, t, domain: DomainSpec) -> bool:
    """At least one of six degree pairs is a pair of integers (cheap necessary test)."""
    return integrality_from_degrees(*(weighted_degree(domain, idx) for idx in (p, q, s, t)))


def integrality_from_degrees(ph, qh, sh, th) -> bool:
    pairs = [(ph, qh), (sh, th), (ph, sh), (qh, th), (ph - qh, sh - th), (ph - sh, qh - th)]
    return any(_is_int(u) and _is_int(v) for u, v in pairs)


def eq14_sides(pair: ProblemPair) -> tuple[RationalFunction, RationalFunction]:
    return eq14_sides_from_degrees(*degrees(pair), pair.first.l, pair.second.l)


def eq14_sides_from_degrees(p_hat, q_hat, s_hat, t_hat, l, k) -> tuple[RationalFunction, RationalFunction]:
    mu, nu = p_hat - q_hat, s_hat - t_hat
    a, b = (l + mu) / 2, (k + nu) / 2
    lhs = RationalFunction.from_shifts([p_hat, nu + 1, mu + s_hat], [s_hat, mu + 1, nu + p_hat])
    rhs = RationalFunction.from_shifts([b + 1, a + nu + 1, a, b + mu], [b, a + nu, a + 1, b + mu + 1])
    return lhs, rhs


def necessary_eq14(pair: ProblemPair) -> bool:
    """Unit-shift consequence of the commuting identity, as exact rational-function equality."""
    if not pair.exact:
        raise InputError("necessary_eq14 needs rational exponents")
    lhs, rhs = eq14_sides(pair)
    return lhs == rhs


def decide_commute_monomial(domain: DomainSpec, p, q, s, t) -> Verdict:
    """z^p conj(z)^q vs z^s conj(z)^t: Condition (I) on the degrees and on every coordinate."""
    pair = ProblemPair(domain, MonomialSymbol.monomial(domain, p, q), MonomialSymbol.monomial(domain, s, t))
    ok, coord, clauses = coordinatewise_condition_I(*pair.pqst)
    if not ok:
        return Verdict(NO, EXACT, {"reason": "condition_I", "coordinate": coord + 1, "clauses": sorted(clauses)})
    deg = degrees(pair)
    ok, clauses = condition_I(*deg)
    if not ok:
        return Verdict(NO, EXACT, {"reason": "degree_condition_I", "degrees": [str(d) for d in deg]})
    return Verdict(YES, EXACT, {"reason": "degree_condition_I", "clauses": sorted(clauses)})


def decide_commute_holomorphic(domain: DomainSpec, p, second: MonomialSymbol) -> Verdict:
    """z^p (p != 0) commutes with the second operator iff that one is holomorphic too."""
    if not any(p):
        raise InputError("the holomorphic fast path needs p != 0")
    if len(p) != domain.n or second.n != domain.n:
        raise InputError("dimension mismatch")
    mode = EXACT if second.exact else NUMERIC
    t_zero = not any(second.q)
    k_ok = _close(second.l, weighted_degree(domain, second.p))
    answer = YES if (t_zero and k_ok) else NO
    return Verdict(answer, mode, {"reason": "holomorphic", "t_zero": t_zero, "k_equals_s_degree": k_ok})
