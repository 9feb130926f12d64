"""Exact data model: domains, multi-indices, monomial-type symbols, Condition (I)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence, Union

Rational = Fraction
MultiIndex = tuple
Exponent = Union[Fraction, float]

CLAUSES = ("i", "ii", "iii", "iv", "v", "vi")


class InputError(ValueError):
    """Raised for malformed or dimensionally inconsistent inputs."""


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings to an exact Fraction.

    Floats are refused; use :func:`as_exponent` when the numeric fallback is wanted.
    """
    if isinstance(value, bool):
        raise InputError(f"not a rational: {value!r}")
    if isinstance(value, _RationalABC):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {value!r}") from exc
    raise InputError(f"not an exact rational: {value!r}")


def as_exponent(value) -> Exponent:
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise InputError(f"radial exponent must be finite, got {value!r}")
        return value
    return as_rational(value)


def as_multi_index(values: Iterable) -> tuple:
    out = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, int):
            if isinstance(v, float) and v.is_integer():
                v = int(v)
            else:
                raise InputError(f"multi-index entries must be natural numbers, got {v!r}")
        if v < 0:
            raise InputError(f"multi-index entries must be >= 0, got {v}")
        out.append(int(v))
    if not out:
        raise InputError("multi-index must be non-empty")
    return tuple(out)


def _check_len(*indices: Sequence) -> int:
    n = len(indices[0])
    for idx in indices[1:]:
        if len(idx) != n:
            raise InputError(f"dimension mismatch: {len(idx)} != {n}")
    return n


@dataclass(frozen=True)
class DomainSpec:
    """The domain {z : sum |z_i|^(2 m_i) < 1}; ``m=(1, ..., 1)`` is the unit ball."""

    m: tuple

    def __post_init__(self):
        m = tuple(self.m)
        for mi in m:
            if isinstance(mi, bool) or not isinstance(mi, int) or mi < 1:
                raise InputError(f"every m_i must be a positive integer, got {mi!r}")
        if len(m) < 2:
            raise InputError("dimension n must be at least 2")
        object.__setattr__(self, "m", m)

    @property
    def n(self) -> int:
        return len(self.m)

    @classmethod
    def ball(cls, n: int) -> "DomainSpec":
        return cls((1,) * n)


@dataclass(frozen=True)
class MonomialSymbol:
    """The symbol r^l zeta^p conj(zeta)^q in m-polar coordinates."""

    l: Exponent
    p: tuple
    q: tuple

    def __post_init__(self):
        l = as_exponent(self.l)
        if l < 0:
            raise InputError(f"radial exponent must be >= 0, got {l}")
        p, q = as_multi_index(self.p), as_multi_index(self.q)
        _check_len(p, q)
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def n(self) -> int:
        return len(self.p)

    @property
    def exact(self) -> bool:
        return isinstance(self.l, Fraction)

    @classmethod
    def identity(cls, n: int) -> "MonomialSymbol":
        return cls(Fraction(0), (0,) * n, (0,) * n)

    @classmethod
    def monomial(cls, domain: DomainSpec, p, q) -> "MonomialSymbol":
        """z^p conj(z)^q, i.e. radial exponent |p^| + |q^|."""
        p, q = as_multi_index(p), as_multi_index(q)
        return cls(weighted_degree(domain, p) + weighted_degree(domain, q), p, q)

    def product(self, other: "MonomialSymbol") -> "MonomialSymbol":
        return MonomialSymbol(
            self.l + other.l,
            tuple(a + b for a, b in zip(self.p, other.p)),
            tuple(a + b for a, b in zip(self.q, other.q)),
        )

    def adjoint(self) -> "MonomialSymbol":
        return MonomialSymbol(self.l, self.q, self.p)


@dataclass(frozen=True)
class ProblemPair:
    domain: DomainSpec
    first: MonomialSymbol
    second: MonomialSymbol

    def __post_init__(self):
        n = self.domain.n
        for sym in (self.first, self.second):
            if sym.n != n:
                raise InputError(f"symbol dimension {sym.n} does not match domain dimension {n}")

    @property
    def exact(self) -> bool:
        return self.first.exact and self.second.exact

    def swapped(self) -> "ProblemPair":
        return ProblemPair(self.domain, self.second, self.first)

    @property
    def pqst(self) -> tuple:
        return self.first.p, self.first.q, self.second.p, self.second.q


def weighted_degree(domain: DomainSpec, alpha: Sequence[int]) -> Fraction:
    """Exact sum alpha_i / m_i."""
    if len(alpha) != domain.n:
        raise InputError(f"dimension mismatch: {len(alpha)} != {domain.n}")
    return sum((Fraction(a, mi) for a, mi in zip(alpha, domain.m)), Fraction(0))


def condition_I(x1, x2, y1, y2) -> tuple[bool, frozenset]:
    """Six-clause compatibility test; returns (holds, labels of satisfied clauses).

    Entries may be naturals or exact rationals (the degree-tuple variant).
    """
    hits = {
        "i": x1 == 0 and x2 == 0,
        "ii": y1 == 0 and y2 == 0,
        "iii": x1 == 0 and y1 == 0,
        "iv": x2 == 0 and y2 == 0,
        "v": x1 == x2 and y1 == y2,
        "vi": x1 == y1 and x2 == y2,
    }
    satisfied = frozenset(k for k, v in hits.items() if v)
    return bool(satisfied), satisfied


def coordinatewise_condition_I(p, q, s, t) -> tuple[bool, int | None, frozenset]:
    """Check Condition (I) at every coordinate; report the first failing one (0-based)."""
    _check_len(p, q, s, t)
    for i, quad in enumerate(zip(p, q, s, t)):
        ok, clauses = condition_I(*quad)
        if not ok:
            return False, i, clauses
    return True, None, frozenset()


def succeq(alpha: Sequence[int], beta: Sequence[int]) -> bool:
    _check_len(alpha, beta)
    return all(a >= b for a, b in zip(alpha, beta))


def gamma_index(p, q, s, t) -> tuple:
    """Componentwise max{0, q-p, t-s, q-p+t-s}: below it the commutator formula needs care."""
    _check_len(p, q, s, t)
    return tuple(
        max(0, qi - pi, ti - si, qi - pi + ti - si) for pi, qi, si, ti in zip(p, q, s, t)
    )


def delta_index(p, q, s, t) -> tuple:
    """Componentwise max{0, t-s, q-p+t-s}, the semi-commutator analogue of :func:`gamma_index`."""
    _check_len(p, q, s, t)
    return tuple(max(0, ti - si, qi - pi + ti - si) for pi, qi, si, ti in zip(p, q, s, t))


def mu_nu_a_b(domain: DomainSpec, first: MonomialSymbol, second: MonomialSymbol):
    """Return (mu, nu, a, b) with mu = |p^|-|q^|, nu = |s^|-|t^|, a = (l+mu)/2, b = (k+nu)/2."""
    p_hat = weighted_degree(domain, first.p)
    q_hat = weighted_degree(domain, first.q)
    s_hat = weighted_degree(domain, second.p)
    t_hat = weighted_degree(domain, second.q)
    mu = p_hat - q_hat
    nu = s_hat - t_hat
    a = (first.l + mu) / 2
    b = (second.l + nu) / 2
    return mu, nu, a, b


def degrees(pair: ProblemPair) -> tuple:
    """(|p^|, |q^|, |s^|, |t^|) for a pair."""
    return tuple(weighted_degree(pair.domain, idx) for idx in pair.pqst)


def exponent_to_json(value):
    """Exact rationals serialize as "num/den" strings, floats as {"float": x}."""
    if isinstance(value, Fraction):
        return str(value)
    return {"float": float(value)}


def exponent_from_json(value) -> Exponent:
    if isinstance(value, dict):
        if set(value) != {"float"}:
            raise InputError(f"numeric exponent must be {{'float': x}}, got {value!r}")
        x = value["float"]
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise InputError(f"not a number: {x!r}")
        return as_exponent(float(x))
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        return as_rational(value)
    raise InputError(f"exponents are 'num/den' strings or {{'float': x}}, got {value!r}")


def symbol_to_json(sym: MonomialSymbol) -> dict:
    return {"l": exponent_to_json(sym.l), "p": list(sym.p), "q": list(sym.q)}


def symbol_from_json(doc: dict) -> MonomialSymbol:
    return MonomialSymbol(exponent_from_json(doc["l"]), doc["p"], doc["q"])


def pair_to_json(pair: ProblemPair) -> dict:
    return {
        "m": list(pair.domain.m),
        "first": symbol_to_json(pair.first),
        "second": symbol_to_json(pair.second),
    }


def pair_from_json(doc: dict) -> ProblemPair:
    return ProblemPair(DomainSpec(tuple(doc["m"])), symbol_from_json(doc["first"]), symbol_from_json(doc["second"]))
