"""Action of monomial-type Toeplitz operators on the monomial basis and truncated matrices.

T_{r^l zeta^p conj(zeta)^q} is a weighted shift: it sends z^beta to c(beta) z^(beta+p-q),
or to 0 when beta+p-q has a negative entry. Coefficients are evaluated in log space.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.special import gammaln

from .core import (
    DomainSpec,
    InputError,
    MonomialSymbol,
    as_rational,
    weighted_degree,
)
from .gamma import log_gamma

SCHEMA = "btc/1"
TINY = 1e-300


@dataclass(frozen=True)
class Truncation:
    """Finite basis: weighted degree <= D (mode "D") or every entry <= N (mode "N")."""

    mode: str
    value: Fraction | int

    def __post_init__(self):
        if self.mode == "D":
            v = as_rational(self.value)
            if v < 0:
                raise InputError("weighted-degree cap must be >= 0")
            object.__setattr__(self, "value", v)
        elif self.mode == "N":
            if isinstance(self.value, bool) or not isinstance(self.value, int) or self.value < 0:
                raise InputError("componentwise cap must be a natural number")
        else:
            raise InputError(f"unknown truncation mode {self.mode!r}")

    @classmethod
    def degree(cls, cap) -> "Truncation":
        return cls("D", cap)

    @classmethod
    def box(cls, cap: int) -> "Truncation":
        return cls("N", cap)

    @classmethod
    def parse(cls, text: str) -> "Truncation":
        """Parse ``D=<rational>`` or ``N=<nat>``."""
        mode, sep, value = text.partition("=")
        mode = mode.strip().upper()
        if not sep:
            raise InputError(f"truncation must look like D=<rational> or N=<nat>, got {text!r}")
        if mode == "N":
            try:
                return cls("N", int(value))
            except ValueError as exc:
                raise InputError(f"bad componentwise cap {value!r}") from exc
        return cls(mode, value)

    def to_json(self) -> dict:
        return {"mode": self.mode, "value": str(self.value)}

    def basis(self, domain: DomainSpec) -> list[tuple]:
        """Basis multi-indices in graded-lex order (exact weighted degree, then lex)."""
        return [tuple(int(v) for v in row) for row in self.basis_array(domain)]

    def basis_array(self, domain: DomainSpec) -> np.ndarray:
        """The basis as a (size, n) integer array, graded-lex ordered."""
        n = domain.n
        lcm = math.lcm(*domain.m)
        weights = np.array([lcm // mi for mi in domain.m], dtype=np.int64)
        if self.mode == "N":
            axes = [np.arange(self.value + 1, dtype=np.int64)] * n
            arr = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
        else:
            # integer budget: sum alpha_i * (lcm/m_i) * den <= num * lcm
            step = weights * self.value.denominator
            arr = np.zeros((1, 0), dtype=np.int64)
            remaining = np.array([self.value.numerator * lcm], dtype=np.int64)
            for i in range(n):
                counts = remaining // step[i] + 1
                total = int(counts.sum())
                starts = np.repeat(np.cumsum(counts) - counts, counts)
                alpha_i = np.arange(total, dtype=np.int64) - starts
                arr = np.column_stack([np.repeat(arr, counts, axis=0), alpha_i])
                remaining = np.repeat(remaining, counts) - alpha_i * step[i]
        grade = arr @ weights
        order = np.lexsort(tuple(arr[:, j] for j in range(n - 1, -1, -1)) + (grade,))
        return arr[order]

    def contains(self, domain: DomainSpec, idx: np.ndarray) -> np.ndarray:
        """Vectorized membership test for an (k, n) array of multi-indices (exact)."""
        idx = np.atleast_2d(np.asarray(idx, dtype=np.int64))
        nonneg = np.all(idx >= 0, axis=1)
        if self.mode == "N":
            return nonneg & np.all(idx <= self.value, axis=1)
        lcm = math.lcm(*domain.m)
        weights = np.array([lcm // mi for mi in domain.m], dtype=np.int64)
        scaled = idx @ weights
        return nonneg & (scaled * self.value.denominator <= self.value.numerator * lcm)


@dataclass(frozen=True)
class ActionResult:
    """Either zero (target is None) or coefficient * z^target."""

    target: Optional[tuple]
    coefficient: float = 0.0

    @property
    def is_zero(self) -> bool:
        return self.target is None


def _check_dims(domain: DomainSpec, *indices):
    for idx in indices:
        if len(idx) != domain.n:
            raise InputError(f"dimension mismatch: {len(idx)} != {domain.n}")


def norm_sq(domain: DomainSpec, alpha: Sequence[int]) -> float:
    """Squared Bergman norm of z^alpha."""
    _check_dims(domain, alpha)
    return math.exp(log_norm_sq(domain, np.asarray([alpha]))[0])


def log_norm_sq(domain: DomainSpec, alpha: np.ndarray) -> np.ndarray:
    m = np.asarray(domain.m, dtype=float)
    args = (np.asarray(alpha, dtype=float) + 1.0) / m
    return (
        domain.n * math.log(math.pi)
        + gammaln(args).sum(axis=1)
        - math.log(math.prod(domain.m))
        - gammaln(args.sum(axis=1) + 1.0)
    )


def log_action(domain: DomainSpec, sym: MonomialSymbol, beta: np.ndarray):
    """Vectorized log-coefficient of T_sym on rows of ``beta``.

    Returns (targets, valid, logc); logc is meaningful only where ``valid``.
    """
    beta = np.atleast_2d(np.asarray(beta, dtype=np.int64))
    p = np.asarray(sym.p, dtype=np.int64)
    q = np.asarray(sym.q, dtype=np.int64)
    targets = beta + p - q
    valid = np.all(targets >= 0, axis=1)
    m = np.asarray(domain.m, dtype=float)
    p_hat = float(weighted_degree(domain, sym.p))
    mu = float(weighted_degree(domain, sym.p) - weighted_degree(domain, sym.q))
    a = float(sym.l) / 2 + mu / 2
    bf = np.where(valid[:, None], beta, np.maximum(q - p, 0)).astype(float)
    tf = bf + p - q
    grade = ((bf + 1.0) / m).sum(axis=1)
    logc = (
        gammaln(grade + mu + 1.0)
        + gammaln((bf + p + 1.0) / m).sum(axis=1)
        - np.log(grade + a)
        - gammaln(grade + p_hat)
        - gammaln((tf + 1.0) / m).sum(axis=1)
    )
    if not valid.all():
        # masked rows used dummy indices; make sure nobody reads them
        logc = np.where(valid, logc, -np.inf)
    return targets, valid, logc


def action_coefficient(domain: DomainSpec, sym: MonomialSymbol, beta: Sequence[int]) -> ActionResult:
    _check_dims(domain, beta, sym.p)
    targets, valid, logc = log_action(domain, sym, np.asarray([beta]))
    if not valid[0]:
        return ActionResult(None)
    return ActionResult(tuple(int(v) for v in targets[0]), math.exp(logc[0]))


def h_value(domain: DomainSpec, p, q, a, xi) -> float:
    """The holomorphic coefficient function H_{p,q,a} evaluated at a real point xi."""
    _check_dims(domain, p, q, xi)
    m = domain.m
    p_hat = sum(Fraction(pi, mi) for pi, mi in zip(p, m))
    mu = p_hat - sum(Fraction(qi, mi) for qi, mi in zip(q, m))
    grade = sum((float(x) + 1.0) / mi for x, mi in zip(xi, m))
    a = float(a)
    if grade + a <= 0:
        raise InputError("non-positive linear factor in H")
    num = log_gamma(grade + float(mu) + 1.0) + sum(
        log_gamma((float(x) + pi + 1.0) / mi) for x, pi, mi in zip(xi, p, m)
    )
    den = (
        math.log(grade + a)
        + log_gamma(grade + float(p_hat))
        + sum(log_gamma((float(x) + pi - qi + 1.0) / mi) for x, pi, qi, mi in zip(xi, p, q, m))
    )
    return math.exp(num - den)


@dataclass
class SparseOperator:
    """Truncated weighted-shift matrix: at most one (target, coeff) per basis source.

    ``escaping`` marks targets outside the basis. For (semi-)commutators, sources whose
    intermediate or final indices leave the basis are not evaluated; they are listed in
    ``boundary_sources`` instead of carrying an entry.
    """

    domain: DomainSpec
    truncation: Truncation
    basis: np.ndarray
    sources: np.ndarray
    targets: np.ndarray
    coeffs: np.ndarray
    escaping: np.ndarray
    boundary_sources: Optional[np.ndarray] = None
    kind: str = "operator"
    # per entry, the larger magnitude of the two terms being subtracted
    scales: Optional[np.ndarray] = None

    def __len__(self):
        return len(self.coeffs)

    def entries(self):
        for k in range(len(self.coeffs)):
            yield (
                tuple(int(v) for v in self.basis[self.sources[k]]),
                tuple(int(v) for v in self.targets[k]),
                float(self.coeffs[k]),
                bool(self.escaping[k]),
            )

    def to_json(self) -> dict:
        doc = {
            "schema": SCHEMA,
            "kind": self.kind,
            "dimension": self.domain.n,
            "m": list(self.domain.m),
            "truncation": self.truncation.to_json(),
            "ordering": "graded-lex",
            "basis_size": len(self.basis),
            "entries": [
                {"source": list(src), "target": list(tgt), "coeff": c, "escaping": esc}
                for src, tgt, c, esc in self.entries()
            ],
        }
        if self.boundary_sources is not None:
            doc["boundary_sources"] = self.basis[self.boundary_sources].tolist()
        return doc


def build_operator(domain: DomainSpec, sym: MonomialSymbol, trunc: Truncation) -> SparseOperator:
    _check_dims(domain, sym.p)
    basis = trunc.basis_array(domain)
    targets, valid, logc = log_action(domain, sym, basis)
    idx = np.flatnonzero(valid)
    return SparseOperator(
        domain=domain,
        truncation=trunc,
        basis=basis,
        sources=idx,
        targets=targets[idx],
        coeffs=np.exp(logc[idx]),
        escaping=~trunc.contains(domain, targets[idx]),
    )


def _shift(sym):
    return np.asarray(sym.p, dtype=np.int64) - np.asarray(sym.q, dtype=np.int64)


def _compose(domain, outer, inner, beta):
    """Coefficient of T_outer T_inner z^beta (0 when either step hits the zero branch)."""
    mid, ok1, log1 = log_action(domain, inner, beta)
    mid_safe = np.where(ok1[:, None], mid, np.maximum(-_shift(outer), 0))
    _, ok2, log2 = log_action(domain, outer, mid_safe)
    live = ok1 & ok2
    value = np.zeros(len(beta))
    value[live] = np.exp(log1[live] + log2[live])
    return value


def _order_escapes(domain, trunc, beta, outer, inner):
    mid = beta + _shift(inner)
    ok1 = np.all(mid >= 0, axis=1)
    tgt = mid + _shift(outer)
    live = ok1 & np.all(tgt >= 0, axis=1)
    return (ok1 & ~trunc.contains(domain, mid)) | (live & ~trunc.contains(domain, tgt))


def pair_boundary(domain, first, second, beta, trunc, kind="commutator") -> np.ndarray:
    """Sources whose composition chain leaves the truncation basis."""
    beta = np.atleast_2d(np.asarray(beta, dtype=np.int64))
    out = _order_escapes(domain, trunc, beta, first, second)
    if kind == "commutator":
        out |= _order_escapes(domain, trunc, beta, second, first)
    else:
        tgt = beta + _shift(first) + _shift(second)
        out |= np.all(tgt >= 0, axis=1) & ~trunc.contains(domain, tgt)
    return out


def _pair_terms(domain, first, second, beta, kind):
    """The two terms whose difference is the (semi-)commutator coefficient."""
    beta = np.atleast_2d(np.asarray(beta, dtype=np.int64))
    lhs = _compose(domain, first, second, beta)
    if kind == "commutator":
        return lhs, _compose(domain, second, first, beta)
    _, ok, logc = log_action(domain, first.product(second), beta)
    rhs = np.zeros(len(beta))
    rhs[ok] = np.exp(logc[ok])
    return lhs, rhs


def _difference(lhs, rhs):
    diff = lhs - rhs
    diff[np.abs(diff) < TINY] = 0.0
    return diff


def commutator_values(domain, first, second, beta) -> np.ndarray:
    """[T1, T2] z^beta coefficients by two-step composition in each order."""
    return _difference(*_pair_terms(domain, first, second, beta, "commutator"))


def semicommutator_values(domain, first, second, beta) -> np.ndarray:
    """(T1, T2] z^beta coefficients: T1 T2 by composition minus the product-symbol operator."""
    return _difference(*_pair_terms(domain, first, second, beta, "semicommutator"))


def commutator_coefficient(domain, first, second, beta) -> float:
    """Coefficient of z^(beta+p-q+s-t) in [T1, T2] z^beta."""
    _check_dims(domain, beta, first.p, second.p)
    return float(commutator_values(domain, first, second, [beta])[0])


def semicommutator_coefficient(domain, first, second, beta) -> float:
    _check_dims(domain, beta, first.p, second.p)
    return float(semicommutator_values(domain, first, second, [beta])[0])


def _build_pair_operator(domain, first, second, trunc, kind):
    _check_dims(domain, first.p, second.p)
    basis = trunc.basis_array(domain)
    boundary = pair_boundary(domain, first, second, basis, trunc, kind)
    targets = basis + _shift(first) + _shift(second)
    idx = np.flatnonzero(~boundary & np.all(targets >= 0, axis=1))
    lhs, rhs = _pair_terms(domain, first, second, basis[idx], kind)
    return SparseOperator(
        domain=domain,
        truncation=trunc,
        basis=basis,
        sources=idx,
        targets=targets[idx],
        coeffs=_difference(lhs, rhs),
        escaping=~trunc.contains(domain, targets[idx]),
        boundary_sources=np.flatnonzero(boundary),
        kind=kind,
        scales=np.maximum(np.abs(lhs), np.abs(rhs)),
    )


def build_commutator(domain, first, second, trunc) -> SparseOperator:
    return _build_pair_operator(domain, first, second, trunc, "commutator")


def build_semicommutator(domain, first, second, trunc) -> SparseOperator:
    return _build_pair_operator(domain, first, second, trunc, "semicommutator")


def max_abs_entry(op: SparseOperator, region: Callable[[tuple], bool] | None = None) -> float:
    """Largest |coeff| over the operator's entries, optionally restricted by source."""
    if len(op) == 0:
        return 0.0
    if region is None:
        return float(np.max(np.abs(op.coeffs)))
    mask = np.array(
        [bool(region(tuple(int(v) for v in op.basis[s]))) for s in op.sources], dtype=bool
    )
    if not mask.any():
        return 0.0
    return float(np.max(np.abs(op.coeffs[mask])))


def max_rel_entry(op: SparseOperator) -> float:
    """Largest |coeff| / (size of the terms it is the difference of).

    Entries where both terms vanish count as 0. Only defined for pair operators.
    """
    if op.scales is None:
        raise InputError("relative entries need a commutator or semi-commutator")
    live = op.scales > 0
    if not live.any():
        return 0.0
    return float(np.max(np.abs(op.coeffs[live]) / op.scales[live]))


def live_entry_count(op: SparseOperator) -> int:
    """Entries where at least one of the two subtracted terms is non-zero."""
    if op.scales is None:
        return int(np.count_nonzero(op.coeffs))
    return int(np.count_nonzero(op.scales > 0))
