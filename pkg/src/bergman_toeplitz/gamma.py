"""Gamma evaluation and exact decision of Gamma-ratio = rational-function identities.

An identity prod Gamma(eta + x_i) / prod Gamma(eta + y_j) = R(eta) holds on a right
half-plane exactly when the shifts pair off within residue classes mod 1 (otherwise the
left side has infinitely many uncancelled poles) and the telescoped rational function
equals R. Equality of rational functions is tested by cross-multiplication.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.special import gammaln

from .core import InputError

SAMPLE_SEED = 0x5EED
SAMPLE_COUNT = 32
SAMPLE_RANGE = (1.0, 50.0)
RESIDUAL_THRESHOLD = 1e-8


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if not x > 0:
        raise InputError(f"log_gamma needs a positive argument, got {x!r}")
    return math.lgamma(x)


def log_gamma_array(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise InputError("log_gamma needs positive arguments")
    return gammaln(x)


class RationalPoly:
    """Polynomial in eta with coefficients in ascending degree.

    Coefficients are normally Fractions; floats are tolerated for numeric evaluation
    but such polynomials cannot take part in exact decisions.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def constant(cls, value) -> "RationalPoly":
        return cls((value,))

    @classmethod
    def linear(cls, root_shift) -> "RationalPoly":
        """The factor (eta + root_shift)."""
        return cls((root_shift, Fraction(1)))

    @classmethod
    def from_shifts(cls, shifts: Iterable) -> "RationalPoly":
        out = cls.constant(Fraction(1))
        for c in shifts:
            out = out * cls.linear(c)
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def exact(self) -> bool:
        return all(isinstance(c, (int, Fraction)) for c in self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __mul__(self, other: "RationalPoly") -> "RationalPoly":
        if self.is_zero() or other.is_zero():
            return RationalPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPoly(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, eta):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * eta + (float(c) if isinstance(eta, float) else c)
        return acc

    def __repr__(self):
        return f"RationalPoly({[str(c) for c in self.coeffs]})"


class RationalFunction:
    """num/den in eta; equality by cross-multiplication, common factors are never cancelled."""

    __slots__ = ("num", "den")

    def __init__(self, num: RationalPoly, den: RationalPoly | None = None):
        den = RationalPoly.constant(Fraction(1)) if den is None else den
        if den.is_zero():
            raise InputError("rational function with zero denominator")
        self.num = num
        self.den = den

    @classmethod
    def one(cls) -> "RationalFunction":
        return cls(RationalPoly.constant(Fraction(1)))

    @classmethod
    def from_shifts(cls, num_shifts: Iterable, den_shifts: Iterable) -> "RationalFunction":
        """prod (eta + a) / prod (eta + b)."""
        return cls(RationalPoly.from_shifts(num_shifts), RationalPoly.from_shifts(den_shifts))

    @property
    def exact(self) -> bool:
        return self.num.exact and self.den.exact

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def __call__(self, eta):
        return self.num(eta) / self.den(eta)

    def __repr__(self):
        return f"RationalFunction({self.num!r}, {self.den!r})"


@dataclass(frozen=True)
class GammaRatioIdentity:
    """prod Gamma(eta + x_i) / prod Gamma(eta + y_j) == rhs(eta)."""

    x: tuple
    y: tuple
    rhs: RationalFunction

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(self.x))
        object.__setattr__(self, "y", tuple(self.y))
        if len(self.x) != len(self.y):
            raise InputError(f"unbalanced Gamma identity: {len(self.x)} vs {len(self.y)} factors")

    def lhs_log(self, eta: float) -> float:
        return sum(log_gamma(eta + float(v)) for v in self.x) - sum(
            log_gamma(eta + float(v)) for v in self.y
        )


def pochhammer_poly(base, d: int) -> RationalFunction:
    """Gamma(eta + base + d) / Gamma(eta + base) as a rational function of eta."""
    base = Fraction(base)
    if d >= 0:
        return RationalFunction.from_shifts([base + j for j in range(d)], [])
    return RationalFunction.from_shifts([], [base - j for j in range(1, -d + 1)])


def _residue(v: Fraction) -> Fraction:
    return v - math.floor(v)


def gamma_ratio_reduce(x: Sequence, y: Sequence) -> RationalFunction | None:
    """Telescope prod Gamma(eta+x_i)/prod Gamma(eta+y_j); None when it is not rational."""
    if len(x) != len(y):
        raise InputError(f"size mismatch: {len(x)} vs {len(y)}")
    classes: dict = defaultdict(lambda: ([], []))
    for v in x:
        classes[_residue(Fraction(v))][0].append(Fraction(v))
    for v in y:
        classes[_residue(Fraction(v))][1].append(Fraction(v))
    result = RationalFunction.one()
    for xs, ys in classes.values():
        if len(xs) != len(ys):
            return None
        for xv, yv in zip(sorted(xs), sorted(ys)):
            result = result * pochhammer_poly(yv, int(xv - yv))
    return result


def gamma_ratio_divisor(x: Sequence, y: Sequence) -> dict | None:
    """Root shifts of the telescoped ratio: {c: multiplicity of (eta + c)}, negative in the denominator.

    Cancelled factors are dropped, so two such ratios are equal iff their divisors are.
    """
    if len(x) != len(y):
        raise InputError(f"size mismatch: {len(x)} vs {len(y)}")
    classes: dict = defaultdict(lambda: ([], []))
    for v in x:
        classes[_residue(Fraction(v))][0].append(Fraction(v))
    for v in y:
        classes[_residue(Fraction(v))][1].append(Fraction(v))
    div: dict = defaultdict(int)
    for xs, ys in classes.values():
        if len(xs) != len(ys):
            return None
        for xv, yv in zip(sorted(xs), sorted(ys)):
            d = int(xv - yv)
            if d >= 0:
                for j in range(d):
                    div[yv + j] += 1
            else:
                for j in range(1, -d + 1):
                    div[yv - j] -= 1
    return {c: e for c, e in div.items() if e}


def shifts_divisor(num_shifts: Iterable, den_shifts: Iterable) -> dict:
    div: dict = defaultdict(int)
    for c in num_shifts:
        div[Fraction(c)] += 1
    for c in den_shifts:
        div[Fraction(c)] -= 1
    return {c: e for c, e in div.items() if e}


def decide_gamma_identity(identity: GammaRatioIdentity) -> bool:
    if not identity.rhs.exact:
        raise InputError("exact decision needs rational coefficients; use sample_identity_residual")
    reduced = gamma_ratio_reduce(identity.x, identity.y)
    if reduced is None:
        return False
    return reduced == identity.rhs


def default_points(count: int = SAMPLE_COUNT, seed: int = SAMPLE_SEED) -> list[float]:
    rng = np.random.default_rng(seed)
    lo, hi = SAMPLE_RANGE
    return [float(v) for v in rng.uniform(lo, hi, size=count)]


def sample_identity_residual(identity: GammaRatioIdentity, points: Iterable[float] | None = None) -> float:
    """Max relative mismatch |lhs - rhs| / max(1, |rhs|) over the sample points."""
    points = default_points() if points is None else list(points)
    worst = 0.0
    for eta in points:
        eta = float(eta)
        if any(eta + float(v) <= 0 for v in (*identity.x, *identity.y)):
            raise InputError(f"point {eta} gives a non-positive Gamma argument")
        den = float(identity.rhs.den(eta))
        if abs(den) < 1e-6:
            raise InputError(f"point {eta} is too close to a pole of the right-hand side")
        rhs = float(identity.rhs.num(eta)) / den
        lhs = math.exp(identity.lhs_log(eta))
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    return worst
