import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from bergman_toeplitz.core import InputError
from bergman_toeplitz.gamma import (
    GammaRatioIdentity,
    RationalFunction,
    RationalPoly,
    decide_gamma_identity,
    gamma_ratio_divisor,
    gamma_ratio_reduce,
    log_gamma,
    log_gamma_array,
    pochhammer_poly,
    sample_identity_residual,
    shifts_divisor,
)

from conftest import rationals


@pytest.mark.parametrize("x", [1e-8, 0.1, 0.5, 1.0, 1.5, 2.0, 7.25, 33.3, 171.5, 1e4, 1e8])
def test_log_gamma_matches_mpmath(x):
    ref = float(mpmath.loggamma(mpmath.mpf(x)))
    assert math.isclose(log_gamma(x), ref, rel_tol=1e-14, abs_tol=1e-14)


def test_log_gamma_array_matches_scalar():
    xs = [0.25, 1.0, 3.5, 50.0]
    assert list(log_gamma_array(xs)) == pytest.approx([log_gamma(x) for x in xs], rel=1e-15)


@pytest.mark.parametrize("bad", [0.0, -1.0, -0.5, float("nan")])
def test_log_gamma_rejects_non_positive(bad):
    with pytest.raises(InputError):
        log_gamma(bad)
    with pytest.raises(InputError):
        log_gamma_array([1.0, bad])


def test_poly_arithmetic():
    a = RationalPoly.from_shifts([1, Fraction(1, 2)])
    assert a.coeffs == (Fraction(1, 2), Fraction(3, 2), 1)
    assert a.degree == 2
    assert (a * RationalPoly.constant(0)).is_zero()
    assert a(Fraction(1)) == Fraction(3)
    assert a(2.0) == pytest.approx(7.5)
    assert RationalPoly([1, 2, 0, 0]) == RationalPoly([1, 2])


def test_rational_function_equality_by_cross_multiplication():
    f = RationalFunction.from_shifts([1, 2], [2, 3])
    g = RationalFunction.from_shifts([1], [3])
    assert f == g
    assert f != RationalFunction.from_shifts([1], [4])
    with pytest.raises(InputError):
        RationalFunction(RationalPoly.constant(1), RationalPoly())


@pytest.mark.parametrize("base,d", [(Fraction(1, 3), 3), (Fraction(5, 2), -2), (Fraction(0), 0), (Fraction(7, 4), 1)])
def test_pochhammer_against_mpmath(base, d):
    f = pochhammer_poly(base, d)
    for eta in (1.5, 4.0, 11.25):
        ref = mpmath.gamma(eta + float(base) + d) / mpmath.gamma(eta + float(base))
        assert f(eta) == pytest.approx(float(ref), rel=1e-12)


def test_reduce_six_dim_instance():
    # x = {2, 3, 5}, y = {4, 2, 4} telescopes to (eta + 4)/(eta + 3)
    assert gamma_ratio_reduce([2, 3, 5], [4, 2, 4]) == RationalFunction.from_shifts([4], [3])


def test_reduce_detects_residue_mismatch():
    assert gamma_ratio_reduce([Fraction(1, 2), 1], [1, 2]) is None
    assert gamma_ratio_divisor([Fraction(1, 2), 1], [1, 2]) is None
    with pytest.raises(InputError):
        gamma_ratio_reduce([1, 2], [1])


@st.composite
def telescoped(draw, size=3):
    ys = [draw(rationals(4, 0, 6)) for _ in range(size)]
    shifts = [draw(st.integers(-3, 3)) for _ in range(size)]
    xs = [y + d for y, d in zip(ys, shifts)]
    perm = draw(st.permutations(range(size)))
    return [xs[i] for i in perm], ys


@given(telescoped())
def test_reduce_agrees_with_gamma_values(xy):
    xs, ys = xy
    f = gamma_ratio_reduce(xs, ys)
    for eta in (5.5, 9.0, 17.75):
        ref = mpmath.mpf(1)
        for x in xs:
            ref *= mpmath.gamma(eta + float(x))
        for y in ys:
            ref /= mpmath.gamma(eta + float(y))
        assert f(eta) == pytest.approx(float(ref), rel=1e-10)


@given(telescoped(), telescoped())
def test_divisor_equality_matches_cross_multiplication(a, b):
    fa, fb = gamma_ratio_reduce(*a), gamma_ratio_reduce(*b)
    assert (fa == fb) == (gamma_ratio_divisor(*a) == gamma_ratio_divisor(*b))


@given(telescoped())
def test_divisor_describes_reduced_function(xy):
    div = gamma_ratio_divisor(*xy)
    num = [c for c, e in div.items() for _ in range(max(e, 0))]
    den = [c for c, e in div.items() for _ in range(max(-e, 0))]
    assert RationalFunction.from_shifts(num, den) == gamma_ratio_reduce(*xy)
    assert shifts_divisor(num, den) == div


@given(telescoped())
def test_true_identities_decided_and_sampled(xy):
    xs, ys = xy
    identity = GammaRatioIdentity(xs, ys, gamma_ratio_reduce(xs, ys))
    assert decide_gamma_identity(identity)
    shift = 1 + max(0.0, -min(float(v) for v in (*xs, *ys)))
    den_roots = [float(c) for c, e in gamma_ratio_divisor(xs, ys).items() if e < 0]
    shift = max(shift, 1 + max([0.0] + [-r for r in den_roots]))
    points = [shift + k * 1.7 for k in range(8)]
    assert sample_identity_residual(identity, points) <= 1e-8


def test_decide_refuses_float_rhs():
    rhs = RationalFunction(RationalPoly([0.5, 1.0]))
    with pytest.raises(InputError):
        decide_gamma_identity(GammaRatioIdentity([1], [1], rhs))


def test_unbalanced_identity_rejected():
    with pytest.raises(InputError):
        GammaRatioIdentity([1, 2], [1], RationalFunction.one())


def test_residual_guards():
    identity = GammaRatioIdentity([1], [2], RationalFunction.from_shifts([], [1]))
    with pytest.raises(InputError):
        sample_identity_residual(identity, [-1.5])
    with pytest.raises(InputError):
        sample_identity_residual(GammaRatioIdentity([3], [3], RationalFunction.from_shifts([], [-2])), [2.0])
    assert sample_identity_residual(identity) <= 1e-12


@given(telescoped(), st.integers(0, 2), st.sampled_from([Fraction(1, 2), Fraction(1, 3), Fraction(1)]))
def test_perturbed_identity_rejected(xy, which, delta):
    xs, ys = xy
    assume(delta != 0)
    bad = list(xs)
    bad[which] += delta
    identity = GammaRatioIdentity(bad, ys, gamma_ratio_reduce(xs, ys))
    assert not decide_gamma_identity(identity)
