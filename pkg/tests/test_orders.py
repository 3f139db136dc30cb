from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from pe2ford.errors import InvalidDiscriminant, OutOfScope
from pe2ford.orders import (
    KElem,
    OInt,
    dist_sq,
    lattice_points_within,
    lattice_points_norm_at_most,
    make_order,
    oints_by_norm,
)

DISCS = [-15, -16, -19, -20, -23, -24, -40]


def test_make_order_validates():
    for bad in (0, 4, -1, -2, -5, -6, -9, -10, -13):
        with pytest.raises(InvalidDiscriminant):
            make_order(bad)
    for good in DISCS + [-3, -4, -7, -8, -11, -12]:
        make_order(good)


def test_tau_square_even():
    d = make_order(-40)
    assert d.tau * d.tau == d.elt(-10)


def test_tau_square_odd():
    # t^2 = t - (1+|delta|)/4 when delta is odd
    d = make_order(-15)
    assert d.tau * d.tau == d.elt(-4, 1)


def test_norm_examples():
    assert make_order(-40).elt(1, 1).norm() == 11
    assert make_order(-15).elt(1, 1).norm() == 6
    assert make_order(-40).tau.norm() == 10


def test_conj():
    even = make_order(-40)
    assert even.tau.conj() == -even.tau
    odd = make_order(-15)
    assert odd.tau.conj() == odd.one - odd.tau


def test_norm_is_multiplicative():
    rng = random.Random(7)
    for delta in DISCS:
        d = make_order(delta)
        for _ in range(200):
            x = d.elt(rng.randint(-9, 9), rng.randint(-9, 9))
            y = d.elt(rng.randint(-9, 9), rng.randint(-9, 9))
            assert (x * y).norm() == x.norm() * y.norm()
            assert x * x.conj() == d.elt(x.norm())
            assert (x * y).conj() == x.conj() * y.conj()


def test_units():
    for delta in DISCS:
        d = make_order(delta)
        assert d.units() == [d.one, -d.one]
    for delta in (-3, -4):
        with pytest.raises(OutOfScope):
            make_order(delta).units()


def test_small_elements_norm_gap():
    # desk check: nothing of norm 2 or 3 exists once |delta| > 12
    for delta in range(-200, -12):
        if delta % 4 not in (0, 1):
            continue
        d = make_order(delta)
        for a in range(-20, 21):
            for b in range(-20, 21):
                x = d.elt(a, b)
                if x.is_small():
                    assert x.norm() in (0, 1)
                else:
                    assert x.norm() >= 4


def test_planar_matches_norm():
    rng = random.Random(3)
    for delta in DISCS:
        d = make_order(delta)
        for _ in range(100):
            x = d.elt(rng.randint(-8, 8), rng.randint(-8, 8))
            u, v = x.planar()
            assert u * u + d.abs_delta * v * v == x.norm()


def test_kelem_reduction_and_equality():
    d = make_order(-40)
    z = KElem.of(d.elt(1, 1), 2)
    assert z.den == 2 and z.num == d.elt(1, 1)
    # denominator gets rationalized to a positive integer
    w = KElem.of(d.elt(1, 1) * d.tau, d.elt(0, 2))
    assert w == z
    assert KElem.of(d.elt(-2), d.elt(-4)) == KElem.of(d.elt(1), 2)


def test_kelem_equality_is_cross_multiplication():
    rng = random.Random(11)
    for delta in DISCS:
        d = make_order(delta)
        for _ in range(150):
            lam1 = d.elt(rng.randint(-6, 6), rng.randint(-6, 6))
            mu1 = d.elt(rng.randint(-6, 6), rng.randint(-6, 6))
            lam2 = d.elt(rng.randint(-6, 6), rng.randint(-6, 6))
            mu2 = d.elt(rng.randint(-6, 6), rng.randint(-6, 6))
            if mu1.is_zero() or mu2.is_zero():
                continue
            z1 = KElem.of(lam1, mu1)
            z2 = KElem.of(lam2, mu2)
            assert (z1 == z2) == (lam1 * mu2 == lam2 * mu1)
            if z1 == z2:
                assert hash(z1) == hash(z2)


def test_kelem_field_ops():
    d = make_order(-15)
    z = KElem.of(d.elt(2, 3), 5)
    w = KElem.of(d.elt(-1, 1), 3)
    assert (z + w) - w == z
    assert (z * w) / w == z
    assert z + (-z) == KElem.of(d.zero, 1)
    assert (1 / w) * w == KElem.of(d.one, 1)
    with pytest.raises(ZeroDivisionError):
        z / KElem.of(d.zero, 1)


def test_dist_sq_deep_hole():
    d = make_order(-40)
    z = KElem.of(d.elt(1, 1), 2)
    assert dist_sq(z, d.zero) == Fraction(11, 4)
    assert dist_sq(z, d.elt(1)) == Fraction(11, 4)
    assert dist_sq(z, d.tau) == Fraction(11, 4)
    assert dist_sq(z, d.elt(1, 1)) == Fraction(11, 4)


def test_lattice_points_within_examples():
    for delta in DISCS:
        d = make_order(delta)
        pts = lattice_points_within(KElem.of(d.zero, 1), 1, closed=True)
        assert pts == [-d.one, d.zero, d.one]
    d = make_order(-40)
    pts = lattice_points_within(KElem.of(d.one, 2), 1, closed=False)
    assert pts == [d.zero, d.one]


def _brute_points(z: KElem, rsq: Fraction, closed: bool) -> list[OInt]:
    d = z.order
    u, v = z.planar()
    span = int(math.isqrt(int(4 * rsq) + 4)) + 3
    out = []
    for b in range(int(2 * v) - span, int(2 * v) + span + 1):
        for a in range(int(u) - span, int(u) + span + 1):
            g = d.elt(a, b)
            d2 = dist_sq(z, g)
            if d2 < rsq or (closed and d2 == rsq):
                out.append(g)
    return sorted(out, key=lambda g: g.key())


def test_lattice_points_within_matches_brute_force():
    rng = random.Random(19)
    for delta in DISCS:
        d = make_order(delta)
        for _ in range(40):
            num = d.elt(rng.randint(-10, 10), rng.randint(-10, 10))
            den = rng.randint(1, 6)
            z = KElem.of(num, den)
            rsq = Fraction(rng.randint(1, 40), rng.randint(1, 8))
            closed = rng.random() < 0.5
            assert lattice_points_within(z, rsq, closed) == _brute_points(z, rsq, closed)


def test_lattice_points_norm_at_most():
    d = make_order(-40)
    pts = lattice_points_norm_at_most(d, 11)
    norms = sorted(g.norm() for g in pts)
    assert norms == [1, 1, 4, 4, 9, 9, 10, 10, 11, 11, 11, 11]


def test_oints_by_norm_groups():
    d = make_order(-40)
    gen = oints_by_norm(d)
    groups = [next(gen) for _ in range(5)]
    assert [g[0].norm() for g in groups] == [1, 4, 9, 10, 11]
    for group in groups:
        assert group == sorted(group, key=lambda g: g.key())


def test_covering_radius():
    assert make_order(-40).covering_radius_sq() == Fraction(11, 4)
    assert make_order(-15).covering_radius_sq() == Fraction(256, 240)
    # every random point has a lattice point within the covering radius
    rng = random.Random(5)
    for delta in DISCS:
        d = make_order(delta)
        cov = d.covering_radius_sq()
        for _ in range(60):
            z = KElem.of(d.elt(rng.randint(-8, 8), rng.randint(-8, 8)), rng.randint(1, 7))
            assert lattice_points_within(z, cov, closed=True)
