"""Certified enclosure primitives, cross-checked against mpmath at high
precision (the implementation never imports mpmath; it is a test oracle)."""

import random
from fractions import Fraction

import mpmath as mp
import pytest

from heightcensus.errors import UsageError
from heightcensus.intervals import (ComplexBox, Interval, dyadic_str,
                                    exp_enclosure, is_dyadic, log2_enclosure,
                                    log_enclosure, parse_dyadic,
                                    pow_enclosure, sqrt_interval)

mp.mp.dps = 60


def contains_mp(iv: Interval, value) -> bool:
    lo = mp.mpf(iv.lo.numerator) / iv.lo.denominator
    hi = mp.mpf(iv.hi.numerator) / iv.hi.denominator
    return lo <= value <= hi


class TestDyadic:
    def test_roundtrip(self):
        for x in (Fraction(0), Fraction(3, 8), Fraction(-7, 4), Fraction(5), Fraction(-1, 1024)):
            assert parse_dyadic(dyadic_str(x)) == x

    def test_rejects_non_dyadic(self):
        with pytest.raises(UsageError):
            dyadic_str(Fraction(1, 3))

    def test_outward_contains(self):
        rng = random.Random(7)
        for _ in range(200):
            a = Fraction(rng.randint(-999, 999), rng.randint(1, 999))
            b = a + Fraction(rng.randint(0, 99), rng.randint(1, 99))
            iv = Interval(a, b)
            out = iv.outward(24)
            assert out.lo <= a and b <= out.hi
            assert is_dyadic(out.lo) and is_dyadic(out.hi)
            assert out.width <= iv.width + Fraction(2, 1 << 24)


class TestIntervalOps:
    def test_mul_contains_products(self):
        rng = random.Random(11)
        for _ in range(300):
            xs = sorted(Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(2))
            ys = sorted(Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(2))
            a, b = Interval(*xs), Interval(*ys)
            prod = a * b
            for _ in range(4):
                x = xs[0] + Fraction(rng.randint(0, 8), 8) * (xs[1] - xs[0])
                y = ys[0] + Fraction(rng.randint(0, 8), 8) * (ys[1] - ys[0])
                assert prod.contains(x * y)

    def test_square_at_zero(self):
        iv = Interval(Fraction(-2), Fraction(3)).square()
        assert iv.lo == 0 and iv.hi == 9

    def test_recip_rejects_zero(self):
        with pytest.raises(UsageError):
            Interval(Fraction(-1), Fraction(1)).recip()

    def test_order_predicates(self):
        assert Interval.point(1).lt(Interval.point(2)) is True
        assert Interval.point(2).lt(Interval.point(1)) is False
        assert Interval(Fraction(0), Fraction(2)).lt(Interval(Fraction(1), Fraction(3))) is None


class TestComplexBox:
    def test_mul_matches_complex(self):
        rng = random.Random(3)
        for _ in range(100):
            vals = [Fraction(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(4)]
            a = ComplexBox.point(vals[0], vals[1])
            b = ComplexBox.point(vals[2], vals[3])
            prod = a * b
            zr = vals[0] * vals[2] - vals[1] * vals[3]
            zi = vals[0] * vals[3] + vals[1] * vals[2]
            assert prod.contains(zr, zi)

    def test_recip(self):
        box = ComplexBox.point(Fraction(3), Fraction(4))
        inv = box.recip()
        assert inv.contains(Fraction(3, 25), Fraction(-4, 25))


class TestLogExp:
    def test_log2(self):
        for prec in (53, 106, 240):
            iv = log2_enclosure(prec)
            assert contains_mp(iv, mp.log(2))
            assert iv.width <= Fraction(1, 1 << (prec - 2))

    def test_log_random(self):
        rng = random.Random(23)
        for _ in range(60):
            q = Fraction(rng.randint(1, 10**6), rng.randint(1, 10**6))
            iv = log_enclosure(q, 80)
            assert contains_mp(iv, mp.log(mp.mpf(q.numerator) / q.denominator))
            assert iv.width < Fraction(1, 1 << 70)

    def test_log_one(self):
        assert log_enclosure(Fraction(1), 64) == Interval.point(0)

    def test_exp_random(self):
        rng = random.Random(29)
        for _ in range(60):
            q = Fraction(rng.randint(-3000, 3000), rng.randint(1, 100))
            iv = exp_enclosure(q, 80)
            val = mp.e ** (mp.mpf(q.numerator) / q.denominator)
            assert contains_mp(iv, val)
            # relative width stays controlled
            assert iv.width / iv.lo < Fraction(1, 1 << 60)

    def test_exp_zero_exact(self):
        assert exp_enclosure(Fraction(0), 64) == Interval.point(1)

    def test_exp_interval_argument(self):
        arg = Interval(Fraction(1, 2), Fraction(3, 4))
        iv = exp_enclosure(arg, 64)
        assert contains_mp(iv, mp.e ** mp.mpf(0.5))
        assert contains_mp(iv, mp.e ** mp.mpf(0.75))

    def test_pow_integer_exact(self):
        assert pow_enclosure(Fraction(3, 2), Fraction(3), 64) == Interval.point(Fraction(27, 8))

    def test_pow_fractional(self):
        iv = pow_enclosure(Fraction(2), Fraction(1, 2), 80)
        assert contains_mp(iv, mp.sqrt(2))

    def test_sqrt_interval(self):
        iv = sqrt_interval(Interval(Fraction(2), Fraction(2)), 100)
        assert contains_mp(iv, mp.sqrt(2))
        assert iv.width <= Fraction(1, 1 << 98)
