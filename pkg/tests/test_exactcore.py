"""Exact polynomial arithmetic, root isolation, irreducibility, and number
field operations.

Derived expected values are computed by independent oracles inside the
tests: square roots via isqrt scaling, factor searches by raw brute force,
resultants by symbolic expansion done by hand in the assertions, root
locations via mpmath at 50 digits.
"""

import random
from fractions import Fraction
from math import isqrt

import mpmath as mp
import pytest

from heightcensus.errors import UsageError
from heightcensus.exactcore import (AlgebraicNumber, IntPoly,
                                    NumberFieldElement, canonical_form,
                                    count_real_roots, element_resultant_poly,
                                    express_in_field, factor_into_irreducibles,
                                    is_irreducible, isolate_roots,
                                    minpoly_of_element, poly_eval_in_field,
                                    poly_gcd, q_resultant, rational_roots,
                                    squarefree_part, yun_squarefree_decomposition)
from heightcensus.intervals import Interval

mp.mp.dps = 50

W = Fraction(1, 1 << 10)


def frac_sqrt_enclosure(n: int, prec: int = 64) -> Interval:
    """Independent sqrt oracle: floor/ceil of sqrt(n * 4^prec) / 2^prec."""
    scaled = n << (2 * prec)
    r = isqrt(scaled)
    lo = Fraction(r, 1 << prec)
    hi = Fraction(r + 1, 1 << prec)
    return Interval(lo, hi)


class TestCanonicalForm:
    def test_examples(self):
        assert canonical_form(IntPoly((4, -2))) == IntPoly((-2, 1))          # -2X+4 -> X-2
        assert canonical_form(IntPoly((-2, 0, 1))) == IntPoly((-2, 0, 1))    # X^2-2 unchanged
        assert canonical_form(IntPoly((0, 9, 0, 6))) == IntPoly((0, 3, 0, 2))  # 6X^3+9X

    def test_zero_rejected(self):
        with pytest.raises(UsageError, match="zero polynomial has no canonical form"):
            canonical_form(IntPoly(()))

    def test_random_properties(self):
        rng = random.Random(5)
        for _ in range(200):
            coeffs = tuple(rng.randint(-30, 30) for _ in range(rng.randint(1, 6)))
            if not any(coeffs):
                continue
            p = canonical_form(IntPoly(coeffs))
            assert p.lead > 0
            assert p.content() == 1
            assert canonical_form(p) == p


class TestIsolateRoots:
    def test_x2_plus_1(self):
        boxes = isolate_roots(IntPoly((1, 0, 1)), W)
        assert len(boxes) == 2
        assert boxes[0].contains(0, -1)
        assert boxes[1].contains(0, 1)
        # conjugate symmetry
        assert boxes[0].re == boxes[1].re
        assert boxes[0].im == -boxes[1].im

    def test_x2_minus_2(self):
        boxes = isolate_roots(IntPoly((-2, 0, 1)), W)
        s = frac_sqrt_enclosure(2)
        assert len(boxes) == 2
        assert boxes[0].re.intersects(-s) and boxes[0].im.contains(0)
        assert boxes[1].re.intersects(s) and boxes[1].im.contains(0)
        assert all(b.width <= W for b in boxes)

    def test_x3_minus_1(self):
        boxes = isolate_roots(IntPoly((-1, 0, 0, 1)), W)
        assert len(boxes) == 3
        half_sqrt3 = frac_sqrt_enclosure(3) * Fraction(1, 2)
        # canonical order: (-1/2 - i sqrt3/2), (-1/2 + i sqrt3/2), 1
        assert boxes[0].re.contains(Fraction(-1, 2))
        assert boxes[0].im.intersects(-half_sqrt3)
        assert boxes[1].re.contains(Fraction(-1, 2))
        assert boxes[1].im.intersects(half_sqrt3)
        assert boxes[2].contains(1, 0)

    def test_disjoint_and_count(self):
        rng = random.Random(17)
        done = 0
        while done < 30:
            coeffs = tuple(rng.randint(-9, 9) for _ in range(rng.randint(2, 6)))
            p = IntPoly(coeffs)
            if p.degree < 1:
                continue
            p = canonical_form(p)
            p = squarefree_part(p)
            if p.degree < 1:
                continue
            boxes = isolate_roots(p, W)
            assert len(boxes) == p.degree
            for i in range(len(boxes)):
                for j in range(i + 1, len(boxes)):
                    assert not boxes[i].intersects(boxes[j])
            # conjugate closure: mirror of every box is a box
            keys = {(b.re.lo, b.re.hi, b.im.lo, b.im.hi) for b in boxes}
            for b in boxes:
                m = b.conj()
                assert (m.re.lo, m.re.hi, m.im.lo, m.im.hi) in keys
            done += 1

    def test_against_mpmath(self):
        # root boxes must each contain one mpmath root
        for coeffs in ((-2, 0, 1), (1, 1, 1, 1, 1), (3, -1, -2, 1), (5, -6, 5)):
            p = IntPoly(coeffs)
            boxes = isolate_roots(squarefree_part(p), Fraction(1, 1 << 40))
            roots = mp.polyroots([int(c) for c in reversed(squarefree_part(p).coeffs)],
                                 maxsteps=200, extraprec=200)
            for b in boxes:
                hits = 0
                for r in roots:
                    re, im = mp.re(r), mp.im(r)
                    if (mp.mpf(b.re.lo.numerator) / b.re.lo.denominator <= re
                            <= mp.mpf(b.re.hi.numerator) / b.re.hi.denominator
                            and mp.mpf(b.im.lo.numerator) / b.im.lo.denominator <= im
                            <= mp.mpf(b.im.hi.numerator) / b.im.hi.denominator):
                        hits += 1
                assert hits == 1

    def test_rejects_bad_input(self):
        with pytest.raises(UsageError):
            isolate_roots(IntPoly((1, 2, 1)), W)   # (X+1)^2 not squarefree
        with pytest.raises(UsageError):
            isolate_roots(IntPoly((-2, 0, 1)), Fraction(0))

    def test_deep_refinement(self):
        boxes = isolate_roots(IntPoly((-2, 0, 1)), Fraction(1, 1 << 300))
        assert boxes[1].width <= Fraction(1, 1 << 300)
        wide = frac_sqrt_enclosure(2, 400)
        assert boxes[1].re.intersects(wide)


class TestIrreducibility:
    def test_examples(self):
        assert is_irreducible(IntPoly((-2, 0, 1))) == (True, None)
        ok, witness = is_irreducible(IntPoly((-1, 0, 1)))
        assert not ok and witness is not None
        assert witness.divides(IntPoly((-1, 0, 1)))
        assert is_irreducible(IntPoly((1, 0, 0, 0, 1)))[0]  # X^4+1

    def test_brute_force_agreement(self):
        """Exhaustive cross-check against raw factor enumeration, degree <= 4."""
        rng = random.Random(41)

        def brute_reducible(p: IntPoly) -> bool:
            d = p.degree
            bound = 1
            n2 = p.l2_norm_squared()
            while bound * bound < n2:
                bound += 1
            for k in range(1, d // 2 + 1):
                kb = (1 << k) * bound
                def rec(pref):
                    if len(pref) == k + 1:
                        g = IntPoly(tuple(pref))
                        return g.degree == k and g.divides(p)
                    return any(rec(pref + [c]) for c in range(-kb, kb + 1))
                if rec([]):
                    return True
            return False

        checked = 0
        while checked < 25:
            coeffs = tuple(rng.randint(-6, 6) for _ in range(rng.randint(2, 5)))
            p = IntPoly(coeffs)
            if p.is_zero or p.degree < 1:
                continue
            p = canonical_form(p)
            if p.l2_norm_squared() > 40:   # keep brute force tractable
                continue
            ok, witness = is_irreducible(p)
            assert ok == (not brute_reducible(p))
            if not ok:
                assert witness.degree >= 1 and witness.degree < p.degree
                assert witness.divides(p)
            checked += 1

    def test_quartic_with_quadratic_factors(self):
        # (X^2+X+1)(X^2-X+3) has no rational roots
        p = IntPoly((1, 1, 1)) * IntPoly((3, -1, 1))
        ok, witness = is_irreducible(canonical_form(p))
        assert not ok and witness.divides(p)

    def test_factor_into_irreducibles(self):
        p = IntPoly((1, 1, 1)) * IntPoly((-1, 1)) * IntPoly((-1, 1)) * IntPoly((2,))
        factors = factor_into_irreducibles(p)
        rebuilt = IntPoly((1,))
        for f, m in factors:
            for _ in range(m):
                rebuilt = rebuilt * f
        assert rebuilt == canonical_form(p)
        assert dict((tuple(f.coeffs), m) for f, m in factors) == {
            (-1, 1): 2, (1, 1, 1): 1}


class TestPolyUtilities:
    def test_rational_roots(self):
        p = IntPoly((0, -2, 0, 2))  # 2X(X^2 - 1) = 2X^3 - 2X
        assert rational_roots(p) == [Fraction(-1), Fraction(0), Fraction(1)]
        assert rational_roots(IntPoly((-1, 2))) == [Fraction(1, 2)]

    def test_gcd_and_squarefree(self):
        p = IntPoly((1, 2, 1))  # (X+1)^2
        g = poly_gcd(p, p.derivative())
        assert g == IntPoly((1, 1))
        assert squarefree_part(p) == IntPoly((1, 1))

    def test_yun(self):
        p = IntPoly((1, 1)) * IntPoly((1, 1)) * IntPoly((-2, 1))
        dec = yun_squarefree_decomposition(p)
        assert dec == [(IntPoly((-2, 1)), 1), (IntPoly((1, 1)), 2)]

    def test_count_real_roots(self):
        assert count_real_roots(IntPoly((-2, 0, 1))) == 2
        assert count_real_roots(IntPoly((1, 0, 1))) == 0
        assert count_real_roots(IntPoly((-1, 0, 0, 1))) == 1

    def test_resultant(self):
        # res(X^2-2, X^2-3) = (sqrt2^2-3)^2 * ... = product of (a_i - b_j) style:
        # known value: res = ((2)-(3))^2 = 1... compute independently: for monic
        # f, g: res = prod g(alpha_i) = (2-3)*(2-3) = 1
        f = (Fraction(-2), Fraction(0), Fraction(1))
        g = (Fraction(-3), Fraction(0), Fraction(1))
        assert q_resultant(f, g) == 1
        # res(X-2, X-3) = (2-3) = -1 up to convention res = g(2) = -1
        assert q_resultant((Fraction(-2), Fraction(1)), (Fraction(-3), Fraction(1))) == -1


class TestNumberField:
    def test_poly_eval_identity(self):
        sqrt2 = AlgebraicNumber.roots_of(IntPoly((-2, 0, 1)))[1]
        e = poly_eval_in_field(IntPoly((0, 1)), sqrt2)
        assert e.repr_coeffs == (Fraction(0), Fraction(1))

    def test_poly_eval_reduction(self):
        sqrt2 = AlgebraicNumber.roots_of(IntPoly((-2, 0, 1)))[1]
        e = poly_eval_in_field(IntPoly((0, 0, 1)), sqrt2)
        assert e.repr_coeffs == (Fraction(2),)

    def test_poly_eval_root(self):
        one = AlgebraicNumber.of_rational(1)
        e = poly_eval_in_field(IntPoly((0, -1, 0, 1)), one)  # X^3 - X at 1
        assert e.is_zero

    def test_minpoly_of_square(self):
        sqrt2 = AlgebraicNumber.roots_of(IntPoly((-2, 0, 1)))[1]
        e = poly_eval_in_field(IntPoly((0, 0, 1)), sqrt2)
        assert minpoly_of_element(e) == IntPoly((-2, 1))  # Y - 2

    def test_minpoly_of_shift(self):
        # alpha = sqrt2, g = X + 1: (Y-1)^2 - 2 = Y^2 - 2Y - 1 (hand expansion)
        sqrt2 = AlgebraicNumber.roots_of(IntPoly((-2, 0, 1)))[1]
        e = poly_eval_in_field(IntPoly((1, 1)), sqrt2)
        assert minpoly_of_element(e) == IntPoly((-1, -2, 1))

    def test_minpoly_rational_scaling(self):
        half = AlgebraicNumber.of_rational(Fraction(1, 2))
        e = poly_eval_in_field(IntPoly((0, 3)), half)
        assert minpoly_of_element(e) == IntPoly((-3, 2))  # 2Y - 3

    def test_minpoly_divides_resultant(self):
        rng = random.Random(99)
        golden = AlgebraicNumber.roots_of(IntPoly((-1, -1, 1)))
        cbrt = AlgebraicNumber.roots_of(IntPoly((-2, 0, 0, 1)))
        for alpha in (golden[0], golden[1], cbrt[0]):
            for _ in range(5):
                g = tuple(Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                          for _ in range(alpha.degree))
                e = NumberFieldElement(alpha, g)
                mp_e = minpoly_of_element(e)
                res = element_resultant_poly(e)
                if res.is_zero:
                    continue
                assert mp_e.divides(res)
                # evaluating the minpoly at an enclosure of g(alpha) covers 0
                box = e.enclosure(Fraction(1, 1 << 60))
                acc_re, acc_im = Interval.point(0), Interval.point(0)
                val = None
                from heightcensus.intervals import ComplexBox
                val = ComplexBox.point(0)
                for c in reversed(mp_e.coeffs):
                    val = val * box + ComplexBox.point(c)
                assert val.contains(0, 0)

    def test_field_inverse(self):
        golden = AlgebraicNumber.roots_of(IntPoly((-1, -1, 1)))[1]
        e = poly_eval_in_field(IntPoly((1, 2)), golden)  # 2*alpha + 1
        inv = e.inverse()
        assert (e * inv).as_fraction() == 1

    def test_conjugate(self):
        i_root = AlgebraicNumber.roots_of(IntPoly((1, 0, 1)))[1]
        conj = i_root.conjugate()
        assert conj != i_root
        assert conj.minpoly == i_root.minpoly
        assert conj.conjugate() == i_root

    def test_algebraic_number_identity(self):
        a = AlgebraicNumber.roots_of(IntPoly((-2, 0, 1)))
        b = AlgebraicNumber.roots_of(IntPoly((-2, 0, 1)))
        assert a == b
        assert len({a[0], a[1], b[0]}) == 2

    def test_serialization_roundtrip(self):
        for alpha in AlgebraicNumber.roots_of(IntPoly((1, 1, 1))):
            back = AlgebraicNumber.from_json(alpha.to_json())
            assert back == alpha
        r = AlgebraicNumber.of_rational(Fraction(-7, 3))
        assert AlgebraicNumber.from_json(r.to_json()) == r

    def test_express_in_field_conjugate(self):
        roots = AlgebraicNumber.roots_of(IntPoly((-1, -1, 1)))
        g = express_in_field(roots[0], roots[1])
        assert g is not None
        # golden conjugate: trace - alpha = 1 - alpha
        assert g.repr_coeffs == (Fraction(1), Fraction(-1))

    def test_express_in_field_same_quadratic_field(self):
        # beta = 1 + 2*sqrt2 has minpoly Y^2 - 2Y - 7; lives in Q(sqrt2)
        sqrt2 = AlgebraicNumber.roots_of(IntPoly((-2, 0, 1)))[1]
        beta = AlgebraicNumber.roots_of(IntPoly((-7, -2, 1)))[1]
        g = express_in_field(beta, sqrt2)
        assert g is not None
        assert g.repr_coeffs == (Fraction(1), Fraction(2))

    def test_express_in_field_rejects_foreign(self):
        sqrt2 = AlgebraicNumber.roots_of(IntPoly((-2, 0, 1)))[1]
        sqrt3 = AlgebraicNumber.roots_of(IntPoly((-3, 0, 1)))[1]
        assert express_in_field(sqrt3, sqrt2) is None
