"""Exact arbitrary-precision arithmetic for integer and rational polynomials,
certified complex root enclosures, and number-field elements.

Design in brief:

* `IntPoly` stores integer coefficients in ascending degree order; the
  canonical form divides out the content and normalizes the leading sign.
* Real roots are counted and isolated with exact Sturm sequences; complex
  roots start from Durand-Kerner approximations and are then *certified*
  with a Krawczyk contraction test on complex rectangles, so every returned
  `ComplexBox` provably contains exactly one root.  Refinement keeps the
  certificate: each step intersects the contracted image with the old box.
* Irreducibility over the rationals is decided by the rational-root test up
  to degree 3 and by an exhaustive divisor/Mignotte-bounded factor search
  from degree 4 on; a nontrivial factor witness is produced on failure.
* Minimal polynomials of field elements g(alpha) come from the
  characteristic polynomial of the multiplication-by-g matrix in the power
  basis (equal, up to scaling, to the resultant eliminating alpha), with the
  right irreducible factor selected by certified numeric matching.

All values are immutable after construction; every operation is pure.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .errors import PrecisionExhausted, UsageError
from .intervals import ComplexBox, Interval, sqrt_upper

Q0 = Fraction(0)
Q1 = Fraction(1)


# ---------------------------------------------------------------------------
# rational polynomial helpers (tuples of Fractions, ascending, trimmed)
# ---------------------------------------------------------------------------

def q_trim(cs) -> tuple[Fraction, ...]:
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(Fraction(c) for c in cs)


def q_degree(f) -> int:
    return len(f) - 1


def q_add(f, g):
    n = max(len(f), len(g))
    return q_trim([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)
                   for i in range(n)])


def q_neg(f):
    return tuple(-c for c in f)


def q_sub(f, g):
    return q_add(f, q_neg(g))


def q_scale(f, a):
    a = Fraction(a)
    if a == 0:
        return ()
    return tuple(c * a for c in f)


def q_mul(f, g):
    if not f or not g:
        return ()
    out = [Q0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return q_trim(out)


def q_divmod(f, g):
    if not g:
        raise UsageError("polynomial division by zero")
    f = list(f)
    quot = [Q0] * max(0, len(f) - len(g) + 1)
    glead = g[-1]
    while len(f) >= len(g) and any(c != 0 for c in f):
        while f and f[-1] == 0:
            f.pop()
        if len(f) < len(g):
            break
        c = f[-1] / glead
        k = len(f) - len(g)
        quot[k] = c
        for i, b in enumerate(g):
            f[k + i] -= c * b
        f.pop()
    return q_trim(quot), q_trim(f)


def q_eval(f, x):
    acc = Q0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def q_derivative(f):
    return q_trim([i * c for i, c in enumerate(f)][1:])


def q_gcd(f, g):
    """Monic gcd over the rationals."""
    f, g = q_trim(f), q_trim(g)
    while g:
        f, g = g, q_divmod(f, g)[1]
    if not f:
        return ()
    return q_scale(f, 1 / f[-1])


def q_resultant(f, g) -> Fraction:
    """Resultant of two rational polynomials via the Euclidean identity
    res(f, g) = lc(g)^(df-dr) * (-1)^(df*dg) * res(g, r), r = f rem g."""
    f, g = q_trim(f), q_trim(g)
    if not f or not g:
        return Q0
    df, dg = q_degree(f), q_degree(g)
    if df == 0:
        return f[0] ** dg
    if dg == 0:
        return g[0] ** df
    r = q_divmod(f, g)[1]
    if not r:
        return Q0
    dr = q_degree(r)
    sign = -1 if (df % 2 == 1 and dg % 2 == 1) else 1
    return sign * g[-1] ** (df - dr) * q_resultant(g, r)


# ---------------------------------------------------------------------------
# integer polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntPoly:
    """Integer-coefficient polynomial, coefficients ascending by degree."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        cs = list(self.coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        out = []
        for c in cs:
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise UsageError(f"non-integer coefficient {c}")
                c = c.numerator
            elif not isinstance(c, int):
                raise UsageError(f"non-integer coefficient {c!r}")
            out.append(c)
        object.__setattr__(self, "coeffs", tuple(out))

    # -- basic structure -----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> int:
        if self.is_zero:
            raise UsageError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def constant(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def __call__(self, x):
        acc = 0 if isinstance(x, int) else Q0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(f"{c}*X^{i}" if i else str(c))
        return " + ".join(parts)

    # -- ring operations -------------------------------------------------------

    def __add__(self, other: "IntPoly") -> "IntPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(tuple(
            (self.coeffs[i] if i < len(self.coeffs) else 0)
            + (other.coeffs[i] if i < len(other.coeffs) else 0)
            for i in range(n)))

    def __neg__(self) -> "IntPoly":
        return IntPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        if self.is_zero or other.is_zero:
            return IntPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(tuple(out))

    def derivative(self) -> "IntPoly":
        return IntPoly(tuple(i * c for i, c in enumerate(self.coeffs))[1:])

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, abs(c))
        return g

    def reverse(self) -> "IntPoly":
        """X^deg * p(1/X): coefficients reversed (trailing zeros of p drop)."""
        return IntPoly(tuple(reversed(self.coeffs)))

    def as_fractions(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c) for c in self.coeffs)

    def l2_norm_squared(self) -> int:
        return sum(c * c for c in self.coeffs)

    def length(self) -> int:
        return sum(abs(c) for c in self.coeffs)

    def divides(self, other: "IntPoly") -> bool:
        if self.is_zero:
            return other.is_zero
        _, rem = q_divmod(other.as_fractions(), self.as_fractions())
        return not rem

    def to_json(self) -> list[int]:
        return list(self.coeffs)

    @staticmethod
    def from_json(obj) -> "IntPoly":
        return IntPoly(tuple(int(c) for c in obj))


def from_q_poly(f, clear=True) -> IntPoly:
    """Clear denominators of a rational polynomial into a primitive IntPoly."""
    f = q_trim(f)
    if not f:
        return IntPoly(())
    den = 1
    for c in f:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in f]
    if clear:
        g = 0
        for c in ints:
            g = gcd(g, abs(c))
        if g > 1:
            ints = [c // g for c in ints]
    return IntPoly(tuple(ints))


def canonical_form(p: IntPoly) -> IntPoly:
    """Divide out the content and normalize the leading coefficient sign."""
    if p.is_zero:
        raise UsageError("zero polynomial has no canonical form")
    g = p.content()
    sign = 1 if p.lead > 0 else -1
    return IntPoly(tuple(c * sign // g for c in p.coeffs))


def is_canonical(p: IntPoly) -> bool:
    return (not p.is_zero) and p.lead > 0 and p.content() == 1


def poly_gcd(p: IntPoly, q: IntPoly) -> IntPoly:
    """Primitive gcd over the integers (sign-normalized)."""
    if p.is_zero:
        return canonical_form(q) if not q.is_zero else IntPoly(())
    if q.is_zero:
        return canonical_form(p)
    g = q_gcd(p.as_fractions(), q.as_fractions())
    return from_q_poly(g)


def squarefree_part(p: IntPoly) -> IntPoly:
    if p.is_zero:
        raise UsageError("squarefree part of zero")
    if p.degree == 0:
        return IntPoly((1,))
    g = poly_gcd(p, p.derivative())
    quot, rem = q_divmod(p.as_fractions(), g.as_fractions())
    assert not rem
    return canonical_form(from_q_poly(quot))


def is_squarefree(p: IntPoly) -> bool:
    return p.degree >= 1 and poly_gcd(p, p.derivative()).degree == 0


def yun_squarefree_decomposition(p: IntPoly) -> list[tuple[IntPoly, int]]:
    """Yun's algorithm: p = const * prod f_i^i with f_i squarefree, coprime."""
    if p.is_zero:
        raise UsageError("decomposition of zero")
    if p.degree == 0:
        return []
    f = canonical_form(p).as_fractions()
    df = q_derivative(f)
    a = q_gcd(f, df)
    b = q_divmod(f, a)[0]
    c = q_divmod(df, a)[0]
    d = q_sub(c, q_derivative(b))
    out = []
    i = 1
    while q_degree(b) > 0:
        a = q_gcd(b, d)
        if q_degree(a) > 0:
            out.append((canonical_form(from_q_poly(a)), i))
        b = q_divmod(b, a)[0]
        c = q_divmod(d, a)[0]
        d = q_sub(c, q_derivative(b))
        i += 1
    return out


# ---------------------------------------------------------------------------
# Sturm sequences and real roots
# ---------------------------------------------------------------------------

def _sturm_chain(p: IntPoly):
    chain = [p.as_fractions(), q_derivative(p.as_fractions())]
    while chain[-1]:
        rem = q_divmod(chain[-2], chain[-1])[1]
        if not rem:
            break
        chain.append(q_neg(rem))
    return [c for c in chain if c]


def _sign_variations(chain, x: Fraction) -> int:
    signs = []
    for f in chain:
        v = q_eval(f, x)
        if v:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def cauchy_bound_pow2(p: IntPoly) -> Fraction:
    """Power of two strictly exceeding the modulus of every root."""
    if p.degree < 1:
        raise UsageError("bound of a constant polynomial")
    lead = abs(p.lead)
    m = max(abs(c) for c in p.coeffs[:-1]) if p.degree else 0
    bound = 1 + Fraction(m, lead)
    b = Fraction(2)
    while b <= bound:
        b *= 2
    return b


def _real_root_brackets(p: IntPoly) -> list[tuple[Fraction, Fraction]]:
    """Disjoint open brackets (a, b), each containing exactly one real root,
    with p nonzero at every endpoint.  Requires p squarefree."""
    chain = _sturm_chain(p)
    bound = cauchy_bound_pow2(p)

    def pick_safe(lo, hi):
        # a point strictly inside (lo, hi) where p does not vanish
        step = (hi - lo) / 2
        x = lo + step
        while p(x) == 0:
            step /= 2
            x = lo + step
        return x

    out = []
    lo, hi = -bound, bound
    # endpoints exceed the root bound, hence are safe
    stack = [(lo, hi, _sign_variations(chain, lo), _sign_variations(chain, hi))]
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb
        if n <= 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        m = pick_safe(a, b)
        vm = _sign_variations(chain, m)
        stack.append((a, m, va, vm))
        stack.append((m, b, vm, vb))
    out.sort()
    return out


def _refine_real_bracket(p: IntPoly, lo: Fraction, hi: Fraction,
                         width: Fraction) -> tuple[Fraction, Fraction]:
    """Shrink a single-root bracket to the requested width by sign bisection.
    An exact rational root collapses to a point bracket."""
    flo = p(lo)
    if flo == 0:
        return lo, lo
    sign_lo = flo > 0
    while hi - lo > width:
        m = (lo + hi) / 2
        fm = p(m)
        if fm == 0:
            return m, m
        if (fm > 0) == sign_lo:
            lo = m
        else:
            hi = m
    return lo, hi


def count_real_roots(p: IntPoly) -> int:
    chain = _sturm_chain(p)
    bound = cauchy_bound_pow2(p)
    return _sign_variations(chain, -bound) - _sign_variations(chain, bound)


def real_root_intervals(p: IntPoly, width: Fraction) -> list[Interval]:
    """Isolating intervals for every real root of a squarefree p."""
    if not is_squarefree(p):
        raise UsageError("real_root_intervals requires a squarefree polynomial")
    out = []
    for lo, hi in _real_root_brackets(p):
        a, b = _refine_real_bracket(p, lo, hi, width)
        out.append(Interval(a, b))
    return out


# ---------------------------------------------------------------------------
# complex approximations (Durand-Kerner) and Krawczyk certification
# ---------------------------------------------------------------------------

def _dk_float(p: IntPoly, iters: int, rotate: float) -> list[complex] | None:
    d = p.degree
    lead = float(p.lead)
    try:
        cs = [c / lead for c in p.coeffs]
    except OverflowError:
        return None
    if any(abs(c) > 1e100 for c in cs):
        return None
    radius = 1.0 + max(abs(c) for c in cs[:-1])
    zs = [radius ** 0.5 * cmath.exp(2j * cmath.pi * (k + rotate) / d)
          for k in range(d)]

    def ev(z):
        acc = 0j
        for c in reversed(cs):
            acc = acc * z + c
        return acc

    for _ in range(iters):
        moved = 0.0
        for k in range(d):
            num = ev(zs[k])
            den = 1.0 + 0j
            for j in range(d):
                if j != k:
                    den *= zs[k] - zs[j]
            if den == 0:
                return None
            delta = num / den
            zs[k] -= delta
            moved = max(moved, abs(delta))
        if moved < 1e-14:
            break
    return zs


def _cfrac_mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _cfrac_eval(coeffs, z):
    acc = (Q0, Q0)
    for c in reversed(coeffs):
        acc = _cfrac_mul(acc, z)
        acc = (acc[0] + c, acc[1])
    return acc


def _cfrac_div(a, b):
    n2 = b[0] * b[0] + b[1] * b[1]
    if n2 == 0:
        raise ZeroDivisionError
    return ((a[0] * b[0] + a[1] * b[1]) / n2, (a[1] * b[0] - a[0] * b[1]) / n2)


def _round_frac(x: Fraction, prec: int) -> Fraction:
    scale = 1 << prec
    return Fraction(round(x * scale), scale)


def _dk_dyadic(p: IntPoly, prec: int, iters: int, rotate: Fraction) -> list[tuple[Fraction, Fraction]]:
    """Durand-Kerner over dyadic complex numbers; used when floats fail."""
    d = p.degree
    coeffs = p.as_fractions()
    radius = cauchy_bound_pow2(p)
    # crude roots of unity at the working precision via float seeds
    zs = []
    for k in range(d):
        ang = 2 * cmath.pi * (k + float(rotate)) / d
        zs.append((_round_frac(Fraction(radius) * Fraction.from_float(cmath.cos(ang)), prec),
                   _round_frac(Fraction(radius) * Fraction.from_float(cmath.sin(ang)), prec)))
    for _ in range(iters):
        for k in range(d):
            num = _cfrac_eval(coeffs, zs[k])
            den = (Fraction(p.lead), Q0)
            for j in range(d):
                if j != k:
                    den = _cfrac_mul(den, (zs[k][0] - zs[j][0], zs[k][1] - zs[j][1]))
            try:
                delta = _cfrac_div(num, den)
            except ZeroDivisionError:
                continue
            zs[k] = (_round_frac(zs[k][0] - delta[0], prec),
                     _round_frac(zs[k][1] - delta[1], prec))
    return zs


def _box_eval(coeffs, box: ComplexBox) -> ComplexBox:
    acc = ComplexBox.point(0)
    for c in reversed(coeffs):
        acc = acc * box + ComplexBox.point(c)
    return acc


def _krawczyk_step(p: IntPoly, dp: IntPoly, box: ComplexBox,
                   prec: int) -> ComplexBox | None:
    """One Krawczyk contraction K(X) = m - p(m)/p'(m) + (1 - p'(X)/p'(m))(X - m).
    Returns the contracted image if it lands strictly inside X, else None."""
    mr, mi = box.mid()
    m = (mr, mi)
    pm = _cfrac_eval(p.as_fractions(), m)
    dpm = _cfrac_eval(dp.as_fractions(), m)
    if dpm == (Q0, Q0):
        return None
    try:
        corr = _cfrac_div(pm, dpm)
        inv_dpm = _cfrac_div((Q1, Q0), dpm)
    except ZeroDivisionError:
        return None
    dpx = _box_eval(dp.as_fractions(), box)
    q = dpx * ComplexBox.point(inv_dpm[0], inv_dpm[1])
    one = ComplexBox.point(1)
    center = ComplexBox.point(mr - corr[0], mi - corr[1])
    shifted = box - ComplexBox.point(mr, mi)
    image = (center + (one - q) * shifted).outward(prec)
    if box.strictly_contains(image):
        return image.intersect(box)
    return None


def _certify_near(p: IntPoly, dp: IntPoly, zr: Fraction, zi: Fraction,
                  prec: int) -> ComplexBox | None:
    """Try to certify a unique root near (zr, zi) with growing trial boxes."""
    m = (_round_frac(zr, prec), _round_frac(zi, prec))
    pm = _cfrac_eval(p.as_fractions(), m)
    dpm = _cfrac_eval(dp.as_fractions(), m)
    if dpm == (Q0, Q0):
        return None
    try:
        corr = _cfrac_div(pm, dpm)
    except ZeroDivisionError:
        return None
    base = max(abs(corr[0]), abs(corr[1]), Fraction(1, 1 << prec))
    for mult in (4, 16, 64):
        half = base * mult
        box = ComplexBox(Interval(m[0] - half, m[0] + half),
                         Interval(m[1] - half, m[1] + half))
        got = _krawczyk_step(p, dp, box, prec + 8)
        if got is not None:
            return got
    return None


def _boxes_pairwise_disjoint(boxes) -> bool:
    for i in range(len(boxes)):
        for j in range(i + 1, len(boxes)):
            if boxes[i].intersects(boxes[j]):
                return False
    return True


class RootSystem:
    """Certified root isolation for one squarefree integer polynomial.

    Holds one refinable box per root; real roots live on the axis with a
    zero-width imaginary part, non-real roots come in mirrored conjugate
    pairs whose boxes exclude the axis.  Root identity is stable: position
    in the canonical (Re, Im) lexicographic order is computed once, after
    the coordinate intervals of distinct roots separate, and cached.
    """

    MAX_PREC = 1 << 16

    def __init__(self, p: IntPoly):
        if p.degree < 1:
            raise UsageError("root isolation needs degree >= 1")
        if not is_squarefree(p):
            raise UsageError("root isolation requires a squarefree polynomial")
        self.poly = p
        self.dpoly = p.derivative()
        self._real: list[tuple[Fraction, Fraction]] = []
        self._upper: list[ComplexBox] = []
        self._order: list[tuple[str, int]] | None = None
        self._isolate()

    # -- initial isolation ---------------------------------------------------

    def _isolate(self):
        p, dp = self.poly, self.dpoly
        d = p.degree
        if d == 1:
            r = Fraction(-p.coeffs[0], p.coeffs[1])
            self._real = [(r, r)]
            return
        self._real = _real_root_brackets(p)
        n_real = len(self._real)
        n_pairs, rem = divmod(d - n_real, 2)
        if rem:
            raise PrecisionExhausted("real root count inconsistent")
        if n_pairs == 0:
            return
        attempts = [("float", 400, 0.27), ("float", 4000, 0.61),
                    ("dyadic", 128, 0.27), ("dyadic", 256, 0.43)]
        for kind, arg, rot in attempts:
            if kind == "float":
                zs = _dk_float(p, arg, rot)
                if zs is None:
                    continue
                approx = [(Fraction.from_float(z.real), Fraction.from_float(z.imag))
                          for z in zs]
                prec = 64
            else:
                approx = _dk_dyadic(p, arg, 300, Fraction(rot).limit_denominator(64))
                prec = arg
            boxes = []
            for zr, zi in approx:
                if zi <= 0:
                    continue
                got = _certify_near(p, dp, zr, zi, prec)
                if got is not None and got.im.lo > 0:
                    boxes.append(got)
            # shrink, then merge boxes that still overlap (same root twice)
            for _ in range(6):
                boxes = [self._refine_box(b, b.width / 16, prec + 64) for b in boxes]
                merged = []
                for b in boxes:
                    hit = next((i for i, m in enumerate(merged) if m.intersects(b)), None)
                    if hit is None:
                        merged.append(b)
                    else:
                        merged[hit] = merged[hit].intersect(b)
                boxes = merged
                if len(boxes) <= n_pairs and _boxes_pairwise_disjoint(boxes):
                    break
            if len(boxes) == n_pairs and _boxes_pairwise_disjoint(boxes):
                self._upper = sorted(boxes, key=lambda b: (b.re.lo, b.im.lo))
                return
        raise PrecisionExhausted(
            f"could not certify the complex roots of {p}")

    def _refine_box(self, box: ComplexBox, width: Fraction, prec: int) -> ComplexBox:
        guard = 0
        while box.width > width:
            step = _krawczyk_step(self.poly, self.dpoly, box, prec)
            if step is None:
                prec *= 2
                if prec > self.MAX_PREC:
                    raise PrecisionExhausted("Krawczyk refinement stalled")
                mr, mi = box.mid()
                redo = _certify_near(self.poly, self.dpoly, mr, mi, prec)
                if redo is not None and redo.intersects(box):
                    box = redo.intersect(box)
                continue
            if step.width >= box.width * Fraction(7, 8):
                prec *= 2
                if prec > self.MAX_PREC:
                    raise PrecisionExhausted("Krawczyk refinement stalled")
            box = step
            guard += 1
            if guard > 4000:
                raise PrecisionExhausted("Krawczyk refinement did not converge")
        return box

    # -- refinement and canonical order ---------------------------------------

    def refine(self, width):
        width = Fraction(width)
        if width <= 0:
            raise UsageError("width must be positive")
        prec = max(64, (1 / width).numerator.bit_length() + 32)
        self._real = [
            _refine_real_bracket(self.poly, lo, hi, width)
            for lo, hi in self._real
        ]
        self._upper = [self._refine_box(b, width, prec) for b in self._upper]

    def _entries(self) -> list[tuple[tuple[str, int], Interval, Interval]]:
        out = []
        for i, (lo, hi) in enumerate(self._real):
            out.append((("r", i), Interval(lo, hi), Interval.point(0)))
        for i, b in enumerate(self._upper):
            out.append((("cl", i), b.re, -b.im))
            out.append((("cu", i), b.re, b.im))
        return out

    def _compute_order(self):
        """Refine until every pair of roots separates in Re or in Im, then
        sort by (Re, Im).  Mirror pairs share Re exactly and order by the
        imaginary sign."""
        width = Fraction(1, 1 << 64)
        for _ in range(20):
            entries = self._entries()
            ok = True
            for i in range(len(entries)):
                for j in range(i + 1, len(entries)):
                    _, re1, im1 = entries[i]
                    _, re2, im2 = entries[j]
                    if re1.intersects(re2) and im1.intersects(im2):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                break
            self.refine(width)
            width /= 1 << 32
        else:
            raise PrecisionExhausted("roots did not separate for ordering")

        import functools

        def cmp(e1, e2):
            _, re1, im1 = e1
            _, re2, im2 = e2
            if not re1.intersects(re2):
                return -1 if re1.hi < re2.lo else 1
            if not im1.intersects(im2):
                return -1 if im1.hi < im2.lo else 1
            return 0

        ordered = sorted(self._entries(), key=functools.cmp_to_key(cmp))
        self._order = [e[0] for e in ordered]

    def boxes(self, width) -> list[ComplexBox]:
        """All root boxes of width <= width, conjugate-closed, in the cached
        canonical (Re, Im) lexicographic order."""
        self.refine(width)
        if self._order is None:
            self._compute_order()
        out = []
        for tag, i in self._order:
            if tag == "r":
                lo, hi = self._real[i]
                out.append(ComplexBox(Interval(lo, hi), Interval.point(0)))
            elif tag == "cu":
                out.append(self._upper[i])
            else:
                out.append(self._upper[i].conj())
        return out

    def real_intervals(self, width) -> list[Interval]:
        self.refine(width)
        return [Interval(lo, hi) for lo, hi in self._real]


_ROOT_SYSTEMS: dict[tuple[int, ...], RootSystem] = {}


def root_system(p: IntPoly) -> RootSystem:
    """Memoized isolation state per squarefree polynomial."""
    key = p.coeffs
    sys = _ROOT_SYSTEMS.get(key)
    if sys is None:
        sys = RootSystem(p)
        if len(_ROOT_SYSTEMS) > 4096:
            _ROOT_SYSTEMS.clear()
        _ROOT_SYSTEMS[key] = sys
    return sys


def isolate_roots(p: IntPoly, width) -> list[ComplexBox]:
    """Certified pairwise-disjoint root boxes of a squarefree polynomial,
    each containing exactly one root, each of width <= width, closed under
    conjugation."""
    width = Fraction(width)
    if width <= 0:
        raise UsageError("width must be positive")
    if p.degree < 1:
        raise UsageError("root isolation needs degree >= 1")
    if not is_squarefree(p):
        raise UsageError("isolate_roots requires a squarefree polynomial")
    return root_system(p).boxes(width)


# ---------------------------------------------------------------------------
# irreducibility and factorization over the rationals
# ---------------------------------------------------------------------------

def _divisors(n: int, cap: int = 200000) -> list[int]:
    n = abs(n)
    if n == 0:
        raise UsageError("divisors of zero")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
        if len(small) + len(large) > cap:
            raise PrecisionExhausted("divisor enumeration exceeded cap")
    return small + large[::-1]


def rational_roots(p: IntPoly) -> list[Fraction]:
    """All rational roots of p (each reported once; p need not be squarefree)."""
    if p.is_zero:
        raise UsageError("rational roots of zero")
    roots = []
    coeffs = list(p.coeffs)
    shift = 0
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        shift += 1
    if shift:
        roots.append(Q0)
    if len(coeffs) <= 1:
        return roots
    q = IntPoly(tuple(coeffs))
    for num in _divisors(q.constant):
        for den in _divisors(q.lead):
            for s in (1, -1):
                cand = Fraction(s * num, den)
                if cand not in roots and q(cand) == 0:
                    roots.append(cand)
    return sorted(roots)


def mignotte_bound(p: IntPoly, factor_degree: int) -> int:
    """Coefficient bound for any degree-k factor: 2^k * ||p||_2 (ceiling)."""
    l2 = sqrt_upper(Fraction(p.l2_norm_squared()), 8)
    b = (1 << factor_degree) * l2
    return int(b) + 1


def _try_quadratic_factors(p: IntPoly):
    """Find an integer quadratic factor of a quartic by divisor pairing.

    Writing p = (a X^2 + b X + c)(dd X^2 + e X + f), the leading and
    constant coefficients pin (a, dd) and (c, f) to divisor pairs; the X^3
    and X^1 coefficient equations are then linear in (b, e) and solved
    exactly, with the X^2 equation as the final filter.
    """
    if p.degree != 4:
        return None
    p0, p1, p2, p3, p4 = p.coeffs
    for a in _divisors(p4):
        dd = p4 // a
        for c_abs in _divisors(p0):
            for c in (c_abs, -c_abs):
                f = p0 // c
                # dd*b + a*e = p3 ;  f*b + c*e = p1
                det = dd * c - a * f
                if det == 0:
                    bound = mignotte_bound(p, 2)
                    for b in range(-bound, bound + 1):
                        num = p3 - b * dd
                        if num % a:
                            continue
                        e = num // a
                        if a * f + b * e + c * dd == p2 and b * f + c * e == p1:
                            g = IntPoly((c, b, a))
                            if g.divides(p):
                                return g
                    continue
                b_num = p3 * c - a * p1
                e_num = dd * p1 - p3 * f
                if b_num % det or e_num % det:
                    continue
                b = b_num // det
                e = e_num // det
                if a * f + b * e + c * dd == p2:
                    g = IntPoly((c, b, a))
                    if g.divides(p):
                        return g
    return None


def _search_factor(p: IntPoly, k: int, cap: int = 4_000_000):
    """Exhaustive degree-k factor search: leading and constant coefficients
    ranging over divisors, interior coefficients over the Mignotte box."""
    bound = mignotte_bound(p, k)
    lead_divs = [d for d in _divisors(p.lead)]
    const_divs = _divisors(p.constant)
    interior = k - 1
    span = 2 * bound + 1
    total = len(lead_divs) * len(const_divs) * 2 * (span ** interior)
    if total > cap:
        raise PrecisionExhausted(
            f"factor search space {total} exceeds cap at degree {k}")

    def rec(fixed, remaining):
        if remaining == 0:
            for lead in lead_divs:
                g = IntPoly(tuple(fixed) + (lead,))
                if g.degree == k and g.content() == 1 and g.divides(p):
                    return g
            return None
        for c in range(-bound, bound + 1):
            got = rec(fixed + [c], remaining - 1)
            if got is not None:
                return got
        return None

    for c0_abs in const_divs:
        for c0 in (c0_abs, -c0_abs):
            got = rec([c0], interior)
            if got is not None:
                return got
    return None


def is_irreducible(p: IntPoly) -> tuple[bool, IntPoly | None]:
    """Decide irreducibility over the rationals; on False return a
    nontrivial factor witness (canonical form)."""
    if p.is_zero or p.degree < 1:
        raise UsageError("irreducibility is decided for degree >= 1 only")
    if not is_canonical(p):
        raise UsageError("is_irreducible expects a canonical polynomial")
    d = p.degree
    if d == 1:
        return True, None
    if p.coeffs[0] == 0:
        return False, IntPoly((0, 1))
    g = poly_gcd(p, p.derivative())
    if 0 < g.degree < d:
        return False, canonical_form(g)
    for r in rational_roots(p):
        return False, canonical_form(IntPoly((-r.numerator, r.denominator)))
    if d <= 3:
        return True, None
    if d == 4:
        got = _try_quadratic_factors(p)
        if got is not None:
            return False, canonical_form(got)
        return True, None
    for k in range(2, d // 2 + 1):
        got = _search_factor(p, k)
        if got is not None:
            return False, canonical_form(got)
    return True, None


def factor_into_irreducibles(p: IntPoly) -> list[tuple[IntPoly, int]]:
    """Full factorization into canonical irreducibles with multiplicities."""
    out: dict[tuple[int, ...], int] = {}
    for sqfree, mult in yun_squarefree_decomposition(p):
        stack = [sqfree]
        while stack:
            f = stack.pop()
            ok, witness = is_irreducible(f)
            if ok:
                out[f.coeffs] = out.get(f.coeffs, 0) + mult
            else:
                quot, rem = q_divmod(f.as_fractions(), witness.as_fractions())
                assert not rem
                stack.append(witness)
                stack.append(canonical_form(from_q_poly(quot)))
    return [(IntPoly(c), m) for c, m in sorted(out.items(), key=lambda t: (len(t[0]), t[0]))]


# ---------------------------------------------------------------------------
# algebraic numbers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraicNumber:
    """An algebraic number: canonical irreducible minimal polynomial plus a
    certified box isolating exactly one of its roots.

    `root_index` is the position of that root in the canonical (Re, Im)
    lexicographic ordering of all roots, which makes equality and hashing
    exact and cheap.
    """

    minpoly: IntPoly
    root_index: int
    box: ComplexBox

    # -- constructors -----------------------------------------------------------

    @staticmethod
    def of_rational(x) -> "AlgebraicNumber":
        x = Fraction(x)
        poly = canonical_form(IntPoly((-x.numerator, x.denominator)))
        return AlgebraicNumber(poly, 0, ComplexBox.point(x))

    @staticmethod
    def roots_of(p: IntPoly, width=Fraction(1, 1 << 32)) -> tuple["AlgebraicNumber", ...]:
        """All roots of a canonical irreducible polynomial, canonical order."""
        p = canonical_form(p)
        ok, _ = is_irreducible(p)
        if not ok:
            raise UsageError(f"{p} is not irreducible")
        if p.degree == 1:
            return (AlgebraicNumber.of_rational(Fraction(-p.coeffs[0], p.coeffs[1])),)
        boxes = isolate_roots(p, width)
        return tuple(AlgebraicNumber(p, i, b) for i, b in enumerate(boxes))

    @staticmethod
    def from_minpoly_and_box(p: IntPoly, box: ComplexBox) -> "AlgebraicNumber":
        """Reconstruct from a (minpoly, isolating box) pair, e.g. deserialized."""
        p = canonical_form(p)
        if p.degree == 1:
            a = AlgebraicNumber.of_rational(Fraction(-p.coeffs[0], p.coeffs[1]))
            if not box.contains(a.as_fraction()):
                raise UsageError("box does not contain the rational root")
            return a
        width = box.width if box.width > 0 else Fraction(1, 1 << 32)
        for _ in range(8):
            boxes = isolate_roots(p, width)
            hits = [i for i, b in enumerate(boxes) if b.intersects(box)]
            if len(hits) == 1:
                return AlgebraicNumber(p, hits[0], boxes[hits[0]])
            width /= 1 << 16
        raise UsageError("box does not isolate a single root of the minimal polynomial")

    # -- structure ---------------------------------------------------------------

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    @property
    def is_real(self) -> bool:
        return self.box.im.is_point() and self.box.im.lo == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise UsageError("not a rational number")
        return Fraction(-self.minpoly.coeffs[0], self.minpoly.coeffs[1])

    def enclosure(self, width) -> ComplexBox:
        """A certified box of width <= width around this root."""
        width = Fraction(width)
        if self.is_rational:
            return ComplexBox.point(self.as_fraction())
        return isolate_roots(self.minpoly, width)[self.root_index]

    def conjugates(self) -> tuple["AlgebraicNumber", ...]:
        return AlgebraicNumber.roots_of(self.minpoly)

    def conjugate(self) -> "AlgebraicNumber":
        """The complex conjugate (another root of the same minimal polynomial)."""
        if self.is_real:
            return self
        boxes = isolate_roots(self.minpoly, self.box.width)
        mirror = self.box.conj()
        hits = [i for i, b in enumerate(boxes) if b.intersects(mirror)]
        if len(hits) != 1:
            boxes = isolate_roots(self.minpoly, self.box.width / (1 << 16))
            mirror = boxes[self.root_index].conj()
            hits = [i for i, b in enumerate(boxes) if b.intersects(mirror)]
        return AlgebraicNumber(self.minpoly, hits[0], boxes[hits[0]])

    def sort_key(self):
        return (self.degree, self.minpoly.coeffs, self.root_index)

    def __eq__(self, other):
        return (isinstance(other, AlgebraicNumber)
                and self.minpoly.coeffs == other.minpoly.coeffs
                and self.root_index == other.root_index)

    def __hash__(self):
        return hash((self.minpoly.coeffs, self.root_index))

    def __str__(self):
        if self.is_rational:
            return str(self.as_fraction())
        return f"root #{self.root_index} of {self.minpoly}"

    def to_json(self) -> dict:
        return {"minpoly": self.minpoly.to_json(), "root": self.box.to_json()}

    @staticmethod
    def from_json(obj) -> "AlgebraicNumber":
        return AlgebraicNumber.from_minpoly_and_box(
            IntPoly.from_json(obj["minpoly"]), ComplexBox.from_json(obj["root"]))


# ---------------------------------------------------------------------------
# number field elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NumberFieldElement:
    """g(alpha) represented by a rational polynomial reduced mod minpoly(alpha)."""

    base: AlgebraicNumber
    repr_coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        red = q_divmod(q_trim(self.repr_coeffs), self.base.minpoly.as_fractions())[1]
        object.__setattr__(self, "repr_coeffs", red)

    # -- ring operations -----------------------------------------------------

    def _wrap(self, coeffs) -> "NumberFieldElement":
        return NumberFieldElement(self.base, coeffs)

    def __add__(self, other):
        o = self._coerce(other)
        return self._wrap(q_add(self.repr_coeffs, o.repr_coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        return self._wrap(q_sub(self.repr_coeffs, o.repr_coeffs))

    def __mul__(self, other):
        o = self._coerce(other)
        return self._wrap(q_mul(self.repr_coeffs, o.repr_coeffs))

    __radd__ = __add__
    __rmul__ = __mul__

    def _coerce(self, other) -> "NumberFieldElement":
        if isinstance(other, NumberFieldElement):
            if other.base != self.base:
                raise UsageError("elements of different fields")
            return other
        return NumberFieldElement(self.base, (Fraction(other),))

    def __pow__(self, n: int) -> "NumberFieldElement":
        if n < 0:
            return (self ** (-n)).inverse()
        out = NumberFieldElement(self.base, (Q1,))
        acc = self
        while n:
            if n & 1:
                out = out * acc
            acc = acc * acc
            n >>= 1
        return out

    def inverse(self) -> "NumberFieldElement":
        if self.is_zero:
            raise UsageError("inverse of zero")
        # extended Euclid: u*repr + v*minpoly = gcd = const
        a, b = q_trim(self.repr_coeffs), self.base.minpoly.as_fractions()
        u0, u1 = (Q1,), ()
        while b:
            quot, rem = q_divmod(a, b)
            a, b = b, rem
            u0, u1 = u1, q_sub(u0, q_mul(quot, u1))
        if q_degree(a) != 0:
            raise UsageError("non-invertible element (minpoly not irreducible?)")
        return self._wrap(q_scale(u0, 1 / a[0]))

    # -- queries ----------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.repr_coeffs

    @property
    def is_rational(self) -> bool:
        return len(self.repr_coeffs) <= 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise UsageError("element is not rational")
        return self.repr_coeffs[0] if self.repr_coeffs else Q0

    def enclosure(self, width) -> ComplexBox:
        """Certified box around the complex value of g(alpha)."""
        width = Fraction(width)
        if self.is_rational:
            return ComplexBox.point(self.as_fraction())
        base_width = width / (1 << 8)
        for _ in range(24):
            alpha_box = self.base.enclosure(base_width)
            val = ComplexBox.point(0)
            for c in reversed(self.repr_coeffs):
                val = val * alpha_box + ComplexBox.point(c)
            if val.width <= width:
                return val
            base_width /= 1 << 8
        raise PrecisionExhausted("element enclosure did not converge")

    def __eq__(self, other):
        if not isinstance(other, NumberFieldElement):
            try:
                return self.is_rational and self.as_fraction() == Fraction(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.base == other.base and self.repr_coeffs == other.repr_coeffs

    def __hash__(self):
        return hash((self.base, self.repr_coeffs))

    def __str__(self):
        return f"({' + '.join(f'{c}*a^{i}' if i else str(c) for i, c in enumerate(self.repr_coeffs)) or '0'}) over {self.base}"


def poly_eval_in_field(g, alpha: AlgebraicNumber) -> NumberFieldElement:
    """Exact evaluation of a rational-coefficient polynomial at alpha,
    reduced modulo the minimal polynomial."""
    coeffs = q_trim(g.as_fractions() if isinstance(g, IntPoly) else g)
    return NumberFieldElement(alpha, coeffs)


def _mul_matrix(elem: NumberFieldElement) -> list[list[Fraction]]:
    """Matrix of multiplication by elem in the power basis 1..alpha^(d-1)."""
    d = elem.base.degree
    cols = []
    for k in range(d):
        basis = (Q0,) * k + (Q1,)
        prod = q_divmod(q_mul(elem.repr_coeffs, basis),
                        elem.base.minpoly.as_fractions())[1]
        col = list(prod) + [Q0] * (d - len(prod))
        cols.append(col)
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def _char_poly_clean(mat) -> tuple[Fraction, ...]:
    """Characteristic polynomial of a rational matrix (Faddeev-LeVerrier)."""
    d = len(mat)

    def matmul(a, b):
        return [[sum(a[i][k] * b[k][j] for k in range(d)) for j in range(d)]
                for i in range(d)]

    def add_scalar(a, s):
        return [[a[i][j] + (s if i == j else Q0) for j in range(d)] for i in range(d)]

    coeffs = [Q0] * (d + 1)
    coeffs[d] = Q1
    work = [row[:] for row in mat]
    for k in range(1, d + 1):
        ck = -sum(work[i][i] for i in range(d)) / k
        coeffs[d - k] = ck
        if k < d:
            work = matmul(mat, add_scalar(work, ck))
    return tuple(coeffs)


def minpoly_of_element(elem: NumberFieldElement) -> IntPoly:
    """Canonical minimal polynomial of the complex number g(alpha).

    The characteristic polynomial of multiplication by g(alpha) vanishes at
    g(alpha); its right irreducible factor is selected by refining an
    enclosure of g(alpha) until exactly one factor's root boxes intersect it.
    """
    if elem.is_rational:
        x = elem.as_fraction()
        return canonical_form(IntPoly((-x.numerator, x.denominator)))
    char = _char_poly_clean(_mul_matrix(elem))
    candidate = from_q_poly(char)
    factors = [f for f, _ in factor_into_irreducibles(candidate)]
    if len(factors) == 1:
        return factors[0]
    width = Fraction(1, 1 << 48)
    for _ in range(16):
        box = elem.enclosure(width)
        hits = []
        for f in factors:
            if f.degree == 1:
                r = Fraction(-f.coeffs[0], f.coeffs[1])
                if box.contains(r):
                    hits.append(f)
            else:
                if any(b.intersects(box) for b in isolate_roots(f, width)):
                    hits.append(f)
        if len(hits) == 1:
            return hits[0]
        width /= 1 << 16
    raise PrecisionExhausted("could not separate resultant factors")


def element_resultant_poly(elem: NumberFieldElement) -> IntPoly:
    """The (scaled) eliminant Res_X(minpoly(X), den*(Y - g(X))) used as an
    independent cross-check for minpoly_of_element."""
    p = elem.base.minpoly.as_fractions()
    d = q_degree(p)
    # interpolate R(y0) = Res_X(p(X), y0 - g(X)) at d+1 rational nodes
    nodes = [Fraction(k) for k in range(d + 1)]
    vals = []
    for y0 in nodes:
        second = q_sub((y0,), q_trim(elem.repr_coeffs))
        vals.append(q_resultant(p, second))
    # Lagrange interpolation
    out = ()
    for i, yi in enumerate(vals):
        term = (Q1,)
        denom = Q1
        for j, xj in enumerate(nodes):
            if j != i:
                term = q_mul(term, (-xj, Q1))
                denom *= nodes[i] - xj
        out = q_add(out, q_scale(term, yi / denom))
    return from_q_poly(out)


# ---------------------------------------------------------------------------
# expressing one algebraic number inside another's field (desk scale)
# ---------------------------------------------------------------------------

def express_in_field(beta: AlgebraicNumber, alpha: AlgebraicNumber) -> NumberFieldElement | None:
    """A representation of beta as an element of Q(alpha), or None.

    Covers the desk-scale cases: rational beta; beta a root of alpha's own
    minimal polynomial (identified among the conjugates by certified boxes);
    and quadratic alpha with quadratic beta in the same field, solved from
    the two power-basis coefficient equations.
    """
    if beta.is_rational:
        return NumberFieldElement(alpha, (beta.as_fraction(),))
    if alpha.is_rational:
        return None
    d = alpha.degree
    if beta.minpoly.coeffs == alpha.minpoly.coeffs:
        if beta == alpha:
            return NumberFieldElement(alpha, (Q0, Q1))
        if d == 2:
            # the other root is trace - alpha
            trace = Fraction(-alpha.minpoly.coeffs[1], alpha.minpoly.coeffs[2])
            return NumberFieldElement(alpha, (trace, -Q1))
        return None
    if d != 2 or beta.degree != 2:
        return None
    # beta = u + v*alpha: match trace and the quadratic relation exactly
    a2, a1, a0 = alpha.minpoly.coeffs[2], alpha.minpoly.coeffs[1], alpha.minpoly.coeffs[0]
    b2, b1, b0 = beta.minpoly.coeffs[2], beta.minpoly.coeffs[1], beta.minpoly.coeffs[0]
    tr_a, nm_a = Fraction(-a1, a2), Fraction(a0, a2)   # alpha + alpha' and alpha*alpha'
    tr_b, nm_b = Fraction(-b1, b2), Fraction(b0, b2)
    # 2u + v*tr_a = tr_b ; u^2 + u*v*tr_a + v^2*nm_a = nm_b
    # substitute u = (tr_b - v*tr_a)/2 and solve the quadratic in v exactly
    A = nm_a - tr_a * tr_a / 4
    B = Q0
    C = tr_b * tr_b / 4 - nm_b
    # (expanded: A*v^2 + C = 0 after substitution since the v-linear term cancels)
    if A == 0:
        return None
    v2 = -C / A
    if v2 < 0:
        return None
    # exact rational square root test
    num_r, den_r = isqrt(v2.numerator), isqrt(v2.denominator)
    if num_r * num_r != v2.numerator or den_r * den_r != v2.denominator:
        return None
    for v in (Fraction(num_r, den_r), -Fraction(num_r, den_r)):
        u = (tr_b - v * tr_a) / 2
        cand = NumberFieldElement(alpha, (u, v))
        # confirm algebraically, then pick the root matching beta's box
        if _compose_eval(beta.minpoly, cand):
            continue
        if _boxes_match(cand, beta):
            return cand
    return None


def _compose_eval(p: IntPoly, elem: NumberFieldElement) -> tuple[Fraction, ...]:
    """Coefficients of p(elem) as a polynomial in alpha (reduced)."""
    acc = NumberFieldElement(elem.base, ())
    for c in reversed(p.coeffs):
        acc = acc * elem + NumberFieldElement(elem.base, (Fraction(c),))
    return acc.repr_coeffs


def _boxes_match(cand: NumberFieldElement, beta: AlgebraicNumber) -> bool:
    width = Fraction(1, 1 << 40)
    for _ in range(8):
        cbox = cand.enclosure(width)
        bbox = beta.enclosure(width)
        if not cbox.intersects(bbox):
            return False
        # both enclose single algebraic numbers; if they stay intersecting at
        # two successive refinements below the conjugate separation, they match
        sep_boxes = isolate_roots(beta.minpoly, width)
        inside = [b for b in sep_boxes if b.intersects(cbox)]
        if len(inside) == 1 and inside[0].intersects(bbox) and \
                sep_boxes.index(inside[0]) == beta.root_index:
            return True
        width /= 1 << 12
    return False
