"""Exact interval arithmetic with dyadic endpoints and certified elementary
function enclosures.

Everything here is built on `fractions.Fraction`, so the ring operations
(add, sub, mul) are exact; enclosures only widen at explicit outward
rounding steps and at series truncations whose tails are bounded by hand.
Endpoints produced by `outward(prec)` are dyadic rationals (integer
mantissa times a power of two), the representation used throughout for
serialized enclosures ("m*2^e" strings).

Transcendental functions (log, exp, and rational powers built from them)
return enclosures certified by alternating/geometric tail bounds:

  log m  = 2*atanh(v), v = (m-1)/(m+1), |v| <= 1/3 after scaling by 2^k;
           tail of 2*sum v^(2j+1)/(2j+1) bounded by geometric series.
  exp t  computed on |t| <= 0.4 after writing q = k*log2 + t; Taylor tail
           bounded by |t|^(n+1)/(n+1)! * 1/(1 - |t|/(n+2)).

The working precision is a free parameter; callers escalate it until a
comparison is decided.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .errors import UsageError

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# dyadic helpers
# ---------------------------------------------------------------------------

def is_dyadic(x: Fraction) -> bool:
    d = x.denominator
    return d & (d - 1) == 0


def dyadic_floor(x: Fraction, prec: int) -> Fraction:
    """Largest multiple of 2^-prec that is <= x."""
    scale = 1 << prec
    n, d = x.numerator * scale, x.denominator
    return Fraction(n // d, scale)


def dyadic_ceil(x: Fraction, prec: int) -> Fraction:
    scale = 1 << prec
    n, d = x.numerator * scale, x.denominator
    return Fraction(-((-n) // d), scale)


def dyadic_str(x: Fraction) -> str:
    """Render a dyadic rational as "m*2^e" with odd (or zero) mantissa."""
    if not is_dyadic(x):
        raise UsageError(f"not a dyadic rational: {x}")
    if x == 0:
        return "0*2^0"
    m = x.numerator
    e = -(x.denominator.bit_length() - 1)
    while m % 2 == 0:
        m //= 2
        e += 1
    return f"{m}*2^{e}"


def parse_dyadic(s: str) -> Fraction:
    try:
        m_str, e_str = s.split("*2^")
        m, e = int(m_str), int(e_str)
    except ValueError as exc:
        raise UsageError(f"malformed dyadic string {s!r}") from exc
    return Fraction(m) * Fraction(2) ** e if e >= 0 else Fraction(m, 1 << (-e))


# ---------------------------------------------------------------------------
# real intervals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise UsageError(f"inverted interval [{self.lo}, {self.hi}]")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def point(x) -> "Interval":
        x = Fraction(x)
        return Interval(x, x)

    @staticmethod
    def hull(*xs) -> "Interval":
        fs = [Fraction(x) for x in xs]
        return Interval(min(fs), max(fs))

    # -- queries -----------------------------------------------------------

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        x = Fraction(x)
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def strictly_contains(self, other: "Interval") -> bool:
        return self.lo < other.lo and other.hi < self.hi

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def is_point(self) -> bool:
        return self.lo == self.hi

    # certified order against a scalar or interval: True/False when decided,
    # None while the enclosures still overlap.
    def lt(self, other) -> bool | None:
        o = other if isinstance(other, Interval) else Interval.point(other)
        if self.hi < o.lo:
            return True
        if self.lo >= o.hi:
            return False
        return None

    def le(self, other) -> bool | None:
        o = other if isinstance(other, Interval) else Interval.point(other)
        if self.hi <= o.lo:
            return True
        if self.lo > o.hi:
            return False
        return None

    # -- arithmetic (exact) --------------------------------------------------

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __add__(self, other) -> "Interval":
        o = other if isinstance(other, Interval) else Interval.point(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    def __sub__(self, other) -> "Interval":
        return self + (-(other if isinstance(other, Interval) else Interval.point(other)))

    def __mul__(self, other) -> "Interval":
        o = other if isinstance(other, Interval) else Interval.point(other)
        cands = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(cands), max(cands))

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other) -> "Interval":
        return Interval.point(other) - self

    def square(self) -> "Interval":
        if self.lo >= 0:
            return Interval(self.lo * self.lo, self.hi * self.hi)
        if self.hi <= 0:
            return Interval(self.hi * self.hi, self.lo * self.lo)
        return Interval(ZERO, max(self.lo * self.lo, self.hi * self.hi))

    def abs(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(ZERO, max(-self.lo, self.hi))

    def recip(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise UsageError("reciprocal of an interval containing zero")
        return Interval(1 / self.hi, 1 / self.lo)

    def intersect(self, other: "Interval") -> "Interval":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            raise UsageError("empty intersection")
        return Interval(lo, hi)

    def union(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def outward(self, prec: int) -> "Interval":
        """Round endpoints outward onto the 2^-prec dyadic grid."""
        return Interval(dyadic_floor(self.lo, prec), dyadic_ceil(self.hi, prec))

    def scale_pow2(self, e: int) -> "Interval":
        f = Fraction(2) ** e if e >= 0 else Fraction(1, 1 << (-e))
        return Interval(self.lo * f, self.hi * f)

    def to_json(self) -> dict:
        iv = self if (is_dyadic(self.lo) and is_dyadic(self.hi)) else self.outward(256)
        return {"lo": dyadic_str(iv.lo), "hi": dyadic_str(iv.hi)}

    @staticmethod
    def from_json(obj: dict) -> "Interval":
        return Interval(parse_dyadic(obj["lo"]), parse_dyadic(obj["hi"]))


# ---------------------------------------------------------------------------
# complex rectangles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComplexBox:
    """Axis-aligned rectangle re x im in the complex plane."""

    re: Interval
    im: Interval

    @staticmethod
    def point(re, im=0) -> "ComplexBox":
        return ComplexBox(Interval.point(re), Interval.point(im))

    @property
    def width(self) -> Fraction:
        return max(self.re.width, self.im.width)

    def mid(self) -> tuple[Fraction, Fraction]:
        return self.re.mid, self.im.mid

    def conj(self) -> "ComplexBox":
        return ComplexBox(self.re, -self.im)

    def __add__(self, other: "ComplexBox") -> "ComplexBox":
        return ComplexBox(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ComplexBox") -> "ComplexBox":
        return ComplexBox(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "ComplexBox") -> "ComplexBox":
        return ComplexBox(self.re * other.re - self.im * other.im,
                          self.re * other.im + self.im * other.re)

    def abs2(self) -> Interval:
        return self.re.square() + self.im.square()

    def contains(self, re, im=0) -> bool:
        return self.re.contains(re) and self.im.contains(im)

    def contains_box(self, other: "ComplexBox") -> bool:
        return self.re.contains_interval(other.re) and self.im.contains_interval(other.im)

    def strictly_contains(self, other: "ComplexBox") -> bool:
        return self.re.strictly_contains(other.re) and self.im.strictly_contains(other.im)

    def intersects(self, other: "ComplexBox") -> bool:
        return self.re.intersects(other.re) and self.im.intersects(other.im)

    def intersect(self, other: "ComplexBox") -> "ComplexBox":
        return ComplexBox(self.re.intersect(other.re), self.im.intersect(other.im))

    def outward(self, prec: int) -> "ComplexBox":
        return ComplexBox(self.re.outward(prec), self.im.outward(prec))

    def recip(self) -> "ComplexBox":
        a2 = self.abs2()
        inv = a2.recip()
        conj = self.conj()
        return ComplexBox(conj.re * inv, conj.im * inv)

    def to_json(self) -> dict:
        re = self.re.to_json()
        im = self.im.to_json()
        return {"re": [re["lo"], re["hi"]], "im": [im["lo"], im["hi"]]}

    @staticmethod
    def from_json(obj: dict) -> "ComplexBox":
        re = Interval(parse_dyadic(obj["re"][0]), parse_dyadic(obj["re"][1]))
        im = Interval(parse_dyadic(obj["im"][0]), parse_dyadic(obj["im"][1]))
        return ComplexBox(re, im)


# ---------------------------------------------------------------------------
# certified square roots
# ---------------------------------------------------------------------------

def sqrt_lower(x: Fraction, prec: int) -> Fraction:
    """Dyadic lower bound on sqrt(x) with error < 2^-prec, x >= 0."""
    if x < 0:
        raise UsageError("sqrt of negative value")
    if x == 0:
        return ZERO
    scale = 1 << (2 * prec)
    v = (x.numerator * scale) // x.denominator
    return Fraction(isqrt(v), 1 << prec)


def sqrt_upper(x: Fraction, prec: int) -> Fraction:
    if x < 0:
        raise UsageError("sqrt of negative value")
    if x == 0:
        return ZERO
    scale = 1 << (2 * prec)
    v = -((-x.numerator * scale) // x.denominator)  # ceil(x * 4^prec)
    r = isqrt(v)
    if r * r < v:
        r += 1
    return Fraction(r, 1 << prec)


def sqrt_interval(iv: Interval, prec: int) -> Interval:
    if iv.lo < 0:
        raise UsageError("sqrt of an interval with negative lower endpoint")
    return Interval(sqrt_lower(iv.lo, prec), sqrt_upper(iv.hi, prec))


# ---------------------------------------------------------------------------
# certified log / exp
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def log2_enclosure(prec: int) -> Interval:
    """Enclosure of log 2 via 2*atanh(1/3) with a geometric tail bound."""
    u = Fraction(1, 3)
    u2 = u * u
    # term u^(2n+1)/(2n+1) < 9^-n; pick n so the tail clears 2^-(prec+8)
    n_terms = prec // 3 + 8
    s = ZERO
    upow = u
    for k in range(n_terms):
        s += upow / (2 * k + 1)
        upow *= u2
    tail = (upow / (2 * n_terms + 1)) / (1 - u2)
    return Interval(2 * s, 2 * (s + tail)).outward(prec + 4)


def _atanh_times2(v: Fraction, prec: int) -> Interval:
    """Enclosure of 2*atanh(v) = log((1+v)/(1-v)) for |v| <= 1/3."""
    if abs(v) > Fraction(1, 3):
        raise UsageError("argument reduction failed: |v| > 1/3")
    v2 = v * v
    s = ZERO
    vpow = v
    n_terms = prec // 3 + 8
    for k in range(n_terms):
        s += vpow / (2 * k + 1)
        vpow *= v2
    tail = (abs(vpow) / (2 * n_terms + 1)) / (1 - v2)
    return Interval(2 * (s - tail), 2 * (s + tail)).outward(prec + 4)


def log_enclosure(q: Fraction, prec: int = 64) -> Interval:
    """Certified enclosure of log q for rational q > 0.

    Scales q into [3/4, 3/2) by a power of two so the atanh argument
    v = (m-1)/(m+1) satisfies |v| <= 1/5 < 1/3.
    """
    q = Fraction(q)
    if q <= 0:
        raise UsageError("log of a non-positive rational")
    if q == 1:
        return Interval.point(0)
    k = 0
    m = q
    while m >= Fraction(3, 2):
        m /= 2
        k += 1
    while m < Fraction(3, 4):
        m *= 2
        k -= 1
    # round m to limited precision first so series arithmetic stays cheap;
    # the log of the rounding interval still encloses log q
    m_iv = Interval.point(m).outward(prec + 16)
    lo_part = _atanh_times2((m_iv.lo - 1) / (m_iv.lo + 1), prec)
    hi_part = _atanh_times2((m_iv.hi - 1) / (m_iv.hi + 1), prec)
    body = Interval(lo_part.lo, hi_part.hi)
    if k == 0:
        return body.outward(prec + 2)
    return (body + log2_enclosure(prec + k.bit_length() + 4) * k).outward(prec + 2)


def log_interval(iv: Interval, prec: int = 64) -> Interval:
    if iv.lo <= 0:
        raise UsageError("log of interval touching zero")
    return Interval(log_enclosure(iv.lo, prec).lo, log_enclosure(iv.hi, prec).hi)


def _exp_series(t: Fraction, prec: int) -> Interval:
    """Enclosure of exp(t) for |t| <= 2/5 via Taylor with explicit tail."""
    if abs(t) > Fraction(2, 5):
        raise UsageError("argument reduction failed: |t| > 2/5")
    n_terms = max(8, prec // 2 + 6)
    s = ONE
    term = ONE
    for k in range(1, n_terms + 1):
        term = term * t / k
        s += term
    # |tail| <= |t|^(n+1)/(n+1)! * 1/(1-|t|/(n+2))
    abs_term = abs(term) * abs(t) / (n_terms + 1)
    tail = abs_term / (1 - abs(t) / (n_terms + 2))
    return Interval(s - tail, s + tail).outward(prec + 4)


def exp_enclosure(q, prec: int = 64) -> Interval:
    """Certified enclosure of exp(q) for rational q or an interval argument.

    exp is monotone, so an interval argument maps to the hull of the two
    endpoint enclosures.
    """
    if isinstance(q, Interval):
        return Interval(exp_enclosure(q.lo, prec).lo, exp_enclosure(q.hi, prec).hi)
    q = Fraction(q)
    if q == 0:
        return Interval.point(1)
    ln2 = log2_enclosure(prec + 32)
    # choose k with |q - k*log2| small; mid(ln2) approximates log 2 well
    k = round(q / ln2.mid)
    t_iv = Interval.point(q) - ln2 * k
    t_iv = t_iv.outward(prec + 16)
    lo = _exp_series(t_iv.lo, prec).lo
    hi = _exp_series(t_iv.hi, prec).hi
    body = Interval(max(lo, ZERO), hi)
    # endpoints are already dyadic; scaling by 2^k is exact and keeps the
    # relative width, so no further rounding here
    return body.scale_pow2(k) if k else body


def pow_enclosure(base: Fraction, exponent: Fraction, prec: int = 64) -> Interval:
    """Enclosure of base**exponent = exp(exponent*log base), base > 0 rational.

    Returns an exact point interval when the power is itself rational
    (integer exponent, or an exact rational root detected for small
    denominators).
    """
    base = Fraction(base)
    exponent = Fraction(exponent)
    if base <= 0:
        raise UsageError("pow_enclosure requires a positive base")
    if exponent.denominator == 1:
        return Interval.point(base ** exponent.numerator)
    return exp_enclosure(log_enclosure(base, prec + 16) * exponent, prec)
