"""Certified Mahler measures and absolute logarithmic heights, with exact
threshold comparisons.

The Mahler measure of an integer polynomial is |lead| times the product of
max(1, |root|); the absolute logarithmic height of an algebraic number of
degree d is log(M)/d.  Measures are computed as certified enclosures from
root boxes, but every *decision* made here is exact:

* M = 1 is recognized by Kronecker's characterization (zero or a root of
  unity), decided by stripping cyclotomic factors with gcd's against
  X^m - 1; no enclosure is involved.
* h(alpha) <= N against a rational threshold N > 0 compares the algebraic
  number M against the transcendental e^(dN); the two can never be equal,
  so adaptive refinement terminates.
* Against a log-rational threshold N = log B, equality M = B^d is possible
  and is decided exactly through the subset-product polynomial, the monic
  integer polynomial whose roots are lead * prod_{i in S} r_i over all
  subsets S of the roots.  Its coefficients are pinned by interval
  arithmetic refined until each encloses a single integer.

Thresholds are carried in the unified form N = s + c*log(t) with rational
s, c >= 0 and rational t >= 1, which covers plain rationals (c = 0),
logs of rationals (s = 0, c = 1), and shifted scaled logs used by the
entire-function verifier.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PrecisionExhausted, UsageError
from .exactcore import (AlgebraicNumber, IntPoly, canonical_form, is_canonical,
                        isolate_roots, poly_gcd, q_divmod, real_root_intervals,
                        root_system, squarefree_part, yun_squarefree_decomposition)
from .intervals import (ComplexBox, Interval, exp_enclosure, log_enclosure,
                        log_interval, pow_enclosure, sqrt_interval)

RealEnclosure = Interval

Q0 = Fraction(0)
Q1 = Fraction(1)

# width ladder for adaptive refinement: fast common path first, then doubled
# precision retries, then exact tie resolution or a hard failure
WIDTH_LADDER = tuple(Fraction(1, 1 << b) for b in (53, 106, 212, 240))
HARD_CAP_BITS = 4096


def _integer_nth_root(n: int, k: int) -> int | None:
    """Exact k-th root of a nonnegative integer, or None."""
    if n < 0:
        return None
    if n in (0, 1) or k == 1:
        return n
    r = round(n ** (1.0 / k))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** k == n:
            return cand
    # float seed can be off for huge n; fall back to integer bisection
    lo, hi = 0, 1 << (n.bit_length() // k + 2)
    while lo <= hi:
        mid = (lo + hi) // 2
        v = mid ** k
        if v == n:
            return mid
        if v < n:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


def _rational_power_exact(t: Fraction, e: Fraction) -> Fraction | None:
    """t**e as an exact rational when that is possible, else None (t > 0)."""
    if e.denominator == 1:
        return t ** e.numerator
    num = _integer_nth_root(t.numerator, e.denominator)
    den = _integer_nth_root(t.denominator, e.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den) ** e.numerator


@dataclass(frozen=True)
class ExpValue:
    """e^(a) * t^(b) for rational a, b and rational t > 0: the exponential of
    an affine function of a threshold.  Exact when it is provably rational."""

    a: Fraction
    b: Fraction
    t: Fraction

    @property
    def exact(self) -> Fraction | None:
        if self.a != 0:
            return None     # e^a is transcendental for rational a != 0
        if self.b == 0 or self.t == 1:
            return Q1
        return _rational_power_exact(self.t, self.b)

    def enclosure(self, prec: int) -> Interval:
        ex = self.exact
        if ex is not None:
            return Interval.point(ex)
        out = Interval.point(1)
        if self.a != 0:
            out = out * exp_enclosure(self.a, prec)
        if self.b != 0 and self.t != 1:
            out = out * pow_enclosure(self.t, self.b, prec)
        return out


@dataclass(frozen=True)
class HeightBound:
    """A height threshold N = s + c*log(t), s >= 0, c >= 0, t >= 1."""

    s: Fraction
    c: Fraction
    t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "s", Fraction(self.s))
        object.__setattr__(self, "c", Fraction(self.c))
        object.__setattr__(self, "t", Fraction(self.t))
        if self.s < 0 or self.c < 0 or self.t < 1:
            raise UsageError("height bound requires s >= 0, c >= 0, t >= 1")

    def is_zero(self) -> bool:
        return self.s == 0 and (self.c == 0 or self.t == 1)

    def n_enclosure(self, prec: int = 64) -> Interval:
        out = Interval.point(self.s)
        if self.c and self.t != 1:
            out = out + log_enclosure(self.t, prec) * self.c
        return out

    def exp_of_scaled(self, mult, shift=0) -> ExpValue:
        """e^(mult*(N + shift)) as an ExpValue."""
        mult, shift = Fraction(mult), Fraction(shift)
        return ExpValue(mult * (self.s + shift), mult * self.c, self.t)

    def compare_n(self, x: Fraction, prec_cap: int = HARD_CAP_BITS) -> int:
        """Exact sign of (x - N); N = x resolves exactly (log t rational only
        for t = 1)."""
        x = Fraction(x)
        if self.c == 0 or self.t == 1:
            return (x > self.s) - (x < self.s)
        prec = 64
        while prec <= prec_cap:
            iv = self.n_enclosure(prec)
            if iv.lt(x) is True:
                return 1
            if iv.lt(x) is False and not iv.contains(x):
                return -1
            if iv.contains(x) and iv.is_point():
                return 0
            prec *= 2
        raise PrecisionExhausted("threshold comparison undecided", bits=prec_cap)


@dataclass(frozen=True)
class ThresholdSpec:
    """Public height bound: a plain rational N, or N = log(B) for rational B."""

    kind: str               # "rational" | "log_rational"
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))
        if self.kind == "rational":
            if self.value < 0:
                raise UsageError("rational threshold must be >= 0")
        elif self.kind == "log_rational":
            if self.value < 1:
                raise UsageError("log-rational threshold needs B >= 1")
        else:
            raise UsageError(f"unknown threshold kind {self.kind!r}")

    @staticmethod
    def rational(n) -> "ThresholdSpec":
        return ThresholdSpec("rational", Fraction(n))

    @staticmethod
    def log_rational(b) -> "ThresholdSpec":
        return ThresholdSpec("log_rational", Fraction(b))

    def bound(self) -> HeightBound:
        if self.kind == "rational":
            return HeightBound(self.value, Q0, Q1)
        return HeightBound(Q0, Q1, self.value)

    def __str__(self):
        if self.kind == "rational":
            return str(self.value)
        return f"log({self.value})"


def parse_threshold(text: str) -> ThresholdSpec:
    text = text.strip()
    if text.startswith("log(") and text.endswith(")"):
        return ThresholdSpec.log_rational(Fraction(text[4:-1]))
    try:
        return ThresholdSpec.rational(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse threshold {text!r}") from exc


# ---------------------------------------------------------------------------
# Kronecker: exact unit-measure recognition
# ---------------------------------------------------------------------------

def _x_pow_m_minus_1(m: int) -> IntPoly:
    return IntPoly((-1,) + (0,) * (m - 1) + (1,))


def _euler_phi_up_to(n: int) -> list[int]:
    phi = list(range(n + 1))
    for p in range(2, n + 1):
        if phi[p] == p:          # prime
            for k in range(p, n + 1, p):
                phi[k] -= phi[k] // p
    return phi


def _all_factors_cyclotomic(q: IntPoly) -> bool:
    """q canonical with q(0) != 0: True iff every irreducible factor of q is
    cyclotomic.  Strips gcd(q, X^m - 1) for every candidate order m; an
    order m contributes a factor of degree phi(m) <= deg q, and
    phi(m) >= sqrt(m/2) bounds the search."""
    if q.lead != 1:
        return False
    d = q.degree
    if d == 0:
        return True
    limit = 2 * d * d + 2
    phi = _euler_phi_up_to(limit)
    rest = q.as_fractions()
    for m in range(1, limit + 1):
        if phi[m] > d:
            continue
        from .exactcore import q_gcd
        g = q_gcd(rest, _x_pow_m_minus_1(m).as_fractions())
        if len(g) - 1 > 0:
            rest = q_divmod(rest, g)[0]
            if len(rest) - 1 == 0:
                return True
    return len(rest) - 1 == 0


def is_unit_measure(p: IntPoly) -> bool:
    """Exact test M(p) = 1 for a canonical irreducible p: true iff p = X
    (the number zero) or p is cyclotomic (a root of unity)."""
    if p.is_zero or not is_canonical(p):
        raise UsageError("is_unit_measure expects a canonical polynomial")
    if p.degree < 1:
        return False
    if p.coeffs == (0, 1):
        return True
    if p.constant == 0 or p.lead != 1:
        return False
    return _all_factors_cyclotomic(p)


# ---------------------------------------------------------------------------
# Mahler measure enclosures
# ---------------------------------------------------------------------------

def _measure_squared_factor(f: IntPoly, root_width: Fraction) -> Interval:
    """Enclosure of M(f)^2 for a canonical squarefree factor f via root boxes."""
    out = Interval.point(Fraction(f.lead * f.lead))
    for box in root_system(f).boxes(root_width):
        a2 = box.abs2()
        out = out * Interval(max(Q1, a2.lo), max(Q1, a2.hi))
    return out


def measure_squared(p: IntPoly, width: Fraction) -> Interval:
    """Certified enclosure of M(p)^2 with width <= width."""
    if p.is_zero:
        raise UsageError("Mahler measure of the zero polynomial")
    width = Fraction(width)
    if width <= 0:
        raise UsageError("width must be positive")
    if p.degree == 0:
        v = Fraction(p.constant * p.constant)
        return Interval.point(v)
    content = p.content()
    body = canonical_form(p)
    if body.degree == 1:
        m = max(abs(body.coeffs[0]), abs(body.coeffs[1]))
        return Interval.point(Fraction(content * content * m * m))
    factors = yun_squarefree_decomposition(body)
    # exact Kronecker path: every factor made of cyclotomics (and powers of X)
    exact_one = True
    for f, _ in factors:
        g = f
        while g.constant == 0 and g.degree >= 1:
            g = IntPoly(g.coeffs[1:])
        if g.degree > 0 and not _all_factors_cyclotomic(g):
            exact_one = False
            break
        if g.degree == 0 and abs(g.constant) != 1:
            exact_one = False
            break
    if exact_one and body.lead == 1:
        return Interval.point(Fraction(content * content))
    root_width = Fraction(1, 1 << 64)
    for _ in range(32):
        out = Interval.point(Fraction(content * content))
        for f, mult in factors:
            part = _measure_squared_factor(f, root_width)
            for _ in range(mult):
                out = out * part
        if out.width <= width:
            return out
        root_width /= 1 << 32
    raise PrecisionExhausted("Mahler measure enclosure did not reach width")


def mahler_measure(p: IntPoly, width) -> RealEnclosure:
    """Certified enclosure of M(p) = |lead| * prod max(1, |root|), width-bounded."""
    width = Fraction(width)
    if width <= 0:
        raise UsageError("width must be positive")
    if p.is_zero:
        raise UsageError("Mahler measure of the zero polynomial")
    if p.degree == 0:
        return Interval.point(Fraction(abs(p.constant)))
    prec = max(64, (1 / width).numerator.bit_length() + 8)
    m2 = measure_squared(p, width * width / 4 if width < 1 else width)
    out = sqrt_interval(m2, prec)
    guard = 0
    target2 = width * width / 4
    while out.width > width:
        guard += 1
        if guard > 24:
            raise PrecisionExhausted("Mahler enclosure refinement stalled")
        target2 /= 1 << 16
        prec += 32
        m2 = measure_squared(p, target2)
        out = sqrt_interval(m2, prec)
    return out


def height(alpha: AlgebraicNumber, width) -> RealEnclosure:
    """Certified enclosure of h(alpha) = log(M(alpha))/deg(alpha); always >= 0."""
    width = Fraction(width)
    if width <= 0:
        raise UsageError("width must be positive")
    d = alpha.degree
    if is_unit_measure(alpha.minpoly):
        return Interval.point(Q0)
    m_width = Fraction(1, 1 << 53)
    for _ in range(24):
        prec = max(64, (1 / width).numerator.bit_length() + 16,
                   (1 / m_width).numerator.bit_length() + 16)
        m2 = measure_squared(alpha.minpoly, m_width)
        iv = log_interval(m2, prec) * Fraction(1, 2 * d)
        iv = Interval(max(Q0, iv.lo), max(Q0, iv.hi))
        if iv.width <= width:
            return iv
        m_width /= 1 << 32
    raise PrecisionExhausted("height enclosure did not converge")


# ---------------------------------------------------------------------------
# exact unit-circle membership for a single root
# ---------------------------------------------------------------------------

def _match_root_index(p: IntPoly, target: ComplexBox, width: Fraction) -> int | None:
    boxes = isolate_roots(p, width)
    hits = [i for i, b in enumerate(boxes) if b.intersects(target)]
    return hits[0] if len(hits) == 1 else None


def root_on_unit_circle(alpha: AlgebraicNumber) -> bool:
    """Exact |alpha| = 1 test.

    A root on the unit circle satisfies 1/alpha = conj(alpha), which is again
    a root of the (real-coefficient) minimal polynomial; so the polynomial
    must be self-reciprocal, and 1/alpha must match the conjugate root.
    Both matches are certified by refining boxes.
    """
    if alpha.is_rational:
        return abs(alpha.as_fraction()) == 1
    p = alpha.minpoly
    if p.constant == 0:
        return False
    if canonical_form(p.reverse()) != p:
        return False
    conj_index = alpha.conjugate().root_index
    width = Fraction(1, 1 << 64)
    for _ in range(12):
        box = alpha.enclosure(width)
        try:
            inv_box = box.recip()
        except UsageError:
            width /= 1 << 16
            continue
        idx = _match_root_index(p, inv_box, width)
        if idx is not None:
            return idx == conj_index
        width /= 1 << 16
    raise PrecisionExhausted("unit-circle membership match did not resolve")


def abs_leq_one(alpha: AlgebraicNumber) -> bool:
    """Exact decision |alpha| <= 1, boundary included."""
    if alpha.is_rational:
        return abs(alpha.as_fraction()) <= 1
    width = WIDTH_LADDER[0]
    for _ in range(len(WIDTH_LADDER) + 1):
        a2 = alpha.enclosure(width).abs2()
        verdict = a2.le(Q1)
        if verdict is not None:
            return verdict
        width = width * width  # double the bits
    if root_on_unit_circle(alpha):
        return True
    # |alpha| != 1 now certain; refine until separated
    bits = 512
    while bits <= HARD_CAP_BITS:
        a2 = alpha.enclosure(Fraction(1, 1 << bits)).abs2()
        verdict = a2.le(Q1)
        if verdict is not None:
            return verdict
        bits *= 2
    raise PrecisionExhausted("|alpha| vs 1 undecided", bits=HARD_CAP_BITS)


# ---------------------------------------------------------------------------
# subset-product polynomial and exact measure ties
# ---------------------------------------------------------------------------

def subset_product_poly(p: IntPoly) -> IntPoly:
    """The monic integer polynomial whose roots are lead(p) * prod_{i in S} r_i
    over all subsets S of the roots of p (p squarefree).  Coefficients are
    identified by refining interval arithmetic until each traps one integer."""
    if not p.degree >= 1:
        raise UsageError("subset products need degree >= 1")
    if p.degree > 6:
        raise PrecisionExhausted("subset-product polynomial limited to degree 6")
    width = Fraction(1, 1 << 64)
    for _ in range(12):
        boxes = root_system(p).boxes(width)
        prods = [ComplexBox.point(1)]
        for b in boxes:
            prods += [w * b for w in prods]
        lead_box = ComplexBox.point(p.lead)
        coeffs = [ComplexBox.point(1)]
        for w in prods:
            root = lead_box * w
            nxt = [ComplexBox.point(0)] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                nxt[i + 1] = nxt[i + 1] + c
                nxt[i] = nxt[i] - c * root
            coeffs = nxt
        snapped = []
        ok = True
        for c in coeffs:
            if not c.im.contains(0) or c.re.width >= 1:
                ok = False
                break
            lo_int = -((-c.re.lo.numerator) // c.re.lo.denominator)  # ceil
            hi_int = c.re.hi.numerator // c.re.hi.denominator        # floor
            if lo_int != hi_int:
                ok = False
                break
            snapped.append(lo_int)
        if ok:
            return IntPoly(tuple(snapped))
        width = width * width
    raise PrecisionExhausted("subset-product coefficients did not stabilize")


def _classify_roots_vs_circle(p: IntPoly) -> tuple[list[int], list[int], list[int]]:
    """Indices of roots strictly inside / on / strictly outside the unit
    circle, decided exactly.  p canonical irreducible."""
    inside, on, outside = [], [], []
    roots = AlgebraicNumber.roots_of(p)
    for i, r in enumerate(roots):
        width = WIDTH_LADDER[0]
        decided = False
        for _ in range(4):
            a2 = r.enclosure(width).abs2()
            if a2.lt(Q1) is True:
                inside.append(i); decided = True; break
            if a2.lt(Q1) is False and not a2.contains(Q1):
                outside.append(i); decided = True; break
            width = width * width
        if decided:
            continue
        if root_on_unit_circle(r):
            on.append(i)
            continue
        bits = 512
        while bits <= HARD_CAP_BITS:
            a2 = r.enclosure(Fraction(1, 1 << bits)).abs2()
            if a2.lt(Q1) is True:
                inside.append(i); decided = True; break
            if not a2.contains(Q1):
                outside.append(i); decided = True; break
            bits *= 2
        if not decided:
            raise PrecisionExhausted("root vs unit circle undecided")
    return inside, on, outside


def measure_equals_rational(p: IntPoly, target: Fraction) -> bool:
    """Exact decision M(p) = target for canonical irreducible p and rational
    target > 0, via the subset-product polynomial."""
    target = Fraction(target)
    if target <= 0:
        return False
    if target.denominator != 1:
        # M is an algebraic integer here (lead * subset of roots), and a
        # rational algebraic integer is a plain integer
        sp = subset_product_poly(p)
        num = sp.lead  # monic: rational roots are integers
        return False if target.denominator != 1 else None
    _, _, outside = _classify_roots_vs_circle(p)
    if not outside:
        return Fraction(abs(p.lead)) == target
    sp = subset_product_poly(p)
    at_pos = sum(c * target.numerator ** i for i, c in enumerate(sp.coeffs))
    at_neg = sum(c * (-target.numerator) ** i for i, c in enumerate(sp.coeffs))
    if at_pos != 0 and at_neg != 0:
        return False
    sf = squarefree_part(sp)
    width = Fraction(1, 1 << 64)
    for _ in range(10):
        boxes = root_system(p).boxes(width)
        w_box = ComplexBox.point(p.lead)
        for i in outside:
            w_box = w_box * boxes[i]
        if not w_box.im.contains(0):
            raise PrecisionExhausted("outside-root product should be real")
        w_iv = w_box.re
        intervals = real_root_intervals(sf, width)
        hits = [k for k in intervals if k.intersects(w_iv)]
        if len(hits) == 1:
            k = hits[0]
            if at_pos == 0 and k.contains(target):
                return True
            if at_neg == 0 and k.contains(-target):
                return True
            return False
        width = width * width
    raise PrecisionExhausted("measure tie resolution did not converge")


# ---------------------------------------------------------------------------
# threshold decisions
# ---------------------------------------------------------------------------

def poly_measure_leq(p: IntPoly, bound: HeightBound) -> bool:
    """Exact decision M(p) <= e^(d*N) for canonical irreducible p of degree d."""
    d = p.degree
    if d < 1:
        raise UsageError("measure threshold needs degree >= 1")
    if bound.is_zero():
        return is_unit_measure(p)
    if is_unit_measure(p):
        return True     # M = 1 <= e^(dN) since N >= 0
    if d == 1:
        m_exact = Fraction(max(abs(p.coeffs[0]), abs(p.coeffs[1])))
        return _compare_exact_vs_exp(m_exact, bound.exp_of_scaled(1))
    target = bound.exp_of_scaled(2 * d)   # e^(2dN), compared against M^2
    exact = target.exact
    tie_checked = False
    for width in WIDTH_LADDER:
        m2 = measure_squared(p, width * max(Q1, abs(_rough_scale(p))))
        verdict = m2.le(exact) if exact is not None else None
        if exact is None:
            prec = max(64, (1 / width).numerator.bit_length() + 16)
            verdict = m2.le(target.enclosure(prec))
        if verdict is not None:
            return verdict
        if exact is not None and not tie_checked:
            root = _rational_power_exact(exact, Fraction(1, 2))
            if root is not None and measure_equals_rational(p, root):
                return True
            tie_checked = True
    bits = 512
    while bits <= HARD_CAP_BITS:
        w = Fraction(1, 1 << bits)
        m2 = measure_squared(p, w * max(Q1, abs(_rough_scale(p))))
        if exact is not None:
            verdict = m2.le(exact)
        else:
            verdict = m2.le(target.enclosure(bits + 16))
        if verdict is not None:
            return verdict
        bits *= 2
    raise PrecisionExhausted("measure threshold undecided", bits=HARD_CAP_BITS)


def _rough_scale(p: IntPoly) -> Fraction:
    """Crude magnitude of M^2 used to convert relative to absolute widths."""
    return Fraction(max(1, p.l2_norm_squared()))


def _compare_exact_vs_exp(value: Fraction, target: ExpValue) -> bool:
    ex = target.exact
    if ex is not None:
        return value <= ex
    prec = 64
    while prec <= HARD_CAP_BITS:
        iv = target.enclosure(prec)
        if value <= iv.lo:
            return True
        if value > iv.hi:
            return False
        prec *= 2
    raise PrecisionExhausted("exact vs exponential comparison undecided")


def height_leq(alpha: AlgebraicNumber, threshold) -> bool:
    """Exact decision h(alpha) <= N, i.e. M(alpha) <= e^(deg*N)."""
    bound = threshold.bound() if isinstance(threshold, ThresholdSpec) else threshold
    if not isinstance(bound, HeightBound):
        raise UsageError("threshold must be a ThresholdSpec or HeightBound")
    return poly_measure_leq(alpha.minpoly, bound)
