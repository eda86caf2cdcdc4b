"""Certified arithmetic for numbers from small integers to iterated exponentials.

A :class:`Magnitude` is either

* ``Exact``: an arbitrary-precision nonnegative integer, or
* ``Tower``: a pair ``(height, [lo, hi])`` enclosing every value ``v`` with
  ``lo <= log10(log10(...(v)...)) <= hi`` (``height``-fold iterated log10).

All interval endpoints are decimal fractions of fixed significand length
(default 30 digits) and every operation rounds outward, so an enclosure can
only widen, never clip the true value.  Values are immutable; operations are
pure and deterministic, hence safe to share across threads.

Subtraction of comparable huge quantities is deliberately not offered; none
of the bound formulas need it, and offering it would break enclosure
soundness guarantees.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from decimal import (
    Context,
    Decimal,
    Inexact,
    Overflow,
    ROUND_CEILING,
    ROUND_FLOOR,
    ROUND_HALF_EVEN,
)
from enum import Enum
from typing import Optional


class MagnitudeError(Exception):
    """Base class for certified-arithmetic failures."""


class OrderViolation(MagnitudeError):
    """A required ordering (e.g. k <= n in a binomial) is certainly violated."""


class IndeterminateOrder(MagnitudeError):
    """Enclosures overlap, so a required ordering cannot be certified."""


class CapacityExceeded(MagnitudeError):
    """A tower body left the representable range; never silently saturated."""


class DepthExceedsValue(MagnitudeError):
    """An iterated log10 is undefined (some stage is certainly, or possibly, <= 0)."""


class Ordering(Enum):
    LESS = "Less"
    GREATER = "Greater"
    EQUAL = "Equal"
    INDETERMINATE = "Indeterminate"


# ---------------------------------------------------------------------------
# configuration

@dataclass
class Config:
    precision_digits: int = 30
    exact_threshold_bits: int = 1 << 24


_CONFIG = Config()

_GUARD_DIGITS = 5
_EMAX = 10 ** 17
# Tower bodies at or above this are re-expressed one height up.
_BODY_CEILING = Decimal("1E+15")

# 200 decimals of pi, truncated (so the literal is a strict lower bound).
_PI_LO_STR = (
    "3.14159265358979323846264338327950288419716939937510582097494459230781"
    "640628620899862803482534211706798214808651328230664709384460955058223172"
    "53594081284811174502841027019385211055596446229489549303819"
)


def configure(precision_digits: Optional[int] = None,
              exact_threshold_bits: Optional[int] = None) -> None:
    """Set interval precision and the exact/tower switchover (global)."""
    if precision_digits is not None:
        if not 8 <= precision_digits <= 150:
            raise ValueError("precision_digits must be in [8, 150]")
        _CONFIG.precision_digits = precision_digits
    if exact_threshold_bits is not None:
        if exact_threshold_bits < (1 << 10):
            raise ValueError("exact_threshold_bits must be >= 2^10")
        _CONFIG.exact_threshold_bits = exact_threshold_bits
    _constants_cache.clear()


def current_config() -> Config:
    return Config(_CONFIG.precision_digits, _CONFIG.exact_threshold_bits)


def _prec() -> int:
    return _CONFIG.precision_digits + _GUARD_DIGITS


def _ctx(rounding, prec: Optional[int] = None) -> Context:
    return Context(prec=prec or _prec(), Emax=_EMAX, Emin=-_EMAX,
                   rounding=rounding, traps=[Overflow])


# ---------------------------------------------------------------------------
# directed-rounding scalar layer
#
# decimal's +-*/ honor the context rounding mode, so floor/ceiling contexts
# give true directed rounding.  ln/log10/exp/sqrt are documented as correctly
# rounded in ROUND_HALF_EVEN, so widening an inexact result by one ulp yields
# a certified enclosure.

def _ulp(v: Decimal, prec: int) -> Decimal:
    ctx = _ctx(ROUND_HALF_EVEN, prec)
    if v == 0:
        return Decimal(1).scaleb(-prec, ctx)
    return Decimal(1).scaleb(v.adjusted() - prec + 1, ctx)


def _rounded_enclosure(op_name: str, x: Decimal, prec: Optional[int] = None):
    p = prec or _prec()
    ctx = _ctx(ROUND_HALF_EVEN, p)
    ctx.clear_flags()
    v = getattr(ctx, op_name)(x)
    if not ctx.flags[Inexact]:
        return v, v
    u = _ulp(v, p)
    down = _ctx(ROUND_FLOOR, p)
    up = _ctx(ROUND_CEILING, p)
    return down.subtract(v, u), up.add(v, u)


_constants_cache: dict = {}


def _const(name: str):
    """Cached enclosures of ln(10), log10(2), log10(e), ln(2*pi)/2."""
    key = (name, _prec())
    if key in _constants_cache:
        return _constants_cache[key]
    p = _prec()
    if name == "ln10":
        val = _rounded_enclosure("ln", Decimal(10), p)
    elif name == "log10_2":
        val = _rounded_enclosure("log10", Decimal(2), p)
    elif name == "log10_e":
        lo10, hi10 = _const("ln10")
        down, up = _ctx(ROUND_FLOOR, p), _ctx(ROUND_CEILING, p)
        val = (down.divide(Decimal(1), hi10), up.divide(Decimal(1), lo10))
    elif name == "half_ln_2pi":
        if p > len(_PI_LO_STR) - 10:
            raise CapacityExceeded("precision exceeds stored pi digits")
        down, up = _ctx(ROUND_FLOOR, p), _ctx(ROUND_CEILING, p)
        pi_lo = Decimal(_PI_LO_STR)  # exact literal, truncated below pi
        pi_hi = up.add(pi_lo, Decimal(1).scaleb(-(len(_PI_LO_STR) - 2)))
        two_pi = (down.multiply(Decimal(2), pi_lo), up.multiply(Decimal(2), pi_hi))
        ln_lo = _rounded_enclosure("ln", two_pi[0], p)[0]
        ln_hi = _rounded_enclosure("ln", two_pi[1], p)[1]
        val = (down.divide(ln_lo, Decimal(2)), up.divide(ln_hi, Decimal(2)))
    else:
        raise KeyError(name)
    _constants_cache[key] = val
    return val


# ---------------------------------------------------------------------------
# intervals

@dataclass(frozen=True)
class Interval:
    """Closed interval of decimal fractions; all operations round outward."""

    lo: Decimal
    hi: Decimal

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"inverted interval [{self.lo}, {self.hi}]")

    @staticmethod
    def point(x) -> "Interval":
        d = Decimal(x)
        return Interval(d, d)

    @staticmethod
    def from_int(x: int) -> "Interval":
        return Interval(_ctx(ROUND_FLOOR).create_decimal(x),
                        _ctx(ROUND_CEILING).create_decimal(x))

    def __add__(self, other: "Interval") -> "Interval":
        down, up = _ctx(ROUND_FLOOR), _ctx(ROUND_CEILING)
        return Interval(down.add(self.lo, other.lo), up.add(self.hi, other.hi))

    def __sub__(self, other: "Interval") -> "Interval":
        down, up = _ctx(ROUND_FLOOR), _ctx(ROUND_CEILING)
        return Interval(down.subtract(self.lo, other.hi),
                        up.subtract(self.hi, other.lo))

    def __mul__(self, other: "Interval") -> "Interval":
        down, up = _ctx(ROUND_FLOOR), _ctx(ROUND_CEILING)
        pairs = [(self.lo, other.lo), (self.lo, other.hi),
                 (self.hi, other.lo), (self.hi, other.hi)]
        return Interval(min(down.multiply(a, b) for a, b in pairs),
                        max(up.multiply(a, b) for a, b in pairs))

    def __truediv__(self, other: "Interval") -> "Interval":
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("interval divisor straddles zero")
        down, up = _ctx(ROUND_FLOOR), _ctx(ROUND_CEILING)
        pairs = [(self.lo, other.lo), (self.lo, other.hi),
                 (self.hi, other.lo), (self.hi, other.hi)]
        return Interval(min(down.divide(a, b) for a, b in pairs),
                        max(up.divide(a, b) for a, b in pairs))

    def log10(self) -> "Interval":
        if self.lo <= 0:
            raise DepthExceedsValue("log10 of a possibly nonpositive value")
        return Interval(_rounded_enclosure("log10", self.lo)[0],
                        _rounded_enclosure("log10", self.hi)[1])

    def ln(self) -> "Interval":
        if self.lo <= 0:
            raise DepthExceedsValue("ln of a possibly nonpositive value")
        return Interval(_rounded_enclosure("ln", self.lo)[0],
                        _rounded_enclosure("ln", self.hi)[1])

    def exp10(self) -> "Interval":
        """10**self, outward; raises decimal.Overflow past the context Emax."""
        return Interval(_exp10_directed(self.lo, ROUND_FLOOR),
                        _exp10_directed(self.hi, ROUND_CEILING))

    def sqrt(self) -> "Interval":
        if self.lo < 0:
            raise ValueError("sqrt of a possibly negative value")
        return Interval(_rounded_enclosure("sqrt", self.lo)[0],
                        _rounded_enclosure("sqrt", self.hi)[1])

    def powi(self, n: int) -> "Interval":
        """Integer power for nonnegative intervals, by directed squaring."""
        if n < 0 or self.lo < 0:
            raise ValueError("powi needs n >= 0 and a nonnegative interval")
        acc = Interval.point(1)
        base = self
        e = n
        while e:
            if e & 1:
                acc = acc * base
            e >>= 1
            if e:
                base = base * base
        return acc

    def contains(self, x) -> bool:
        d = Decimal(x)
        return self.lo <= d <= self.hi

    def encloses(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def overlaps(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    @property
    def width(self) -> Decimal:
        return _ctx(ROUND_CEILING).subtract(self.hi, self.lo)


def _exp10_directed(x: Decimal, rounding) -> Decimal:
    # exact for integral exponents, else via exp(x*ln10) with outward steps
    if x == x.to_integral_value() and abs(x) < _EMAX:
        return Decimal(1).scaleb(int(x), _ctx(rounding))
    ln10 = _const("ln10")
    c = _ctx(rounding)
    prod = c.multiply(x, ln10[1] if (rounding == ROUND_CEILING) == (x > 0) else ln10[0])
    lo, hi = _rounded_enclosure("exp", prod)
    return hi if rounding == ROUND_CEILING else lo


# ---------------------------------------------------------------------------
# certified log10 of exact integers

def log10_int_enclosure(x: int) -> Interval:
    """Certified enclosure of log10(x) for an exact integer x >= 1."""
    if x <= 0:
        raise DepthExceedsValue("log10 of a nonpositive integer")
    if x == 1:
        return Interval.point(0)
    bits = x.bit_length()
    if bits <= 160:
        iv = Interval.from_int(x).log10()
    else:
        # keep ~40 leading digits: t*2^s <= x < (t+1)*2^s
        s = bits - 135
        t = x >> s
        l2 = _const("log10_2")
        down, up = _ctx(ROUND_FLOOR), _ctx(ROUND_CEILING)
        lo = down.add(Interval.from_int(t).log10().lo, down.multiply(Decimal(s), l2[0]))
        hi = up.add(Interval.from_int(t + 1).log10().hi, up.multiply(Decimal(s), l2[1]))
        iv = Interval(lo, hi)
    # snap exact powers of ten: render and log10_enclosure contracts want [k, k]
    k_lo, k_hi = int(iv.lo.to_integral_value(rounding=ROUND_CEILING)), int(iv.hi)
    if k_lo == k_hi and k_lo <= 10 ** 7 and x == 10 ** k_lo:
        return Interval.point(k_lo)
    return iv


def nudge_down(d: Decimal) -> Decimal:
    """d minus one working-precision ulp (a certified strict lower shift)."""
    return _ctx(ROUND_FLOOR).subtract(d, _ulp(d, _prec()))


def digit_count(x: int) -> int:
    """Exact decimal digit count of x >= 1 without a full str() conversion."""
    if x <= 0:
        raise ValueError("digit_count needs x >= 1")
    iv = log10_int_enclosure(x)
    f_lo = int(iv.lo.to_integral_value(rounding=ROUND_FLOOR))
    f_hi = int(iv.hi.to_integral_value(rounding=ROUND_FLOOR))
    if f_lo == f_hi:
        return f_lo + 1
    # x is within rounding distance of 10^f_hi; settle exactly
    return f_hi + 1 if x >= 10 ** f_hi else f_lo + 1


# ---------------------------------------------------------------------------
# Stirling-series enclosures
#
# ln n! = (n + 1/2) ln n - n + ln(2*pi)/2 + 1/12n - 1/360n^3 + 1/1260n^5
#         - 1/1680n^7 + R,   0 < R < 1/(1188 n^9),
# the remainder having the sign and bound of the first omitted term.

_EXACT_FACTORIAL_CUTOFF = 300


def _stirling_ln_enclosure(n_iv: Interval, prec: int) -> Interval:
    down, up = _ctx(ROUND_FLOOR, prec), _ctx(ROUND_CEILING, prec)

    def main(n: Decimal, upper: bool) -> Decimal:
        # (n + 1/2) ln n - n + ln(2 pi)/2, increasing in n for n >= 1
        c = up if upper else down
        sel = 1 if upper else 0
        ln_n = _rounded_enclosure("ln", n, prec)[sel]
        t = c.multiply(c.add(n, Decimal("0.5")), ln_n)
        t = c.subtract(t, n)
        return c.add(t, _const("half_ln_2pi")[sel])

    # the correction tail is O(1/n); interval arithmetic at base precision
    # is plenty since only its absolute error matters
    one = Interval.point(1)
    n1 = n_iv
    n2 = n1 * n1
    n3 = n2 * n1
    n5 = n3 * n2
    n7 = n5 * n2
    n9 = n7 * n2
    tail = (one / (n1 * Interval.point(12))) - (one / (n3 * Interval.point(360)))
    tail = tail + (one / (n5 * Interval.point(1260))) - (one / (n7 * Interval.point(1680)))
    # remainder after the n^-7 term lies in (0, 1/(1188 n^9))
    rem_hi = (one / (n9 * Interval.point(1188))).hi
    lo = down.add(main(n_iv.lo, False), tail.lo)
    hi = up.add(up.add(main(n_iv.hi, True), tail.hi), rem_hi)
    return Interval(lo, hi)


def log10_factorial_enclosure(n) -> Interval:
    """Certified enclosure of log10(n!); n an int or a positive Interval."""
    if isinstance(n, int):
        if n < 0:
            raise ValueError("factorial of a negative integer")
        if n <= _EXACT_FACTORIAL_CUTOFF:
            return log10_int_enclosure(math.factorial(n))
        n_iv = Interval.from_int(n)
    else:
        n_iv = n
        if n_iv.lo < _EXACT_FACTORIAL_CUTOFF:
            raise CapacityExceeded("interval factorial needs lo > %d"
                                   % _EXACT_FACTORIAL_CUTOFF)
    ln_fact = _stirling_ln_enclosure(n_iv, _prec())
    ln10 = _const("ln10")
    down, up = _ctx(ROUND_FLOOR), _ctx(ROUND_CEILING)
    return Interval(down.divide(ln_fact.lo, ln10[1]), up.divide(ln_fact.hi, ln10[0]))


def log10_binomial_enclosure(n: int, k: int) -> Interval:
    """Certified enclosure of log10(C(n, k)) for exact integers, any size.

    Routes: exact evaluation for tiny n; a falling-factorial bracket when the
    factor range [n-c+1, n] is relatively narrow (the huge-n, small-c regime);
    Stirling differences at elevated precision otherwise.
    """
    if k < 0 or k > n:
        raise OrderViolation(f"binomial needs 0 <= k <= n, got ({n}, {k})")
    c = min(k, n - k)
    if c == 0:
        return Interval.point(0)
    if c == 1:
        return log10_int_enclosure(n)
    if n < 50:
        return log10_int_enclosure(math.comb(n, k))
    m0 = n - c
    denom = log10_factorial_enclosure(c)
    # bracket: c*log10(m0+1) <= sum log10(m0+j) <= c*log10(n); used only for
    # routing, so a float estimate is fine (both routes are certified)
    spread_per_factor = (math.log2(n) - math.log2(m0 + 1)) * 0.30103
    if c < 10 ** 300:
        rel_spread = spread_per_factor * c
    else:
        rel_spread = 0.0 if spread_per_factor == 0.0 else math.inf
    if rel_spread < 1e-9:
        cc = Interval.from_int(c)
        falling = Interval(
            (cc * log10_int_enclosure(m0 + 1)).lo,
            (cc * log10_int_enclosure(n)).hi,
        )
        return falling - denom
    # Stirling difference; elevate precision to survive the cancellation
    magnitude = n.bit_length()  # log2 n
    extra = max(0, int(math.log10(max(magnitude * 0.7, 1)) + math.log10(max(magnitude, 2)))) + 4
    prec = _prec() + extra
    ln10 = _const("ln10")
    lnn = _stirling_ln_enclosure(Interval.from_int(n), prec)
    lnm = (_stirling_ln_enclosure(Interval.from_int(m0), prec)
           if m0 > _EXACT_FACTORIAL_CUTOFF
           else Interval.from_int(math.factorial(m0)).ln())
    lnc = (_stirling_ln_enclosure(Interval.from_int(c), prec)
           if c > _EXACT_FACTORIAL_CUTOFF
           else Interval.from_int(math.factorial(c)).ln())
    down, up = _ctx(ROUND_FLOOR, prec), _ctx(ROUND_CEILING, prec)
    lo = down.subtract(down.subtract(lnn.lo, lnm.hi), lnc.hi)
    hi = up.subtract(up.subtract(lnn.hi, lnm.lo), lnc.lo)
    return Interval(down.divide(lo, ln10[1] if lo >= 0 else ln10[0]),
                    up.divide(hi, ln10[0] if hi >= 0 else ln10[1]))


# ---------------------------------------------------------------------------
# Magnitude

@dataclass(frozen=True)
class Magnitude:
    """Exact nonnegative integer or height-h log10-tower enclosure."""

    value: Optional[int] = None
    height: int = 0
    body: Optional[Interval] = None

    @staticmethod
    def exact(n: int) -> "Magnitude":
        if n < 0:
            raise ValueError("Magnitude values are nonnegative")
        return Magnitude(value=int(n))

    @staticmethod
    def tower(height: int, lo, hi=None) -> "Magnitude":
        if hi is None:
            body = lo if isinstance(lo, Interval) else Interval.point(lo)
        else:
            body = Interval(Decimal(lo), Decimal(hi))
        if height < 1:
            raise ValueError("tower height must be >= 1")
        h, b = _normalize(height, body)
        return Magnitude(height=h, body=b)

    @property
    def is_exact(self) -> bool:
        return self.value is not None

    def __mul__(self, other: "Magnitude") -> "Magnitude":
        return multiply(self, other)

    def __add__(self, other: "Magnitude") -> "Magnitude":
        return add(self, other)

    def __pow__(self, other: "Magnitude") -> "Magnitude":
        return power(self, other)

    def __str__(self) -> str:
        return render(self)


def _normalize(height: int, body: Interval):
    # downward: an h-fold log below 1 is re-expressed at height h-1
    while height > 1 and body.lo < 1:
        body = body.exp10()
        height -= 1
    # upward: keep bodies comfortably inside the decimal exponent range
    while body.hi >= _BODY_CEILING and body.lo >= 10:
        body = body.log10()
        height += 1
    return height, body


# internal working form: (h, interval) with h = 0 meaning the value itself

@dataclass(frozen=True)
class _Level:
    h: int
    iv: Interval


def _level_of(a: Magnitude) -> _Level:
    if a.is_exact:
        if a.value == 0:
            raise MagnitudeError("internal: zero has no log-tower form")
        return _Level(0, Interval.from_int(a.value))
    return _Level(a.height, a.body)


def _log_view(lv: _Level) -> _Level:
    if lv.h >= 1:
        return _Level(lv.h - 1, lv.iv)
    return _Level(0, lv.iv.log10())


def _exp_view(lv: _Level) -> _Level:
    return _Level(lv.h + 1, lv.iv)


def _lower_once(lv: _Level) -> Optional[_Level]:
    if lv.h == 0:
        return None
    try:
        return _Level(lv.h - 1, lv.iv.exp10())
    except Overflow:
        return None


def _lowest(lv: _Level) -> _Level:
    while True:
        nxt = _lower_once(lv)
        if nxt is None:
            return lv
        lv = nxt


def _raise_endpoints(lv: _Level, h: int):
    """Endpoints of log10^(h - lv.h) applied to lv.iv, raised one-sidedly.

    An endpoint whose iterate drops to or below 0 collapses to None, read as
    minus infinity; that keeps comparisons and max-based addition sound for
    operands many tower heights apart.
    """
    lo, hi = lv.iv.lo, lv.iv.hi
    for _ in range(h - lv.h):
        lo = None if (lo is None or lo <= 0) else _rounded_enclosure("log10", lo)[0]
        hi = None if (hi is None or hi <= 0) else _rounded_enclosure("log10", hi)[1]
    return lo, hi


def _add_levels(a: _Level, b: _Level) -> _Level:
    la, lb = _lowest(a), _lowest(b)
    h = max(la.h, lb.h)
    if h == 0:
        return _Level(0, la.iv + lb.iv)
    alo, ahi = _raise_endpoints(la, h)
    blo, bhi = _raise_endpoints(lb, h)
    # max(a,b) <= a+b <= 2*max(a,b); once the dominating side is >= 2 at
    # every iterate (lo >= 0.31 certifies that), the doubling costs at most
    # log10(2) at any height (2v <= v^2 once v >= 2)
    # a collapsed endpoint marks a side below every iterate of the other,
    # so it cannot contribute to either bound
    lo = max(x for x in (alo, blo) if x is not None)
    if lo < Decimal("0.31"):
        raise CapacityExceeded("tower addition outside the normalized regime")
    up = _ctx(ROUND_CEILING)
    hi = up.add(max(x for x in (ahi, bhi) if x is not None), _const("log10_2")[1])
    return _Level(h, Interval(lo, hi))


def _mul_levels(a: _Level, b: _Level) -> _Level:
    return _exp_view(_add_levels(_log_view(a), _log_view(b)))


def _pow_levels(base: _Level, exp: _Level) -> _Level:
    return _exp_view(_mul_levels(exp, _log_view(base)))


def _to_magnitude(lv: _Level) -> Magnitude:
    if lv.h == 0:
        if lv.iv.lo <= 0:
            raise CapacityExceeded("enclosure touched zero; cannot form a tower")
        return Magnitude.tower(1, lv.iv.log10())
    return Magnitude.tower(lv.h, lv.iv)


def _exact_to_tower(x: int) -> Magnitude:
    return Magnitude.tower(1, log10_int_enclosure(x))


# ---------------------------------------------------------------------------
# public operations

def multiply(a: Magnitude, b: Magnitude) -> Magnitude:
    if a.is_exact and b.is_exact:
        if a.value == 0 or b.value == 0:
            return Magnitude.exact(0)
        if a.value.bit_length() + b.value.bit_length() <= _CONFIG.exact_threshold_bits:
            return Magnitude.exact(a.value * b.value)
    if a.is_exact and a.value == 0 or b.is_exact and b.value == 0:
        return Magnitude.exact(0)
    if a.is_exact and a.value == 1:
        return b
    if b.is_exact and b.value == 1:
        return a
    return _to_magnitude(_mul_levels(_level_of(a), _level_of(b)))


def add(a: Magnitude, b: Magnitude) -> Magnitude:
    if a.is_exact and b.is_exact:
        s = a.value + b.value
        if s.bit_length() <= _CONFIG.exact_threshold_bits:
            return Magnitude.exact(s)
        return _exact_to_tower(s)
    if a.is_exact and a.value == 0:
        return b
    if b.is_exact and b.value == 0:
        return a
    return _to_magnitude(_add_levels(_level_of(a), _level_of(b)))


def power(base: Magnitude, exp: Magnitude) -> Magnitude:
    """base ** exp; 0**0 is Exact(1) by convention (empty product)."""
    if exp.is_exact and exp.value == 0:
        return Magnitude.exact(1)
    if base.is_exact and base.value == 0:
        return Magnitude.exact(0)
    if base.is_exact and base.value == 1:
        return Magnitude.exact(1)
    if exp.is_exact and exp.value == 1:
        return base
    if base.is_exact and exp.is_exact:
        predicted = exp.value * base.value.bit_length()
        if predicted <= _CONFIG.exact_threshold_bits:
            return Magnitude.exact(base.value ** exp.value)
    return _to_magnitude(_pow_levels(_level_of(base), _level_of(exp)))


def factorial(n: Magnitude) -> Magnitude:
    if n.is_exact:
        if n.value <= 1:
            return Magnitude.exact(1)
        # ~ n*log2(n/e) result bits
        predicted = int(n.value * max(math.log2(n.value) - 1.44, 0.1)) + 8 \
            if n.value.bit_length() < 50 else _CONFIG.exact_threshold_bits + 1
        if predicted <= _CONFIG.exact_threshold_bits:
            return Magnitude.exact(math.factorial(n.value))
        return Magnitude.tower(1, log10_factorial_enclosure(n.value))
    lv = _lowest(_level_of(n))
    if lv.h != 0:
        raise CapacityExceeded("factorial argument too large to bring to value level")
    return Magnitude.tower(1, log10_factorial_enclosure(lv.iv))


def binomial(n: Magnitude, k: Magnitude) -> Magnitude:
    """C(n, k) with certified ordering; exact below the bit threshold.

    Tower-regime enclosures come from (n/k)^k <= C(n,k) <= (n*e/k)^k.
    """
    order = compare(k, n)
    if order is Ordering.GREATER:
        raise OrderViolation("binomial needs k <= n")
    if order is Ordering.INDETERMINATE:
        raise IndeterminateOrder("cannot certify k <= n")
    if k.is_exact and k.value == 0:
        return Magnitude.exact(1)
    if k.is_exact and k.value == 1:
        return n
    if order is Ordering.EQUAL:
        return Magnitude.exact(1)
    if n.is_exact and k.is_exact:
        nv, kv = n.value, k.value
        c = min(kv, nv - kv)
        if c == 0:
            return Magnitude.exact(1)
        if c.bit_length() > 60:
            # C(n, c) >= 2^c, astronomically past any sane threshold
            return Magnitude.tower(1, log10_binomial_enclosure(nv, kv))
        # cheap overestimate of result bits
        log2n = math.log2(nv) if nv.bit_length() < 1000 else nv.bit_length()
        predicted = int(c * (log2n - math.log2(c) + 1.45)) + 16
        if predicted <= _CONFIG.exact_threshold_bits and c <= 10 ** 6:
            return Magnitude.exact(math.comb(nv, kv))
        return Magnitude.tower(1, log10_binomial_enclosure(nv, kv))
    # mixed/tower arguments
    ratio = _ratio_level(n, k)
    return binomial_from_ratio(ratio, k)


def _ratio_level(n: Magnitude, k: Magnitude) -> Interval:
    """Enclosure of log10(n/k) when it is representable at value level."""
    ln_n = _lowest(_log_view(_level_of(n)))
    ln_k = _lowest(_log_view(_level_of(k)))
    if ln_n.h != 0 or ln_k.h != 0:
        raise CapacityExceeded("binomial ratio n/k not representable; "
                               "use binomial_from_ratio with a structural ratio")
    iv = ln_n.iv - ln_k.iv
    if iv.lo <= 0:
        raise IndeterminateOrder("cannot certify n/k > 1 for the ratio bounds")
    return iv


def binomial_from_ratio(log10_ratio: Interval, k: Magnitude) -> Magnitude:
    """C(n, k) enclosure given a certified enclosure of log10(n/k) > 0.

    For 1 <= k <= n:  (n/k)^k <= C(n, k) <= (n*e/k)^k.
    Callers with structural knowledge of n/k (e.g. n = (k+1)*G) use this to
    avoid catastrophic cancellation in log10(n) - log10(k).
    """
    up = _ctx(ROUND_CEILING)
    hi = up.add(log10_ratio.hi, _const("log10_e")[1])
    per_row = _Level(0, Interval(log10_ratio.lo, hi))
    result_log = _mul_levels(_level_of(k), per_row)
    return _to_magnitude(_exp_view(result_log))


def maximum(a: Magnitude, b: Magnitude) -> Magnitude:
    """Enclosure of max(a, b); needs no certified ordering (pointwise max)."""
    if a.is_exact and b.is_exact:
        return a if a.value >= b.value else b
    if a.is_exact and a.value == 0:
        return b
    if b.is_exact and b.value == 0:
        return a
    la, lb = _lowest(_level_of(a)), _lowest(_level_of(b))
    h = max(la.h, lb.h)
    if h == 0:
        return _to_magnitude(_Level(0, Interval(max(la.iv.lo, lb.iv.lo),
                                                max(la.iv.hi, lb.iv.hi))))
    alo, ahi = _raise_endpoints(la, h)
    blo, bhi = _raise_endpoints(lb, h)
    lo = max(x for x in (alo, blo) if x is not None)
    hi = max(x for x in (ahi, bhi) if x is not None)
    return _to_magnitude(_Level(h, Interval(lo, hi)))


def compare(a: Magnitude, b: Magnitude) -> Ordering:
    if a.is_exact and b.is_exact:
        if a.value == b.value:
            return Ordering.EQUAL
        return Ordering.LESS if a.value < b.value else Ordering.GREATER
    if a.is_exact and a.value == 0:
        return Ordering.LESS  # towers are positive
    if b.is_exact and b.value == 0:
        return Ordering.GREATER
    la, lb = _lowest(_level_of(a)), _lowest(_level_of(b))
    h = max(la.h, lb.h)
    alo, ahi = _raise_endpoints(la, h)
    blo, bhi = _raise_endpoints(lb, h)
    # a side whose hi endpoint collapsed sits below 10^^j(1) for some j < h,
    # hence below any height-h tower with a positive body
    if ahi is None:
        return Ordering.LESS if (blo is not None and blo > 0) else Ordering.INDETERMINATE
    if bhi is None:
        return Ordering.GREATER if (alo is not None and alo > 0) else Ordering.INDETERMINATE
    if blo is not None and ahi < blo:
        return Ordering.LESS
    if alo is not None and bhi < alo:
        return Ordering.GREATER
    return Ordering.INDETERMINATE


def log10_enclosure(a: Magnitude, depth: int) -> Interval:
    """Certified enclosure of the depth-fold log10 of a."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if a.is_exact:
        iv = log10_int_enclosure(a.value)  # raises for value < 1
        for _ in range(depth - 1):
            iv = iv.log10()
        return iv
    if depth >= a.height:
        iv = a.body
        for _ in range(depth - a.height):
            iv = iv.log10()
        return iv
    target = _Level(a.height, a.body)
    for _ in range(a.height - depth):
        nxt = _lower_once(target)
        if nxt is None:
            raise CapacityExceeded("requested depth below representable range")
        target = nxt
    return target.iv


# ---------------------------------------------------------------------------
# rendering and serialization

_RENDER_FULL_DIGITS = 80
_LEADING_DIGITS = 12


def _int_str(x: int) -> str:
    limit = digit_count(x) + 10 if x > 0 else 20
    if limit > sys.get_int_max_str_digits():
        sys.set_int_max_str_digits(limit)
    return str(x)


def _dec_str(d: Decimal) -> str:
    if d == d.to_integral_value() and abs(d.adjusted()) < 28:
        return str(int(d))
    return str(d.normalize())


def render(a: Magnitude) -> str:
    if a.is_exact:
        if a.value == 0:
            return "0"
        nd = digit_count(a.value)
        if nd <= _RENDER_FULL_DIGITS:
            return _int_str(a.value)
        lead = a.value // 10 ** (nd - _LEADING_DIGITS)
        return f"{nd} digits, leading {_LEADING_DIGITS} digits {lead}…"
    inner = f"[{_dec_str(a.body.lo)}, {_dec_str(a.body.hi)}]"
    return "10^(" * a.height + inner + ")" * a.height


def to_record(a: Magnitude) -> dict:
    if a.is_exact:
        return {"kind": "exact", "value": _int_str(a.value)}
    return {"kind": "tower", "height": a.height,
            "lo": str(a.body.lo), "hi": str(a.body.hi)}


def from_record(rec: dict) -> Magnitude:
    if rec["kind"] == "exact":
        return Magnitude.exact(int(rec["value"]))
    if rec["kind"] == "tower":
        return Magnitude.tower(int(rec["height"]),
                               Interval(Decimal(rec["lo"]), Decimal(rec["hi"])))
    raise ValueError(f"unknown magnitude record kind {rec.get('kind')!r}")
