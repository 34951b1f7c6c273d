"""Scalar arithmetic policy and interval primitives.

Every quantity in this package is a :class:`Scalar`: either an exact
``fractions.Fraction`` (error bound 0) or an ``mpmath.mpf`` computed at the
current working precision, together with a running worst-case absolute
error bound.  Exact mode is used whenever a system consists of affine maps
with rational coefficients; anything else falls back to precision mode
(default 128 bits of mantissa, see :func:`set_precision`).

Error bounds are deliberately crude upper estimates.  The one property
downstream code relies on is that they never shrink under composition.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union

from mpmath import mp

__all__ = [
    "DEFAULT_PRECISION",
    "DomainViolation",
    "EmptyInput",
    "Scalar",
    "Interval",
    "set_precision",
    "scalars_match",
    "interval_image",
    "hull",
    "pairwise_disjoint",
    "hausdorff_distance",
]

DEFAULT_PRECISION = 128
mp.prec = DEFAULT_PRECISION


class DomainViolation(ValueError):
    """An argument lies outside the domain a map was declared on."""


class EmptyInput(ValueError):
    """An aggregate operation received an empty collection."""


def set_precision(bits: int) -> None:
    """Set the working mantissa precision (bits) for approximate scalars."""
    if bits < 64:
        raise ValueError("precision must be at least 64 bits")
    mp.prec = int(bits)


def _to_mpf(x):
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / mp.mpf(x.denominator)
    return mp.mpf(x)


def _ulp(x):
    # one rounding step at the current precision, relative to |x|
    return abs(x) * mp.mpf(2) ** (1 - mp.prec)


ScalarLike = Union["Scalar", int, str, Fraction, float]


class Scalar:
    """A number under the active arithmetic policy.

    ``value`` is a ``Fraction`` (exact mode) or ``mpmath.mpf`` (precision
    mode); ``err`` is an upper bound on the absolute error accumulated so
    far.  Comparisons, equality and hashing look at ``value`` only.

    ``Scalar(x)`` treats ints, Fractions and strings ("1/7", "0.3") as
    exact; floats and mpf values go to precision mode.  Use
    :meth:`approx` to force precision mode for a decimal string.
    """

    __slots__ = ("value", "err")

    def __init__(self, value, err=None):
        if isinstance(value, Scalar):
            if err is None:
                err = value.err
            value = value.value
        if isinstance(value, (int, str, Fraction)):
            value = Fraction(value)
            err = Fraction(0) if err is None else Fraction(err)
        elif isinstance(value, float) or isinstance(value, mp.mpf):
            value = mp.mpf(value)
            err = _ulp(value) if err is None else mp.mpf(err)
        else:
            raise TypeError(f"cannot build a Scalar from {type(value).__name__}")
        self.value = value
        self.err = err

    @classmethod
    def exact(cls, x) -> "Scalar":
        return cls(Fraction(x), Fraction(0))

    @classmethod
    def approx(cls, x, err=None) -> "Scalar":
        if isinstance(x, Scalar):
            x = x.value
        if isinstance(x, str) and "/" in x:
            x = Fraction(x)
        v = _to_mpf(x)
        return cls(v, _ulp(v) if err is None else mp.mpf(err))

    @classmethod
    def coerce(cls, x: ScalarLike) -> "Scalar":
        return x if isinstance(x, Scalar) else cls(x)

    @property
    def is_exact(self) -> bool:
        return isinstance(self.value, Fraction)

    def _promoted(self) -> "Scalar":
        if not self.is_exact:
            return self
        v = _to_mpf(self.value)
        return Scalar(v, _ulp(v) + _to_mpf(self.err))

    def _pair(self, other):
        o = Scalar.coerce(other)
        if self.is_exact and o.is_exact:
            return self, o, True
        return self._promoted(), o._promoted(), False

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        a, b, exact = self._pair(other)
        v = a.value + b.value
        e = a.err + b.err
        return Scalar(v, e if exact else e + _ulp(v))

    __radd__ = __add__

    def __sub__(self, other):
        a, b, exact = self._pair(other)
        v = a.value - b.value
        e = a.err + b.err
        return Scalar(v, e if exact else e + _ulp(v))

    def __rsub__(self, other):
        return Scalar.coerce(other).__sub__(self)

    def __mul__(self, other):
        a, b, exact = self._pair(other)
        v = a.value * b.value
        e = abs(a.value) * b.err + abs(b.value) * a.err + a.err * b.err
        return Scalar(v, e if exact else e + _ulp(v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b, exact = self._pair(other)
        v = a.value / b.value
        denom = abs(b.value) - b.err
        if denom <= 0:
            raise ZeroDivisionError("divisor error bound covers zero")
        e = (a.err + abs(v) * b.err) / denom
        return Scalar(v, e if exact else e + _ulp(v))

    def __rtruediv__(self, other):
        return Scalar.coerce(other).__truediv__(self)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are supported")
        out = Scalar.exact(1)
        for _ in range(n):
            out = out * self
        return out

    def __neg__(self):
        return Scalar(-self.value, self.err)

    def __abs__(self):
        return Scalar(abs(self.value), self.err)

    # -- comparisons (on values; error bounds are not consulted) ------

    def _cmp_values(self, other):
        o = Scalar.coerce(other)
        if self.is_exact and o.is_exact:
            return self.value, o.value
        return _to_mpf(self.value), _to_mpf(o.value)

    def __lt__(self, other):
        a, b = self._cmp_values(other)
        return a < b

    def __le__(self, other):
        a, b = self._cmp_values(other)
        return a <= b

    def __gt__(self, other):
        a, b = self._cmp_values(other)
        return a > b

    def __ge__(self, other):
        a, b = self._cmp_values(other)
        return a >= b

    def __eq__(self, other):
        try:
            a, b = self._cmp_values(other)
        except TypeError:
            return NotImplemented
        return a == b

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash(self.value)

    # -- conversion / display -----------------------------------------

    def __float__(self):
        return float(self.value)

    def to_string(self) -> str:
        if self.is_exact:
            return str(self.value)
        return mp.nstr(self.value, mp.dps)

    def __repr__(self):
        if self.is_exact:
            return f"Scalar({self.value})"
        return f"Scalar({self.to_string()}±{mp.nstr(self.err, 3)})"


def scalars_match(a: ScalarLike, b: ScalarLike, slack: int = 10) -> bool:
    """Equality up to accumulated error: exact equality in exact mode,
    |a-b| <= slack*(err_a+err_b) + a precision-level floor otherwise."""
    a = Scalar.coerce(a)
    b = Scalar.coerce(b)
    if a.is_exact and b.is_exact:
        return a.value == b.value
    av, bv = _to_mpf(a.value), _to_mpf(b.value)
    floor = max(mp.mpf(1), abs(av), abs(bv)) * mp.mpf(2) ** (8 - mp.prec)
    return abs(av - bv) <= slack * (_to_mpf(a.err) + _to_mpf(b.err)) + floor


@dataclass(frozen=True)
class Interval:
    """Closed interval with strictly ordered endpoints (no degenerate
    intervals: basic intervals and gaps always have positive length)."""

    lo: Scalar
    hi: Scalar

    def __post_init__(self):
        object.__setattr__(self, "lo", Scalar.coerce(self.lo))
        object.__setattr__(self, "hi", Scalar.coerce(self.hi))
        if not self.lo < self.hi:
            raise ValueError(f"degenerate interval [{self.lo}, {self.hi}]")

    @property
    def length(self) -> Scalar:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Scalar:
        return (self.lo + self.hi) / 2

    def contains_point(self, x: ScalarLike) -> bool:
        x = Scalar.coerce(x)
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "Interval", slack: bool = False) -> bool:
        if slack:
            return ((self.lo <= other.lo or scalars_match(self.lo, other.lo))
                    and (other.hi <= self.hi or scalars_match(other.hi, self.hi)))
        return self.lo <= other.lo and other.hi <= self.hi

    def intersects(self, other: "Interval") -> bool:
        # closed semantics: shared endpoints count as intersecting
        return not (self.hi < other.lo or other.hi < self.lo)

    def key(self):
        return (self.lo.value, self.hi.value)

    def __repr__(self):
        return f"[{self.lo.to_string()}, {self.hi.to_string()}]"


def interval_image(m, interval: Interval) -> Interval:
    """Image hull of an interval under a strictly monotone map: evaluate the
    endpoints and order them (handles decreasing maps)."""
    dom = getattr(m, "domain", None)
    if dom is not None and not dom.contains_interval(interval, slack=True):
        raise DomainViolation(f"{interval} exceeds the map domain {dom}")
    a = m(interval.lo)
    b = m(interval.hi)
    return Interval(a, b) if a < b else Interval(b, a)


def hull(intervals: Iterable[Interval]) -> Interval:
    """Convex hull of a nonempty collection of intervals."""
    ivs = list(intervals)
    if not ivs:
        raise EmptyInput("hull of an empty collection")
    return Interval(min(iv.lo for iv in ivs), max(iv.hi for iv in ivs))


def pairwise_disjoint(intervals: Iterable[Interval]) -> bool:
    """True iff no two closed intervals intersect (touching endpoints fail)."""
    ivs = sorted(intervals, key=lambda iv: iv.lo)
    return all(a.hi < b.lo for a, b in zip(ivs, ivs[1:]))


def _point_distance(x: Scalar, sorted_ivs: Sequence[Interval]) -> Scalar:
    # distance from a point to a union of sorted disjoint intervals
    lo_idx, hi_idx = 0, len(sorted_ivs)
    while lo_idx < hi_idx:  # rightmost interval with lo <= x
        mid = (lo_idx + hi_idx) // 2
        if sorted_ivs[mid].lo <= x:
            lo_idx = mid + 1
        else:
            hi_idx = mid
    idx = lo_idx - 1
    best = None
    if idx >= 0:
        if x <= sorted_ivs[idx].hi:
            return x - x  # zero in the active mode
        best = x - sorted_ivs[idx].hi
    if idx + 1 < len(sorted_ivs):
        d = sorted_ivs[idx + 1].lo - x
        best = d if best is None or d < best else best
    return best


def hausdorff_distance(xs: Sequence[Interval], ys: Sequence[Interval]) -> Scalar:
    """Hausdorff distance between two unions of closed intervals, exact in
    rational mode.  Candidate extrema are interval endpoints plus midpoints
    of the other set's gaps."""
    if not xs or not ys:
        raise EmptyInput("hausdorff_distance needs nonempty interval sets")
    a = sorted(xs, key=lambda iv: iv.lo)
    b = sorted(ys, key=lambda iv: iv.lo)
    return max(_one_sided_hausdorff(a, b), _one_sided_hausdorff(b, a))


def _one_sided_hausdorff(a: Sequence[Interval], b: Sequence[Interval]) -> Scalar:
    mids = [(p.hi + q.lo) / 2 for p, q in zip(b, b[1:])]
    best = Scalar.exact(0)
    mid_i = 0
    for iv in a:
        cands = [iv.lo, iv.hi]
        while mid_i > 0 and mids[mid_i - 1] > iv.lo:
            mid_i -= 1
        while mid_i < len(mids) and mids[mid_i] < iv.lo:
            mid_i += 1
        j = mid_i
        while j < len(mids) and mids[j] < iv.hi:
            cands.append(mids[j])
            j += 1
        for c in cands:
            d = _point_distance(c, b)
            if d > best:
                best = d
    return best
