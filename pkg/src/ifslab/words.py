"""Symbolic sequences over system labels.

Three word flavours: eventually periodic, Sturmian (irrational rotation
coded through a continued-fraction convergent), and an explicit prefix
with a constant tail.  On top of generation: factor complexity, eventual
period detection, and the search for strings that keep being followed by
more than one symbol arbitrarily late.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import islice
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple, Union

from .numerics import EmptyInput

__all__ = [
    "PrecisionInsufficient",
    "InsufficientPrefix",
    "EventuallyPeriodic",
    "Sturmian",
    "Explicit",
    "Shifted",
    "WordSpec",
    "Convergent",
    "cf_to_alpha",
    "word_stream",
    "word_prefix",
    "alphabet",
    "shift_spec",
    "eventual_structure",
    "ComplexityProfile",
    "complexity",
    "detect_period",
    "ambiguous_strings",
]

Label = str


class PrecisionInsufficient(ValueError):
    """Continued-fraction truncation too coarse to classify a sample point;
    the caller must supply more terms."""


class InsufficientPrefix(ValueError):
    """The examined prefix is too short for the requested statistic."""


@dataclass(frozen=True)
class EventuallyPeriodic:
    preperiod: Tuple[Label, ...]
    period: Tuple[Label, ...]

    def __post_init__(self):
        object.__setattr__(self, "preperiod", tuple(self.preperiod))
        object.__setattr__(self, "period", tuple(self.period))
        if not self.period:
            raise ValueError("period must be nonempty")


@dataclass(frozen=True)
class Sturmian:
    """Symbols w_m = chi_[0, 1-alpha)(alpha*m mod 1), m >= 1, with alpha
    given by the truncated continued fraction [a1, a2, ...]."""

    cf_terms: Tuple[int, ...]
    label_for_one: Label = "F"
    label_for_zero: Label = "G"

    def __post_init__(self):
        object.__setattr__(self, "cf_terms", tuple(self.cf_terms))
        if not self.cf_terms:
            raise ValueError("cf_terms must be nonempty")
        if any((not isinstance(a, int)) or a < 1 for a in self.cf_terms):
            raise ValueError("cf_terms must be positive integers")


@dataclass(frozen=True)
class Explicit:
    prefix: Tuple[Label, ...]
    tail: Label

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))


@dataclass(frozen=True)
class Shifted:
    """Internal variant: ``base`` with its first ``offset`` symbols dropped."""

    base: "WordSpec"
    offset: int


WordSpec = Union[EventuallyPeriodic, Sturmian, Explicit, Shifted]


@dataclass(frozen=True)
class Convergent:
    value: Fraction
    error_bound: Fraction


def cf_to_alpha(terms: Sequence[int]) -> Convergent:
    """Value of the finite continued fraction 1/(a1 + 1/(a2 + ...)) as an
    exact rational, with the classical 1/q_n**2 error bound valid for every
    infinite extension of the given terms."""
    terms = list(terms)
    if not terms:
        raise EmptyInput("continued fraction needs at least one term")
    if any((not isinstance(a, int)) or a < 1 for a in terms):
        raise ValueError("continued-fraction terms must be positive integers")
    h_prev, h_cur = 1, 0  # numerator recurrence for [0; a1, a2, ...]
    q_prev, q_cur = 0, 1
    for a in terms:
        h_prev, h_cur = h_cur, a * h_cur + h_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
    return Convergent(Fraction(h_cur, q_cur), Fraction(1, q_cur * q_cur))


def _sturmian_stream(spec: Sturmian) -> Iterator[Label]:
    conv = cf_to_alpha(spec.cf_terms)
    alpha, bound = conv.value, conv.error_bound
    cut = 1 - alpha
    m = 0
    while True:
        m += 1
        t = (alpha * m) % 1
        # classification is only trusted when the sample clears every
        # discontinuity of the coding by more than the truncation error
        slack = (m + 1) * bound
        if min(t, 1 - t, abs(t - cut)) <= slack:
            raise PrecisionInsufficient(
                f"sample {m} is within {slack} of a coding breakpoint; "
                "supply more continued-fraction terms")
        yield spec.label_for_one if t < cut else spec.label_for_zero


def word_stream(spec: WordSpec) -> Iterator[Label]:
    """Yield the symbols of the word, index 1 first."""
    if isinstance(spec, EventuallyPeriodic):
        yield from spec.preperiod
        while True:
            yield from spec.period
    elif isinstance(spec, Explicit):
        yield from spec.prefix
        while True:
            yield spec.tail
    elif isinstance(spec, Sturmian):
        yield from _sturmian_stream(spec)
    elif isinstance(spec, Shifted):
        it = word_stream(spec.base)
        for _ in range(spec.offset):
            next(it)
        yield from it
    else:
        raise TypeError(f"not a word spec: {type(spec).__name__}")


def word_prefix(spec: WordSpec, n: int) -> List[Label]:
    if n < 0:
        raise ValueError("prefix length must be nonnegative")
    return list(islice(word_stream(spec), n))


def alphabet(spec: WordSpec) -> Tuple[Label, ...]:
    if isinstance(spec, EventuallyPeriodic):
        labels: Set[Label] = set(spec.preperiod) | set(spec.period)
    elif isinstance(spec, Explicit):
        labels = set(spec.prefix) | {spec.tail}
    elif isinstance(spec, Sturmian):
        labels = {spec.label_for_one, spec.label_for_zero}
    elif isinstance(spec, Shifted):
        return alphabet(spec.base)
    else:
        raise TypeError(f"not a word spec: {type(spec).__name__}")
    return tuple(sorted(labels))


def shift_spec(spec: WordSpec, k: int) -> WordSpec:
    """The word with its first k symbols removed."""
    if k < 0:
        raise ValueError("shift must be nonnegative")
    if k == 0:
        return spec
    if isinstance(spec, EventuallyPeriodic):
        if k <= len(spec.preperiod):
            return EventuallyPeriodic(spec.preperiod[k:], spec.period)
        r = (k - len(spec.preperiod)) % len(spec.period)
        return EventuallyPeriodic((), spec.period[r:] + spec.period[:r])
    if isinstance(spec, Explicit):
        if k <= len(spec.prefix):
            return Explicit(spec.prefix[k:], spec.tail)
        return Explicit((), spec.tail)
    if isinstance(spec, Shifted):
        return Shifted(spec.base, spec.offset + k)
    return Shifted(spec, k)


def eventual_structure(spec: WordSpec) -> Optional[Tuple[Tuple[Label, ...], Tuple[Label, ...]]]:
    """(preperiod, period) when the word is eventually periodic by
    construction, else None (Sturmian words)."""
    if isinstance(spec, EventuallyPeriodic):
        return spec.preperiod, spec.period
    if isinstance(spec, Explicit):
        return spec.prefix, (spec.tail,)
    if isinstance(spec, Shifted):
        base = eventual_structure(spec.base)
        if base is None:
            return None
        shifted = shift_spec(EventuallyPeriodic(*base), spec.offset)
        return shifted.preperiod, shifted.period
    return None


@dataclass(frozen=True)
class ComplexityProfile:
    """Distinct length-k factor counts, k = 1..k_max."""

    counts: Tuple[Tuple[int, int], ...]

    def p(self, k: int) -> int:
        for kk, count in self.counts:
            if kk == k:
                return count
        raise KeyError(k)


def complexity(spec: WordSpec, k_max: int, n_examined: int, *,
               min_ratio: int = 10) -> ComplexityProfile:
    """Count distinct length-k windows among positions 1..n_examined.

    Requires n_examined >= min_ratio * k_max (default 10) so that factor
    counts have a chance to saturate; pass min_ratio=1 to examine short
    prefixes anyway.
    """
    if k_max < 1:
        raise ValueError("k_max must be positive")
    if n_examined < min_ratio * k_max:
        raise InsufficientPrefix(
            f"n_examined={n_examined} < {min_ratio}*k_max; "
            "lower min_ratio to examine a short prefix")
    w = word_prefix(spec, n_examined)
    counts = []
    for k in range(1, k_max + 1):
        seen = {tuple(w[i:i + k]) for i in range(n_examined - k + 1)}
        counts.append((k, len(seen)))
    return ComplexityProfile(tuple(counts))


def detect_period(w: Sequence[Label]) -> Optional[Tuple[int, int]]:
    """Smallest (preperiod, period) pair regenerating the examined prefix.

    Both the preperiod and the period length are capped at ceil(len/3), the
    periodicity must persist through the end of the prefix, and at least two
    full period copies must be visible; this keeps accidental repetitions in
    the tail of an aperiodic word from masquerading as eventual periods.
    A finding is prefix-level evidence, exact only for words that are
    eventually periodic by construction.
    """
    w = list(w)
    n = len(w)
    if n == 0:
        return None
    cap = -(-n // 3)
    for q in range(0, cap + 1):
        for p in range(1, cap + 1):
            if n - q < 2 * p:
                break
            if all(w[i] == w[i + p] for i in range(q, n - p)):
                return (q, p)
    return None


def ambiguous_strings(spec: WordSpec, k: int, start: int,
                      horizon: int) -> List[Tuple[Label, ...]]:
    """All length-k factors that occur with at least two distinct following
    symbols among occurrences starting in positions [start, horizon-k]."""
    if k < 1:
        raise ValueError("k must be positive")
    if start < 1:
        raise ValueError("start must be >= 1")
    if horizon <= start + k:
        raise InsufficientPrefix("horizon must exceed start + k")
    w = word_prefix(spec, horizon)
    followers: Dict[Tuple[Label, ...], Set[Label]] = {}
    for pos in range(start, horizon - k + 1):
        i = pos - 1
        followers.setdefault(tuple(w[i:i + k]), set()).add(w[i + k])
    return sorted(s for s, nxt in followers.items() if len(nxt) >= 2)
