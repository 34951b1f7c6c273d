"""Contracting interval self-maps and validated families of them.

Maps are strictly monotone affine or quadratic functions on a closed
interval; compositions of those appear when a system is squared.  A family
is a usable iterated function system when every map contracts into the
shared domain and the images are pairwise disjoint.  ``validate`` reports
those facts rather than raising, so ill-formed declarations can still be
inspected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .numerics import (
    Interval,
    Scalar,
    hull,
    interval_image,
    pairwise_disjoint,
    scalars_match,
)

__all__ = [
    "NotContracting",
    "RestrictionEscapesDomain",
    "ImageOverlap",
    "AffineMap",
    "QuadraticMap",
    "ComposedMap",
    "MapSpec",
    "IfsSpec",
    "map_equal",
    "affine_system",
    "mirror_closure",
    "stage_one_gaps",
    "ValidationReport",
    "validate",
    "NormalizedPair",
    "normalize_endpoints",
    "compose_system",
]


class NotContracting(ValueError):
    """A system expected to be contracting fails validation."""


class RestrictionEscapesDomain(ValueError):
    """Restricting a map to a smaller interval pushed its image outside."""


class ImageOverlap(ValueError):
    """Map images that must be disjoint are not."""


@dataclass(frozen=True)
class AffineMap:
    slope: Scalar
    offset: Scalar
    domain: Interval

    def __post_init__(self):
        object.__setattr__(self, "slope", Scalar.coerce(self.slope))
        object.__setattr__(self, "offset", Scalar.coerce(self.offset))
        if self.slope == 0:
            raise ValueError("affine map must have nonzero slope")

    def __call__(self, x):
        return self.slope * x + self.offset

    def derivative(self, x):
        return self.slope

    def derivative_range(self, over: Optional[Interval] = None) -> Tuple[Scalar, Scalar]:
        return (self.slope, self.slope)

    @property
    def increasing(self) -> bool:
        return self.slope > 0

    def restrict(self, domain: Interval) -> "AffineMap":
        return AffineMap(self.slope, self.offset, domain)

    def mirror_pointwise(self, center: Scalar) -> "AffineMap":
        return AffineMap(-self.slope, 2 * center - self.offset, self.domain)

    def mirror_conjugate(self, center: Scalar) -> "AffineMap":
        # f̄(x) = 2c - f(2c - x) = slope*x + 2c*(1 - slope) - offset
        return AffineMap(self.slope,
                         2 * center * (1 - self.slope) - self.offset,
                         self.domain)


@dataclass(frozen=True)
class QuadraticMap:
    """x -> c0 + c1*x + c2*x**2, strictly monotone on its domain."""

    c0: Scalar
    c1: Scalar
    c2: Scalar
    domain: Interval

    def __post_init__(self):
        for name in ("c0", "c1", "c2"):
            object.__setattr__(self, name, Scalar.coerce(getattr(self, name)))

    def __call__(self, x):
        return self.c0 + x * (self.c1 + x * self.c2)

    def derivative(self, x):
        return self.c1 + 2 * self.c2 * x

    def derivative_range(self, over: Optional[Interval] = None) -> Tuple[Scalar, Scalar]:
        # the derivative is affine in x, so its range is spanned by endpoints
        iv = over if over is not None else self.domain
        a = self.derivative(iv.lo)
        b = self.derivative(iv.hi)
        return (a, b) if a <= b else (b, a)

    @property
    def increasing(self) -> bool:
        lo, _ = self.derivative_range()
        return lo > 0

    def restrict(self, domain: Interval) -> "QuadraticMap":
        return QuadraticMap(self.c0, self.c1, self.c2, domain)

    def mirror_pointwise(self, center: Scalar) -> "QuadraticMap":
        return QuadraticMap(2 * center - self.c0, -self.c1, -self.c2, self.domain)

    def mirror_conjugate(self, center: Scalar) -> "QuadraticMap":
        # f̄(x) = 2c - f(2c - x)
        two_c = 2 * center
        return QuadraticMap(
            two_c - self.c0 - two_c * self.c1 - two_c * two_c * self.c2,
            self.c1 + 2 * two_c * self.c2,
            -self.c2,
            self.domain,
        )


@dataclass(frozen=True)
class ComposedMap:
    """outer ∘ inner, with evaluable derivative via the chain rule."""

    outer: "MapSpec"
    inner: "MapSpec"

    @property
    def domain(self) -> Interval:
        return self.inner.domain

    def __call__(self, x):
        return self.outer(self.inner(x))

    def derivative(self, x):
        y = self.inner(x)
        return self.outer.derivative(y) * self.inner.derivative(x)

    def derivative_range(self, over: Optional[Interval] = None) -> Tuple[Scalar, Scalar]:
        iv = over if over is not None else self.domain
        inner_rng = self.inner.derivative_range(iv)
        image = interval_image(self.inner, iv)
        outer_rng = self.outer.derivative_range(image)
        products = [a * b for a in outer_rng for b in inner_rng]
        return (min(products), max(products))

    @property
    def increasing(self) -> bool:
        return self.outer.increasing == self.inner.increasing

    def restrict(self, domain: Interval) -> "ComposedMap":
        return ComposedMap(self.outer, self.inner.restrict(domain))

    def mirror_conjugate(self, center: Scalar) -> "ComposedMap":
        # conjugation by the reflection distributes over composition
        return ComposedMap(self.outer.mirror_conjugate(center),
                           self.inner.mirror_conjugate(center))


MapSpec = Union[AffineMap, QuadraticMap, ComposedMap]


def map_equal(a: MapSpec, b: MapSpec) -> bool:
    """Structural coefficient equality (up to accumulated error)."""
    if isinstance(a, AffineMap) and isinstance(b, AffineMap):
        return scalars_match(a.slope, b.slope) and scalars_match(a.offset, b.offset)
    if isinstance(a, QuadraticMap) and isinstance(b, QuadraticMap):
        return all(scalars_match(getattr(a, c), getattr(b, c)) for c in ("c0", "c1", "c2"))
    if isinstance(a, ComposedMap) and isinstance(b, ComposedMap):
        return map_equal(a.outer, b.outer) and map_equal(a.inner, b.inner)
    return False


@dataclass(frozen=True)
class IfsSpec:
    name: str
    domain: Interval
    maps: Tuple[MapSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))
        if not self.maps:
            raise ValueError("a system needs at least one map")

    def images(self) -> List[Interval]:
        return [interval_image(m, self.domain) for m in self.maps]

    def sorted_indices(self) -> List[int]:
        imgs = self.images()
        return sorted(range(len(imgs)), key=lambda j: imgs[j].lo)


def affine_system(name: str, coeffs: Sequence[Tuple], domain=("0", "1")) -> IfsSpec:
    """Convenience builder: exact affine system from (slope, offset) pairs."""
    dom = Interval(Scalar.exact(domain[0]), Scalar.exact(domain[1]))
    maps = tuple(AffineMap(Scalar.exact(s), Scalar.exact(o), dom) for s, o in coeffs)
    return IfsSpec(name, dom, maps)


def mirror_closure(sys: IfsSpec, law: str = "conjugate") -> IfsSpec:
    """Add the mirror image of every map (about the domain center) unless an
    equal map is already present."""
    center = sys.domain.midpoint
    maps = list(sys.maps)
    for m in sys.maps:
        mirrored = m.mirror_conjugate(center) if law == "conjugate" else m.mirror_pointwise(center)
        if not any(map_equal(mirrored, other) for other in maps):
            maps.append(mirrored)
    return IfsSpec(sys.name, sys.domain, tuple(maps))


def stage_one_gaps(sys: IfsSpec) -> List[Interval]:
    """Gaps between the (sorted) first-stage images, left to right."""
    imgs = sorted(sys.images(), key=lambda iv: iv.lo)
    gaps = []
    for a, b in zip(imgs, imgs[1:]):
        if not a.hi < b.lo:
            raise ImageOverlap(f"images {a} and {b} of {sys.name} are not disjoint")
        gaps.append(Interval(a.hi, b.lo))
    return gaps


@dataclass(frozen=True)
class ValidationReport:
    contraction_ok: bool
    disjoint_ok: bool
    monotone_ok: bool
    images_within_domain: bool
    sup_derivative: Scalar
    inf_derivative: Scalar
    symmetric: bool
    mirror_law: Optional[str]
    mirror_pairs: Tuple[Tuple[int, int], ...]
    endpoint_preserving: bool
    half_derivative_ok: bool


def _abs_derivative_range(m: MapSpec) -> Tuple[Scalar, Scalar, bool]:
    lo, hi = m.derivative_range()
    if lo > 0:
        return lo, hi, True
    if hi < 0:
        return -hi, -lo, True
    return Scalar.exact(0), max(abs(lo), abs(hi)), False


def _mirror_pairing(sys: IfsSpec, law: str) -> Optional[Tuple[Tuple[int, int], ...]]:
    center = sys.domain.midpoint
    pairs = []
    for i, m in enumerate(sys.maps):
        try:
            mirrored = (m.mirror_conjugate(center) if law == "conjugate"
                        else m.mirror_pointwise(center))
        except AttributeError:
            return None
        partner = next((j for j, other in enumerate(sys.maps)
                        if map_equal(mirrored, other)), None)
        if partner is None:
            return None
        pairs.append((i, partner))
    return tuple(pairs)


def validate(sys: IfsSpec) -> ValidationReport:
    """Compute every well-formedness flag; failures are reported, not raised."""
    abs_los, abs_his = [], []
    monotone_ok = True
    for m in sys.maps:
        lo, hi, mono = _abs_derivative_range(m)
        monotone_ok = monotone_ok and mono
        abs_los.append(lo)
        abs_his.append(hi)
    inf_derivative = min(abs_los)
    sup_derivative = max(abs_his)
    contraction_ok = monotone_ok and sup_derivative < 1
    half_derivative_ok = monotone_ok and sup_derivative < Fraction(1, 2)

    images = sys.images()
    images_within = all(sys.domain.contains_interval(img, slack=True) for img in images)
    disjoint_ok = pairwise_disjoint(images)

    envelope = hull(images)
    endpoint_preserving = (scalars_match(envelope.lo, sys.domain.lo)
                           and scalars_match(envelope.hi, sys.domain.hi))

    pairs_conj = _mirror_pairing(sys, "conjugate")
    pairs_point = _mirror_pairing(sys, "pointwise")
    if pairs_conj is not None and pairs_point is not None:
        law, pairs = "both", pairs_conj
    elif pairs_conj is not None:
        law, pairs = "conjugate", pairs_conj
    elif pairs_point is not None:
        law, pairs = "pointwise", pairs_point
    else:
        law, pairs = None, ()

    return ValidationReport(
        contraction_ok=contraction_ok,
        disjoint_ok=disjoint_ok,
        monotone_ok=monotone_ok,
        images_within_domain=images_within,
        sup_derivative=sup_derivative,
        inf_derivative=inf_derivative,
        symmetric=law is not None,
        mirror_law=law,
        mirror_pairs=pairs,
        endpoint_preserving=endpoint_preserving,
        half_derivative_ok=half_derivative_ok,
    )


@dataclass(frozen=True)
class NormalizedPair:
    f_sys: IfsSpec
    g_sys: IfsSpec
    domain: Interval
    f_min: Scalar
    f_max: Scalar
    g_min: Scalar
    g_max: Scalar
    f_endpoint_preserving: bool
    g_endpoint_preserving: bool


def normalize_endpoints(f_sys: IfsSpec, g_sys: IfsSpec, tol="1e-12") -> NormalizedPair:
    """Restrict both systems to the hull of their limit sets.

    The new common domain is [min of both limit minima, max of both limit
    maxima]; every map keeps its formula but is re-declared on the smaller
    interval.  The returned record notes whether each restricted system now
    spans its domain (an endpoint-preserving pair behaves rigidly at the
    edges; an uneven pair does not, and the limit minima recorded here show
    by how much).
    """
    for name, sys in (("first", f_sys), ("second", g_sys)):
        report = validate(sys)
        if not (report.contraction_ok and report.disjoint_ok):
            raise NotContracting(f"{name} system {sys.name} fails validation")
    if not (scalars_match(f_sys.domain.lo, g_sys.domain.lo)
            and scalars_match(f_sys.domain.hi, g_sys.domain.hi)):
        raise ValueError("systems must share a domain")

    from .attractor import extreme_point  # deferred: attractor builds on systems
    from .words import EventuallyPeriodic

    def limits(sys: IfsSpec):
        word = EventuallyPeriodic((), (sys.name,))
        table = {sys.name: sys}
        return (extreme_point(word, table, "min", tol),
                extreme_point(word, table, "max", tol))

    f_min, f_max = limits(f_sys)
    g_min, g_max = limits(g_sys)
    lo = min(f_min, g_min)
    hi = max(f_max, g_max)
    new_domain = Interval(lo, hi)

    def restricted(sys: IfsSpec) -> IfsSpec:
        maps = tuple(m.restrict(new_domain) for m in sys.maps)
        out = IfsSpec(sys.name + "*", new_domain, maps)
        for m, img in zip(maps, out.images()):
            if not new_domain.contains_interval(img, slack=True):
                raise RestrictionEscapesDomain(
                    f"map image {img} of {sys.name} leaves {new_domain}")
        return out

    f_star = restricted(f_sys)
    g_star = restricted(g_sys)
    return NormalizedPair(
        f_sys=f_star,
        g_sys=g_star,
        domain=new_domain,
        f_min=f_min,
        f_max=f_max,
        g_min=g_min,
        g_max=g_max,
        f_endpoint_preserving=validate(f_star).endpoint_preserving,
        g_endpoint_preserving=validate(g_star).endpoint_preserving,
    )


def _compose(outer: MapSpec, inner: MapSpec) -> MapSpec:
    if isinstance(outer, AffineMap) and isinstance(inner, AffineMap):
        return AffineMap(outer.slope * inner.slope,
                         outer.slope * inner.offset + outer.offset,
                         inner.domain)
    return ComposedMap(outer, inner)


def compose_system(sys: IfsSpec) -> IfsSpec:
    """The system of all pairwise compositions (outer ∘ inner, product
    order); its stage sets at depth n coincide with the original's at 2n."""
    maps = tuple(_compose(outer, inner) for outer in sys.maps for inner in sys.maps)
    composed = IfsSpec(sys.name + "²", sys.domain, maps)
    if not pairwise_disjoint(composed.images()):
        raise ImageOverlap(f"compositions of {sys.name} have overlapping images")
    return composed
