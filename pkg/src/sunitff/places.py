"""Places of F_q(t): valuations, degrees, heights and the support weight.

A place is either a monic irreducible polynomial (a finite place) or the
degree valuation at infinity; deg(v) is the residue degree over F_q, which is
the degree of the defining polynomial for finite places and 1 at infinity.

Valuations obey the sum formula sum_v v(x) deg(v) = 0, which makes the
projective height well defined.  Support computation factors numerator and
denominator once and caches the result on the rational function, since
valuations get queried repeatedly in enumeration loops.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from .field import (FieldContext, Poly, RatFunc, is_irreducible,
                    poly_from_term_text)


class Place:
    """A place of F_q(t): Finite(monic irreducible) or the infinite place."""

    __slots__ = ("ctx", "poly")

    def __init__(self, ctx: FieldContext, poly: Poly | None):
        if poly is not None:
            if not ctx.same_field(poly.ctx):
                raise ValueError("mixed field contexts")
            if not poly.is_monic or not is_irreducible(poly):
                raise ValueError(
                    f"finite place requires a monic irreducible, got {poly!r}")
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "poly", poly)

    def __setattr__(self, name, value):
        raise AttributeError("Place is immutable")

    @classmethod
    def finite(cls, poly: Poly) -> "Place":
        return cls(poly.ctx, poly)

    @classmethod
    def infinite(cls, ctx: FieldContext) -> "Place":
        return cls(ctx, None)

    @property
    def is_infinite(self) -> bool:
        return self.poly is None

    @property
    def deg(self) -> int:
        return 1 if self.poly is None else len(self.poly.coeffs) - 1

    def sort_key(self):
        # finite places ordered by (degree, coefficients); infinite place last
        if self.poly is None:
            return (1, 0, ())
        return (0, len(self.poly.coeffs), self.poly.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Place):
            return NotImplemented
        if (self.ctx.p, self.ctx.m) != (other.ctx.p, other.ctx.m):
            return False
        if self.poly is None or other.poly is None:
            return self.poly is None and other.poly is None
        return self.poly.coeffs == other.poly.coeffs

    def __hash__(self):
        key = None if self.poly is None else self.poly.coeffs
        return hash((self.ctx.p, self.ctx.m, key))

    def literal(self) -> str:
        return "inf" if self.poly is None else self.poly.to_term_text()

    def __repr__(self):
        return f"Place({self.literal()!r})"


class PlaceSet:
    """Finite ordered set of distinct places, canonically sorted.

    Ordering: finite places by (degree, coefficients), the infinite place
    last, so exponent-vector layouts over the set are deterministic.
    """

    __slots__ = ("ctx", "places")

    def __init__(self, ctx: FieldContext, places: Iterable[Place]):
        places = sorted(places, key=Place.sort_key)
        for a, b in zip(places, places[1:]):
            if a == b:
                raise ValueError(f"duplicate place {a.literal()!r}")
        for v in places:
            if (v.ctx.p, v.ctx.m) != (ctx.p, ctx.m):
                raise ValueError("place from a different field context")
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "places", tuple(places))

    def __setattr__(self, name, value):
        raise AttributeError("PlaceSet is immutable")

    def __iter__(self) -> Iterator[Place]:
        return iter(self.places)

    def __len__(self) -> int:
        return len(self.places)

    def __contains__(self, place: Place) -> bool:
        return place in self.places

    def __eq__(self, other):
        if not isinstance(other, PlaceSet):
            return NotImplemented
        return self.places == other.places

    def __hash__(self):
        return hash(self.places)

    @property
    def omega(self) -> int:
        """Total degree of the set: sum of deg(v)."""
        return sum(v.deg for v in self.places)

    @property
    def finite_places(self) -> tuple[Place, ...]:
        return tuple(v for v in self.places if not v.is_infinite)

    @property
    def has_infinite(self) -> bool:
        return any(v.is_infinite for v in self.places)

    def literal(self) -> str:
        return ",".join(v.literal() for v in self.places)

    def __repr__(self):
        return f"PlaceSet({self.literal()!r})"


def parse_place(ctx: FieldContext, text: str) -> Place:
    """Parse a place literal: 'inf' or a monic irreducible like 't^2+t+1'."""
    s = text.strip()
    if s.lower() in ("inf", "infinity", "oo"):
        return Place.infinite(ctx)
    return Place.finite(poly_from_term_text(ctx, s))


def parse_place_set(ctx: FieldContext, text: str) -> PlaceSet:
    parts = [part for part in text.split(",") if part.strip()]
    if not parts:
        raise ValueError("empty place set literal")
    return PlaceSet(ctx, [parse_place(ctx, part) for part in parts])


def support(x: RatFunc) -> dict[Place, int]:
    """Map of places with nonzero valuation to their valuations (cached)."""
    if x.is_zero:
        raise ValueError("support of zero is undefined")
    cached = x._support
    if cached is not None:
        return cached
    from .field import poly_factor

    ctx = x.ctx
    out: dict[Place, int] = {}
    for poly, mult in poly_factor(x.num):
        out[Place.finite(poly)] = mult
    for poly, mult in poly_factor(x.den):
        place = Place.finite(poly)
        out[place] = out.get(place, 0) - mult
    deg_num = len(x.num.coeffs) - 1
    deg_den = len(x.den.coeffs) - 1
    if deg_num != deg_den:
        out[Place.infinite(ctx)] = deg_den - deg_num
    x._set_support(out)
    return out


def valuation(place: Place, x: RatFunc) -> int:
    """Order of vanishing of nonzero x at the place (negative at poles)."""
    if x.is_zero:
        raise ValueError("valuation of zero is undefined")
    return support(x).get(place, 0)


def height(x: RatFunc) -> int:
    """H(x) = [F_q(t) : F_q(x)]: max of num/den degrees, 0 for constants."""
    if x.is_constant:
        return 0
    return max(len(x.num.coeffs), len(x.den.coeffs)) - 1


def height_from_valuations(x: RatFunc) -> int:
    """Height via sum of positive valuation parts; independent of height()."""
    if x.is_zero:
        return 0
    return sum(v.deg * val for v, val in support(x).items() if val > 0)


def pole_height_from_valuations(x: RatFunc) -> int:
    """Height via the negative valuation parts; equals the positive-part sum."""
    if x.is_zero:
        return 0
    return -sum(v.deg * val for v, val in support(x).items() if val < 0)


def projective_height(coords: Sequence[RatFunc]) -> int:
    """Projective height of (x_0 : ... : x_n); invariant under scaling.

    Zero coordinates are allowed (their valuations count as +infinity) but
    not all coordinates may vanish.
    """
    nonzero = [x for x in coords if not x.is_zero]
    if not nonzero:
        raise ValueError("projective point must have a nonzero coordinate")
    place_union: set[Place] = set()
    supports = [support(x) for x in nonzero]
    for sup in supports:
        place_union.update(sup)
    total = 0
    for place in place_union:
        total += place.deg * min(sup.get(place, 0) for sup in supports)
    return -total


def omega(x: RatFunc) -> int:
    """Support weight: total degree of places where x has nonzero valuation."""
    if x.is_zero:
        raise ValueError("omega of zero is undefined")
    return sum(v.deg for v in support(x))
