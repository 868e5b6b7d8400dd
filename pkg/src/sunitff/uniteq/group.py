"""S-unit groups over F_q(t): structure, height bounds and bounded enumeration.

For a place set S with |S| >= 2, the S-units form F_q^* times a free abelian
group of rank |S| - 1.  An S-unit is stored as a constant plus an integer
exponent vector over the finite places of S; when the infinite place is
missing from S the exponents satisfy sum(e_i * deg_i) = 0 so the valuation
at infinity vanishes.  Heights are computed directly in exponent space,
which keeps the enumeration loops free of polynomial arithmetic; expansion
to a rational function happens only on emission.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, NamedTuple

from ..field import FieldContext, Poly, RatFunc
from ..places import Place, PlaceSet, height


class HeightCaps(NamedTuple):
    """The two height constants controlling the family decomposition.

    coefficient_cap bounds the heights of differentiated-equation
    coefficients; solution_cap bounds coordinate heights of the
    height-limited solution class.
    """

    coefficient_cap: int
    solution_cap: int


def mason_bound(S: PlaceSet, ctx: FieldContext) -> int:
    """Height bound omega(S) + 2g - 2 for primitive two-term solutions."""
    if len(S) < 2:
        raise ValueError("place set must have at least two places")
    return S.omega + 2 * ctx.genus - 2


def height_caps(S: PlaceSet, ctx: FieldContext) -> HeightCaps:
    """Exact cap constants: c = 2*omega(S) + 4g - 4 + 4*gamma and
    c' = 2c*(omega(S) + 4c + 2g - 2) + 3c."""
    if len(S) < 2:
        raise ValueError("place set must have at least two places")
    w = S.omega
    g = ctx.genus
    c = 2 * w + 4 * g - 4 + 4 * ctx.gonality
    c_prime = 2 * c * (w + 4 * c + 2 * g - 2) + 3 * c
    return HeightCaps(c, c_prime)


@dataclass(frozen=True)
class SUnit:
    """An S-unit in exponent form: constant * prod(pi_i ^ e_i)."""

    constant: int
    exponents: tuple[int, ...]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def _degree_kernel_basis(degrees: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Basis of the integer kernel of e -> sum(e_i * degrees_i).

    Built by a unimodular column reduction driving the degree vector to
    (g, 0, ..., 0); the trailing columns then span the kernel lattice.
    """
    k = len(degrees)
    cols = [[1 if r == j else 0 for r in range(k)] for j in range(k)]
    value = degrees[0]
    for i in range(1, k):
        g, s, t = _xgcd(value, degrees[i])
        col0 = [s * cols[0][r] + t * cols[i][r] for r in range(k)]
        coli = [-(degrees[i] // g) * cols[0][r] + (value // g) * cols[i][r]
                for r in range(k)]
        cols[0], cols[i] = col0, coli
        value = g
    return [tuple(col) for col in cols[1:]]


class SUnitGroup:
    """The S-unit group of F_q(t) for a fixed place set S (|S| >= 2)."""

    __slots__ = ("ctx", "S", "finite", "degrees", "has_infinite", "basis",
                 "rank", "_finite_polys")

    def __init__(self, ctx: FieldContext, S: PlaceSet):
        if len(S) < 2:
            raise ValueError("S-unit group requires |S| >= 2")
        finite = S.finite_places
        if not finite:
            raise ValueError("S must contain at least one finite place")
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "finite", finite)
        object.__setattr__(self, "degrees", tuple(v.deg for v in finite))
        object.__setattr__(self, "has_infinite", S.has_infinite)
        object.__setattr__(self, "_finite_polys", tuple(v.poly for v in finite))
        object.__setattr__(self, "rank", len(S) - 1)
        if self.has_infinite:
            vectors = [tuple(1 if j == i else 0 for j in range(len(finite)))
                       for i in range(len(finite))]
        else:
            vectors = _degree_kernel_basis(self.degrees)
        basis = tuple(self.expand(SUnit(1, vec)) for vec in vectors)
        object.__setattr__(self, "basis", basis)
        for b in basis:
            if not self.is_sunit(b):
                raise AssertionError("basis element failed the S-unit scan")

    def __setattr__(self, name, value):
        raise AttributeError("SUnitGroup is immutable")

    # -- conversions -----------------------------------------------------------

    def expand(self, unit: SUnit) -> RatFunc:
        """Expand exponent form into a reduced rational function."""
        ctx = self.ctx
        if not (0 < unit.constant < ctx.q):
            raise ValueError("constant part must lie in F_q^*")
        num = Poly.constant(ctx, unit.constant)
        den = Poly.one(ctx)
        for poly, e in zip(self._finite_polys, unit.exponents):
            if e > 0:
                num = num * poly ** e
            elif e < 0:
                den = den * poly ** (-e)
        x = RatFunc(num, den)
        if __debug__:
            assert self.is_sunit(x), "expanded S-unit failed the valuation scan"
        return x

    def exponent_height(self, exponents: tuple[int, ...]) -> int:
        """Height of constant * prod(pi^e) computed in exponent space."""
        pos = 0
        tot = 0
        for e, d in zip(exponents, self.degrees):
            if e > 0:
                pos += e * d
            tot += e * d
        return pos + max(0, -tot)

    # -- membership --------------------------------------------------------------

    def _strip(self, poly: Poly, divisor: Poly) -> tuple[Poly, int]:
        count = 0
        while not poly.is_constant:
            quot, rem = divmod(poly, divisor)
            if not rem.is_zero:
                break
            poly = quot
            count += 1
        return poly, count

    def is_sunit(self, x: RatFunc) -> bool:
        """Valuation support scan: no factorization, just division loops."""
        if x.is_zero:
            return False
        num, den = x.num, x.den
        if not self.has_infinite and len(num.coeffs) != len(den.coeffs):
            return False
        for poly in self._finite_polys:
            num, _ = self._strip(num, poly)
            den, _ = self._strip(den, poly)
        return num.is_constant and den.is_constant

    def to_sunit(self, x: RatFunc) -> SUnit | None:
        """Exponent form of x, or None when x is not an S-unit."""
        if x.is_zero:
            return None
        if not self.has_infinite and len(x.num.coeffs) != len(x.den.coeffs):
            return None
        num, den = x.num, x.den
        exponents = []
        for poly in self._finite_polys:
            num, a = self._strip(num, poly)
            den, b = self._strip(den, poly)
            exponents.append(a - b)
        if not (num.is_constant and den.is_constant):
            return None
        # x is reduced with monic denominator, so the residue is c / 1
        return SUnit(num.coeffs[0], tuple(exponents))

    # -- enumeration --------------------------------------------------------------

    def exponent_vectors(self, height_cap: int) -> Iterator[tuple[int, ...]]:
        """All exponent vectors of height <= cap, in lexicographic order."""
        if height_cap < 0:
            return
        ranges = [range(-(height_cap // d), height_cap // d + 1)
                  for d in self.degrees]
        need_balance = not self.has_infinite
        degrees = self.degrees
        for vec in itertools.product(*ranges):
            if need_balance and sum(e * d for e, d in zip(vec, degrees)) != 0:
                continue
            if self.exponent_height(vec) <= height_cap:
                yield vec

    def enumerate_sunits(self, height_cap: int) -> Iterator[SUnit]:
        """Exactly the S-units of height <= cap, each once, in a fixed order."""
        for vec in self.exponent_vectors(height_cap):
            for c in self.ctx.units():
                yield SUnit(c, vec)

    def candidate_count(self, height_cap: int) -> int:
        """Number of S-units with height <= cap (used for budget arithmetic)."""
        vectors = sum(1 for _ in self.exponent_vectors(height_cap))
        return vectors * (self.ctx.q - 1)

    def __repr__(self):
        return f"SUnitGroup(S={self.S.literal()!r}, q={self.ctx.q})"
