"""The derivation d/dt on F_q(t), p-th roots, and derivation-generic places.

The kernel of D = d/dt on K = F_q(t) is exactly K^p, so membership in K^p,
p-th roots and Frobenius depth all reduce to derivative computations plus
coefficient-wise inverse Frobenius.  The logarithmic derivative Df/f of a
non-p-th-power f satisfies the height bound

    H(Df/f) <= omega(f) + 2g - 2 + 2*gamma

with g and gamma read from the field context (0 and 1 for this backend).

A place v is derivation-generic when v(Dx/x) = -1 for every x with p not
dividing v(x), and v(Dx/x) >= 0 whenever p divides v(x).  For d/dt on
F_q(t) exactly the finite places are generic; the infinite place fails on
the witness x = t.  Genericity over all of K^* is not decidable by
enumeration, so reports carry an optional sampling cross-check of
structured candidates rather than a universal certificate.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .field import FieldContext, Poly, RatFunc, irreducibles, poly_pth_root
from .places import Place, height, omega, valuation


def derive(x: RatFunc) -> RatFunc:
    """Apply d/dt via the quotient rule; F_q-linear and Leibniz-compatible."""
    num, den = x.num, x.den
    return RatFunc(num.derivative() * den - num * den.derivative(), den * den)


def log_derivative(f: RatFunc) -> RatFunc:
    """Df/f in reduced form; zero exactly when f is a p-th power."""
    if f.is_zero:
        raise ValueError("logarithmic derivative of zero is undefined")
    result = derive(f) / f
    if __debug__ and not result.is_zero and not f.is_constant:
        ctx = f.ctx
        bound = omega(f) + 2 * ctx.genus - 2 + 2 * ctx.gonality
        assert height(result) <= bound, (
            f"logarithmic derivative height {height(result)} exceeds "
            f"support bound {bound}")
    return result


def is_pth_power(x: RatFunc) -> bool:
    """True iff x lies in K^p, i.e. Dx = 0 for nonzero x."""
    if x.is_zero:
        raise ValueError("zero has no p-th power classification here")
    return derive(x).is_zero


def pth_root(x: RatFunc) -> RatFunc:
    """The unique r with r^p = x; requires x in K^p."""
    if x.is_zero:
        raise ValueError("p-th root of zero is undefined here")
    if not is_pth_power(x):
        raise ValueError("argument is not a p-th power")
    return RatFunc(poly_pth_root(x.num), poly_pth_root(x.den))


def frobenius_depth(x: RatFunc) -> tuple[int, RatFunc]:
    """Maximal k and core with x = core^(p^k) and core outside K^p.

    Constants are rejected: they are fixed by a power of Frobenius, so no
    maximal k exists.
    """
    if x.is_zero or x.is_constant:
        raise ValueError("Frobenius depth is undefined for constants")
    k = 0
    core = x
    while is_pth_power(core):
        core = pth_root(core)
        k += 1
    return k, core


@dataclass(frozen=True)
class GenericityReport:
    """Outcome of a derivation-genericity check for one place."""

    place: Place
    is_generic: bool
    witness: tuple[RatFunc, int] | None
    samples_checked: int = 0

    def __post_init__(self):
        if not self.is_generic and self.witness is None:
            raise ValueError("non-generic verdict requires a witness")


def _structured_samples(ctx: FieldContext, place: Place, count: int, rng):
    """Products pi^a * rho^b * c probing both genericity conditions at place."""
    p = ctx.p
    if place.is_infinite:
        pi = Poly.gen(ctx)
    else:
        pi = place.poly
    others = []
    for d in (1, 2):
        for f in irreducibles(ctx, d):
            if place.is_infinite or f != pi:
                others.append(f)
            if len(others) >= 6:
                break
        if len(others) >= 6:
            break
    base = RatFunc(pi)
    for _ in range(count):
        a = rng.randrange(-6, 7)
        if a % p == 0 and rng.random() < 0.7:
            a += 1  # bias towards the p-coprime condition
        b = rng.randrange(-3, 4)
        c = rng.randrange(1, ctx.q)
        rho = RatFunc(others[rng.randrange(len(others))])
        x = RatFunc.constant(ctx, c) * base ** a * rho ** b
        if not x.is_constant:
            yield x


def _check_conditions(place: Place, x: RatFunc) -> tuple[bool, int | None]:
    """Evaluate both genericity conditions for one sample at one place."""
    p = x.ctx.p
    vx = valuation(place, x)
    lx = derive(x) / x
    if lx.is_zero:
        return True, None  # x in K^p: both conditions vacuous
    vl = valuation(place, lx)
    if vx % p != 0:
        return vl == -1, vl
    return vl >= 0, vl


def is_d_generic(place: Place, sample_count: int = 0,
                 rng: random.Random | None = None) -> GenericityReport:
    """Classify a place of F_q(t) as d/dt-generic.

    The closed form for this backend: finite places are generic, the
    infinite place is not (witness x = t, where v(Dt/t) = v(1/t) = +1
    although v(t) = -1 is prime to p).  With sample_count > 0 the verdict
    is additionally cross-checked on structured products; a sampled
    violation overrides the closed form and becomes the witness.
    """
    ctx = place.ctx
    checked = 0
    if sample_count > 0:
        rng = rng or random.Random(0xD1CE)
        for x in _structured_samples(ctx, place, sample_count, rng):
            ok, vl = _check_conditions(place, x)
            checked += 1
            if not ok:
                return GenericityReport(place, False, (x, vl), checked)
    if place.is_infinite:
        t = RatFunc.gen(ctx)
        witness_val = valuation(place, derive(t) / t)
        return GenericityReport(place, False, (t, witness_val), checked)
    return GenericityReport(place, True, None, checked)


def pair_coefficient(a: RatFunc, b: RatFunc) -> RatFunc:
    """The differentiated-equation coefficient 1 - (a/Da)(Db/b).

    Requires a outside K^p so that Da is invertible; b may be any nonzero
    element (Db = 0 makes the coefficient 1).
    """
    if a.is_zero or b.is_zero:
        raise ValueError("coefficient requires nonzero arguments")
    da = derive(a)
    if da.is_zero:
        raise ValueError("first argument is a p-th power (Da = 0)")
    return 1 - (a / da) * (derive(b) / b)


def coefficient_weight(place: Place, a: RatFunc, b: RatFunc) -> int | float:
    """|v(1 - (a/Da)(Db/b))| at the place; +inf when the coefficient is 0.

    Both arguments must lie outside K^p.  The infinite sentinel marks the
    degenerate collision a/Da = b/Db, which callers must handle: it signals
    that the differentiated equations collapse rather than a numeric weight.
    """
    for name, value in (("a", a), ("b", b)):
        if value.is_zero or derive(value).is_zero:
            raise ValueError(f"argument {name} must lie outside K^p")
    coeff = pair_coefficient(a, b)
    if coeff.is_zero:
        return math.inf
    return abs(valuation(place, coeff))


def solution_weight(place: Place, x: RatFunc, y: RatFunc, z: RatFunc,
                    delta: RatFunc, epsilon: RatFunc) -> int | float:
    """Total local weight of a Fermat-solution datum at one place.

    |v(delta)| + |v(epsilon)| plus the six pairwise coefficient weights of
    (x, y, z), in both orders per pair.  Propagates the +inf sentinel.
    """
    if delta.is_zero or epsilon.is_zero:
        raise ValueError("delta and epsilon must be nonzero")
    total: int | float = abs(valuation(place, delta)) + abs(valuation(place, epsilon))
    for a, b in ((x, y), (y, x), (x, z), (z, x), (y, z), (z, y)):
        total += coefficient_weight(place, a, b)
    return total
