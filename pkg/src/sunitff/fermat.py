"""Fermat surfaces x^N + y^N + z^N = 1 over F_p(t): curves, lines, probes.

Three constructions make the hypotheses of the no-solution theorem sharp:

* an explicit curve with y/z a p-th power, built from N-th roots of the
  twisted equation alpha y^N + (1 - alpha) z^N = 1 via the Frobenius trick
  alpha^(p^k) + (1 - alpha)^(p^k) = 1;
* the same curve pushed through a reciprocal coordinate substitution so the
  FIRST coordinate becomes a p-th power;
* for p = 1 mod 4 and N = p^s + 1, honest lines lying on every surface of
  that exponent family simultaneously.

The goodness sieve classifies exponents N for which small congruences
a p^s + b = 0 mod N are impossible; surfaces with N = p^s + 1 always fail
it at x = 1, matching the existence of the lines.  The probe enumerates
all bounded-height solutions and documents which p-th-power hypothesis
each one violates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

from .calculus import derive, is_pth_power
from .field import FieldContext, Poly, RatFunc, is_prime
from .places import height


@dataclass(frozen=True)
class GoodnessReport:
    """Result of the (x, p)-goodness sieve for a modulus N.

    good is False iff a p^s + b = 0 mod N has a solution with
    0 < a, b <= x and s >= 0; then witness = (a, b, s).  gcd(N, p) is
    recorded because the no-solution theorem needs it to be 1.
    """

    N: int
    x: int
    p: int
    good: bool
    witness: tuple[int, int, int] | None
    gcd_N_p: int


def is_good(N: int, x: int, p: int) -> GoodnessReport:
    """Sieve the congruence a p^s + b = 0 mod N over 0 < a, b <= x.

    s scans one full cycle of p modulo N; s < N safely over-approximates
    the multiplicative order, so absence of a witness is conclusive.
    """
    if N <= 0 or x <= 0:
        raise ValueError("N and x must be positive")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    g = math.gcd(N, p)
    power = 1 % N
    for s in range(N):
        for a in range(1, x + 1):
            b = (-a * power) % N
            if b == 0:
                b = N
            if b <= x:
                return GoodnessReport(N, x, p, False, (a, b, s), g)
        power = power * p % N
    return GoodnessReport(N, x, p, True, None, g)


def _legendre(a: int, n: int) -> int:
    value = pow(a % n, (n - 1) // 2, n)
    return -1 if value == n - 1 else value


def sufficient_good_primes(x: int, p: int, limit: int) -> list[int]:
    """Primes N <= limit passing the quadratic-residue sufficient condition.

    Keeps odd primes N with (-1/N) = -1, (p/N) = 1 and (a/N) = 1 for all
    0 < a <= x.  Every survivor is cross-validated against the goodness
    sieve; the sufficient condition implying goodness is load-bearing, so
    a contradiction raises instead of being silently dropped.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if limit < 3:
        raise ValueError("limit must be at least 3")
    out = []
    for N in range(3, limit + 1, 2):
        if not is_prime(N) or N == p:
            continue
        if _legendre(-1 % N, N) != -1 or _legendre(p, N) != 1:
            continue
        if any(_legendre(a, N) != 1 for a in range(1, min(x, N - 1) + 1)):
            continue
        if x >= N:
            continue  # residues repeat mod N; a = N would be 0
        report = is_good(N, x, p)
        if not report.good:
            raise AssertionError(
                f"sufficient condition contradicted the sieve at N={N}: "
                f"witness {report.witness}")
        out.append(N)
    return out


@dataclass(frozen=True)
class FermatCurve:
    """Explicit solution curve parameterized by x, with y/z in K^p."""

    p: int
    N: int
    k: int
    x: RatFunc
    y: RatFunc
    z: RatFunc
    exponent: int
    minus_one_root: int
    licensed_by: str


def _minus_one_nth_root(p: int, N: int) -> int | None:
    """Smallest c in F_p^* with c^N = -1, if one exists."""
    for c in range(1, p):
        if pow(c, N, p) == p - 1:
            return c
    return None


def build_curve(p: int, N: int, k: int, x: RatFunc) -> FermatCurve:
    """Solve x^N + y^N + z^N = 1 for given x, with y/z forced into K^p.

    Writes alpha = 1/(1 - x^N) and takes N-th roots by exponentiation with
    (p^k - 1)/N, which needs N | p^k - 1; the sign twist in z needs an
    N-th root of -1 in F_p^* (present whenever N is odd).  The defining
    identity and y/z in K^p are asserted exactly on the result.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if N < 1 or k < 1:
        raise ValueError("N and k must be positive")
    if (p ** k - 1) % N != 0:
        raise ValueError(f"N = {N} does not divide p^k - 1 = {p ** k - 1}")
    ctx = x.ctx
    if ctx.p != p or ctx.m != 1:
        raise ValueError("curve parameter must live over F_p(t)")
    if N % 2 == 1:
        gamma = p - 1  # (-1)^N = -1: the plain sign twist works
        licensed = "odd-N"
    else:
        root = _minus_one_nth_root(p, N)
        if root is None:
            raise ValueError(
                f"-1 is not an N-th power in F_{p}^* and N = {N} is even; "
                "the construction has no valid sign twist")
        gamma = root
        licensed = "minus-one-nth-power"
    x_pow = x ** N
    denom = 1 - x_pow
    if denom.is_zero:
        raise ZeroDivisionError(
            "x^N = 1: the twisted equation has a pole at this parameter")
    exponent = (p ** k - 1) // N
    alpha = denom.reciprocal()
    y = alpha ** exponent
    z = RatFunc.constant(ctx, gamma) * x * ((-x_pow) * alpha) ** exponent
    assert x ** N + y ** N + z ** N == 1, "curve identity failed"
    assert derive(y / z).is_zero, "y/z escaped K^p"
    return FermatCurve(p, N, k, x, y, z, exponent, gamma, licensed)


def reciprocal_transform(x: RatFunc, y: RatFunc, z: RatFunc,
                         root: int) -> tuple[RatFunc, RatFunc, RatFunc]:
    """One reciprocal substitution (x, y, z) -> (1/z, c x/z, c y/z).

    With c^N = -1 this maps solutions of the degree-N surface to solutions;
    applying it twice is an exact involution.
    """
    if z.is_zero:
        raise ZeroDivisionError("transform needs z != 0")
    c = RatFunc.constant(z.ctx, root)
    return (z.reciprocal(), c * x / z, c * y / z)


def build_curve_xp(p: int, N: int, k: int,
                   z_input: RatFunc) -> tuple[RatFunc, RatFunc, RatFunc]:
    """Solution triple with the FIRST coordinate in K^p.

    Builds the y/z-curve at parameter z_input and pushes it through the
    reciprocal substitution twice; the double substitution carries
    y/z in K^p to first-coordinate in K^p.
    """
    if z_input.is_zero:
        raise ZeroDivisionError("curve parameter must be nonzero")
    curve = build_curve(p, N, k, z_input)
    triple = reciprocal_transform(curve.x, curve.y, curve.z,
                                  curve.minus_one_root)
    triple = reciprocal_transform(*triple, curve.minus_one_root)
    first, second, third = triple
    assert first ** N + second ** N + third ** N == 1, "transform broke the identity"
    assert derive(first).is_zero, "first coordinate escaped K^p"
    return triple


@dataclass(frozen=True)
class FermatLine:
    """A line lying on every surface x^(p^s+1) + y^(p^s+1) + z^(p^s+1) = 1.

    The intercept coefficients use the two opposite square roots of -1:
    lambda2 = -i * alpha1 (using a common i for both intercepts fails the
    surface identity symbolically).
    """

    p: int
    i: int
    alpha1: int
    alpha2: int
    lambda1: int
    lambda2: int
    line: tuple[RatFunc, RatFunc, RatFunc]
    s_verified: int


def _line_candidate(ctx: FieldContext, a1: int, b: int, a2: int, d: int):
    t = Poly.gen(ctx)
    v1 = RatFunc(t * a1 + Poly.constant(ctx, b))
    v2 = RatFunc(t * a2 + Poly.constant(ctx, d))
    v3 = RatFunc(t)
    return (v1, v2, v3)


def line_on_surface(line, p: int, s: int) -> bool:
    """Exact symbolic check of the degree p^s + 1 surface identity."""
    N = p ** s + 1
    total = line[0] ** N + line[1] ** N + line[2] ** N
    return total == 1


def build_line(p: int, s_max: int = 2) -> FermatLine | None:
    """Search F_p for a line on all surfaces with N = p^s + 1, s <= s_max.

    Requires p = 1 mod 4 (so that square roots i of -1 exist in F_p); the
    p = 3 mod 4 analogue is intentionally not implemented.  Scans i and
    nonzero alpha1, alpha2 with alpha1^2 + alpha2^2 = -1 exhaustively,
    verifying the surface identity symbolically; returns None when no
    admissible pair of nonzero coefficients exists.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p % 4 != 1:
        raise ValueError(
            f"p = {p} is not 1 mod 4; the square-root-of--1 line "
            "construction does not apply")
    if s_max < 0:
        raise ValueError("s_max must be >= 0")
    ctx = FieldContext(p, max_degree=max(2 * (p ** s_max + 1), 16))
    roots_of_minus_one = [i for i in range(1, p) if i * i % p == p - 1]
    minus_one = p - 1
    for i in roots_of_minus_one:
        for a1 in range(1, p):
            for a2 in range(1, p):
                if (a1 * a1 + a2 * a2) % p != minus_one:
                    continue
                for j in (i, p - i):
                    line = _line_candidate(ctx, a1, i * a2 % p,
                                           a2, j * a1 % p)
                    if all(line_on_surface(line, p, s)
                           for s in range(s_max + 1)):
                        return FermatLine(p, i, a1, a2, i * a2 % p,
                                          j * a1 % p, line, s_max)
    return None


# -- bounded-height probe ------------------------------------------------------


def enumerate_ratfuncs(ctx: FieldContext, height_cap: int) -> Iterator[RatFunc]:
    """All nonzero elements of F_q(t) with height <= cap, each once."""
    if height_cap < 0:
        return
    q = ctx.q
    nums = []
    for deg in range(height_cap + 1):
        for value in range(q ** deg):
            digits = []
            v = value
            for _ in range(deg):
                v, r = divmod(v, q)
                digits.append(r)
            for lead in range(1, q):
                nums.append(Poly(ctx, digits + [lead]))
    dens = [Poly.one(ctx)]
    for deg in range(1, height_cap + 1):
        for value in range(q ** deg):
            digits = []
            v = value
            for _ in range(deg):
                v, r = divmod(v, q)
                digits.append(r)
            dens.append(Poly(ctx, digits + [1]))
    from .field import poly_gcd

    for den in dens:
        for num in nums:
            if den.degree > 0 and poly_gcd(num, den).degree > 0:
                continue
            yield RatFunc(num, den)


@dataclass(frozen=True)
class ProbeHit:
    """One bounded-height solution with its p-th-power hypothesis flags."""

    x: RatFunc
    y: RatFunc
    z: RatFunc
    flags: dict
    heights: tuple[int, int, int]
    violated: tuple[str, ...]
    counterexample: bool


@dataclass(frozen=True)
class ProbeReport:
    p: int
    N: int
    height_cap: int
    gcd_N_p: int
    good_480: bool
    hits: tuple[ProbeHit, ...]

    @property
    def counterexamples(self) -> tuple[ProbeHit, ...]:
        return tuple(hit for hit in self.hits if hit.counterexample)


def fermat_probe(p: int, N: int, height_cap: int,
                 ctx: FieldContext | None = None) -> ProbeReport:
    """Enumerate all height-bounded solutions and flag their hypotheses.

    Precomputes the N-th power of every candidate once and indexes powers
    by value, so the triple search costs one dictionary probe per (x, y)
    pair.  For each hit the report records which of x, y, z, x/y, x/z,
    y/z lie in K^p; a hit violating none of them while N is (480, p)-good
    and p > 480 would contradict the no-solution theorem and is flagged
    as a counterexample (expected never).
    """
    if math.gcd(N, p) != 1:
        raise ValueError("probe requires gcd(N, p) = 1")
    if ctx is None:
        ctx = FieldContext(p, max_degree=max(4 * N * max(height_cap, 1), 64))
    candidates = sorted(enumerate_ratfuncs(ctx, height_cap),
                        key=RatFunc.sort_key)
    powers = [w ** N for w in candidates]
    by_power: dict[RatFunc, list[int]] = {}
    for idx, value in enumerate(powers):
        by_power.setdefault(value, []).append(idx)

    goodness = is_good(N, 480, p)
    hits = []
    one = RatFunc.one(ctx)
    for ix, x in enumerate(candidates):
        rest = one - powers[ix]
        for iy, y in enumerate(candidates):
            target = rest - powers[iy]
            if target.is_zero:
                continue
            for iz in by_power.get(target, ()):
                z = candidates[iz]
                flags = {
                    "x": is_pth_power(x),
                    "y": is_pth_power(y),
                    "z": is_pth_power(z),
                    "x/y": is_pth_power(x / y),
                    "x/z": is_pth_power(x / z),
                    "y/z": is_pth_power(y / z),
                }
                violated = tuple(name for name, flag in flags.items() if flag)
                counterexample = (goodness.good and p > 480 and not violated)
                hits.append(ProbeHit(
                    x, y, z, flags,
                    (height(x), height(y), height(z)),
                    violated, counterexample))
    return ProbeReport(p, N, height_cap, goodness.gcd_N_p, goodness.good,
                       tuple(hits))
