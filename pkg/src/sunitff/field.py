"""Exact arithmetic over F_q, F_q[t] and the rational function field F_q(t).

Elements of F_q (q = p^m) are represented as integers in {0, ..., q-1} using
base-p digit encoding: the integer sum(c_i * p^i) stands for the field element
sum(c_i * a^i), where a is a root of the modulus polynomial of the context.
For m = 1 this is plain arithmetic modulo p.  The modulus for m > 1 is the
monic irreducible of degree m over F_p with the smallest integer encoding, so
contexts are reproducible across runs.

Polynomials are tuples of coefficient integers in ascending degree order with
no trailing zeros; the empty tuple is the zero polynomial, whose degree is the
distinguished marker ``NEG_INFINITY`` (never -1).  Rational functions are kept
reduced at all times: gcd(num, den) = 1 and den monic.

Degrees are capped (default 512) so runaway enumeration fails loudly instead
of eating memory; the cap is configurable per context.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence

NEG_INFINITY = float("-inf")

DEFAULT_DEGREE_CAP = 512

# deterministic Miller-Rabin witnesses, valid for all n < 3.3 * 10^24
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class DegreeCapExceeded(OverflowError):
    """A polynomial operation produced a degree beyond the context cap."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test (exact for n < 3.3e24)."""
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FieldContext:
    """Arithmetic context for F_q with q = p^m, attached to F_q(t).

    Carries the curve invariants genus (0) and gonality (1) of the rational
    function field backend; bound formulas must read them from here rather
    than assume their values.
    """

    __slots__ = ("p", "m", "q", "genus", "gonality", "max_degree",
                 "modulus_digits", "_mul_table", "_inv_table")

    def __init__(self, p: int, m: int = 1, max_degree: int = DEFAULT_DEGREE_CAP):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        if max_degree < 1:
            raise ValueError("degree cap must be positive")
        self.p = p
        self.m = m
        self.q = p ** m
        self.genus = 0
        self.gonality = 1
        self.max_degree = max_degree
        self._mul_table = None
        self._inv_table = None
        if m == 1:
            self.modulus_digits = None
        else:
            self.modulus_digits = self._find_modulus()
            if self.q <= 4096:
                self._build_tables()

    # -- construction helpers -------------------------------------------------

    def _find_modulus(self) -> tuple[int, ...]:
        # smallest (by integer encoding) monic irreducible of degree m over F_p
        p, m = self.p, self.m
        for value in range(p ** m):
            digits = _int_digits(value, p, m) + (1,)
            if _fp_poly_is_irreducible(digits, p):
                return digits
        raise AssertionError("no irreducible modulus found")  # unreachable

    def _build_tables(self) -> None:
        q = self.q
        mul = [[0] * q for _ in range(q)]
        for a in range(q):
            for b in range(a, q):
                v = self._mul_slow(a, b)
                mul[a][b] = v
                mul[b][a] = v
        inv = [0] * q
        for a in range(1, q):
            inv[a] = self._inv_slow(a)
        self._mul_table = mul
        self._inv_table = inv

    # -- element arithmetic ----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        p = self.p
        out = 0
        mult = 1
        while a or b:
            out += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        if self.m == 1:
            return -a % self.p
        p = self.p
        out = 0
        mult = 1
        while a:
            out += (-a % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        if self._mul_table is not None:
            return self._mul_table[a][b]
        return self._mul_slow(a, b)

    def _mul_slow(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        da = _int_digits(a, p, m)
        db = _int_digits(b, p, m)
        prod = [0] * (2 * m - 1)
        for i, ca in enumerate(da):
            if ca:
                for j, cb in enumerate(db):
                    prod[i + j] = (prod[i + j] + ca * cb) % p
        # reduce modulo the modulus polynomial
        mod = self.modulus_digits
        for i in range(len(prod) - 1, m - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(m):
                    prod[i - m + j] = (prod[i - m + j] - c * mod[j]) % p
        return _digits_int(prod[:m], p)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_q")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        if self._inv_table is not None:
            return self._inv_table[a]
        return self._inv_slow(a)

    def _inv_slow(self, a: int) -> int:
        return self.elem_pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def elem_pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.elem_pow(self.inv(a), -n)
        out = 1
        base = a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def frob(self, a: int) -> int:
        """Frobenius a -> a^p on F_q (identity for m = 1)."""
        if self.m == 1:
            return a
        return self.elem_pow(a, self.p)

    def frob_inv(self, a: int) -> int:
        """Inverse Frobenius, i.e. the unique p-th root in F_q."""
        if self.m == 1:
            return a
        return self.elem_pow(a, self.p ** (self.m - 1))

    def elements(self) -> range:
        return range(self.q)

    def units(self) -> range:
        return range(1, self.q)

    # -- compatibility and identity ---------------------------------------------

    def same_field(self, other: "FieldContext") -> bool:
        return self.p == other.p and self.m == other.m

    def __repr__(self) -> str:
        return f"FieldContext(p={self.p}, m={self.m})"


def field_arith(ctx: FieldContext, a: int, b: int, op: str) -> int:
    """Single dispatch point for scalar F_q arithmetic: op in '+-*/'."""
    if op == "+":
        return ctx.add(a, b)
    if op == "-":
        return ctx.sub(a, b)
    if op == "*":
        return ctx.mul(a, b)
    if op == "/":
        return ctx.div(a, b)
    raise ValueError(f"unknown field operation {op!r}")


def _int_digits(value: int, p: int, width: int) -> tuple[int, ...]:
    out = []
    for _ in range(width):
        value, r = divmod(value, p)
        out.append(r)
    return tuple(out)


def _digits_int(digits: Sequence[int], p: int) -> int:
    out = 0
    for c in reversed(digits):
        out = out * p + c
    return out


# -- raw F_p[x] helpers used only for modulus discovery -------------------------

def _fp_poly_mulmod(a, b, mod, p):
    n = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                prod[i + j] = (prod[i + j] + ca * cb) % p
    for i in range(len(prod) - 1, n - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(n):
                prod[i - n + j] = (prod[i - n + j] - c * mod[j]) % p
    out = prod[:n]
    while out and out[-1] == 0:
        out.pop()
    return out


def _fp_poly_gcd_is_one(a, b, p):
    a = list(a)
    b = list(b)
    while b:
        # a mod b
        inv_lead = pow(b[-1], p - 2, p)
        while len(a) >= len(b) and a:
            c = a[-1] * inv_lead % p
            shift = len(a) - len(b)
            for j in range(len(b)):
                a[shift + j] = (a[shift + j] - c * b[j]) % p
            while a and a[-1] == 0:
                a.pop()
        a, b = b, a
    return len(a) == 1


def _fp_poly_is_irreducible(f: Sequence[int], p: int) -> bool:
    n = len(f) - 1
    if n < 1:
        return False
    # x^(p^n) == x mod f, and gcd(x^(p^(n/r)) - x, f) == 1 for prime r | n
    x = [0, 1]
    h = list(x)
    powers = []
    for _ in range(n):
        # h <- h^p mod f
        acc = [1]
        base = h
        e = p
        while e:
            if e & 1:
                acc = _fp_poly_mulmod(acc, base, f, p)
            base = _fp_poly_mulmod(base, base, f, p)
            e >>= 1
        h = acc
        powers.append(list(h))
    final = list(powers[-1])
    # final must equal x
    if final != x:
        return False
    for r in range(2, n + 1):
        if n % r == 0 and is_prime(r):
            g = list(powers[n // r - 1])
            # g - x
            while len(g) < 2:
                g.append(0)
            g[1] = (g[1] - 1) % p
            while g and g[-1] == 0:
                g.pop()
            if not g:
                return False
            if not _fp_poly_gcd_is_one(g, f, p):
                return False
    return True


# -- polynomial kernels ----------------------------------------------------------

def _norm(coeffs: list[int]) -> tuple[int, ...]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _padd(ctx, a, b):
    if ctx.m == 1:
        p = ctx.p
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % p
    else:
        add = ctx.add
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = add(out[i], c)
    return _norm(out)


def _pneg(ctx, a):
    if ctx.m == 1:
        p = ctx.p
        return tuple(-c % p for c in a)
    return tuple(ctx.neg(c) for c in a)


def _psub(ctx, a, b):
    return _padd(ctx, a, _pneg(ctx, b))


def _pmul(ctx, a, b):
    if not a or not b:
        return ()
    d = len(a) + len(b) - 2
    if d > ctx.max_degree:
        raise DegreeCapExceeded(
            f"product degree {d} exceeds cap {ctx.max_degree}")
    out = [0] * (d + 1)
    if ctx.m == 1:
        p = ctx.p
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return _norm([c % p for c in out])
    mul = ctx.mul
    add = ctx.add
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                if cb:
                    out[i + j] = add(out[i + j], mul(ca, cb))
    return _norm(out)


def _pscale(ctx, a, c):
    if c == 0:
        return ()
    if c == 1:
        return a
    if ctx.m == 1:
        p = ctx.p
        return _norm([ci * c % p for ci in a])
    mul = ctx.mul
    return _norm([mul(ci, c) for ci in a])


def _pdivmod(ctx, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return (), a
    rem = list(a)
    quot = [0] * (len(a) - len(b) + 1)
    inv_lead = ctx.inv(b[-1])
    if ctx.m == 1:
        p = ctx.p
        for i in range(len(a) - len(b), -1, -1):
            c = rem[i + len(b) - 1] * inv_lead % p
            if c:
                quot[i] = c
                for j, bj in enumerate(b):
                    rem[i + j] = (rem[i + j] - c * bj) % p
    else:
        mul = ctx.mul
        sub = ctx.sub
        for i in range(len(a) - len(b), -1, -1):
            c = mul(rem[i + len(b) - 1], inv_lead)
            if c:
                quot[i] = c
                for j, bj in enumerate(b):
                    rem[i + j] = sub(rem[i + j], mul(c, bj))
    return _norm(quot), _norm(rem)


def _pmod(ctx, a, b):
    return _pdivmod(ctx, a, b)[1]


def _pgcd(ctx, a, b):
    while b:
        a, b = b, _pmod(ctx, a, b)
    if a:
        a = _pscale(ctx, a, ctx.inv(a[-1]))  # monic normalization
    return a


def _ppow_mod(ctx, a, n, mod):
    out = _pmod(ctx, (1,), mod)
    base = _pmod(ctx, a, mod)
    while n:
        if n & 1:
            out = _pmod(ctx, _pmul(ctx, out, base), mod)
        base = _pmod(ctx, _pmul(ctx, base, base), mod)
        n >>= 1
    return out


def _pderiv(ctx, a):
    if len(a) < 2:
        return ()
    if ctx.m == 1:
        p = ctx.p
        return _norm([i * c % p for i, c in enumerate(a)][1:])
    p = ctx.p
    out = []
    for i in range(1, len(a)):
        out.append(ctx.mul(i % p, a[i]))
    return _norm(out)


class Poly:
    """Immutable polynomial over F_q in canonical (trailing-zero-free) form."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldContext, coeffs: Iterable[int] = ()):
        coeffs = list(coeffs)
        q = ctx.q
        for c in coeffs:
            if not (0 <= c < q):
                raise ValueError(f"coefficient {c} outside F_{q} encoding range")
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) - 1 > ctx.max_degree:
            raise DegreeCapExceeded(
                f"degree {len(coeffs) - 1} exceeds cap {ctx.max_degree}")
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, ctx: FieldContext) -> "Poly":
        return cls(ctx, ())

    @classmethod
    def one(cls, ctx: FieldContext) -> "Poly":
        return cls(ctx, (1,))

    @classmethod
    def constant(cls, ctx: FieldContext, c: int) -> "Poly":
        return cls(ctx, (c % ctx.q if ctx.m == 1 else c,))

    @classmethod
    def gen(cls, ctx: FieldContext) -> "Poly":
        """The generator t of F_q[t]."""
        return cls(ctx, (0, 1))

    @classmethod
    def _raw(cls, ctx: FieldContext, coeffs: tuple[int, ...]) -> "Poly":
        obj = object.__new__(cls)
        object.__setattr__(obj, "ctx", ctx)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    # -- structure -------------------------------------------------------------

    @property
    def degree(self):
        """Degree; NEG_INFINITY for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INFINITY

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def leading(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def monic(self) -> "Poly":
        if self.is_zero:
            raise ValueError("cannot normalize the zero polynomial")
        if self.is_monic:
            return self
        return Poly._raw(self.ctx, _pscale(self.ctx, self.coeffs, self.ctx.inv(self.coeffs[-1])))

    # -- arithmetic --------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            if not self.ctx.same_field(other.ctx):
                raise ValueError("mixed field contexts")
            return other
        if isinstance(other, int):
            return Poly.constant(self.ctx, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Poly._raw(self.ctx, _padd(self.ctx, self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.ctx, _pneg(self.ctx, self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Poly._raw(self.ctx, _psub(self.ctx, self.coeffs, other.coeffs))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Poly._raw(self.ctx, _psub(self.ctx, other.coeffs, self.coeffs))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Poly._raw(self.ctx, _pmul(self.ctx, self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        q, r = _pdivmod(self.ctx, self.coeffs, other.coeffs)
        return Poly._raw(self.ctx, q), Poly._raw(self.ctx, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.one(self.ctx)
        base = self
        while n:
            if n & 1:
                out = out * base
            base_needed = n > 1
            if base_needed:
                base = base * base
            n >>= 1
        return out

    def derivative(self) -> "Poly":
        return Poly._raw(self.ctx, _pderiv(self.ctx, self.coeffs))

    def __call__(self, value: int) -> int:
        ctx = self.ctx
        out = 0
        for c in reversed(self.coeffs):
            out = ctx.add(ctx.mul(out, value), c)
        return out

    # -- comparison / hashing -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.constant(self.ctx, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return (self.ctx.p, self.ctx.m) == (other.ctx.p, other.ctx.m) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.m, self.coeffs))

    def sort_key(self):
        return (len(self.coeffs), self.coeffs)

    # -- text form ----------------------------------------------------------------

    def to_coeff_text(self) -> str:
        """Canonical 'c0,c1,...,cd' form (single '0' for the zero polynomial)."""
        if not self.coeffs:
            return "0"
        return ",".join(str(c) for c in self.coeffs)

    @classmethod
    def from_coeff_text(cls, ctx: FieldContext, text: str) -> "Poly":
        parts = [part.strip() for part in text.strip().split(",")]
        return cls(ctx, [int(part) for part in parts])

    def to_term_text(self, var: str = "t") -> str:
        """Human-readable sum-of-terms form, e.g. 't^2+2t+1'."""
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                head = "" if c == 1 else str(c)
                tail = var if i == 1 else f"{var}^{i}"
                terms.append(head + tail)
        return "+".join(terms)

    def __repr__(self):
        return f"Poly({self.to_term_text()!r} over F_{self.ctx.q})"


def poly_from_term_text(ctx: FieldContext, text: str, var: str = "t") -> Poly:
    """Parse 'a*t^k' sums such as 't^2+2t+1', 't-1' or '3'.

    Coefficients are integers (reduced into F_q via mod p for m = 1; for
    m > 1 they are read as base-p digit encodings and must lie in [0, q)).
    """
    s = "".join(text.split())
    if not s:
        raise ValueError("empty polynomial literal")
    coeffs: dict[int, int] = {}
    i = 0
    sign = 1
    if s[0] in "+-":
        sign = -1 if s[0] == "-" else 1
        i = 1
    while i <= len(s):
        # scan one term
        j = i
        while j < len(s) and s[j] not in "+-":
            j += 1
        term = s[i:j]
        if not term:
            raise ValueError(f"malformed polynomial literal {text!r}")
        coeff_part, _, exp_part = term.partition(var)
        if coeff_part.endswith("*"):
            coeff_part = coeff_part[:-1]
        if var in term:
            c = int(coeff_part) if coeff_part else 1
            if exp_part:
                if not exp_part.startswith("^"):
                    raise ValueError(f"malformed term {term!r}")
                k = int(exp_part[1:])
            else:
                k = 1
        else:
            c = int(coeff_part)
            k = 0
        c *= sign
        if ctx.m == 1:
            c %= ctx.p
        else:
            if c < 0:
                c = ctx.neg(-c)
            if not (0 <= c < ctx.q):
                raise ValueError(f"coefficient {c} outside F_{ctx.q} range")
        coeffs[k] = ctx.add(coeffs.get(k, 0), c)
        if j == len(s):
            break
        sign = -1 if s[j] == "-" else 1
        i = j + 1
    if not coeffs:
        return Poly.zero(ctx)
    out = [0] * (max(coeffs) + 1)
    for k, c in coeffs.items():
        out[k] = c
    return Poly(ctx, out)


# -- gcd / irreducibility / factorization --------------------------------------

def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; gcd(0, 0) = 0."""
    return Poly._raw(a.ctx, _pgcd(a.ctx, a.coeffs, b.coeffs))


def poly_pow_mod(a: Poly, n: int, mod: Poly) -> Poly:
    return Poly._raw(a.ctx, _ppow_mod(a.ctx, a.coeffs, n, mod.coeffs))


def is_irreducible(f: Poly) -> bool:
    """Rabin irreducibility test for monic f of degree >= 1."""
    ctx = f.ctx
    n = len(f.coeffs) - 1
    if n < 1:
        return False
    f = f.monic()
    q = ctx.q
    t = (0, 1)
    h = _pmod(ctx, t, f.coeffs)
    powers = []
    for _ in range(n):
        h = _ppow_mod(ctx, h, q, f.coeffs)
        powers.append(h)
    if powers[-1] != _pmod(ctx, t, f.coeffs):
        return False
    for r in range(2, n + 1):
        if n % r == 0 and is_prime(r):
            g = _psub(ctx, powers[n // r - 1], _pmod(ctx, t, f.coeffs))
            if not g or len(_pgcd(ctx, g, f.coeffs)) > 1:
                return False
    return True


def irreducibles(ctx: FieldContext, degree: int) -> Iterator[Poly]:
    """Monic irreducibles of exact degree, ascending by integer encoding."""
    if degree < 1:
        return
    q = ctx.q
    for value in range(q ** degree):
        coeffs = list(_int_digits(value, q, degree)) + [1]
        f = Poly(ctx, coeffs)
        if is_irreducible(f):
            yield f


def poly_pth_root(f: Poly) -> Poly:
    """Exact p-th root of a polynomial lying in F_q[t^p]."""
    ctx = f.ctx
    p = ctx.p
    if f.is_zero:
        return f
    out = []
    for i, c in enumerate(f.coeffs):
        if i % p == 0:
            out.append(ctx.frob_inv(c))
        elif c:
            raise ValueError("polynomial is not a p-th power")
    return Poly(ctx, out)


def _factor_seed(ctx: FieldContext, coeffs: tuple[int, ...]) -> int:
    seed = ctx.p * 1_000_003 + ctx.m
    for c in coeffs:
        seed = (seed * 1_099_511_628_211 + c + 1) % (1 << 61)
    return seed


def _squarefree_decomposition(f: Poly) -> dict[Poly, int]:
    """Return {monic squarefree part: multiplicity}; parts pairwise coprime."""
    ctx = f.ctx
    p = ctx.p
    out: dict[Poly, int] = {}

    def run(g: Poly, outer: int) -> None:
        if g.degree < 1:
            return
        dg = g.derivative()
        if dg.is_zero:
            run(poly_pth_root(g), outer * p)
            return
        c = poly_gcd(g, dg)
        w = g // c
        i = 1
        while w.degree > 0:
            y = poly_gcd(w, c)
            part = w // y
            if part.degree > 0:
                out[part] = out.get(part, 0) + i * outer
            c = c // y
            w = y
            i += 1
        if c.degree > 0:
            run(poly_pth_root(c), outer * p)

    run(f.monic(), 1)
    return out


def _distinct_degree(f: Poly) -> list[tuple[Poly, int]]:
    """Split monic squarefree f into (product of irreducibles of degree d, d)."""
    ctx = f.ctx
    q = ctx.q
    out = []
    rest = f.coeffs
    t = (0, 1)
    h = _pmod(ctx, t, rest)
    d = 0
    while len(rest) - 1 >= 2 * (d + 1):
        d += 1
        h = _ppow_mod(ctx, h, q, rest)
        g = _pgcd(ctx, _psub(ctx, h, _pmod(ctx, t, rest)), rest)
        if len(g) > 1:
            out.append((Poly._raw(ctx, g), d))
            rest = _pdivmod(ctx, rest, g)[0]
            h = _pmod(ctx, h, rest)
    if len(rest) > 1:
        out.append((Poly._raw(ctx, rest), len(rest) - 1))
    return out


def _equal_degree(f: Poly, d: int, rng) -> list[Poly]:
    """Cantor-Zassenhaus split of monic squarefree f, all factors of degree d."""
    ctx = f.ctx
    n = len(f.coeffs) - 1
    if n == d:
        return [f]
    q = ctx.q
    while True:
        a = tuple(rng.randrange(q) for _ in range(n))
        a = _norm(list(a))
        if len(a) <= 1:
            continue
        g = _pgcd(ctx, a, f.coeffs)
        if 1 < len(g) < len(f.coeffs):
            split = Poly._raw(ctx, g)
        else:
            if q % 2 == 1:
                b = _ppow_mod(ctx, a, (q ** d - 1) // 2, f.coeffs)
                g = _pgcd(ctx, _psub(ctx, b, (1,)), f.coeffs)
            else:
                # trace map over F_2 for characteristic 2
                acc = _pmod(ctx, a, f.coeffs)
                term = acc
                for _ in range(d * ctx.m - 1):
                    term = _ppow_mod(ctx, term, 2, f.coeffs)
                    acc = _padd(ctx, acc, term)
                g = _pgcd(ctx, acc, f.coeffs)
            if not (1 < len(g) < len(f.coeffs)):
                continue
            split = Poly._raw(ctx, g)
        other = f // split
        return _equal_degree(split, d, rng) + _equal_degree(other, d, rng)


def poly_factor(f: Poly) -> tuple[tuple[Poly, int], ...]:
    """Factor nonzero f into monic irreducibles with multiplicities.

    The product of the factors times f's leading coefficient equals f
    exactly.  Splitting randomness is seeded from the input so repeated
    runs factor identically; output is sorted by (degree, coefficients).
    """
    if f.is_zero:
        raise ValueError("cannot factor the zero polynomial")
    import random as _random

    ctx = f.ctx
    if f.degree < 1:
        return ()
    rng = _random.Random(_factor_seed(ctx, f.coeffs))
    result: dict[Poly, int] = {}
    work = f.monic()

    # strip roots first: linear factors are the common case for random input
    if ctx.q <= 64:
        for r in range(ctx.q):
            while not work.is_constant and work(r) == 0:
                lin = Poly(ctx, (ctx.neg(r), 1))
                work = work // lin
                result[lin] = result.get(lin, 0) + 1

    for part, mult in _squarefree_decomposition(work).items():
        for prod, d in _distinct_degree(part):
            for irr in _equal_degree(prod, d, rng):
                result[irr] = result.get(irr, 0) + mult
    return tuple(sorted(result.items(), key=lambda kv: kv[0].sort_key()))


class RatFunc:
    """Reduced rational function over F_q: gcd(num, den) = 1, den monic.

    Zero is 0/1.  Values are immutable; the factored support is cached
    write-once on first use (idempotent, hence safe under concurrent reads).
    """

    __slots__ = ("ctx", "num", "den", "_support")

    def __init__(self, num: Poly, den: Poly | None = None):
        ctx = num.ctx
        if den is None:
            den = Poly.one(ctx)
        if not ctx.same_field(den.ctx):
            raise ValueError("mixed field contexts")
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if num.is_zero:
            num, den = Poly.zero(ctx), Poly.one(ctx)
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num // g
                den = den // g
            if not den.is_monic:
                lead_inv = ctx.inv(den.leading())
                num = Poly._raw(ctx, _pscale(ctx, num.coeffs, lead_inv))
                den = Poly._raw(ctx, _pscale(ctx, den.coeffs, lead_inv))
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_support", None)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    def _set_support(self, support) -> None:
        # write-once cache used by places.support(); last writer wins with
        # an identical value, so concurrent initialization is harmless
        object.__setattr__(self, "_support", support)

    # -- constructors ------------------------------------------------------------

    @classmethod
    def zero(cls, ctx: FieldContext) -> "RatFunc":
        return cls(Poly.zero(ctx))

    @classmethod
    def one(cls, ctx: FieldContext) -> "RatFunc":
        return cls(Poly.one(ctx))

    @classmethod
    def constant(cls, ctx: FieldContext, c: int) -> "RatFunc":
        return cls(Poly.constant(ctx, c))

    @classmethod
    def gen(cls, ctx: FieldContext) -> "RatFunc":
        return cls(Poly.gen(ctx))

    # -- structure ----------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_constant(self) -> bool:
        return self.num.is_constant and self.den.is_constant

    def constant_value(self) -> int:
        if not self.is_constant:
            raise ValueError("not a constant")
        return self.num.coeffs[0] if self.num.coeffs else 0

    # -- arithmetic ------------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if not self.ctx.same_field(other.ctx):
                raise ValueError("mixed field contexts")
            return other
        if isinstance(other, Poly):
            return RatFunc(other)
        if isinstance(other, int):
            return RatFunc.constant(self.ctx, other % self.ctx.p if self.ctx.m == 1 else other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RatFunc(self.num * other.den + other.num * self.den,
                       self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RatFunc(self.num * other.den - other.num * self.den,
                       self.den * other.den)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def reciprocal(self) -> "RatFunc":
        if self.is_zero:
            raise ZeroDivisionError("reciprocal of zero")
        return RatFunc(self.den, self.num)

    def __pow__(self, n: int):
        if n < 0:
            return self.reciprocal() ** (-n)
        return RatFunc(self.num ** n, self.den ** n)

    # -- comparison / hashing ------------------------------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num.coeffs, self.den.coeffs, self.ctx.p, self.ctx.m))

    def sort_key(self):
        return (max(len(self.num.coeffs), len(self.den.coeffs)),
                self.den.coeffs, self.num.coeffs)

    # -- text form -----------------------------------------------------------------------

    def to_coeff_text(self) -> str:
        """Canonical 'num / den' form with coefficient-list polynomials."""
        if self.den == Poly.one(self.ctx):
            return self.num.to_coeff_text()
        return f"{self.num.to_coeff_text()} / {self.den.to_coeff_text()}"

    @classmethod
    def from_coeff_text(cls, ctx: FieldContext, text: str) -> "RatFunc":
        num_text, sep, den_text = text.partition("/")
        num = Poly.from_coeff_text(ctx, num_text)
        if sep:
            return cls(num, Poly.from_coeff_text(ctx, den_text))
        return cls(num)

    def to_term_text(self, var: str = "t") -> str:
        num = self.num.to_term_text(var)
        if self.den == Poly.one(self.ctx):
            return num
        return f"({num})/({self.den.to_term_text(var)})"

    def __repr__(self):
        return f"RatFunc({self.to_term_text()!r} over F_{self.ctx.q})"


def ratfunc_from_term_text(ctx: FieldContext, text: str, var: str = "t") -> RatFunc:
    """Parse 'NUM' or 'NUM/DEN' where each side is a term literal.

    Sides may be wrapped in one pair of parentheses.  Coefficient-list input
    (containing commas) is also accepted for round trips with the canonical
    form.
    """
    s = text.strip()
    if "," in s:
        return RatFunc.from_coeff_text(ctx, s)
    num_text, sep, den_text = s.partition("/")

    def strip_parens(part: str) -> str:
        part = part.strip()
        if part.startswith("(") and part.endswith(")"):
            part = part[1:-1]
        return part

    num = poly_from_term_text(ctx, strip_parens(num_text), var)
    if sep:
        return RatFunc(num, poly_from_term_text(ctx, strip_parens(den_text), var))
    return RatFunc(num)


def ratfunc_arith(a: RatFunc, b: RatFunc, op: str) -> RatFunc:
    """Dispatch point mirroring field_arith for rational functions."""
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def random_poly(ctx: FieldContext, rng, max_degree: int, monic: bool = False) -> Poly:
    """Uniform random polynomial with degree chosen uniformly in [0, max_degree]."""
    d = rng.randrange(max_degree + 1)
    coeffs = [rng.randrange(ctx.q) for _ in range(d)]
    coeffs.append(1 if monic else rng.randrange(1, ctx.q))
    return Poly(ctx, coeffs)


def random_ratfunc(ctx: FieldContext, rng, max_degree: int,
                   nonzero: bool = True) -> RatFunc:
    """Random reduced rational function with num/den degrees <= max_degree."""
    while True:
        num = random_poly(ctx, rng, max_degree)
        den = random_poly(ctx, rng, max_degree, monic=True)
        x = RatFunc(num, den)
        if not (nonzero and x.is_zero):
            return x
