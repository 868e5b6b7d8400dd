"""Frobenius families of three-term S-unit solutions and their certificates.

Every solution of x + y + z = 1 with nonconstant coordinates belongs to one
of three structure classes:

* ``bounded``        -- the Frobenius orbit {u^(p^e)} of a triple whose
                        coordinate heights obey the solution cap;
* ``two-dim-step-p`` -- a two-parameter family {(u * v^(p^f))^(p^e)} with
                        coefficient-capped u and two-term-capped v;
* ``two-dim-step-q`` -- the same shape with steps of p^m = q and v capped
                        by (q/p) times the two-term bound.

``decompose_solution`` reproduces that classification constructively: strip
common p-th roots, arrange coordinates so the last two are outside K^p,
then branch on whether the first coordinate is a p-th power, whether the
differentiated-equation coefficients are S-units or constants, and whether
two logarithmic-derivative ratios collide.  Each branch emits a family that
provably contains the input at recorded exponents, which is re-checked
before the report is returned.

``verify_family`` certifies a two-dimensional family for ALL step exponents
at once: it finds a dependence alpha over the step subfield with
alpha . v = 0 and reduced coefficients lambda in the subfield satisfying
lambda_1 v_1 + lambda_2 v_2 = 1.  Eliminating v_3 turns the family identity
into (lambda_1 v_1 + lambda_2 v_2)^(p^(af)) = 1, so the certificate is
algebraic rather than sampled.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..calculus import (derive, frobenius_depth, is_pth_power,
                        pair_coefficient, pth_root)
from ..field import FieldContext, RatFunc
from ..places import height
from .group import SUnitGroup, height_caps, mason_bound
from .solve import Solution3

TAG_BOUNDED = "bounded"
TAG_STEP_P = "two-dim-step-p"
TAG_STEP_Q = "two-dim-step-q"

CASE_POWER_NONUNIT = "power-coord-nonunit-coeff"
CASE_POWER_UNIT = "power-coord-unit-coeff"
CASE_DISTINCT_NONUNIT = "distinct-ratios-nonunit-coeff"
CASE_DISTINCT_RATIO_NONCONST = "distinct-ratios-nonconstant-coeff-ratio"
CASE_DISTINCT_CONST_COEFF = "distinct-ratios-constant-coeff"
CASE_DISTINCT_QSTEP = "distinct-ratios-q-step"
CASE_COLLISION = {(1, 2): "equal-ratios-yz", (0, 2): "equal-ratios-xz",
                  (0, 1): "equal-ratios-xy"}

_PAIR_NAMES = ("x", "y", "z")


class DecompositionError(RuntimeError):
    """An internal contradiction in the decomposition branch analysis."""

    def __init__(self, step: str, message: str):
        self.step = step
        super().__init__(f"[{step}] {message}")


class FamilyRejected(ValueError):
    """A two-dimensional family failed verification.

    failing_f is set when a direct sum check at some step exponent f <= 3
    fails; otherwise reason explains why no canonical form exists.
    """

    def __init__(self, reason: str, failing_f: int | None = None):
        self.reason = reason
        self.failing_f = failing_f
        suffix = f" (first failing step exponent f = {failing_f})" \
            if failing_f is not None else ""
        super().__init__(reason + suffix)


def _frobenius_power(triple, e: int):
    p = triple[0].ctx.p
    exp = p ** e
    return tuple(c ** exp for c in triple)


@dataclass(frozen=True)
class FrobeniusFamily:
    """F(u) = {u^(p^e)} or F_a(u, v) = {(u * v^(p^(a f)))^(p^e)}."""

    dimension: int
    u: tuple[RatFunc, RatFunc, RatFunc]
    v: tuple[RatFunc, RatFunc, RatFunc] | None = None
    step: int | None = None

    def __post_init__(self):
        if self.dimension == 1:
            if self.v is not None or self.step is not None:
                raise ValueError("one-dimensional family takes no v or step")
            if sum(self.u, RatFunc.zero(self.ctx)) != 1:
                raise ValueError("family representative must sum to 1")
        elif self.dimension == 2:
            if self.v is None or self.step is None or self.step < 1:
                raise ValueError("two-dimensional family needs v and step >= 1")
            total = sum((ui * vi for ui, vi in zip(self.u, self.v)),
                        RatFunc.zero(self.ctx))
            if total != 1:
                raise ValueError("family base point (f = 0) must sum to 1")
        else:
            raise ValueError("dimension must be 1 or 2")

    @property
    def ctx(self) -> FieldContext:
        return self.u[0].ctx

    def element(self, e: int, f: int = 0) -> Solution3:
        """The member at Frobenius exponent e (and step exponent f, dim 2)."""
        if e < 0 or f < 0:
            raise ValueError("family exponents are nonnegative")
        if self.dimension == 1:
            return Solution3(*_frobenius_power(self.u, e))
        shifted = _frobenius_power(self.v, self.step * f)
        base = tuple(ui * vi for ui, vi in zip(self.u, shifted))
        return Solution3(*_frobenius_power(base, e))

    def key(self):
        """Canonical identity for counting distinct families."""
        u_key = tuple(c.to_coeff_text() for c in self.u)
        if self.dimension == 1:
            return (1, u_key)
        return (2, self.step, u_key, tuple(c.to_coeff_text() for c in self.v))


@dataclass(frozen=True)
class CanonicalForm:
    """Algebraic certificate of a two-dimensional family.

    alpha is a dependence of v over the step subfield, stored in the
    symmetry-normalized coordinate order (alpha_3 != 0); permutation maps
    normalized positions back to the family's coordinates, i.e. the
    relation reads alpha_1 v[perm[0]] + alpha_2 v[perm[1]] +
    alpha_3 v[perm[2]] = 0.  lambda are the reduced two-term coefficients
    on the first two normalized positions.  Field elements are stored in
    their integer encodings.
    """

    alpha: tuple[int, int, int]
    lam: tuple[int, int]
    step: int
    subfield_size: int
    permutation: tuple[int, int, int] = (0, 1, 2)

    def __post_init__(self):
        if self.alpha[2] == 0:
            raise ValueError("canonical form requires alpha_3 != 0")
        zeros = sum(1 for c in (self.alpha[0], self.alpha[1],
                                self.lam[0], self.lam[1]) if c == 0)
        if zeros > 1:
            raise ValueError(
                "at most one of alpha_1, alpha_2, lambda_1, lambda_2 may vanish")


@dataclass(frozen=True)
class DecompositionReport:
    """Full trace of one solution's decomposition."""

    input: Solution3
    depth: int
    case: str
    set_tag: str
    family: FrobeniusFamily
    exponents: tuple[int, int | None]
    arrangement: tuple[int, int, int]
    coefficients: dict = field(default_factory=dict)
    detail: str | None = None


def _unpermute(triple, arrangement):
    out = [None, None, None]
    for pos, original_index in enumerate(arrangement):
        out[original_index] = triple[pos]
    return tuple(out)


def family_contains(fam: FrobeniusFamily, sol: Solution3) -> tuple[int, int | None] | None:
    """Exponents (e, f) with coordinate-wise equality, or None.

    Heights grow as exact powers of p along both exponents, so the search
    space is finite: p^e is capped by the ratio of the solution height to
    the smallest nonzero representative height, and similarly for f.
    """
    p = fam.ctx.p
    m = fam.ctx.m
    target_max = max(height(c) for c in sol)

    def match_orbit(base) -> int | None:
        base_max = max(height(c) for c in base)
        if base_max == 0:
            # constant triple: Frobenius on F_q has period dividing m
            for e in range(m):
                if tuple(_frobenius_power(base, e)) == tuple(sol):
                    return e
            return None
        e = 0
        scale = 1
        while scale * base_max <= target_max:
            if tuple(_frobenius_power(base, e)) == tuple(sol):
                return e
            e += 1
            scale *= p
        return None

    if fam.dimension == 1:
        e = match_orbit(fam.u)
        return (e, None) if e is not None else None

    max_v = max(height(c) for c in fam.v)
    max_u = max(height(c) for c in fam.u)
    f = 0
    while f <= 64:
        if max_v > 0 and p ** (fam.step * f) * max_v - max_u > target_max:
            break
        if max_v == 0 and f >= m:
            break
        shifted = _frobenius_power(fam.v, fam.step * f)
        base = tuple(ui * vi for ui, vi in zip(fam.u, shifted))
        e = match_orbit(base)
        if e is not None:
            return (e, f)
        f += 1
    return None


def _strip_common_roots(sol: Solution3) -> tuple[int, Solution3]:
    depth = 0
    current = sol
    while all(is_pth_power(c) for c in current):
        current = Solution3(*(pth_root(c) for c in current))
        depth += 1
    return depth, current


def _check_tag_caps(group, tag, family, step_name):
    """Verify the height caps that define the three structure classes."""
    caps = height_caps(group.S, group.ctx)
    two_term = mason_bound(group.S, group.ctx)
    if tag == TAG_BOUNDED:
        for c in family.u:
            if height(c) > caps.solution_cap:
                raise DecompositionError(
                    step_name, f"representative height {height(c)} exceeds "
                    f"the solution cap {caps.solution_cap}")
        return
    v_cap = two_term if tag == TAG_STEP_P else \
        (group.ctx.q // group.ctx.p) * two_term
    for c in family.u:
        if height(c) > caps.coefficient_cap:
            raise DecompositionError(
                step_name, f"u height {height(c)} exceeds the coefficient "
                f"cap {caps.coefficient_cap}")
    for c in family.v:
        if height(c) > v_cap:
            raise DecompositionError(
                step_name, f"v height {height(c)} exceeds the cap {v_cap}")
    for ui, vi in zip(family.u, family.v):
        if ui.is_constant and vi.is_constant:
            raise DecompositionError(
                step_name, "both u_i and v_i constant in one coordinate")


def _finish(group, original, depth, case, tag, family, exponents,
            arrangement, coefficients, detail=None) -> DecompositionReport:
    _check_tag_caps(group, tag, family, case)
    e, f = exponents
    reproduced = family.element(e, f or 0)
    if tuple(reproduced) != tuple(original):
        raise DecompositionError(
            case, "family does not reproduce the input at the recorded "
            f"exponents (e, f) = {exponents}")
    return DecompositionReport(
        input=original, depth=depth, case=case, set_tag=tag, family=family,
        exponents=exponents, arrangement=arrangement,
        coefficients=coefficients, detail=detail)


def decompose_solution(sol: Solution3, group: SUnitGroup) -> DecompositionReport:
    """Classify one nonconstant solution into its Frobenius family.

    Follows the branch structure of the height-bound proof: strip common
    p-th roots (recording the depth), move the unique p-th-power
    coordinate (if any) to the front, then case split on S-unit membership
    and constancy of the differentiated-equation coefficients.  The
    resulting family is verified to contain the input before returning.
    """
    ctx = group.ctx
    one = RatFunc.one(ctx)
    for name, c in zip(_PAIR_NAMES, sol):
        if c.is_zero or c.is_constant:
            raise ValueError(f"coordinate {name} is constant; the structure "
                             "classification requires nonconstant coordinates")
    if sum(sol, RatFunc.zero(ctx)) != 1:
        raise ValueError("input is not a solution of x + y + z = 1")

    depth, stripped = _strip_common_roots(sol)
    flags = [is_pth_power(c) for c in stripped]
    if flags.count(True) > 1:
        raise DecompositionError(
            "strip", "two coordinates in K^p after stripping (impossible "
            "along x + y + z = 1)")

    if True in flags:
        i = flags.index(True)
        arrangement = (i,) + tuple(j for j in range(3) if j != i)
    else:
        arrangement = (0, 1, 2)
    ax, ay, az = (stripped[i] for i in arrangement)

    if flags.count(True) == 1:
        return _case_power_coordinate(group, sol, depth, stripped,
                                      arrangement, ax, ay, az)

    lx = derive(ax) / ax
    ly = derive(ay) / ay
    lz = derive(az) / az
    collision = None
    for pair, (la, lb) in (((0, 1), (lx, ly)), ((0, 2), (lx, lz)),
                           ((1, 2), (ly, lz))):
        if la == lb:
            collision = pair
            break
    if collision is not None:
        return _case_collision(group, sol, depth, stripped, collision)
    return _case_distinct_ratios(group, sol, depth, stripped, lx, ly, lz)


def _bounded_family(group, original, depth, stripped, case, coefficients,
                    detail=None) -> DecompositionReport:
    family = FrobeniusFamily(1, tuple(stripped))
    return _finish(group, original, depth, case, TAG_BOUNDED, family,
                   (depth, None), (0, 1, 2), coefficients, detail)


def _case_power_coordinate(group, original, depth, stripped, arrangement,
                           ax, ay, az) -> DecompositionReport:
    a2 = pair_coefficient(az, ay)
    b3 = pair_coefficient(ay, az)
    if a2.is_zero or b3.is_zero:
        raise DecompositionError(
            "power-coord", "vanishing coefficient would force a constant "
            "coordinate, contradicting the nonconstancy precondition")
    if __debug__:
        assert a2 == (1 - ax) / ay, "coefficient identity a2 = (1-x)/y failed"
        assert b3 == (1 - ax) / az, "coefficient identity b3 = (1-x)/z failed"
        assert a2.reciprocal() + b3.reciprocal() == 1
    a2_unit = group.is_sunit(a2)
    if a2_unit != group.is_sunit(b3):
        raise DecompositionError(
            "power-coord", "a2 and b3 disagree on S-unit membership")
    coefficients = {"a2": a2, "b3": b3}
    if not a2_unit:
        s, delta = frobenius_depth(ax)
        epsilon = 1 - delta
        coefficients.update({"delta": delta, "epsilon": epsilon, "s": s})
        return _bounded_family(group, original, depth, stripped,
                               CASE_POWER_NONUNIT, coefficients)
    if a2.is_constant or b3.is_constant:
        raise DecompositionError(
            "power-coord", "constant unit coefficient would force the "
            "arranged y or z into K^p")
    s, x_core = frobenius_depth(ax)
    w = 1 - x_core  # equals a2 * y' and b3 * z'
    u = _unpermute((RatFunc.one(group.ctx), a2.reciprocal(), b3.reciprocal()),
                   arrangement)
    v = _unpermute((x_core, w, w), arrangement)
    family = FrobeniusFamily(2, u, v, step=1)
    coefficients["s"] = s
    return _finish(group, original, depth, CASE_POWER_UNIT, TAG_STEP_P,
                   family, (depth, s), arrangement, coefficients)


def _case_distinct_ratios(group, original, depth, stripped,
                          lx, ly, lz) -> DecompositionReport:
    a1 = 1 - lx / lz
    a2 = 1 - ly / lz
    b1 = 1 - lx / ly
    b3 = 1 - lz / ly
    for name, c in (("a1", a1), ("a2", a2), ("b1", b1), ("b3", b3)):
        if c.is_zero:
            raise DecompositionError(
                "distinct-ratios", f"coefficient {name} vanished although "
                "the logarithmic-derivative ratios are distinct")
    ax, ay, az = stripped
    if __debug__:
        assert a1 * ax + a2 * ay == 1
        assert b1 * ax + b3 * az == 1
        assert a2.reciprocal() + b3.reciprocal() == 1
        assert a1 / a2 + b1 / b3 == 1
    coefficients = {"a1": a1, "a2": a2, "b1": b1, "b3": b3}
    units = {name: group.is_sunit(c) for name, c in coefficients.items()}
    if not all(units.values()):
        nonunit = ",".join(name for name, ok in units.items() if not ok)
        return _bounded_family(group, original, depth, stripped,
                               CASE_DISTINCT_NONUNIT, coefficients,
                               detail=f"nonunit:{nonunit}")
    d = a1 / b1
    coefficients["d"] = d
    if not d.is_constant:
        return _bounded_family(group, original, depth, stripped,
                               CASE_DISTINCT_RATIO_NONCONST, coefficients)
    constant = [name for name, c in (("a1", a1), ("a2", a2), ("b1", b1),
                                     ("b3", b3)) if c.is_constant]
    if constant:
        return _bounded_family(group, original, depth, stripped,
                               CASE_DISTINCT_CONST_COEFF, coefficients,
                               detail="constant:" + ",".join(constant))
    w_full = a1 * ax
    if w_full.is_constant:
        return _bounded_family(group, original, depth, stripped,
                               CASE_DISTINCT_CONST_COEFF, coefficients,
                               detail="constant:a1*x")
    ctx = group.ctx
    p_depth, _ = frobenius_depth(w_full)
    level = p_depth // ctx.m
    w = w_full
    for _ in range(level * ctx.m):
        w = pth_root(w)
    u = (a1.reciprocal(), a2.reciprocal(), b3.reciprocal())
    v = (w, 1 - w, 1 - w / d)
    family = FrobeniusFamily(2, u, v, step=ctx.m)
    coefficients["level"] = level
    return _finish(group, original, depth, CASE_DISTINCT_QSTEP, TAG_STEP_Q,
                   family, (depth, level), (0, 1, 2), coefficients)


def _case_collision(group, original, depth, stripped, pair) -> DecompositionReport:
    i, j = pair
    k = ({0, 1, 2} - set(pair)).pop()
    arrangement = (k, i, j)
    ck, ci, cj = stripped[k], stripped[i], stripped[j]
    case = CASE_COLLISION[pair]
    a1 = pair_coefficient(ci, ck)  # 1 - (c_i/Dc_i)(Dc_k/c_k)
    if a1 * ck != 1:
        raise DecompositionError(
            case, "collision identity a1 * special = 1 failed")
    if a1 == 1:
        raise DecompositionError(
            case, "a1 = 1 would force the special coordinate into K^p")
    alpha = a1 / (a1 - 1)
    if __debug__:
        assert alpha == (1 - ck).reciprocal()
        assert alpha * ci + alpha * cj == 1
    coefficients = {"a1": a1, "alpha": alpha}
    if not group.is_sunit(alpha):
        return _bounded_family(group, original, depth, stripped, case,
                               coefficients, detail="nonunit:alpha")
    if alpha.is_constant:
        return _bounded_family(group, original, depth, stripped, case,
                               coefficients, detail="constant:alpha")
    wi = alpha * ci
    wj = alpha * cj
    if wi.is_constant or wj.is_constant:
        return _bounded_family(group, original, depth, stripped, case,
                               coefficients, detail="constant:alpha-product")
    s, yprime = frobenius_depth(wi)
    s2, zprime = frobenius_depth(wj)
    if s != s2:
        raise DecompositionError(
            case, f"mismatched Frobenius depths {s} != {s2} along "
            "alpha*y + alpha*z = 1")
    if __debug__:
        assert yprime + zprime == 1
    u = _unpermute((ck, alpha.reciprocal(), alpha.reciprocal()), arrangement)
    v = _unpermute((RatFunc.one(group.ctx), yprime, zprime), arrangement)
    family = FrobeniusFamily(2, u, v, step=1)
    coefficients["s"] = s
    return _finish(group, original, depth, case, TAG_STEP_P, family,
                   (depth, s), arrangement, coefficients)


# -- canonical-form verification -------------------------------------------------


def step_subfield(ctx: FieldContext, step: int) -> list[int]:
    """Elements of F_q fixed by the step-fold Frobenius (a subfield).

    Step 1 gives F_p, step m gives all of F_q; Frobenius on F_q has order
    m, so only step mod m matters.
    """
    reduced = step % ctx.m
    out = []
    for c in range(ctx.q):
        image = c
        for _ in range(reduced):
            image = ctx.frob(image)
        if image == c:
            out.append(c)
    return out


def _projective_triples(subfield: list[int]):
    """Nonzero triples over the subfield up to scaling (first nonzero = 1)."""
    nonzero = [c for c in subfield if c != 0]
    for a2 in subfield:
        for a3 in subfield:
            yield (1, a2, a3)
    for a3 in subfield:
        yield (0, 1, a3)
    yield (0, 0, 1)


def verify_family(fam: FrobeniusFamily, group: SUnitGroup) -> CanonicalForm:
    """Certify a two-dimensional family for every step exponent.

    Success returns the canonical form (alpha, lambda) over the step
    subfield; the reduction through alpha proves the defining identity for
    all f >= 0, not merely the sampled ones.  Failure raises
    FamilyRejected carrying either the first violating f <= 3 or the
    reason no canonical form can exist (the subfield is finite, so the
    exhaustive dependence search is itself the proof of absence).
    """
    if fam.dimension != 2:
        raise ValueError("only two-dimensional families carry a canonical form")
    ctx = group.ctx
    subfield = step_subfield(ctx, fam.step)

    for f in range(4):
        member = fam.element(0, f)
        if sum(member, RatFunc.zero(ctx)) != 1:
            raise FamilyRejected("family identity fails", failing_f=f)

    in_subfield = [c.is_constant and c.constant_value() in subfield
                   for c in fam.v]
    if all(in_subfield):
        raise FamilyRejected(
            "v lies in the step subfield, so the family degenerates to a "
            "one-dimensional orbit")

    dependences = []
    for alpha in _projective_triples(subfield):
        combo = (RatFunc.constant(ctx, alpha[0]) * fam.v[0]
                 + RatFunc.constant(ctx, alpha[1]) * fam.v[1]
                 + RatFunc.constant(ctx, alpha[2]) * fam.v[2])
        if combo.is_zero:
            dependences.append(alpha)
    if not dependences:
        raise FamilyRejected(
            "no linear dependence of v over the step subfield exists "
            "(exhausted the projective space)")

    # symmetry normalization: eliminate any coordinate with a nonzero
    # dependence coefficient, preferring the third
    last_reason = "no usable dependence"
    for pivot in (2, 1, 0):
        i, j = (k for k in range(3) if k != pivot)
        for alpha in dependences:
            if alpha[pivot] == 0:
                continue
            ratio_i = ctx.div(alpha[i], alpha[pivot])
            ratio_j = ctx.div(alpha[j], alpha[pivot])
            lam_i = fam.u[i] - RatFunc.constant(ctx, ratio_i) * fam.u[pivot]
            lam_j = fam.u[j] - RatFunc.constant(ctx, ratio_j) * fam.u[pivot]
            if not (lam_i.is_constant and lam_j.is_constant):
                last_reason = "reduced coefficients are nonconstant"
                continue
            li = lam_i.constant_value()
            lj = lam_j.constant_value()
            if li not in subfield or lj not in subfield:
                last_reason = "reduced coefficients fall outside the step subfield"
                continue
            if lam_i * fam.v[i] + lam_j * fam.v[j] != 1:
                last_reason = "two-term reduction lambda_1 v_1 + " \
                    "lambda_2 v_2 = 1 fails"
                continue
            zeros = sum(1 for c in (alpha[i], alpha[j], li, lj) if c == 0)
            if zeros > 1:
                last_reason = "degenerate form: two of alpha_1, alpha_2, " \
                    "lambda_1, lambda_2 vanish"
                continue
            return CanonicalForm(
                alpha=(alpha[i], alpha[j], alpha[pivot]), lam=(li, lj),
                step=fam.step, subfield_size=len(subfield),
                permutation=(i, j, pivot))
    raise FamilyRejected(last_reason)
