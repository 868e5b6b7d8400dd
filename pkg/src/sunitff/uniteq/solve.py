"""Exhaustive solvers for x + y = 1 and x + y + z = 1 in S-units.

The two-term solver enumerates x and support-scans y = 1 - x.  Primitive
solutions (x, y outside K^p; the two memberships are equivalent along
x + y = 1) are guaranteed exhaustive at the support-weight height bound;
scanning a larger user cap is allowed, and any primitive solution found
above the bound is reported as a hard failure of the artifact.

The three-term solver enumerates pairs (x, y) up to the height cap and
reconstructs z = 1 - x - y with a support scan, turning a cubic scan into a
quadratic one; completeness is therefore relative to the (x, y) box, which
is exactly the set of triples with max coordinate height <= cap.  A pair
budget guards against accidentally launching astronomically large sweeps.
"""

from __future__ import annotations

from typing import NamedTuple

from ..calculus import is_pth_power
from ..field import RatFunc
from ..places import height
from .group import SUnitGroup, mason_bound

DEFAULT_PAIR_BUDGET = 10_000_000


class MasonBoundViolation(RuntimeError):
    """A primitive two-term solution exceeded the support-weight bound."""


class BudgetExceeded(RuntimeError):
    """Requested enumeration is larger than the configured budget."""

    def __init__(self, candidates: int, pairs: int, budget: int):
        self.candidates = candidates
        self.pairs = pairs
        self.budget = budget
        super().__init__(
            f"refusing to scan {candidates}^2 = {pairs} candidate pairs "
            f"(budget {budget}); raise the budget explicitly to proceed")


class Solution3(NamedTuple):
    x: RatFunc
    y: RatFunc
    z: RatFunc


def solve_two_term(group: SUnitGroup, primitive_only: bool = True,
                   height_cap: int | None = None) -> list[tuple[RatFunc, RatFunc]]:
    """All (x, y) in S-units with x + y = 1 up to the height cap.

    With primitive_only, keeps only solutions outside (K^p)^2; the default
    cap is then the two-term height bound, which is exhaustive for them.
    Without primitive_only an explicit cap is required (Frobenius powers
    make the full solution set infinite).
    """
    bound = mason_bound(group.S, group.ctx)
    if height_cap is None:
        if not primitive_only:
            raise ValueError(
                "non-primitive solve needs an explicit height cap")
        height_cap = max(bound, 0)
    solutions = []
    for unit in group.enumerate_sunits(height_cap):
        x = group.expand(unit)
        y = 1 - x
        if y.is_zero or not group.is_sunit(y):
            continue
        primitive = not is_pth_power(x)
        if primitive and height(x) > bound:
            raise MasonBoundViolation(
                f"primitive solution of height {height(x)} exceeds the "
                f"bound {bound}: x = {x.to_term_text()}")
        if primitive_only and not primitive:
            continue
        solutions.append((x, y))
    solutions.sort(key=lambda s: (s[0].sort_key(), s[1].sort_key()))
    return solutions


def solve_three_term(group: SUnitGroup, height_cap: int,
                     pair_budget: int = DEFAULT_PAIR_BUDGET) -> list[Solution3]:
    """All S-unit triples with x + y + z = 1 and max height <= cap.

    Emits each ordered triple exactly once, in a canonical order that does
    not depend on enumeration internals.
    """
    if height_cap < 1:
        raise ValueError("height cap must be >= 1")
    candidates = [group.expand(u) for u in group.enumerate_sunits(height_cap)]
    n = len(candidates)
    if n * n > pair_budget:
        raise BudgetExceeded(n, n * n, pair_budget)
    solutions = []
    is_sunit = group.is_sunit
    for x in candidates:
        rest = 1 - x
        for y in candidates:
            z = rest - y
            if z.is_zero or not is_sunit(z):
                continue
            if height(z) > height_cap:
                continue
            solutions.append(Solution3(x, y, z))
    solutions.sort(key=lambda s: (s.x.sort_key(), s.y.sort_key()))
    return solutions
