"""Counting distinct Frobenius families against the printed ceilings.

The decomposition maps every nonconstant solution to a family in one of
three classes; the number of DISTINCT families needed is bounded by

    bounded class:     93 q^2 (log_{5/4}(3 c') + 1)^2 (15*10^6)^|S|
    step-p class:      961 p^5 19^(4|S|)
    step-q class:      961 log_p(q) q^5 19^(4|S|)

with c' the solution height cap.  The first bound is also tracked per
covering case with the sharper 31 q^2 constant, which the derivation gives
case by case; the report always compares against the printed 93 q^2 value.
A failure here indicates an artifact bug, never new mathematics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .families import (TAG_BOUNDED, TAG_STEP_P, TAG_STEP_Q,
                       DecompositionReport)
from .group import SUnitGroup, height_caps


@dataclass(frozen=True)
class CountBoundReport:
    bounded_count: int
    step_p_count: int
    step_q_count: int
    bounded_bound: float
    bounded_per_case_bound: float
    step_p_bound: int
    step_q_bound: int
    passed: bool

    def rows(self):
        return (
            ("bounded", self.bounded_count, self.bounded_bound),
            ("two-dim-step-p", self.step_p_count, self.step_p_bound),
            ("two-dim-step-q", self.step_q_count, self.step_q_bound),
        )


def count_bound_report(group: SUnitGroup,
                       reports: list[DecompositionReport]) -> CountBoundReport:
    """Tally distinct families per class and compare with the ceilings."""
    ctx = group.ctx
    s = len(group.S)
    caps = height_caps(group.S, ctx)
    families = {TAG_BOUNDED: set(), TAG_STEP_P: set(), TAG_STEP_Q: set()}
    for report in reports:
        families[report.set_tag].add(report.family.key())

    window_count = math.log(3 * caps.solution_cap, 1.25) + 1
    bounded_bound = 93 * ctx.q ** 2 * window_count ** 2 * (15 * 10 ** 6) ** s
    per_case_bound = 31 * ctx.q ** 2 * window_count ** 2 * (15 * 10 ** 6) ** s
    step_p_bound = 961 * ctx.p ** 5 * 19 ** (4 * s)
    step_q_bound = 961 * ctx.m * ctx.q ** 5 * 19 ** (4 * s)

    counts = {tag: len(keys) for tag, keys in families.items()}
    passed = (counts[TAG_BOUNDED] <= bounded_bound
              and counts[TAG_STEP_P] <= step_p_bound
              and counts[TAG_STEP_Q] <= step_q_bound)
    return CountBoundReport(
        bounded_count=counts[TAG_BOUNDED],
        step_p_count=counts[TAG_STEP_P],
        step_q_count=counts[TAG_STEP_Q],
        bounded_bound=bounded_bound,
        bounded_per_case_bound=per_case_bound,
        step_p_bound=step_p_bound,
        step_q_bound=step_q_bound,
        passed=passed,
    )
