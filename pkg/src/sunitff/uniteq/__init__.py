"""S-unit equation machinery: groups, solvers, families, covers, counts."""

from .counts import CountBoundReport, count_bound_report
from .families import (CASE_COLLISION, CASE_DISTINCT_CONST_COEFF,
                       CASE_DISTINCT_NONUNIT, CASE_DISTINCT_QSTEP,
                       CASE_DISTINCT_RATIO_NONCONST, CASE_POWER_NONUNIT,
                       CASE_POWER_UNIT, TAG_BOUNDED, TAG_STEP_P, TAG_STEP_Q,
                       CanonicalForm, DecompositionError,
                       DecompositionReport, FamilyRejected, FrobeniusFamily,
                       decompose_solution, family_contains, step_subfield,
                       verify_family)
from .gap import (DEFAULT_POINT_CAP, GapInstanceTooLarge, GapWindowReport,
                  cover_bound, gap_cover_check, minimum_line_cover,
                  solution_points, window_reports)
from .group import (HeightCaps, SUnit, SUnitGroup, height_caps, mason_bound)
from .solve import (DEFAULT_PAIR_BUDGET, BudgetExceeded, MasonBoundViolation,
                    Solution3, solve_three_term, solve_two_term)

__all__ = [
    "BudgetExceeded", "CanonicalForm", "CountBoundReport",
    "DecompositionError", "DecompositionReport", "FamilyRejected",
    "FrobeniusFamily", "GapInstanceTooLarge", "GapWindowReport",
    "HeightCaps", "MasonBoundViolation", "SUnit", "SUnitGroup", "Solution3",
    "TAG_BOUNDED", "TAG_STEP_P", "TAG_STEP_Q",
    "CASE_COLLISION", "CASE_DISTINCT_CONST_COEFF", "CASE_DISTINCT_NONUNIT",
    "CASE_DISTINCT_QSTEP", "CASE_DISTINCT_RATIO_NONCONST",
    "CASE_POWER_NONUNIT", "CASE_POWER_UNIT",
    "DEFAULT_PAIR_BUDGET", "DEFAULT_POINT_CAP",
    "count_bound_report", "cover_bound", "decompose_solution",
    "family_contains", "gap_cover_check", "height_caps", "mason_bound",
    "minimum_line_cover", "solution_points", "solve_three_term",
    "solve_two_term", "step_subfield", "verify_family", "window_reports",
]
