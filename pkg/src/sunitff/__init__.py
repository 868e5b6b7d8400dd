"""Exact S-unit equation solving over F_q(t) with Frobenius-family structure.

Subpackages and modules:

* field    -- F_q, F_q[t] and reduced rational function arithmetic
* places   -- places, valuations, heights, support weights
* calculus -- d/dt, p-th roots, Frobenius depth, derivation-generic places
* uniteq   -- S-unit groups, the two- and three-term solvers, family
              decomposition, gap-principle covers, count ceilings
* fermat   -- Fermat-surface curves, lines, the goodness sieve, probes
* cli      -- reproducible batch runs with JSON/TSV reports
"""

from .field import (DEFAULT_DEGREE_CAP, NEG_INFINITY, DegreeCapExceeded,
                    FieldContext, Poly, RatFunc, field_arith, is_irreducible,
                    is_prime, irreducibles, poly_factor, poly_from_term_text,
                    poly_gcd, ratfunc_arith, ratfunc_from_term_text)
from .places import (Place, PlaceSet, height, height_from_valuations, omega,
                     parse_place, parse_place_set, projective_height,
                     support, valuation)
from .calculus import (GenericityReport, coefficient_weight, derive,
                       frobenius_depth, is_d_generic, is_pth_power,
                       log_derivative, pair_coefficient, pth_root,
                       solution_weight)

__version__ = "0.1.0"
