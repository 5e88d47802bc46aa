"""Condition numbers, amenability and compatibility of univariate functions,
with a simulated floating-point system for stability experiments."""

from .amenability import (
    AmenabilityReport,
    amenability_report,
    check_definition_direct,
    check_item1,
    check_item2,
    combine_union,
    falsify_ball_escape,
    select_proposition,
)
from .autodiff import Jet2, eval_jet2
from .catalog import list_entries, reproduce_tables, verify_entry
from .compatibility import A_ratio, B_ratio, check_compatible
from .conditioning import G_value, H_value, composition_kappa_check, cond_report, kappa, mu
from .expr import evaluate, parse, to_text
from .fp_sim import FpSystem, eval_in_fp, fp_op, round_fl
from .intervals import IntervalDomain, parse_domain
from .metric import ball, dist_to_set, rel_distance
from .roots import natural_domain, zero_locus
from .stability import backward_check, composition_experiment, forward_profile, mixed_check

__version__ = "0.1.0"
