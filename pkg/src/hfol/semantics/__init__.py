"""Kripke semantics: structures, satisfaction, reachability, probing, consequence."""

from .consequence import Verdict, consequence_bounded, enumerate_models, find_model
from .kripke import (KripkeHomomorphism, KripkeStructure, WorldStructure, build_model,
                     check_model, expand, expansion_count, expansions, find_isomorphism,
                     homomorphism_violations, identity_homomorphism, inverse,
                     is_homomorphism, is_isomorphism, isomorphisms, reduct, relabel,
                     validate_model)
from .probes import ProbeSet, equivalent_on, probe_sentences
from .reachability import (ReachabilityReport, ReplacementPlan, generated_elements,
                           is_reachable, reachability_report, reachable_by, swap_unreachable,
                           term_denotations, unreachable_elements)
from .satisfaction import eval_term, sat_all, sat_global, sat_local, satisfying_worlds

__all__ = [
    "KripkeHomomorphism", "KripkeStructure", "ProbeSet", "ReachabilityReport",
    "ReplacementPlan", "Verdict", "WorldStructure", "build_model", "check_model",
    "consequence_bounded", "enumerate_models", "equivalent_on", "eval_term", "expand",
    "expansion_count", "expansions", "find_isomorphism", "find_model", "generated_elements",
    "homomorphism_violations", "identity_homomorphism", "inverse", "is_homomorphism",
    "is_isomorphism", "is_reachable", "isomorphisms", "probe_sentences", "reachability_report",
    "reachable_by", "reduct", "relabel", "sat_all", "sat_global", "sat_local",
    "satisfying_worlds", "swap_unreachable", "term_denotations", "unreachable_elements",
    "validate_model",
]
