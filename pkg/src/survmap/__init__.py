"""Survivable mapping of logical networks onto physical networks under SRLG and k-link failures."""

from survmap.errors import SurvmapError
from survmap.failure_model import FailureScenario, SrlgSet, gen_3srlg_set, gen_k_failures, validate_srlg_set
from survmap.heuristic import HeuristicConfig, ProtectionPlan, augment, run_k_heuristic, run_srlg_heuristic
from survmap.net_model import LogicalNetwork, Mapping, PhysicalNetwork, SpanningTree
from survmap.verifier import SurvivabilityReport, verify_k, verify_scenario, verify_srlg

__version__ = "0.1.0"

__all__ = [
    "FailureScenario", "HeuristicConfig", "LogicalNetwork", "Mapping", "PhysicalNetwork", "ProtectionPlan",
    "SpanningTree", "SrlgSet", "SurvivabilityReport", "SurvmapError", "augment", "gen_3srlg_set",
    "gen_k_failures", "run_k_heuristic", "run_srlg_heuristic", "validate_srlg_set", "verify_k",
    "verify_scenario", "verify_srlg",
]
