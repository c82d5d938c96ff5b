"""Survivable mapping models: construction, LP emission, solution handling, size accounting."""

from survmap.milp.builders import (
    build_cutset_k_model,
    build_cutset_srlg_model,
    build_model,
    build_tree_k_model,
    build_tree_srlg_model,
)
from survmap.milp.lp_writer import emit_lp, write_lp
from survmap.milp.model import FAMILIES, Constraint, MilpModel, VariableRef
from survmap.milp.sizes import ModelDims, SizeReport, exact_counts, formula_counts, model_size_report
from survmap.milp.solution import (
    ViolationReport,
    check_solution,
    construct_assignment,
    format_solution,
    ingest_solution,
    parse_solution,
    pin_routes,
    read_solution,
    tree_flows,
)

__all__ = [
    "FAMILIES", "Constraint", "MilpModel", "VariableRef", "ModelDims", "SizeReport", "ViolationReport",
    "build_cutset_k_model", "build_cutset_srlg_model", "build_model", "build_tree_k_model",
    "build_tree_srlg_model", "check_solution", "construct_assignment", "emit_lp", "exact_counts",
    "format_solution", "formula_counts", "ingest_solution", "model_size_report", "parse_solution",
    "pin_routes", "read_solution", "tree_flows", "write_lp",
]
