"""Multiphase SFQ technology mapping: stage assignment and DFF insertion."""

from .decompose import GateCategory, MappingConfig, SfqNetwork, classify, decompose
from .netlist import (
    GateKind,
    Network,
    NetlistError,
    ValidationReport,
    equivalent,
    parse_blif,
    parse_netlist,
    simulate,
    topological_order,
    validate,
)
from .phase import StageAssignment, StageBounds, assign_stages, build_phase_model, build_stage_bounds
from .pipeline import MappingResult, map_network
from .solver import ConstraintModel, Solution, SolverBudget, Status, solve, verify_solution
from .splitters import SplitterPlan, insert_splitter_trees
from .dff import (
    DffSite,
    IndependentPath,
    brute_force_min_dffs,
    build_insertion_model,
    enumerate_sites,
    extract_paths,
    insert_dffs,
)
from .verify import (
    MappingReport,
    count_jjs,
    emit_dot,
    emit_netlist,
    emit_report_json,
    load_cost_table,
    parse_annotated,
    verify_timing,
)

__version__ = "0.1.0"
