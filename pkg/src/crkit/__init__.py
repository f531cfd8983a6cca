"""crkit: color refinement, amenability recognition, fractional isomorphism,
Tinhofer's algorithm, graph-class oracles, and the circuit-value reduction."""

from .amenability import AmenabilityVerdict, amenable_bruteforce, check_CDEF, is_amenable
from .cells import CellGraphData, CellKind, PairKind, anisotropic_components, build as build_cell_graph
from .errors import BudgetExceededError, GraphFormatError
from .fractional import (RatMatrix, birkhoff_decompose, build_polytope, compact_probe,
                         extreme_point, is_fractionally_isomorphic)
from .graphs import (ColoredGraph, complement, disjoint_union, load, save, standard_graph)
from .mcvp import MonotoneCircuit, evaluate, parse_circuit, reduce_circuit
from .oracles import (AutGroup, FailingTranscript, automorphisms, is_godsil, is_refinable,
                      is_tinhofer_bruteforce, isomorphic)
from .refinement import (Partition, RefinementTrace, cr_equivalent, is_discrete, is_equitable,
                         refine_step, stable_partition)
from .tinhofer import IsoResult, canonical_form, canonical_graph, tinhofer_iso

__version__ = "0.1.0"

__all__ = [
    "AmenabilityVerdict", "AutGroup", "BudgetExceededError", "CellGraphData", "CellKind",
    "ColoredGraph", "FailingTranscript", "GraphFormatError", "IsoResult", "MonotoneCircuit",
    "PairKind", "Partition", "RatMatrix", "RefinementTrace", "amenable_bruteforce",
    "anisotropic_components", "automorphisms", "birkhoff_decompose", "build_cell_graph",
    "build_polytope", "canonical_form", "canonical_graph", "check_CDEF", "compact_probe",
    "complement", "cr_equivalent", "disjoint_union", "evaluate", "extreme_point",
    "is_amenable", "is_discrete", "is_equitable", "is_fractionally_isomorphic", "is_godsil",
    "is_refinable", "is_tinhofer_bruteforce", "isomorphic", "load", "parse_circuit",
    "reduce_circuit", "refine_step", "save", "stable_partition", "standard_graph",
    "tinhofer_iso",
]
