"""Quantum states as order-n tensors, gates as multilinear maps."""
from .circuit import TraceStep, run_compare, run_state, run_traced, teleportation
from .gates import (GateTerm, MultilinearGate, QuasiMultilinearGate, SingleQubitGate, apply_controlled,
                    apply_multilinear, apply_single, apply_term, controlled_to_terms, gate_library)
from .ir import Circuit
from .measurement import SplitMix64, measure, measure_forced, sample_counts
from .opcount import OpCounter
from .parser import ParseError, parse
from .rank import (Bipartition, operator_schmidt, realignment_rank, schmidt_decompose, schmidt_rank,
                   three_qubit_class)
from .state import TensorState, approx_equal, basis_state, product_state, qubit_state, slice_state

__all__ = [
    "Bipartition", "Circuit", "GateTerm", "MultilinearGate", "OpCounter", "ParseError", "QuasiMultilinearGate",
    "SingleQubitGate", "SplitMix64", "TensorState", "TraceStep", "apply_controlled", "apply_multilinear",
    "apply_single", "apply_term", "approx_equal", "basis_state", "controlled_to_terms", "gate_library",
    "measure", "measure_forced", "operator_schmidt", "parse", "product_state", "qubit_state",
    "realignment_rank", "run_compare", "run_state", "run_traced", "sample_counts", "schmidt_decompose",
    "schmidt_rank", "slice_state", "teleportation", "three_qubit_class",
]
