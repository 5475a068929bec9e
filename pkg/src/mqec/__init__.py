"""Surface-code error correction built from single- and two-qubit Pauli
measurements: gadget circuits, qubit layouts, space-time decoding graphs,
a Union-Find decoder, and Monte Carlo threshold estimation."""

__version__ = "0.1.0"

from .pauli import PauliOperator, commutes, multiply
from .tableau import StabilizerState, random_stabilizer_state, run_circuit, states_equivalent

__all__ = [
    "PauliOperator",
    "StabilizerState",
    "commutes",
    "multiply",
    "random_stabilizer_state",
    "run_circuit",
    "states_equivalent",
]
