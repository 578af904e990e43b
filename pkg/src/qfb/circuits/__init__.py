from qfb.circuits.generators import (
    generate_grover,
    generate_qft,
    grover_iterations,
    optimal_grover_iterations,
    random_circuit,
)
from qfb.circuits.ir import Circuit, CircuitError, Gate, GateKind, RepeatedCircuit
from qfb.circuits.qasm import QasmError, emit_qasm, parse_qasm

__all__ = [
    "Circuit",
    "CircuitError",
    "Gate",
    "GateKind",
    "QasmError",
    "RepeatedCircuit",
    "emit_qasm",
    "generate_grover",
    "generate_qft",
    "grover_iterations",
    "optimal_grover_iterations",
    "parse_qasm",
    "random_circuit",
]
