"""Benchmark circuit families: QFT, Grover search and seeded random circuits."""

from __future__ import annotations

import math
import os
import random

from qfb.circuits.ir import Circuit, CircuitError, Gate, GateKind, RepeatedCircuit


def generate_qft(n: int, with_final_swaps: bool = False) -> Circuit:
    """Swap-free QFT: per qubit ``j`` (``q0`` first), H then controlled phases.

    The controlled phase from qubit ``k > j`` onto ``j`` has angle
    ``pi / 2**(k - j)``.  Without the final swaps the outputs come out in
    bit-reversed order.
    """
    if n < 1:
        raise CircuitError("QFT needs at least one qubit")
    gates = []
    for j in range(n):
        gates.append(Gate(GateKind.H, j))
        for k in range(j + 1, n):
            gates.append(Gate(GateKind.P, j, frozenset({k}), math.pi / 2 ** (k - j)))
    if with_final_swaps:
        for j in range(n // 2):
            gates.append(Gate(GateKind.SWAP, j, target2=n - 1 - j))
    return Circuit(n, gates)


def grover_iterations(d: int) -> int:
    """Default repetition count ``floor(sqrt(2**d))``."""
    return math.isqrt(1 << d)


def optimal_grover_iterations(d: int) -> int:
    """Textbook count ``floor(pi/4 * sqrt(2**d))`` (at least one)."""
    return max(1, math.floor(math.pi / 4 * math.sqrt(1 << d)))


def generate_grover(d: int, marked: str | None = None, iterations: int | None = None) -> RepeatedCircuit:
    """Grover search over ``2**d`` items with a phase-kickback oracle.

    Data qubits are ``q0 .. q{d-1}``, the flag qubit is ``q{d}``.  ``marked``
    is read most significant bit first, so ``marked[0]`` belongs to
    ``q{d-1}``; it defaults to all ones.
    """
    if d < 1:
        raise CircuitError("Grover needs at least one data qubit")
    if marked is None:
        marked = "1" * d
    if len(marked) != d or set(marked) - {"0", "1"}:
        raise CircuitError(f"marked element must be a {d}-bit string, got {marked!r}")
    reps = grover_iterations(d) if iterations is None else iterations
    n = d + 1
    anc = d
    data = list(range(d))

    init = [Gate(GateKind.X, anc)] + [Gate(GateKind.H, q) for q in range(n)]

    zeros = [d - 1 - i for i, b in enumerate(marked) if b == "0"]
    flips = [Gate(GateKind.X, q) for q in sorted(zeros)]
    oracle = flips + [Gate(GateKind.X, anc, frozenset(data))] + flips

    hs = [Gate(GateKind.H, q) for q in data]
    xs = [Gate(GateKind.X, q) for q in data]
    mcz = Gate(GateKind.Z, data[0], frozenset(data[1:]))
    diffusion = hs + xs + [mcz] + xs + hs

    return RepeatedCircuit(Circuit(n, init), Circuit(n, oracle + diffusion), reps)


_RANDOM_KINDS = [
    GateKind.X, GateKind.Y, GateKind.Z, GateKind.H, GateKind.S, GateKind.SDG,
    GateKind.T, GateKind.TDG, GateKind.P, GateKind.RZ, GateKind.RX, GateKind.RY,
    GateKind.SWAP,
]


def random_circuit(n: int, m: int, seed: int | None = None, max_controls: int = 2) -> Circuit:
    """Seeded random circuit over every supported gate kind.

    Without an explicit ``seed`` the ``QFB_SEED`` environment variable is used
    (default 0).
    """
    if seed is None:
        seed = int(os.environ.get("QFB_SEED", "0"))
    rng = random.Random(seed)
    gates = []
    for _ in range(m):
        kind = rng.choice(_RANDOM_KINDS)
        if kind is GateKind.SWAP and n < 2:
            kind = GateKind.H
        qubits = list(range(n))
        rng.shuffle(qubits)
        if kind is GateKind.SWAP:
            nc = rng.randint(0, min(max_controls, n - 2))
            gates.append(Gate(kind, qubits[0], frozenset(qubits[2:2 + nc]), target2=qubits[1]))
            continue
        nc = rng.randint(0, min(max_controls, n - 1))
        theta = rng.uniform(-math.pi, math.pi) if kind.parameterized else None
        gates.append(Gate(kind, qubits[0], frozenset(qubits[1:1 + nc]), theta))
    return Circuit(n, gates)
