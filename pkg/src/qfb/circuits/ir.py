"""Gate and circuit value types."""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field


class GateKind(enum.Enum):
    X = "x"
    Y = "y"
    Z = "z"
    H = "h"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    P = "p"
    RZ = "rz"
    RX = "rx"
    RY = "ry"
    SWAP = "swap"

    @property
    def parameterized(self) -> bool:
        return self in _PARAMETERIZED


_PARAMETERIZED = frozenset({GateKind.P, GateKind.RZ, GateKind.RX, GateKind.RY})

_SQ2 = 1 / math.sqrt(2)
_W = cmath.exp(2j * math.pi / 8)

_FIXED = {
    GateKind.X: ((0, 1), (1, 0)),
    GateKind.Y: ((0, -1j), (1j, 0)),
    GateKind.Z: ((1, 0), (0, -1)),
    GateKind.H: ((_SQ2, _SQ2), (_SQ2, -_SQ2)),
    GateKind.S: ((1, 0), (0, 1j)),
    GateKind.SDG: ((1, 0), (0, -1j)),
    GateKind.T: ((1, 0), (0, _W)),
    GateKind.TDG: ((1, 0), (0, _W.conjugate())),
}


class CircuitError(ValueError):
    """Invalid gate or circuit."""


@dataclass(frozen=True)
class Gate:
    """A single- or multi-controlled gate.

    ``SWAP`` exchanges ``target`` and ``target2``; every other kind is a
    2x2 base matrix applied to ``target`` whenever all ``controls`` are |1>.
    """

    kind: GateKind
    target: int
    controls: frozenset[int] = field(default_factory=frozenset)
    theta: float | None = None
    target2: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "controls", frozenset(self.controls))
        if self.kind.parameterized != (self.theta is not None):
            raise CircuitError(f"{self.kind.value}: angle given iff the gate is parameterized")
        if (self.kind is GateKind.SWAP) != (self.target2 is not None):
            raise CircuitError("swap needs exactly two targets")
        qubits = self.qubits
        if len(set(qubits)) != len(qubits):
            raise CircuitError(f"{self.kind.value}: target and control qubits overlap")
        if min(qubits) < 0:
            raise CircuitError(f"{self.kind.value}: negative qubit index")

    @property
    def qubits(self) -> tuple[int, ...]:
        ts = (self.target,) if self.target2 is None else (self.target, self.target2)
        return ts + tuple(sorted(self.controls))

    def check(self, n: int) -> None:
        if max(self.qubits) >= n:
            raise CircuitError(f"{self.kind.value} touches qubit {max(self.qubits)} of a {n}-qubit system")

    def matrix(self) -> tuple[tuple[complex, complex], tuple[complex, complex]]:
        """The 2x2 base matrix (before controls)."""
        k = self.kind
        if k in _FIXED:
            return _FIXED[k]
        t = self.theta
        if k is GateKind.P:
            return ((1, 0), (0, cmath.exp(1j * t)))
        if k is GateKind.RZ:
            return ((cmath.exp(-0.5j * t), 0), (0, cmath.exp(0.5j * t)))
        c, s = math.cos(t / 2), math.sin(t / 2)
        if k is GateKind.RX:
            return ((c, -1j * s), (-1j * s, c))
        if k is GateKind.RY:
            return ((c, -s), (s, c))
        raise CircuitError(f"{k.value} has no 2x2 base matrix")

    def __str__(self) -> str:
        name = self.kind.value
        if self.theta is not None:
            name += f"({self.theta:g})"
        targets = [self.target] if self.target2 is None else [self.target, self.target2]
        args = [f"q{q}" for q in sorted(self.controls) + targets]
        return f"{name} {','.join(args)}"


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over ``n`` qubits; ``gates[0]`` is applied first."""

    n: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.n < 1:
            raise CircuitError("a circuit needs at least one qubit")
        for g in self.gates:
            g.check(self.n)

    @property
    def m(self) -> int:
        return len(self.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def __add__(self, other: Circuit) -> Circuit:
        if other.n != self.n:
            raise CircuitError("cannot concatenate circuits of different width")
        return Circuit(self.n, self.gates + other.gates)


@dataclass(frozen=True)
class RepeatedCircuit:
    """``init`` followed by ``repetitions`` copies of ``iteration``."""

    init: Circuit
    iteration: Circuit
    repetitions: int

    def __post_init__(self):
        if self.init.n != self.iteration.n:
            raise CircuitError("init and iteration act on different qubit counts")
        if self.repetitions < 1:
            raise CircuitError("repetitions must be >= 1")

    @property
    def n(self) -> int:
        return self.init.n

    @property
    def m(self) -> int:
        return self.init.m + self.repetitions * self.iteration.m

    def unrolled(self) -> Circuit:
        return Circuit(self.n, self.init.gates + self.iteration.gates * self.repetitions)
