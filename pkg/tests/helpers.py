"""Shared fixtures: hand-written reference matrices and a gate strategy."""

import cmath
import math

import numpy as np
from hypothesis import strategies as st

from qfb.circuits import Gate, GateKind

SQ2 = 1 / math.sqrt(2)
OMEGA = cmath.exp(2j * math.pi / 8)

H_Q0 = Gate(GateKind.H, 0)
CS_Q1_Q0 = Gate(GateKind.S, 0, frozenset({1}))
CT_Q2_Q0 = Gate(GateKind.T, 0, frozenset({2}))

# the three example operations on three qubits, written out by hand
FIG_H = np.kron(np.eye(4), SQ2 * np.array([[1, 1], [1, -1]]))
FIG_CS = np.diag([1, 1, 1, 1j, 1, 1, 1, 1j])
FIG_CT = np.diag([1, 1, 1, 1, 1, OMEGA, 1, OMEGA])

kinds = st.sampled_from(list(GateKind))


@st.composite
def gates(draw, n):
    kind = draw(kinds)
    qubits = draw(st.permutations(range(n)))
    if kind is GateKind.SWAP and n < 2:
        kind = GateKind.X
    nt = 2 if kind is GateKind.SWAP else 1
    nc = draw(st.integers(0, n - nt))
    theta = draw(st.floats(-math.pi, math.pi)) if kind.parameterized else None
    controls = frozenset(qubits[nt:nt + nc])
    if kind is GateKind.SWAP:
        return Gate(kind, qubits[0], controls, target2=qubits[1])
    return Gate(kind, qubits[0], controls, theta)
