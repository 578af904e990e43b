"""Plain dense-matrix reference, kept apart from the decision-diagram code.

Nothing here touches the canonical weight table or the diagram engine;
base matrices are restated locally so a mistake in one place cannot hide
the same mistake in the other.
"""

from __future__ import annotations

import numpy as np

from qfb.circuits.ir import Circuit, Gate

GATE_LIMIT = 12
PRODUCT_LIMIT = 10


def base_matrix(kind: str, theta: float | None = None) -> np.ndarray:
    s = 1 / np.sqrt(2)
    w = np.exp(1j * np.pi / 4)
    table = {
        "x": [[0, 1], [1, 0]],
        "y": [[0, -1j], [1j, 0]],
        "z": [[1, 0], [0, -1]],
        "h": [[s, s], [s, -s]],
        "s": [[1, 0], [0, 1j]],
        "sdg": [[1, 0], [0, -1j]],
        "t": [[1, 0], [0, w]],
        "tdg": [[1, 0], [0, np.conj(w)]],
    }
    if kind in table:
        return np.array(table[kind], dtype=complex)
    if kind not in ("p", "rz", "rx", "ry") or theta is None:
        raise ValueError(f"no base matrix for {kind!r} with angle {theta!r}")
    half = theta / 2
    if kind == "p":
        return np.array([[1, 0], [0, np.exp(1j * theta)]])
    if kind == "rz":
        return np.array([[np.exp(-1j * half), 0], [0, np.exp(1j * half)]])
    if kind == "rx":
        return np.array([[np.cos(half), -1j * np.sin(half)], [-1j * np.sin(half), np.cos(half)]])
    return np.array([[np.cos(half), -np.sin(half)], [np.sin(half), np.cos(half)]], dtype=complex)


def _bit(i: int, q: int) -> int:
    return (i >> q) & 1


def dense_gate(gate: Gate, n: int) -> np.ndarray:
    """Full 2^n x 2^n matrix of ``gate``, filled column by column."""
    if n > GATE_LIMIT:
        raise ValueError(f"dense gates are limited to n <= {GATE_LIMIT}")
    gate.check(n)
    dim = 1 << n
    out = np.zeros((dim, dim), dtype=complex)
    kind = gate.kind.value
    if kind == "swap":
        a, b = gate.target, gate.target2
        for col in range(dim):
            row = col
            if all(_bit(col, c) for c in gate.controls) and _bit(col, a) != _bit(col, b):
                row = col ^ (1 << a) ^ (1 << b)
            out[row, col] = 1
        return out
    u = base_matrix(kind, gate.theta)
    t = gate.target
    for col in range(dim):
        if not all(_bit(col, c) for c in gate.controls):
            out[col, col] = 1
            continue
        tb = _bit(col, t)
        for rb in (0, 1):
            row = (col & ~(1 << t)) | (rb << t)
            out[row, col] = u[rb, tb]
    return out


def dense_product(circuit: Circuit) -> np.ndarray:
    """``U_{m-1} ... U_0`` by repeated dense multiplication."""
    if circuit.n > PRODUCT_LIMIT:
        raise ValueError(f"dense products are limited to n <= {PRODUCT_LIMIT}")
    if not circuit.gates:
        return np.eye(1 << circuit.n, dtype=complex)
    u = dense_gate(circuit.gates[0], circuit.n)
    for g in circuit.gates[1:]:
        u = dense_gate(g, circuit.n) @ u
    return u


def bit_reversed_dft(n: int) -> np.ndarray:
    """DFT matrix ``F[j, k] = exp(2 pi i j k / 2^n) / sqrt(2^n)`` composed
    with the bit-reversal permutation.

    With ``q0`` as the least significant bit the swap-free QFT circuit reads
    its input register in reversed bit order, so the permutation acts on the
    column index: the result is ``F[:, rev]``.
    """
    dim = 1 << n
    j = np.arange(dim)
    f = np.exp(2j * np.pi * np.outer(j, j) / dim) / np.sqrt(dim)
    rev = np.array([int(format(i, f"0{n}b")[::-1], 2) for i in range(dim)])
    return f[:, rev]


def is_unitary(u: np.ndarray, atol: float = 1e-9) -> bool:
    return bool(np.allclose(u @ u.conj().T, np.eye(u.shape[0]), rtol=0, atol=atol))
