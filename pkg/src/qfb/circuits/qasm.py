"""Reader and writer for a small OpenQASM 2.0 subset.

Supported: an optional ``OPENQASM 2.0;`` header, exactly one ``qreg``, and
the gates ``x y z h s sdg t tdg p rz rx ry cx cz cp swap ccx mcx mcz``.
Multi-qubit gates list their controls first and the target last.  Angles
may use ``pi``, numbers, ``+ - * /`` and parentheses.
"""

from __future__ import annotations

import ast
import math
import operator
import re

from qfb.circuits.ir import Circuit, CircuitError, Gate, GateKind


class QasmError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


# name -> (kind, qubit arity); arity None means two or more
_GATES = {
    "x": (GateKind.X, 1),
    "y": (GateKind.Y, 1),
    "z": (GateKind.Z, 1),
    "h": (GateKind.H, 1),
    "s": (GateKind.S, 1),
    "sdg": (GateKind.SDG, 1),
    "t": (GateKind.T, 1),
    "tdg": (GateKind.TDG, 1),
    "p": (GateKind.P, 1),
    "rz": (GateKind.RZ, 1),
    "rx": (GateKind.RX, 1),
    "ry": (GateKind.RY, 1),
    "cx": (GateKind.X, 2),
    "cz": (GateKind.Z, 2),
    "cp": (GateKind.P, 2),
    "swap": (GateKind.SWAP, 2),
    "ccx": (GateKind.X, 3),
    "mcx": (GateKind.X, None),
    "mcz": (GateKind.Z, None),
}

_HEADER = re.compile(r"OPENQASM\s+2\.0$")
_INCLUDE = re.compile(r'include\s+"([^"]*)"$')
_QREG = re.compile(r"qreg\s+([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]$")
_GATE = re.compile(r"([A-Za-z_]\w*)\s*(?:\((.*)\))?\s+(.+)$", re.S)
_ARG = re.compile(r"\s*([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]\s*$")

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
}


def eval_angle(expr: str) -> float:
    """Evaluate an angle expression such as ``-3*pi/4``."""
    try:
        tree = ast.parse(expr.strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"malformed angle expression {expr!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        raise ValueError(f"unsupported term in angle expression {expr!r}")

    try:
        return ev(tree)
    except ZeroDivisionError as exc:
        raise ValueError(f"division by zero in {expr!r}") from exc


def _statements(text: str):
    """Yield ``(line, statement)`` pairs, comments removed."""
    lines = [ln.split("//", 1)[0] for ln in text.split("\n")]
    clean = "\n".join(lines)
    start = 0
    for m in re.finditer(";", clean):
        body = clean[start:m.start()]
        stripped = body.strip()
        if stripped:
            lead = len(body) - len(body.lstrip())
            yield clean.count("\n", 0, start + lead) + 1, stripped
        start = m.end()
    tail = clean[start:]
    if tail.strip():
        lead = len(tail) - len(tail.lstrip())
        raise QasmError(clean.count("\n", 0, start + lead) + 1, "statement not terminated by ';'")


def parse_qasm(text: str) -> Circuit:
    reg: str | None = None
    n = 0
    gates: list[Gate] = []
    for line, stmt in _statements(text):
        if _HEADER.match(stmt):
            continue
        m = _INCLUDE.match(stmt)
        if m:
            if m.group(1) != "qelib1.inc":
                raise QasmError(line, f"includes are not supported ({m.group(1)})")
            continue
        m = _QREG.match(stmt)
        if m:
            if reg is not None:
                raise QasmError(line, "only one qreg is supported")
            reg, n = m.group(1), int(m.group(2))
            if n < 1:
                raise QasmError(line, "qreg must have at least one qubit")
            continue
        m = _GATE.match(stmt)
        if not m:
            raise QasmError(line, f"cannot parse statement {stmt!r}")
        name, param, argtext = m.group(1), m.group(2), m.group(3)
        if name not in _GATES:
            raise QasmError(line, f"unknown gate {name!r}")
        if reg is None:
            raise QasmError(line, "gate used before qreg declaration")
        kind, arity = _GATES[name]
        qubits = []
        for a in argtext.split(","):
            am = _ARG.match(a)
            if not am:
                raise QasmError(line, f"bad qubit argument {a.strip()!r}")
            if am.group(1) != reg:
                raise QasmError(line, f"unknown register {am.group(1)!r}")
            q = int(am.group(2))
            if q >= n:
                raise QasmError(line, f"index {q} out of range for {reg}[{n}]")
            qubits.append(q)
        if arity is None:
            if len(qubits) < 2:
                raise QasmError(line, f"{name} needs at least two qubits")
        elif len(qubits) != arity:
            raise QasmError(line, f"{name} takes {arity} qubit(s), got {len(qubits)}")
        theta = None
        if kind.parameterized:
            if param is None:
                raise QasmError(line, f"{name} needs an angle")
            try:
                theta = eval_angle(param)
            except ValueError as exc:
                raise QasmError(line, str(exc)) from None
        elif param is not None:
            raise QasmError(line, f"{name} takes no angle")
        try:
            if kind is GateKind.SWAP:
                gates.append(Gate(kind, qubits[0], target2=qubits[1]))
            else:
                gates.append(Gate(kind, qubits[-1], frozenset(qubits[:-1]), theta))
        except CircuitError as exc:
            raise QasmError(line, str(exc)) from None
    if reg is None:
        raise QasmError(1, "no qreg declared")
    return Circuit(n, gates)


def _name(g: Gate) -> str:
    k, nc = g.kind, len(g.controls)
    if nc == 0:
        return k.value
    if k is GateKind.X:
        return {1: "cx", 2: "ccx"}.get(nc, "mcx")
    if k is GateKind.Z:
        return "cz" if nc == 1 else "mcz"
    if k is GateKind.P and nc == 1:
        return "cp"
    raise CircuitError(f"{nc}-controlled {k.value} has no spelling in the QASM subset")


def emit_qasm(circuit: Circuit, reg: str = "q") -> str:
    """Write ``circuit`` in the subset understood by :func:`parse_qasm`."""
    out = ["OPENQASM 2.0;", f"qreg {reg}[{circuit.n}];"]
    for g in circuit.gates:
        name = _name(g)
        if g.theta is not None:
            name += f"({g.theta!r})"
        if g.kind is GateKind.SWAP:
            qs = [g.target, g.target2]
        else:
            qs = sorted(g.controls) + [g.target]
        out.append(f"{name} " + ",".join(f"{reg}[{q}]" for q in qs) + ";")
    return "\n".join(out) + "\n"
