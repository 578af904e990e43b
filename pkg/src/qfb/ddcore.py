"""Canonical edge-weighted decision diagrams for 2^n x 2^n matrices.

A matrix is split on its most significant qubit into four blocks
``[top-left, top-right, bottom-left, bottom-right]``; each block is an edge
``(node, weight)`` into the next lower level.  Qubit ``q_{n-1}`` sits at the
root, ``q_0`` at the bottom, so ``q_0`` is the least significant index bit.

Edges are plain ``(node, weight)`` tuples.  Weights are canonical handles
from :class:`~qfb.numerics.ComplexTable`.  Levels are never skipped: every
non-zero successor of a level ``l`` node lives at level ``l - 1`` (or is the
terminal for ``l = 0``).

Nodes are normalized by dividing all four successor weights by the one of
largest magnitude (the earliest one on a near-tie) and pushing that factor
onto the incoming edge.  Every stored weight therefore has modulus at most
one, which keeps the division well conditioned: dividing by a small leading
weight would blow rounding noise up past the table tolerance and split
nodes that should be shared.
"""

from __future__ import annotations

import logging

import numpy as np

from qfb.circuits.ir import Gate, GateKind
from qfb.numerics import DEFAULT_EPS, ONE, ZERO, ComplexTable

logger = logging.getLogger(__name__)

DENSE_LIMIT = 12
# relative margin a later weight must clear to replace the normalizer
_TIE = 1 + 1e-6
DEFAULT_GC_THRESHOLD = 1 << 20


class Node:
    """Decision-diagram node.

    ``e`` is the flat tuple ``(n0, w0, n1, w1, n2, w2, n3, w3)`` of successor
    nodes and weights; the same tuple object keys the unique table.
    """

    __slots__ = ("level", "e", "kids", "ref", "ident", "uid")

    def __init__(self, level: int, e: tuple, uid: int, ident: bool = False):
        self.level = level
        self.e = e
        # distinct non-terminal successors, for traversals
        self.kids = tuple({c for c in e[::2] if c.level >= 0})
        self.ref = 0
        self.ident = ident
        self.uid = uid

    @property
    def edges(self) -> list[tuple]:
        e = self.e
        return [(e[0], e[1]), (e[2], e[3]), (e[4], e[5]), (e[6], e[7])]

    def __repr__(self) -> str:
        if self.level < 0:
            return "Node(terminal)"
        return f"Node(uid={self.uid}, level={self.level}, ref={self.ref})"


TERMINAL = Node(-1, (), uid=0, ident=True)
TERMINAL.ref = 1  # never collected

Edge = tuple  # (Node, complex)

ZERO_EDGE: Edge = (TERMINAL, ZERO)
ONE_EDGE: Edge = (TERMINAL, ONE)


class RefCountError(RuntimeError):
    """Raised when a reference count would drop below zero."""


class BasePackage:
    """Unique table, weight table, reference counts and gate builders.

    Arithmetic (multiply, add, kron) is layered on top in
    :class:`qfb.ddops.Package`; use that class as the engine.
    """

    def __init__(
        self,
        n_qubits: int,
        eps: float = DEFAULT_EPS,
        gc_threshold: int = DEFAULT_GC_THRESHOLD,
        relative_tolerance: bool = True,
    ):
        if n_qubits < 1:
            raise ValueError("a package needs at least one qubit")
        self.n = n_qubits
        self.ctable = ComplexTable(eps, relative=relative_tolerance)
        self.unique: list[dict[tuple, Node]] = [{} for _ in range(n_qubits)]
        self.gc_threshold = gc_threshold
        self.allocated = 0
        self.collections = 0
        self._next_uid = 1
        self._ident: list[Edge] = [ONE_EDGE]
        for level in range(n_qubits):
            below = self._ident[-1]
            e = self.make_node(level, (below, ZERO_EDGE, ZERO_EDGE, below))
            self.inc_ref(e)
            self._ident.append(e)

    # -- unique table -----------------------------------------------------

    def make_node(self, level: int, succ) -> Edge:
        """Return the canonical edge for a node with successors ``succ``."""
        if not 0 <= level < self.n:
            raise ValueError(f"level {level} outside [0, {self.n})")
        node, w = self._node(level, succ)
        w = self.ctable.lookup(w) if w else ZERO
        return (node, w) if w else ZERO_EDGE

    def _node(self, level: int, succ) -> Edge:
        # successor weights may be raw floats; the stored ones are canonical
        # but the returned normalizer is not, so callers can keep computing
        # with full precision
        (n0, w0), (n1, w1), (n2, w2), (n3, w3) = succ
        # largest magnitude wins; near-ties go to the earliest successor
        top = w0
        big = abs(w0) * _TIE
        for w in (w1, w2, w3):
            m = abs(w)
            if m > big:
                top = w
                big = m * _TIE
        if not top:
            return ZERO_EDGE
        exact = self.ctable._exact
        lookup = self.ctable.lookup
        if w0:
            v = w0 / top
            w0 = exact.get(v) or lookup(v)
        if w1:
            v = w1 / top
            w1 = exact.get(v) or lookup(v)
        if w2:
            v = w2 / top
            w2 = exact.get(v) or lookup(v)
        if w3:
            v = w3 / top
            w3 = exact.get(v) or lookup(v)
        # weights that normalized to ZERO must point at the terminal
        if not w0:
            n0 = TERMINAL
        if not w1:
            n1 = TERMINAL
        if not w2:
            n2 = TERMINAL
        if not w3:
            n3 = TERMINAL
        key = (n0, w0, n1, w1, n2, w2, n3, w3)
        table = self.unique[level]
        node = table.get(key)
        if node is None:
            ident = n0 is n3 and n0.ident and w0 == ONE and w3 == ONE and not w1 and not w2
            node = Node(level, key, self._next_uid, ident)
            self._next_uid += 1
            table[key] = node
            self.allocated += 1
        return (node, top)

    def unique_size(self) -> int:
        return sum(len(t) for t in self.unique)

    # -- reference counting and garbage collection ------------------------

    def inc_ref(self, e: Edge) -> None:
        node = e[0]
        if node is TERMINAL:
            return
        node.ref += 1
        if node.ref > 1:
            return
        stack = list(node.kids)
        while stack:
            node = stack.pop()
            node.ref += 1
            if node.ref == 1:
                stack.extend(node.kids)

    def dec_ref(self, e: Edge) -> None:
        node = e[0]
        if node is TERMINAL:
            return
        if node.ref <= 0:
            raise RefCountError(f"reference count underflow on {node!r}")
        node.ref -= 1
        if node.ref > 0:
            return
        stack = list(node.kids)
        while stack:
            node = stack.pop()
            if node.ref <= 0:
                raise RefCountError(f"reference count underflow on {node!r}")
            node.ref -= 1
            if node.ref == 0:
                stack.extend(node.kids)

    def garbage_collect(self) -> int:
        """Drop every unreferenced node; returns how many were reclaimed."""
        reclaimed = 0
        for level, table in enumerate(self.unique):
            dead = [k for k, node in table.items() if node.ref == 0]
            for k in dead:
                del table[k]
            reclaimed += len(dead)
        if reclaimed:
            self._invalidate_caches()
        self.collections += 1
        logger.debug("gc reclaimed %d nodes, %d live", reclaimed, self.unique_size())
        return reclaimed

    def maybe_collect(self) -> int:
        if self.unique_size() > self.gc_threshold:
            return self.garbage_collect()
        return 0

    def _invalidate_caches(self) -> None:
        pass

    # -- construction of basic diagrams -----------------------------------

    def identity(self, n: int | None = None) -> Edge:
        """Identity on the lowest ``n`` qubits (all qubits by default)."""
        if n is None:
            n = self.n
        if not 1 <= n <= self.n:
            raise ValueError(f"identity size {n} outside [1, {self.n}]")
        return self._ident[n]

    def gate_dd(self, gate: Gate, n: int | None = None) -> Edge:
        """Diagram of ``gate`` on the lowest ``n`` qubits (default: all)."""
        n = self.n if n is None else n
        if not 1 <= n <= self.n:
            raise ValueError(f"gate width {n} outside [1, {self.n}]")
        gate.check(n)
        if gate.kind is GateKind.SWAP:
            raise NotImplementedError("SWAP is assembled from CX gates by ddops.Package")
        return self._controlled_single(gate.matrix(), gate.target, gate.controls, n)

    def _controlled_single(self, u, target: int, controls, n: int) -> Edge:
        lookup = self.ctable.lookup
        ident = self._ident
        # blocks[r][c]: target block (r, c) restricted to the qubits below
        em = [
            (TERMINAL, lookup(u[0][0])),
            (TERMINAL, lookup(u[0][1])),
            (TERMINAL, lookup(u[1][0])),
            (TERMINAL, lookup(u[1][1])),
        ]
        em = [ZERO_EDGE if not w else (nd, w) for nd, w in em]
        for z in range(target):
            below = ident[z]
            nxt = []
            for i, e in enumerate(em):
                if z in controls:
                    # control at |0>: identity on the diagonal blocks, zero off it
                    passive = below if i in (0, 3) else ZERO_EDGE
                    nxt.append(self.make_node(z, (passive, ZERO_EDGE, ZERO_EDGE, e)))
                else:
                    nxt.append(self.make_node(z, (e, ZERO_EDGE, ZERO_EDGE, e)))
            em = nxt
        e = self.make_node(target, tuple(em))
        for z in range(target + 1, n):
            if z in controls:
                e = self.make_node(z, (ident[z], ZERO_EDGE, ZERO_EDGE, e))
            else:
                e = self.make_node(z, (e, ZERO_EDGE, ZERO_EDGE, e))
        return e

    # -- inspection ---------------------------------------------------------

    def to_matrix(self, e: Edge, n: int | None = None) -> np.ndarray:
        """Dense matrix of ``e``; row/column bit ``q`` is qubit ``q``."""
        if n is None:
            n = self.n
        if n > DENSE_LIMIT:
            raise ValueError(f"dense extraction limited to n <= {DENSE_LIMIT}, got {n}")
        node, w = e
        if not w:
            return np.zeros((1 << n, 1 << n), dtype=complex)
        if node.level != n - 1:
            raise ValueError(f"edge is rooted at level {node.level}, expected {n - 1}")
        memo: dict[int, np.ndarray] = {}

        def block(nd: Node) -> np.ndarray:
            if nd is TERMINAL:
                return np.ones((1, 1), dtype=complex)
            got = memo.get(nd.uid)
            if got is not None:
                return got
            half = 1 << nd.level
            out = np.zeros((2 * half, 2 * half), dtype=complex)
            for i, (c, cw) in enumerate(nd.edges):
                if not cw:
                    continue
                r, col = divmod(i, 2)
                out[r * half:(r + 1) * half, col * half:(col + 1) * half] = cw * block(c)
            memo[nd.uid] = out
            return out

        return w * block(node)

    def nodes(self, e: Edge) -> list[Node]:
        """Distinct non-terminal nodes reachable from ``e`` (top-down order)."""
        seen: set[int] = set()
        out: list[Node] = []
        stack = [e[0]]
        while stack:
            nd = stack.pop()
            if nd is TERMINAL or nd.uid in seen:
                continue
            seen.add(nd.uid)
            out.append(nd)
            stack.extend(nd.kids)
        return out

    def node_count(self, e: Edge) -> int:
        """Number of distinct non-terminal nodes below ``e``."""
        root = e[0]
        if root is TERMINAL:
            return 0
        # levels are never skipped, so a level-by-level sweep visits each node once
        count = 0
        frontier = {root}
        while frontier:
            count += len(frontier)
            nxt: set[Node] = set()
            for nd in frontier:
                nxt.update(nd.kids)
            frontier = nxt
        return count

    def dump(self, e: Edge) -> list[dict]:
        """JSON-friendly listing of the nodes below ``e``."""

        def ref(c: Node) -> int:
            return 0 if c is TERMINAL else c.uid

        rows = []
        for nd in sorted(self.nodes(e), key=lambda x: (-x.level, x.uid)):
            rows.append(
                {
                    "id": nd.uid,
                    "level": nd.level,
                    "succ": [[ref(c), [w.real, w.imag]] for c, w in nd.edges],
                }
            )
        return rows

