"""Multiplication, addition and Kronecker product of decision diagrams."""

from __future__ import annotations

from qfb.circuits.ir import Gate, GateKind
from qfb.ddcore import TERMINAL, ZERO_EDGE, BasePackage, Edge
from qfb.numerics import DEFAULT_EPS, ONE, ZERO

DEFAULT_CT_LOG2 = 16

# flat-tuple offsets (x_a, y_a, x_b, y_b) for the two products summed into
# each output block, blocks in [00, 01, 10, 11] order
_BLOCKS = ((0, 0, 2, 4), (0, 2, 2, 6), (4, 0, 6, 4), (4, 2, 6, 6))


class ComputeTable:
    """Fixed-size memo; a colliding insert overwrites the previous entry."""

    def __init__(self, log2_slots: int = DEFAULT_CT_LOG2):
        if not 1 <= log2_slots <= 28:
            raise ValueError(f"compute table size 2**{log2_slots} out of range")
        self.mask = (1 << log2_slots) - 1
        self.slots: list = [None] * (self.mask + 1)

    def __len__(self) -> int:
        return sum(s is not None for s in self.slots)

    def get(self, key):
        ent = self.slots[hash(key) & self.mask]
        if ent is not None and ent[0] == key:
            return ent[1]
        return None

    def put(self, key, value) -> None:
        self.slots[hash(key) & self.mask] = (key, value)

    def clear(self) -> None:
        self.slots = [None] * (self.mask + 1)


class Package(BasePackage):
    """Decision-diagram engine over ``n_qubits`` qubits."""

    def __init__(
        self,
        n_qubits: int,
        eps: float = DEFAULT_EPS,
        ct_log2: int = DEFAULT_CT_LOG2,
        **kwargs,
    ):
        self.mul_table = ComputeTable(ct_log2)
        self.add_table = ComputeTable(ct_log2)
        super().__init__(n_qubits, eps=eps, **kwargs)

    def _invalidate_caches(self) -> None:
        self.mul_table.clear()
        self.add_table.clear()

    # -- public operations ---------------------------------------------------

    def multiply(self, u: Edge, v: Edge) -> Edge:
        """Canonical diagram of the matrix product ``u @ v``."""
        un, uw = u
        vn, vw = v
        if not uw or not vw:
            return ZERO_EDGE
        if un.level != vn.level:
            raise ValueError(f"cannot multiply diagrams rooted at levels {un.level} and {vn.level}")
        rn, rw = self._mul(un, vn)
        if not rw:
            return ZERO_EDGE
        w = self.ctable.lookup(rw * uw * vw)
        return (rn, w) if w else ZERO_EDGE

    def add(self, u: Edge, v: Edge) -> Edge:
        """Canonical diagram of the entrywise sum ``u + v``."""
        if u[1] and v[1] and u[0].level != v[0].level:
            raise ValueError(f"cannot add diagrams rooted at levels {u[0].level} and {v[0].level}")
        rn, rw = self._add(u, v)
        w = self.ctable.lookup(rw) if rw else ZERO
        return (rn, w) if w else ZERO_EDGE

    def kron(self, a: Edge, b: Edge) -> Edge:
        """``a (x) b`` with ``b`` on the lower levels."""
        if not a[1] or not b[1]:
            return ZERO_EDGE
        shift = b[0].level + 1
        if a[0].level + shift >= self.n:
            raise ValueError("Kronecker product exceeds the package's qubit count")
        lookup = self.ctable.lookup
        memo: dict[int, Edge] = {}

        def rec(node) -> Edge:
            if node is TERMINAL:
                return b
            got = memo.get(node.uid)
            if got is not None:
                return got
            succ = []
            for cn, cw in node.edges:
                if not cw:
                    succ.append(ZERO_EDGE)
                    continue
                rn, rw = rec(cn)
                w = lookup(rw * cw)
                succ.append((rn, w) if w else ZERO_EDGE)
            res = self.make_node(node.level + shift, succ)
            memo[node.uid] = res
            return res

        rn, rw = rec(a[0])
        w = lookup(rw * a[1])
        return (rn, w) if w else ZERO_EDGE

    def gate_dd(self, gate: Gate, n: int | None = None) -> Edge:
        if gate.kind is not GateKind.SWAP:
            return super().gate_dd(gate, n)
        gate.check(self.n if n is None else n)
        # swap(a, b) = CX(a->b) CX(b->a) CX(a->b); extra controls go on the middle one
        a, b = gate.target, gate.target2
        outer = super().gate_dd(Gate(GateKind.X, b, frozenset({a})), n)
        inner = super().gate_dd(Gate(GateKind.X, a, gate.controls | {b}), n)
        return self.multiply(outer, self.multiply(inner, outer))

    # -- recursion -------------------------------------------------------------

    def _mul(self, xn, yn) -> Edge:
        # operands carry weight one; identities short-circuit at any level
        if xn.ident:
            return (yn, ONE)
        if yn.ident:
            return (xn, ONE)
        key = (xn.uid, yn.uid)
        table = self.mul_table
        slot = hash(key) & table.mask
        ent = table.slots[slot]
        if ent is not None and ent[0] == key:
            return ent[1]
        mul = self._mul
        add = self._add
        xe = xn.e
        ye = yn.e
        out = []
        # block (r, c) = x[r,0] y[0,c] + x[r,1] y[1,c]; intermediate weights
        # stay raw and are only canonicalized when a node is stored
        for i1, j1, i2, j2 in _BLOCKS:
            t1 = ZERO_EDGE
            aw = xe[i1 + 1]
            bw = ye[j1 + 1]
            if aw and bw:
                pn, pw = mul(xe[i1], ye[j1])
                if pw:
                    t1 = (pn, pw * aw * bw)
            aw = xe[i2 + 1]
            bw = ye[j2 + 1]
            if aw and bw:
                pn, pw = mul(xe[i2], ye[j2])
                if pw:
                    t2 = (pn, pw * aw * bw)
                    out.append(add(t1, t2) if t1[1] else t2)
                    continue
            out.append(t1)
        res = self._node(xn.level, out)
        table.slots[slot] = (key, res)
        return res

    def _add(self, x: Edge, y: Edge) -> Edge:
        xn, xw = x
        yn, yw = y
        if not xw:
            return y
        if not yw:
            return x
        if xn is yn:
            w = xw + yw
            # cancellation down to rounding noise is an exact zero
            if abs(w) <= self.ctable.eps * max(abs(xw), abs(yw)):
                return ZERO_EDGE
            return (xn, w)
        # cache on (x, y / xw) so scalar multiples share entries; the larger
        # weight goes first to keep the ratio bounded
        if abs(yw) > abs(xw):
            xn, xw, yn, yw = yn, yw, xn, xw
        ratio = self.ctable.lookup(yw / xw)
        key = (xn.uid, yn.uid, ratio)
        table = self.add_table
        slot = hash(key) & table.mask
        ent = table.slots[slot]
        if ent is not None and ent[0] == key:
            rn, rw = ent[1]
        else:
            add = self._add
            xe = xn.e
            ye = yn.e
            out = []
            for k in (0, 2, 4, 6):
                cyw = ye[k + 1]
                out.append(add((xe[k], xe[k + 1]), (ye[k], cyw * ratio) if cyw else ZERO_EDGE))
            rn, rw = self._node(xn.level, out)
            table.slots[slot] = (key, (rn, rw))
        if not rw:
            return ZERO_EDGE
        return (rn, rw * xw)
