"""Three ways of multiplying a circuit's gate diagrams into one diagram.

* sequential: ``U <- U_i * U`` for each gate in order (the classic scheme);
* pairwise: multiply neighbouring gates, then neighbouring pairs, and so on,
  evaluated depth first so only O(log m) partial products are alive;
* repeated: build the initialization and one iteration pairwise, then raise
  the iteration to the N-th power by square-and-multiply.

Every builder returns ``(edge, stats)``.  The returned edge carries one
reference that the caller owns.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from qfb.circuits.ir import Circuit, RepeatedCircuit
from qfb.ddcore import Edge
from qfb.ddops import Package

STRATEGIES = ("sequential", "pairwise", "repeated")


class BuildTimeout(RuntimeError):
    pass


class NodeLimitExceeded(RuntimeError):
    pass


@dataclass
class BuildStats:
    strategy: str
    multiplications: int = 0
    peak_nodes: int = 0
    final_nodes: int = 0
    wall_time: float = 0.0
    # (hierarchy level or step, node count) for every strategy-level product
    trace: list[tuple[int, int]] = field(default_factory=list)
    max_live: int = 0
    # products performed inside the pairwise sub-builds of the repeated scheme
    inner_multiplications: int = 0

    def level_sizes(self) -> list[list[int]]:
        """Node counts of the products grouped by level, in evaluation order."""
        levels: dict[int, list[int]] = {}
        for lvl, size in self.trace:
            levels.setdefault(lvl, []).append(size)
        return [levels[k] for k in sorted(levels)]


class _Builder:
    """Shared bookkeeping: references, live counter, deadline, sizes."""

    def __init__(self, pkg: Package, stats: BuildStats, deadline: float | None,
                 max_nodes: int | None, track_sizes: bool):
        self.pkg = pkg
        self.stats = stats
        self.deadline = deadline
        self.max_nodes = max_nodes
        self.track = track_sizes
        self.live = 0
        self.overhead = 0.0

    def _check(self) -> None:
        if self.deadline is not None and time.perf_counter() > self.deadline:
            raise BuildTimeout("construction exceeded its time budget")
        pkg = self.pkg
        pkg.maybe_collect()
        if self.max_nodes is not None and pkg.unique_size() > self.max_nodes:
            pkg.garbage_collect()
            if pkg.unique_size() > self.max_nodes:
                raise NodeLimitExceeded(f"more than {self.max_nodes} live nodes")

    def _measure(self, e: Edge) -> int:
        if not self.track:
            return 0
        t0 = time.perf_counter()
        size = self.pkg.node_count(e)
        self.overhead += time.perf_counter() - t0
        if size > self.stats.peak_nodes:
            self.stats.peak_nodes = size
        return size

    def push(self, e: Edge, referenced: bool = False) -> Edge:
        if not referenced:
            self.pkg.inc_ref(e)
        self.live += 1
        if self.live > self.stats.max_live:
            self.stats.max_live = self.live
        return e

    def release(self, e: Edge) -> None:
        self.pkg.dec_ref(e)
        self.live -= 1

    def leaf(self, gate) -> Edge:
        self._check()
        e = self.push(self.pkg.gate_dd(gate))
        self._measure(e)
        return e

    def mul(self, u: Edge, v: Edge, level: int, release=None) -> Edge:
        """``u * v``; the operands in ``release`` (default both) are dropped."""
        self._check()
        r = self.pkg.multiply(u, v)
        # reference the product before dropping the operands so shared nodes
        # are not walked down to zero and back up
        self.pkg.inc_ref(r)
        for e in (u, v) if release is None else release:
            self.release(e)
        self.push(r, referenced=True)
        self.stats.multiplications += 1
        self.stats.trace.append((level, self._measure(r)))
        return r


def _run(strategy: str, pkg: Package, body, deadline: float | None,
         max_nodes: int | None, track_sizes: bool) -> tuple[Edge, BuildStats]:
    stats = BuildStats(strategy)
    b = _Builder(pkg, stats, deadline, max_nodes, track_sizes)
    t0 = time.perf_counter()
    e = body(b)
    stats.wall_time = time.perf_counter() - t0 - b.overhead
    stats.final_nodes = pkg.node_count(e)
    stats.peak_nodes = max(stats.peak_nodes, stats.final_nodes)
    return e, stats


def build_sequential(pkg: Package, circuit: Circuit, deadline: float | None = None,
                     max_nodes: int | None = None, track_sizes: bool = True) -> tuple[Edge, BuildStats]:
    """Accumulate ``U <- gate_dd(g_i) * U`` from the first gate on."""
    if not circuit.gates:
        raise ValueError("cannot build an empty circuit")

    def body(b: _Builder) -> Edge:
        acc = b.leaf(circuit.gates[0])
        for i, g in enumerate(circuit.gates[1:], start=1):
            acc = b.mul(b.leaf(g), acc, i)
        return acc

    return _run("sequential", pkg, body, deadline, max_nodes, track_sizes)


def _pairwise(b: _Builder, gates, lo: int, hi: int) -> Edge:
    size = hi - lo
    if size == 1:
        return b.leaf(gates[lo])
    # left block is the largest power of two below size, which reproduces
    # the level-by-level pairing of neighbours with degenerate tails
    half = 1 << ((size - 1).bit_length() - 1)
    left = _pairwise(b, gates, lo, lo + half)
    right = _pairwise(b, gates, lo + half, hi)
    return b.mul(right, left, (size - 1).bit_length())


def build_pairwise(pkg: Package, circuit: Circuit, deadline: float | None = None,
                   max_nodes: int | None = None, track_sizes: bool = True) -> tuple[Edge, BuildStats]:
    """Recursive pairwise grouping of the gate sequence."""
    if not circuit.gates:
        raise ValueError("cannot build an empty circuit")
    return _run(
        "pairwise", pkg,
        lambda b: _pairwise(b, circuit.gates, 0, len(circuit.gates)),
        deadline, max_nodes, track_sizes,
    )


def build_repeated(pkg: Package, rc: RepeatedCircuit, deadline: float | None = None,
                   max_nodes: int | None = None, track_sizes: bool = True) -> tuple[Edge, BuildStats]:
    """``U_iter ** N * U_init`` with square-and-multiply, high bit first.

    ``stats.multiplications`` counts only the products of building blocks;
    the products inside the two pairwise sub-builds are reported in
    ``stats.inner_multiplications``.
    """
    n_rep = rc.repetitions
    if n_rep < 1:
        raise ValueError("repetition count must be >= 1")

    def body(b: _Builder) -> Edge:
        stats = b.stats
        parts = []
        for c in (rc.init, rc.iteration):
            before = stats.multiplications
            parts.append(_pairwise(b, c.gates, 0, len(c.gates)) if c.gates else b.push(b.pkg.identity()))
            stats.inner_multiplications += stats.multiplications - before
            stats.multiplications = before
        del stats.trace[:]
        init, it = parts
        acc = b.push(it)  # second reference: `it` stays alive for the odd bits
        for level, bit in enumerate(bin(n_rep)[3:], start=1):
            acc = b.mul(acc, acc, level, release=(acc,))
            if bit == "1":
                acc = b.mul(acc, it, level, release=(acc,))
        b.release(it)
        return b.mul(acc, init, n_rep.bit_length())

    return _run("repeated", pkg, body, deadline, max_nodes, track_sizes)


def build(pkg: Package, source: Circuit | RepeatedCircuit, strategy: str, **kw) -> tuple[Edge, BuildStats]:
    """Dispatch on ``strategy``; repeated circuits are unrolled for the
    sequential and pairwise schemes, plain circuits cannot use ``repeated``."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {', '.join(STRATEGIES)}")
    if strategy == "repeated":
        if not isinstance(source, RepeatedCircuit):
            raise ValueError("the repeated strategy needs an init/iteration circuit")
        return build_repeated(pkg, source, **kw)
    circuit = source.unrolled() if isinstance(source, RepeatedCircuit) else source
    fn = build_sequential if strategy == "sequential" else build_pairwise
    return fn(pkg, circuit, **kw)
