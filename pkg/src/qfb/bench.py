"""Benchmark records, source resolution and timed sweeps."""

from __future__ import annotations

import csv
import json
import time
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from qfb.circuits import Circuit, RepeatedCircuit, generate_grover, generate_qft, parse_qasm
from qfb.ddops import DEFAULT_CT_LOG2, Package
from qfb.numerics import DEFAULT_EPS
from qfb.strategies import STRATEGIES, BuildTimeout, NodeLimitExceeded, build

DEFAULT_TIMEOUT = 60.0
SUITES = ("qft", "grover")
STATUSES = ("ok", "timeout", "memory-limit")


@dataclass
class BenchmarkRecord:
    benchmark: str
    n: int
    m: int
    strategy: str
    wall_time: float
    multiplications: int | None = None
    peak_nodes: int | None = None
    final_nodes: int | None = None
    unique_table_nodes_allocated: int | None = None
    status: str = "ok"

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == "ok":
            missing = [f.name for f in fields(self) if getattr(self, f.name) is None]
            if missing:
                raise ValueError(f"ok record is missing {', '.join(missing)}")

    def to_json(self) -> str:
        return json.dumps(asdict(self))


FIELDS = [f.name for f in fields(BenchmarkRecord)]
_INT_FIELDS = {"n", "m", "multiplications", "peak_nodes", "final_nodes", "unique_table_nodes_allocated"}


def _parse_field(name: str, text: str):
    if name in ("benchmark", "strategy", "status"):
        return text
    if text == "":
        return None
    return int(text) if name in _INT_FIELDS else float(text)


def write_csv(records, path_or_file) -> None:
    def emit(fh):
        w = csv.DictWriter(fh, fieldnames=FIELDS, lineterminator="\n")
        w.writeheader()
        for r in records:
            w.writerow({k: "" if v is None else v for k, v in asdict(r).items()})

    if hasattr(path_or_file, "write"):
        emit(path_or_file)
    else:
        with open(path_or_file, "w", newline="") as fh:
            emit(fh)


def read_csv(path) -> list[BenchmarkRecord]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [BenchmarkRecord(**{k: _parse_field(k, row[k]) for k in FIELDS}) for row in rows]


def write_json(records, path) -> None:
    Path(path).write_text(json.dumps([asdict(r) for r in records], indent=1) + "\n")


def read_json(path) -> list[BenchmarkRecord]:
    return [BenchmarkRecord(**obj) for obj in json.loads(Path(path).read_text())]


def save(records, path) -> None:
    """CSV unless the path ends in ``.json``."""
    if str(path).endswith(".json"):
        write_json(records, path)
    else:
        write_csv(records, path)


def resolve_source(source: str, with_swaps: bool = False, iterations: int | None = None,
                   marked: str | None = None) -> tuple[str, Circuit | RepeatedCircuit]:
    """``qft:<n>``, ``grover:<d>[:<marked>]`` or a QASM file path."""
    kind, _, rest = source.partition(":")
    if kind == "qft" and rest:
        return source, generate_qft(int(rest), with_final_swaps=with_swaps)
    if kind == "grover" and rest:
        d, _, bits = rest.partition(":")
        return source, generate_grover(int(d), marked=bits or marked, iterations=iterations)
    path = Path(source)
    return path.stem, parse_qasm(path.read_text())


def run_one(name: str, source, strategy: str, timeout: float | None = DEFAULT_TIMEOUT,
            eps: float = DEFAULT_EPS, ct_log2: int = DEFAULT_CT_LOG2,
            max_nodes: int | None = None) -> BenchmarkRecord:
    """One build on a fresh engine, folded into a record."""
    pkg = Package(source.n, eps=eps, ct_log2=ct_log2)
    start = time.perf_counter()
    deadline = None if timeout is None else start + timeout
    base = dict(benchmark=name, n=source.n, m=source.m, strategy=strategy)
    try:
        _, st = build(pkg, source, strategy, deadline=deadline, max_nodes=max_nodes)
    except BuildTimeout:
        return BenchmarkRecord(**base, wall_time=time.perf_counter() - start, status="timeout")
    except (NodeLimitExceeded, MemoryError):
        return BenchmarkRecord(**base, wall_time=time.perf_counter() - start, status="memory-limit")
    return BenchmarkRecord(
        **base,
        wall_time=st.wall_time,
        multiplications=st.multiplications,
        peak_nodes=st.peak_nodes,
        final_nodes=st.final_nodes,
        unique_table_nodes_allocated=pkg.allocated,
    )


def sweep(suite: str, lo: int, hi: int, strategies=None, timeout: float | None = DEFAULT_TIMEOUT,
          progress=None, **kw) -> list[BenchmarkRecord]:
    """Records for every size in ``[lo, hi]`` and strategy.

    Sizes are the generator argument: qubits for ``qft``, search qubits
    ``d`` for ``grover`` (the circuit then has ``d + 1`` qubits).  The
    plain strategies run Grover unrolled.
    """
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    if lo > hi:
        raise ValueError(f"empty size range [{lo}, {hi}]")
    if strategies is None:
        strategies = ("sequential", "pairwise") if suite == "qft" else STRATEGIES
    for s in strategies:
        if s not in STRATEGIES:
            raise ValueError(f"unknown strategy {s!r}")
        if s == "repeated" and suite == "qft":
            raise ValueError("the repeated strategy needs the grover suite")
    records = []
    for size in range(lo, hi + 1):
        source = generate_qft(size) if suite == "qft" else generate_grover(size)
        for s in strategies:
            rec = run_one(f"{suite}:{size}", source, s, timeout=timeout, **kw)
            records.append(rec)
            if progress is not None:
                progress(rec)
    return records


def format_table(records) -> str:
    cols = ["benchmark", "n", "m", "strategy", "status", "wall_time", "multiplications",
            "peak_nodes", "final_nodes", "unique_table_nodes_allocated"]
    heads = ["benchmark", "n", "m", "strategy", "status", "time[s]", "mults", "peak", "final", "allocated"]

    def cell(r, c):
        v = getattr(r, c)
        if v is None:
            return "-"
        return f"{v:.3f}" if c == "wall_time" else str(v)

    rows = [heads] + [[cell(r, c) for c in cols] for r in records]
    widths = [max(len(row[i]) for row in rows) for i in range(len(cols))]
    lines = ["  ".join(v.rjust(w) if i else v.ljust(w) for i, (v, w) in enumerate(zip(row, widths)))
             for row in rows]
    return "\n".join(lines)
