"""A small DAG of stochastic and deterministic nodes, sampled ancestrally.

Stochastic nodes carry a fixed :class:`Distribution`; deterministic nodes apply a
registered operation to their parents' values.  Sampling is vectorised over draws:
each node is filled for all ``n`` draws at once, in topological order.
"""
from __future__ import annotations

import hashlib
import heapq
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from . import kernels

MAX_REJECTIONS = 10_000


class NetworkError(Exception):
    """Base class for graph construction and evaluation errors."""


class CycleDetected(NetworkError):
    def __init__(self, cycle: Sequence[str]):
        self.cycle = list(cycle)
        super().__init__("cycle detected: " + " -> ".join(self.cycle))


class DanglingParent(NetworkError):
    def __init__(self, node: str, parent: str):
        self.node = node
        self.parent = parent
        super().__init__(f"node {node!r} references missing parent {parent!r}")


class NumericError(NetworkError):
    def __init__(self, node: str, draw: int | None, message: str = "non-finite value"):
        self.node = node
        self.draw = draw
        where = f" at draw {draw}" if draw is not None else ""
        super().__init__(f"{message} in node {node!r}{where}")


# -- distributions -----------------------------------------------------------

def _phi(z: float) -> float:
    return math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)


def _Phi(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


@dataclass(frozen=True)
class Point:
    value: float

    def mean(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class Uniform:
    low: float
    high: float

    def __post_init__(self):
        if not self.low < self.high:
            raise ValueError(f"Uniform requires low < high, got ({self.low}, {self.high})")

    def mean(self) -> float:
        return 0.5 * (self.low + self.high)


@dataclass(frozen=True)
class Normal:
    mean_: float
    sd: float

    def __post_init__(self):
        if not self.sd >= 0:
            raise ValueError(f"Normal requires sd >= 0, got {self.sd}")

    def mean(self) -> float:
        return float(self.mean_)


@dataclass(frozen=True)
class TruncatedNormal:
    mean_: float
    sd: float
    low: float = -math.inf
    high: float = math.inf

    def __post_init__(self):
        if not self.sd >= 0:
            raise ValueError(f"TruncatedNormal requires sd >= 0, got {self.sd}")
        if not self.low < self.high:
            raise ValueError(f"TruncatedNormal requires low < high, got ({self.low}, {self.high})")
        if self.sd == 0:
            if not self.low <= self.mean_ <= self.high:
                raise ValueError("TruncatedNormal with sd 0 has its mass outside [low, high]")
        elif self.mass() <= 0.0:
            raise ValueError("TruncatedNormal interval has no probability mass")

    def _std_bounds(self) -> tuple[float, float]:
        return (self.low - self.mean_) / self.sd, (self.high - self.mean_) / self.sd

    def mass(self) -> float:
        if self.sd == 0:
            return 1.0
        a, b = self._std_bounds()
        return _Phi(b) - _Phi(a)

    def mean(self) -> float:
        if self.sd == 0:
            return float(self.mean_)
        a, b = self._std_bounds()
        pa = 0.0 if math.isinf(a) else _phi(a)
        pb = 0.0 if math.isinf(b) else _phi(b)
        return self.mean_ + self.sd * (pa - pb) / self.mass()


Distribution = Union[Point, Uniform, Normal, TruncatedNormal]


def nominal_mean(dist: Distribution) -> float:
    """Location parameter of ``dist`` (the untruncated mean for TruncatedNormal)."""
    if isinstance(dist, (Normal, TruncatedNormal)):
        return float(dist.mean_)
    return dist.mean()


# -- deterministic operations ---------------------------------------------------

@dataclass(frozen=True)
class Operation:
    name: str
    arity: int | None  # None: any number of parents
    func: Callable[..., np.ndarray]


OPERATIONS: dict[str, Operation] = {}


def register_op(name: str, arity: int | None):
    """Register ``func(*parent_values, **consts)`` as a named deterministic op."""
    def decorator(func):
        if name in OPERATIONS:
            raise ValueError(f"operation {name!r} already registered")
        OPERATIONS[name] = Operation(name, arity, func)
        return func
    return decorator


@register_op("sum", None)
def _op_sum(*values):
    total = values[0] * 1.0
    for v in values[1:]:
        total = total + v
    return total


@register_op("affine", None)
def _op_affine(*values, weights=(), offset=0.0):
    if len(weights) != len(values):
        raise ValueError("affine needs one weight per parent")
    total = offset
    for w, v in zip(weights, values):
        total = total + w * v
    return total


@register_op("constant", 0)
def _op_constant(value=0.0):
    return value


@register_op("scale", 1)
def _op_scale(x, factor=1.0):
    return factor * x


@register_op("product", None)
def _op_product(*values):
    total = values[0] * 1.0
    for v in values[1:]:
        total = total * v
    return total


@register_op("quotient", 2)
def _op_quotient(num, den):
    return num / den


# -- graph ----------------------------------------------------------------------

@dataclass(frozen=True)
class Stochastic:
    dist: Distribution


@dataclass(frozen=True)
class Deterministic:
    op: str
    consts: tuple[tuple[str, object], ...] = ()

    @classmethod
    def of(cls, op: str, **consts) -> "Deterministic":
        return cls(op, tuple(sorted(consts.items())))


@dataclass(frozen=True)
class Node:
    id: str
    kind: Union[Stochastic, Deterministic]
    parents: tuple[str, ...] = ()

    def __post_init__(self):
        if isinstance(self.kind, Stochastic) and self.parents:
            raise ValueError(f"stochastic node {self.id!r} cannot have parents")
        if isinstance(self.kind, Deterministic):
            if self.kind.op not in OPERATIONS:
                raise ValueError(f"node {self.id!r}: unknown operation {self.kind.op!r}")
            arity = OPERATIONS[self.kind.op].arity
            if arity is not None and arity != len(self.parents):
                raise ValueError(f"node {self.id!r}: {self.kind.op} takes {arity} parents, "
                                 f"got {len(self.parents)}")


class Network:
    """Id-keyed collection of nodes; edges come from each node's parent list."""

    def __init__(self, nodes: Sequence[Node] = ()):
        self.nodes: dict[str, Node] = {}
        for node in nodes:
            self.add(node)

    def add(self, node: Node) -> Node:
        if node.id in self.nodes:
            raise ValueError(f"duplicate node id {node.id!r}")
        self.nodes[node.id] = node
        return node

    def stochastic(self, node_id: str, dist: Distribution) -> Node:
        return self.add(Node(node_id, Stochastic(dist)))

    def deterministic(self, node_id: str, op: str, parents: Sequence[str], **consts) -> Node:
        return self.add(Node(node_id, Deterministic.of(op, **consts), tuple(parents)))

    def __contains__(self, node_id: str) -> bool:
        return node_id in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)


def validate(network: Network) -> list[str]:
    """Topological order of ``network``, ties broken by lexicographic node id."""
    nodes = network.nodes
    for node in nodes.values():
        for parent in node.parents:
            if parent not in nodes:
                raise DanglingParent(node.id, parent)
    indegree = {nid: len(set(n.parents)) for nid, n in nodes.items()}
    children: dict[str, list[str]] = {nid: [] for nid in nodes}
    for node in nodes.values():
        for parent in set(node.parents):
            children[parent].append(node.id)
    ready = [nid for nid, d in indegree.items() if d == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        nid = heapq.heappop(ready)
        order.append(nid)
        for child in children[nid]:
            indegree[child] -= 1
            if indegree[child] == 0:
                heapq.heappush(ready, child)
    if len(order) < len(nodes):
        raise CycleDetected(_find_cycle(network, set(nodes) - set(order)))
    return order


def _find_cycle(network: Network, remaining: set[str]) -> list[str]:
    # every remaining node has a remaining parent, so walking parents must loop
    start = min(remaining)
    path, seen = [start], {start: 0}
    current = start
    while True:
        current = min(p for p in network.nodes[current].parents if p in remaining)
        if current in seen:
            cycle = path[seen[current]:]
            cycle.reverse()
            return cycle + [cycle[0]]
        seen[current] = len(path)
        path.append(current)


# -- sampling -------------------------------------------------------------------

def node_key(seed: int, node_id: str) -> int:
    """64-bit stream key for ``node_id`` under ``seed``."""
    digest = hashlib.blake2b(node_id.encode("utf-8"), digest_size=8).digest()
    h = int.from_bytes(digest, "little")
    return (h ^ ((seed * 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF)) & 0xFFFFFFFFFFFFFFFF


def _chunks(n: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, min(workers, n))
    bounds = np.linspace(0, n, workers + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def _fill_stochastic(node_id, dist, key, out, backend, pool, chunks):
    def run(chunk):
        a, b = chunk
        view = out[a:b]
        if isinstance(dist, Point):
            view[:] = dist.value
        elif isinstance(dist, Uniform):
            backend.uniform_fill(key, a, dist.low, dist.high, view)
        elif isinstance(dist, Normal):
            backend.normal_fill(key, a, dist.mean_, dist.sd, view)
        elif isinstance(dist, TruncatedNormal):
            failed = backend.truncnorm_fill(key, a, dist.mean_, dist.sd, dist.low, dist.high,
                                            MAX_REJECTIONS, view)
            if failed >= 0:
                return failed
        else:
            raise TypeError(f"unsupported distribution {dist!r}")
        return -1

    results = list(pool.map(run, chunks)) if pool is not None else [run(c) for c in chunks]
    failures = [r for r in results if r >= 0]
    if failures:
        raise NumericError(node_id, min(failures),
                           f"{MAX_REJECTIONS} consecutive truncation rejections")


def _apply(node: Node, values: Mapping[str, np.ndarray]):
    op = OPERATIONS[node.kind.op]
    # non-finite results are reported by the caller as NumericError
    with np.errstate(all="ignore"):
        return op.func(*(values[p] for p in node.parents), **dict(node.kind.consts))


@dataclass(frozen=True)
class SampleSet:
    values: Mapping[str, np.ndarray]
    n: int
    seed: int
    order: tuple[str, ...] = field(default=())

    def __getitem__(self, node_id: str) -> np.ndarray:
        return self.values[node_id]

    def columns(self) -> tuple[str, ...]:
        return self.order or tuple(self.values)


def sample(network: Network, n: int, seed: int, *, workers: int = 1,
           backend: str | None = None) -> SampleSet:
    """Draw ``n`` joint samples; the result depends only on (network, n, seed)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    order = validate(network)
    kern = kernels.get_backend(backend)
    chunks = _chunks(n, workers)
    values: dict[str, np.ndarray] = {}
    pool = ThreadPoolExecutor(max_workers=len(chunks)) if len(chunks) > 1 else None
    try:
        for nid in order:
            node = network.nodes[nid]
            if isinstance(node.kind, Stochastic):
                out = np.empty(n, dtype=np.float64)
                _fill_stochastic(nid, node.kind.dist, node_key(seed, nid), out, kern, pool, chunks)
            else:
                out = np.asarray(_apply(node, values), dtype=np.float64)
                out = np.broadcast_to(out, (n,)).copy() if out.shape != (n,) else out
                bad = ~np.isfinite(out)
                if bad.any():
                    raise NumericError(nid, int(np.flatnonzero(bad)[0]))
            out.flags.writeable = False
            values[nid] = out
    finally:
        if pool is not None:
            pool.shutdown()
    return SampleSet(values, n, seed, tuple(order))


def evaluate_at_means(network: Network) -> dict[str, float]:
    """Replace each stochastic node by its mean and evaluate the graph once."""
    order = validate(network)
    values: dict[str, float] = {}
    for nid in order:
        node = network.nodes[nid]
        if isinstance(node.kind, Stochastic):
            values[nid] = np.float64(node.kind.dist.mean())
        else:
            v = np.float64(_apply(node, values))
            if not math.isfinite(v):
                raise NumericError(nid, None)
            values[nid] = v
    return {k: float(v) for k, v in values.items()}


# -- summaries ------------------------------------------------------------------

@dataclass(frozen=True)
class NodeSummary:
    mean: float
    sd: float
    p5: float
    p50: float
    p95: float
    min: float
    max: float

    def as_dict(self) -> dict[str, float]:
        return {"mean": self.mean, "sd": self.sd, "p5": self.p5, "p50": self.p50,
                "p95": self.p95, "min": self.min, "max": self.max}


def nearest_rank(sorted_values: np.ndarray, pct: float) -> float:
    n = sorted_values.shape[0]
    rank = max(1, math.ceil(pct / 100.0 * n))
    return float(sorted_values[rank - 1])


def summarize_values(values: np.ndarray) -> NodeSummary:
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ValueError("cannot summarize an empty sample")
    s = np.sort(values)
    return NodeSummary(
        mean=float(values.mean()),
        sd=float(values.std(ddof=1)) if values.size > 1 else 0.0,
        p5=nearest_rank(s, 5), p50=nearest_rank(s, 50), p95=nearest_rank(s, 95),
        min=float(s[0]), max=float(s[-1]),
    )


def summarize(samples: SampleSet) -> dict[str, NodeSummary]:
    return {nid: summarize_values(samples[nid]) for nid in samples.columns()}
