# Copyright 2026 The nudcode Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Per-sink edge-disjoint path decompositions.

Each sink's paths come from a unit-capacity Edmonds-Karp max flow whose
breadth-first search scans edges in file order, so the decomposition is a
pure function of the network file.
"""

import collections
import dataclasses
from typing import Deque, Dict, Iterable, List, Optional, Sequence, Set, Tuple

from nudcode import log
from nudcode.errors import PathOverrideError, ValidationError
from nudcode.netgraph import Edge, NetworkInstance, TextOrBytes, tokenized_lines

logger = log.get_logger(__name__)

PathId = Tuple[int, int]


@dataclasses.dataclass(frozen=True)
class Path:
    sink: int
    slot: int
    edges: Tuple[Edge, ...]

    @property
    def id(self) -> PathId:
        return (self.sink, self.slot)

    @property
    def label(self) -> str:
        return f"{self.sink}.{self.slot}"

    @property
    def nodes(self) -> List[str]:
        return [self.edges[0].tail] + [edge.head for edge in self.edges]

    def __str__(self) -> str:
        return f"p{self.label}"


@dataclasses.dataclass(frozen=True)
class PathDecomposition:
    sink_ids: Tuple[str, ...]
    per_sink: Tuple[Tuple[Path, ...], ...]

    @property
    def rates(self) -> Tuple[int, ...]:
        return tuple(len(paths) for paths in self.per_sink)

    @property
    def n(self) -> int:
        return max(self.rates)

    @property
    def sink_count(self) -> int:
        return len(self.per_sink)

    def n_j(self, j: int) -> int:
        return len(self.sink_paths(j))

    def sink_paths(self, j: int) -> Tuple[Path, ...]:
        if not 1 <= j <= len(self.per_sink):
            raise IndexError(f"sink index {j} out of range 1..{len(self.per_sink)}")
        return self.per_sink[j - 1]

    def paths(self) -> List[Path]:
        """All paths, ordered by sink then slot."""
        return [path for paths in self.per_sink for path in paths]

    def path(self, path_id: PathId) -> Path:
        j, k = path_id
        paths = self.sink_paths(j)
        if not 1 <= k <= len(paths):
            raise IndexError(f"path {j}.{k} does not exist")
        return paths[k - 1]

    def by_label(self, label: str) -> Path:
        try:
            j, k = (int(part) for part in label.split("."))
        except ValueError:
            raise ValidationError(f"bad path label {label!r}") from None
        return self.path((j, k))


class _Residual:
    """Unit-capacity residual network for one sink."""

    def __init__(self, g: NetworkInstance, excluded: Set[int]):
        self.g = g
        self.flow: Dict[int, int] = {edge.index: 0 for edge in g.edges}
        self.outgoing: Dict[str, List[Edge]] = collections.defaultdict(list)
        self.incoming: Dict[str, List[Edge]] = collections.defaultdict(list)
        for edge in g.edges:
            if edge.index in excluded:
                continue
            self.outgoing[edge.tail].append(edge)
            self.incoming[edge.head].append(edge)

    def _steps(self, node: str) -> Iterable[Tuple[Edge, bool]]:
        for edge in self.outgoing[node]:
            if not self.flow[edge.index]:
                yield edge, True
        for edge in self.incoming[node]:
            if self.flow[edge.index]:
                yield edge, False

    def augment(self, sink: str) -> bool:
        """Pushes one unit along a shortest augmenting path, if any."""
        parent: Dict[str, Tuple[Edge, bool]] = {}
        seen = {self.g.source}
        queue: Deque[str] = collections.deque([self.g.source])
        while queue:
            node = queue.popleft()
            for edge, forward in self._steps(node):
                nxt = edge.head if forward else edge.tail
                if nxt in seen:
                    continue
                seen.add(nxt)
                parent[nxt] = (edge, forward)
                if nxt == sink:
                    self._apply(parent, sink)
                    return True
                queue.append(nxt)
        return False

    def _apply(self, parent: Dict[str, Tuple[Edge, bool]], sink: str) -> None:
        node = sink
        while node != self.g.source:
            edge, forward = parent[node]
            self.flow[edge.index] = 1 if forward else 0
            node = edge.tail if forward else edge.head

    def saturated(self) -> List[Edge]:
        return [edge for edge in self.g.edges if self.flow[edge.index]]


def _max_flow(
    g: NetworkInstance, sink: str, excluded: Iterable[Edge] = ()
) -> Tuple[int, List[Edge]]:
    residual = _Residual(g, {edge.index for edge in excluded})
    value = 0
    while residual.augment(sink):
        value += 1
    return value, residual.saturated()


def _walk_paths(
    g: NetworkInstance, sink: str, j: int, flow_edges: List[Edge]
) -> Tuple[Path, ...]:
    remaining: Dict[str, List[Edge]] = collections.defaultdict(list)
    for edge in flow_edges:
        remaining[edge.tail].append(edge)

    paths = []
    slot = 0
    while remaining[g.source]:
        slot += 1
        node, edges = g.source, []
        while node != sink:
            # lowest file position first; lists are already in file order
            edge = remaining[node].pop(0)
            edges.append(edge)
            node = edge.head
        paths.append(Path(sink=j, slot=slot, edges=tuple(edges)))
    return tuple(paths)


def decompose(g: NetworkInstance) -> PathDecomposition:
    """Finds a maximum set of edge-disjoint source-sink paths for every sink."""
    per_sink = []
    for j, sink in enumerate(g.sinks, start=1):
        value, flow_edges = _max_flow(g, sink)
        paths = _walk_paths(g, sink, j, flow_edges)
        logger.debug(f"sink {sink} (j={j}): max-flow {value}, {len(paths)} paths")
        per_sink.append(paths)
    return PathDecomposition(sink_ids=g.sinks, per_sink=tuple(per_sink))


def maxflow_value(
    g: NetworkInstance, j: int, exclude_edges: Iterable[Edge] = ()
) -> int:
    """Unit-capacity max-flow from the source to sink j (1-based).

    Args:
        exclude_edges: edges treated as removed from the network.

    Raises:
        IndexError: j is not a sink index.
    """
    if not 1 <= j <= g.sink_count:
        raise IndexError(f"sink index {j} out of range 1..{g.sink_count}")
    value, _ = _max_flow(g, g.sinks[j - 1], exclude_edges)
    return value


def _resolve_path(
    g: NetworkInstance,
    nodes: Sequence[str],
    used: Set[int],
    lineno: int,
) -> Tuple[Edge, ...]:
    edges = []
    for tail, head in zip(nodes, nodes[1:]):
        candidates = [e for e in g.edges if e.tail == tail and e.head == head]
        if not candidates:
            raise PathOverrideError(f"line {lineno}: no edge {tail} -> {head}")
        free = [e for e in candidates if e.index not in used]
        if not free:
            raise PathOverrideError(
                f"line {lineno}: edge {tail} -> {head} is already used by another "
                "path to the same sink"
            )
        used.add(free[0].index)
        edges.append(free[0])
    return tuple(edges)


def parse_paths(g: NetworkInstance, text: TextOrBytes) -> PathDecomposition:
    """Reads a path override file for network g.

    Each line is ``path <sink-id> <node> <node> ...``. Parallel links are
    taken lowest index first among those not yet used by the same sink, so
    the paths of one sink are edge-disjoint by construction. Every sink must
    be listed with exactly max-flow many paths.
    """
    collected: Dict[str, List[Tuple[int, List[str]]]] = {sink: [] for sink in g.sinks}
    for lineno, tokens in tokenized_lines(text):
        if tokens[0] != "path" or len(tokens) < 4:
            raise PathOverrideError(
                f"line {lineno}: expected `path <sink-id> <node> <node> ...`"
            )
        sink, nodes = tokens[1], tokens[2:]
        if sink not in collected:
            raise PathOverrideError(f"line {lineno}: {sink!r} is not a sink")
        if nodes[0] != g.source or nodes[-1] != sink:
            raise PathOverrideError(
                f"line {lineno}: path must run from {g.source!r} to {sink!r}"
            )
        collected[sink].append((lineno, nodes))

    per_sink = []
    for j, sink in enumerate(g.sinks, start=1):
        used: Set[int] = set()
        paths = tuple(
            Path(sink=j, slot=k, edges=_resolve_path(g, nodes, used, lineno))
            for k, (lineno, nodes) in enumerate(collected[sink], start=1)
        )
        expected = maxflow_value(g, j)
        if len(paths) != expected:
            raise PathOverrideError(
                f"sink {sink!r}: {len(paths)} path(s) given but max-flow is {expected}"
            )
        per_sink.append(paths)
    return PathDecomposition(sink_ids=g.sinks, per_sink=tuple(per_sink))


def serialize_paths(d: PathDecomposition) -> bytes:
    lines = []
    for path in d.paths():
        sink_id = d.sink_ids[path.sink - 1]
        lines.append(f"path {sink_id} {' '.join(path.nodes)}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def load_paths(g: NetworkInstance, path: Optional[str]) -> PathDecomposition:
    """Override file when given, else the computed decomposition."""
    if path is None:
        return decompose(g)
    with open(path, "rb") as f:
        return parse_paths(g, f.read())
