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

"""The coloring graph of a decomposition, its clique number and Berge test.

Every sink j owns a clique of n̄ vertices: one regular vertex v<j>.<k> per
path p_jk, padded with fictitious vertices w<j>.<k>. A regular vertex v_jk is
joined to every fictitious vertex of sink j' when p_jk contaminates some
path to j'. Proper n̄-colorings of this graph are exactly the saturating,
decodable stream assignments with streams 1..n̄.
"""

import dataclasses
import time
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

import graphviz
import networkx as nx

from nudcode import log
from nudcode.contamination import ContaminationReport
from nudcode.errors import BudgetError, HoleSearchTimeout, StructureError
from nudcode.flows import PathDecomposition

logger = log.get_logger(__name__)

REGULAR = "regular"
FICTITIOUS = "fictitious"


@dataclasses.dataclass(frozen=True)
class Vertex:
    sink: int
    slot: int
    kind: str

    @property
    def name(self) -> str:
        prefix = "v" if self.kind == REGULAR else "w"
        return f"{prefix}{self.sink}.{self.slot}"


@dataclasses.dataclass(frozen=True)
class ColoringGraph:
    vertices: Tuple[Vertex, ...]
    graph: nx.Graph
    nbar: int
    rates: Tuple[int, ...]

    @property
    def names(self) -> List[str]:
        return [vertex.name for vertex in self.vertices]

    @property
    def sink_count(self) -> int:
        return len(self.rates)

    def group(self, j: int) -> List[Vertex]:
        return [vertex for vertex in self.vertices if vertex.sink == j]

    def regular(self, j: int) -> List[Vertex]:
        return [vertex for vertex in self.group(j) if vertex.kind == REGULAR]

    def fictitious(self, j: int) -> List[Vertex]:
        return [vertex for vertex in self.group(j) if vertex.kind == FICTITIOUS]

    def stats(self) -> Dict[str, int]:
        return {
            "vertices": self.graph.number_of_nodes(),
            "edges": self.graph.number_of_edges(),
            "fictitious": sum(1 for v in self.vertices if v.kind == FICTITIOUS),
        }


@dataclasses.dataclass(frozen=True)
class Witness:
    """An induced odd cycle of length >= 5 in the graph or its complement."""

    kind: str  # "hole" or "antihole"
    vertices: Tuple[str, ...]

    @property
    def length(self) -> int:
        return len(self.vertices)


def build_coloring_graph(
    d: PathDecomposition, r: ContaminationReport, nbar: Optional[int] = None
) -> ColoringGraph:
    """Builds the coloring graph with n̄ colors per sink subgraph.

    Raises:
        BudgetError: nbar is below n.
    """
    nbar = d.n if nbar is None else nbar
    if nbar < d.n:
        raise BudgetError(f"stream budget {nbar} is below n = {d.n}")

    vertices: List[Vertex] = []
    for j, n_j in enumerate(d.rates, start=1):
        vertices.extend(Vertex(j, k, REGULAR) for k in range(1, n_j + 1))
        vertices.extend(Vertex(j, k, FICTITIOUS) for k in range(1, nbar - n_j + 1))

    graph = nx.Graph()
    for vertex in vertices:
        graph.add_node(vertex.name, sink=vertex.sink, slot=vertex.slot, kind=vertex.kind)

    by_sink: Dict[int, List[Vertex]] = {}
    for vertex in vertices:
        by_sink.setdefault(vertex.sink, []).append(vertex)
    for members in by_sink.values():
        for i, a in enumerate(members):
            for b in members[i + 1 :]:
                graph.add_edge(a.name, b.name)

    for path_id, targets in r.sets.items():
        reached = {target[0] for target in targets}
        for j_other in sorted(reached):
            for w in by_sink[j_other]:
                if w.kind == FICTITIOUS:
                    graph.add_edge(f"v{path_id[0]}.{path_id[1]}", w.name)

    ghat = ColoringGraph(vertices=tuple(vertices), graph=graph, nbar=nbar, rates=d.rates)
    logger.debug(f"coloring graph at nbar={nbar}: {ghat.stats()}")
    return ghat


def _cross_counts(ghat: ColoringGraph) -> List[List[int]]:
    """Checks the sink-subgraph structure and counts regular-to-fictitious links.

    Entry [j][j'] (0-based) is the number of regular vertices of sink j joined
    to the fictitious vertices of sink j'.
    """
    graph = ghat.graph
    t = ghat.sink_count
    info = {vertex.name: vertex for vertex in ghat.vertices}
    if set(graph.nodes) != set(info):
        raise StructureError("graph vertices do not match the vertex list")

    groups: Dict[int, List[Vertex]] = {j: [] for j in range(1, t + 1)}
    for vertex in ghat.vertices:
        groups[vertex.sink].append(vertex)
    fictitious_size = {
        j: sum(1 for v in members if v.kind == FICTITIOUS) for j, members in groups.items()
    }

    for j, members in groups.items():
        if len(members) != ghat.nbar:
            raise StructureError(f"sink subgraph {j} has {len(members)} vertices, not {ghat.nbar}")
        for i, a in enumerate(members):
            for b in members[i + 1 :]:
                if not graph.has_edge(a.name, b.name):
                    raise StructureError(f"sink subgraph {j} is not a clique ({a.name}, {b.name})")

    counts = [[0] * t for _ in range(t)]
    for a, b in graph.edges:
        va, vb = info[a], info[b]
        if va.sink != vb.sink and va.kind == vb.kind:
            raise StructureError(f"cross edge {a} -- {b} joins two {va.kind} vertices")

    for v in ghat.vertices:
        if v.kind != REGULAR:
            continue
        linked: Dict[int, int] = {}
        for neighbor in graph[v.name]:
            w = info[neighbor]
            if w.sink != v.sink:
                linked[w.sink] = linked.get(w.sink, 0) + 1
        for j_other, count in linked.items():
            if count != fictitious_size[j_other]:
                raise StructureError(
                    f"{v.name} reaches {count} of {fictitious_size[j_other]} fictitious "
                    f"vertices of sink {j_other}"
                )
            counts[v.sink - 1][j_other - 1] += 1
    return counts


def max_clique_size(ghat: ColoringGraph) -> int:
    """ω of a coloring graph from its pairwise overlap counts.

    A clique meets at most two sink subgraphs; the largest one spanning sinks
    j and j' takes the m regular vertices of j linked to the fictitious
    vertices of j', plus those n̄ - n_j' fictitious vertices.

    Raises:
        StructureError: the graph is not shaped like a coloring graph.
    """
    counts = _cross_counts(ghat)
    excess = 0
    for j, row in enumerate(counts):
        for j_other, m in enumerate(row):
            if j != j_other and m:
                excess = max(excess, m - ghat.rates[j_other])
    return ghat.nbar + excess


GraphLike = Union[ColoringGraph, nx.Graph]


def as_graph(g: GraphLike) -> Tuple[nx.Graph, List[str]]:
    if isinstance(g, ColoringGraph):
        return g.graph, g.names
    return g, list(g.nodes)


class _CycleSearch:
    """Depth-first search for chordless cycles of one fixed length.

    Cycles are rooted at their lowest-ordered vertex, so each is met only
    from that root.
    """

    def __init__(self, graph: nx.Graph, order: Sequence[str], deadline: Optional[float]):
        self.order = list(order)
        self.index = {node: i for i, node in enumerate(self.order)}
        self.adj: Dict[str, Set[str]] = {node: set(graph[node]) for node in self.order}
        self.deadline = deadline
        self.expanded = 0
        self.reached_length = False

    def _tick(self) -> None:
        self.expanded += 1
        if self.deadline is not None and self.expanded % 512 == 0:
            if time.monotonic() > self.deadline:
                raise HoleSearchTimeout(
                    f"odd hole search ran out of time after {self.expanded} steps"
                )

    def find(self, length: int) -> Optional[List[str]]:
        self.reached_length = False
        for root in self.order:
            found = self._extend([root], length)
            if found is not None:
                return found
        return None

    def _extend(self, path: List[str], length: int) -> Optional[List[str]]:
        self._tick()
        root = path[0]
        position = len(path)
        floor = self.index[root]
        for x in sorted(self.adj[path[-1]], key=self.index.__getitem__):
            if self.index[x] <= floor or x in path:
                continue
            if any(x in self.adj[p] for p in path[1:-1]):
                continue
            touches_root = position > 1 and x in self.adj[root]
            if position == length - 1:
                if touches_root:
                    return path + [x]
                self.reached_length = True
                continue
            if touches_root:
                continue
            found = self._extend(path + [x], length)
            if found is not None:
                return found
        return None


def find_odd_hole_or_antihole(
    g: GraphLike, max_len: int, timeout: Optional[float] = None
) -> Optional[Witness]:
    """Searches induced odd cycles of length 5..max_len, shortest first.

    For each length, holes are tried before antiholes (holes of the
    complement); an antihole of length 5 is a hole of length 5, so antiholes
    start at 7. Returns None when nothing exists within max_len.

    Raises:
        HoleSearchTimeout: the search exceeded `timeout` seconds.
    """
    graph, order = as_graph(g)
    deadline = None if timeout is None else time.monotonic() + timeout
    searches = {
        "hole": _CycleSearch(graph, order, deadline),
        "antihole": _CycleSearch(nx.complement(graph), order, deadline),
    }
    alive = {"hole": True, "antihole": True}

    for length in range(5, max_len + 1, 2):
        for kind, search in searches.items():
            if not alive[kind] or (kind == "antihole" and length < 7):
                continue
            found = search.find(length)
            if found is not None:
                logger.debug(f"found odd {kind} of length {length}: {found}")
                return Witness(kind=kind, vertices=tuple(found))
            # no induced path as long as `length` means no longer cycles either
            alive[kind] = search.reached_length
        if not any(alive.values()):
            break
    return None


def is_berge(
    g: GraphLike, timeout: Optional[float] = None
) -> Tuple[bool, Optional[Witness]]:
    """Exhaustive Berge test; returns (verdict, witness when not Berge)."""
    graph, _ = as_graph(g)
    size = graph.number_of_nodes()
    max_len = size if size % 2 else size - 1
    witness = find_odd_hole_or_antihole(g, max_len, timeout=timeout)
    return witness is None, witness


def export_coloring_graph_dot(ghat: ColoringGraph, name: str = "coloring") -> str:
    """DOT source with one cluster per sink subgraph."""
    dot = graphviz.Graph(name=name, comment="nudcode coloring graph")
    for j in range(1, ghat.sink_count + 1):
        with dot.subgraph(name=f"cluster_{j}") as cluster:
            cluster.attr(label=f"sink {j}")
            for vertex in ghat.group(j):
                style = "solid" if vertex.kind == REGULAR else "dashed"
                cluster.node(vertex.name, vertex.name, shape="circle", style=style)
    position = {name: i for i, name in enumerate(ghat.names)}
    edges = [sorted((a, b), key=position.__getitem__) for a, b in ghat.graph.edges]
    for a, b in sorted(edges, key=lambda e: (position[e[0]], position[e[1]])):
        dot.edge(a, b)
    return dot.source
