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

"""Single-source unit-capacity DAG networks and their file format.

A network file is line oriented::

    # comment
    source s
    sink t1
    sink t2
    edge s u

Sinks are numbered 1..t in the order of their ``sink`` lines. Every ``edge``
line is one unit-capacity link; repeating a line adds a parallel link, and
each link keeps its position in the file as its index.
"""

import dataclasses
import random
import re
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple, Union

import graphviz
import networkx as nx

from nudcode.errors import (
    CycleError,
    DuplicateSourceError,
    NetworkSyntaxError,
    UnreachableSinkError,
    ValidationError,
)

TextOrBytes = Union[str, bytes]

_ID = re.compile(r"^[A-Za-z0-9_]+$")


@dataclasses.dataclass(frozen=True)
class Edge:
    tail: str
    head: str
    index: int

    @property
    def key(self) -> str:
        """Stable textual name, e.g. ``u->w#2``."""
        return f"{self.tail}->{self.head}#{self.index}"

    def __str__(self) -> str:
        return self.key


@dataclasses.dataclass(frozen=True)
class NetworkInstance:
    nodes: FrozenSet[str]
    edges: Tuple[Edge, ...]
    source: str
    sinks: Tuple[str, ...]

    @property
    def sink_count(self) -> int:
        return len(self.sinks)

    def sink_index(self, sink_id: str) -> int:
        """1-based index j of a sink id."""
        try:
            return self.sinks.index(sink_id) + 1
        except ValueError:
            raise ValidationError(f"{sink_id} is not a sink") from None

    def out_edges(self, node: str) -> List[Edge]:
        return [edge for edge in self.edges if edge.tail == node]

    def in_edges(self, node: str) -> List[Edge]:
        return [edge for edge in self.edges if edge.head == node]


@dataclasses.dataclass(frozen=True)
class EdgeOrder:
    """A topological completion of the node partial order.

    Edges are compared by the rank of their tails.
    """

    node_rank: Dict[str, int]

    def rank(self, node: str) -> int:
        return self.node_rank[node]

    def precedes(self, e: Edge, f: Edge) -> bool:
        return self.node_rank[e.tail] <= self.node_rank[f.tail]

    def sort_key(self, edge: Edge) -> Tuple[int, int, int]:
        return (self.node_rank[edge.tail], self.node_rank[edge.head], edge.index)

    def sorted_edges(self, edges: Iterable[Edge]) -> List[Edge]:
        return sorted(edges, key=self.sort_key)


def _decode(text: TextOrBytes) -> str:
    if isinstance(text, bytes):
        try:
            return text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise NetworkSyntaxError(None, f"input is not UTF-8: {exc}") from exc
    return text


def tokenized_lines(text: TextOrBytes) -> Iterable[Tuple[int, List[str]]]:
    """Yields (line number, tokens) for every non-blank, non-comment line."""
    for lineno, line in enumerate(_decode(text).splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        for token in tokens[1:]:
            if not _ID.match(token):
                raise NetworkSyntaxError(lineno, f"invalid identifier {token!r}")
        yield lineno, tokens


def parse_network(text: TextOrBytes) -> NetworkInstance:
    """Parses and validates a network file.

    Raises:
        NetworkSyntaxError: a line is malformed.
        DuplicateSourceError: more than one ``source`` line.
        CycleError: the edges contain a directed cycle.
        UnreachableSinkError: some sink cannot be reached from the source.
        ValidationError: any other inconsistency.
    """
    source: Optional[str] = None
    sinks: List[str] = []
    pairs: List[Tuple[str, str]] = []

    for lineno, tokens in tokenized_lines(text):
        keyword, args = tokens[0], tokens[1:]
        if keyword == "source":
            if len(args) != 1:
                raise NetworkSyntaxError(lineno, "expected `source <id>`")
            if source is not None:
                raise DuplicateSourceError(
                    f"line {lineno}: second source {args[0]!r} (already {source!r})"
                )
            source = args[0]
        elif keyword == "sink":
            if len(args) != 1:
                raise NetworkSyntaxError(lineno, "expected `sink <id>`")
            if args[0] in sinks:
                raise ValidationError(f"line {lineno}: duplicate sink {args[0]!r}")
            sinks.append(args[0])
        elif keyword == "edge":
            if len(args) != 2:
                raise NetworkSyntaxError(lineno, "expected `edge <tail> <head>`")
            pairs.append((args[0], args[1]))
        else:
            raise NetworkSyntaxError(lineno, f"unknown directive {keyword!r}")

    if source is None:
        raise ValidationError("network has no source")
    if not sinks:
        raise ValidationError("network has no sinks")
    if source in sinks:
        raise ValidationError(f"source {source!r} is also declared as a sink")

    edges = tuple(Edge(tail, head, index) for index, (tail, head) in enumerate(pairs))
    nodes = frozenset([source, *sinks, *(e.tail for e in edges), *(e.head for e in edges)])
    g = NetworkInstance(nodes=nodes, edges=edges, source=source, sinks=tuple(sinks))
    validate(g)
    return g


def to_multidigraph(g: NetworkInstance) -> nx.MultiDiGraph:
    """networkx view of the network; parallel links are keyed by edge index."""
    graph = nx.MultiDiGraph()
    graph.add_nodes_from(sorted(g.nodes))
    for edge in g.edges:
        graph.add_edge(edge.tail, edge.head, key=edge.index)
    return graph


def validate(g: NetworkInstance) -> None:
    graph = to_multidigraph(g)
    if not nx.is_directed_acyclic_graph(graph):
        cycle = nx.find_cycle(graph)
        hops = " -> ".join(str(hop[0]) for hop in cycle)
        raise CycleError(f"network has a cycle through {hops}")
    if graph.in_degree(g.source) > 0:
        raise ValidationError(f"source {g.source!r} has incoming edges")
    reachable = nx.descendants(graph, g.source)
    for sink in g.sinks:
        if sink not in reachable:
            raise UnreachableSinkError(f"sink {sink!r} is not reachable from {g.source!r}")


def topological_order(g: NetworkInstance) -> EdgeOrder:
    """Ranks nodes topologically, breaking ties by node id.

    The source always gets rank 0.
    """
    graph = to_multidigraph(g)
    order = nx.lexicographical_topological_sort(
        graph, key=lambda node: (node != g.source, node)
    )
    return EdgeOrder(node_rank={node: rank for rank, node in enumerate(order)})


def serialize_network(g: NetworkInstance) -> bytes:
    lines = [f"source {g.source}"]
    lines.extend(f"sink {sink}" for sink in g.sinks)
    lines.extend(f"edge {edge.tail} {edge.head}" for edge in g.edges)
    return ("\n".join(lines) + "\n").encode("utf-8")


def export_network_dot(g: NetworkInstance, name: str = "network") -> str:
    """DOT source for the network: source as a diamond, sinks double circled."""
    dot = graphviz.Digraph(name=name, comment="nudcode network")
    dot.attr(rankdir="LR")
    rank = topological_order(g)
    for node in sorted(g.nodes, key=rank.rank):
        if node == g.source:
            dot.node(node, node, shape="diamond")
        elif node in g.sinks:
            dot.node(node, node, shape="doublecircle")
        else:
            dot.node(node, node, shape="circle")
    for edge in g.edges:
        dot.edge(edge.tail, edge.head, tooltip=edge.key)
    return dot.source


def random_network(
    num_nodes: int,
    edge_prob: float,
    num_sinks: int,
    seed: int,
    parallel_prob: float = 0.0,
) -> NetworkInstance:
    """Generates a random single-source DAG.

    Nodes are laid out in a fixed order (source, relays a1.., sinks t1..);
    every node gets one link from some earlier node, which keeps every sink
    reachable, and every forward pair is linked with probability edge_prob.
    """
    if num_sinks < 1:
        raise ValidationError("need at least one sink")
    rng = random.Random(seed)
    relays = [f"a{i}" for i in range(1, max(num_nodes - num_sinks - 1, 0) + 1)]
    sinks = [f"t{j}" for j in range(1, num_sinks + 1)]
    order = ["s", *relays, *sinks]

    pairs: List[Tuple[str, str]] = []
    for position in range(1, len(order)):
        pairs.append((order[rng.randrange(position)], order[position]))
    for i in range(len(order)):
        for k in range(i + 1, len(order)):
            if rng.random() < edge_prob:
                pairs.append((order[i], order[k]))
                if rng.random() < parallel_prob:
                    pairs.append((order[i], order[k]))

    text = "\n".join(
        ["source s", *(f"sink {sink}" for sink in sinks)]
        + [f"edge {tail} {head}" for tail, head in pairs]
    )
    return parse_network(text)
