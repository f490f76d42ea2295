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

"""Graph coloring instances as stream assignment problems, and test corpora.

Every coloring vertex v becomes one link r_v_in -> r_v_out. Each coloring
edge (a, b), with a < b, becomes a sink with two paths, the first crossing
a's link and the second crossing b's. Each vertex also gets a sink whose
single path crosses its link, and a last sink receives n overlap-free paths.
Every path reaches its link through a private entry node and leaves it
through a private exit node, so crossing a link is its only overlap.
"""

import dataclasses
import pathlib
from typing import Any, Dict, List, Optional, Tuple

import networkx as nx

from nudcode import log
from nudcode.coloring import Coloring, chromatic_number_oracle, is_proper
from nudcode.errors import ColoringTimeout, ValidationError
from nudcode.flows import PathDecomposition, parse_paths
from nudcode.netgraph import Edge, NetworkInstance, TextOrBytes, parse_network, tokenized_lines
from nudcode.solver import SOLUTION, UNKNOWN, StreamAssignment, solve

logger = log.get_logger(__name__)

FIXTURES_DIR = pathlib.Path(__file__).parent / "fixtures"
SHIPPED_FIXTURES = (
    "butterfly.net",
    "extended_butterfly.net",
    "counterexample.net",
    "non_berge.net",
    "non_berge.paths",
)


@dataclasses.dataclass(frozen=True)
class ColoringInstance:
    vertices: Tuple[str, ...]
    edges: Tuple[Tuple[str, str], ...]
    n: int

    def __post_init__(self) -> None:
        declared = set(self.vertices)
        if len(declared) != len(self.vertices):
            raise ValidationError("duplicate vertex in coloring instance")
        seen = set()
        for a, b in self.edges:
            if a == b:
                raise ValidationError(f"self-loop on {a}")
            if a not in declared or b not in declared:
                raise ValidationError(f"edge {a} {b} uses an undeclared vertex")
            if (a, b) in seen:
                raise ValidationError(f"duplicate edge {a} {b}")
            seen.add((a, b))
        if self.n < 1:
            raise ValidationError(f"color budget must be at least 1, got {self.n}")

    @classmethod
    def build(cls, vertices, edges, n: int) -> "ColoringInstance":
        """Normalizes every edge to (smaller id, larger id)."""
        normalized = tuple(tuple(sorted(edge)) for edge in edges)
        return cls(vertices=tuple(vertices), edges=normalized, n=n)  # type: ignore

    def graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self.edges)
        return graph


@dataclasses.dataclass(frozen=True)
class ReductionOutput:
    network: NetworkInstance
    paths: PathDecomposition
    vertex_to_link: Dict[str, Edge]
    edge_to_sink: Dict[Tuple[str, str], str]
    vertex_to_sink: Dict[str, str]


@dataclasses.dataclass(frozen=True)
class EquivalenceVerdict:
    chromatic: int
    colorable: bool
    feasible: bool
    coloring: Optional[Coloring]

    @property
    def consistent(self) -> bool:
        return self.colorable == self.feasible


def parse_coloring(text: TextOrBytes) -> ColoringInstance:
    """Reads `vertex <id>`, `edge <a> <b>` and one `colors <n>` line."""
    vertices: List[str] = []
    edges: List[Tuple[str, str]] = []
    n: Optional[int] = None
    for lineno, tokens in tokenized_lines(text):
        keyword, args = tokens[0], tokens[1:]
        if keyword == "vertex" and len(args) == 1:
            vertices.append(args[0])
        elif keyword == "edge" and len(args) == 2:
            edges.append((args[0], args[1]))
        elif keyword == "colors" and len(args) == 1 and args[0].isdigit():
            if n is not None:
                raise ValidationError(f"line {lineno}: second `colors` line")
            n = int(args[0])
        else:
            raise ValidationError(f"line {lineno}: cannot parse {' '.join(tokens)!r}")
    if n is None:
        raise ValidationError("coloring instance has no `colors` line")
    return ColoringInstance.build(vertices, edges, n)


def serialize_coloring(c: ColoringInstance) -> bytes:
    lines = [f"vertex {v}" for v in c.vertices]
    lines.extend(f"edge {a} {b}" for a, b in c.edges)
    lines.append(f"colors {c.n}")
    return ("\n".join(lines) + "\n").encode("utf-8")


class _Builder:
    def __init__(self) -> None:
        self.pairs: List[Tuple[str, str]] = []
        self.paths: List[Tuple[str, List[str]]] = []
        self.count = 0

    def crossing(self, vertex: str, sink: str) -> None:
        self.count += 1
        entry, exit_ = f"p{self.count}_i", f"p{self.count}_o"
        link_in, link_out = f"r_{vertex}_in", f"r_{vertex}_out"
        self.pairs += [("s", entry), (entry, link_in), (link_out, exit_), (exit_, sink)]
        self.paths.append((sink, ["s", entry, link_in, link_out, exit_, sink]))


def reduce_coloring_to_network(c: ColoringInstance) -> ReductionOutput:
    builder = _Builder()
    for v in c.vertices:
        builder.pairs.append((f"r_{v}_in", f"r_{v}_out"))

    sinks: List[str] = []
    edge_to_sink = {}
    for i, (a, b) in enumerate(c.edges, start=1):
        sink = f"te{i}"
        sinks.append(sink)
        edge_to_sink[(a, b)] = sink
        builder.crossing(a, sink)
        builder.crossing(b, sink)

    vertex_to_sink = {}
    for i, v in enumerate(c.vertices, start=1):
        sink = f"tv{i}"
        sinks.append(sink)
        vertex_to_sink[v] = sink
        builder.crossing(v, sink)

    sinks.append("tn")
    for k in range(1, c.n + 1):
        builder.pairs += [("s", f"q{k}"), (f"q{k}", "tn")]
        builder.paths.append(("tn", ["s", f"q{k}", "tn"]))

    network_text = "\n".join(
        ["source s"]
        + [f"sink {sink}" for sink in sinks]
        + [f"edge {tail} {head}" for tail, head in builder.pairs]
    )
    network = parse_network(network_text)
    paths_text = "\n".join(f"path {sink} {' '.join(nodes)}" for sink, nodes in builder.paths)
    paths = parse_paths(network, paths_text)

    vertex_to_link = {v: network.edges[i] for i, v in enumerate(c.vertices)}
    logger.debug(
        f"reduced {len(c.vertices)} vertices / {len(c.edges)} edges to "
        f"{network.sink_count} sinks, {len(paths.paths())} paths, {len(network.edges)} links"
    )
    return ReductionOutput(
        network=network,
        paths=paths,
        vertex_to_link=vertex_to_link,
        edge_to_sink=edge_to_sink,
        vertex_to_sink=vertex_to_sink,
    )


def pull_back_coloring(
    c: ColoringInstance, out: ReductionOutput, assignment: StreamAssignment
) -> Coloring:
    """Colors each vertex with the stream on its single-path sink."""
    colors = {}
    for v in c.vertices:
        j = out.network.sink_index(out.vertex_to_sink[v])
        colors[v] = assignment.f[(j, 1)]
    return Coloring(color_of=colors, budget=assignment.nbar)


def check_equivalence(
    c: ColoringInstance,
    out: ReductionOutput,
    max_vertices: int = 20,
    timeout: Optional[float] = None,
) -> EquivalenceVerdict:
    """Compares n-colorability of c with solvability of its network.

    Raises:
        CapError: c has more vertices than the chromatic oracle accepts.
        ColoringTimeout: the network could not be decided in time.
    """
    chromatic = chromatic_number_oracle(c.graph(), max_vertices=max_vertices, timeout=timeout)
    colorable = chromatic <= c.n

    coloring = None
    if out.paths.n > c.n:
        feasible = False
    else:
        report = solve(out.network, nbar=c.n, paths=out.paths, check_berge=False, timeout=timeout)
        if report.outcome == UNKNOWN:
            raise ColoringTimeout(f"reduced network undecided: {report.diagnostic}")
        feasible = report.outcome == SOLUTION
        if feasible:
            assert report.assignment is not None
            coloring = pull_back_coloring(c, out, report.assignment)
            if not is_proper(c.graph(), coloring):
                logger.error(f"pulled back coloring is not proper: {coloring.color_of}")
                coloring = None
    verdict = EquivalenceVerdict(
        chromatic=chromatic, colorable=colorable, feasible=feasible, coloring=coloring
    )
    logger.debug(f"equivalence: χ={chromatic}, n={c.n}, feasible={feasible}")
    return verdict


def load_fixture(name: str) -> bytes:
    return (FIXTURES_DIR / name).read_bytes()


@dataclasses.dataclass(frozen=True)
class CorpusEntry:
    name: str
    data: bytes
    instance: Any = None


def _coloring_entry(name: str, c: ColoringInstance) -> CorpusEntry:
    return CorpusEntry(name=name, data=serialize_coloring(c), instance=c)


def generate_corpus(kind: str, params: Dict[str, Any], seed: int = 0) -> List[CorpusEntry]:
    """Deterministic instance files.

    Kinds and their params:
        cycle: length, colors
        complete: size, colors
        random-gnp: vertices, p, count, colors (graph i uses seed + i)
        fixtures: none
    """
    if kind == "cycle":
        length = int(params.get("length", 5))
        if length < 3:
            raise ValidationError("a cycle needs at least 3 vertices")
        vertices = [f"v{i}" for i in range(1, length + 1)]
        edges = [(vertices[i], vertices[(i + 1) % length]) for i in range(length)]
        c = ColoringInstance.build(vertices, edges, int(params.get("colors", 3)))
        return [_coloring_entry(f"c{length}.col", c)]
    if kind == "complete":
        size = int(params.get("size", 4))
        vertices = [f"v{i}" for i in range(1, size + 1)]
        edges = [(a, b) for i, a in enumerate(vertices) for b in vertices[i + 1 :]]
        c = ColoringInstance.build(vertices, edges, int(params.get("colors", size)))
        return [_coloring_entry(f"k{size}.col", c)]
    if kind == "random-gnp":
        size = int(params.get("vertices", 8))
        p = float(params.get("p", 0.3))
        entries = []
        for i in range(int(params.get("count", 1))):
            graph = nx.gnp_random_graph(size, p, seed=seed + i)
            vertices = [f"v{node + 1}" for node in graph.nodes]
            edges = [(f"v{a + 1}", f"v{b + 1}") for a, b in graph.edges]
            c = ColoringInstance.build(vertices, edges, int(params.get("colors", 3)))
            entries.append(_coloring_entry(f"gnp{size}_{seed + i}.col", c))
        return entries
    if kind == "fixtures":
        entries = []
        for name in SHIPPED_FIXTURES:
            data = load_fixture(name)
            instance = parse_network(data) if name.endswith(".net") else None
            entries.append(CorpusEntry(name=name, data=data, instance=instance))
        return entries
    raise ValidationError(f"unknown corpus kind {kind!r}")
