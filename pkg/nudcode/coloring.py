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

"""Exact vertex coloring with a color budget, plus the small-graph oracles."""

import dataclasses
import time
from typing import Any, Dict, List, Mapping, Optional

import networkx as nx
import numpy as np

from nudcode import log
from nudcode.colorgraph import GraphLike, as_graph
from nudcode.errors import BudgetError, CapError, ColoringTimeout, ValidationError

logger = log.get_logger(__name__)


@dataclasses.dataclass(frozen=True)
class Coloring:
    color_of: Dict[str, int]
    budget: int

    def to_json(self) -> Dict[str, Any]:
        return {"budget": self.budget, "colors": dict(sorted(self.color_of.items()))}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "Coloring":
        try:
            budget = int(data["budget"])
            colors = {str(name): int(color) for name, color in data["colors"].items()}
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise ValidationError(f"malformed coloring: {exc}") from exc
        return cls(color_of=colors, budget=budget)


def is_proper(g: GraphLike, coloring: Coloring) -> bool:
    graph, _ = as_graph(g)
    colors = coloring.color_of
    if set(colors) != set(graph.nodes):
        return False
    if any(not 1 <= color <= coloring.budget for color in colors.values()):
        return False
    return all(colors[a] != colors[b] for a, b in graph.edges)


def max_clique(g: GraphLike) -> List[str]:
    graph, order = as_graph(g)
    if graph.number_of_nodes() == 0:
        return []
    nodes, _ = nx.max_weight_clique(graph, weight=None)
    position = {name: i for i, name in enumerate(order)}
    return sorted(nodes, key=position.__getitem__)


def clique_number(g: GraphLike) -> int:
    """Exact ω of an arbitrary graph."""
    return len(max_clique(g))


class _Dsatur:
    """Saturation-degree backtracking over a fixed color budget."""

    def __init__(
        self,
        graph: nx.Graph,
        order: List[str],
        budget: int,
        deadline: Optional[float],
    ):
        self.budget = budget
        self.deadline = deadline
        self.rank = {node: i for i, node in enumerate(order)}
        self.adj = {node: list(graph[node]) for node in order}
        self.degree = {node: len(self.adj[node]) for node in order}
        self.color: Dict[str, int] = {}
        self.seen: Dict[str, Dict[int, int]] = {node: {} for node in order}
        self.uncolored = set(order)
        self.max_used = 0
        self.expanded = 0

    def assign(self, node: str, color: int) -> None:
        self.color[node] = color
        self.uncolored.discard(node)
        for other in self.adj[node]:
            counts = self.seen[other]
            counts[color] = counts.get(color, 0) + 1

    def unassign(self, node: str) -> None:
        color = self.color.pop(node)
        self.uncolored.add(node)
        for other in self.adj[node]:
            counts = self.seen[other]
            counts[color] -= 1
            if not counts[color]:
                del counts[color]

    def _pick(self) -> str:
        return max(
            self.uncolored,
            key=lambda node: (len(self.seen[node]), self.degree[node], -self.rank[node]),
        )

    def search(self) -> bool:
        if not self.uncolored:
            return True
        self.expanded += 1
        if self.deadline is not None and self.expanded % 256 == 0:
            if time.monotonic() > self.deadline:
                raise ColoringTimeout(
                    f"coloring with {self.budget} colors ran out of time "
                    f"after {self.expanded} nodes"
                )
        node = self._pick()
        if len(self.seen[node]) >= self.budget:
            return False
        previous_max = self.max_used
        for color in range(1, min(self.budget, self.max_used + 1) + 1):
            if color in self.seen[node]:
                continue
            self.assign(node, color)
            self.max_used = max(previous_max, color)
            if self.search():
                return True
            self.unassign(node)
            self.max_used = previous_max
        return False


def color_exact(
    g: GraphLike,
    budget: int,
    seed: int = 0,
    timeout: Optional[float] = None,
) -> Optional[Coloring]:
    """Finds a proper coloring using at most `budget` colors, if one exists.

    One maximum clique is colored 1..ω up front; the rest is a complete
    DSATUR backtracking search. A nonzero seed permutes the tie-break order
    among otherwise equal vertices.

    Raises:
        BudgetError: budget is below 1.
        ColoringTimeout: the search exceeded `timeout` seconds.
    """
    if budget < 1:
        raise BudgetError(f"color budget must be at least 1, got {budget}")
    graph, order = as_graph(g)
    if seed:
        permutation = np.random.default_rng(seed).permutation(len(order))
        order = [order[i] for i in permutation]

    clique = max_clique(graph)
    if len(clique) > budget:
        logger.debug(f"clique of size {len(clique)} exceeds {budget} colors")
        return None

    deadline = None if timeout is None else time.monotonic() + timeout
    search = _Dsatur(graph, order, budget, deadline)
    for color, node in enumerate(sorted(clique, key=search.rank.__getitem__), start=1):
        search.assign(node, color)
    search.max_used = len(clique)

    found = search.search()
    logger.debug(
        f"exact coloring, budget {budget}: {'found' if found else 'none'} "
        f"after {search.expanded} nodes"
    )
    if not found:
        return None
    return Coloring(color_of=dict(search.color), budget=budget)


def chromatic_number_oracle(
    g: GraphLike, max_vertices: int = 20, timeout: Optional[float] = None
) -> int:
    """Exact χ, counting up from the clique number.

    Raises:
        CapError: the graph has more than max_vertices vertices.
    """
    graph, _ = as_graph(g)
    size = graph.number_of_nodes()
    if size > max_vertices:
        raise CapError(f"chromatic oracle is capped at {max_vertices} vertices, got {size}")
    if size == 0:
        return 0
    budget = max(clique_number(graph), 1)
    while color_exact(graph, budget, timeout=timeout) is None:
        budget += 1
    return budget


def two_colorable(g: GraphLike) -> Optional[Coloring]:
    """2-coloring by bipartition, or None when the graph has an odd cycle."""
    graph, _ = as_graph(g)
    if not nx.is_bipartite(graph):
        return None
    sides = nx.bipartite.color(graph)
    return Coloring(color_of={node: side + 1 for node, side in sides.items()}, budget=2)
