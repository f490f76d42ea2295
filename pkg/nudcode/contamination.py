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

"""Contamination sets.

A path p contaminates a path q of another sink when p's data reaches q's
symbol: directly, by sharing an edge with q, or transitively, by sharing an
edge with some path r whose later edges carry the mix on to q. "Later" is
measured along r itself.
"""

import collections
import dataclasses
from typing import DefaultDict, Dict, FrozenSet, List, Set, Tuple

from nudcode import log
from nudcode.errors import ValidationError
from nudcode.flows import Path, PathDecomposition, PathId
from nudcode.netgraph import Edge, NetworkInstance, topological_order

logger = log.get_logger(__name__)

Matrix = Tuple[Tuple[int, ...], ...]
_State = Tuple[PathId, int]


@dataclasses.dataclass(frozen=True)
class ContaminationReport:
    """The sets D_jk plus the edges at which paths overlap.

    Attributes:
        sets: path id -> ids of the paths it contaminates. Never contains a
            path to the same sink.
        overlap_edges: (a, b) with a < b -> edges shared by the two paths.
        rates: n_j per sink, kept so the overlap counts can be derived.
    """

    sets: Dict[PathId, FrozenSet[PathId]]
    overlap_edges: Dict[Tuple[PathId, PathId], Tuple[Edge, ...]]
    rates: Tuple[int, ...]

    @property
    def m(self) -> Matrix:
        return overlap_matrix(self)

    def contaminated_by(self, path_id: PathId) -> FrozenSet[PathId]:
        return self.sets[path_id]

    def contaminates_sink(self, path_id: PathId, j: int) -> bool:
        return any(target[0] == j for target in self.sets[path_id])

    def contaminators(self, j: int) -> List[PathId]:
        """Paths of other sinks whose data reaches some path to sink j."""
        return [
            path_id
            for path_id in sorted(self.sets)
            if path_id[0] != j and self.contaminates_sink(path_id, j)
        ]


def _overlaps(d: PathDecomposition) -> Dict[_State, List[_State]]:
    on_edge: DefaultDict[int, List[_State]] = collections.defaultdict(list)
    for path in d.paths():
        for pos, edge in enumerate(path.edges):
            on_edge[edge.index].append((path.id, pos))

    overlaps: DefaultDict[_State, List[_State]] = collections.defaultdict(list)
    for states in on_edge.values():
        for q in states:
            for r in states:
                if q[0] == r[0]:
                    continue
                if q[0][0] == r[0][0]:
                    raise ValidationError(
                        f"paths p{q[0][0]}.{q[0][1]} and p{r[0][0]}.{r[0][1]} "
                        "share an edge but lead to the same sink"
                    )
                overlaps[q].append(r)
    return overlaps


def contamination_sets(g: NetworkInstance, d: PathDecomposition) -> ContaminationReport:
    """Computes D_jk for every path of the decomposition.

    reach(q, i) is the set of paths picking up the symbol q carries from its
    i-th edge on: every path r of another sink sharing an edge e of q at or
    after position i, plus reach(r, position of e on r + 1). The recursion
    only moves to strictly higher tail ranks, so one sweep in decreasing rank
    order yields its least fixed point. D_jk is reach(p_jk, 0) without the
    paths to sink j.
    """
    rank = topological_order(g)
    paths: Dict[PathId, Path] = {path.id: path for path in d.paths()}
    overlaps = _overlaps(d)

    states = [(path_id, pos) for path_id, path in paths.items() for pos in range(len(path.edges))]
    states.sort(key=lambda state: rank.rank(paths[state[0]].edges[state[1]].tail), reverse=True)

    reach: Dict[_State, FrozenSet[PathId]] = {}
    for state in states:
        path_id, pos = state
        gathered: Set[PathId] = set(reach.get((path_id, pos + 1), frozenset()))
        for other_id, other_pos in overlaps.get(state, []):
            gathered.add(other_id)
            gathered |= reach.get((other_id, other_pos + 1), frozenset())
        reach[state] = frozenset(gathered)

    sets = {
        path_id: frozenset(
            target for target in reach.get((path_id, 0), frozenset()) if target[0] != path_id[0]
        )
        for path_id in sorted(paths)
    }

    shared: DefaultDict[Tuple[PathId, PathId], List[Edge]] = collections.defaultdict(list)
    for (path_id, pos), others in overlaps.items():
        for other_id, _ in others:
            if path_id < other_id:
                shared[(path_id, other_id)].append(paths[path_id].edges[pos])
    overlap_edges = {
        pair: tuple(sorted(edges, key=lambda edge: edge.index))
        for pair, edges in sorted(shared.items())
    }

    report = ContaminationReport(sets=sets, overlap_edges=overlap_edges, rates=d.rates)
    logger.debug(
        f"contamination: {len(overlap_edges)} overlapping pair(s), "
        f"{sum(len(s) for s in sets.values())} contamination link(s)"
    )
    return report


def overlap_matrix(r: ContaminationReport) -> Matrix:
    """m[j][j'] = number of paths to sink j contaminating some path to sink j'.

    Indices are 0-based in the returned tuples; the diagonal is zero.
    """
    t = len(r.rates)
    m = [[0] * t for _ in range(t)]
    for path_id, targets in r.sets.items():
        j = path_id[0]
        for j_other in {target[0] for target in targets}:
            if j_other != j:
                m[j - 1][j_other - 1] += 1
    return tuple(tuple(row) for row in m)
