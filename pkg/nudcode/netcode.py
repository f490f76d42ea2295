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

"""Scalar linear network codes over GF(2^8) realizing a stream assignment.

Only transitions that some path makes are coded: a node forwards the symbol
of in-edge e onto out-edge e' when a path uses e then e', and the source
feeds stream i onto edge e when a path carrying stream i starts with e.
"""

import dataclasses
import json
from typing import Any, Dict, FrozenSet, List, Optional, Set, Tuple, Union

import galois
import numpy as np

from nudcode import log
from nudcode.contamination import contamination_sets
from nudcode.errors import SupportError, SynthesisError, ValidationError, ZeroInverseError
from nudcode.flows import PathDecomposition
from nudcode.netgraph import Edge, NetworkInstance, topological_order
from nudcode.solver import StreamAssignment, verify_assignment

logger = log.get_logger(__name__)

FIELD_NAME = "GF256/0x11B"
# x^8 + x^4 + x^3 + x + 1
GF256 = galois.GF(2**8, irreducible_poly=0x11B)

MAX_ATTEMPTS = 64

Input = Union[Edge, int]
CoeffKey = Tuple[str, Input, Edge]


@dataclasses.dataclass(frozen=True)
class FieldOps:
    add: int
    mul: int
    inv: Optional[int]


def add(a: int, b: int) -> int:
    return int(GF256(a) + GF256(b))


def mul(a: int, b: int) -> int:
    return int(GF256(a) * GF256(b))


def inv(a: int) -> int:
    if a == 0:
        raise ZeroInverseError("0 has no multiplicative inverse")
    return int(np.reciprocal(GF256(a)))


def field_ops(a: int, b: int) -> FieldOps:
    """Sum, product, and the inverse of a (None for a = 0)."""
    return FieldOps(add=add(a, b), mul=mul(a, b), inv=inv(a) if a else None)


@dataclasses.dataclass(frozen=True)
class SinkCode:
    j: int
    sink_id: str
    streams: Tuple[int, ...]
    terminals: Tuple[Edge, ...]


@dataclasses.dataclass(frozen=True)
class LinearCode:
    """Global coding vectors (length n̄, one per used edge) and local coefficients.

    Codes read back from a file carry no local coefficients.
    """

    nbar: int
    coding_vector: Dict[Edge, Tuple[int, ...]]
    local_coeffs: Dict[CoeffKey, int]
    sinks: Dict[int, SinkCode]

    def vector(self, edge: Edge) -> galois.FieldArray:
        return GF256(list(self.coding_vector[edge]))


@dataclasses.dataclass(frozen=True)
class TransferMatrix:
    j: int
    streams: Tuple[int, ...]
    terminals: Tuple[Edge, ...]
    matrix: galois.FieldArray

    @property
    def invertible(self) -> bool:
        return int(np.linalg.matrix_rank(self.matrix)) == len(self.streams)

    def rows(self) -> List[List[int]]:
        return [[int(x) for x in row] for row in self.matrix]


@dataclasses.dataclass(frozen=True)
class SimulationReport:
    trials: int
    exact: Dict[str, int]

    @property
    def rate(self) -> float:
        if not self.trials or not self.exact:
            return 1.0
        return min(self.exact.values()) / self.trials

    @property
    def perfect(self) -> bool:
        return all(count == self.trials for count in self.exact.values())


def _input_key(value: Input) -> Tuple[int, int]:
    if isinstance(value, Edge):
        return (1, value.index)
    return (0, value)


def _transitions(d: PathDecomposition, a: StreamAssignment) -> List[CoeffKey]:
    keys: Set[CoeffKey] = set()
    for path in d.paths():
        first = path.edges[0]
        keys.add((first.tail, a.f[path.id], first))
        for inbound, outbound in zip(path.edges, path.edges[1:]):
            keys.add((inbound.head, inbound, outbound))
    return sorted(keys, key=lambda key: (key[2].index, _input_key(key[1]), key[0]))


def _coded_edges(g: NetworkInstance, keys: List[CoeffKey]) -> List[Edge]:
    order = topological_order(g)
    return order.sorted_edges({key[2] for key in keys})


def _propagate(
    g: NetworkInstance, nbar: int, coeffs: Dict[CoeffKey, int]
) -> Dict[Edge, Tuple[int, ...]]:
    incoming: Dict[Edge, List[Tuple[Input, int]]] = {}
    for (_, source, out), coefficient in coeffs.items():
        incoming.setdefault(out, []).append((source, coefficient))

    vectors: Dict[Edge, galois.FieldArray] = {}
    for edge in _coded_edges(g, list(coeffs)):
        total = GF256.Zeros(nbar)
        for source, coefficient in incoming[edge]:
            if isinstance(source, Edge):
                contribution = vectors[source]
            else:
                contribution = GF256.Zeros(nbar)
                contribution[source - 1] = 1
            total = total + GF256(coefficient) * contribution
        vectors[edge] = total
    return {edge: tuple(int(x) for x in vector) for edge, vector in vectors.items()}


def _sink_codes(
    g: NetworkInstance, d: PathDecomposition, a: StreamAssignment
) -> Dict[int, SinkCode]:
    sinks = {}
    for j in range(1, d.sink_count + 1):
        paths = d.sink_paths(j)
        sinks[j] = SinkCode(
            j=j,
            sink_id=g.sinks[j - 1],
            streams=tuple(sorted(a.f[path.id] for path in paths)),
            terminals=tuple(path.edges[-1] for path in paths),
        )
    return sinks


def transfer_matrix(code: LinearCode, j: int) -> TransferMatrix:
    """The sink's terminal vectors restricted to the streams it receives.

    Raises:
        SupportError: a terminal vector involves a stream the sink does not get.
    """
    sink = code.sinks[j]
    columns = [stream - 1 for stream in sink.streams]
    rows = []
    for edge in sink.terminals:
        vector = code.vector(edge)
        stray = [i + 1 for i, x in enumerate(vector) if int(x) and i not in columns]
        if stray:
            raise SupportError(
                f"sink {sink.sink_id}: terminal edge {edge} carries stream(s) {stray} "
                f"outside {list(sink.streams)}"
            )
        rows.append([int(vector[c]) for c in columns])
    return TransferMatrix(
        j=j, streams=sink.streams, terminals=sink.terminals, matrix=GF256(rows)
    )


def synthesize_code(
    g: NetworkInstance,
    d: PathDecomposition,
    a: StreamAssignment,
    seed: int = 0,
    coefficient: Optional[int] = None,
    attempts: int = MAX_ATTEMPTS,
) -> LinearCode:
    """Builds a code under which every sink can decode its streams.

    Local coefficients are drawn uniformly from the nonzero elements, so no
    input is ever dropped at a node; draws repeat until every transfer
    matrix is invertible. With `coefficient` given every local coefficient
    takes that value instead (1 gives the plain XOR code).

    Raises:
        ValidationError: the assignment is not saturating and decodable.
        SynthesisError: no decodable code within `attempts` draws.
    """
    verdict = verify_assignment(g, d, contamination_sets(g, d), a)
    if not verdict.accepted:
        raise ValidationError(
            "assignment is not decodable: " + "; ".join(v.message for v in verdict.violations)
        )
    keys = _transitions(d, a)
    sinks = _sink_codes(g, d, a)
    rng = np.random.default_rng(seed)

    tries = 1 if coefficient is not None else attempts
    for attempt in range(1, tries + 1):
        if coefficient is not None:
            if not 1 <= coefficient <= 255:
                raise ValidationError(f"local coefficient must be in 1..255, got {coefficient}")
            values = [coefficient] * len(keys)
        else:
            values = [int(x) for x in rng.integers(1, 256, size=len(keys))]
        coeffs = dict(zip(keys, values))
        code = LinearCode(
            nbar=a.nbar,
            coding_vector=_propagate(g, a.nbar, coeffs),
            local_coeffs=coeffs,
            sinks=sinks,
        )
        if all(transfer_matrix(code, j).invertible for j in sinks):
            logger.debug(f"code synthesized on attempt {attempt} ({len(keys)} coefficients)")
            return code
        logger.debug(f"attempt {attempt}: some transfer matrix is singular")

    logger.warning(f"no decodable code after {tries} attempt(s); field may be too small")
    raise SynthesisError(f"no decodable code after {tries} attempt(s)")


def check_consistency(g: NetworkInstance, code: LinearCode) -> bool:
    """Recomputes global vectors from the local coefficients and compares."""
    if not code.local_coeffs:
        return False
    return _propagate(g, code.nbar, code.local_coeffs) == code.coding_vector


def stream_support(
    g: NetworkInstance, d: PathDecomposition, a: StreamAssignment
) -> Dict[Edge, FrozenSet[int]]:
    """Streams each used edge could carry, ignoring algebraic cancellation."""
    keys = _transitions(d, a)
    support: Dict[Edge, Set[int]] = {}
    for edge in _coded_edges(g, keys):
        support[edge] = set()
    for edge in _coded_edges(g, keys):
        for _, source, out in keys:
            if out != edge:
                continue
            if isinstance(source, Edge):
                support[edge] |= support[source]
            else:
                support[edge].add(source)
    return {edge: frozenset(streams) for edge, streams in support.items()}


def edge_symbols(code: LinearCode, messages: galois.FieldArray) -> Dict[Edge, galois.FieldArray]:
    """Symbol on every coded edge for each row of `messages` (trials x n̄)."""
    return {edge: messages @ code.vector(edge) for edge in code.coding_vector}


def decode(code: LinearCode, j: int, received: galois.FieldArray) -> galois.FieldArray:
    """Solves the sink's transfer system; rows of `received` are trials."""
    matrix = transfer_matrix(code, j).matrix
    try:
        inverse = np.linalg.inv(matrix)
    except np.linalg.LinAlgError as exc:
        raise SynthesisError(f"sink {code.sinks[j].sink_id} cannot decode: {exc}") from exc
    return received @ inverse.T


def simulate(
    code: LinearCode,
    trials: int,
    seed: int = 0,
    messages: Optional[np.ndarray] = None,
) -> SimulationReport:
    """Sends random stream symbols through the code and decodes at each sink.

    Args:
        messages: explicit trials x n̄ symbols; drawn from the seed when None.
    """
    if messages is None:
        rng = np.random.default_rng(seed)
        messages = rng.integers(0, 256, size=(trials, code.nbar))
    sent = GF256(np.asarray(messages, dtype=int).reshape(-1, code.nbar))
    symbols = edge_symbols(code, sent)

    exact = {}
    for j, sink in sorted(code.sinks.items()):
        received = np.stack([symbols[edge] for edge in sink.terminals], axis=1)
        decoded = decode(code, j, GF256(received))
        expected = sent[:, [stream - 1 for stream in sink.streams]]
        exact[sink.sink_id] = int(np.all(decoded == expected, axis=1).sum())
    report = SimulationReport(trials=sent.shape[0], exact=exact)
    logger.debug(f"simulated {report.trials} trial(s): {report.exact}")
    return report


def dump_code(code: LinearCode) -> str:
    edges = {
        edge.key: bytes(code.coding_vector[edge]).hex()
        for edge in sorted(code.coding_vector, key=lambda e: e.index)
    }
    sinks = {
        sink.sink_id: {
            "streams": list(sink.streams),
            "terminals": [edge.key for edge in sink.terminals],
        }
        for _, sink in sorted(code.sinks.items())
    }
    data = {"field": FIELD_NAME, "nbar": code.nbar, "edges": edges, "sinks": sinks}
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def load_code(g: NetworkInstance, text: Union[str, bytes]) -> LinearCode:
    """Reads a code file written by dump_code for network g."""
    try:
        data: Dict[str, Any] = json.loads(text)
    except ValueError as exc:
        raise ValidationError(f"code file is not JSON: {exc}") from exc
    if data.get("field") != FIELD_NAME:
        raise ValidationError(f"unsupported field {data.get('field')!r}, expected {FIELD_NAME}")
    try:
        nbar = int(data["nbar"])
        by_key = {edge.key: edge for edge in g.edges}
        vectors = {}
        for key, hexits in data["edges"].items():
            if key not in by_key:
                raise ValidationError(f"code names unknown edge {key}")
            vector = tuple(bytes.fromhex(hexits))
            if len(vector) != nbar:
                raise ValidationError(f"edge {key}: expected {2 * nbar} hex digits")
            vectors[by_key[key]] = vector
        sinks = {}
        for sink_id, entry in data["sinks"].items():
            j = g.sink_index(sink_id)
            terminals = []
            for key in entry["terminals"]:
                if key not in vectors:
                    raise ValidationError(f"sink {sink_id}: terminal {key} has no vector")
                terminals.append(by_key[key])
            streams = tuple(int(s) for s in entry["streams"])
            if len(streams) != len(terminals):
                raise ValidationError(f"sink {sink_id}: streams and terminals differ in number")
            sinks[j] = SinkCode(j=j, sink_id=sink_id, streams=streams, terminals=tuple(terminals))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ValidationError(f"malformed code file: {exc}") from exc
    return LinearCode(nbar=nbar, coding_vector=vectors, local_coeffs={}, sinks=sinks)
