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

import json

import numpy as np
import pytest

from nudcode import flows, netcode, netgraph, solver
from nudcode.errors import SupportError, SynthesisError, ValidationError, ZeroInverseError
from nudcode.netgraph import Edge
from . import util

GF = netcode.GF256


def _butterfly():
    g, d = util.load_instance("butterfly.net")
    f = {(1, 1): 1, (1, 2): 2, (2, 1): 1, (2, 2): 2}
    return g, d, solver.StreamAssignment(f=f, nbar=2, rates=d.rates)


def _solved(name):
    g, d = util.load_instance(name)
    report = solver.solve(g, paths=d)
    assert report.outcome == solver.SOLUTION
    return g, d, report.assignment


def test_field_addition_is_xor():
    a = np.arange(256)[:, None]
    b = np.arange(256)[None, :]
    assert np.array_equal(GF(a) + GF(b), GF(np.bitwise_xor(a, b)))


def test_field_multiplication_axioms():
    elements = GF.elements
    a, b = elements[:, None], elements[None, :]

    assert np.array_equal(a * b, b * a)
    assert np.all(elements * GF(1) == elements)
    assert np.all(elements * GF(0) == 0)
    nonzero = elements[1:]
    assert np.all(nonzero * np.reciprocal(nonzero) == 1)
    for c in (GF(0x02), GF(0x53), GF(0xFF)):
        assert np.array_equal(c * (a + b), c * a + c * b)
        assert np.array_equal((a * b) * c, a * (b * c))


def test_aes_polynomial_products():
    assert netcode.mul(0x02, 0x80) == 0x1B
    assert netcode.mul(0x53, 0xCA) == 0x01
    assert netcode.inv(0x53) == 0xCA
    assert netcode.add(0x57, 0x83) == 0xD4
    assert netcode.mul(0x57, 0x83) == 0xC1


def test_zero_has_no_inverse():
    with pytest.raises(ZeroInverseError):
        netcode.inv(0)
    assert issubclass(ZeroInverseError, ZeroDivisionError)
    assert netcode.field_ops(0, 7) == netcode.FieldOps(add=7, mul=0, inv=None)
    assert netcode.field_ops(0x53, 1).inv == 0xCA


def test_all_ones_butterfly_code():
    g, d, a = _butterfly()
    code = netcode.synthesize_code(g, d, a, coefficient=1)

    by_key = {edge.key: vector for edge, vector in code.coding_vector.items()}
    assert by_key["s->u#0"] == (1, 0)
    assert by_key["s->v#1"] == (0, 1)
    assert by_key["w->x#5"] == (1, 1)
    assert set(code.local_coeffs.values()) == {1}
    assert netcode.transfer_matrix(code, 1).rows() == [[1, 0], [1, 1]]
    assert netcode.transfer_matrix(code, 2).rows() == [[1, 1], [0, 1]]
    assert netcode.simulate(code, 50, seed=3).perfect


def test_random_code_decodes_every_trial():
    g, d, a = _butterfly()
    code = netcode.synthesize_code(g, d, a, seed=11)

    assert all(value != 0 for value in code.local_coeffs.values())
    assert netcode.check_consistency(g, code)
    result = netcode.simulate(code, 1000, seed=5)
    assert result.trials == 1000
    assert result.exact == {"t1": 1000, "t2": 1000}
    assert result.rate == 1.0


def test_zero_message_decodes_to_zero():
    g, d, a = _butterfly()
    code = netcode.synthesize_code(g, d, a, seed=2)

    assert netcode.simulate(code, 1, messages=np.zeros((1, 2), dtype=int)).perfect
    symbols = netcode.edge_symbols(code, GF.Zeros((1, 2)))
    assert all(np.all(symbol == 0) for symbol in symbols.values())


def test_decode_recovers_streams():
    g, d, a = _butterfly()
    code = netcode.synthesize_code(g, d, a, seed=4)
    sent = GF([[0x10, 0xEE], [0x00, 0x01]])

    symbols = netcode.edge_symbols(code, sent)
    sink = code.sinks[2]
    received = GF(np.stack([symbols[edge] for edge in sink.terminals], axis=1))
    assert np.array_equal(netcode.decode(code, 2, received), sent)


@pytest.mark.parametrize(
    "name", ["butterfly.net", "extended_butterfly.net", "non_berge.net", "chain.net"]
)
def test_solved_fixtures_get_decodable_codes(name):
    g, d, a = _solved(name)
    support = netcode.stream_support(g, d, a)
    for seed in (1, 2, 3):
        code = netcode.synthesize_code(g, d, a, seed=seed)

        assert netcode.simulate(code, 200, seed=seed).perfect
        for edge, vector in code.coding_vector.items():
            nonzero = {i + 1 for i, x in enumerate(vector) if x}
            assert nonzero <= support[edge]


def test_stream_support_stays_within_received_streams():
    g, d, a = _solved("non_berge.net")
    support = netcode.stream_support(g, d, a)

    for j in range(1, d.sink_count + 1):
        received = set(a.streams_of(j))
        for path in d.sink_paths(j):
            assert support[path.edges[-1]] <= received


def test_synthesis_refuses_undecodable_assignment():
    g, d = util.load_instance("counterexample.net")
    a = solver.StreamAssignment(f={(1, 1): 1, (2, 1): 1, (2, 2): 2}, nbar=2, rates=d.rates)
    with pytest.raises(ValidationError, match="not decodable"):
        netcode.synthesize_code(g, d, a)


def test_synthesis_rejects_zero_coefficient():
    g, d, a = _butterfly()
    with pytest.raises(ValidationError):
        netcode.synthesize_code(g, d, a, coefficient=0)


def test_decode_fails_on_singular_transfer_matrix():
    g, d = util.load_instance("butterfly.net")
    a = solver.StreamAssignment(
        f={(1, 1): 1, (1, 2): 2, (2, 1): 1, (2, 2): 2}, nbar=2, rates=d.rates
    )
    code = netcode.synthesize_code(g, d, a, coefficient=1)
    singular = netcode.LinearCode(
        nbar=2,
        coding_vector={edge: (1, 1) for edge in code.coding_vector},
        local_coeffs={},
        sinks=code.sinks,
    )
    assert not netcode.transfer_matrix(singular, 1).invertible
    with pytest.raises(SynthesisError):
        netcode.decode(singular, 1, GF.Zeros((1, 2)))


def test_transfer_matrix_support_error():
    terminal = Edge("a", "t", 0)
    code = netcode.LinearCode(
        nbar=2,
        coding_vector={terminal: (1, 1)},
        local_coeffs={},
        sinks={1: netcode.SinkCode(j=1, sink_id="t", streams=(1,), terminals=(terminal,))},
    )
    with pytest.raises(SupportError, match="outside"):
        netcode.transfer_matrix(code, 1)


def test_dump_and_load_code():
    g, d, a = _butterfly()
    code = netcode.synthesize_code(g, d, a, seed=9)
    text = netcode.dump_code(code)

    data = json.loads(text)
    assert data["field"] == "GF256/0x11B"
    assert data["nbar"] == 2
    assert data["sinks"]["t1"]["terminals"] == ["u->t1#4", "x->t1#6"]

    loaded = netcode.load_code(g, text)
    assert loaded.coding_vector == code.coding_vector
    assert loaded.sinks == code.sinks
    assert not netcode.check_consistency(g, loaded)
    assert netcode.simulate(loaded, 20).perfect


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        '{"field": "GF16", "nbar": 2, "edges": {}, "sinks": {}}',
        '{"field": "GF256/0x11B", "nbar": 2, "edges": {"a->b#0": "0101"}, "sinks": {}}',
        '{"field": "GF256/0x11B", "nbar": 2, "edges": {"s->u#0": "01"}, "sinks": {}}',
        '{"field": "GF256/0x11B", "nbar": 2, "edges": {"s->u#0": "zz00"}, "sinks": {}}',
        '{"field": "GF256/0x11B", "edges": {}, "sinks": {}}',
    ],
)
def test_load_code_rejects_malformed_files(text):
    g = util.load_network("butterfly.net")
    with pytest.raises(ValidationError):
        netcode.load_code(g, text)


SYMMETRIC = """
source s
sink t1
sink t2
edge s a1
edge s b1
edge s c1
edge s d1
edge a1 m1
edge c1 m1
edge m1 n1
edge n1 t1
edge n1 t2
edge b1 m2
edge d1 m2
edge m2 n2
edge n2 t1
edge n2 t2
"""

SYMMETRIC_PATHS = """
path t1 s a1 m1 n1 t1
path t1 s b1 m2 n2 t1
path t2 s c1 m1 n1 t2
path t2 s d1 m2 n2 t2
"""


def test_all_ones_code_can_be_singular():
    g = netgraph.parse_network(SYMMETRIC)
    d = flows.parse_paths(g, SYMMETRIC_PATHS)
    f = {(1, 1): 1, (1, 2): 2, (2, 1): 2, (2, 2): 1}
    a = solver.StreamAssignment(f=f, nbar=2, rates=d.rates)

    with pytest.raises(SynthesisError, match="1 attempt"):
        netcode.synthesize_code(g, d, a, coefficient=1)
    code = netcode.synthesize_code(g, d, a, seed=0)
    assert netcode.simulate(code, 100).perfect
