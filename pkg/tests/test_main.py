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
import pathlib

import pytest
from click.testing import CliRunner

from nudcode import __version__, config
from nudcode.__main__ import cli, run
from . import util


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch, tmp_path):
    monkeypatch.delenv("NUDCODE_CONFIG", raising=False)
    monkeypatch.delenv("NUDCODE_SEED", raising=False)
    config.load_environment_config.cache_clear()
    with util.chdir(tmp_path):
        yield
    config.load_environment_config.cache_clear()


def _fixture(name):
    return str(util.fixture_path(name))


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_no_arguments_prints_usage(capsys):
    assert run([]) == 64
    assert "Usage:" in capsys.readouterr().out


@pytest.mark.parametrize(
    "command",
    [
        [],
        ["solve"],
        ["analyze"],
        ["reduce"],
        ["verify"],
        ["simulate"],
        ["oracle"],
        ["gen"],
        ["export-dot"],
    ],
)
def test_every_command_has_help(command, capsys):
    assert run(command + ["--help"]) == 0
    assert "Usage:" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        ["solve"],
        ["solve", "missing.net"],
        ["solve", "--nbar", "lots", "BUTTERFLY"],
        ["solve", "--timeout", "0", "BUTTERFLY"],
        ["solve", "--nbar", "1", "BUTTERFLY"],
        ["oracle", "--nbar", "1", "BUTTERFLY"],
    ],
)
def test_usage_errors(argv):
    argv = [_fixture("butterfly.net") if arg == "BUTTERFLY" else arg for arg in argv]
    assert run(argv) == 64


def test_solve_butterfly_json(capsys):
    assert run(["solve", _fixture("butterfly.net"), "--format", "json"]) == 0
    payload = _json(capsys)

    assert payload["schema"] == 1
    assert payload["outcome"] == "solution"
    assert payload["rates"] == [2, 2]
    assert payload["nbar"] == 2
    assert payload["berge"] is True
    assert sorted(payload["assignment"]) == ["1.1", "1.2", "2.1", "2.2"]


def test_solve_butterfly_text(capsys):
    assert run(["solve", _fixture("butterfly.net")]) == 0
    out = capsys.readouterr().out

    assert out.startswith("butterfly.net: solution\n")
    assert "n̄ = 2: ω = 2, berge yes, bipartite -> solution" in out
    assert "p1.1 -> " in out


def test_solve_counterexample_auto(capsys):
    argv = ["solve", _fixture("counterexample.net"), "--nbar", "auto", "--format", "json"]
    assert run(argv) == 2
    payload = _json(capsys)

    assert payload["outcome"] == "infeasible"
    assert payload["diagnostic"] == "ω exceeds n̄ for all n̄ ≤ 5"
    assert [attempt["omega"] for attempt in payload["attempts"]] == [3, 4, 5, 6]
    assert payload["assignment"] is None


def test_solve_batch(capsys):
    argv = [
        "solve",
        _fixture("butterfly.net"),
        _fixture("counterexample.net"),
        "--format",
        "json",
    ]
    assert run(argv) == 2
    results = _json(capsys)["results"]
    assert [result["name"] for result in results] == ["butterfly.net", "counterexample.net"]


def test_solve_rejects_paths_with_several_files():
    argv = ["solve", _fixture("butterfly.net"), _fixture("chain.net")]
    argv += ["--paths", _fixture("chain.paths")]
    assert run(argv) == 64


def test_solve_malformed_network_is_a_data_error(tmp_path):
    bad = tmp_path / "bad.net"
    bad.write_text("source s\nsink t\nedge s\n")
    assert run(["solve", str(bad)]) == 65


def test_solve_emits_dot_files(tmp_path):
    assert run(["solve", _fixture("butterfly.net"), "--emit-dot", "drawings"]) == 0

    assert (tmp_path / "drawings" / "butterfly.dot").read_text().startswith("// nudcode")
    assert "cluster_1" in (tmp_path / "drawings" / "butterfly.coloring.dot").read_text()


def test_code_round_trip_through_the_command_line(tmp_path, capsys):
    net = _fixture("extended_butterfly.net")
    assert run(["solve", net, "--format", "json", "--emit-code", "code.json"]) == 0
    (tmp_path / "solution.json").write_text(capsys.readouterr().out)

    assert run(["simulate", net, "code.json", "--trials", "100", "--format", "json"]) == 0
    simulated = _json(capsys)
    assert simulated["exact"] == {"t1": 100, "t2": 100}
    assert simulated["rate"] == 1.0

    assert run(["verify", net, "solution.json", "--code", "code.json", "--format", "json"]) == 0
    verified = _json(capsys)
    assert verified["accepted"] is True
    assert [tm["sink"] for tm in verified["transfer_matrices"]] == ["t1", "t2"]
    assert all(tm["invertible"] for tm in verified["transfer_matrices"])


def test_verify_rejects_leaking_assignment(tmp_path, capsys):
    solution = {"nbar": 2, "assignment": {"1.1": 1, "2.1": 1, "2.2": 2}}
    (tmp_path / "bad.json").write_text(json.dumps(solution))

    assert run(["verify", _fixture("counterexample.net"), "bad.json"]) == 2
    out = capsys.readouterr().out
    assert out.startswith("rejected\n")
    assert "[decodability]" in out


def test_verify_accepts_a_coloring(tmp_path, capsys):
    colors = {"v1.1": 1, "v1.2": 2, "v2.1": 1, "v2.2": 2}
    (tmp_path / "coloring.json").write_text(json.dumps({"budget": 2, "colors": colors}))

    assert run(["verify", _fixture("butterfly.net"), "coloring.json", "--format", "json"]) == 0
    payload = _json(capsys)
    assert payload["proper"] is True
    assert payload["accepted"] is True


def test_verify_rejects_improper_coloring(tmp_path, capsys):
    colors = {"v1.1": 1, "v1.2": 1, "v2.1": 1, "v2.2": 2}
    (tmp_path / "coloring.json").write_text(json.dumps({"budget": 2, "colors": colors}))

    assert run(["verify", _fixture("butterfly.net"), "coloring.json"]) == 2
    assert "not a proper coloring" in capsys.readouterr().out


def test_verify_coloring_below_n_is_a_data_error(tmp_path):
    colors = {"v1.1": 1, "v2.1": 1}
    (tmp_path / "coloring.json").write_text(json.dumps({"budget": 1, "colors": colors}))

    assert run(["verify", _fixture("butterfly.net"), "coloring.json"]) == 65


@pytest.mark.parametrize(
    "content", ["{not json", "[1, 2]", '{"nbar": 2, "assignment": {"1.1": 1}}']
)
def test_verify_malformed_solution(tmp_path, content):
    (tmp_path / "solution.json").write_text(content)
    assert run(["verify", _fixture("butterfly.net"), "solution.json"]) == 65


def test_analyze_non_berge(capsys):
    argv = [
        "analyze",
        _fixture("non_berge.net"),
        "--paths",
        _fixture("non_berge.paths"),
        "--format",
        "json",
    ]
    assert run(argv) == 0
    payload = _json(capsys)

    assert payload["rates"] == [2, 2, 2, 3]
    assert payload["omega"] == 3
    assert payload["berge"] is False
    assert payload["witness"]["kind"] == "hole"
    assert sorted(payload["witness"]["vertices"]) == ["v1.1", "v2.1", "v2.2", "w1.1", "w3.1"]
    assert payload["contamination"]["1.1"] == ["2.1", "3.2"]
    assert payload["graph"] == {"vertices": 12, "edges": 19, "fictitious": 3}


def test_analyze_text(capsys):
    assert run(["analyze", _fixture("butterfly.net")]) == 0
    out = capsys.readouterr().out

    assert "p1.2: s v w x t1" in out
    assert "D1.2 = {p2.1, p2.2}" in out
    assert "ω = 2, berge yes" in out


@pytest.mark.parametrize(["colors", "code"], [(3, 0), (2, 2)])
def test_reduce_then_oracle_on_five_cycle(tmp_path, colors, code, capsys):
    text = util.fixture_path("c5.col").read_text().replace("colors 3", f"colors {colors}")
    (tmp_path / "c5.col").write_text(text)

    assert run(["reduce", "c5.col", "-o", "c5.net", "--mapping-out", "map.json"]) == 0
    mapping = json.loads((tmp_path / "map.json").read_text())
    assert mapping["vertex_to_sink"]["v1"] == "tv1"

    capsys.readouterr()
    assert run(["oracle", "c5.net", "--paths", "c5.paths", "--format", "json"]) == code
    payload = _json(capsys)
    assert payload["n"] == colors
    assert payload["feasible"] is (code == 0)
    assert payload["method"] == "exact coloring"


@pytest.mark.parametrize("colors", [2, 3])
def test_reduce_check_compares_with_chromatic_number(tmp_path, colors):
    text = util.fixture_path("c5.col").read_text().replace("colors 3", f"colors {colors}")
    (tmp_path / "c5.col").write_text(text)

    assert run(["reduce", "c5.col", "-o", "c5.net", "--check"]) == 0


def test_reduce_check_respects_the_vertex_cap(tmp_path):
    (tmp_path / "small.yaml").write_text("oracle_max_vertices: 4\n")
    (tmp_path / "c5.col").write_text(util.fixture_path("c5.col").read_text())

    argv = ["--config", "small.yaml", "reduce", "c5.col", "-o", "c5.net", "--check"]
    assert run(argv) == 65
    assert (tmp_path / "c5.net").exists()


def test_oracle_brute_force(capsys):
    assert run(["oracle", _fixture("counterexample.net"), "--nbar", "3"]) == 2
    assert capsys.readouterr().out == "brute force: infeasible with n̄ = 3 (n = 2)\n"


def test_gen_writes_corpus_files(tmp_path, capsys):
    assert run(["gen", "cycle", "--length", "7", "--out", "corpus"]) == 0
    assert capsys.readouterr().out == str(pathlib.Path("corpus", "c7.col")) + "\n"
    assert (tmp_path / "corpus" / "c7.col").read_text().startswith("vertex v1\n")


def test_export_dot(capsys):
    assert run(["export-dot", _fixture("butterfly.net")]) == 0
    assert "digraph network" in capsys.readouterr().out

    assert run(["export-dot", _fixture("butterfly.net"), "--coloring-graph", "--nbar", "3"]) == 0
    assert "style=dashed" in capsys.readouterr().out


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("NUDCODE_SEED", "-3")
    assert run(["solve", _fixture("butterfly.net")]) == 65

    monkeypatch.setenv("NUDCODE_SEED", "12")
    assert run(["solve", _fixture("butterfly.net")]) == 0


def test_config_file_sets_defaults(capsys):
    assert run(["--config", _fixture("json_format.yaml"), "solve", _fixture("butterfly.net")]) == 0
    assert _json(capsys)["rates"] == [2, 2]


def test_config_file_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("NUDCODE_CONFIG", _fixture("json_format.yaml"))
    assert run(["solve", _fixture("butterfly.net")]) == 0
    assert _json(capsys)["outcome"] == "solution"


def test_bad_config_file_is_a_data_error():
    assert run(["--config", _fixture("bad_option.yaml"), "solve", _fixture("butterfly.net")]) == 65


def test_click_runner_sees_stdout_only():
    runner = CliRunner()
    result = runner.invoke(cli, ["solve", _fixture("butterfly.net"), "--format", "json"])

    assert result.exit_code == 0
    assert json.loads(result.stdout)["outcome"] == "solution"


def test_version(capsys):
    assert run(["--version"]) == 0
    assert capsys.readouterr().out == f"{__version__}\n"
