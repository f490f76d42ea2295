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

"""Text and JSON renderings of command results."""

import json
import pathlib
from typing import Any, Dict, Optional, Sequence

import jinja2

from nudcode.colorgraph import ColoringGraph, Witness
from nudcode.contamination import ContaminationReport
from nudcode.flows import PathDecomposition
from nudcode.solver import SolveReport, Verdict

SCHEMA = 1
TEMPLATES_DIR = pathlib.Path(__file__).parent / "templates"


def path_label(path_id: Sequence[int]) -> str:
    return f"{path_id[0]}.{path_id[1]}"


def berge_word(berge: Optional[bool]) -> str:
    if berge is None:
        return "unknown"
    return "yes" if berge else "no"


def _make_env() -> jinja2.Environment:
    env = jinja2.Environment(
        loader=jinja2.FileSystemLoader(str(TEMPLATES_DIR)),
        autoescape=False,
        keep_trailing_newline=True,
        trim_blocks=True,
        lstrip_blocks=True,
    )
    env.filters["path_label"] = path_label
    env.filters["berge"] = berge_word
    return env


_env = _make_env()


def render(template_name: str, **params: Any) -> str:
    return _env.get_template(template_name).render(**params)


def dumps(payload: Dict[str, Any]) -> str:
    """Deterministic JSON with the schema version stamped in."""
    return json.dumps(dict(payload, schema=SCHEMA), indent=2, sort_keys=True) + "\n"


def witness_json(witness: Optional[Witness]) -> Optional[Dict[str, Any]]:
    if witness is None:
        return None
    return {"kind": witness.kind, "length": witness.length, "vertices": list(witness.vertices)}


def contamination_json(r: ContaminationReport) -> Dict[str, Any]:
    return {
        "contamination": {
            path_label(path_id): [path_label(t) for t in sorted(targets)]
            for path_id, targets in sorted(r.sets.items())
        },
        "m": [list(row) for row in r.m],
        "overlaps": {
            f"{path_label(a)}|{path_label(b)}": [edge.key for edge in edges]
            for (a, b), edges in sorted(r.overlap_edges.items())
        },
    }


def solve_json(report: SolveReport) -> Dict[str, Any]:
    final = report.final
    return {
        "name": report.name,
        "outcome": report.outcome,
        "n": report.decomposition.n,
        "nbar": final.nbar,
        "rates": list(report.rates),
        "omega": final.omega,
        "berge": final.berge,
        "witness": witness_json(final.witness),
        "attempts": [
            {
                "nbar": attempt.nbar,
                "omega": attempt.omega,
                "outcome": attempt.outcome,
                "method": attempt.method,
                "berge": attempt.berge,
            }
            for attempt in report.attempts
        ],
        "assignment": report.assignment.to_json()["assignment"] if report.assignment else None,
        "diagnostic": report.diagnostic,
    }


def solve_text(report: SolveReport) -> str:
    return render("solve.txt.j2", report=report, final=report.final)


def analyze_json(
    d: PathDecomposition,
    r: ContaminationReport,
    ghat: ColoringGraph,
    omega: int,
    berge: Optional[bool],
    witness: Optional[Witness],
) -> Dict[str, Any]:
    payload = {
        "rates": list(d.rates),
        "n": d.n,
        "nbar": ghat.nbar,
        "paths": {path.label: path.nodes for path in d.paths()},
        "graph": ghat.stats(),
        "omega": omega,
        "berge": berge,
        "witness": witness_json(witness),
    }
    payload.update(contamination_json(r))
    return payload


def analyze_text(**params: Any) -> str:
    return render("analyze.txt.j2", **params)


def verdict_json(verdict: Verdict) -> Dict[str, Any]:
    return {
        "accepted": verdict.accepted,
        "violations": [
            {
                "kind": v.kind,
                "sink": v.sink,
                "stream": v.stream,
                "path": path_label(v.path),
                "message": v.message,
            }
            for v in verdict.violations
        ],
    }
