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
import os
import pathlib
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

import click

from nudcode import __version__
from nudcode import config as nudconfig
from nudcode import coloring, colorgraph, netcode, netgraph, reduction, report, solver
from nudcode.contamination import contamination_sets
from nudcode.errors import (
    BudgetError,
    CapError,
    ColoringTimeout,
    HoleSearchTimeout,
    NudcodeError,
    ShapeError,
    SolverInvariantError,
    SupportError,
    SynthesisError,
    ValidationError,
)
from nudcode.flows import PathDecomposition, load_paths, serialize_paths
from nudcode.log import logger, set_verbosity

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_UNKNOWN = 3
EXIT_USAGE = 64
EXIT_DATA = 65

_OUTCOME_CODES = {
    solver.SOLUTION: EXIT_OK,
    solver.INFEASIBLE: EXIT_INFEASIBLE,
    solver.UNKNOWN: EXIT_UNKNOWN,
}


def _read_network(path: str) -> netgraph.NetworkInstance:
    with open(path, "rb") as fh:
        try:
            return netgraph.parse_network(fh.read())
        except ValidationError as exc:
            raise ValidationError(f"{path}: {exc}") from exc


def _emit(run_config: nudconfig.RunConfig, payload: Dict[str, Any], text: str) -> None:
    if run_config.format == "json":
        click.echo(report.dumps(payload), nl=False)
    else:
        click.echo(text, nl=False)


def _parse_nbar(value: Optional[str]) -> solver.NbarPolicy:
    if value is None or value == "auto":
        return value
    try:
        return int(value)
    except ValueError:
        raise click.BadParameter(
            f"expected an integer or 'auto', got {value!r}", param_hint="--nbar"
        )


format_option = click.option(
    "--format", "format_", type=click.Choice(["json", "text"]), default=None, help="Output format."
)
seed_option = click.option("--seed", type=click.IntRange(min=0), default=None, help="Random seed.")
timeout_option = click.option(
    "--timeout",
    type=click.FloatRange(min=0, min_open=True),
    default=None,
    help="Seconds allowed for each search.",
)
paths_option = click.option(
    "--paths",
    "paths_file",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="Path override file to use instead of the computed decomposition.",
)


@click.group(help=f"Network coding for non-uniform demands.\n\n{nudconfig.CONFIG_HELP}")
@click.version_option(message="%(version)s", version=__version__)
@click.option("--verbose", "-v", is_flag=True, help="Log every pipeline stage.")
@click.option(
    "--config",
    "config_file",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help=f"YAML file with run defaults (default: ${nudconfig.CONFIG_ENVIRONMENT_VARIABLE} "
    "or ./.nudcode.yaml).",
)
@click.pass_context
def cli(ctx: click.Context, verbose: bool, config_file: Optional[str]) -> None:
    set_verbosity(verbose)
    ctx.obj = nudconfig.load_config(config_file)


@cli.command()
@click.argument("net_files", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--nbar", default=None, help="Stream budget: an integer, or 'auto' for n..n+ceiling.")
@seed_option
@timeout_option
@paths_option
@format_option
@click.option("--jobs", type=click.IntRange(min=1), default=None, help="Solve files in parallel.")
@click.option("--no-berge", is_flag=True, help="Skip the odd hole search.")
@click.option(
    "--emit-dot",
    type=click.Path(file_okay=False),
    default=None,
    help="Directory for DOT drawings of the network and coloring graph.",
)
@click.option(
    "--emit-code",
    type=click.Path(dir_okay=False),
    default=None,
    help="Write a decodable code for the solution to this file.",
)
@click.pass_obj
def solve(
    obj: nudconfig.RunConfig,
    net_files: Tuple[str, ...],
    nbar: Optional[str],
    seed: Optional[int],
    timeout: Optional[float],
    paths_file: Optional[str],
    format_: Optional[str],
    jobs: Optional[int],
    no_berge: bool,
    emit_dot: Optional[str],
    emit_code: Optional[str],
) -> int:
    """Find a saturating, decodable stream assignment."""
    run_config = obj.override(seed=seed, timeout=timeout, format=format_, jobs=jobs)
    policy = _parse_nbar(nbar)
    if len(net_files) > 1 and (paths_file or emit_code):
        raise click.UsageError("--paths and --emit-code take a single network file")

    instances: List[Tuple[str, netgraph.NetworkInstance, Optional[PathDecomposition]]] = []
    for net_file in net_files:
        g = _read_network(net_file)
        d = load_paths(g, paths_file) if paths_file else None
        instances.append((pathlib.Path(net_file).name, g, d))

    reports = solver.solve_many(
        instances,
        jobs=run_config.jobs,
        nbar=policy,
        seed=run_config.seed,
        timeout=run_config.timeout,
        check_berge=not no_berge,
        ceiling=run_config.nbar_ceiling,
    )

    if emit_dot:
        os.makedirs(emit_dot, exist_ok=True)
        for (name, g, _), result in zip(instances, reports):
            stem = pathlib.Path(name).stem
            dot_dir = pathlib.Path(emit_dot)
            (dot_dir / f"{stem}.dot").write_text(netgraph.export_network_dot(g, stem))
            if result.graph is not None:
                (dot_dir / f"{stem}.coloring.dot").write_text(
                    colorgraph.export_coloring_graph_dot(result.graph, f"{stem}_coloring")
                )

    if emit_code and reports[0].assignment is not None:
        _, g, _ = instances[0]
        code = netcode.synthesize_code(
            g, reports[0].decomposition, reports[0].assignment, seed=run_config.seed
        )
        pathlib.Path(emit_code).write_text(netcode.dump_code(code))
        logger.info(f"wrote code to {emit_code}")

    if len(reports) == 1:
        _emit(run_config, report.solve_json(reports[0]), report.solve_text(reports[0]))
    else:
        _emit(
            run_config,
            {"results": [report.solve_json(result) for result in reports]},
            "".join(report.solve_text(result) for result in reports),
        )
    return max(_OUTCOME_CODES[result.outcome] for result in reports)


@cli.command()
@click.argument("net_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--nbar", type=click.IntRange(min=1), default=None, help="Stream budget (default n).")
@paths_option
@timeout_option
@format_option
@click.option("--no-berge", is_flag=True, help="Skip the odd hole search.")
@click.pass_obj
def analyze(
    obj: nudconfig.RunConfig,
    net_file: str,
    nbar: Optional[int],
    paths_file: Optional[str],
    timeout: Optional[float],
    format_: Optional[str],
    no_berge: bool,
) -> int:
    """Print paths, contamination, overlap counts, ω and the Berge verdict."""
    run_config = obj.override(timeout=timeout, format=format_)
    g = _read_network(net_file)
    d = load_paths(g, paths_file)
    r = contamination_sets(g, d)
    ghat = colorgraph.build_coloring_graph(d, r, nbar)
    omega = colorgraph.max_clique_size(ghat)
    berge: Optional[bool] = None
    witness = None
    if not no_berge:
        try:
            berge, witness = colorgraph.is_berge(ghat, timeout=run_config.timeout)
        except HoleSearchTimeout as exc:
            logger.warning(str(exc))
    params = dict(d=d, r=r, ghat=ghat, omega=omega, berge=berge, witness=witness)
    _emit(run_config, report.analyze_json(**params), report.analyze_text(**params))
    return EXIT_OK


@cli.command()
@click.argument("coloring_file", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "-o", "--output", required=True, type=click.Path(dir_okay=False), help="Network file to write."
)
@click.option(
    "--paths-out",
    type=click.Path(dir_okay=False),
    default=None,
    help="Path file to write (default: next to the network, .paths).",
)
@click.option(
    "--mapping-out",
    type=click.Path(dir_okay=False),
    default=None,
    help="JSON file mapping coloring vertices and edges to links and sinks.",
)
@click.option(
    "--check",
    is_flag=True,
    help="Compare the chromatic number with solvability of the network.",
)
@timeout_option
@click.pass_obj
def reduce(
    obj: nudconfig.RunConfig,
    coloring_file: str,
    output: str,
    paths_out: Optional[str],
    mapping_out: Optional[str],
    check: bool,
    timeout: Optional[float],
) -> int:
    """Turn a graph coloring instance into a network."""
    run_config = obj.override(timeout=timeout)
    with open(coloring_file, "rb") as fh:
        c = reduction.parse_coloring(fh.read())
    out = reduction.reduce_coloring_to_network(c)
    pathlib.Path(output).write_bytes(netgraph.serialize_network(out.network))
    paths_target = paths_out or str(pathlib.Path(output).with_suffix(".paths"))
    pathlib.Path(paths_target).write_bytes(serialize_paths(out.paths))
    if mapping_out:
        mapping = {
            "vertex_to_link": {v: edge.key for v, edge in sorted(out.vertex_to_link.items())},
            "edge_to_sink": {f"{a}-{b}": sink for (a, b), sink in sorted(out.edge_to_sink.items())},
            "vertex_to_sink": dict(sorted(out.vertex_to_sink.items())),
        }
        pathlib.Path(mapping_out).write_text(report.dumps(mapping))
    logger.success(
        f"{out.network.sink_count} sinks, {len(out.paths.paths())} paths"
        f" -> {output}, {paths_target}"
    )
    if check:
        verdict = reduction.check_equivalence(
            c, out, max_vertices=run_config.oracle_max_vertices, timeout=run_config.timeout
        )
        if not verdict.consistent:
            raise SolverInvariantError(
                f"χ = {verdict.chromatic} with n = {c.n}, but the network "
                f"{'is' if verdict.feasible else 'is not'} solvable"
            )
        solvable = "solvable" if verdict.feasible else "unsolvable"
        logger.success(f"χ = {verdict.chromatic}; the network is {solvable} with n̄ = {c.n}")
    return EXIT_OK


@cli.command()
@click.argument("net_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("solution_file", type=click.Path(exists=True, dir_okay=False))
@paths_option
@click.option(
    "--code",
    "code_file",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="Also check this code's transfer matrices.",
)
@format_option
@click.pass_obj
def verify(
    obj: nudconfig.RunConfig,
    net_file: str,
    solution_file: str,
    paths_file: Optional[str],
    code_file: Optional[str],
    format_: Optional[str],
) -> int:
    """Check an assignment (or a coloring of the coloring graph)."""
    run_config = obj.override(format=format_)
    g = _read_network(net_file)
    d = load_paths(g, paths_file)
    r = contamination_sets(g, d)
    try:
        data = json.loads(pathlib.Path(solution_file).read_text())
    except ValueError as exc:
        raise ValidationError(f"{solution_file}: not JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValidationError(f"{solution_file}: expected a JSON object")

    payload: Dict[str, Any] = {}
    if "colors" in data:
        given = coloring.Coloring.from_json(data)
        try:
            ghat = colorgraph.build_coloring_graph(d, r, given.budget)
        except BudgetError as exc:
            raise ValidationError(f"{solution_file}: {exc}") from exc
        payload["proper"] = coloring.is_proper(ghat, given)
        if not payload["proper"]:
            payload.update(accepted=False, violations=[])
            _emit(run_config, payload, "rejected\n  not a proper coloring of the coloring graph\n")
            return EXIT_INFEASIBLE
        assignment = solver.assignment_from_coloring(ghat, given)
    else:
        assignment = solver.StreamAssignment.from_json(data, d)
    verdict = solver.verify_assignment(g, d, r, assignment)
    payload.update(report.verdict_json(verdict))
    accepted = verdict.accepted

    matrices = []
    if code_file:
        code = netcode.load_code(g, pathlib.Path(code_file).read_bytes())
        for j, sink in sorted(code.sinks.items()):
            try:
                tm = netcode.transfer_matrix(code, j)
            except SupportError as exc:
                logger.error(str(exc))
                matrices.append(
                    {
                        "sink": sink.sink_id,
                        "streams": list(sink.streams),
                        "invertible": False,
                        "rows": [],
                    }
                )
                accepted = False
                continue
            matrices.append(
                {
                    "sink": sink.sink_id,
                    "streams": list(tm.streams),
                    "invertible": tm.invertible,
                    "rows": tm.rows(),
                }
            )
            accepted = accepted and tm.invertible
        payload["transfer_matrices"] = matrices
    payload["accepted"] = accepted

    _emit(run_config, payload, report.render("verify.txt.j2", verdict=verdict, matrices=matrices))
    return EXIT_OK if accepted else EXIT_INFEASIBLE


@cli.command()
@click.argument("net_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("code_file", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--trials", type=click.IntRange(min=1), default=None, help="Number of random messages."
)
@seed_option
@format_option
@click.pass_obj
def simulate(
    obj: nudconfig.RunConfig,
    net_file: str,
    code_file: str,
    trials: Optional[int],
    seed: Optional[int],
    format_: Optional[str],
) -> int:
    """Send random symbols through a code and decode them at every sink."""
    run_config = obj.override(trials=trials, seed=seed, format=format_)
    g = _read_network(net_file)
    code = netcode.load_code(g, pathlib.Path(code_file).read_bytes())
    result = netcode.simulate(code, run_config.trials, seed=run_config.seed)
    payload = {"trials": result.trials, "exact": result.exact, "rate": result.rate}
    text = report.render("simulate.txt.j2", trials=result.trials, exact=result.exact)
    _emit(run_config, payload, text)
    return EXIT_OK if result.perfect else EXIT_INFEASIBLE


@cli.command()
@click.argument("net_file", type=click.Path(exists=True, dir_okay=False))
@paths_option
@click.option("--nbar", type=click.IntRange(min=1), default=None, help="Stream budget (default n).")
@timeout_option
@format_option
@click.pass_obj
def oracle(
    obj: nudconfig.RunConfig,
    net_file: str,
    paths_file: Optional[str],
    nbar: Optional[int],
    timeout: Optional[float],
    format_: Optional[str],
) -> int:
    """Decide solvability by exhaustive search.

    Instances beyond the brute-force caps are decided by exact coloring of
    the coloring graph instead.
    """
    run_config = obj.override(timeout=timeout, format=format_)
    g = _read_network(net_file)
    d = load_paths(g, paths_file)
    r = contamination_sets(g, d)
    budget = d.n if nbar is None else nbar
    if budget < d.n:
        raise BudgetError(f"n̄ = {budget} is below n = {d.n}")

    try:
        assignment = solver.brute_force_assign(
            g,
            d,
            r,
            budget,
            max_paths=run_config.oracle_max_paths,
            max_nbar=run_config.oracle_max_nbar,
        )
        method = "brute force"
    except CapError as exc:
        logger.info(f"{exc}; deciding by exact coloring")
        method = "exact coloring"
        ghat = colorgraph.build_coloring_graph(d, r, budget)
        found = coloring.color_exact(ghat, budget, seed=run_config.seed, timeout=run_config.timeout)
        assignment = solver.assignment_from_coloring(ghat, found) if found else None

    feasible = assignment is not None
    payload = {
        "method": method,
        "n": d.n,
        "nbar": budget,
        "feasible": feasible,
        "assignment": assignment.to_json()["assignment"] if assignment else None,
    }
    text = f"{method}: {'feasible' if feasible else 'infeasible'} with n̄ = {budget} (n = {d.n})\n"
    _emit(run_config, payload, text)
    return EXIT_OK if feasible else EXIT_INFEASIBLE


@cli.command()
@click.argument("kind", type=click.Choice(["cycle", "complete", "random-gnp", "fixtures"]))
@click.option(
    "--out",
    "out_dir",
    required=True,
    type=click.Path(file_okay=False),
    help="Directory to write into.",
)
@click.option("--length", type=click.IntRange(min=3), default=5, help="Cycle length.")
@click.option("--size", type=click.IntRange(min=1), default=4, help="Complete graph size.")
@click.option("--vertices", type=click.IntRange(min=1), default=8, help="G(n, p) vertex count.")
@click.option(
    "--p", "edge_p", type=click.FloatRange(0, 1), default=0.3, help="G(n, p) edge probability."
)
@click.option("--count", type=click.IntRange(min=1), default=1, help="Number of random graphs.")
@click.option("--colors", type=click.IntRange(min=1), default=3, help="Color budget n.")
@seed_option
@click.pass_obj
def gen(
    obj: nudconfig.RunConfig,
    kind: str,
    out_dir: str,
    length: int,
    size: int,
    vertices: int,
    edge_p: float,
    count: int,
    colors: int,
    seed: Optional[int],
) -> int:
    """Write corpus instance files."""
    run_config = obj.override(seed=seed)
    params = {
        "length": length,
        "size": size,
        "vertices": vertices,
        "p": edge_p,
        "count": count,
        "colors": colors,
    }
    entries = reduction.generate_corpus(kind, params, seed=run_config.seed)
    target = pathlib.Path(out_dir)
    target.mkdir(parents=True, exist_ok=True)
    for entry in entries:
        (target / entry.name).write_bytes(entry.data)
        click.echo(str(target / entry.name))
    return EXIT_OK


@cli.command("export-dot")
@click.argument("net_file", type=click.Path(exists=True, dir_okay=False))
@paths_option
@click.option(
    "--coloring-graph", is_flag=True, help="Draw the coloring graph instead of the network."
)
@click.option("--nbar", type=click.IntRange(min=1), default=None, help="Stream budget (default n).")
def export_dot(
    net_file: str, paths_file: Optional[str], coloring_graph: bool, nbar: Optional[int]
) -> int:
    """Print a DOT drawing."""
    g = _read_network(net_file)
    if not coloring_graph:
        click.echo(netgraph.export_network_dot(g))
        return EXIT_OK
    d = load_paths(g, paths_file)
    ghat = colorgraph.build_coloring_graph(d, contamination_sets(g, d), nbar)
    click.echo(colorgraph.export_coloring_graph_dot(ghat))
    return EXIT_OK


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Runs the command line and returns its exit code."""
    args = list(sys.argv[1:] if argv is None else argv)
    if not args:
        with click.Context(cli, info_name="nudcode") as ctx:
            click.echo(cli.get_help(ctx))
        return EXIT_USAGE
    try:
        result = cli.main(args=args, prog_name="nudcode", standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_DATA
    except click.Abort:
        return EXIT_USAGE
    except BudgetError as exc:
        logger.error(str(exc))
        return EXIT_USAGE
    except (ValidationError, CapError, ShapeError) as exc:
        logger.error(str(exc))
        return EXIT_DATA
    except (SynthesisError, ColoringTimeout, HoleSearchTimeout) as exc:
        logger.error(str(exc))
        return EXIT_UNKNOWN
    except NudcodeError as exc:
        logger.critical(f"internal error: {exc}")
        return EXIT_UNKNOWN
    except OSError as exc:
        logger.error(str(exc))
        return EXIT_DATA
    return EXIT_OK if result is None else int(result)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
