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

"""Stream assignment: the end-to-end solve pipeline, its verifier and oracle."""

import concurrent.futures
import dataclasses
import itertools
import time
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from nudcode import log
from nudcode.colorgraph import (
    ColoringGraph,
    Witness,
    build_coloring_graph,
    is_berge,
    max_clique_size,
)
from nudcode.coloring import Coloring, color_exact, two_colorable
from nudcode.contamination import ContaminationReport, contamination_sets
from nudcode.errors import (
    BudgetError,
    CapError,
    ColoringTimeout,
    HoleSearchTimeout,
    ShapeError,
    SolverInvariantError,
    ValidationError,
)
from nudcode.flows import PathDecomposition, PathId, decompose
from nudcode.netgraph import NetworkInstance

logger = log.get_logger(__name__)

SOLUTION = "solution"
INFEASIBLE = "infeasible"
UNKNOWN = "unknown"

NbarPolicy = Union[None, int, str]


@dataclasses.dataclass(frozen=True)
class StreamAssignment:
    f: Dict[PathId, int]
    nbar: int
    rates: Tuple[int, ...]

    def streams_of(self, j: int) -> List[int]:
        return [self.f[(j, k)] for k in range(1, self.rates[j - 1] + 1)]

    def to_json(self) -> Dict[str, Any]:
        return {
            "nbar": self.nbar,
            "assignment": {f"{j}.{k}": stream for (j, k), stream in sorted(self.f.items())},
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any], d: PathDecomposition) -> "StreamAssignment":
        try:
            nbar = int(data["nbar"])
            f = {}
            for label, stream in data["assignment"].items():
                j, k = (int(part) for part in str(label).split("."))
                f[(j, k)] = int(stream)
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise ValidationError(f"malformed assignment: {exc}") from exc
        return cls(f=f, nbar=nbar, rates=d.rates)


@dataclasses.dataclass(frozen=True)
class Violation:
    kind: str  # "range", "saturation" or "decodability"
    sink: int
    stream: int
    path: PathId
    message: str


@dataclasses.dataclass(frozen=True)
class Verdict:
    violations: Tuple[Violation, ...]

    @property
    def accepted(self) -> bool:
        return not self.violations


@dataclasses.dataclass(frozen=True)
class Attempt:
    nbar: int
    omega: int
    outcome: str
    method: str
    berge: Optional[bool] = None
    witness: Optional[Witness] = None


@dataclasses.dataclass
class SolveReport:
    """Everything one solve produced.

    `berge` is None when the hole search was skipped or timed out.
    """

    outcome: str
    decomposition: PathDecomposition
    contamination: ContaminationReport
    attempts: List[Attempt]
    assignment: Optional[StreamAssignment] = None
    coloring: Optional[Coloring] = None
    graph: Optional[ColoringGraph] = None
    diagnostic: str = ""
    name: str = ""

    @property
    def final(self) -> Attempt:
        return self.attempts[-1]

    @property
    def rates(self) -> Tuple[int, ...]:
        return self.decomposition.rates


def verify_assignment(
    g: NetworkInstance,
    d: PathDecomposition,
    r: ContaminationReport,
    a: StreamAssignment,
) -> Verdict:
    """Checks that an assignment is saturating and decodable.

    Every path must carry a stream in 1..n̄, distinct within its sink, and
    every path q of another sink whose data reaches sink j must carry a
    stream that sink j also receives on one of its own paths. All failures
    are reported.

    Raises:
        ShapeError: the assignment does not cover exactly the paths of d.
    """
    expected = {path.id for path in d.paths()}
    if set(a.f) != expected:
        missing = sorted(expected - set(a.f))
        extra = sorted(set(a.f) - expected)
        raise ShapeError(f"assignment does not match the paths (missing {missing}, extra {extra})")

    violations: List[Violation] = []
    for path_id in sorted(a.f):
        stream = a.f[path_id]
        if not 1 <= stream <= a.nbar:
            violations.append(
                Violation(
                    "range",
                    path_id[0],
                    stream,
                    path_id,
                    f"p{path_id[0]}.{path_id[1]} carries stream {stream} outside 1..{a.nbar}",
                )
            )

    for j in range(1, d.sink_count + 1):
        sink_id = g.sinks[j - 1]
        holders: Dict[int, PathId] = {}
        for path in d.sink_paths(j):
            stream = a.f[path.id]
            if stream in holders:
                violations.append(
                    Violation(
                        "saturation",
                        j,
                        stream,
                        path.id,
                        f"sink {sink_id}: stream {stream} on both p{holders[stream][0]}."
                        f"{holders[stream][1]} and {path}",
                    )
                )
            else:
                holders[stream] = path.id
        received = set(holders)
        for q in r.contaminators(j):
            if a.f[q] not in received:
                violations.append(
                    Violation(
                        "decodability",
                        j,
                        a.f[q],
                        q,
                        f"sink {sink_id}: stream {a.f[q]} leaks in from p{q[0]}.{q[1]} "
                        f"but is not among its streams {sorted(received)}",
                    )
                )
    return Verdict(violations=tuple(violations))


def brute_force_assign(
    g: NetworkInstance,
    d: PathDecomposition,
    r: ContaminationReport,
    nbar: int,
    max_paths: int = 10,
    max_nbar: int = 4,
) -> Optional[StreamAssignment]:
    """Tries every saturating assignment with streams 1..n̄, in lexicographic order.

    Raises:
        BudgetError: nbar is below n.
        CapError: more than max_paths paths, or nbar above max_nbar.
    """
    if nbar < d.n:
        raise BudgetError(f"n̄ = {nbar} is below n = {d.n}")
    total = len(d.paths())
    if total > max_paths:
        raise CapError(f"brute force is capped at {max_paths} paths, got {total}")
    if nbar > max_nbar:
        raise CapError(f"brute force is capped at n̄ = {max_nbar}, got {nbar}")

    streams = range(1, nbar + 1)
    contaminators = {j: r.contaminators(j) for j in range(1, d.sink_count + 1)}
    choices = [itertools.permutations(streams, n_j) for n_j in d.rates]
    tried = 0
    for combination in itertools.product(*choices):
        tried += 1
        f = {
            (j, k): stream
            for j, per_sink in enumerate(combination, start=1)
            for k, stream in enumerate(per_sink, start=1)
        }
        if all(
            f[q] in combination[j - 1] for j, sources in contaminators.items() for q in sources
        ):
            logger.debug(f"brute force: assignment found after {tried} candidates")
            return StreamAssignment(f=f, nbar=nbar, rates=d.rates)
    logger.debug(f"brute force: none of {tried} candidates is decodable")
    return None


def assignment_from_coloring(ghat: ColoringGraph, coloring: Coloring) -> StreamAssignment:
    """Path p_jk gets the color of v_jk as its stream."""
    f = {}
    for j, n_j in enumerate(ghat.rates, start=1):
        for k in range(1, n_j + 1):
            f[(j, k)] = coloring.color_of[f"v{j}.{k}"]
    return StreamAssignment(f=f, nbar=ghat.nbar, rates=ghat.rates)


def _budgets(n: int, nbar: NbarPolicy, ceiling: int) -> List[int]:
    if nbar is None:
        return [n]
    if isinstance(nbar, str):
        if nbar != "auto":
            raise BudgetError(f"n̄ must be an integer or 'auto', got {nbar!r}")
        return list(range(n, n + ceiling + 1))
    if nbar < n:
        raise BudgetError(f"n̄ = {nbar} is below n = {n}")
    return [nbar]


def _budget_span(budgets: Sequence[int]) -> str:
    if len(budgets) == 1:
        return f"at n̄ = {budgets[0]}"
    return f"for all n̄ ≤ {budgets[-1]}"


def _remaining(deadline: Optional[float]) -> Optional[float]:
    if deadline is None:
        return None
    return max(0.0, deadline - time.monotonic())


def _attempt(
    g: NetworkInstance,
    d: PathDecomposition,
    r: ContaminationReport,
    nbar: int,
    seed: int,
    timeout: Optional[float],
    check_berge: bool,
) -> Tuple[Attempt, ColoringGraph, Optional[Coloring], Optional[StreamAssignment]]:
    """One budget: clique bound, then the Berge test and coloring on a shared deadline."""
    ghat = build_coloring_graph(d, r, nbar)
    omega = max_clique_size(ghat)
    deadline = None if timeout is None else time.monotonic() + timeout

    berge: Optional[bool] = None
    witness: Optional[Witness] = None

    def done(outcome: str, method: str) -> Attempt:
        return Attempt(
            nbar=nbar,
            omega=omega,
            outcome=outcome,
            method=method,
            berge=berge,
            witness=witness,
        )

    if omega > nbar:
        logger.debug(f"n̄={nbar}: ω={omega} rules out a coloring")
        return done(INFEASIBLE, "clique bound"), ghat, None, None

    if check_berge:
        try:
            berge, witness = is_berge(ghat, timeout=_remaining(deadline))
        except HoleSearchTimeout as exc:
            logger.warning(f"Berge test abandoned: {exc}")
    logger.debug(f"n̄={nbar}: ω={omega}, berge={berge}")

    coloring: Optional[Coloring]
    if nbar == 2:
        method = "bipartite"
        coloring = two_colorable(ghat)
    else:
        method = "exact coloring"
        try:
            coloring = color_exact(ghat, nbar, seed=seed, timeout=_remaining(deadline))
        except ColoringTimeout as exc:
            logger.warning(str(exc))
            return done(UNKNOWN, method), ghat, None, None

    if coloring is None:
        if berge:
            raise SolverInvariantError(
                f"Berge coloring graph with ω={omega} has no {nbar}-coloring"
            )
        return done(INFEASIBLE, method), ghat, None, None

    assignment = assignment_from_coloring(ghat, coloring)
    verdict = verify_assignment(g, d, r, assignment)
    if not verdict.accepted:
        raise SolverInvariantError(
            "coloring does not give a decodable assignment: "
            + "; ".join(v.message for v in verdict.violations)
        )
    return done(SOLUTION, method), ghat, coloring, assignment


def solve(
    g: NetworkInstance,
    nbar: NbarPolicy = None,
    seed: int = 0,
    timeout: Optional[float] = 30.0,
    paths: Optional[PathDecomposition] = None,
    check_berge: bool = True,
    ceiling: int = 3,
    name: str = "",
) -> SolveReport:
    """Decides and constructs a saturating, decodable stream assignment.

    Args:
        nbar: the stream budget n̄; None means n, "auto" tries n..n+ceiling.
        paths: a decomposition to use instead of the computed one.
        check_berge: run the exhaustive odd hole search for the verdict.

    Raises:
        BudgetError: an explicit nbar is below n.
    """
    d = paths if paths is not None else decompose(g)
    r = contamination_sets(g, d)
    budgets = _budgets(d.n, nbar, ceiling)

    attempts: List[Attempt] = []
    report = SolveReport(
        outcome=INFEASIBLE, decomposition=d, contamination=r, attempts=attempts, name=name
    )
    for budget in budgets:
        attempt, ghat, coloring, assignment = _attempt(
            g, d, r, budget, seed, timeout, check_berge
        )
        attempts.append(attempt)
        report.graph = ghat
        if attempt.outcome == SOLUTION:
            report.outcome = SOLUTION
            report.coloring = coloring
            report.assignment = assignment
            logger.success(f"{name or 'network'}: solved with {budget} streams, rates {d.rates}")
            return report

    if any(attempt.outcome == UNKNOWN for attempt in attempts):
        report.outcome = UNKNOWN
        report.diagnostic = "coloring search timed out"
    elif all(attempt.method == "clique bound" for attempt in attempts):
        report.diagnostic = f"ω exceeds n̄ {_budget_span(budgets)}"
    else:
        report.diagnostic = f"no proper coloring {_budget_span(budgets)}"
    logger.warning(f"{name or 'network'}: {report.outcome}: {report.diagnostic}")
    return report


def _solve_one(job: Tuple[str, NetworkInstance, Optional[PathDecomposition], Dict[str, Any]]):
    name, g, paths, options = job
    return solve(g, paths=paths, name=name, **options)


def solve_many(
    instances: Sequence[Tuple[str, NetworkInstance, Optional[PathDecomposition]]],
    jobs: int = 1,
    **options: Any,
) -> List[SolveReport]:
    """Solves independent instances, in a process pool when jobs > 1.

    Reports come back in input order.
    """
    work = [(name, g, paths, options) for name, g, paths in instances]
    if jobs <= 1 or len(work) <= 1:
        return [_solve_one(job) for job in work]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(_solve_one, work))
