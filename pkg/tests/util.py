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

import contextlib
import os
import pathlib
import typing

from nudcode import netgraph
from nudcode.flows import PathDecomposition, decompose, parse_paths
from nudcode.reduction import FIXTURES_DIR as PACKAGE_FIXTURES

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def fixture_path(name: str) -> pathlib.Path:
    """Test fixtures first, then the networks shipped with nudcode."""
    local = FIXTURES / name
    if local.exists():
        return local
    return PACKAGE_FIXTURES / name


def load_network(name: str) -> netgraph.NetworkInstance:
    return netgraph.parse_network(fixture_path(name).read_bytes())


def load_instance(
    name: str,
) -> typing.Tuple[netgraph.NetworkInstance, PathDecomposition]:
    """A fixture network with its .paths override when one exists."""
    g = load_network(name)
    override = fixture_path(name).with_suffix(".paths")
    if override.exists():
        return g, parse_paths(g, override.read_bytes())
    return g, decompose(g)


def relabeled(text: str, mapping: typing.Dict[str, str]) -> str:
    """Renames nodes of a network file, token by token."""
    lines = []
    for line in text.splitlines():
        lines.append(" ".join(mapping.get(token, token) for token in line.split()))
    return "\n".join(lines) + "\n"


@contextlib.contextmanager
def chdir(path: typing.Union[pathlib.Path, str]):
    """Context Manager to change the current working directory and restore the
    previous working directory after completing the context.

    Args:
        path (pathlib.Path, str) - The new current working directory.
    Yields:
        pathlib.Path - The new current working directory.
    """
    old_cwd = os.getcwd()
    os.chdir(str(path))
    try:
        yield pathlib.Path(path)
    finally:
        os.chdir(old_cwd)
