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

"""Exceptions raised by nudcode.

Everything derives from NudcodeError. ValidationError and its subclasses mean
the input files were at fault; the command line maps them to exit code 65.
"""

from typing import Optional


class NudcodeError(Exception):
    pass


class ValidationError(NudcodeError):
    pass


class NetworkSyntaxError(ValidationError):
    """A line of a network, path or coloring file could not be parsed."""

    def __init__(self, lineno: Optional[int], reason: str) -> None:
        self.lineno = lineno
        self.reason = reason
        where = f"line {lineno}: " if lineno is not None else ""
        super().__init__(f"{where}{reason}")


class CycleError(ValidationError):
    pass


class UnreachableSinkError(ValidationError):
    pass


class DuplicateSourceError(ValidationError):
    pass


class PathOverrideError(ValidationError):
    pass


class BudgetError(NudcodeError, ValueError):
    """The stream budget is below what the instance needs."""


class StructureError(NudcodeError):
    """A coloring graph does not have the sink-subgraph structure."""


class CapError(NudcodeError):
    """An exhaustive oracle was asked to run above its size cap."""


class ShapeError(NudcodeError):
    """An assignment does not index the paths of the decomposition."""


class SynthesisError(NudcodeError):
    pass


class SupportError(NudcodeError):
    """A terminal coding vector reaches outside the sink's streams."""


class ZeroInverseError(NudcodeError, ZeroDivisionError):
    pass


class ColoringTimeout(NudcodeError, TimeoutError):
    pass


class HoleSearchTimeout(NudcodeError, TimeoutError):
    pass


class SolverInvariantError(NudcodeError):
    pass
