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

"""nudcode finds stream assignments for non-uniform demand networks.

A directed acyclic network with one source and several sinks, each sink
asking for its own max-flow rate, is solved by decomposing the flow into
paths, building the coloring graph of their contamination and coloring it.
"""

from nudcode.netgraph import parse_network, validate
from nudcode.flows import decompose
from nudcode.contamination import contamination_sets
from nudcode.solver import solve, verify_assignment
from nudcode.netcode import synthesize_code

__version__ = "0.3.0"

__all__ = [
    "parse_network",
    "validate",
    "decompose",
    "contamination_sets",
    "solve",
    "verify_assignment",
    "synthesize_code",
]
