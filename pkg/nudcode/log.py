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

"""Console logging for nudcode.

Every module logs through a child of the ``nudcode`` logger (see
:func:`get_logger`); one stderr handler on the parent prints them all, so
anything a command writes to stdout stays parseable.
"""

import logging
import sys

try:
    from colorlog import ColoredFormatter
except ImportError:  # pragma: no cover
    ColoredFormatter = None

ROOT = "nudcode"
SUCCESS = 25

LOG_COLORS = {
    "DEBUG": "cyan",
    "INFO": "blue",
    "WARNING": "yellow",
    "ERROR": "red",
    "CRITICAL": "red,bg_yellow",
    "SUCCESS": "green",
}


class LoggerWithSuccess(logging.getLoggerClass()):  # type: ignore
    """Adds a SUCCESS level between INFO and WARNING for solved instances."""

    def __init__(self, name, level=logging.NOTSET):
        super().__init__(name, level)
        logging.addLevelName(SUCCESS, "SUCCESS")

    def success(self, msg, *args, **kwargs):
        if self.isEnabledFor(SUCCESS):
            self._log(SUCCESS, msg, args, **kwargs)


def _formatter(color: bool) -> logging.Formatter:
    if color and ColoredFormatter is not None and sys.stderr.isatty():
        return ColoredFormatter(
            "%(asctime)s %(purple)s%(name)s > %(log_color)s%(message)s",
            reset=True,
            log_colors=LOG_COLORS,
        )
    return logging.Formatter("%(asctime)s %(name)s [%(levelname)s] > %(message)s")


def configure_logger(name: str = ROOT, color: bool = ColoredFormatter is not None):
    """Installs the stderr handler on `name` and returns that logger."""
    logging.setLoggerClass(LoggerWithSuccess)
    # galois compiles its field tables through numba, which logs at DEBUG
    logging.getLogger("numba").setLevel(logging.WARNING)

    configured = logging.getLogger(name)
    configured.setLevel(logging.DEBUG)
    if not configured.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setLevel(logging.INFO)
        handler.setFormatter(_formatter(color))
        configured.addHandler(handler)
    return configured


logger = configure_logger()


def get_logger(module: str) -> LoggerWithSuccess:
    """The child logger for a module, e.g. ``nudcode.solver``."""
    if module != ROOT and not module.startswith(ROOT + "."):
        module = f"{ROOT}.{module}"
    return logging.getLogger(module)  # type: ignore[return-value]


def set_verbosity(verbose: bool) -> None:
    """Show DEBUG records on the console handler when verbose."""
    level = logging.DEBUG if verbose else logging.INFO
    for handler in logger.handlers:
        handler.setLevel(level)
