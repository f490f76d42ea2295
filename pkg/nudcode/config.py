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

import dataclasses
import functools
import os
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml

from nudcode.errors import ValidationError

CONFIG_ENVIRONMENT_VARIABLE = "NUDCODE_CONFIG"
SEED_ENVIRONMENT_VARIABLE = "NUDCODE_SEED"

CONFIG_HELP = """
Defaults for the run options may be kept in a YAML mapping, read from the file
named by NUDCODE_CONFIG or from .nudcode.yaml in the working directory. Keys:
seed, timeout, nbar_ceiling, format, jobs, oracle_max_paths, oracle_max_nbar,
oracle_max_vertices, trials. NUDCODE_SEED overrides the seed from any file.
"""

# these are the default locations to look up
_DEFAULT_CONFIG_FILES = [".nudcode.yaml", ".nudcode.yml"]

PathOrStr = Union[str, Path]


@dataclasses.dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    timeout: float = 30.0
    nbar_ceiling: int = 3
    format: str = "text"
    jobs: int = 1
    oracle_max_paths: int = 10
    oracle_max_nbar: int = 4
    oracle_max_vertices: int = 20
    trials: int = 1000

    def override(self, **flags: Any) -> "RunConfig":
        """Returns a copy with every flag that was actually given applied."""
        given = {key: value for key, value in flags.items() if value is not None}
        return _validated(dataclasses.replace(self, **given))


_FORMATS = ("text", "json")


def _validated(config: RunConfig) -> RunConfig:
    for field in dataclasses.fields(config):
        value = getattr(config, field.name)
        if field.name == "format":
            if value not in _FORMATS:
                raise ValidationError(f"format must be one of {', '.join(_FORMATS)}")
        elif field.name == "timeout":
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValidationError("timeout must be a number of seconds")
            if value <= 0:
                raise ValidationError("timeout must be positive")
        else:
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValidationError(f"{field.name} must be an integer")
            if value < 0 or (field.name in ("jobs", "trials") and value < 1):
                raise ValidationError(f"{field.name} is out of range: {value}")
    return config


def _from_mapping(data: Any, origin: str) -> RunConfig:
    if data is None:
        return RunConfig()
    if not isinstance(data, dict):
        raise ValidationError(f"{origin}: expected a mapping of options")
    known = {field.name for field in dataclasses.fields(RunConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ValidationError(f"{origin}: unknown option(s) {', '.join(unknown)}")
    values: Dict[str, Any] = dict(data)
    if isinstance(values.get("timeout"), int) and not isinstance(
        values.get("timeout"), bool
    ):
        values["timeout"] = float(values["timeout"])
    return _validated(RunConfig(**values))


def _read(path: PathOrStr) -> RunConfig:
    with open(path) as f:
        try:
            data = yaml.load(f, Loader=yaml.SafeLoader)
        except yaml.YAMLError as exc:
            raise ValidationError(f"{path}: {exc}") from exc
    return _from_mapping(data, str(path))


@functools.lru_cache(maxsize=None)
def load_environment_config() -> Optional[RunConfig]:
    """Loads the config file named in an environment variable.

    Returns:
      A RunConfig, or None when the variable is unset.
    """
    config_file_path = os.environ.get(CONFIG_ENVIRONMENT_VARIABLE)
    if not config_file_path:
        return None
    return _read(config_file_path)


def seed_from_environment() -> Optional[int]:
    value = os.environ.get(SEED_ENVIRONMENT_VARIABLE)
    if value is None or value.strip() == "":
        return None
    try:
        seed = int(value)
    except ValueError:
        raise ValidationError(f"{SEED_ENVIRONMENT_VARIABLE} must be an integer: {value!r}")
    if seed < 0:
        raise ValidationError(f"{SEED_ENVIRONMENT_VARIABLE} must be nonnegative")
    return seed


def load_config(path: Optional[PathOrStr] = None) -> RunConfig:
    """Resolves the run defaults.

    An explicit path wins, then the file named by NUDCODE_CONFIG, then the
    first of .nudcode.yaml / .nudcode.yml found in the working directory.
    NUDCODE_SEED is applied last.
    """
    config: Optional[RunConfig] = None
    if path is not None:
        config = _read(path)
    else:
        config = load_environment_config()
    if config is None:
        cwd_path = Path(os.getcwd())
        for name in _DEFAULT_CONFIG_FILES:
            candidate = cwd_path / name
            if candidate.is_file():
                config = _read(candidate)
                break
    if config is None:
        config = RunConfig()

    seed = seed_from_environment()
    if seed is not None:
        config = dataclasses.replace(config, seed=seed)
    return config
