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

import nox

PYTHON_VERSIONS = ["3.8", "3.10"]
BLACK_VERSION = "black==23.3.0"

# Error if a python version is missing
nox.options.error_on_missing_interpreters = True


@nox.session(python=PYTHON_VERSIONS)
def blacken(session):
    session.install(BLACK_VERSION, "click>8.0")
    session.run("black", "--line-length", "100", "nudcode", "tests")


@nox.session(python=PYTHON_VERSIONS)
def lint(session):
    session.install("mypy", "flake8", BLACK_VERSION)
    session.run("pip", "install", "-e", ".")
    session.run("pip", "install", "click>8.0")
    session.run("black", "--check", "--line-length", "100", "nudcode", "tests")
    session.run("flake8", "nudcode", "tests")
    session.run("mypy", "nudcode")


@nox.session(python=PYTHON_VERSIONS)
def test(session):
    session.install("pytest", "pytest-cov")
    session.run("pip", "install", "-e", ".")
    session.run(
        "pytest",
        "--cov-report",
        "term-missing",
        "--cov",
        "nudcode",
        "tests",
        *session.posargs,
    )
