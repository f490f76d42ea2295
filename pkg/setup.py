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

import setuptools

name = "nudcode"
description = "Network coding for single-source networks with non-uniform demands"
version = "0.3.0"
release_status = "Development Status :: 3 - Alpha"
dependencies = [
    "click >=7.0.0, <9.0.0",
    "colorlog",
    "galois >=0.3.0",
    "graphviz",
    "jinja2",
    "networkx >=2.6",
    "numpy",
    "PyYAML",
]

packages = setuptools.find_packages(exclude=["tests", "tests.*"])
scripts = ["nudcode=nudcode.__main__:main"]

setuptools.setup(
    name=name,
    version=version,
    description=description,
    author="The nudcode Authors",
    license="Apache 2.0",
    url="",
    classifiers=[
        release_status,
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: Apache Software License",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    platforms="Posix; MacOS X; Windows",
    packages=packages,
    package_data={"nudcode": ["fixtures/*", "templates/*.j2"]},
    python_requires=">=3.8",
    install_requires=dependencies,
    include_package_data=True,
    zip_safe=False,
    entry_points={
        "console_scripts": scripts,
    },
)
