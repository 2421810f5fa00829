#!/usr/bin/env python
"""Setup script for the NLS graph ground-state toolkit."""

from setuptools import setup, find_packages

# Read the README for long description
with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

# Read requirements
with open("requirements.txt", "r", encoding="utf-8") as fh:
    requirements = [line.strip() for line in fh if line.strip() and not line.startswith("#")]

setup(
    name="nls-graph-ground-states",
    version="1.0.0",
    description="Existence of NLS ground states on metric graphs: minimization, rearrangements and graph surgery",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(include=["src", "src.*"]),
    py_modules=["server"],
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Operating System :: OS Independent",
    ],
    python_requires=">=3.9",
    install_requires=requirements,
    entry_points={
        "console_scripts": [
            "nlsgraph=src.cli:main",
            "nlsgraph-mcp-server=server:main",
        ],
    },
    include_package_data=True,
    package_data={
        "": ["*.md", "*.txt"],
    },
    data_files=[("data/graphs", ["data/graphs/" + name for name in (
        "line.graph", "halfline.graph", "star3.graph", "star4.graph", "line_with_pendant.graph",
        "gl_2.graph", "tower1.graph", "tower2.graph", "tower3.graph", "showcase.graph",
    )])],
)
