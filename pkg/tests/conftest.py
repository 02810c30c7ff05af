"""Shared fixtures for the test suite.

Heavy spectral fixtures are session scoped so the dense assembly and
eigensolves run once; reference constants frozen from the independent
derivations in ``tests/oracles/derive_reference_values.py`` live in
``reference.py`` next to this file.
"""

from __future__ import annotations

import json

import pytest

from npspectra import build_grid, parse_config, sphere, torus


def make_config(spec: dict):
    """Parse a config dict through the public JSON entry point."""
    return parse_config(json.dumps(spec))


@pytest.fixture(scope="session")
def sphere_grid_small():
    """Unit sphere grid, 16 x 32, cheap enough for assembly tests."""
    return build_grid(sphere(), 16, 32)


@pytest.fixture(scope="session")
def torus_grid_small():
    """Default torus grid, 16 x 16."""
    return build_grid(torus(), 16, 16)


@pytest.fixture(scope="session")
def sphere_report_small():
    """Full pipeline on a 16 x 32 sphere; shared across report tests."""
    from npspectra.pipeline import compute_report

    config = make_config({"surface": {"name": "sphere"}, "resolution": [16, 32]})
    return compute_report(config)
