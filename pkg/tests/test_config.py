"""JSON run configuration: parsing, defaults, pointer-tagged errors."""

from __future__ import annotations

import json

import pytest

from npspectra import ConfigError, build_surface, load_config, parse_config
from conftest import make_config


def test_minimal_sphere_defaults():
    config = make_config({"surface": {"name": "sphere"}})
    assert config.surface.name == "sphere"
    assert config.surface.params == {"r": 1.0}
    assert config.resolution == (48, 96)
    assert config.angular_resolution == 64
    assert config.fit_window == "auto"
    assert config.noise_cutoff == 1e-10
    assert config.outputs == []


def test_torus_default_resolution():
    config = make_config({"surface": {"name": "torus"}})
    assert config.resolution == (64, 64)


def test_full_document_round_trip():
    doc = {
        "surface": {"name": "torus", "R": 3.0, "r": 0.5},
        "resolution": [24, 24],
        "angular_resolution": 32,
        "fit_window": [4, 40],
        "noise_cutoff": 1e-9,
        "outputs": [{"report_json": "report.json"},
                    {"eigen_csv": "eig.csv", "matrix_dump": "op.bin"}],
    }
    config = make_config(doc)
    assert config.resolution == (24, 24)
    assert config.fit_window == (4, 40)
    assert config.noise_cutoff == 1e-9
    assert config.outputs == doc["outputs"]
    echo = config.echo()
    assert echo["surface"] == doc["surface"]
    assert echo["resolution"] == [24, 24]
    assert echo["fit_window"] == [4, 40]


def test_inversion_wrapper_surface():
    config = make_config({
        "surface": {"invert": {
            "center": [2.1, 0.0, 0.0], "radius": 1.0,
            "inner": {"name": "ellipsoid", "a": 2.0, "b": 1.2, "c": 1.0}}},
        "resolution": [16, 32],
    })
    assert config.surface.params["radius"] == 1.0
    assert config.surface.params["inner"]["name"] == "ellipsoid"


def expect_pointer(doc, pointer):
    with pytest.raises(ConfigError) as err:
        parse_config(json.dumps(doc))
    assert str(err.value).startswith(pointer + ":"), str(err.value)


def test_error_pointers():
    expect_pointer({"surface": {"name": "dodecahedron"}}, "/surface/name")
    expect_pointer({"surface": {"name": "torus", "R": 1.0, "r": 2.0}},
                   "/surface")
    expect_pointer({"surface": {"name": "sphere", "r": "big"}}, "/surface/r")
    expect_pointer({"surface": {"name": "sphere", "radius": 1.0}}, "/surface")
    expect_pointer({"surface": {"name": "ellipsoid", "a": 1.0}}, "/surface")
    expect_pointer({"surface": {"name": "sphere"}, "resolution": [48]},
                   "/resolution")
    expect_pointer({"surface": {"name": "sphere"}, "resolution": [2, 48]},
                   "/resolution")
    expect_pointer({"surface": {"name": "sphere"},
                    "resolution": [16.0, 32]}, "/resolution/0")
    expect_pointer({"surface": {"name": "sphere"}, "angular_resolution": 8},
                   "/angular_resolution")
    expect_pointer({"surface": {"name": "sphere"}, "fit_window": [0, 5]},
                   "/fit_window")
    expect_pointer({"surface": {"name": "sphere"}, "fit_window": "none"},
                   "/fit_window")
    expect_pointer({"surface": {"name": "sphere"}, "noise_cutoff": 0.0},
                   "/noise_cutoff")
    expect_pointer({"surface": {"name": "sphere"},
                    "outputs": [{"plot": "x.png"}]}, "/outputs/0")
    expect_pointer({"surface": {"name": "sphere"},
                    "outputs": [{"report_json": 7}]},
                   "/outputs/0/report_json")
    expect_pointer({"surface": {"name": "sphere"},
                    "invert": {}}, "/")
    expect_pointer({"surface": {"invert": {"center": [0, 0], "radius": 1.0,
                                           "inner": {"name": "sphere"}}}},
                   "/surface/invert/center")


def test_unknown_surface_error_lists_catalog():
    with pytest.raises(ConfigError) as err:
        parse_config(json.dumps({"surface": {"name": "dodecahedron"}}))
    message = str(err.value)
    for name in ("sphere", "ellipsoid", "spheroid", "torus", "peanut"):
        assert name in message


def test_missing_surface_and_bad_json():
    with pytest.raises(ConfigError) as err:
        parse_config("{}")
    assert "surface" in str(err.value)
    with pytest.raises(ConfigError) as err:
        parse_config("{not json")
    assert "invalid JSON" in str(err.value)
    with pytest.raises(ConfigError):
        parse_config("[1, 2]")


def test_build_surface_inversion_errors():
    with pytest.raises(ConfigError) as err:
        build_surface({"invert": {"center": [0.0, 0.0, 0.0]}})
    assert "/surface/invert" in str(err.value)
    with pytest.raises(ConfigError) as err:
        build_surface({"invert": {"center": [0.0, 0.0, 0.0], "radius": -1.0,
                                  "inner": {"name": "sphere"}}})
    assert "/surface/invert/radius" in str(err.value)


def test_load_config(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"surface": {"name": "sphere"},
                                "resolution": [8, 16]}))
    config = load_config(path)
    assert config.resolution == (8, 16)
    with pytest.raises(OSError):
        load_config(tmp_path / "missing.json")
