import json

import numpy as np
import pytest

from hml import report
from hml.config import DEFAULTS, ConfigError, load_defaults, parse_config
from hml.measure import AtomList, DiskDensityMeasure, Lebesgue, PowerWeight
from hml.specs import MeasureSpecError, parse_measure


@pytest.mark.parametrize("text,expected", [
    ("lebesgue", Lebesgue()),
    ("powerweight:s=0.5", PowerWeight(0.5)),
    ("powerweight:s=-.75", PowerWeight(-0.75)),
    ("powerweight:s=1e0", PowerWeight(1.0)),
    ("atoms:[(0.5,1.0)]", AtomList(((0.5, 1.0),))),
    ("atoms:[(0,1),(0.25,2.5e-1)]", AtomList(((0.0, 1.0), (0.25, 0.25)))),
    ("counterexample:K=5", DiskDensityMeasure.counterexample(5)),
])
def test_parse_valid(text, expected):
    assert parse_measure(text) == expected


@pytest.mark.parametrize("text,pos", [
    ("lebesge", 0),
    ("powerweight:s=", 14),
    ("powerweight:s=-1", 14),
    ("powerweight:s=1x", 15),
    ("powerweight: s=1", 12),
    ("atoms:[]", 7),
    ("atoms:[(0.5,1.0)", 16),
    ("atoms:[(1.0,1.0)]", 7),
    ("atoms:[(0.5,1.0),]", 17),
    ("counterexample:K=0", 17),
    ("counterexample:K=2.5", 18),
])
def test_parse_errors_report_position(text, pos):
    with pytest.raises(MeasureSpecError) as info:
        parse_measure(text)
    assert info.value.pos == pos
    assert f"position {pos}" in str(info.value)


def test_config_parsing(tmp_path):
    cfg = parse_config("N = 64  # small\n\ntol=1e-12\nK = 3\n")
    assert cfg == {"N": 64, "tol": 1e-12, "K": 3}
    with pytest.raises(ConfigError):
        parse_config("bogus = 1")
    with pytest.raises(ConfigError):
        parse_config("N 64")
    with pytest.raises(ConfigError):
        parse_config("N = abc")
    path = tmp_path / "hml.cfg"
    path.write_text("depth = 8\n")
    vals = load_defaults({"HML_CONFIG": str(path)})
    assert vals["depth"] == 8 and vals["N"] == DEFAULTS["N"]
    assert load_defaults({}) == DEFAULTS


def test_json_numbers_round_trip():
    x = [0.1, 1 / 3, 2.0 ** -1074, 1e308, -0.0, 12345678901234567.0]
    text = report.dumps({"x": x, "c": 1 + 2j, "a": np.arange(3), "b": np.float64(0.7)})
    back = json.loads(text)
    assert back["x"] == x
    assert back["c"] == {"re": 1.0, "im": 2.0}
    assert back["a"] == [0, 1, 2]
    assert back["b"] == 0.7
    assert list(back) == ["x", "c", "a", "b"]


def test_json_rejects_nan():
    with pytest.raises(ValueError):
        report.dumps({"x": float("nan")})


def test_csv_flatten():
    text = report.to_csv({"a": {"b": [1.5, True]}, "s": "x,y"})
    assert text.splitlines() == ["path,value", "a.b.0,1.5", "a.b.1,true", 's,"x,y"']
