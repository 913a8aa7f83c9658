import json
from fractions import Fraction as F

import numpy as np
import pytest

from movingmeans import io, new_weights
from movingmeans.errors import ConfigError


def test_dumps_round_trips_doubles():
    vals = [0.1, 1 / 3, 2.0, -1e-300, 123456789.123456789]
    text = io.dumps(vals)
    assert [float(v) for v in json.loads(text)] == vals
    assert io.dumps(2.0) == "2"
    assert io.dumps({"a": [1, 2.5], "b": None, "c": True}) == '{"a":[1,2.5],"b":null,"c":true}'
    assert io.dumps([np.inf, np.nan]) == '["inf",null]'
    assert io.dumps(F(1, 4)) == "0.25"


def test_dumps_indent_keeps_scalar_lists_inline():
    text = io.dumps({"rows": [[1.0, 2.0], [3.0, 4.0]]}, indent=2)
    assert "[1, 2]" in text
    assert json.loads(text) == {"rows": [[1, 2], [3, 4]]}


def test_parse_alphas():
    w = io.parse_alphas("1/3,2/3")
    assert w.exact and w.alphas == (F(1, 3), F(2, 3))
    w = io.parse_alphas("0.3333333333,0.3333333333,0.3333333333")
    assert abs(sum(w.alphas) - 1) <= 1e-12
    with pytest.raises(ConfigError):
        io.parse_alphas("0.5,0.6")
    with pytest.raises(ConfigError):
        io.parse_alphas("0.5,abc")
    with pytest.raises(ConfigError):
        io.parse_alphas("1")


def test_weights_json(tmp_path):
    for w in (new_weights([F(1, 4), F(3, 4)]), new_weights([0.25, 0.75])):
        d = json.loads(io.dumps(io.weights_to_dict(w)))
        assert io.weights_from_dict(d) == w
    with pytest.raises(ConfigError):
        io.weights_from_dict({"weights": [1]})
    with pytest.raises(ConfigError):
        io.weights_from_dict([0.5, 0.5])
    with pytest.raises(ConfigError):
        io.read_json(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    with pytest.raises(ConfigError):
        io.read_json(bad)


def test_matrix_json():
    M = np.array([[F(1, 2), F(1, 2)], [F(1, 3), F(2, 3)]], dtype=object)
    d = io.matrix_to_dict(M)
    assert d["n"] == 2 and d["rows_rational"][1] == ["1/3", "2/3"]
    np.testing.assert_array_equal(io.matrix_from_dict(d), M.astype(float))
    with pytest.raises(ConfigError):
        io.matrix_from_dict({"rows": [[1, 2]]})
    with pytest.raises(ConfigError):
        io.matrix_from_dict({"n": 3, "rows": [[1]]})


def test_csv_writers(tmp_path):
    io.write_matrix_csv(tmp_path / "m.csv", np.array([[0.1, 1.0]]))
    assert (tmp_path / "m.csv").read_text().strip() == "0.10000000000000001,1"
    io.write_rows_csv(tmp_path / "r.csv", ["step", "v"], [[1, 0.5], [2, ""]])
    assert (tmp_path / "r.csv").read_text().splitlines() == ["step,v", "1,0.5", "2,"]
