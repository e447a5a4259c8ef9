import json
import math

import numpy as np
import pytest

from velakit.manifest import dump_json, file_digest, jsonable, make_manifest


class TestJsonable:
    def test_numpy_scalars_and_arrays(self):
        out = jsonable({"a": np.float64(1.5), "b": np.int32(3), "c": np.arange(4).reshape(2, 2)})
        assert out == {"a": 1.5, "b": 3, "c": [[0, 1], [2, 3]]}

    def test_nan_and_inf_become_null(self):
        out = jsonable({"x": float("nan"), "y": np.inf, "z": np.array([1.0, np.nan])})
        assert out == {"x": None, "y": None, "z": [1.0, None]}

    def test_bool_preserved(self):
        assert jsonable({"f": np.bool_(True), "g": False}) == {"f": True, "g": False}

    def test_output_is_valid_strict_json(self):
        text = dump_json({"v": np.array([math.inf, 1.0])})
        assert json.loads(text) == {"v": [None, 1.0]}

    def test_unknown_type_rejected(self):
        with pytest.raises(TypeError):
            jsonable(object())


class TestManifest:
    def test_digest_changes_with_content(self, tmp_path):
        p = tmp_path / "f.txt"
        p.write_text("one")
        d1 = file_digest(p)
        p.write_text("two")
        assert file_digest(p) != d1

    def test_fields(self, tmp_path, monkeypatch):
        monkeypatch.setenv("SOURCE_DATE_EPOCH", "86400")
        p = tmp_path / "in.csv"
        p.write_text("data")
        m = make_manifest("demo", input_paths={"panel": p}, seeds=(7,))
        assert m.command == "demo"
        assert m.seeds == (7,)
        assert m.input_digests["panel"] == file_digest(p)
        assert m.timestamp == "1970-01-02T00:00:00Z"
