"""Tests for task files and search settings."""

import json

import pytest

from tensorsynth.exceptions import LimitViolation, TaskParseError
from tensorsynth.search.task import SearchConfig, parse_task, task_from_dict, task_from_text
from tensorsynth.values import DType, Kind

TASK_TEXT = """{
  "description": "sum the rows",
  "inputs": {
    "in1": [[1, 2], [3, 4]]
  },
  "output": [3, 7],
  "constants": [10, {"dtype": "i64", "data": 2}]
}
"""


def write_task(tmp_path, text):
    path = tmp_path / "task.json"
    path.write_text(text)
    return str(path)


class TestParseTask:
    """Reading task files."""

    def test_valid_task(self, tmp_path):
        """A single-example task keeps inputs, output, constants and description."""
        task = parse_task(write_task(tmp_path, TASK_TEXT))
        assert task.description == "sum the rows"
        assert task.input_names == ("in1",)
        assert task.num_inputs == 1
        assert task.inputs["in1"].name == "in1"
        assert task.output.shape == (2,)
        assert [c.kind for c in task.constants] == [Kind.INT, Kind.TENSOR]
        assert task.constants[1].dtype is DType.I64

    def test_multiple_examples(self):
        """Every example must name the same inputs."""
        document = {
            "examples": [
                {"inputs": {"x": [1, 2], "y": [3, 4]}, "output": [4, 6]},
                {"inputs": {"x": [0], "y": [1]}, "output": [1]},
            ]
        }
        task = task_from_dict(document)
        assert len(task.examples) == 2
        assert task.input_names == ("x", "y")

    def test_examples_must_agree(self):
        document = {
            "examples": [
                {"inputs": {"x": [1]}, "output": [1]},
                {"inputs": {"y": [1]}, "output": [1]},
            ]
        }
        with pytest.raises(TaskParseError, match="example 2"):
            task_from_dict(document)

    def test_missing_file(self, tmp_path):
        """A missing file is reported at line 0."""
        with pytest.raises(TaskParseError) as e:
            parse_task(str(tmp_path / "missing.json"))
        assert e.value.line == 0

    def test_invalid_json_line(self, tmp_path):
        """JSON syntax errors point at their line."""
        text = '{\n  "inputs": {"in1": [1, 2]},\n  "output": [1, 2\n}\n'
        with pytest.raises(TaskParseError) as e:
            parse_task(write_task(tmp_path, text))
        assert e.value.line == 4

    def test_unknown_key_line(self):
        text = '{\n  "inputs": {"in1": [1]},\n  "output": [1],\n  "hint": "none"\n}\n'
        with pytest.raises(TaskParseError) as e:
            task_from_text(text)
        assert e.value.line == 4
        assert "hint" in e.value.reason

    def test_examples_and_output_conflict(self):
        text = json.dumps({"examples": [{"inputs": {"a": [1]}, "output": [1]}], "output": [1]}, indent=2)
        with pytest.raises(TaskParseError, match="cannot be combined"):
            task_from_text(text)

    def test_missing_output(self):
        with pytest.raises(TaskParseError) as e:
            task_from_text('{"inputs": {"in1": [1]}}')
        assert e.value.line == 0

    @pytest.mark.parametrize("name", ["int32", "True", "lambda", "2x", "bool"])
    def test_reserved_input_names(self, name):
        """Input names must be identifiers the expression reader does not claim."""
        text = json.dumps({"inputs": {name: [1]}, "output": [1]}, indent=2)
        with pytest.raises(TaskParseError) as e:
            task_from_text(text)
        assert e.value.line == 3

    def test_too_many_inputs(self):
        inputs = {f"in{i}": [i] for i in range(1, 5)}
        with pytest.raises(TaskParseError, match="1 to 3 inputs"):
            task_from_dict({"inputs": inputs, "output": [1]})

    def test_bad_literal(self):
        text = '{\n  "inputs": {\n    "in1": [1, true]\n  },\n  "output": [1]\n}'
        with pytest.raises(TaskParseError) as e:
            task_from_text(text)
        assert e.value.line == 3

    def test_bad_constant(self):
        with pytest.raises(TaskParseError, match="bad constant"):
            task_from_dict({"inputs": {"in1": [1]}, "output": [1], "constants": ["x"]})

    def test_description_must_be_text(self):
        with pytest.raises(TaskParseError):
            task_from_dict({"inputs": {"in1": [1]}, "output": [1], "description": 3})

    def test_oversized_input(self):
        """Inputs beyond the size limits are refused."""
        with pytest.raises(LimitViolation):
            task_from_dict({"inputs": {"in1": list(range(101))}, "output": [1]})

    def test_parse_error_message(self):
        error = TaskParseError(4, "unknown keys")
        assert str(error) == "line 4: unknown keys"
        assert "Task configuration error" in error.get_response_content()


class TestSearchConfig:
    """Search settings validation."""

    def test_defaults(self):
        settings = SearchConfig()
        assert settings.timeout == 300.0
        assert settings.max_weight == 200
        assert settings.max_solutions == 1
        assert settings.require_all_inputs
        assert settings.leaf_weight("input") == 8
        assert settings.leaf_weight("dimension") == 12

    @pytest.mark.parametrize(
        "overrides",
        [{"timeout": 0}, {"timeout": -1.0}, {"max_solutions": 0}, {"max_weight": 6}],
    )
    def test_invalid(self, overrides):
        with pytest.raises(ValueError):
            SearchConfig(**overrides)

    def test_missing_origin_weight(self):
        with pytest.raises(ValueError):
            SearchConfig(origin_weights={"input": 8})

    def test_equal_weights(self):
        """Every leaf weighs 1 and small weight bounds become valid."""
        settings = SearchConfig(equal_weights=True, max_weight=3)
        assert settings.leaf_weight("output_shape") == 1
        assert settings.smallest_leaf_weight == 1

    def test_from_config(self, app):
        """Application settings provide defaults, explicit values win, None is ignored."""
        settings = SearchConfig.from_config(app.config, timeout=5.0, max_solutions=None, disable_filters=True)
        assert settings.timeout == 5.0
        assert settings.max_solutions == app.config["SEARCH_MAX_SOLUTIONS"]
        assert settings.disable_filters
        assert settings.tolerance.rel_tol == app.config["SEARCH_REL_TOL"]

    def test_with_settings(self):
        task = task_from_dict({"inputs": {"in1": [1]}, "output": [1]})
        changed = task.with_settings(SearchConfig(timeout=1.0))
        assert changed.settings.timeout == 1.0
        assert changed.examples == task.examples
