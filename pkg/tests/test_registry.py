"""Tests for the operation registry, weight tables and docstring files."""

import pytest

from tensorsynth.exceptions import MissingDocstring, MissingWeight, ServiceConfigurationError, UnknownOpError
from tensorsynth.registry import (
    BUILTIN_OPERATIONS,
    WeightTable,
    docstring,
    load_docstrings,
    load_weights,
    registry_build,
)


def test_registry_loads_shipped_files(registry, app):
    """Every built-in operation is registered with its weight and docstring."""
    assert len(registry) == len(BUILTIN_OPERATIONS)
    table = load_weights(app.config["WEIGHTS_PATH"])
    for op in registry:
        assert op.base_weight == table[op.name]
        assert op.docstring


def test_registry_keeps_definition_order(registry):
    """Enumeration order is the catalog order."""
    assert registry.names() == [op.name for op in BUILTIN_OPERATIONS]


def test_registry_rejects_unknown_operation(registry):
    """Test that registry raises error for an unlisted operation."""
    with pytest.raises(UnknownOpError) as e:
        registry.get("tf_magic")
    assert e.value.name == "tf_magic"
    assert "tf_magic" in str(e.value)
    assert isinstance(e.value, KeyError)


def test_registry_accepts_arity_suffix(registry):
    """``argmax_2`` names the two-argument argmax."""
    assert registry.get("argmax_2") is registry.get("argmax")
    assert "argmax_2" in registry
    assert "argmax_3" not in registry
    assert 42 not in registry


def test_subset_keeps_registry_order(registry):
    """A subset lists the requested operations in registry order."""
    subset = registry.subset(["where_1", "add"])
    assert subset.names() == ["add", "where_1"]


def test_docstring_lookup(registry):
    """Docstrings come from the shipped docstring file."""
    assert "sum" in docstring(registry, "add").lower()
    with pytest.raises(UnknownOpError):
        docstring(registry, "nope")


class TestWeightFiles:
    """Weight table parsing."""

    def test_loads_valid_table(self, tmp_path):
        """Comments and blank lines are ignored."""
        path = tmp_path / "weights.conf"
        path.write_text("# header\n\nadd = 14  # arithmetic\nwhere_1=36\n")
        assert dict(load_weights(str(path))) == {"add": 14, "where_1": 36}

    def test_missing_file(self, tmp_path):
        """A missing weight file is a configuration error."""
        with pytest.raises(ServiceConfigurationError, match="not found"):
            load_weights(str(tmp_path / "missing.conf"))

    @pytest.mark.parametrize("line", ["add = 0", "add = -3", "add: 14", "add = 1.5", "= 4"])
    def test_malformed_lines(self, tmp_path, line):
        """Non-positive or malformed weights are rejected."""
        path = tmp_path / "weights.conf"
        path.write_text(line + "\n")
        with pytest.raises(ServiceConfigurationError):
            load_weights(str(path))

    def test_duplicate_entry(self, tmp_path):
        """The line number of the duplicate is reported."""
        path = tmp_path / "weights.conf"
        path.write_text("add = 14\nadd = 18\n")
        with pytest.raises(ServiceConfigurationError, match=":2:"):
            load_weights(str(path))

    def test_weight_table_updates(self):
        """Updates copy the table."""
        table = WeightTable({"add": 14, "where_1": 36})
        changed = table.updated({"where_1": 27})
        assert changed["where_1"] == 27
        assert table["where_1"] == 36
        assert dict(table.uniform()) == {"add": 1, "where_1": 1}

    def test_weight_table_rejects_non_positive(self):
        with pytest.raises(ServiceConfigurationError):
            WeightTable({"add": 0})


class TestDocstringFiles:
    """Docstring file parsing."""

    def test_loads_blocks(self, tmp_path):
        """Lines of a block are joined with spaces."""
        path = tmp_path / "opdocs.txt"
        path.write_text("# comment\n[add]\nAdds two tensors.\n\nBroadcasts.\n[where_1]\nIndices of true.\n")
        assert load_docstrings(str(path)) == {"add": "Adds two tensors. Broadcasts.", "where_1": "Indices of true."}

    def test_text_before_header(self, tmp_path):
        path = tmp_path / "opdocs.txt"
        path.write_text("stray text\n[add]\nAdds.\n")
        with pytest.raises(ServiceConfigurationError, match=":1:"):
            load_docstrings(str(path))

    def test_duplicate_header(self, tmp_path):
        path = tmp_path / "opdocs.txt"
        path.write_text("[add]\nAdds.\n[add]\nAgain.\n")
        with pytest.raises(ServiceConfigurationError, match="duplicate"):
            load_docstrings(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ServiceConfigurationError):
            load_docstrings(str(tmp_path / "missing.txt"))


class TestRegistryBuild:
    """Binding weights and docstrings to operations."""

    def test_missing_weight(self, registry):
        """Every operation needs a weight."""
        weights = dict(registry.weights())
        del weights["cast"]
        with pytest.raises(MissingWeight) as e:
            registry_build(weights)
        assert e.value.name == "cast"

    def test_missing_docstring(self, registry, app):
        """When docstrings are given every operation needs one."""
        docs = dict(app.docstrings)
        docs["where_1"] = ""
        with pytest.raises(MissingDocstring) as e:
            registry_build(registry.weights(), docs)
        assert e.value.name == "where_1"

    def test_extra_weights_are_ignored(self, registry):
        """Entries without an operation are only logged."""
        weights = dict(registry.weights())
        weights["retired_op"] = 10
        rebuilt = registry_build(weights)
        assert "retired_op" not in rebuilt
        assert len(rebuilt) == len(registry)


class TestWeightOverrides:
    """Alternative weight files given on the command line."""

    def test_weight_table_defaults_to_registry(self, app):
        assert dict(app.weight_table()) == dict(app.weights)

    def test_weight_table_from_file(self, app, tmp_path):
        path = tmp_path / "weights.conf"
        lines = [f"{name} = {weight + 1}" for name, weight in app.weights.items()]
        path.write_text("\n".join(lines) + "\n")
        table = app.weight_table(str(path))
        assert table["add"] == app.weights["add"] + 1

    def test_weight_table_missing_entry(self, app, tmp_path):
        path = tmp_path / "weights.conf"
        path.write_text("add = 14\n")
        with pytest.raises(MissingWeight):
            app.weight_table(str(path))
