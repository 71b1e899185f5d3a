"""Tests for dataset generation and model training."""

import json

import numpy as np
import pytest

from tensorsynth.exceptions import EmptyDataset, MissingDocstring, ServiceConfigurationError, UnknownOpError
from tensorsynth.guidance import Featurizer
from tensorsynth.learning import (
    CorpusRecord,
    DatasetExample,
    LossKind,
    TrainConfig,
    Trainer,
    Weighting,
    collapse_subtrees,
    cross_entropy,
    example_weight,
    fbeta_loss,
    fit_nl_models,
    generate_dataset,
    read_corpus,
    split_dataset,
)
from tensorsynth.learning.datagen import label_counts, make_example
from tensorsynth.learning.inputs import MAX_ELEMENTS, random_inputs
from tensorsynth.learning.losses import fbeta_loss_and_grad
from tensorsynth.search.evaluate import evaluate_text
from tensorsynth.values import RenderStyle, equal_exact, render

from .factories import input_leaf

ROW_SUMS_PROGRAM = "add(reduce_sum_axis(in1, 1), in2)"


def numeric_gradient(f, x, step=1e-6):
    gradient = np.zeros_like(x)
    for index in np.ndindex(x.shape):
        up, down = x.copy(), x.copy()
        up[index] += step
        down[index] -= step
        gradient[index] = (f(up) - f(down)) / (2 * step)
    return gradient


@pytest.fixture
def row_sums(registry):
    inputs = {"in1": input_leaf("in1", [[1, 2], [3, 4]]), "in2": input_leaf("in2", [10, 20])}
    return evaluate_text(ROW_SUMS_PROGRAM, inputs, registry), inputs


def toy_example(ops, data):
    """A hand-made dataset example."""
    inputs = {"in1": input_leaf("in1", data)}
    return DatasetExample(inputs, input_leaf("in1", data), "in1", tuple(ops))


class TestLosses:
    """Training losses and their gradients."""

    @pytest.mark.parametrize("seed", range(100))
    def test_cross_entropy_gradient(self, seed):
        rng = np.random.default_rng(seed)
        shape = (rng.integers(1, 5), rng.integers(2, 7))
        logits = rng.uniform(-4.0, 4.0, size=shape)
        labels = rng.integers(0, 2, size=shape).astype(float)
        weights = rng.uniform(0.5, 3.0, size=shape)
        result = cross_entropy(logits, labels, weights)
        expected = numeric_gradient(lambda z: cross_entropy(z, labels, weights).loss, logits)
        assert np.allclose(result.gradient, expected, rtol=1e-4, atol=1e-9)

    def test_cross_entropy_large_logits(self):
        """Large logits do not overflow."""
        result = cross_entropy(np.array([1000.0, -1000.0]), np.array([1.0, 0.0]))
        assert result.loss == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.parametrize("seed", range(100))
    @pytest.mark.parametrize("beta", [1.0, 2.0])
    def test_fbeta_gradient(self, beta, seed):
        rng = np.random.default_rng(seed)
        shape = (rng.integers(1, 5), rng.integers(2, 7))
        probs = rng.uniform(0.05, 0.95, size=shape)
        labels = rng.integers(0, 2, size=shape).astype(float)
        weights = rng.uniform(0.5, 3.0, size=shape)
        result = fbeta_loss_and_grad(probs, labels, beta, weights)
        expected = numeric_gradient(lambda p: fbeta_loss(p, labels, beta, weights), probs)
        assert np.allclose(result.gradient, expected, rtol=1e-4, atol=1e-9)

    def test_fbeta_perfect_prediction(self):
        assert fbeta_loss(np.array([1.0, 0.0]), np.array([1.0, 0.0]), 1.0) == pytest.approx(0.0, abs=1e-6)

    def test_fbeta_degenerate_rows(self):
        """All-zero rows score 0 and are counted."""
        result = fbeta_loss_and_grad(np.zeros((2, 3)), np.zeros((2, 3)), 2.0)
        assert result.loss == 0.0
        assert result.degenerate == 2
        assert not result.gradient.any()

    def test_loss_kinds(self):
        assert LossKind.F1.beta == 1.0
        assert LossKind.F2.beta == 2.0


class TestExampleWeight:
    """Boosting rare operations."""

    COUNTS = {"rare": 1, "common": 100, "middle": 10}

    def test_schemes(self):
        assert example_weight("rare", Weighting.NONE, self.COUNTS) == 1.0
        assert example_weight("rare", Weighting.MAX, self.COUNTS) == 100.0
        assert example_weight("rare", Weighting.MEAN, self.COUNTS) == pytest.approx(37.0)
        assert example_weight("common", Weighting.MAX, self.COUNTS) == 1.0

    def test_clip(self):
        assert example_weight("rare", Weighting.MAX, self.COUNTS, clip=50.0) == 50.0

    def test_unknown_operation(self):
        with pytest.raises(UnknownOpError):
            example_weight("other", Weighting.MAX, self.COUNTS)

    def test_zero_count(self):
        with pytest.raises(ValueError):
            example_weight("rare", Weighting.MAX, {"rare": 0})


class TestCollapse:
    """Replacing subtrees by new inputs."""

    def test_variants(self, row_sums):
        """The unchanged expression comes first and the whole collapse last."""
        expression, _ = row_sums
        variants = collapse_subtrees(expression)
        programs = [render(variant, RenderStyle.FUNCTIONAL) for variant, _ in variants]
        assert programs == [ROW_SUMS_PROGRAM, "add(new1, in2)", "new1"]
        assert variants[0][1] == {}
        assert list(variants[1][1]) == ["new1"]
        assert variants[1][1]["new1"].payload.tolist() == [3, 7]
        assert variants[2][1]["new1"].payload.tolist() == [13, 27]

    def test_variants_keep_value(self, row_sums):
        expression, _ = row_sums
        for variant, _ in collapse_subtrees(expression):
            assert equal_exact(variant, expression)

    def test_leaf(self):
        leaf = input_leaf("in1", [1])
        assert collapse_subtrees(leaf) == [(leaf, {})]


class TestDatasetExamples:
    """Filtering programs into training examples."""

    def test_make_example(self, row_sums, registry):
        expression, inputs = row_sums
        example = make_example(expression, inputs, {})
        assert example.program == ROW_SUMS_PROGRAM
        assert example.ops_used == ("add", "reduce_sum_axis")
        assert list(example.inputs) == ["in1", "in2"]
        assert example.verify(registry)

    def test_single_operation_is_dropped(self, row_sums):
        expression, inputs = row_sums
        variant, bindings = collapse_subtrees(expression)[1]
        assert make_example(variant, inputs, bindings) is None

    def test_record_round_trip(self, row_sums, registry):
        expression, inputs = row_sums
        example = make_example(expression, inputs, {})
        loaded = DatasetExample.from_record(json.loads(json.dumps(example.to_record())))
        assert loaded.key == example.key
        assert loaded.verify(registry)

    def test_split_is_deterministic(self):
        dataset = [toy_example(["add"], [i, i + 1]) for i in range(40)]
        train, evaluation = split_dataset(dataset, 0.25)
        assert len(train) + len(evaluation) == 40
        assert split_dataset(dataset, 0.25) == (train, evaluation)
        assert split_dataset(dataset, 0.0) == (dataset, [])

    def test_label_counts(self):
        dataset = [toy_example(["add", "cast"], [1]), toy_example(["add"], [2])]
        assert label_counts(dataset) == {"add": 2, "cast": 1}

    def test_random_inputs(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            inputs = random_inputs(rng)
            assert 1 <= len(inputs) <= 3
            assert list(inputs) == [f"in{i}" for i in range(1, len(inputs) + 1)]
            assert all(value.payload.size <= MAX_ELEMENTS for value in inputs.values())

    def test_generate_dataset(self, registry):
        """A fixed seed gives the same verified examples."""
        subset = registry.subset(["add", "reduce_sum", "reduce_sum_axis", "transpose", "cast"])
        first = generate_dataset(subset, seed=3, runs=2, per_run_cap=40, per_run_values=400)
        second = generate_dataset(subset, seed=3, runs=2, per_run_cap=40, per_run_values=400)
        assert [e.to_record() for e in first] == [e.to_record() for e in second]
        for example in first:
            assert len(example.ops_used) >= 2
            assert 1 <= len(example.inputs) <= 3
            assert example.verify(subset)


class TestTrainer:
    """Fitting the tensor model."""

    def dataset(self):
        adds = [toy_example(["add"], [i, i + 1, i + 2]) for i in range(6)]
        argmaxes = [toy_example(["argmax"], [[float(i), -1.5]]) for i in range(6)]
        return adds + argmaxes

    @pytest.mark.parametrize("loss", [LossKind.CROSS_ENTROPY, LossKind.F1, LossKind.F2])
    def test_loss_decreases(self, loss):
        config = TrainConfig(loss=loss, learning_rate=0.05, epochs=5, batch_size=4, eval_fraction=0.0)
        trainer = Trainer(config, ["add", "argmax"])
        params = trainer.fit(self.dataset())
        assert len(trainer.history) == 6
        assert [row[0] for row in trainer.history] == list(range(6))
        assert trainer.history[-1][1] < trainer.history[0][1]
        assert params.input_dim == len(Featurizer())

    def test_hidden_layer(self):
        config = TrainConfig(learning_rate=0.05, epochs=3, hidden_units=8, eval_fraction=0.0, weighting=Weighting.MAX)
        params = Trainer(config, ["add", "argmax"]).fit(self.dataset())
        assert params.hidden_units == 8

    def test_empty_dataset(self):
        with pytest.raises(EmptyDataset):
            Trainer(TrainConfig(), ["add"]).fit([])

    @pytest.mark.parametrize(
        "overrides",
        [{"epochs": 0}, {"batch_size": 0}, {"learning_rate": 0.0}, {"eval_fraction": 1.0}, {"eval_fraction": -0.1}],
    )
    def test_config_validation(self, overrides):
        with pytest.raises(ValueError):
            TrainConfig(**overrides)


class TestTextModelFitting:
    """Fitting TF-IDF and naive Bayes from docstrings and a corpus."""

    def test_missing_docstring(self):
        with pytest.raises(MissingDocstring):
            fit_nl_models({"add": "Adds tensors."}, ops=["add", "argmax"])

    def test_corpus_adds_evidence(self):
        """Corpus texts teach naive Bayes words the docstrings use elsewhere."""
        docstrings = {"add": "Adds two tensors elementwise.", "argmax": "Index of the largest value along an axis."}
        _, plain = fit_nl_models(docstrings)
        corpus = [CorpusRecord("position of the largest tensors entry", ("argmax",))] * 3
        _, informed = fit_nl_models(docstrings, corpus)
        assert informed.posteriors("tensors")[1] > plain.posteriors("tensors")[1]

    def test_read_corpus(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        path.write_text('{"text": "sum rows", "ops": ["reduce_sum_axis"]}\n\n{"text": "x", "ops": []}\n')
        records = read_corpus(str(path), ["reduce_sum_axis"])
        assert records == [CorpusRecord("sum rows", ("reduce_sum_axis",)), CorpusRecord("x", ())]

    @pytest.mark.parametrize("line", ['{"text": 3, "ops": []}', '{"text": "x"}', "[1, 2]", "{not json"])
    def test_malformed_corpus(self, tmp_path, line):
        path = tmp_path / "corpus.jsonl"
        path.write_text(line + "\n")
        with pytest.raises(ServiceConfigurationError):
            read_corpus(str(path))

    def test_corpus_unknown_operation(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        path.write_text('{"text": "magic", "ops": ["tf_magic"]}\n')
        with pytest.raises(UnknownOpError):
            read_corpus(str(path), ["add"])
