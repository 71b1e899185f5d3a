"""Tests for operation prioritization."""

import json

import numpy as np
import pytest

from tensorsynth.exceptions import (
    DimensionMismatch,
    ServiceConfigurationError,
    TooManyInputs,
    UnknownOpError,
)
from tensorsynth.guidance import (
    BucketConfig,
    Featurizer,
    GuidanceFactory,
    GuidanceModelConfig,
    ModelSource,
    NaiveBayesModel,
    PrioritizedOps,
    TensorModel,
    TensorModelParams,
    TfIdfModel,
    featurize,
    load_guidance,
    load_guidance_config,
    prioritize,
    reweight,
    tensor_model_predict,
)
from tensorsynth.guidance import factory
from tensorsynth.guidance.features import bucket
from tensorsynth.guidance.text import fit_vocabulary, tokenize
from tensorsynth.learning.fit_nl import fit_nl_models
from tensorsynth.registry import WeightTable

from .factories import make_task

TFIDF_CONFIG = GuidanceModelConfig(name="tfidf", kind="tfidf", file="tfidf_model.json", k=5, min_score=0.15)
NB_CONFIG = GuidanceModelConfig(name="naive_bayes", kind="naive_bayes", file="nb_model.json", k=3, p=0.5)
TENSOR_CONFIG = GuidanceModelConfig(name="tensor", kind="tensor", file="tensor_model.json")


def prediction(*ops, multiplier=0.75, source=ModelSource.TFIDF):
    return PrioritizedOps(source=source, ops=tuple(ops), multiplier=multiplier)


class TestReweight:
    """Multiplying prioritized weights."""

    def test_single_model(self):
        """Weights are rounded half up."""
        base = WeightTable({"argmax": 36, "add": 14})
        table = reweight(base, [prediction("argmax")])
        assert table["argmax"] == 27
        assert table["add"] == 14

    def test_models_compound(self):
        """An operation prioritized by two models gets both multipliers."""
        base = WeightTable({"argmax": 36})
        table = reweight(base, [prediction("argmax"), prediction("argmax", source=ModelSource.NAIVE_BAYES)])
        assert table["argmax"] == 20

    def test_never_below_one(self):
        table = reweight(WeightTable({"add": 1}), [prediction("add", multiplier=0.1)])
        assert table["add"] == 1

    def test_unknown_operation(self):
        with pytest.raises(UnknownOpError):
            reweight(WeightTable({"add": 14}), [prediction("nope")])

    def test_no_predictions(self):
        base = WeightTable({"add": 14})
        assert dict(reweight(base, [])) == {"add": 14}

    @pytest.mark.parametrize("seed", range(20))
    def test_weights_shrink_within_bounds(self, seed):
        """Reweighting keeps every weight between 1 and its base weight."""
        rng = np.random.default_rng(seed)
        ops = [f"op{i}" for i in range(12)]
        base = WeightTable({op: int(w) for op, w in zip(ops, rng.integers(1, 200, size=len(ops)))})
        predictions = []
        for multiplier in rng.uniform(0.05, 1.0, size=rng.integers(1, 4)):
            chosen = rng.choice(ops, size=rng.integers(0, len(ops) + 1), replace=False)
            predictions.append(prediction(*map(str, chosen), multiplier=float(multiplier)))
        table = reweight(base, predictions)
        for op in ops:
            assert 1 <= table[op] <= base[op]

    @pytest.mark.parametrize("multiplier", [0.0, -0.5, 1.5])
    def test_invalid_multiplier(self, multiplier):
        with pytest.raises(ValueError):
            prediction("add", multiplier=multiplier)


class TestGuidanceConfig:
    """Loading guidance.yaml."""

    def test_shipped_config(self, app):
        """The shipped file configures one model of each kind."""
        config = app.guidance_config
        assert config.list_models() == ["tensor", "tfidf", "naive_bayes"]
        assert config.get_model_config("naive_bayes").k == 3
        assert config.of_kind("tfidf").min_score == 0.15
        assert config.get_model_config("tensor").multiplier == app.config["PRIORITIZATION_MULTIPLIER"]

    def test_unknown_model(self, app):
        with pytest.raises(ServiceConfigurationError, match="not configured"):
            app.guidance_config.get_model_config("gpt")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ServiceConfigurationError, match="not found"):
            load_guidance_config(str(tmp_path / "missing.yaml"))

    def test_invalid_yaml(self, tmp_path):
        path = tmp_path / "guidance.yaml"
        path.write_text("models: [unclosed\n")
        with pytest.raises(ServiceConfigurationError, match="Invalid YAML"):
            load_guidance_config(str(path))

    def test_missing_models_key(self, tmp_path):
        path = tmp_path / "guidance.yaml"
        path.write_text("buckets: {}\n")
        with pytest.raises(ServiceConfigurationError, match='top-level "models" key'):
            load_guidance_config(str(path))

    def test_models_must_be_mapping(self, tmp_path):
        path = tmp_path / "guidance.yaml"
        path.write_text("models:\n  - tfidf\n")
        with pytest.raises(ServiceConfigurationError, match="dictionary"):
            load_guidance_config(str(path))

    def test_invalid_model(self, tmp_path):
        """Model errors name the model."""
        path = tmp_path / "guidance.yaml"
        path.write_text("models:\n  text:\n    kind: bert\n    file: bert.json\n")
        with pytest.raises(ServiceConfigurationError, match="'text'"):
            load_guidance_config(str(path))

    def test_missing_model_file_key(self, tmp_path):
        path = tmp_path / "guidance.yaml"
        path.write_text("models:\n  tfidf:\n    kind: tfidf\n")
        with pytest.raises(ServiceConfigurationError):
            load_guidance_config(str(path))

    def test_default_multiplier(self, tmp_path):
        path = tmp_path / "guidance.yaml"
        path.write_text("models:\n  tfidf:\n    kind: tfidf\n    file: t.json\n")
        config = load_guidance_config(str(path), default_multiplier=0.5)
        assert config.get_model_config("tfidf").multiplier == 0.5
        assert config.buckets == BucketConfig()

    def test_invalid_buckets(self, tmp_path):
        path = tmp_path / "guidance.yaml"
        path.write_text("models: {}\nbuckets:\n  count_edges: [3, 1]\n")
        with pytest.raises(ServiceConfigurationError, match="bucket"):
            load_guidance_config(str(path))

    @pytest.mark.parametrize(
        "overrides",
        [{"kind": "bert"}, {"multiplier": 0.0}, {"multiplier": 1.2}, {"k": 0}, {"alpha": 0.0}],
    )
    def test_model_config_validation(self, overrides):
        values = {"name": "m", "kind": "tfidf", "file": "m.json", **overrides}
        with pytest.raises(ValueError):
            GuidanceModelConfig(**values)

    @pytest.mark.parametrize("edges", [(), (1, 1), (3, 2, 5)])
    def test_bucket_validation(self, edges):
        with pytest.raises(ValueError):
            BucketConfig(count_edges=edges)


class TestFeatures:
    """Featurizing examples."""

    def test_fixed_length(self):
        """Every task has the same feature names."""
        featurizer = Featurizer()
        assert len(featurizer) == 574
        one = featurizer.featurize(make_task({"in1": [1, 2]}, [2, 1]))
        two = featurizer.featurize(make_task({"in1": [[1.5]], "in2": [True, False]}, [0.5]))
        assert one.names == two.names == featurizer.names
        assert len(one) == 574

    def test_dummy_padding(self):
        """Missing inputs are dummies and the input count is one-hot."""
        fv = featurize(make_task({"in1": [1, 2, 3]}, [3, 2, 1]))
        assert fv["in1.kind.tensor"] == 1.0
        assert fv["in2.kind.dummy"] == 1.0
        assert fv["in3.kind.dummy"] == 1.0
        assert fv["num_inputs.1"] == 1.0
        assert fv["num_inputs.2"] == 0.0

    def test_value_features(self):
        fv = featurize(make_task({"in1": [[1, 2], [3, 4]]}, [3, 7]))
        assert fv["in1.rank.2"] == 1.0
        assert fv["in1.dtype.int32"] == 1.0
        assert fv["out.rank.1"] == 1.0
        assert fv["in1.all_positive"] == 1.0
        assert fv["in1.sorted"] == 1.0
        assert fv["in1.dim0.le3"] == 1.0
        assert fv["in1.dim2.absent"] == 1.0

    def test_comparison_features(self):
        """Input elements found in the output are counted."""
        fv = featurize(make_task({"in1": [3, 1, 2]}, [1, 2, 3]))
        assert fv["in1_out.same_shape"] == 1.0
        assert fv["in1_out.all_in_found"] == 1.0
        assert fv["in1_out.frac_out_found"] == 1.0
        assert fv["in1_out.num_elements.equal"] == 1.0

    def test_too_many_inputs(self):
        featurizer = Featurizer()
        value = make_task({"in1": [1]}, [1]).output
        with pytest.raises(TooManyInputs):
            featurizer.featurize_example([value] * 4, value)

    @pytest.mark.parametrize("x, expected", [(-20, 0), (-10, 0), (0, 2), (2, 3), (3, 3), (1000, 7)])
    def test_bucket(self, x, expected):
        assert bucket(x, BucketConfig().count_edges) == expected


class TestTextModels:
    """TF-IDF and naive Bayes over operation docstrings."""

    def test_tokenize(self):
        """Stop words and single characters are dropped."""
        assert tokenize("Sort the tensor, then return a 2D index!") == ["sort", "tensor", "return", "2d", "index"]

    def test_vocabulary_of_stop_words(self):
        assert fit_vocabulary(["the", ""]) == []

    def test_tfidf_finds_sort(self, app):
        """Sorting descriptions rank the stable argsort highly."""
        model = TfIdfModel.fit(TFIDF_CONFIG, app.docstrings)
        similarity = model.similarities("sort a tensor and return indices")
        top = [model.ops[i] for i in np.argsort(-similarity, kind="stable")[:5]]
        assert "argsort_stable" in top

    def test_tfidf_empty_description(self, app):
        """Nothing to match means nothing is prioritized."""
        model = TfIdfModel.fit(TFIDF_CONFIG, app.docstrings)
        assert not model.similarities("").any()
        assert model.rank("").ops == ()

    def test_tfidf_rank_respects_k(self, app):
        model = TfIdfModel.fit(TFIDF_CONFIG, app.docstrings)
        ranked = model.rank("sort a tensor and return indices")
        assert 0 < len(ranked.ops) <= 5
        assert list(ranked.scores) == sorted(ranked.scores, reverse=True)
        assert ranked.multiplier == TFIDF_CONFIG.multiplier

    def test_tfidf_round_trip(self, app):
        model = TfIdfModel.fit(TFIDF_CONFIG, app.docstrings)
        loaded = TfIdfModel.from_dict(TFIDF_CONFIG, model.to_dict())
        text = "gather rows using indices"
        assert loaded.rank(text) == model.rank(text)

    @pytest.mark.parametrize("data", [{}, {"format_version": 2, "kind": "tfidf"}, {"format_version": 1, "kind": "nb"}])
    def test_tfidf_rejects_other_documents(self, data):
        with pytest.raises(ServiceConfigurationError):
            TfIdfModel.from_dict(TFIDF_CONFIG, data)

    def test_naive_bayes_fit(self):
        """Terms seen with an operation raise its posterior."""
        texts = ["add numbers together", "sort values ascending"]
        vocabulary = fit_vocabulary(texts)
        model = NaiveBayesModel.fit(
            NB_CONFIG, texts, [["add"], ["sort"]], ["add", "sort"], vocabulary, np.ones(len(vocabulary))
        )
        posterior = model.posteriors("add the numbers")
        assert posterior[0] > 0.5 > posterior[1]
        assert model.rank("add the numbers").ops == ("add",)

    def test_naive_bayes_empty_description(self, app):
        """Without evidence every posterior is the prior and nothing passes p."""
        _, model = fit_nl_models(app.docstrings)
        assert np.allclose(model.posteriors(""), 0.5)
        assert model.rank("").ops == ()

    def test_naive_bayes_round_trip(self, app):
        _, model = fit_nl_models(app.docstrings, tfidf_config=TFIDF_CONFIG, nb_config=NB_CONFIG)
        loaded = NaiveBayesModel.from_dict(NB_CONFIG, model.to_dict())
        text = "count how many times each value appears"
        assert np.allclose(loaded.posteriors(text), model.posteriors(text))

    def test_naive_bayes_rejects_other_documents(self):
        with pytest.raises(ServiceConfigurationError):
            NaiveBayesModel.from_dict(NB_CONFIG, {"format_version": 1, "kind": "tfidf"})


class TestTensorModel:
    """The feature classifier."""

    def test_zeros_predict_nothing(self):
        """Probability 0.5 is not strictly above the threshold."""
        featurizer = Featurizer()
        params = TensorModelParams.zeros(["add", "argmax"], len(featurizer))
        fv = featurizer.featurize(make_task({"in1": [1, 2]}, [2, 4]))
        assert tensor_model_predict(fv, params, threshold=0.5).ops == ()

    def test_bias_selects_operation(self):
        featurizer = Featurizer()
        params = TensorModelParams(["add", "argmax"], np.zeros((2, len(featurizer))), [2.0, -2.0])
        model = TensorModel(TENSOR_CONFIG, params, featurizer)
        result = model.prioritize(make_task({"in1": [1, 2]}, [2, 4]))
        assert result.ops == ("add",)
        assert result.source is ModelSource.TENSOR_MODEL
        assert result.scores[0] > 0.8

    def test_hidden_layer_round_trip(self):
        params = TensorModelParams.initial(["add", "argmax"], 10, hidden_units=4, seed=3)
        loaded = TensorModelParams.from_dict(params.to_dict())
        assert loaded.hidden_units == 4
        features = np.linspace(-1, 1, 10)
        assert np.allclose(loaded.logits(features), params.logits(features))

    def test_feature_length_mismatch(self):
        params = TensorModelParams.zeros(["add"], 3)
        with pytest.raises(DimensionMismatch):
            params.logits(np.zeros(4))
        with pytest.raises(DimensionMismatch):
            TensorModel(TENSOR_CONFIG, params, Featurizer())

    def test_inconsistent_layers(self):
        with pytest.raises(ValueError):
            TensorModelParams(["add", "argmax"], np.zeros((1, 3)), np.zeros(1))

    @pytest.mark.parametrize(
        "data",
        [
            {"format_version": 1, "kind": "tfidf"},
            {"format_version": 1, "kind": "tensor", "ops": ["add"]},
            {"format_version": 1, "kind": "tensor", "ops": ["add"], "weights": [[0, 0]], "bias": [0], "input_dim": 3},
        ],
    )
    def test_invalid_documents(self, data):
        with pytest.raises(ServiceConfigurationError):
            TensorModelParams.from_dict(data)


class TestLoading:
    """Building models from files and configuration."""

    def test_unsupported_kind(self):
        config = GuidanceModelConfig(name="m", kind="tfidf", file="m.json")
        config.kind = "bert"
        with pytest.raises(ServiceConfigurationError, match="Unsupported"):
            GuidanceFactory.create_model(config, {})

    def test_create_tensor_model(self):
        featurizer = Featurizer()
        data = TensorModelParams.zeros(["add"], len(featurizer)).to_dict()
        model = GuidanceFactory.create_model(TENSOR_CONFIG, data, featurizer)
        assert isinstance(model, TensorModel)
        assert model.ops == ("add",)

    def test_missing_files(self, app, mocker):
        """Text models are fitted from docstrings and the tensor model is skipped."""
        warning = mocker.spy(factory.logger, "warning")
        models = load_guidance(app.guidance_config, app.config["MODELS_DIR"], app.registry, app.docstrings)
        assert [type(model) for model in models] == [TfIdfModel, NaiveBayesModel]
        assert "tensor model is disabled" in warning.call_args[0][0]

    def test_model_switches(self, app):
        models = load_guidance(
            app.guidance_config, app.config["MODELS_DIR"], app.registry, use_tensor_model=False, use_nl_models=False
        )
        assert models == []

    def test_unregistered_prediction(self, app, tmp_path):
        """Saved models may only predict registered operations."""
        featurizer = Featurizer(app.guidance_config.buckets)
        params = TensorModelParams.zeros(["add", "tf_magic"], len(featurizer))
        (tmp_path / "tensor_model.json").write_text(json.dumps(params.to_dict()))
        with pytest.raises(ServiceConfigurationError, match="tf_magic"):
            load_guidance(app.guidance_config, str(tmp_path), app.registry, use_nl_models=False)

    def test_application_caches_models(self, app):
        assert app.guidance() is app.guidance()

    def test_prioritize_drops_silent_models(self, app):
        """Models that predict nothing contribute no prediction."""
        task = make_task({"in1": [3, 1, 2]}, [1, 2, 0], description="")
        assert prioritize(app.guidance(), task) == []

    def test_prioritized_weights(self, app):
        task = make_task({"in1": [3, 1, 2]}, [1, 2, 0], description="sort a tensor and return indices")
        table, predictions = app.prioritized_weights(task, app.weights, app.guidance())
        assert predictions
        for name in predictions[0].ops:
            assert table[name] < app.weights[name]
