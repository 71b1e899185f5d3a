"""Naive Bayes model predicting operations from a description.

Every operation is a separate two-class problem: does a text use it or not.
Term evidence is the TF-IDF score of the term in each training text, summed
per operation (texts using it) and over the complement (texts not using it).
Probabilities use Lidstone smoothing and both classes have prior 0.5.
"""

from typing import Any, Dict, Mapping, Sequence

import numpy as np

from ..exceptions import ServiceConfigurationError
from .base import FORMAT_VERSION, GuidanceModel, ModelSource, PrioritizedOps
from .config import GuidanceModelConfig
from .text import term_counts

PRIOR = 0.5


class NaiveBayesModel(GuidanceModel):
    """Per-operation two-class naive Bayes over a frozen vocabulary."""

    source = ModelSource.NAIVE_BAYES

    def __init__(
        self,
        config: GuidanceModelConfig,
        ops: Sequence[str],
        vocabulary: Sequence[str],
        denominators: np.ndarray,
        term_totals: np.ndarray,
        corpus_totals: np.ndarray,
    ):
        """Build the model from accumulated evidence.

        Args:
            config: model configuration (alpha, p, k, multiplier)
            ops: operation names, one per row of ``term_totals``
            vocabulary: terms, one per column
            denominators: TF-IDF denominator of every term
            term_totals: N[op, term], evidence of each term co-occurring with each op
            corpus_totals: evidence of each term over the whole corpus
        """
        super().__init__(config)
        self.ops = list(ops)
        self.vocabulary = list(vocabulary)
        self.denominators = np.asarray(denominators, dtype=np.float64)
        self.term_totals = np.asarray(term_totals, dtype=np.float64).reshape(len(self.ops), len(self.vocabulary))
        self.corpus_totals = np.asarray(corpus_totals, dtype=np.float64)
        self.op_totals = self.term_totals.sum(axis=1)

        alpha = config.alpha
        n = len(self.vocabulary)
        complement = np.maximum(self.corpus_totals[None, :] - self.term_totals, 0.0)
        log_positive = np.log((self.term_totals + alpha) / (self.op_totals[:, None] + alpha * n))
        log_negative = np.log((complement + alpha) / (complement.sum(axis=1)[:, None] + alpha * n))
        self.log_ratio = log_positive - log_negative

    @classmethod
    def fit(
        cls,
        config: GuidanceModelConfig,
        texts: Sequence[str],
        labels: Sequence[Sequence[str]],
        ops: Sequence[str],
        vocabulary: Sequence[str],
        denominators: np.ndarray,
    ) -> "NaiveBayesModel":
        """Accumulate evidence from labelled texts.

        Args:
            config: model configuration
            texts: training texts
            labels: operation names used by each text
            ops: every operation the model can predict
            vocabulary: frozen vocabulary; other terms are ignored
            denominators: TF-IDF denominators of the vocabulary terms
        """
        index = {name: i for i, name in enumerate(ops)}
        scores = term_counts(texts, vocabulary) / np.asarray(denominators) if vocabulary else np.zeros((len(texts), 0))
        term_totals = np.zeros((len(ops), len(vocabulary)))
        for row, used in zip(scores, labels):
            for name in set(used):
                if name in index:
                    term_totals[index[name]] += row
        corpus_totals = scores.sum(axis=0) if len(texts) else np.zeros(len(vocabulary))
        return cls(config, ops, vocabulary, denominators, term_totals, corpus_totals)

    def posteriors(self, description: str) -> np.ndarray:
        """P(op used | description) for every operation."""
        counts = term_counts([description or ""], self.vocabulary)[0]
        log_odds = self.log_ratio @ counts + np.log(PRIOR) - np.log(1 - PRIOR)
        return 1.0 / (1.0 + np.exp(-log_odds))

    def rank(self, description: str) -> PrioritizedOps:
        """Up to k operations with posterior above p, most likely first."""
        posterior = self.posteriors(description)
        order = np.argsort(-posterior, kind="stable")
        ranked = [(self.ops[i], posterior[i]) for i in order if posterior[i] > self.config.p]
        return self._prediction(ranked[: self.config.k])

    def prioritize(self, task) -> PrioritizedOps:
        return self.rank(task.description)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format_version": FORMAT_VERSION,
            "kind": "naive_bayes",
            "ops": self.ops,
            "vocabulary": self.vocabulary,
            "denominators": self.denominators.tolist(),
            "corpus_totals": self.corpus_totals.tolist(),
            "term_totals": [
                {self.vocabulary[j]: float(row[j]) for j in np.flatnonzero(row)} for row in self.term_totals
            ],
        }

    @classmethod
    def from_dict(cls, config: GuidanceModelConfig, data: Mapping[str, Any]) -> "NaiveBayesModel":
        """Rebuild a model saved with :meth:`to_dict`.

        Raises:
            ServiceConfigurationError: If the document is not a naive Bayes model
        """
        if data.get("format_version") != FORMAT_VERSION or data.get("kind") != "naive_bayes":
            raise ServiceConfigurationError("Not a naive Bayes model file of a supported version")
        vocabulary = data["vocabulary"]
        index = {term: j for j, term in enumerate(vocabulary)}
        term_totals = np.zeros((len(data["ops"]), len(vocabulary)))
        for i, row in enumerate(data["term_totals"]):
            for term, total in row.items():
                term_totals[i, index[term]] = total
        return cls(config, data["ops"], vocabulary, data["denominators"], term_totals, data["corpus_totals"])


def nb_rank(description: str, model: NaiveBayesModel) -> PrioritizedOps:
    return model.rank(description)
