"""TF-IDF model ranking operations by similarity of their docstrings to a description."""

from typing import Any, Dict, Mapping, Sequence

import numpy as np
from sklearn.metrics.pairwise import cosine_similarity

from ..exceptions import ServiceConfigurationError
from .base import FORMAT_VERSION, GuidanceModel, ModelSource, PrioritizedOps
from .config import GuidanceModelConfig
from .text import fit_vocabulary, term_counts


class TfIdfModel(GuidanceModel):
    """Cosine similarity between TF-IDF vectors of the description and of each docstring.

    A term's score in a text is its count divided by the log of its total
    count over all docstrings plus one, as if one extra docstring held every
    term exactly once.
    """

    source = ModelSource.TFIDF

    def __init__(self, config: GuidanceModelConfig, ops: Sequence[str], vocabulary: Sequence[str], counts: np.ndarray):
        """Build the model from per-operation term counts.

        Args:
            config: model configuration (k, min_score, multiplier)
            ops: operation names, one per row of ``counts``
            vocabulary: terms, one per column of ``counts``
            counts: term counts of each operation's docstring
        """
        super().__init__(config)
        self.ops = list(ops)
        self.vocabulary = list(vocabulary)
        self.counts = np.asarray(counts, dtype=np.float64).reshape(len(self.ops), len(self.vocabulary))
        self.denominators = np.log1p(self.counts.sum(axis=0))
        self.vectors = self.scores(self.counts)

    @classmethod
    def fit(cls, config: GuidanceModelConfig, docstrings: Mapping[str, str]) -> "TfIdfModel":
        """Fit on operation docstrings, keeping their order."""
        ops = list(docstrings)
        texts = [docstrings[name] for name in ops]
        vocabulary = fit_vocabulary(texts)
        return cls(config, ops, vocabulary, term_counts(texts, vocabulary))

    def scores(self, counts: np.ndarray) -> np.ndarray:
        """TF-IDF scores for rows of term counts."""
        if not self.vocabulary:
            return np.zeros_like(counts)
        return counts / self.denominators

    def vectorize(self, text: str) -> np.ndarray:
        return self.scores(term_counts([text], self.vocabulary))[0]

    def similarities(self, description: str) -> np.ndarray:
        """Cosine similarity of the description with every operation."""
        query = self.vectorize(description or "")
        if not query.any():
            return np.zeros(len(self.ops))
        return cosine_similarity(query.reshape(1, -1), self.vectors)[0]

    def rank(self, description: str) -> PrioritizedOps:
        """Up to k operations with similarity at least min_score, most similar first."""
        similarity = self.similarities(description)
        order = np.argsort(-similarity, kind="stable")
        ranked = [(self.ops[i], similarity[i]) for i in order if similarity[i] >= self.config.min_score]
        return self._prediction(ranked[: self.config.k])

    def prioritize(self, task) -> PrioritizedOps:
        return self.rank(task.description)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format_version": FORMAT_VERSION,
            "kind": "tfidf",
            "ops": self.ops,
            "vocabulary": self.vocabulary,
            "counts": [
                {self.vocabulary[j]: int(row[j]) for j in np.flatnonzero(row)} for row in self.counts
            ],
        }

    @classmethod
    def from_dict(cls, config: GuidanceModelConfig, data: Mapping[str, Any]) -> "TfIdfModel":
        """Rebuild a model saved with :meth:`to_dict`.

        Raises:
            ServiceConfigurationError: If the document is not a TF-IDF model
        """
        if data.get("format_version") != FORMAT_VERSION or data.get("kind") != "tfidf":
            raise ServiceConfigurationError("Not a TF-IDF model file of a supported version")
        vocabulary = data["vocabulary"]
        index = {term: j for j, term in enumerate(vocabulary)}
        counts = np.zeros((len(data["ops"]), len(vocabulary)))
        for i, row in enumerate(data["counts"]):
            for term, count in row.items():
                counts[i, index[term]] = count
        return cls(config, data["ops"], vocabulary, counts)


def tfidf_rank(description: str, model: TfIdfModel) -> PrioritizedOps:
    return model.rank(description)
