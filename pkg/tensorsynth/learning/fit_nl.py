"""Fitting the TF-IDF and naive Bayes models."""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Mapping, Optional, Sequence, Tuple

from ..common.recording import read_jsonl
from ..exceptions import MissingDocstring, ServiceConfigurationError, UnknownOpError
from ..guidance.config import GuidanceModelConfig
from ..guidance.naive_bayes import NaiveBayesModel
from ..guidance.tfidf import TfIdfModel

logger = logging.getLogger(__name__)

DEFAULT_TFIDF_CONFIG = GuidanceModelConfig(name="tfidf", kind="tfidf", file="tfidf_model.json")
DEFAULT_NB_CONFIG = GuidanceModelConfig(name="naive_bayes", kind="naive_bayes", file="nb_model.json", k=3)


@dataclass(frozen=True)
class CorpusRecord:
    """A piece of natural language and the operations used next to it."""

    text: str
    ops: Tuple[str, ...]


def read_corpus(path: str, known_ops: Optional[Sequence[str]] = None) -> List[CorpusRecord]:
    """Read a JSON Lines corpus of ``{"text": ..., "ops": [...]}`` records.

    Raises:
        ServiceConfigurationError: If a record is malformed
        UnknownOpError: If a record names an operation outside ``known_ops``
    """
    known = set(known_ops) if known_ops is not None else None
    records = []
    for number, raw in enumerate(read_jsonl(path), start=1):
        if not isinstance(raw, dict) or not isinstance(raw.get("text"), str) or not isinstance(raw.get("ops"), list):
            raise ServiceConfigurationError(f"{path}: record {number} must have a 'text' string and an 'ops' list")
        ops = tuple(raw["ops"])
        if known is not None:
            for name in ops:
                if name not in known:
                    raise UnknownOpError(name, sorted(known))
        records.append(CorpusRecord(raw["text"], ops))
    return records


def fit_nl_models(
    docstrings: Mapping[str, str],
    corpus: Optional[Iterable[CorpusRecord]] = None,
    *,
    ops: Optional[Sequence[str]] = None,
    tfidf_config: Optional[GuidanceModelConfig] = None,
    nb_config: Optional[GuidanceModelConfig] = None,
) -> Tuple[TfIdfModel, NaiveBayesModel]:
    """Fit TF-IDF on the docstrings alone and naive Bayes on docstrings plus corpus.

    Each docstring is also a naive Bayes record labelled with its own
    operation. Naive Bayes uses the TF-IDF vocabulary, so corpus terms that
    never appear in a docstring are ignored.

    Args:
        docstrings: operation name -> docstring
        corpus: extra labelled texts for naive Bayes
        ops: operations the models predict, defaults to the docstring keys
        tfidf_config: TF-IDF hyperparameters
        nb_config: naive Bayes hyperparameters

    Raises:
        MissingDocstring: If an operation in ``ops`` has no docstring
    """
    ops = list(ops) if ops is not None else list(docstrings)
    for name in ops:
        if not docstrings.get(name):
            raise MissingDocstring(name)
    ordered = {name: docstrings[name] for name in ops}
    tfidf = TfIdfModel.fit(tfidf_config or DEFAULT_TFIDF_CONFIG, ordered)

    texts = list(ordered.values())
    labels: List[Sequence[str]] = [(name,) for name in ops]
    extra = 0
    for record in corpus or ():
        texts.append(record.text)
        labels.append(record.ops)
        extra += 1
    naive_bayes = NaiveBayesModel.fit(
        nb_config or DEFAULT_NB_CONFIG, texts, labels, ops, tfidf.vocabulary, tfidf.denominators
    )
    logger.info(
        "Fitted text models on %d docstrings and %d corpus records, %d terms", len(ops), extra, len(tfidf.vocabulary)
    )
    return tfidf, naive_bayes
