"""Tokenization shared by the natural language models.

Text is lowercased and split on anything that is not a letter or digit;
tokens shorter than two characters and English stop words are dropped.
"""

from typing import Iterable, List, Optional, Sequence

import numpy as np
from sklearn.feature_extraction.text import CountVectorizer

TOKEN_PATTERN = r"(?u)[a-z0-9]{2,}"


def make_vectorizer(vocabulary: Optional[Sequence[str]] = None) -> CountVectorizer:
    """A term counter; with a vocabulary, unknown terms are ignored."""
    return CountVectorizer(
        lowercase=True,
        token_pattern=TOKEN_PATTERN,
        stop_words="english",
        vocabulary=list(vocabulary) if vocabulary is not None else None,
    )


def tokenize(text: str) -> List[str]:
    return make_vectorizer().build_analyzer()(text)


def fit_vocabulary(texts: Iterable[str]) -> List[str]:
    """Sorted terms appearing at least once in the texts."""
    vectorizer = make_vectorizer()
    try:
        vectorizer.fit(list(texts))
    except ValueError:
        # every text was empty or only stop words
        return []
    return list(vectorizer.get_feature_names_out())


def term_counts(texts: Sequence[str], vocabulary: Sequence[str]) -> np.ndarray:
    """Dense matrix of term counts, one row per text, one column per vocabulary term."""
    if not vocabulary:
        return np.zeros((len(texts), 0))
    counts = make_vectorizer(vocabulary).transform(list(texts))
    return counts.toarray().astype(np.float64)
