"""Word n-gram TFIDF vectorization with L1/L2 normalization.

Fitting collects every distinct n-gram of the corpus into a vocabulary
indexed in lexicographic order and assigns each term the smoothed
inverse document frequency

    idf(t) = ln((1 + n_docs) / (1 + df(t))) + 1

which is strictly positive.  Transforming a document multiplies raw
in-document term counts by idf and optionally rescales the vector to
unit absolute sum (L1) or unit Euclidean length (L2).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum

import numpy as np


class Norm(Enum):
    L1 = "l1"
    L2 = "l2"
    NONE = "none"


@dataclass(frozen=True)
class NgramRange:
    min_n: int
    max_n: int

    def __post_init__(self):
        if not 1 <= self.min_n <= self.max_n:
            raise ValueError(
                f"need 1 <= min_n <= max_n, got ({self.min_n}, {self.max_n})"
            )


@dataclass(frozen=True)
class SparseVector:
    """Sorted sparse vector: strictly increasing indices, non-zero values."""

    indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "indices", np.asarray(self.indices, dtype=np.int64))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        if self.indices.shape != self.values.shape or self.indices.ndim != 1:
            raise ValueError("indices and values must be 1-d arrays of equal length")
        if self.indices.size and np.any(np.diff(self.indices) <= 0):
            raise ValueError("indices must be strictly increasing")

    @classmethod
    def empty(cls) -> "SparseVector":
        return cls(np.empty(0, dtype=np.int64), np.empty(0, dtype=np.float64))

    @classmethod
    def from_dict(cls, entries: dict[int, float]) -> "SparseVector":
        items = sorted((i, v) for i, v in entries.items() if v != 0.0)
        if not items:
            return cls.empty()
        idx, vals = zip(*items)
        return cls(np.array(idx, dtype=np.int64), np.array(vals, dtype=np.float64))

    def to_dict(self) -> dict[int, float]:
        return {int(i): float(v) for i, v in zip(self.indices, self.values)}

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseVector):
            return NotImplemented
        return np.array_equal(self.indices, other.indices) and np.array_equal(
            self.values, other.values
        )

    def __hash__(self):
        return hash((self.indices.tobytes(), self.values.tobytes()))


@dataclass(frozen=True, eq=False)
class Vocabulary:
    term_index: dict[str, int]
    doc_freq: np.ndarray
    n_docs: int

    def __len__(self) -> int:
        return len(self.term_index)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Vocabulary):
            return NotImplemented
        return (
            self.term_index == other.term_index
            and np.array_equal(self.doc_freq, other.doc_freq)
            and self.n_docs == other.n_docs
        )


@dataclass(frozen=True, eq=False)
class TfidfModel:
    vocabulary: Vocabulary
    idf: np.ndarray
    ngram_range: NgramRange = NgramRange(1, 1)
    norm: Norm = Norm.L2

    @property
    def n_features(self) -> int:
        return len(self.vocabulary)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TfidfModel):
            return NotImplemented
        return (
            self.vocabulary == other.vocabulary
            and np.array_equal(self.idf, other.idf)
            and self.ngram_range == other.ngram_range
            and self.norm == other.norm
        )


def extract_ngrams(tokens: list[str], ngram_range: NgramRange) -> list[str]:
    """All contiguous n-grams for each n in the range, joined by single
    spaces, in window order."""
    out: list[str] = []
    n_tokens = len(tokens)
    for n in range(ngram_range.min_n, ngram_range.max_n + 1):
        if n == 1:
            out.extend(tokens)
            continue
        for i in range(n_tokens - n + 1):
            out.append(" ".join(tokens[i : i + n]))
    return out


def fit(
    corpus: list[list[str]], ngram_range: NgramRange, norm: Norm
) -> TfidfModel:
    """Build the vocabulary and idf weights from a training corpus."""
    if not corpus:
        raise ValueError("cannot fit on an empty corpus")
    df_counter: Counter[str] = Counter()
    for tokens in corpus:
        df_counter.update(set(extract_ngrams(tokens, ngram_range)))
    if not df_counter:
        raise ValueError("every document is empty: no n-grams to index")
    terms = sorted(df_counter)
    term_index = {t: i for i, t in enumerate(terms)}
    doc_freq = np.array([df_counter[t] for t in terms], dtype=np.int64)
    n_docs = len(corpus)
    idf = np.log((1.0 + n_docs) / (1.0 + doc_freq)) + 1.0
    vocab = Vocabulary(term_index=term_index, doc_freq=doc_freq, n_docs=n_docs)
    return TfidfModel(vocabulary=vocab, idf=idf, ngram_range=ngram_range, norm=norm)


def transform(tokens: list[str], model: TfidfModel) -> SparseVector:
    """TFIDF-weight a document against a fitted model.

    Out-of-vocabulary n-grams are dropped; a document with no known
    n-grams yields the empty vector.
    """
    term_index = model.vocabulary.term_index
    counts: Counter[int] = Counter()
    for gram in extract_ngrams(tokens, model.ngram_range):
        idx = term_index.get(gram)
        if idx is not None:
            counts[idx] += 1
    if not counts:
        return SparseVector.empty()
    indices = np.array(sorted(counts), dtype=np.int64)
    tf = np.array([counts[i] for i in indices], dtype=np.float64)
    raw = SparseVector(indices, tf * model.idf[indices])
    return normalize(raw, model.norm)


def normalize(v: SparseVector, norm: Norm) -> SparseVector:
    """Rescale to unit L1/L2 norm; the empty or zero vector and
    ``Norm.NONE`` pass through unchanged."""
    if norm is Norm.NONE or v.nnz == 0:
        return v
    if norm is Norm.L1:
        denom = float(np.sum(np.abs(v.values)))
    elif norm is Norm.L2:
        denom = float(math.sqrt(np.sum(v.values * v.values)))
    else:
        raise ValueError(f"unknown norm {norm!r}")
    if denom == 0.0:
        return v
    return SparseVector(v.indices, v.values / denom)
