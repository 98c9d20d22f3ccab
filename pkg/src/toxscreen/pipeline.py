"""End-to-end text pipeline: preprocess -> TFIDF -> classifier."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import Label, LabeledTweet
from .linear_models import (
    LinearModel,
    NbModel,
    lr_fit,
    nb_fit,
    nb_predict,
    predict,
    svm_fit,
)
from .model_selection import LogisticSpec, NbSpec, PipelineSpec, SvmSpec
from .preprocess import StopwordList, load_default_stopwords, preprocess
from .vectorizer import SparseVector, TfidfModel, fit as fit_tfidf, transform


@dataclass(frozen=True)
class TrainedPipeline:
    tfidf: TfidfModel
    classifier: NbModel | LinearModel
    stopwords: StopwordList

    def vectorize(self, text: str) -> SparseVector:
        return transform(preprocess(text, self.stopwords), self.tfidf)

    def classify_text(self, text: str) -> tuple[Label, np.ndarray]:
        return classify_vector(self.classifier, self.vectorize(text))

    def classify_tokens(self, tokens: list[str]) -> tuple[Label, np.ndarray]:
        return classify_vector(self.classifier, transform(tokens, self.tfidf))


def classify_vector(
    classifier: NbModel | LinearModel, x: SparseVector
) -> tuple[Label, np.ndarray]:
    if isinstance(classifier, NbModel):
        return nb_predict(classifier, x)
    return predict(classifier, x)


def fit_classifier(
    spec: PipelineSpec,
    X: list[SparseVector],
    y: list[Label],
    classes: tuple[Label, ...] | None,
    n_features: int,
) -> NbModel | LinearModel:
    c = spec.classifier
    if isinstance(c, NbSpec):
        return nb_fit(X, y, alpha=c.alpha, classes=classes)
    if isinstance(c, LogisticSpec):
        return lr_fit(X, y, C=c.C, solver=c.solver, classes=classes, n_features=n_features)
    if isinstance(c, SvmSpec):
        return svm_fit(
            X, y, C=c.C, tol=c.tol, max_iter=c.max_iter,
            classes=classes, n_features=n_features,
        )
    raise TypeError(f"unknown classifier spec {c!r}")


def fit_pipeline(
    spec: PipelineSpec,
    data: list[LabeledTweet],
    stopwords: StopwordList | None = None,
    classes: tuple[Label, ...] | None = None,
) -> TrainedPipeline:
    """Preprocess the corpus, fit the vectorizer and the classifier."""
    stop = stopwords if stopwords is not None else load_default_stopwords()
    token_seqs = [preprocess(rec.text, stop) for rec in data]
    labels = [rec.label for rec in data]
    tfidf = fit_tfidf(token_seqs, spec.ngram_range, spec.norm)
    X = [transform(tokens, tfidf) for tokens in token_seqs]
    clf = fit_classifier(spec, X, labels, classes, tfidf.n_features)
    return TrainedPipeline(tfidf=tfidf, classifier=clf, stopwords=stop)
