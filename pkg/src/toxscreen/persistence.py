"""Versioned JSON model artifact: vectorizer + classifier in one file.

Floats survive the JSON round trip exactly (shortest-repr encoding), so
save -> load reproduces the model value-for-value.  Loading refuses
artifacts whose format tag or version does not match.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .corpus import Label
from .linear_models import LinearModel, NbModel, SolverSpec
from .pipeline import TrainedPipeline
from .preprocess import StopwordList, load_default_stopwords
from .vectorizer import NgramRange, Norm, TfidfModel, Vocabulary

FORMAT_TAG = "toxscreen-model"
FORMAT_VERSION = 1


class ArtifactError(ValueError):
    """Unreadable, version-mismatched or structurally invalid artifact."""


def _tfidf_to_json(model: TfidfModel) -> dict:
    vocab = model.vocabulary
    terms = [""] * len(vocab)
    for term, idx in vocab.term_index.items():
        terms[idx] = term
    return {
        "ngram_range": [model.ngram_range.min_n, model.ngram_range.max_n],
        "norm": model.norm.value,
        "terms": terms,
        "doc_freq": vocab.doc_freq.tolist(),
        "n_docs": vocab.n_docs,
        "idf": model.idf.tolist(),
    }


def _tfidf_from_json(obj: dict) -> TfidfModel:
    terms = obj["terms"]
    vocab = Vocabulary(
        term_index={t: i for i, t in enumerate(terms)},
        doc_freq=np.array(obj["doc_freq"], dtype=np.int64),
        n_docs=int(obj["n_docs"]),
    )
    return TfidfModel(
        vocabulary=vocab,
        idf=np.array(obj["idf"], dtype=np.float64),
        ngram_range=NgramRange(*obj["ngram_range"]),
        norm=Norm(obj["norm"]),
    )


def _classifier_to_json(clf: NbModel | LinearModel) -> dict:
    if isinstance(clf, NbModel):
        return {
            "kind": "nb",
            "classes": [int(c) for c in clf.classes],
            "alpha": clf.alpha,
            "class_log_prior": clf.class_log_prior.tolist(),
            "feature_log_prob": clf.feature_log_prob.tolist(),
            "n_features": clf.n_features,
        }
    obj = {
        "kind": clf.kind,
        "classes": [int(c) for c in clf.classes],
        "C": clf.C,
        "weights": clf.weights.tolist(),
        "bias": clf.bias.tolist(),
        "converged": clf.converged,
        "n_iter": list(clf.n_iter),
    }
    if clf.solver is not None:
        obj["solver"] = {
            "kind": clf.solver.kind,
            "tol": clf.solver.tol,
            "max_iter": clf.solver.max_iter,
            "seed": clf.solver.seed,
        }
    return obj


def _classifier_from_json(obj: dict) -> NbModel | LinearModel:
    classes = tuple(Label(c) for c in obj["classes"])
    if obj["kind"] == "nb":
        return NbModel(
            classes=classes,
            class_log_prior=np.array(obj["class_log_prior"], dtype=np.float64),
            feature_log_prob=np.array(obj["feature_log_prob"], dtype=np.float64),
            alpha=float(obj["alpha"]),
            n_features=int(obj["n_features"]),
        )
    solver = None
    if "solver" in obj:
        s = obj["solver"]
        solver = SolverSpec(
            kind=s["kind"], tol=s["tol"], max_iter=s["max_iter"], seed=s["seed"]
        )
    return LinearModel(
        kind=obj["kind"],
        classes=classes,
        weights=np.array(obj["weights"], dtype=np.float64),
        bias=np.array(obj["bias"], dtype=np.float64),
        C=float(obj["C"]),
        solver=solver,
        converged=bool(obj["converged"]),
        n_iter=tuple(obj["n_iter"]),
    )


def save_pipeline(
    path: str | Path, pipeline: TrainedPipeline, seed: int | None = None
) -> None:
    doc = {
        "format": FORMAT_TAG,
        "format_version": FORMAT_VERSION,
        "stopwords_version": pipeline.stopwords.version,
        "tfidf": _tfidf_to_json(pipeline.tfidf),
        "classifier": _classifier_to_json(pipeline.classifier),
    }
    if seed is not None:
        doc["seed"] = seed
    with Path(path).open("w", encoding="utf-8") as fh:
        json.dump(doc, fh, ensure_ascii=False)
        fh.write("\n")


def load_pipeline(
    path: str | Path, stopwords: StopwordList | None = None
) -> TrainedPipeline:
    try:
        with Path(path).open("r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ArtifactError(f"{path}: not a valid model artifact ({exc.msg})") from exc
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_TAG:
        raise ArtifactError(f"{path}: not a {FORMAT_TAG} artifact")
    if doc.get("format_version") != FORMAT_VERSION:
        raise ArtifactError(
            f"{path}: artifact version {doc.get('format_version')} "
            f"does not match supported version {FORMAT_VERSION}"
        )
    stop = stopwords if stopwords is not None else load_default_stopwords()
    if doc.get("stopwords_version") != stop.version:
        raise ArtifactError(
            f"{path}: artifact stopword list {doc.get('stopwords_version')!r} "
            f"does not match loaded list {stop.version!r}"
        )
    try:
        tfidf = _tfidf_from_json(doc["tfidf"])
        clf = _classifier_from_json(doc["classifier"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ArtifactError(f"{path}: malformed artifact ({exc})") from exc
    return TrainedPipeline(tfidf=tfidf, classifier=clf, stopwords=stop)
