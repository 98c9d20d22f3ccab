"""k-fold cross-validation and exhaustive grid search.

Folds come from one seeded permutation cut into contiguous chunks, so
every grid cell is scored on identical folds and comparisons are paired.
The vectorizer is fitted inside each fold on the k-1 training folds only;
held-out documents never influence the vocabulary.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field

from .corpus import Label, LabeledTweet
from .linear_models import SolverSpec
from .preprocess import StopwordList, load_default_stopwords, preprocess
from .rng import shuffled_indices
from .vectorizer import NgramRange, Norm, fit as fit_tfidf, transform


@dataclass(frozen=True)
class NbSpec:
    alpha: float

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")

    family = "nb"


@dataclass(frozen=True)
class LogisticSpec:
    C: float
    solver: SolverSpec = SolverSpec(kind="quasi_newton")

    def __post_init__(self):
        if self.C <= 0:
            raise ValueError(f"C must be positive, got {self.C}")

    family = "logistic"


@dataclass(frozen=True)
class SvmSpec:
    C: float
    tol: float = 1e-6
    max_iter: int = 1000

    def __post_init__(self):
        if self.C <= 0:
            raise ValueError(f"C must be positive, got {self.C}")

    family = "svm"


ClassifierSpec = NbSpec | LogisticSpec | SvmSpec


@dataclass(frozen=True)
class PipelineSpec:
    ngram_range: NgramRange
    norm: Norm
    classifier: ClassifierSpec

    def describe(self) -> str:
        r = self.ngram_range
        feat = f"({r.min_n},{r.max_n})+{self.norm.value.upper()}"
        c = self.classifier
        if isinstance(c, NbSpec):
            return f"{feat} nb(alpha={c.alpha:g})"
        if isinstance(c, LogisticSpec):
            return f"{feat} logistic(C={c.C:g}, solver={c.solver.kind})"
        return f"{feat} svm(C={c.C:g})"


@dataclass(frozen=True)
class GridSpec:
    specs: tuple[PipelineSpec, ...]
    k: int = 10
    seed: int = 42
    stratified: bool = False

    def __post_init__(self):
        if not self.specs:
            raise ValueError("grid must contain at least one pipeline spec")
        if self.k < 2:
            raise ValueError(f"fold count must be >= 2, got {self.k}")


@dataclass(frozen=True)
class CvEntry:
    spec: PipelineSpec
    fold_accuracies: tuple[float, ...]
    mean: float
    std: float


@dataclass(frozen=True)
class CvReport:
    entries: tuple[CvEntry, ...]
    k: int
    seed: int
    ranking: tuple[int, ...] = field(default_factory=tuple)

    @property
    def chosen_index(self) -> int:
        return self.ranking[0]

    @property
    def chosen(self) -> PipelineSpec:
        return self.entries[self.chosen_index].spec


def kfold_indices(n: int, k: int, seed: int) -> list[list[int]]:
    """Seeded permutation of range(n) cut into k contiguous chunks whose
    sizes differ by at most one."""
    if k < 2:
        raise ValueError(f"fold count must be >= 2, got {k}")
    if k > n:
        raise ValueError(f"cannot split {n} samples into {k} folds")
    perm = shuffled_indices(n, seed)
    base, extra = divmod(n, k)
    folds: list[list[int]] = []
    start = 0
    for i in range(k):
        size = base + (1 if i < extra else 0)
        folds.append(perm[start : start + size])
        start += size
    return folds


def stratified_kfold_indices(
    labels: list[Label], k: int, seed: int
) -> list[list[int]]:
    """Optional stratified variant: per-class seeded shuffles dealt
    round-robin, keeping per-class fold counts within one of each other."""
    n = len(labels)
    if k < 2:
        raise ValueError(f"fold count must be >= 2, got {k}")
    if k > n:
        raise ValueError(f"cannot split {n} samples into {k} folds")
    perm = shuffled_indices(n, seed)
    by_class: dict[Label, list[int]] = {}
    for idx in perm:
        by_class.setdefault(labels[idx], []).append(idx)
    folds: list[list[int]] = [[] for _ in range(k)]
    cursor = 0
    for cls in sorted(by_class):
        for idx in by_class[cls]:
            folds[cursor % k].append(idx)
            cursor += 1
    return folds


def _accuracy(y_true: list[Label], y_pred: list[Label]) -> float:
    hits = sum(1 for t, p in zip(y_true, y_pred) if t == p)
    return hits / len(y_true)


def _fold_accuracies(
    spec: PipelineSpec,
    token_seqs: list[list[str]],
    labels: list[Label],
    folds: list[list[int]],
) -> list[float]:
    # all labels of the full training data define the class universe;
    # a fold that misses one of them raises from the classifier fit
    from .pipeline import classify_vector, fit_classifier

    classes = tuple(sorted(set(labels)))
    accuracies: list[float] = []
    for fold in folds:
        held = set(fold)
        train_idx = [i for i in range(len(labels)) if i not in held]
        tfidf = fit_tfidf(
            [token_seqs[i] for i in train_idx], spec.ngram_range, spec.norm
        )
        X_train = [transform(token_seqs[i], tfidf) for i in train_idx]
        y_train = [labels[i] for i in train_idx]
        clf = fit_classifier(spec, X_train, y_train, classes, tfidf.n_features)
        y_pred = [
            classify_vector(clf, transform(token_seqs[i], tfidf))[0] for i in fold
        ]
        accuracies.append(_accuracy([labels[i] for i in fold], y_pred))
    return accuracies


def cross_validate(
    spec: PipelineSpec,
    data: list[LabeledTweet],
    k: int,
    seed: int,
    stopwords: StopwordList | None = None,
    stratified: bool = False,
) -> list[float]:
    """Fold accuracies for one pipeline spec, in fold order."""
    stop = stopwords if stopwords is not None else load_default_stopwords()
    token_seqs = [preprocess(rec.text, stop) for rec in data]
    labels = [rec.label for rec in data]
    folds = (
        stratified_kfold_indices(labels, k, seed)
        if stratified
        else kfold_indices(len(data), k, seed)
    )
    return _fold_accuracies(spec, token_seqs, labels, folds)


def grid_search(
    grid: GridSpec,
    data: list[LabeledTweet],
    stopwords: StopwordList | None = None,
) -> CvReport:
    """Evaluate every spec on identical folds; best mean wins, ties break
    toward the earlier grid position."""
    stop = stopwords if stopwords is not None else load_default_stopwords()
    token_seqs = [preprocess(rec.text, stop) for rec in data]
    labels = [rec.label for rec in data]
    folds = (
        stratified_kfold_indices(labels, grid.k, grid.seed)
        if grid.stratified
        else kfold_indices(len(data), grid.k, grid.seed)
    )

    entries: list[CvEntry] = []
    for spec in grid.specs:
        accs = _fold_accuracies(spec, token_seqs, labels, folds)
        entries.append(
            CvEntry(
                spec=spec,
                fold_accuracies=tuple(accs),
                mean=statistics.fmean(accs),
                std=statistics.pstdev(accs),
            )
        )
    ranking = tuple(
        sorted(range(len(entries)), key=lambda i: (-entries[i].mean, i))
    )
    return CvReport(entries=tuple(entries), k=grid.k, seed=grid.seed, ranking=ranking)


# ---------------------------------------------------------------------------
# Report export


def report_to_csv(report: CvReport) -> str:
    """One row per spec, sorted by mean accuracy descending."""
    lines = [f"# k={report.k} seed={report.seed}"]
    header = ["rank", "ngram_range", "norm", "model", "params", "mean", "std"]
    header += [f"fold{i}" for i in range(report.k)]
    lines.append(",".join(header))
    for rank, idx in enumerate(report.ranking, start=1):
        e = report.entries[idx]
        r = e.spec.ngram_range
        c = e.spec.classifier
        if isinstance(c, NbSpec):
            params = f"alpha={c.alpha:g}"
        elif isinstance(c, LogisticSpec):
            params = f"C={c.C:g};solver={c.solver.kind}"
        else:
            params = f"C={c.C:g}"
        row = [
            str(rank),
            f"({r.min_n},{r.max_n})",
            e.spec.norm.value,
            c.family,
            params,
            repr(e.mean),
            repr(e.std),
        ]
        row += [repr(a) for a in e.fold_accuracies]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def report_to_table_csv(report: CvReport) -> str:
    """Pivot: feature combination rows x model family columns, each cell
    the best mean accuracy for that combination (3-decimal display)."""
    feature_keys: list[tuple] = []
    families: list[str] = []
    cells: dict[tuple, dict[str, float]] = {}
    for e in report.entries:
        r = e.spec.ngram_range
        fkey = (r.min_n, r.max_n, e.spec.norm.value)
        fam = e.spec.classifier.family
        if fkey not in feature_keys:
            feature_keys.append(fkey)
        if fam not in families:
            families.append(fam)
        cell = cells.setdefault(fkey, {})
        if fam not in cell or e.mean > cell[fam]:
            cell[fam] = e.mean
    lines = ["ngram_range+norm," + ",".join(families)]
    for fkey in feature_keys:
        min_n, max_n, norm = fkey
        row = [f"({min_n},{max_n})+{norm.upper()}"]
        for fam in families:
            value = cells[fkey].get(fam)
            row.append("" if value is None else f"{value:.3f}")
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"
