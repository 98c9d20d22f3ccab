"""Accuracy, per-class precision/recall/F-score and the confusion matrix.

All ratios are computed in exact rational arithmetic from the integer
counts and converted to float once, so algebraic identities (for example
weighted-average recall equals accuracy) hold bitwise.  Degenerate 0/0
ratios are reported as 0 with a warning flag instead of failing, so a
sparse evaluation fold cannot abort a grid search.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .corpus import Label
from .linear_models import ALL_LABELS


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """counts[i][j] = number of samples with true class i predicted as j,
    in class-encoding order."""

    counts: np.ndarray
    classes: tuple[Label, ...] = ALL_LABELS

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        object.__setattr__(self, "counts", counts)
        k = len(self.classes)
        if counts.shape != (k, k):
            raise ValueError(f"expected a {k}x{k} count matrix, got {counts.shape}")
        if np.any(counts < 0):
            raise ValueError("counts must be non-negative")

    @property
    def n_samples(self) -> int:
        return int(self.counts.sum())

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConfusionMatrix):
            return NotImplemented
        return self.classes == other.classes and np.array_equal(
            self.counts, other.counts
        )


@dataclass(frozen=True)
class MetricsReport:
    classes: tuple[Label, ...]
    precision: tuple[float, ...]
    recall: tuple[float, ...]
    f1: tuple[float, ...]
    macro_precision: float
    macro_recall: float
    macro_f1: float
    weighted_precision: float
    weighted_recall: float
    weighted_f1: float
    accuracy: float
    n_samples: int
    zero_division_flags: frozenset[tuple[str, Label]] = field(default_factory=frozenset)


def confusion_matrix(
    y_true: list[Label],
    y_pred: list[Label],
    classes: tuple[Label, ...] = ALL_LABELS,
) -> ConfusionMatrix:
    if len(y_true) != len(y_pred):
        raise ValueError(
            f"length mismatch: {len(y_true)} true vs {len(y_pred)} predicted"
        )
    if not y_true:
        raise ValueError("cannot build a confusion matrix from no samples")
    pos = {c: i for i, c in enumerate(classes)}
    counts = np.zeros((len(classes), len(classes)), dtype=np.int64)
    for t, p in zip(y_true, y_pred):
        counts[pos[t], pos[p]] += 1
    return ConfusionMatrix(counts=counts, classes=classes)


def scores(cm: ConfusionMatrix) -> MetricsReport:
    counts = cm.counts
    k = len(cm.classes)
    n = cm.n_samples
    row_sums = counts.sum(axis=1)
    col_sums = counts.sum(axis=0)

    flags: set[tuple[str, Label]] = set()
    precision: list[Fraction] = []
    recall: list[Fraction] = []
    f1: list[Fraction] = []
    for i, cls in enumerate(cm.classes):
        diag = int(counts[i, i])
        if col_sums[i] == 0:
            flags.add(("precision", cls))
            p = Fraction(0)
        else:
            p = Fraction(diag, int(col_sums[i]))
        if row_sums[i] == 0:
            flags.add(("recall", cls))
            r = Fraction(0)
        else:
            r = Fraction(diag, int(row_sums[i]))
        if p == 0 and r == 0:
            flags.add(("f1", cls))
            f = Fraction(0)
        else:
            f = 2 * p * r / (p + r)
        precision.append(p)
        recall.append(r)
        f1.append(f)

    def macro(vals: list[Fraction]) -> float:
        return float(sum(vals) / k)

    def weighted(vals: list[Fraction]) -> float:
        total = sum(Fraction(int(row_sums[i])) * vals[i] for i in range(k))
        return float(total / n)

    return MetricsReport(
        classes=cm.classes,
        precision=tuple(float(p) for p in precision),
        recall=tuple(float(r) for r in recall),
        f1=tuple(float(f) for f in f1),
        macro_precision=macro(precision),
        macro_recall=macro(recall),
        macro_f1=macro(f1),
        weighted_precision=weighted(precision),
        weighted_recall=weighted(recall),
        weighted_f1=weighted(f1),
        accuracy=float(Fraction(int(np.trace(counts)), n)),
        n_samples=n,
        zero_division_flags=frozenset(flags),
    )


def row_normalize(cm: ConfusionMatrix) -> np.ndarray:
    """Each row divided by its sum; errors on an absent true class."""
    row_sums = cm.counts.sum(axis=1)
    zero_rows = [cm.classes[i] for i in np.nonzero(row_sums == 0)[0]]
    if zero_rows:
        raise ValueError(
            "class absent from y_true: "
            + ", ".join(c.canonical_name for c in zero_rows)
        )
    return cm.counts / row_sums[:, None]


# ---------------------------------------------------------------------------
# Rendering (3-decimal display; stored values keep full precision)


def render_metrics_table(report: MetricsReport) -> str:
    out = io.StringIO()
    names = [c.canonical_name.capitalize() for c in report.classes]
    width = max(len(n) for n in names + ["Weighted avg"])
    out.write(f"{'':<{width}}  Precision  Recall  F-score\n")
    for i, name in enumerate(names):
        out.write(
            f"{name:<{width}}  {report.precision[i]:9.3f}  {report.recall[i]:6.3f}"
            f"  {report.f1[i]:7.3f}\n"
        )
    out.write(
        f"{'Macro avg':<{width}}  {report.macro_precision:9.3f}"
        f"  {report.macro_recall:6.3f}  {report.macro_f1:7.3f}\n"
    )
    out.write(
        f"{'Weighted avg':<{width}}  {report.weighted_precision:9.3f}"
        f"  {report.weighted_recall:6.3f}  {report.weighted_f1:7.3f}\n"
    )
    out.write(f"\nAccuracy: {report.accuracy:.3f} on {report.n_samples} samples\n")
    return out.getvalue()


def render_confusion_table(cm: ConfusionMatrix) -> str:
    """Row-normalized confusion matrix as text, classes in encoding order."""
    normed = row_normalize(cm)
    names = [c.canonical_name.capitalize() for c in cm.classes]
    width = max(len(n) for n in names)
    out = io.StringIO()
    out.write(f"{'Class':<{width}}  " + "  ".join(f"{n:>9}" for n in names) + "\n")
    for i, name in enumerate(names):
        cells = "  ".join(f"{normed[i, j]:9.3f}" for j in range(len(names)))
        out.write(f"{name:<{width}}  {cells}\n")
    return out.getvalue()


def metrics_to_csv(report: MetricsReport) -> str:
    lines = ["class,precision,recall,f1"]
    for i, c in enumerate(report.classes):
        lines.append(
            f"{c.canonical_name},{report.precision[i]!r},{report.recall[i]!r},{report.f1[i]!r}"
        )
    lines.append(
        f"macro,{report.macro_precision!r},{report.macro_recall!r},{report.macro_f1!r}"
    )
    lines.append(
        f"weighted,{report.weighted_precision!r},{report.weighted_recall!r},{report.weighted_f1!r}"
    )
    lines.append(f"accuracy,{report.accuracy!r},,")
    return "\n".join(lines) + "\n"
