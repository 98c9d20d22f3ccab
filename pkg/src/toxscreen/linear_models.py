"""Multinomial Naive Bayes and one-vs-rest linear classifiers.

Naive Bayes uses additive smoothing applied verbatim to the (possibly
fractional) TFIDF feature values.  Logistic regression minimizes

    f(w, b) = 0.5 ||w||^2 + C * sum_i ln(1 + exp(-y_i (w . x_i + b)))

per class (bias unpenalized) with a choice of three solvers; the linear
SVM minimizes the squared-hinge analogue with a deterministic full-batch
first-order method.  Class scores are argmax-decided with ties broken by
the lowest class encoding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.special import expit

from .corpus import Label
from .solvers import SolverResult, minimize_lbfgs, minimize_newton_cg, saga
from .vectorizer import SparseVector

ALL_LABELS: tuple[Label, ...] = (Label.HATEFUL, Label.OFFENSIVE, Label.CLEAN)

SOLVER_KINDS = ("quasi_newton", "newton", "stochastic_average")


@dataclass(frozen=True)
class SolverSpec:
    kind: str
    tol: float = 1e-6
    max_iter: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in SOLVER_KINDS:
            raise ValueError(f"unknown solver kind {self.kind!r}")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iter is None:
            # full-batch methods iterate, the stochastic one counts epochs
            default = 100 if self.kind == "stochastic_average" else 1000
            object.__setattr__(self, "max_iter", default)
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass(frozen=True, eq=False)
class NbModel:
    classes: tuple[Label, ...]
    class_log_prior: np.ndarray
    feature_log_prob: np.ndarray
    alpha: float
    n_features: int

    def __eq__(self, other) -> bool:
        if not isinstance(other, NbModel):
            return NotImplemented
        return (
            self.classes == other.classes
            and np.array_equal(self.class_log_prior, other.class_log_prior)
            and np.array_equal(self.feature_log_prob, other.feature_log_prob)
            and self.alpha == other.alpha
            and self.n_features == other.n_features
        )


@dataclass(frozen=True, eq=False)
class LinearModel:
    kind: str  # "logistic" | "svm"
    classes: tuple[Label, ...]
    weights: np.ndarray  # (n_classes, n_features)
    bias: np.ndarray  # (n_classes,)
    C: float
    solver: SolverSpec | None = None  # logistic only
    converged: bool = True
    n_iter: tuple[int, ...] = ()

    @property
    def n_features(self) -> int:
        return int(self.weights.shape[1])

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearModel):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.classes == other.classes
            and np.array_equal(self.weights, other.weights)
            and np.array_equal(self.bias, other.bias)
            and self.C == other.C
            and self.solver == other.solver
            and self.converged == other.converged
            and self.n_iter == other.n_iter
        )


def stack(X: list[SparseVector], n_features: int | None = None) -> sp.csr_matrix:
    """Stack sparse vectors into one CSR matrix."""
    if n_features is None:
        n_features = 0
        for v in X:
            if v.nnz:
                n_features = max(n_features, int(v.indices[-1]) + 1)
    indptr = np.zeros(len(X) + 1, dtype=np.int64)
    for i, v in enumerate(X):
        indptr[i + 1] = indptr[i] + v.nnz
    indices = np.concatenate([v.indices for v in X]) if X else np.empty(0, np.int64)
    data = np.concatenate([v.values for v in X]) if X else np.empty(0, np.float64)
    return sp.csr_matrix((data, indices, indptr), shape=(len(X), n_features))


def _resolve_classes(
    y: list[Label], classes: tuple[Label, ...] | None
) -> tuple[Label, ...]:
    resolved = ALL_LABELS if classes is None else tuple(sorted(set(classes)))
    present = set(y)
    missing = [c for c in resolved if c not in present]
    if missing:
        raise ValueError(
            "class not represented in training labels: "
            + ", ".join(c.canonical_name for c in missing)
        )
    extra = present - set(resolved)
    if extra:
        raise ValueError(
            "labels outside the class list: "
            + ", ".join(c.canonical_name for c in sorted(extra))
        )
    return resolved


# ---------------------------------------------------------------------------
# Naive Bayes


def nb_fit(
    X: list[SparseVector],
    y: list[Label],
    alpha: float,
    classes: tuple[Label, ...] | None = None,
) -> NbModel:
    """Fit the smoothed multinomial estimator.

    theta[t, c] = (N_tc + alpha) / (N_c + alpha * V) with N_tc the summed
    value of feature t over class-c documents.  alpha = 0 is allowed only
    when every feature occurs in every class.
    """
    if len(X) != len(y) or not X:
        raise ValueError("X and y must be equal-length and non-empty")
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    cls = _resolve_classes(y, classes)
    n_features = _infer_n_features(X)

    counts = np.zeros((len(cls), n_features), dtype=np.float64)
    class_counts = np.zeros(len(cls), dtype=np.int64)
    cls_pos = {c: i for i, c in enumerate(cls)}
    for vec, label in zip(X, y):
        if vec.nnz and float(vec.values.min()) < 0.0:
            raise ValueError("naive Bayes requires non-negative feature values")
        row = cls_pos[label]
        counts[row, vec.indices] += vec.values
        class_counts[row] += 1

    if alpha == 0.0 and not np.all(counts > 0.0):
        raise ValueError(
            "alpha=0 requires every feature to occur in every class"
        )
    smoothed = counts + alpha
    totals = smoothed.sum(axis=1, keepdims=True)
    feature_log_prob = np.log(smoothed) - np.log(totals)
    class_log_prior = np.log(class_counts / len(y))
    return NbModel(
        classes=cls,
        class_log_prior=class_log_prior,
        feature_log_prob=feature_log_prob,
        alpha=alpha,
        n_features=n_features,
    )


def nb_predict(model: NbModel, x: SparseVector) -> tuple[Label, np.ndarray]:
    """Argmax of the per-class log-joint; an empty vector falls back to
    the prior argmax.  Ties go to the lowest class encoding."""
    scores = model.class_log_prior.copy()
    if x.nnz:
        if int(x.indices[-1]) >= model.n_features:
            raise ValueError("feature index exceeds the model dimension")
        scores = scores + model.feature_log_prob[:, x.indices] @ x.values
    return model.classes[int(np.argmax(scores))], scores


def _infer_n_features(X: list[SparseVector], n_features: int | None = None) -> int:
    if n_features is not None:
        return n_features
    inferred = 0
    for v in X:
        if v.nnz:
            inferred = max(inferred, int(v.indices[-1]) + 1)
    return inferred


# ---------------------------------------------------------------------------
# Objectives shared by the solvers and the test suite


def make_logistic_objective(X: sp.csr_matrix, signs: np.ndarray, C: float):
    """Return fun_grad over theta = [w, b] for the L2-regularized
    logistic objective (bias unpenalized)."""

    def fun_grad(theta: np.ndarray) -> tuple[float, np.ndarray]:
        w, b = theta[:-1], theta[-1]
        z = X @ w + b
        margins = signs * z
        f = 0.5 * float(w @ w) + C * float(np.logaddexp(0.0, -margins).sum())
        p = expit(-margins)
        coef = -C * signs * p
        grad = np.empty_like(theta)
        grad[:-1] = w + X.T @ coef
        grad[-1] = coef.sum()
        return f, grad

    return fun_grad


def make_logistic_hessp(X: sp.csr_matrix, signs: np.ndarray, C: float):
    def hessp(theta: np.ndarray, v: np.ndarray) -> np.ndarray:
        w, b = theta[:-1], theta[-1]
        z = X @ w + b
        p = expit(-signs * z)
        d = C * p * (1.0 - p)
        t = X @ v[:-1] + v[-1]
        u = d * t
        out = np.empty_like(v)
        out[:-1] = v[:-1] + X.T @ u
        out[-1] = u.sum()
        return out

    return hessp


def make_squared_hinge_objective(X: sp.csr_matrix, signs: np.ndarray, C: float):
    """fun_grad for 0.5||w||^2 + C sum max(0, 1 - y z)^2."""

    def fun_grad(theta: np.ndarray) -> tuple[float, np.ndarray]:
        w, b = theta[:-1], theta[-1]
        z = X @ w + b
        margin = 1.0 - signs * z
        np.maximum(margin, 0.0, out=margin)
        f = 0.5 * float(w @ w) + C * float(margin @ margin)
        coef = -2.0 * C * signs * margin
        grad = np.empty_like(theta)
        grad[:-1] = w + X.T @ coef
        grad[-1] = coef.sum()
        return f, grad

    return fun_grad


# ---------------------------------------------------------------------------
# One-vs-rest fitting


def _binary_signs(y: list[Label], positive: Label) -> np.ndarray:
    return np.array([1.0 if lab == positive else -1.0 for lab in y])


def _solve_logistic_binary(
    X: sp.csr_matrix, signs: np.ndarray, C: float, solver: SolverSpec
) -> SolverResult:
    dim = X.shape[1] + 1
    theta0 = np.zeros(dim)
    fun_grad = make_logistic_objective(X, signs, C)
    if solver.kind == "quasi_newton":
        return minimize_lbfgs(fun_grad, theta0, tol=solver.tol, max_iter=solver.max_iter)
    if solver.kind == "newton":
        hessp = make_logistic_hessp(X, signs, C)
        return minimize_newton_cg(
            fun_grad, hessp, theta0, tol=solver.tol, max_iter=solver.max_iter
        )
    # stochastic_average
    n = X.shape[0]
    rows = [
        (X.indices[X.indptr[i] : X.indptr[i + 1]].astype(np.int64),
         X.data[X.indptr[i] : X.indptr[i + 1]])
        for i in range(n)
    ]
    row_norms = np.array([float(v @ v) for _, v in rows])
    lipschitz = float(n * C * (row_norms.max(initial=0.0) + 1.0) / 4.0)

    def sample_grad_scalar(i: int, theta: np.ndarray) -> float:
        idx, vals = rows[i]
        z = float(vals @ theta[idx]) + theta[-1]
        p = expit(-signs[i] * z)
        return float(n * C * (-signs[i]) * p)

    return saga(
        rows,
        sample_grad_scalar,
        fun_grad,
        theta0,
        lipschitz_max=lipschitz,
        tol=solver.tol,
        max_epochs=solver.max_iter,
        seed=solver.seed,
    )


def lr_fit(
    X: list[SparseVector],
    y: list[Label],
    C: float,
    solver: SolverSpec,
    classes: tuple[Label, ...] | None = None,
    n_features: int | None = None,
) -> LinearModel:
    if C <= 0:
        raise ValueError(f"C must be positive, got {C}")
    if len(X) != len(y) or len(X) < 2:
        raise ValueError("need at least two samples with matching labels")
    cls = _resolve_classes(y, classes)
    if len(cls) < 2:
        raise ValueError("need at least two distinct classes")
    mat = stack(X, _infer_n_features(X, n_features))

    weights = np.zeros((len(cls), mat.shape[1]))
    bias = np.zeros(len(cls))
    iters: list[int] = []
    converged = True
    for row, label in enumerate(cls):
        result = _solve_logistic_binary(mat, _binary_signs(y, label), C, solver)
        weights[row] = result.x[:-1]
        bias[row] = result.x[-1]
        iters.append(result.n_iter)
        converged = converged and result.converged
    return LinearModel(
        kind="logistic",
        classes=cls,
        weights=weights,
        bias=bias,
        C=C,
        solver=solver,
        converged=converged,
        n_iter=tuple(iters),
    )


def svm_fit(
    X: list[SparseVector],
    y: list[Label],
    C: float,
    tol: float = 1e-6,
    max_iter: int = 1000,
    classes: tuple[Label, ...] | None = None,
    n_features: int | None = None,
) -> LinearModel:
    if C <= 0:
        raise ValueError(f"C must be positive, got {C}")
    if len(X) != len(y) or len(X) < 2:
        raise ValueError("need at least two samples with matching labels")
    cls = _resolve_classes(y, classes)
    if len(cls) < 2:
        raise ValueError("need at least two distinct classes")
    mat = stack(X, _infer_n_features(X, n_features))

    weights = np.zeros((len(cls), mat.shape[1]))
    bias = np.zeros(len(cls))
    iters: list[int] = []
    converged = True
    for row, label in enumerate(cls):
        fun_grad = make_squared_hinge_objective(mat, _binary_signs(y, label), C)
        result = minimize_lbfgs(
            fun_grad, np.zeros(mat.shape[1] + 1), tol=tol, max_iter=max_iter
        )
        weights[row] = result.x[:-1]
        bias[row] = result.x[-1]
        iters.append(result.n_iter)
        converged = converged and result.converged
    return LinearModel(
        kind="svm",
        classes=cls,
        weights=weights,
        bias=bias,
        C=C,
        solver=None,
        converged=converged,
        n_iter=tuple(iters),
    )


def predict(model: LinearModel, x: SparseVector) -> tuple[Label, np.ndarray]:
    """One-vs-rest argmax of decision values w_c . x + b_c."""
    scores = model.bias.copy()
    if x.nnz:
        if int(x.indices[-1]) >= model.n_features:
            raise ValueError("feature index exceeds the model dimension")
        scores = scores + model.weights[:, x.indices] @ x.values
    return model.classes[int(np.argmax(scores))], scores
