"""Command-line interface: prepare, grid, train, eval, classify, serve.

Exit codes: 0 success, 1 user/input error, 2 internal error.  Logs and
diagnostics go to stderr; data flows to stdout or the named output
files, so subcommands compose in shell pipelines.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .corpus import (
    CorpusError,
    Label,
    LabeledTweet,
    SplitSpec,
    load_labeled,
    shuffle_split,
    write_csv,
)
from .linear_models import SOLVER_KINDS, SolverSpec
from .metrics import (
    confusion_matrix,
    metrics_to_csv,
    render_confusion_table,
    render_metrics_table,
    scores,
)
from .model_selection import (
    GridSpec,
    LogisticSpec,
    NbSpec,
    PipelineSpec,
    SvmSpec,
    grid_search,
    report_to_csv,
    report_to_table_csv,
)
from .persistence import ArtifactError, load_pipeline, save_pipeline
from .pipeline import fit_pipeline
from .stream_gateway import (
    DEFAULT_CAPACITY,
    DEFAULT_WINDOW_SECONDS,
    RateLimiter,
    SinkError,
    StreamPolicy,
    file_line_source,
    run_stream,
    tcp_line_source,
)
from .vectorizer import NgramRange, Norm


class CliError(Exception):
    """User/input error; rendered on stderr with exit status 1."""


class _Parser(argparse.ArgumentParser):
    # usage problems are user errors (exit 1), not internal errors
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _detect_format(path: str, override: str | None) -> str:
    if override:
        return override
    suffix = Path(path).suffix.lower()
    if suffix == ".csv":
        return "csv"
    if suffix in (".jsonl", ".ndjson", ".json"):
        return "jsonl"
    raise CliError(
        f"cannot infer format of {path!r}; pass --format csv|jsonl"
    )


def _parse_ngram_range(text: str) -> NgramRange:
    try:
        parts = [int(p) for p in text.split(",")]
        if len(parts) != 2:
            raise ValueError
        return NgramRange(parts[0], parts[1])
    except ValueError:
        raise CliError(f"invalid n-gram range {text!r}; expected e.g. '1,3'") from None


def _load_dataset(path: str, fmt: str | None) -> list[LabeledTweet]:
    try:
        return load_labeled(path, _detect_format(path, fmt))
    except (CorpusError, FileNotFoundError) as exc:
        raise CliError(str(exc)) from exc


# ---------------------------------------------------------------------------
# prepare


def _cmd_prepare(args) -> int:
    records: list[LabeledTweet] = []
    for path in args.input:
        records.extend(_load_dataset(path, args.format))
    if not records:
        raise CliError("no records in the input files")
    train, test = shuffle_split(
        records, SplitSpec(train_fraction=args.train_fraction, seed=args.seed)
    )
    write_csv(args.train_out, train)
    write_csv(args.test_out, test)

    def class_counts(rows: list[LabeledTweet]) -> str:
        return ", ".join(
            f"{lab.canonical_name}={sum(1 for r in rows if r.label is lab)}"
            for lab in Label
        )

    print(f"seed {args.seed}, train fraction {args.train_fraction}")
    print(f"train: {len(train)} records ({class_counts(train)}) -> {args.train_out}")
    print(f"test:  {len(test)} records ({class_counts(test)}) -> {args.test_out}")
    return 0


# ---------------------------------------------------------------------------
# grid


def _solver_from_json(obj: dict) -> SolverSpec:
    if isinstance(obj, str):
        return SolverSpec(kind=obj)
    return SolverSpec(
        kind=obj.get("kind", "quasi_newton"),
        tol=obj.get("tol", 1e-6),
        max_iter=obj.get("max_iter"),
        seed=obj.get("seed", 0),
    )


def _classifier_from_json(obj: dict):
    kind = obj.get("kind")
    if kind == "nb":
        return NbSpec(alpha=obj.get("alpha", 1.0))
    if kind == "logistic":
        return LogisticSpec(
            C=obj.get("C", 1.0),
            solver=_solver_from_json(obj.get("solver", "quasi_newton")),
        )
    if kind == "svm":
        return SvmSpec(
            C=obj.get("C", 1.0),
            tol=obj.get("tol", 1e-6),
            max_iter=obj.get("max_iter", 1000),
        )
    raise CliError(f"unknown classifier kind {kind!r} in grid file")


def _load_grid(path: str, seed: int) -> GridSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError as exc:
        raise CliError(str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON ({exc.msg})") from exc
    try:
        feature = doc["feature_grid"]
        ranges = [NgramRange(*pair) for pair in feature["ngram_ranges"]]
        norms = [Norm(n) for n in feature["norms"]]
        models = [_classifier_from_json(m) for m in doc["models"]]
        specs = tuple(
            PipelineSpec(ngram_range=r, norm=norm, classifier=m)
            for norm in norms
            for r in ranges
            for m in models
        )
        return GridSpec(
            specs=specs,
            k=doc.get("k", 10),
            seed=seed,
            stratified=doc.get("stratified", False),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"{path}: malformed grid config ({exc})") from exc


def _cmd_grid(args) -> int:
    data = _load_dataset(args.train, args.format)
    grid = _load_grid(args.grid, args.seed)
    if grid.k > len(data):
        raise CliError(
            f"grid asks for {grid.k} folds but the dataset has only "
            f"{len(data)} records"
        )
    report = grid_search(grid, data)
    Path(args.report_out).write_text(report_to_csv(report), encoding="utf-8")
    if args.table_out:
        Path(args.table_out).write_text(report_to_table_csv(report), encoding="utf-8")
    best = report.entries[report.chosen_index]
    print(
        f"best: {best.spec.describe()} "
        f"mean={best.mean:.3f} std={best.std:.3f} (k={report.k}, seed={report.seed})"
    )
    return 0


# ---------------------------------------------------------------------------
# train / eval / classify


def _build_spec(args) -> PipelineSpec:
    ngram_range = _parse_ngram_range(args.ngram_range)
    try:
        norm = Norm(args.norm)
    except ValueError:
        raise CliError(f"unknown norm {args.norm!r}") from None
    if args.classifier == "nb":
        classifier = NbSpec(alpha=args.alpha)
    elif args.classifier == "logistic":
        classifier = LogisticSpec(
            C=args.C,
            solver=SolverSpec(
                kind=args.solver, tol=args.tol, max_iter=args.max_iter, seed=args.seed
            ),
        )
    elif args.classifier == "svm":
        classifier = SvmSpec(
            C=args.C, tol=args.tol, max_iter=args.max_iter or 1000
        )
    else:
        raise CliError(f"unknown classifier {args.classifier!r}")
    return PipelineSpec(ngram_range=ngram_range, norm=norm, classifier=classifier)


def _cmd_train(args) -> int:
    data = _load_dataset(args.train, args.format)
    spec = _build_spec(args)
    try:
        pipeline = fit_pipeline(spec, data)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    save_pipeline(args.model_out, pipeline, seed=args.seed)
    clf = pipeline.classifier
    converged = getattr(clf, "converged", True)
    print(
        f"trained {spec.describe()} on {len(data)} records, "
        f"{pipeline.tfidf.n_features} features -> {args.model_out}"
        + ("" if converged else " [warning: solver did not converge]")
    )
    return 0


def _load_model(path: str):
    try:
        return load_pipeline(path)
    except (ArtifactError, FileNotFoundError) as exc:
        raise CliError(str(exc)) from exc


def _cmd_eval(args) -> int:
    pipeline = _load_model(args.model)
    data = _load_dataset(args.data, args.format)
    y_true = [rec.label for rec in data]
    y_pred = [pipeline.classify_text(rec.text)[0] for rec in data]
    cm = confusion_matrix(y_true, y_pred, classes=pipeline.classifier.classes)
    report = scores(cm)
    print(render_metrics_table(report))
    print("Row-normalized confusion matrix (rows = true class):")
    print(render_confusion_table(cm))
    if args.csv_out:
        Path(args.csv_out).write_text(metrics_to_csv(report), encoding="utf-8")
    return 0


def _cmd_classify(args) -> int:
    pipeline = _load_model(args.model)

    def classify_one(text: str) -> str:
        label, score_values = pipeline.classify_text(text)
        scores_obj = {
            cls.canonical_name: float(s)
            for cls, s in zip(pipeline.classifier.classes, score_values)
        }
        return json.dumps({"label": label.canonical_name, "scores": scores_obj})

    if args.text is not None:
        if args.text == "":
            raise CliError("--text must not be empty")
        print(classify_one(args.text))
        return 0
    for line in sys.stdin:
        line = line.rstrip("\n")
        if line.strip() == "":
            continue
        print(classify_one(line))
    return 0


# ---------------------------------------------------------------------------
# serve


def _cmd_serve(args) -> int:
    pipeline = _load_model(args.model)
    names = [name.strip() for name in args.blocked.split(",") if name.strip()]
    known = {lab.canonical_name: lab for lab in Label}
    unknown = [n for n in names if n.lower() not in known]
    if unknown:
        raise CliError(f"unknown label(s) in --blocked: {', '.join(unknown)}")
    blocked = frozenset(known[n.lower()] for n in names)
    policy = StreamPolicy(mode=args.mode, blocked=blocked)
    limiter = None
    if args.simulate_twitter:
        limiter = RateLimiter(capacity=args.rate_capacity, window=args.rate_window)

    if args.source == "-":
        source = sys.stdin
    elif args.source.startswith("tcp:"):
        try:
            port = int(args.source.split(":", 1)[1])
        except ValueError:
            raise CliError(f"invalid tcp source {args.source!r}") from None
        source = tcp_line_source("127.0.0.1", port)
    else:
        if not Path(args.source).exists():
            raise CliError(f"source file not found: {args.source}")
        source = file_line_source(args.source)

    out_fh = sys.stdout if args.out == "-" else open(args.out, "w", encoding="utf-8")
    try:
        stats = run_stream(source, out_fh.write, policy, pipeline, limiter=limiter)
    except SinkError as exc:
        print(exc.stats.to_json(), file=sys.stderr)
        raise CliError(str(exc)) from exc
    finally:
        if out_fh is not sys.stdout:
            out_fh.close()

    if args.stats_out == "-":
        print(stats.to_json(), file=sys.stderr)
    else:
        Path(args.stats_out).write_text(stats.to_json() + "\n", encoding="utf-8")
    return 0


# ---------------------------------------------------------------------------
# wiring


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="toxscreen",
        description="Hateful/offensive/clean tweet classification toolkit",
    )
    parser.add_argument("--version", action="version", version=f"toxscreen {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("prepare", help="merge datasets and write the 70/30 split")
    p.add_argument("--input", action="append", required=True,
                   help="input dataset (repeatable)")
    p.add_argument("--format", choices=["csv", "jsonl"],
                   help="force input format (default: by extension)")
    p.add_argument("--train-out", required=True)
    p.add_argument("--test-out", required=True)
    p.add_argument("--train-fraction", type=float, default=0.7)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=_cmd_prepare)

    p = sub.add_parser("grid", help="cross-validated grid search")
    p.add_argument("--train", required=True, help="training dataset")
    p.add_argument("--format", choices=["csv", "jsonl"])
    p.add_argument("--grid", required=True, help="grid config JSON")
    p.add_argument("--report-out", required=True, help="per-spec CV report CSV")
    p.add_argument("--table-out", help="pivot CSV (feature rows x model columns)")
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=_cmd_grid)

    p = sub.add_parser("train", help="fit a pipeline and save the model artifact")
    p.add_argument("--train", required=True)
    p.add_argument("--format", choices=["csv", "jsonl"])
    p.add_argument("--model-out", required=True)
    p.add_argument("--ngram-range", default="1,3", help="e.g. '1,3'")
    p.add_argument("--norm", default="l2", choices=[n.value for n in Norm])
    p.add_argument("--classifier", default="logistic", choices=["nb", "logistic", "svm"])
    p.add_argument("--alpha", type=float, default=1.0, help="NB smoothing prior")
    p.add_argument("--C", type=float, default=1.0, help="regularization strength")
    p.add_argument("--solver", default="quasi_newton", choices=list(SOLVER_KINDS))
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-iter", type=int, default=None)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="evaluate a model on a labeled dataset")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--format", choices=["csv", "jsonl"])
    p.add_argument("--csv-out", help="also write the metric scores as CSV")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("classify", help="classify --text or stdin lines")
    p.add_argument("--model", required=True)
    p.add_argument("--text", help="single text to classify (default: stdin lines)")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("serve", help="run the stream gateway")
    p.add_argument("--model", required=True)
    p.add_argument("--source", default="-",
                   help="JSONL file path, '-' for stdin, or 'tcp:PORT'")
    p.add_argument("--mode", default="annotate", choices=["annotate", "filter"])
    p.add_argument("--blocked", default="hateful,offensive",
                   help="comma-separated labels suppressed in filter mode")
    p.add_argument("--out", default="-", help="output JSONL path or '-' for stdout")
    p.add_argument("--stats-out", default="-",
                   help="stats JSON path; '-' sends them to stderr")
    p.add_argument("--simulate-twitter", action="store_true",
                   help="gate source reads through the 15-minute read limiter")
    p.add_argument("--rate-capacity", type=int, default=DEFAULT_CAPACITY)
    p.add_argument("--rate-window", type=float, default=DEFAULT_WINDOW_SECONDS)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"toxscreen: error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        # precondition violations and I/O problems are input errors
        print(f"toxscreen: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - internal failure surface
        print(f"toxscreen: internal error: {exc!r}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
