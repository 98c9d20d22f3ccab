"""toxscreen: hateful/offensive/clean tweet classification and stream
filtering with word n-gram TFIDF features and from-scratch linear models."""

__version__ = "0.1.0"

from .corpus import (
    CorpusError,
    Label,
    LabeledTweet,
    RawRecord,
    SplitSpec,
    UnknownLabelError,
    load_labeled,
    load_records,
    map_label,
    shuffle_split,
)
from .linear_models import (
    LinearModel,
    NbModel,
    SolverSpec,
    lr_fit,
    nb_fit,
    nb_predict,
    predict,
    svm_fit,
)
from .metrics import (
    ConfusionMatrix,
    MetricsReport,
    confusion_matrix,
    row_normalize,
    scores,
)
from .model_selection import (
    CvReport,
    GridSpec,
    LogisticSpec,
    NbSpec,
    PipelineSpec,
    SvmSpec,
    cross_validate,
    grid_search,
    kfold_indices,
)
from .persistence import ArtifactError, load_pipeline, save_pipeline
from .pipeline import TrainedPipeline, fit_pipeline
from .porter import porter_stem
from .preprocess import (
    StopwordList,
    clean,
    load_default_stopwords,
    preprocess,
    remove_stopwords,
    tokenize,
)
from .stream_gateway import (
    RateLimiter,
    StreamPolicy,
    StreamStats,
    TweetRecord,
    classify_record,
    rate_gate,
    run_stream,
)
from .vectorizer import (
    NgramRange,
    Norm,
    SparseVector,
    TfidfModel,
    Vocabulary,
    extract_ngrams,
    normalize,
    transform,
)
from .vectorizer import fit as fit_tfidf

__all__ = [
    "ArtifactError",
    "ConfusionMatrix",
    "CorpusError",
    "CvReport",
    "GridSpec",
    "Label",
    "LabeledTweet",
    "LinearModel",
    "LogisticSpec",
    "MetricsReport",
    "NbModel",
    "NbSpec",
    "NgramRange",
    "Norm",
    "PipelineSpec",
    "RateLimiter",
    "RawRecord",
    "SolverSpec",
    "SparseVector",
    "SplitSpec",
    "StopwordList",
    "StreamPolicy",
    "StreamStats",
    "SvmSpec",
    "TfidfModel",
    "TrainedPipeline",
    "TweetRecord",
    "UnknownLabelError",
    "Vocabulary",
    "classify_record",
    "clean",
    "confusion_matrix",
    "cross_validate",
    "extract_ngrams",
    "fit_pipeline",
    "fit_tfidf",
    "grid_search",
    "kfold_indices",
    "load_default_stopwords",
    "load_labeled",
    "load_pipeline",
    "load_records",
    "lr_fit",
    "map_label",
    "nb_fit",
    "nb_predict",
    "normalize",
    "porter_stem",
    "predict",
    "preprocess",
    "rate_gate",
    "remove_stopwords",
    "row_normalize",
    "run_stream",
    "save_pipeline",
    "scores",
    "shuffle_split",
    "svm_fit",
    "tokenize",
    "transform",
]
