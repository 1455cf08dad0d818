"""Summary assessment toolkit.

Model-free metrics, multi-level correlation against human judgements,
deterministic split planning, ensemble scoring with uncertainty, and
score-driven training-data selection for podcast summary assessment data.
"""

from .corpus import (
    Corpus,
    CorpusStats,
    DEFAULT_SCALE,
    Episode,
    Grade,
    GradeScale,
    SummaryRecord,
    SystemInfo,
    SystemKind,
    corpus_stats,
    grade_distribution,
    grade_to_score,
    load_corpus,
)
from .correlation import (
    CorrelationReport,
    ScoreMatrix,
    all_examples,
    filter_systems,
    matrix_from_grades,
    pearson,
    rmse,
    spearman,
    summary_level,
    system_level,
)
from .errors import ToolkitError
from .lexical import (
    PRF,
    TokenizerConfig,
    Triple,
    lcs_length,
    rouge_l,
    rouge_n,
    token_f1,
    tokenize,
    triple_f1,
)
from .selection import (
    BrassItem,
    EnsembleResult,
    ScoreFileRecord,
    brass_filter,
    ensemble_aggregate,
    select_extremes,
    uncertainty_bins,
)
from .splits import SplitPlan, holdout_document, holdout_system, kfold_shuffled, repeated_kfold

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "CorpusStats",
    "CorrelationReport",
    "DEFAULT_SCALE",
    "Episode",
    "EnsembleResult",
    "Grade",
    "GradeScale",
    "PRF",
    "ScoreFileRecord",
    "ScoreMatrix",
    "SplitPlan",
    "SummaryRecord",
    "SystemInfo",
    "SystemKind",
    "TokenizerConfig",
    "ToolkitError",
    "Triple",
    "BrassItem",
    "all_examples",
    "brass_filter",
    "corpus_stats",
    "ensemble_aggregate",
    "filter_systems",
    "grade_distribution",
    "grade_to_score",
    "holdout_document",
    "holdout_system",
    "kfold_shuffled",
    "lcs_length",
    "load_corpus",
    "matrix_from_grades",
    "pearson",
    "repeated_kfold",
    "rmse",
    "rouge_l",
    "rouge_n",
    "select_extremes",
    "spearman",
    "summary_level",
    "system_level",
    "token_f1",
    "tokenize",
    "triple_f1",
    "uncertainty_bins",
]
