"""Customer-embedding feature pipeline for transaction fraud tables.

The package turns raw credit-card transactions into classifier-ready
feature tables, learns customer embeddings from co-occurrence sentences
grouped by spending category and ISO week, augments scarce positive
labels by embedding similarity (with a SMOTE baseline), and compares a
small classifier suite across four feature/augmentation groups.
"""

from .config import PipelineConfig
from .corpus import GroupKey, SentenceCorpus, build_sentences, group_key_of
from .embed import (
    EmbeddingSpace,
    SubwordConfig,
    TrainConfig,
    VectorStore,
    Vocabulary,
    build_vocab,
    init_embeddings,
    load_vectors,
    ngram_indices,
    save_vectors,
    sgns_step,
    train,
    vector_of,
)
from .errors import (
    ConfigError,
    CorpusTooSmallError,
    DataError,
    DomainError,
    FormatError,
    PipelineError,
    SchemaError,
    UnsupportedModelError,
)
from .evaluation import (
    ExperimentReport,
    MetricsRow,
    SplitConfig,
    confusion,
    f1_from_pr,
    prf,
    run_groups,
    stratified_split,
)
from .ingest import (
    Continent,
    FeatureTable,
    ParseResult,
    RawTransaction,
    SyntheticConfig,
    TimeBin,
    bin_time,
    build_feature_table,
    continent_of,
    count_locations,
    derive_customer_key,
    generate_synthetic,
    parse_transactions,
    planted_rings,
)
from .simaug import (
    AugmentConfig,
    AugmentationReport,
    cosine,
    max_similarity_to_set,
    relabel_by_similarity,
    smote,
)
from .classify import (
    ModelSpec,
    feature_importance,
    knn_predict,
    load_model,
    predict,
    predict_scores,
    save_model,
    train_decision_tree,
    train_logistic_regression,
    train_mlp,
    train_model,
    train_random_forest,
)

__version__ = "1.0.0"

__all__ = [
    "AugmentConfig",
    "AugmentationReport",
    "ConfigError",
    "Continent",
    "CorpusTooSmallError",
    "DataError",
    "DomainError",
    "EmbeddingSpace",
    "ExperimentReport",
    "FeatureTable",
    "FormatError",
    "GroupKey",
    "MetricsRow",
    "ModelSpec",
    "ParseResult",
    "PipelineConfig",
    "PipelineError",
    "RawTransaction",
    "SchemaError",
    "SentenceCorpus",
    "SplitConfig",
    "SubwordConfig",
    "SyntheticConfig",
    "TimeBin",
    "TrainConfig",
    "UnsupportedModelError",
    "VectorStore",
    "Vocabulary",
    "bin_time",
    "build_feature_table",
    "build_sentences",
    "build_vocab",
    "confusion",
    "continent_of",
    "cosine",
    "count_locations",
    "derive_customer_key",
    "f1_from_pr",
    "feature_importance",
    "generate_synthetic",
    "group_key_of",
    "init_embeddings",
    "knn_predict",
    "load_model",
    "load_vectors",
    "max_similarity_to_set",
    "ngram_indices",
    "parse_transactions",
    "planted_rings",
    "predict",
    "predict_scores",
    "prf",
    "relabel_by_similarity",
    "run_groups",
    "save_model",
    "save_vectors",
    "sgns_step",
    "smote",
    "stratified_split",
    "train",
    "train_decision_tree",
    "train_logistic_regression",
    "train_mlp",
    "train_model",
    "train_random_forest",
    "vector_of",
]
