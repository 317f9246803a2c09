"""Train/test splitting, confusion metrics, and the four-group experiment.

The splitter keys on content fingerprints rather than row positions: rows
are ranked by FNV-1a fingerprint before the seeded shuffle, so the same
rows land in the same partition no matter how the input was ordered.

The experiment trains every configured model on four feature/augmentation
groups sharing one split: Group 1 is the base features plus one-hot
category, Group 2 swaps the category block for customer-embedding
coordinates, Group 3 is Group 1 plus SMOTE on the training partition, and
Group 4 is Group 2 plus similarity relabeling on the training partition.
Test rows are never augmented.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .classify import ModelSpec, normalize_kind, predict, train_model
from .corpus import build_sentences
from .embed import EmbeddingSpace, TrainConfig, train
from .errors import ConfigError, DomainError
from .hashing import fnv1a_64, fnv1a_64_hex
from .ingest import (
    EMBEDDING_MODE,
    ONEHOT_MODE,
    FeatureTable,
    RawTransaction,
    build_feature_table,
    customer_key_of,
)
from .simaug import AugmentConfig, AugmentationReport, relabel_by_similarity, smote


@dataclass
class SplitConfig:
    """Train/test split parameters."""

    test_fraction: float = 0.30
    seed: int = 0
    stratified: bool = True

    def validate(self) -> None:
        if not 0.0 < self.test_fraction < 1.0:
            raise ConfigError("split.test_fraction must lie in (0, 1)")


def row_fingerprint(key: str, label: int, row: np.ndarray) -> int:
    """Content fingerprint of one feature row."""
    text = f"{key}|{int(label)}|" + ",".join(repr(float(v)) for v in row)
    return fnv1a_64(text.encode("utf-8"))


def transaction_fingerprint(t: RawTransaction) -> int:
    """Content fingerprint of one raw transaction."""
    text = "|".join(
        (
            t.timestamp.isoformat(sep=" "),
            t.category,
            repr(t.amount),
            customer_key_of(t),
            t.gender,
            repr(t.customer_lat),
            repr(t.customer_lon),
            repr(t.merchant_lat),
            repr(t.merchant_lon),
            "1" if t.is_fraud else "0",
        )
    )
    return fnv1a_64(text.encode("utf-8"))


def dataset_fingerprint(fingerprints: Sequence[int]) -> str:
    """Order-independent fingerprint of a row-fingerprint multiset."""
    joined = ",".join(format(f, "016x") for f in sorted(fingerprints))
    return fnv1a_64_hex(joined.encode("utf-8"))


def split_indices(
    fingerprints: Sequence[int], labels: Sequence[int], config: SplitConfig
) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic (train, test) index arrays, stratified by label.

    Rows are ranked by fingerprint (ties keep input order) and the seeded
    shuffle assigns positions in that canonical order, so reordering the
    input moves indices but keeps every row's assignment.  Per class, the
    test side receives round(class_count * test_fraction) rows.
    """
    config.validate()
    fps = np.asarray(fingerprints, dtype=np.uint64)
    y = np.asarray(labels, dtype=np.int64)
    if fps.shape[0] != y.shape[0]:
        raise DomainError("fingerprints and labels must be row-aligned")
    classes = np.unique(y)
    if config.stratified and classes.size < 2:
        raise DomainError("stratified split needs both classes present")

    canonical = np.argsort(fps, kind="stable")
    rng = np.random.default_rng(config.seed)
    test_parts: list[np.ndarray] = []
    if config.stratified:
        for cls in sorted(classes.tolist()):
            members = canonical[y[canonical] == cls]
            n_test = int(round(members.size * config.test_fraction))
            perm = rng.permutation(members.size)
            test_parts.append(members[perm[:n_test]])
    else:
        n_test = int(round(fps.size * config.test_fraction))
        perm = rng.permutation(fps.size)
        test_parts.append(canonical[perm[:n_test]])
    test_idx = np.sort(np.concatenate(test_parts))
    mask = np.zeros(fps.size, dtype=bool)
    mask[test_idx] = True
    train_idx = np.flatnonzero(~mask)
    if train_idx.size == 0 or test_idx.size == 0:
        raise DomainError("test_fraction leaves an empty partition")
    return train_idx, test_idx


def subset_table(table: FeatureTable, idx: np.ndarray) -> FeatureTable:
    """Row subset of a feature table (columns unchanged)."""
    return FeatureTable(
        column_names=list(table.column_names),
        rows=table.rows[idx],
        labels=table.labels[idx],
        customer_keys=[table.customer_keys[i] for i in idx],
    )


def stratified_split(table: FeatureTable, config: SplitConfig) -> tuple[FeatureTable, FeatureTable]:
    """Split a feature table into (train, test) per the config."""
    fps = [
        row_fingerprint(table.customer_keys[i], int(table.labels[i]), table.rows[i])
        for i in range(table.rows.shape[0])
    ]
    train_idx, test_idx = split_indices(fps, table.labels, config)
    return subset_table(table, train_idx), subset_table(table, test_idx)


def confusion(y_true, y_pred) -> tuple[int, int, int, int]:
    """(TP, FP, FN, TN) with class 1 positive."""
    yt = np.asarray(y_true, dtype=np.int64)
    yp = np.asarray(y_pred, dtype=np.int64)
    if yt.shape != yp.shape or yt.ndim != 1:
        raise DomainError("y_true and y_pred must be 1-d and equal length")
    for name, arr in (("y_true", yt), ("y_pred", yp)):
        if arr.size and not np.isin(arr, (0, 1)).all():
            raise DomainError(f"{name} values must be 0 or 1")
    tp = int(((yt == 1) & (yp == 1)).sum())
    fp = int(((yt == 0) & (yp == 1)).sum())
    fn = int(((yt == 1) & (yp == 0)).sum())
    tn = int(((yt == 0) & (yp == 0)).sum())
    return tp, fp, fn, tn


def f1_from_pr(precision: float, recall: float) -> float:
    """Harmonic mean of precision and recall; 0 when both are 0."""
    if precision + recall <= 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def prf(conf: tuple[int, int, int, int]) -> tuple[float, float, float]:
    """(precision, recall, f1) from a confusion tuple; 0 on empty denominators."""
    tp, fp, fn, _ = conf
    precision = tp / (tp + fp) if tp + fp > 0 else 0.0
    recall = tp / (tp + fn) if tp + fn > 0 else 0.0
    return precision, recall, f1_from_pr(precision, recall)


@dataclass
class MetricsRow:
    """One (group, model) result under one averaging convention."""

    group: int
    model: str
    averaging: str  # "positive" | "macro"
    precision: float
    recall: float
    f1: float


def metrics_rows(group: int, model_kind: str, y_true, y_pred) -> tuple[MetricsRow, MetricsRow]:
    """Positive-class and macro metric rows for one prediction set.

    Macro averages precision and recall over both classes (class 0
    scored as if positive), then recomputes f1 from those averages so
    the f1 identity holds on every row.
    """
    tp, fp, fn, tn = confusion(y_true, y_pred)
    p1, r1, f1 = prf((tp, fp, fn, tn))
    p0, r0, _ = prf((tn, fn, fp, tp))
    mp = (p0 + p1) / 2.0
    mr = (r0 + r1) / 2.0
    mf = f1_from_pr(mp, mr)
    return (
        MetricsRow(group, model_kind, "positive", p1, r1, f1),
        MetricsRow(group, model_kind, "macro", mp, mr, mf),
    )


@dataclass
class ExperimentReport:
    """Everything the four-group run produced."""

    rows: list[MetricsRow]
    macro_rows: list[MetricsRow]
    augmentation: dict[int, AugmentationReport]
    dataset_fp: str
    seeds: dict[str, int]
    config_digest: str
    n_train: int
    n_test: int
    positives_train: int
    positives_test: int
    embedding_vocab: int = 0
    group_columns: dict[int, int] = field(default_factory=dict)

    def _header_lines(self) -> list[str]:
        return [
            f"# dataset_fingerprint: {self.dataset_fp}",
            f"# config_digest: {self.config_digest}",
            f"# seeds: {json.dumps(self.seeds, sort_keys=True)}",
            f"# rows: train={self.n_train} test={self.n_test} "
            f"positives_train={self.positives_train} positives_test={self.positives_test}",
        ]

    def to_csv(self) -> str:
        lines = self._header_lines()
        lines.append("group,method,averaging,precision,recall,f1")
        for row in list(self.rows) + list(self.macro_rows):
            lines.append(
                f"{row.group},{row.model},{row.averaging},"
                f"{row.precision!r},{row.recall!r},{row.f1!r}"
            )
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        lines = self._header_lines()
        lines.append("")
        lines.append(f"{'group':>5} {'method':<6} {'precision':>9} {'recall':>9} {'f1':>9}")
        for row in self.rows:
            lines.append(
                f"{row.group:>5} {row.model:<6} {row.precision:>9.4f} "
                f"{row.recall:>9.4f} {row.f1:>9.4f}"
            )
        lines.append("")
        lines.append("macro-averaged:")
        for row in self.macro_rows:
            lines.append(
                f"{row.group:>5} {row.model:<6} {row.precision:>9.4f} "
                f"{row.recall:>9.4f} {row.f1:>9.4f}"
            )
        return "\n".join(lines) + "\n"

    def save_csv(self, path: str | Path) -> None:
        Path(path).write_text(self.to_csv(), encoding="utf-8")

    def save_text(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text(), encoding="utf-8")


def evaluate_model(model, table: FeatureTable, group: int = 0) -> tuple[MetricsRow, MetricsRow]:
    """Score a trained model against a labeled table."""
    y_pred = predict(model, table.rows)
    return metrics_rows(group, model.kind, table.labels, y_pred)


def _normalize_specs(model_specs) -> list[ModelSpec]:
    if model_specs is None:
        return [ModelSpec(kind=k) for k in ("DT", "RF", "LR", "KNN", "MLP")]
    out = []
    for spec in model_specs:
        if isinstance(spec, ModelSpec):
            out.append(ModelSpec(kind=normalize_kind(spec.kind), params=spec.params))
        else:
            out.append(ModelSpec(kind=normalize_kind(spec)))
    return out


def run_groups(
    transactions: Sequence[RawTransaction],
    embed_config: TrainConfig | None = None,
    augment_config: AugmentConfig | None = None,
    model_specs: Sequence | None = None,
    split_config: SplitConfig | None = None,
    *,
    keep_category_in_group2: bool = False,
    space: EmbeddingSpace | None = None,
) -> ExperimentReport:
    """Run the four-group comparison on one transaction corpus.

    The embedding space is trained once on all transactions (label-free),
    the split is computed once from raw-transaction fingerprints and
    shared by every group, and augmentation touches only training rows.
    Pass ``space`` to reuse an already trained embedding space.
    ``keep_category_in_group2`` retains the one-hot category block next
    to the embedding coordinates in Groups 2 and 4.
    """
    embed_config = embed_config or TrainConfig()
    augment_config = augment_config or AugmentConfig()
    split_config = split_config or SplitConfig()
    augment_config.validate()
    specs = _normalize_specs(model_specs)

    if space is None:
        space = train(build_sentences(transactions), embed_config)

    categories = sorted({t.category for t in transactions})
    table1 = build_feature_table(transactions, mode=ONEHOT_MODE, categories=categories)
    table2 = build_feature_table(transactions, mode=EMBEDDING_MODE, space=space)
    if keep_category_in_group2:
        cat_block = table1.rows[:, -len(categories):]
        table2 = FeatureTable(
            column_names=table2.column_names + [f"cat_{c}" for c in categories],
            rows=np.hstack([table2.rows, cat_block]),
            labels=table2.labels,
            customer_keys=list(table2.customer_keys),
        )

    fps = [transaction_fingerprint(t) for t in transactions]
    train_idx, test_idx = split_indices(fps, table1.labels, split_config)

    train1, test1 = subset_table(table1, train_idx), subset_table(table1, test_idx)
    train2, test2 = subset_table(table2, train_idx), subset_table(table2, test_idx)

    n_extra = augment_config.smote_extra
    if n_extra is None:
        n_extra = int(train1.labels.sum())
    train3, smote_report = smote(
        train1, k=augment_config.smote_k, n_synthetic=n_extra, seed=augment_config.seed
    )
    train4, relabel_report = relabel_by_similarity(train2, space, tau=augment_config.tau)

    group_data = {
        1: (train1, test1),
        2: (train2, test2),
        3: (train3, test1),
        4: (train4, test2),
    }

    rows: list[MetricsRow] = []
    macro_rows: list[MetricsRow] = []
    for group in (1, 2, 3, 4):
        train_tab, test_tab = group_data[group]
        for spec in specs:
            model = train_model(spec, train_tab.rows, train_tab.labels, train_tab.column_names)
            pos_row, macro_row = evaluate_model(model, test_tab, group=group)
            rows.append(pos_row)
            macro_rows.append(macro_row)

    config_summary = {
        "embed": asdict(embed_config),
        "augment": asdict(augment_config),
        "split": asdict(split_config),
        "models": [s.kind for s in specs],
        "keep_category_in_group2": keep_category_in_group2,
    }
    digest = fnv1a_64_hex(
        json.dumps(config_summary, sort_keys=True).encode("utf-8")
    )
    return ExperimentReport(
        rows=rows,
        macro_rows=macro_rows,
        augmentation={3: smote_report, 4: relabel_report},
        dataset_fp=dataset_fingerprint(fps),
        seeds={
            "embed": embed_config.seed,
            "split": split_config.seed,
            "augment": augment_config.seed,
        },
        config_digest=digest,
        n_train=int(train_idx.size),
        n_test=int(test_idx.size),
        positives_train=int(train1.labels.sum()),
        positives_test=int(test1.labels.sum()),
        embedding_vocab=len(space.vocab.tokens),
        group_columns={g: group_data[g][0].rows.shape[1] for g in (1, 2, 3, 4)},
    )
