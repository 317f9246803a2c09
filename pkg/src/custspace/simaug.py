"""Label augmentation: embedding-similarity relabeling and SMOTE.

Positive labels are scarce, so two augmenters expand them on a training
partition.  Similarity relabeling flips every row of customers whose
embedding sits within a cosine threshold of some already-positive
customer; SMOTE synthesizes new positive rows by interpolating between
existing positives.  Both return a new table plus a structured report and
never touch rows outside their mandate (relabeling never clears an
existing positive; SMOTE never alters existing rows).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ConfigError, DomainError
from .ingest import FeatureTable


@dataclass
class AugmentConfig:
    """Augmentation parameters shared by the relabeler and SMOTE."""

    tau: float = 0.95
    smote_k: int = 5
    smote_extra: int | None = None  # None: one synthetic row per existing positive
    seed: int = 0

    def validate(self) -> None:
        if not -1.0 <= self.tau <= 1.0:
            raise ConfigError("augment.tau must lie in [-1, 1]")
        if self.smote_k < 1:
            raise ConfigError("augment.smote_k must be >= 1")
        if self.smote_extra is not None and self.smote_extra < 0:
            raise ConfigError("augment.smote_extra must be >= 0")


@dataclass
class AugmentationReport:
    """What an augmentation run did, in numbers."""

    method: str
    positives_before: int
    positives_after: int
    rows_before: int
    rows_after: int
    tau: float | None = None
    flipped_customers: list[str] = field(default_factory=list)
    smote_k: int | None = None
    smote_k_effective: int | None = None
    synthetic_rows: int | None = None
    seed: int | None = None

    def to_dict(self) -> dict:
        out = {
            "method": self.method,
            "positives_before": self.positives_before,
            "positives_after": self.positives_after,
            "rows_before": self.rows_before,
            "rows_after": self.rows_after,
        }
        if self.method == "similarity_relabel":
            out["tau"] = self.tau
            out["flipped_customers"] = list(self.flipped_customers)
            out["customers_flipped"] = len(self.flipped_customers)
        else:
            out["smote_k"] = self.smote_k
            out["smote_k_effective"] = self.smote_k_effective
            out["synthetic_rows"] = self.synthetic_rows
            out["seed"] = self.seed
        return out

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def cosine(a: np.ndarray, b: np.ndarray) -> float | None:
    """Cosine similarity, or None when either vector has zero norm.

    Vectors must share one dimension; a length mismatch raises
    DomainError.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1 or a.shape[0] != b.shape[0]:
        raise DomainError(f"cosine requires equal-length vectors, got {a.shape} and {b.shape}")
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return None
    return float(np.dot(a, b) / (na * nb))


def max_similarity_to_set(space, query: str, seeds: Sequence[str]) -> tuple[float, str] | None:
    """Highest cosine between ``query`` and any seed token with a vector.

    Seeds are scanned in sorted order after dropping duplicates; with
    strictly-greater comparison the first of equally similar seeds wins,
    so results do not depend on the caller's ordering.  Returns
    (similarity, seed_token), or None when the query resolves to no
    usable vector.  A seed set with no usable vectors raises DomainError.
    """
    q = space.get(query)
    usable = []
    for s in sorted(set(seeds)):
        vec = space.get(s)
        if vec is not None and np.linalg.norm(vec) != 0.0:
            usable.append((s, vec))
    if not usable:
        raise DomainError("seed set has no members with a usable vector")
    if q is None or float(np.linalg.norm(q)) == 0.0:
        return None
    best_sim = -np.inf
    best_seed = None
    for s, vec in usable:
        sim = cosine(q, vec)
        if sim is not None and sim > best_sim:
            best_sim = sim
            best_seed = s
    if best_seed is None:
        return None
    return float(best_sim), best_seed


def relabel_by_similarity(
    table: FeatureTable, space, tau: float = 0.95
) -> tuple[FeatureTable, AugmentationReport]:
    """Flip labels of customers embedded near already-positive customers.

    The seed set is fixed once from the table's positive rows.  Every
    other customer with a usable vector whose maximum cosine similarity
    to the seeds reaches ``tau`` (inclusive) has all of its rows flipped
    to positive.  Flips only ever go 0 -> 1, the pass is not iterated,
    and customers without vectors are left alone.  Tables with no
    positive rows raise DomainError.
    """
    if not -1.0 <= tau <= 1.0:
        raise DomainError(f"tau must lie in [-1, 1], got {tau}")
    labels = np.array(table.labels, dtype=np.int64, copy=True)
    seeds = sorted({k for k, y in zip(table.customer_keys, labels) if y == 1})
    if not seeds:
        raise DomainError("relabeling needs at least one positive row as seed")
    seed_set = set(seeds)
    candidates = sorted({k for k in table.customer_keys if k not in seed_set})
    flipped: list[str] = []
    for key in candidates:
        hit = max_similarity_to_set(space, key, seeds)
        if hit is not None and hit[0] >= tau:
            flipped.append(key)
    flip_set = set(flipped)
    for i, key in enumerate(table.customer_keys):
        if key in flip_set:
            labels[i] = 1
    new_table = FeatureTable(
        column_names=list(table.column_names),
        rows=table.rows,
        labels=labels,
        customer_keys=list(table.customer_keys),
    )
    report = AugmentationReport(
        method="similarity_relabel",
        positives_before=int(table.labels.sum()),
        positives_after=int(labels.sum()),
        rows_before=int(table.rows.shape[0]),
        rows_after=int(table.rows.shape[0]),
        tau=tau,
        flipped_customers=flipped,
    )
    return new_table, report


def smote(
    table: FeatureTable, k: int = 5, n_synthetic: int | None = None, seed: int = 0
) -> tuple[FeatureTable, AugmentationReport]:
    """Append interpolated positive rows (classic SMOTE).

    Each synthetic row picks a random existing positive, one of its k
    nearest positive neighbors (Euclidean, self excluded, k clipped to
    positives - 1), and a uniform interpolation weight.  Synthetic rows
    get keys "synth:NNNNNN" and label 1; original rows are untouched.
    ``n_synthetic`` defaults to the current positive count.  Fewer than
    two positive rows raise DomainError.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    pos_idx = np.flatnonzero(table.labels == 1)
    n_pos = int(pos_idx.size)
    if n_pos < 2:
        raise DomainError(f"SMOTE needs at least 2 positive rows, got {n_pos}")
    if n_synthetic is None:
        n_synthetic = n_pos
    if n_synthetic < 0:
        raise DomainError(f"n_synthetic must be >= 0, got {n_synthetic}")

    pos = table.rows[pos_idx]
    k_eff = min(k, n_pos - 1)
    diffs = pos[:, None, :] - pos[None, :, :]
    dists = np.sqrt((diffs * diffs).sum(axis=2))
    np.fill_diagonal(dists, np.inf)
    neighbor_ids = np.argsort(dists, axis=1, kind="stable")[:, :k_eff]

    rng = np.random.default_rng(seed)
    synth = np.zeros((n_synthetic, table.rows.shape[1]), dtype=np.float64)
    for s in range(n_synthetic):
        i = int(rng.integers(0, n_pos))
        j = int(neighbor_ids[i, int(rng.integers(0, k_eff))])
        lam = float(rng.random())
        synth[s] = pos[i] + lam * (pos[j] - pos[i])

    rows = np.vstack([table.rows, synth])
    labels = np.concatenate([table.labels, np.ones(n_synthetic, dtype=np.int64)])
    keys = list(table.customer_keys) + [f"synth:{s:06d}" for s in range(n_synthetic)]
    new_table = FeatureTable(
        column_names=list(table.column_names),
        rows=rows,
        labels=labels,
        customer_keys=keys,
    )
    report = AugmentationReport(
        method="smote",
        positives_before=n_pos,
        positives_after=n_pos + n_synthetic,
        rows_before=int(table.rows.shape[0]),
        rows_after=int(rows.shape[0]),
        smote_k=k,
        smote_k_effective=k_eff,
        synthetic_rows=n_synthetic,
        seed=seed,
    )
    return new_table, report
