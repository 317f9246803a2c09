"""Shared input validation and standardization for the classifiers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError


def check_xy(X, y, feature_names=None) -> tuple[np.ndarray, np.ndarray, list[str]]:
    """Validate a training matrix and 0/1 labels; return canonical forms."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2:
        raise DomainError("X must be a 2-d array")
    if y.ndim != 1 or y.shape[0] != X.shape[0]:
        raise DomainError("y must be 1-d and row-aligned with X")
    if X.shape[0] < 1:
        raise DomainError("training needs at least one row")
    if not np.isfinite(X).all():
        raise DomainError("X must be finite")
    y = y.astype(np.int64)
    if y.size and not np.isin(y, (0, 1)).all():
        raise DomainError("labels must be 0 or 1")
    if feature_names is None:
        names = [f"f{i}" for i in range(X.shape[1])]
    else:
        names = [str(n) for n in feature_names]
        if len(names) != X.shape[1]:
            raise DomainError(
                f"feature_names has {len(names)} entries for {X.shape[1]} columns"
            )
    return X, y, names


def check_query(model_feature_names, X) -> np.ndarray:
    """Validate a prediction matrix against a model's expected width."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise DomainError("X must be a 2-d array")
    want = len(model_feature_names)
    if X.shape[1] != want:
        raise DomainError(
            f"feature width {X.shape[1]} does not match the model's {want} "
            "columns (feature dim mismatch)"
        )
    return X


@dataclass
class Standardizer:
    """Per-column zero-mean unit-variance scaling; constant columns pass through."""

    mean: np.ndarray
    scale: np.ndarray

    @classmethod
    def fit(cls, X: np.ndarray) -> "Standardizer":
        mean = X.mean(axis=0)
        std = X.std(axis=0)
        scale = np.where(std == 0.0, 1.0, std)
        return cls(mean=mean, scale=scale)

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (X - self.mean) / self.scale
