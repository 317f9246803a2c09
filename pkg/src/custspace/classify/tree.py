"""CART decision tree with Gini impurity.

Split search is exhaustive: every feature, every midpoint between
consecutive distinct sorted values.  Ties in impurity decrease resolve to
the lowest feature index, then the lowest threshold.  Leaves store class
fractions, so predicted scores are leaf purities.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from ..errors import ConfigError
from ._common import check_query, check_xy


@dataclass
class DTParams:
    max_depth: int = 3
    min_samples_split: int = 2
    min_samples_leaf: int = 1

    def validate(self) -> None:
        if self.max_depth < 1:
            raise ConfigError("dt.max_depth must be >= 1")
        if self.min_samples_split < 2:
            raise ConfigError("dt.min_samples_split must be >= 2")
        if self.min_samples_leaf < 1:
            raise ConfigError("dt.min_samples_leaf must be >= 1")


class DecisionTreeModel:
    """Fitted tree stored as parallel node arrays (preorder)."""

    kind = "DT"

    def __init__(self, feature_names, params, feature, threshold, left, right,
                 value, n_samples, gain):
        self.feature_names = list(feature_names)
        self.params = params
        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.value = np.asarray(value, dtype=np.float64)
        self.n_samples = np.asarray(n_samples, dtype=np.int64)
        self.gain = np.asarray(gain, dtype=np.float64)

    @property
    def n_nodes(self) -> int:
        return int(self.feature.shape[0])

    def apply(self, X) -> np.ndarray:
        """Leaf index for each row (rows with x <= threshold go left)."""
        X = check_query(self.feature_names, X)
        node = np.zeros(X.shape[0], dtype=np.int64)
        while True:
            idx = np.flatnonzero(self.feature[node] >= 0)
            if idx.size == 0:
                return node
            cur = node[idx]
            go_left = X[idx, self.feature[cur]] <= self.threshold[cur]
            node[idx] = np.where(go_left, self.left[cur], self.right[cur])

    def predict_scores(self, X) -> np.ndarray:
        return self.value[self.apply(X), 1]

    def predict(self, X) -> np.ndarray:
        return (self.predict_scores(X) > 0.5).astype(np.int64)

    def to_dict(self) -> dict:
        return {
            "feature_names": self.feature_names,
            "params": asdict(self.params),
            "state": {
                "feature": self.feature.tolist(),
                "threshold": self.threshold.tolist(),
                "left": self.left.tolist(),
                "right": self.right.tolist(),
                "value": self.value.tolist(),
                "n_samples": self.n_samples.tolist(),
                "gain": self.gain.tolist(),
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DecisionTreeModel":
        state = data["state"]
        return cls(
            feature_names=data["feature_names"],
            params=DTParams(**data["params"]),
            feature=state["feature"],
            threshold=state["threshold"],
            left=state["left"],
            right=state["right"],
            value=state["value"],
            n_samples=state["n_samples"],
            gain=state["gain"],
        )


class _TreeBuilder:
    """Grows one tree depth-first, left child before right.

    ``feature_sampler`` (used by the forest) returns the candidate
    feature ids for one node; None means all features.  The compiled
    split kernel scans candidates in the given order, so samplers must
    return sorted ids for the lowest-feature tie rule to hold.
    """

    def __init__(self, X, y, max_depth, min_samples_split, min_samples_leaf,
                 feature_sampler: Callable[[], np.ndarray] | None = None):
        from .._kernels import best_split

        self._best_split = best_split
        self.X = np.ascontiguousarray(X, dtype=np.float64)
        self.y = np.ascontiguousarray(y, dtype=np.int64)
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.min_samples_leaf = min_samples_leaf
        self.feature_sampler = feature_sampler
        self.all_features = np.arange(X.shape[1], dtype=np.int64)
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[tuple[float, float]] = []
        self.n_samples: list[int] = []
        self.gain: list[float] = []

    def build(self) -> None:
        self._grow(np.arange(self.X.shape[0], dtype=np.int64), depth=0)

    def _add_node(self, n: int, pos: int) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(((n - pos) / n, pos / n))
        self.n_samples.append(n)
        self.gain.append(0.0)
        return len(self.feature) - 1

    def _grow(self, idx: np.ndarray, depth: int) -> int:
        n = int(idx.size)
        pos = int(self.y[idx].sum())
        node = self._add_node(n, pos)
        if depth >= self.max_depth or n < self.min_samples_split or pos in (0, n):
            return node
        feats = self.all_features if self.feature_sampler is None else self.feature_sampler()
        f, thr, gain = self._best_split(
            self.X[idx], self.y[idx], feats, self.min_samples_leaf
        )
        if f < 0:
            return node
        go_left = self.X[idx, f] <= thr
        self.feature[node] = int(f)
        self.threshold[node] = float(thr)
        self.gain[node] = float(gain)
        self.left[node] = self._grow(idx[go_left], depth + 1)
        self.right[node] = self._grow(idx[~go_left], depth + 1)
        return node


def train_decision_tree(X, y, feature_names=None, params: DTParams | None = None) -> DecisionTreeModel:
    """Fit a CART Gini tree; see DTParams for the stopping rules."""
    params = params or DTParams()
    params.validate()
    X, y, names = check_xy(X, y, feature_names)
    builder = _TreeBuilder(
        X, y, params.max_depth, params.min_samples_split, params.min_samples_leaf
    )
    builder.build()
    return DecisionTreeModel(
        feature_names=names,
        params=params,
        feature=builder.feature,
        threshold=builder.threshold,
        left=builder.left,
        right=builder.right,
        value=builder.value,
        n_samples=builder.n_samples,
        gain=builder.gain,
    )


def tree_importances(model: DecisionTreeModel) -> np.ndarray:
    """Per-feature impurity decrease, weighted by node share, summing to 1."""
    imp = np.zeros(len(model.feature_names), dtype=np.float64)
    root_n = model.n_samples[0]
    for i in range(model.n_nodes):
        f = model.feature[i]
        if f >= 0:
            imp[f] += (model.n_samples[i] / root_n) * model.gain[i]
    total = imp.sum()
    if total > 0:
        imp /= total
    return imp
