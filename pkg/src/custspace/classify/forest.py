"""Random forest over the CART trees.

Trees share the training rows unless bootstrap is on; diversity comes
from per-node feature subsampling.  Each tree draws from its own
generator spawned off the forest seed, so training order is reproducible.
Scores average the trees' leaf fractions.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ..errors import ConfigError
from ._common import check_query, check_xy
from .tree import DecisionTreeModel, DTParams, _TreeBuilder, tree_importances


@dataclass
class RFParams:
    n_estimators: int = 100
    max_depth: int = 50
    max_features: int = 10
    min_samples_leaf: int = 5
    min_samples_split: int = 8
    bootstrap: bool = False
    seed: int = 10

    def validate(self) -> None:
        if self.n_estimators < 1:
            raise ConfigError("rf.n_estimators must be >= 1")
        if self.max_depth < 1:
            raise ConfigError("rf.max_depth must be >= 1")
        if self.max_features < 1:
            raise ConfigError("rf.max_features must be >= 1")
        if self.min_samples_leaf < 1:
            raise ConfigError("rf.min_samples_leaf must be >= 1")
        if self.min_samples_split < 2:
            raise ConfigError("rf.min_samples_split must be >= 2")


class RandomForestModel:
    kind = "RF"

    def __init__(self, feature_names, params: RFParams, trees: list[DecisionTreeModel]):
        self.feature_names = list(feature_names)
        self.params = params
        self.trees = trees

    def predict_scores(self, X) -> np.ndarray:
        X = check_query(self.feature_names, X)
        total = np.zeros(X.shape[0], dtype=np.float64)
        for tree in self.trees:
            total += tree.predict_scores(X)
        return total / len(self.trees)

    def predict(self, X) -> np.ndarray:
        return (self.predict_scores(X) > 0.5).astype(np.int64)

    def to_dict(self) -> dict:
        return {
            "feature_names": self.feature_names,
            "params": asdict(self.params),
            "state": {"trees": [t.to_dict() for t in self.trees]},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RandomForestModel":
        params = RFParams(**data["params"])
        trees = [DecisionTreeModel.from_dict(t) for t in data["state"]["trees"]]
        return cls(feature_names=data["feature_names"], params=params, trees=trees)


def train_random_forest(X, y, feature_names=None, params: RFParams | None = None) -> RandomForestModel:
    """Fit a forest of Gini trees with per-node feature subsampling."""
    params = params or RFParams()
    params.validate()
    X, y, names = check_xy(X, y, feature_names)
    d = X.shape[1]
    mf = min(params.max_features, d)
    tree_params = DTParams(
        max_depth=params.max_depth,
        min_samples_split=params.min_samples_split,
        min_samples_leaf=params.min_samples_leaf,
    )
    seeds = np.random.SeedSequence(params.seed).spawn(params.n_estimators)
    trees: list[DecisionTreeModel] = []
    for t in range(params.n_estimators):
        rng = np.random.default_rng(seeds[t])
        if params.bootstrap:
            rows = rng.integers(0, X.shape[0], size=X.shape[0])
            Xt, yt = X[rows], y[rows]
        else:
            Xt, yt = X, y

        def sample_features() -> np.ndarray:
            return np.sort(rng.choice(d, size=mf, replace=False)).astype(np.int64)

        builder = _TreeBuilder(
            Xt,
            yt,
            params.max_depth,
            params.min_samples_split,
            params.min_samples_leaf,
            feature_sampler=sample_features if mf < d else None,
        )
        builder.build()
        trees.append(
            DecisionTreeModel(
                feature_names=names,
                params=tree_params,
                feature=builder.feature,
                threshold=builder.threshold,
                left=builder.left,
                right=builder.right,
                value=builder.value,
                n_samples=builder.n_samples,
                gain=builder.gain,
            )
        )
    return RandomForestModel(feature_names=names, params=params, trees=trees)


def forest_importances(model: RandomForestModel) -> np.ndarray:
    """Mean of per-tree normalized importances, renormalized to sum 1."""
    acc = np.zeros(len(model.feature_names), dtype=np.float64)
    for tree in model.trees:
        acc += tree_importances(tree)
    total = acc.sum()
    if total > 0:
        acc /= total
    return acc
