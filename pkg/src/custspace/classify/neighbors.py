"""k-nearest-neighbors classifier with brute-force Minkowski search.

Distances are computed from absolute coordinate differences, so a query
equal to a training row yields an exact zero.  When any selected neighbor
sits at distance zero, prediction reduces to a majority vote over those
zero-distance neighbors; otherwise neighbors vote with weight 1/distance
(or uniformly).  Score ties resolve to class 0.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass

import numpy as np

from ..errors import ConfigError, DomainError
from ._common import check_query, check_xy

logger = logging.getLogger(__name__)


@dataclass
class KNNParams:
    n_neighbors: int = 14
    p: int = 2
    weighting: str = "distance"
    algorithm: str = "auto"  # accepted for config compatibility; search is brute force
    leaf_size: int = 30      # likewise ignored

    def validate(self) -> None:
        if self.n_neighbors < 1:
            raise ConfigError("knn.n_neighbors must be >= 1")
        if self.p < 1:
            raise ConfigError("knn.p must be >= 1")
        if self.weighting not in ("distance", "uniform"):
            raise ConfigError("knn.weighting must be 'distance' or 'uniform'")


class KNeighborsModel:
    kind = "KNN"

    def __init__(self, feature_names, params: KNNParams, X, y):
        self.feature_names = list(feature_names)
        self.params = params
        self.X = np.asarray(X, dtype=np.float64)
        self.y = np.asarray(y, dtype=np.int64)

    def _scores_for(self, Q: np.ndarray) -> np.ndarray:
        k = self.params.n_neighbors
        p = self.params.p
        n = self.X.shape[0]
        scores = np.zeros(Q.shape[0], dtype=np.float64)
        # Chunk queries so the (chunk, n, d) difference tensor stays small.
        chunk = max(1, int(2**24 // max(1, n * self.X.shape[1])))
        for lo in range(0, Q.shape[0], chunk):
            block = Q[lo : lo + chunk]
            diff = np.abs(block[:, None, :] - self.X[None, :, :])
            if p == 1:
                dists = diff.sum(axis=2)
            elif p == 2:
                dists = np.sqrt((diff * diff).sum(axis=2))
            else:
                dists = (diff**p).sum(axis=2) ** (1.0 / p)
            for i in range(block.shape[0]):
                order = np.argsort(dists[i], kind="stable")[:k]
                dsel = dists[i][order]
                ysel = self.y[order]
                zero = dsel == 0.0
                if zero.any():
                    s1 = float((ysel[zero] == 1).sum())
                    s0 = float(zero.sum()) - s1
                elif self.params.weighting == "distance":
                    wsel = 1.0 / dsel
                    s1 = float(wsel[ysel == 1].sum())
                    s0 = float(wsel[ysel == 0].sum())
                else:
                    s1 = float((ysel == 1).sum())
                    s0 = float((ysel == 0).sum())
                scores[lo + i] = s1 / (s0 + s1)
        return scores

    def predict_scores(self, X) -> np.ndarray:
        Q = check_query(self.feature_names, X)
        return self._scores_for(Q)

    def predict(self, X) -> np.ndarray:
        return (self.predict_scores(X) > 0.5).astype(np.int64)

    def to_dict(self) -> dict:
        return {
            "feature_names": self.feature_names,
            "params": asdict(self.params),
            "state": {"X": self.X.tolist(), "y": self.y.tolist()},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "KNeighborsModel":
        return cls(
            feature_names=data["feature_names"],
            params=KNNParams(**data["params"]),
            X=data["state"]["X"],
            y=data["state"]["y"],
        )


def train_knn(X, y, feature_names=None, params: KNNParams | None = None) -> KNeighborsModel:
    """Store the training set; neighbor search happens at prediction time."""
    params = params or KNNParams()
    params.validate()
    X, y, names = check_xy(X, y, feature_names)
    if params.n_neighbors > X.shape[0]:
        raise DomainError(
            f"n_neighbors={params.n_neighbors} exceeds {X.shape[0]} training rows"
        )
    if params.algorithm not in ("auto", "brute") or params.leaf_size != 30:
        logger.warning(
            "knn: algorithm=%r and leaf_size=%r are accepted but ignored; "
            "neighbor search is always brute force",
            params.algorithm,
            params.leaf_size,
        )
    return KNeighborsModel(feature_names=names, params=params, X=X, y=y)


def knn_predict(model: KNeighborsModel, X) -> np.ndarray:
    """Predicted labels for ``X`` under the model's voting rules."""
    return model.predict(X)
