"""From-scratch classifier suite: DT, RF, LR, KNN, and MLP.

All models share the conventions: labels are 0/1, ``predict_scores``
returns the class-1 score, and ``predict`` emits 1 only for scores
strictly above 0.5 (ties fall to class 0).  RBF support vector machines
are recognized as a kind but refused with UnsupportedModelError.
"""

from __future__ import annotations

import numpy as np

from ..errors import DomainError
from .forest import RandomForestModel, RFParams, forest_importances, train_random_forest
from .linear import LogisticRegressionModel, LRParams, train_logistic_regression
from .mlp import MlpModel, MLPParams, train_mlp
from .neighbors import KNeighborsModel, KNNParams, knn_predict, train_knn
from .persist import load_model, save_model
from .specs import KINDS, ModelSpec, make_params, normalize_kind, train_model
from .tree import DecisionTreeModel, DTParams, train_decision_tree, tree_importances

__all__ = [
    "KINDS",
    "ModelSpec",
    "DTParams",
    "RFParams",
    "LRParams",
    "KNNParams",
    "MLPParams",
    "DecisionTreeModel",
    "RandomForestModel",
    "LogisticRegressionModel",
    "KNeighborsModel",
    "MlpModel",
    "train_decision_tree",
    "train_random_forest",
    "train_logistic_regression",
    "train_knn",
    "train_mlp",
    "train_model",
    "make_params",
    "normalize_kind",
    "knn_predict",
    "predict",
    "predict_scores",
    "feature_importance",
    "save_model",
    "load_model",
]


def predict_scores(model, X) -> np.ndarray:
    """Class-1 scores from any trained model."""
    return model.predict_scores(X)


def predict(model, X) -> np.ndarray:
    """Predicted 0/1 labels from any trained model."""
    return model.predict(X)


def feature_importance(model) -> list[tuple[str, float]]:
    """Impurity-decrease importances for tree models, descending.

    Defined for DT and RF; contributions are weighted by node share and
    normalized to sum 1.  Equal importances keep column order.
    """
    if isinstance(model, DecisionTreeModel):
        imp = tree_importances(model)
    elif isinstance(model, RandomForestModel):
        imp = forest_importances(model)
    else:
        raise DomainError(
            f"feature importance is defined for DT and RF models, not {model.kind}"
        )
    order = np.argsort(-imp, kind="stable")
    return [(model.feature_names[i], float(imp[i])) for i in order]
