"""Model kinds, default hyperparameters, and the training dispatcher."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ConfigError, UnsupportedModelError
from .forest import RFParams, train_random_forest
from .linear import LRParams, train_logistic_regression
from .mlp import MLPParams, train_mlp
from .neighbors import KNNParams, train_knn
from .tree import DTParams, train_decision_tree

KINDS = ("DT", "RF", "LR", "KNN", "MLP")

PARAM_TYPES = {
    "DT": DTParams,
    "RF": RFParams,
    "LR": LRParams,
    "KNN": KNNParams,
    "MLP": MLPParams,
}

_TRAINERS = {
    "DT": train_decision_tree,
    "RF": train_random_forest,
    "LR": train_logistic_regression,
    "KNN": train_knn,
    "MLP": train_mlp,
}


def normalize_kind(kind: str) -> str:
    """Canonical model kind; SVC is recognized but refused."""
    k = str(kind).strip().upper()
    if k == "SVC":
        raise UnsupportedModelError(
            "model kind 'SVC' (RBF support vector machine) is unsupported in "
            "this artifact; train it with a mainstream library instead"
        )
    if k not in KINDS:
        raise ConfigError(
            f"unknown model kind {kind!r}; valid kinds: {', '.join(KINDS)}"
        )
    return k


def make_params(kind: str, overrides: dict | None = None):
    """Default parameters for ``kind``, with optional field overrides."""
    k = normalize_kind(kind)
    cls = PARAM_TYPES[k]
    overrides = overrides or {}
    valid = set(cls.__dataclass_fields__)
    unknown = set(overrides) - valid
    if unknown:
        raise ConfigError(
            f"unknown {k} parameter(s): {', '.join(sorted(unknown))}"
        )
    return cls(**overrides)


@dataclass
class ModelSpec:
    """A model kind plus its hyperparameters (None: kind defaults)."""

    kind: str
    params: object | None = None


def train_model(spec: ModelSpec, X, y, feature_names=None):
    """Train the model described by ``spec`` on (X, y)."""
    kind = normalize_kind(spec.kind)
    return _TRAINERS[kind](X, y, feature_names=feature_names, params=spec.params)
