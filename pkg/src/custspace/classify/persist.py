"""JSON persistence for trained models.

Floats are serialized with full repr precision, so a saved and reloaded
model reproduces its predictions exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import FormatError, UnsupportedModelError
from .forest import RandomForestModel
from .linear import LogisticRegressionModel
from .mlp import MlpModel
from .neighbors import KNeighborsModel
from .tree import DecisionTreeModel

FORMAT_NAME = "custspace-model"

_REGISTRY = {
    "DT": DecisionTreeModel,
    "RF": RandomForestModel,
    "LR": LogisticRegressionModel,
    "KNN": KNeighborsModel,
    "MLP": MlpModel,
}


def save_model(model, path: str | Path) -> None:
    """Write a trained model to ``path`` as JSON."""
    kind = getattr(model, "kind", None)
    if kind not in _REGISTRY:
        raise UnsupportedModelError(f"cannot save model kind {kind!r}")
    payload = {"format": FORMAT_NAME, "kind": kind}
    payload.update(model.to_dict())
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True)
        fh.write("\n")


def load_model(path: str | Path):
    """Load a model written by :func:`save_model`."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"not valid JSON: {exc}")
    if not isinstance(data, dict) or data.get("format") != FORMAT_NAME:
        raise FormatError(f"not a {FORMAT_NAME} file")
    kind = data.get("kind")
    if kind == "SVC":
        raise UnsupportedModelError("model kind 'SVC' is unsupported in this artifact")
    cls = _REGISTRY.get(kind)
    if cls is None:
        raise FormatError(f"unknown model kind {kind!r}")
    try:
        return cls.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed {kind} model: {exc}")
