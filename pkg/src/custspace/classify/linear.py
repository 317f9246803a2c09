"""L2-regularized logistic regression trained with minibatch gradient steps.

The objective is the sum form

    F(w, b) = (1 / (2 C)) ||w||^2 + sum_i log(1 + exp(-t_i (w . x_i + b)))

with t_i = 2 y_i - 1 and an unregularized bias.  ``loss_and_grad`` exposes
F and its exact gradient for derivative checks.  Training standardizes
features internally and handles the L2 term with an implicit (proximal)
shrink per step, w <- (w - lr g_data) / (1 + lr / (C n)), which stays
stable for extremely small C where an explicit regularization gradient
would overshoot and diverge.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ..errors import ConfigError
from ._common import Standardizer, check_query, check_xy


@dataclass
class LRParams:
    c: float = 0.001
    lr: float = 0.01
    batch_size: int = 256
    max_epochs: int = 100
    tol: float = 1e-6
    seed: int = 0

    def validate(self) -> None:
        if self.c <= 0:
            raise ConfigError("lr.c must be > 0")
        if self.lr <= 0:
            raise ConfigError("lr.lr must be > 0")
        if self.batch_size < 1:
            raise ConfigError("lr.batch_size must be >= 1")
        if self.max_epochs < 1:
            raise ConfigError("lr.max_epochs must be >= 1")
        if self.tol < 0:
            raise ConfigError("lr.tol must be >= 0")


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def loss_and_grad(
    w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, c: float | None = None
) -> tuple[float, np.ndarray, float]:
    """Sum-form objective and exact gradients; ``c`` None drops the L2 term."""
    z = X @ w + b
    t = 2.0 * y - 1.0
    loss = float(np.logaddexp(0.0, -t * z).sum())
    r = _sigmoid(z) - y
    gw = X.T @ r
    gb = float(r.sum())
    if c is not None:
        loss += float(w @ w) / (2.0 * c)
        gw = gw + w / c
    return loss, gw, gb


class LogisticRegressionModel:
    kind = "LR"

    def __init__(self, feature_names, params: LRParams, weights, bias,
                 standardizer: Standardizer, loss_history, epochs_run, converged):
        self.feature_names = list(feature_names)
        self.params = params
        self.weights = np.asarray(weights, dtype=np.float64)
        self.bias = float(bias)
        self.standardizer = standardizer
        self.loss_history = list(loss_history)
        self.epochs_run = int(epochs_run)
        self.converged = bool(converged)

    def predict_scores(self, X) -> np.ndarray:
        X = check_query(self.feature_names, X)
        return _sigmoid(self.standardizer.transform(X) @ self.weights + self.bias)

    def predict(self, X) -> np.ndarray:
        return (self.predict_scores(X) > 0.5).astype(np.int64)

    def to_dict(self) -> dict:
        return {
            "feature_names": self.feature_names,
            "params": asdict(self.params),
            "state": {
                "weights": self.weights.tolist(),
                "bias": self.bias,
                "mean": self.standardizer.mean.tolist(),
                "scale": self.standardizer.scale.tolist(),
                "loss_history": self.loss_history,
                "epochs_run": self.epochs_run,
                "converged": self.converged,
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LogisticRegressionModel":
        state = data["state"]
        std = Standardizer(
            mean=np.array(state["mean"], dtype=np.float64),
            scale=np.array(state["scale"], dtype=np.float64),
        )
        return cls(
            feature_names=data["feature_names"],
            params=LRParams(**data["params"]),
            weights=state["weights"],
            bias=state["bias"],
            standardizer=std,
            loss_history=state["loss_history"],
            epochs_run=state["epochs_run"],
            converged=state["converged"],
        )


def train_logistic_regression(
    X, y, feature_names=None, params: LRParams | None = None
) -> LogisticRegressionModel:
    """Fit logistic regression; stops early when the mean objective stalls.

    After each epoch the full mean objective F/n is recorded; training
    stops once the improvement over the previous epoch falls below
    ``tol`` (or after max_epochs).
    """
    params = params or LRParams()
    params.validate()
    X, y, names = check_xy(X, y, feature_names)
    std = Standardizer.fit(X)
    Xs = std.transform(X)
    n = Xs.shape[0]
    yf = y.astype(np.float64)
    w = np.zeros(Xs.shape[1], dtype=np.float64)
    b = 0.0
    rng = np.random.default_rng(params.seed)
    shrink = 1.0 + params.lr / (params.c * n)

    def mean_objective() -> float:
        return loss_and_grad(w, b, Xs, yf, params.c)[0] / n

    history = [mean_objective()]
    converged = False
    epochs_run = 0
    for _ in range(params.max_epochs):
        perm = rng.permutation(n)
        for start in range(0, n, params.batch_size):
            idx = perm[start : start + params.batch_size]
            r = _sigmoid(Xs[idx] @ w + b) - yf[idx]
            gw = Xs[idx].T @ r / idx.size
            gb = float(r.mean())
            w = (w - params.lr * gw) / shrink
            b -= params.lr * gb
        epochs_run += 1
        history.append(mean_objective())
        if history[-2] - history[-1] < params.tol:
            converged = True
            break
    return LogisticRegressionModel(
        feature_names=names,
        params=params,
        weights=w,
        bias=b,
        standardizer=std,
        loss_history=history,
        epochs_run=epochs_run,
        converged=converged,
    )
