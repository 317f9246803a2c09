"""Single-hidden-layer perceptron for binary classification.

Architecture: standardized inputs -> ReLU hidden layer -> one sigmoid
output unit.  The per-batch objective is

    mean BCE(batch) + (alpha / (2 |batch|)) (||W1||^2 + ||W2||^2)

optimized with Adam.  Inverted dropout on the hidden activations applies
during training only.  ``loss_and_grad`` exposes the dropout-free
objective and its exact gradients for derivative checks.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ..errors import ConfigError
from ._common import Standardizer, check_query, check_xy


@dataclass
class MLPParams:
    hidden: int = 100
    alpha: float = 0.05
    dropout: float = 0.1
    lr: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    batch_size: int = 256
    max_epochs: int = 100
    seed: int = 0

    def validate(self) -> None:
        if self.hidden < 1:
            raise ConfigError("mlp.hidden must be >= 1")
        if self.alpha < 0:
            raise ConfigError("mlp.alpha must be >= 0")
        if not 0.0 <= self.dropout < 1.0:
            raise ConfigError("mlp.dropout must lie in [0, 1)")
        if self.lr <= 0:
            raise ConfigError("mlp.lr must be > 0")
        if not 0.0 <= self.beta1 < 1.0 or not 0.0 <= self.beta2 < 1.0:
            raise ConfigError("mlp.beta1 and beta2 must lie in [0, 1)")
        if self.eps <= 0:
            raise ConfigError("mlp.eps must be > 0")
        if self.batch_size < 1:
            raise ConfigError("mlp.batch_size must be >= 1")
        if self.max_epochs < 1:
            raise ConfigError("mlp.max_epochs must be >= 1")


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def loss_and_grad(
    W1: np.ndarray,
    b1: np.ndarray,
    W2: np.ndarray,
    b2: float,
    X: np.ndarray,
    y: np.ndarray,
    alpha: float = 0.0,
) -> tuple[float, np.ndarray, np.ndarray, np.ndarray, float]:
    """Objective and exact gradients on ``X`` (no dropout).

    Returns (loss, gW1, gb1, gW2, gb2).  BCE uses the logit form
    log(1 + exp(z)) - y z, so it stays finite for any logit.
    """
    n = X.shape[0]
    z1 = X @ W1 + b1
    a1 = np.maximum(z1, 0.0)
    z2 = a1 @ W2 + b2
    loss = float(np.mean(np.logaddexp(0.0, z2) - y * z2))
    loss += (alpha / (2.0 * n)) * (float((W1 * W1).sum()) + float((W2 * W2).sum()))

    delta2 = (_sigmoid(z2) - y) / n
    gW2 = a1.T @ delta2 + (alpha / n) * W2
    gb2 = float(delta2.sum())
    delta1 = np.outer(delta2, W2) * (z1 > 0)
    gW1 = X.T @ delta1 + (alpha / n) * W1
    gb1 = delta1.sum(axis=0)
    return loss, gW1, gb1, gW2, gb2


class MlpModel:
    kind = "MLP"

    def __init__(self, feature_names, params: MLPParams, W1, b1, W2, b2,
                 standardizer: Standardizer, loss_history):
        self.feature_names = list(feature_names)
        self.params = params
        self.W1 = np.asarray(W1, dtype=np.float64)
        self.b1 = np.asarray(b1, dtype=np.float64)
        self.W2 = np.asarray(W2, dtype=np.float64)
        self.b2 = float(b2)
        self.standardizer = standardizer
        self.loss_history = list(loss_history)

    def predict_scores(self, X) -> np.ndarray:
        X = check_query(self.feature_names, X)
        Xs = self.standardizer.transform(X)
        a1 = np.maximum(Xs @ self.W1 + self.b1, 0.0)
        return _sigmoid(a1 @ self.W2 + self.b2)

    def predict(self, X) -> np.ndarray:
        return (self.predict_scores(X) > 0.5).astype(np.int64)

    def to_dict(self) -> dict:
        return {
            "feature_names": self.feature_names,
            "params": asdict(self.params),
            "state": {
                "W1": self.W1.tolist(),
                "b1": self.b1.tolist(),
                "W2": self.W2.tolist(),
                "b2": self.b2,
                "mean": self.standardizer.mean.tolist(),
                "scale": self.standardizer.scale.tolist(),
                "loss_history": self.loss_history,
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MlpModel":
        state = data["state"]
        std = Standardizer(
            mean=np.array(state["mean"], dtype=np.float64),
            scale=np.array(state["scale"], dtype=np.float64),
        )
        return cls(
            feature_names=data["feature_names"],
            params=MLPParams(**data["params"]),
            W1=state["W1"],
            b1=state["b1"],
            W2=state["W2"],
            b2=state["b2"],
            standardizer=std,
            loss_history=state["loss_history"],
        )


def train_mlp(X, y, feature_names=None, params: MLPParams | None = None) -> MlpModel:
    """Fit the perceptron with Adam over shuffled minibatches.

    Weights start Glorot-uniform from the model seed; the bias terms
    start at zero.  ``loss_history`` records the mean per-batch training
    objective of each epoch (dropout included, as optimized).
    """
    params = params or MLPParams()
    params.validate()
    X, y, names = check_xy(X, y, feature_names)
    std = Standardizer.fit(X)
    Xs = std.transform(X)
    yf = y.astype(np.float64)
    n, d = Xs.shape
    h = params.hidden

    rng = np.random.default_rng(params.seed)
    lim1 = np.sqrt(6.0 / (d + h))
    W1 = rng.uniform(-lim1, lim1, size=(d, h))
    b1 = np.zeros(h, dtype=np.float64)
    lim2 = np.sqrt(6.0 / (h + 1))
    W2 = rng.uniform(-lim2, lim2, size=h)
    b2 = 0.0

    msters = [np.zeros_like(W1), np.zeros_like(b1), np.zeros_like(W2), 0.0]
    vsters = [np.zeros_like(W1), np.zeros_like(b1), np.zeros_like(W2), 0.0]
    step = 0

    def adam(i: int, param, grad):
        msters[i] = params.beta1 * msters[i] + (1.0 - params.beta1) * grad
        vsters[i] = params.beta2 * vsters[i] + (1.0 - params.beta2) * (grad * grad)
        mhat = msters[i] / step_bias1
        vhat = vsters[i] / step_bias2
        return param - params.lr * mhat / (np.sqrt(vhat) + params.eps)

    loss_history: list[float] = []
    for _ in range(params.max_epochs):
        perm = rng.permutation(n)
        batch_losses: list[float] = []
        for start in range(0, n, params.batch_size):
            idx = perm[start : start + params.batch_size]
            Xb, yb = Xs[idx], yf[idx]
            nb = idx.size

            z1 = Xb @ W1 + b1
            a1 = np.maximum(z1, 0.0)
            if params.dropout > 0.0:
                mask = (rng.random(a1.shape) >= params.dropout) / (1.0 - params.dropout)
                a1d = a1 * mask
            else:
                mask = None
                a1d = a1
            z2 = a1d @ W2 + b2
            loss = float(np.mean(np.logaddexp(0.0, z2) - yb * z2))
            loss += (params.alpha / (2.0 * nb)) * (
                float((W1 * W1).sum()) + float((W2 * W2).sum())
            )
            batch_losses.append(loss)

            delta2 = (_sigmoid(z2) - yb) / nb
            gW2 = a1d.T @ delta2 + (params.alpha / nb) * W2
            gb2 = float(delta2.sum())
            delta1 = np.outer(delta2, W2) * (z1 > 0)
            if mask is not None:
                delta1 *= mask
            gW1 = Xb.T @ delta1 + (params.alpha / nb) * W1
            gb1 = delta1.sum(axis=0)

            step += 1
            step_bias1 = 1.0 - params.beta1**step
            step_bias2 = 1.0 - params.beta2**step
            W1 = adam(0, W1, gW1)
            b1 = adam(1, b1, gb1)
            W2 = adam(2, W2, gW2)
            b2 = float(adam(3, b2, gb2))
        loss_history.append(float(np.mean(batch_losses)))
    return MlpModel(
        feature_names=names,
        params=params,
        W1=W1,
        b1=b1,
        W2=W2,
        b2=b2,
        standardizer=std,
        loss_history=loss_history,
    )
