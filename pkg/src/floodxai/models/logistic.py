"""Binary logistic regression trained by full-batch gradient descent.

Optimization runs in standardized feature space for numeric stability and
the learned parameters are folded back to raw millimeter coordinates, so
the model's log-odds are exactly linear in the raw features.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from ..dataset import fit_scaler
from ..errors import ConfigError
from .base import ProbabilityClassifier, prepare_features


@dataclass(frozen=True)
class LogisticConfig:
    learning_rate: float = 0.01
    epochs: int = 5000
    l2: float = 1e-4

    def validate(self):
        if self.learning_rate <= 0:
            raise ConfigError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got {self.epochs}")
        if self.l2 < 0:
            raise ConfigError(f"l2 must be non-negative, got {self.l2}")


def loss_and_gradient(weights, intercept, X, y, l2):
    """Regularized mean negative log-likelihood and its exact gradient.

    The log-loss is evaluated via logaddexp so saturated logits stay finite;
    the L2 penalty applies to the weights only, never the intercept.
    """
    z = X @ weights + intercept
    p = expit(z)
    n = X.shape[0]
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z) + 0.5 * l2 * np.dot(weights, weights))
    grad_w = X.T @ (p - y) / n + l2 * weights
    grad_b = float(np.mean(p - y))
    return loss, grad_w, grad_b


@dataclass(eq=False)
class LogisticModel(ProbabilityClassifier):
    """Trained logistic classifier: sigma(intercept + weights . x) in raw units."""

    weights: np.ndarray
    intercept: float
    config: LogisticConfig
    scaler: object = None
    loss_history: np.ndarray = None

    @property
    def n_features(self):
        return self.weights.shape[0]

    def decision_function(self, X):
        A, single = prepare_features(X, self.n_features)
        z = A @ self.weights + self.intercept
        return float(z[0]) if single else z

    def predict_proba(self, X):
        A, single = prepare_features(X, self.n_features)
        p = expit(A @ self.weights + self.intercept)
        return float(p[0]) if single else p


def train_logistic(train, config=None):
    """Fit a :class:`LogisticModel` on a training dataset.

    Full-batch gradient descent from a zero start; the per-epoch loss history
    is recorded and is non-increasing for the default step size.
    """
    config = config or LogisticConfig()
    config.validate()
    X_raw, y = train.features(), train.labels().astype(float)
    classes = np.unique(y)
    if classes.size < 2:
        raise ConfigError("logistic regression needs both classes in the training set")

    scaler = fit_scaler(train)
    X = scaler.transform(X_raw)
    n_features = X.shape[1]
    w = np.zeros(n_features)
    b = 0.0
    history = np.empty(config.epochs)
    for epoch in range(config.epochs):
        loss, grad_w, grad_b = loss_and_gradient(w, b, X, y, config.l2)
        history[epoch] = loss
        w = w - config.learning_rate * grad_w
        b = b - config.learning_rate * grad_b

    # fold the standardizer into the parameters: sigma(w.z + b) == sigma(w'.x + b')
    w_raw = w / scaler.std
    b_raw = float(b - np.dot(w / scaler.std, scaler.mean))
    return LogisticModel(
        weights=w_raw,
        intercept=b_raw,
        config=config,
        scaler=scaler,
        loss_history=history,
    )
