"""K-nearest-neighbors classifier over standardized rainfall features."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from ..dataset import fit_scaler
from ..errors import ConfigError, DatasetError
from .base import ProbabilityClassifier, prepare_features


def euclidean_distance(a, b):
    """Plain Euclidean distance between two equal-length feature vectors."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DatasetError(f"length mismatch: {a.shape} vs {b.shape}")
    return float(np.sqrt(np.sum((a - b) ** 2)))


@dataclass(eq=False)
class KnnModel(ProbabilityClassifier):
    """Stores the scaled training set; predicts by vote over the K nearest.

    Neighbor selection is defined purely by distance values, so predictions
    are invariant to the storage order of training rows: when several points
    tie exactly at the K-th distance, the remaining vote slots are shared
    equally among them.
    """

    k: int
    train_scaled: np.ndarray
    train_labels: np.ndarray
    scaler: object

    @property
    def n_features(self):
        return self.train_scaled.shape[1]

    def _distances(self, X):
        A, single = prepare_features(X, self.n_features)
        return cdist(self.scaler.transform(A), self.train_scaled), single

    def _proba_from_distances(self, D):
        y = self.train_labels.astype(float)
        kth = np.sort(D, axis=1)[:, self.k - 1]
        closer = D < kth[:, None]
        at_kth = D == kth[:, None]
        n_closer = closer.sum(axis=1)
        n_at = at_kth.sum(axis=1)
        votes = closer @ y + (self.k - n_closer) * (at_kth @ y) / n_at
        return votes / self.k

    def predict_proba(self, X):
        D, single = self._distances(X)
        proba = self._proba_from_distances(D)
        return float(proba[0]) if single else proba

    def predict(self, X):
        """Majority vote; an exact 50/50 vote falls to the nearest neighbor's class."""
        D, single = self._distances(X)
        proba = self._proba_from_distances(D)
        labels = (proba >= 0.5).astype(int)
        tied = proba == 0.5
        if tied.any():
            y = self.train_labels.astype(float)
            nearest = D.min(axis=1)
            for i in np.flatnonzero(tied):
                at_min = D[i] == nearest[i]
                # nearest neighbors that themselves split evenly keep class 1
                labels[i] = 1 if y[at_min].mean() >= 0.5 else 0
        return int(labels[0]) if single else labels


def train_knn(train, k=5):
    """Standardize the training features and store them for neighbor lookup."""
    n = len(train)
    if n == 0:
        raise DatasetError("cannot train KNN on an empty dataset")
    if not 1 <= k <= n:
        raise ConfigError(f"k must satisfy 1 <= k <= {n}, got {k}")
    scaler = fit_scaler(train)
    return KnnModel(
        k=int(k),
        train_scaled=scaler.transform(train.features()),
        train_labels=train.labels(),
        scaler=scaler,
    )
