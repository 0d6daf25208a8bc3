"""Binary decision tree grown by greedy entropy-based splits on raw features.

Split thresholds are midpoints between consecutive sorted feature values;
gain ties break toward the lowest feature index, then the lowest threshold,
so training is fully deterministic. Growth stops at pure nodes, the depth
cap, the minimum leaf size, or when no split improves entropy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, DatasetError
from .base import ProbabilityClassifier, prepare_features


def entropy(labels):
    """Shannon entropy of a label multiset, in bits."""
    values = np.asarray(labels)
    if values.size == 0:
        raise DatasetError("entropy of an empty multiset is undefined")
    _, counts = np.unique(values, return_counts=True)
    p = counts / values.size
    return float(-np.sum(p * np.log2(p)))


def _binary_entropy(n_pos, n_total):
    if n_total == 0 or n_pos == 0 or n_pos == n_total:
        return 0.0
    p = n_pos / n_total
    return float(-(p * math.log2(p) + (1 - p) * math.log2(1 - p)))


@dataclass(eq=False)
class TreeNode:
    """Internal node (feature, threshold, children) or leaf (class probability)."""

    n_samples: int
    n_flood: int
    entropy_bits: float
    feature: int = None
    threshold: float = None
    gain: float = None
    left: "TreeNode" = None
    right: "TreeNode" = None

    @property
    def is_leaf(self):
        return self.feature is None

    @property
    def proba(self):
        return self.n_flood / self.n_samples


@dataclass(frozen=True)
class TreeConfig:
    max_depth: int = 5
    min_samples_leaf: int = 2

    def validate(self):
        if self.max_depth < 0:
            raise ConfigError(f"max_depth must be >= 0, got {self.max_depth}")
        if self.min_samples_leaf < 1:
            raise ConfigError(f"min_samples_leaf must be >= 1, got {self.min_samples_leaf}")


def _best_split(X, y, min_leaf):
    """Return (gain, feature, threshold) of the best split, or None."""
    n = y.size
    parent = _binary_entropy(int(y.sum()), n)
    if parent == 0.0:
        return None
    best = None
    for j in range(X.shape[1]):
        column = X[:, j]
        order = np.argsort(column, kind="stable")
        xs = column[order]
        ys = y[order]
        flood_prefix = np.cumsum(ys)
        total_flood = int(flood_prefix[-1])
        # candidate cut after position i (1-based count on the left)
        for i in range(1, n):
            if xs[i] == xs[i - 1]:
                continue
            n_left = i
            n_right = n - i
            if n_left < min_leaf or n_right < min_leaf:
                continue
            threshold = (xs[i - 1] + xs[i]) / 2.0
            left_flood = int(flood_prefix[i - 1])
            child = (
                n_left / n * _binary_entropy(left_flood, n_left)
                + n_right / n * _binary_entropy(total_flood - left_flood, n_right)
            )
            gain = parent - child
            if gain > 1e-15 and (best is None or gain > best[0] + 1e-15):
                best = (gain, j, threshold)
    return best


def _grow(X, y, depth, config):
    n = y.size
    n_flood = int(y.sum())
    node = TreeNode(n_samples=n, n_flood=n_flood, entropy_bits=_binary_entropy(n_flood, n))
    if depth >= config.max_depth or n < 2 * config.min_samples_leaf:
        return node
    found = _best_split(X, y, config.min_samples_leaf)
    if found is None:
        return node
    gain, feature, threshold = found
    mask = X[:, feature] <= threshold
    node.feature = feature
    node.threshold = float(threshold)
    node.gain = float(gain)
    node.left = _grow(X[mask], y[mask], depth + 1, config)
    node.right = _grow(X[~mask], y[~mask], depth + 1, config)
    return node


@dataclass(eq=False)
class TreeModel(ProbabilityClassifier):
    """Trained decision tree; consumes raw millimeter features."""

    root: TreeNode
    config: TreeConfig
    n_features: int
    scaler: object = None

    def predict_proba(self, X):
        A, single = prepare_features(X, self.n_features)
        proba = np.empty(A.shape[0])
        self._assign(self.root, A, np.arange(A.shape[0]), proba)
        return float(proba[0]) if single else proba

    def _assign(self, node, A, indices, out):
        if indices.size == 0:
            return
        if node.is_leaf:
            out[indices] = node.proba
            return
        mask = A[indices, node.feature] <= node.threshold
        self._assign(node.left, A, indices[mask], out)
        self._assign(node.right, A, indices[~mask], out)

    def leaves(self):
        stack, found = [self.root], []
        while stack:
            node = stack.pop()
            if node.is_leaf:
                found.append(node)
            else:
                stack.extend((node.left, node.right))
        return found

    def internal_nodes(self):
        stack, found = [self.root], []
        while stack:
            node = stack.pop()
            if not node.is_leaf:
                found.append(node)
                stack.extend((node.left, node.right))
        return found


def train_tree(train, config=None):
    """Grow a :class:`TreeModel` on raw features."""
    config = config or TreeConfig()
    config.validate()
    if len(train) == 0:
        raise DatasetError("cannot train a tree on an empty dataset")
    X, y = train.features(), train.labels()
    root = _grow(X, y, 0, config)
    return TreeModel(root=root, config=config, n_features=X.shape[1])
