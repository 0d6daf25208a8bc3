"""Shapley-value feature attributions for black-box classifiers.

Two independent routes to the same quantity:

* :func:`exact_shapley` enumerates every feature subset and applies the
  combinatorial Shapley formula directly — the brute-force oracle.
* :func:`kernel_shap` fits an additive surrogate by weighted least squares
  over binary coalition vectors using the Shapley kernel. In EXHAUSTIVE
  mode it agrees with the oracle to solver precision; with a sampled
  coalition budget it approximates it at a fraction of the cost.

The coalition value v(S) uses background substitution: features in S take
the instance's values, the rest are replaced by background rows, and the
model output (flood probability) is averaged over the background.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import ConfigError, DatasetError

EXHAUSTIVE = "exhaustive"
MAX_EXACT_FEATURES = 20
_CHUNK_ROWS = 65536


def _predict_fn(model):
    """Accept either a probability-scoring object or a bare callable."""
    if hasattr(model, "predict_proba"):
        return model.predict_proba
    if callable(model):
        return model
    raise ConfigError(
        f"model must expose predict_proba or be callable, got {type(model).__name__}"
    )


def background_fingerprint(background):
    """Content hash identifying the background matrix in report echoes."""
    bg = np.ascontiguousarray(np.atleast_2d(np.asarray(background, dtype=float)))
    digest = hashlib.sha256()
    digest.update(repr(bg.shape).encode("ascii"))
    digest.update(bg.tobytes())
    return "sha256:" + digest.hexdigest()


@lru_cache(maxsize=8)
def _bit_table(n_features):
    """All 2^M subset masks as a boolean table, row index = subset bitmask."""
    codes = np.arange(1 << n_features, dtype=np.int64)
    table = ((codes[:, None] >> np.arange(n_features)) & 1).astype(bool)
    table.setflags(write=False)
    return table


def _coalition_values(predict, instance, background, masks):
    """v(S) for every mask row, averaging the model over background rows."""
    masks = np.atleast_2d(np.asarray(masks, dtype=bool))
    n_masks, m = masks.shape
    bg = np.atleast_2d(np.asarray(background, dtype=float))
    x = np.asarray(instance, dtype=float)
    n_bg = bg.shape[0]
    values = np.empty(n_masks)
    step = max(1, _CHUNK_ROWS // n_bg)
    for start in range(0, n_masks, step):
        chunk = masks[start : start + step]
        hybrid = np.where(chunk[:, None, :], x[None, None, :], bg[None, :, :])
        preds = np.asarray(predict(hybrid.reshape(-1, m)), dtype=float)
        values[start : start + step] = preds.reshape(len(chunk), n_bg).mean(axis=1)
    return values


def coalition_value(model, instance, subset, background):
    """Model output with `subset` features from the instance, rest masked."""
    x = np.asarray(instance, dtype=float)
    mask = np.zeros(x.shape[0], dtype=bool)
    idx = np.asarray(sorted(subset), dtype=int)
    if idx.size:
        if idx.min() < 0 or idx.max() >= x.shape[0]:
            raise ConfigError(
                f"subset indices must lie in [0, {x.shape[0] - 1}], got {sorted(subset)}"
            )
        mask[idx] = True
    return float(_coalition_values(_predict_fn(model), x, background, mask)[0])


@dataclass(frozen=True, eq=False)
class ShapConfig:
    """Settings for kernel-based attribution.

    `background` is the reference data (matrix or single vector) that
    defines masked feature values. `n_coalition_samples` is either the
    EXHAUSTIVE sentinel or an integer coalition budget.
    """

    background: object = None
    n_coalition_samples: object = EXHAUSTIVE
    seed: int = 0

    def validate(self, n_features):
        if self.background is None:
            raise ConfigError("ShapConfig.background must be provided")
        if self.n_coalition_samples == EXHAUSTIVE:
            return
        budget = self.n_coalition_samples
        minimum = 2 * n_features + 2
        if not isinstance(budget, (int, np.integer)) or budget < minimum:
            raise ConfigError(
                f"n_coalition_samples must be '{EXHAUSTIVE}' or an integer >= "
                f"{minimum} (2M + 2 for M={n_features}), got {budget!r}"
            )


@dataclass(frozen=True, eq=False)
class ShapExplanation:
    """Per-feature attributions for a single instance."""

    feature_names: tuple
    instance: np.ndarray
    phi: np.ndarray
    base_value: float
    model_output: float
    method: str
    n_coalitions: int
    seed: object
    background_fingerprint: str

    @property
    def additivity_residual(self):
        """model_output - (base_value + sum(phi)); ~0 when efficiency holds."""
        return float(self.model_output - self.base_value - float(self.phi.sum()))

    def to_dict(self):
        return {
            "schema": "floodxai.shap_local",
            "schema_version": 1,
            "feature_names": list(self.feature_names),
            "instance": [float(v) for v in self.instance],
            "phi": [float(v) for v in self.phi],
            "base_value": float(self.base_value),
            "model_output": float(self.model_output),
            "additivity_residual": self.additivity_residual,
            "method": self.method,
            "config": {
                "n_coalitions": int(self.n_coalitions),
                "seed": None if self.seed is None else int(self.seed),
                "background_fingerprint": self.background_fingerprint,
            },
        }


@dataclass(frozen=True, eq=False)
class GlobalImportance:
    """Mean absolute attribution per feature over a set of instances."""

    feature_names: tuple
    importances: np.ndarray
    n_instances: int
    method: str
    n_coalitions: int
    seed: object
    background_fingerprint: str

    @property
    def ranking(self):
        """Feature indices in descending importance; ties keep input order."""
        return tuple(int(i) for i in np.argsort(-self.importances, kind="stable"))

    def ranked(self):
        """(name, importance) pairs in descending order."""
        return [(self.feature_names[i], float(self.importances[i])) for i in self.ranking]

    def top(self, k):
        """Names of the k most important features."""
        return [name for name, _ in self.ranked()[:k]]

    def to_dict(self):
        return {
            "schema": "floodxai.shap_global",
            "schema_version": 1,
            "feature_names": list(self.feature_names),
            "importances": [float(v) for v in self.importances],
            "ranking": [self.feature_names[i] for i in self.ranking],
            "n_instances": int(self.n_instances),
            "method": self.method,
            "config": {
                "n_coalitions": int(self.n_coalitions),
                "seed": None if self.seed is None else int(self.seed),
                "background_fingerprint": self.background_fingerprint,
            },
        }


def _default_names(n_features):
    return tuple(f"x{i}" for i in range(n_features))


def exact_shapley(model, instance, background, feature_names=None):
    """Exact Shapley attributions by full subset enumeration.

    phi_i = sum over subsets S not containing i of
    |S|! (M-|S|-1)! / M! * [v(S + i) - v(S)].
    """
    x = np.asarray(instance, dtype=float).ravel()
    m = x.shape[0]
    if m > MAX_EXACT_FEATURES:
        raise ConfigError(
            f"exact enumeration supports at most {MAX_EXACT_FEATURES} features "
            f"(got {m}); use kernel_shap with a sampling budget instead"
        )
    predict = _predict_fn(model)
    masks = _bit_table(m)
    values = _coalition_values(predict, x, background, masks)
    sizes = masks.sum(axis=1)
    fact = [math.factorial(k) for k in range(m + 1)]
    weight_by_size = np.array(
        [fact[s] * fact[m - 1 - s] / fact[m] for s in range(m)]
    )
    codes = np.arange(1 << m, dtype=np.int64)
    phi = np.empty(m)
    for i in range(m):
        without = codes[(codes >> i) & 1 == 0]
        gains = values[without | (1 << i)] - values[without]
        phi[i] = float(np.dot(weight_by_size[sizes[without]], gains))
    return ShapExplanation(
        feature_names=tuple(feature_names) if feature_names else _default_names(m),
        instance=x,
        phi=phi,
        base_value=float(values[0]),
        model_output=float(values[-1]),
        method="exact",
        n_coalitions=1 << m,
        seed=None,
        background_fingerprint=background_fingerprint(background),
    )


def _kernel_weights(m, sizes):
    """Shapley kernel w(z) = (M-1) / (C(M,|z|) * |z| * (M-|z|))."""
    sizes = np.asarray(sizes)
    return np.array(
        [(m - 1) / (math.comb(m, int(s)) * int(s) * (m - int(s))) for s in sizes]
    )


def _sample_coalitions(m, budget, seed):
    """Draw coalition masks with sizes proportional to kernel weight mass.

    Each draw is paired with its complement (same weight mass, opposite
    membership) and duplicates are merged, their counts becoming the
    regression weights. Deterministic for a given seed.
    """
    rng = np.random.default_rng(seed)
    sizes = np.arange(1, m)
    mass = (m - 1) / (sizes * (m - sizes))
    probs = mass / mass.sum()
    counts = {}
    drawn = 0
    while drawn < budget:
        s = int(rng.choice(sizes, p=probs))
        members = rng.choice(m, size=s, replace=False)
        mask = np.zeros(m, dtype=bool)
        mask[members] = True
        for candidate in (mask, ~mask):
            if drawn >= budget:
                break
            key = candidate.tobytes()
            if key in counts:
                counts[key] += 1
            else:
                counts[key] = 1
            drawn += 1
    masks = np.frombuffer(b"".join(counts.keys()), dtype=bool).reshape(len(counts), m)
    return masks.copy(), np.array(list(counts.values()), dtype=float)


def kernel_shap(model, instance, config, feature_names=None):
    """Kernel SHAP: weighted least squares over binary coalition vectors.

    The intercept is pinned to v(empty) and efficiency (attributions sum
    to model_output - base_value) is imposed exactly by eliminating the
    last feature's coefficient from the regression.
    """
    x = np.asarray(instance, dtype=float).ravel()
    m = x.shape[0]
    config.validate(m)
    predict = _predict_fn(model)
    bg = config.background
    endpoint_masks = np.vstack([np.zeros(m, dtype=bool), np.ones(m, dtype=bool)])
    v_empty, v_full = _coalition_values(predict, x, bg, endpoint_masks)
    delta = v_full - v_empty

    exhaustive = config.n_coalition_samples == EXHAUSTIVE
    if m == 1:
        phi = np.array([delta])
        n_coalitions = 2
    else:
        if exhaustive:
            masks = _bit_table(m)[1:-1]
            weights = _kernel_weights(m, masks.sum(axis=1))
        else:
            masks, weights = _sample_coalitions(m, config.n_coalition_samples, config.seed)
        values = _coalition_values(predict, x, bg, masks)
        z = masks.astype(float)
        design = z[:, :-1] - z[:, -1:]
        target = values - v_empty - z[:, -1] * delta
        scale = np.sqrt(weights)
        theta, *_ = np.linalg.lstsq(design * scale[:, None], target * scale, rcond=None)
        phi = np.append(theta, delta - theta.sum())
        n_coalitions = masks.shape[0] + 2

    return ShapExplanation(
        feature_names=tuple(feature_names) if feature_names else _default_names(m),
        instance=x,
        phi=phi,
        base_value=float(v_empty),
        model_output=float(v_full),
        method="kernel-exhaustive" if exhaustive else "kernel-sampled",
        n_coalitions=n_coalitions,
        seed=None if exhaustive else config.seed,
        background_fingerprint=background_fingerprint(bg),
    )


def global_importance(model, X, config, feature_names=None):
    """Mean |phi| per feature over every row of X, with descending ranking.

    In sampled mode row i uses seed + i so rows draw independent coalition
    sets while the whole aggregate stays reproducible.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[0] == 0:
        raise DatasetError("global importance needs at least one instance")
    m = X.shape[1]
    config.validate(m)
    exhaustive = config.n_coalition_samples == EXHAUSTIVE
    total = np.zeros(m)
    n_coalitions = 0
    for i, row in enumerate(X):
        if exhaustive:
            row_config = config
        else:
            row_config = ShapConfig(
                background=config.background,
                n_coalition_samples=config.n_coalition_samples,
                seed=config.seed + i,
            )
        explanation = kernel_shap(model, row, row_config, feature_names)
        total += np.abs(explanation.phi)
        n_coalitions = explanation.n_coalitions
    names = tuple(feature_names) if feature_names else _default_names(m)
    return GlobalImportance(
        feature_names=names,
        importances=total / X.shape[0],
        n_instances=X.shape[0],
        method="kernel-exhaustive" if exhaustive else "kernel-sampled",
        n_coalitions=n_coalitions,
        seed=config.seed,
        background_fingerprint=background_fingerprint(config.background),
    )
