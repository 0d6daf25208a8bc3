"""Versioned JSON persistence for trained models.

Each file records the model kind, hyperparameters, learned parameters,
the training scaler, and free-form metadata. Floats survive the JSON
round trip exactly (shortest-repr encoding), so a reloaded model makes
bit-identical predictions. Training curves are not persisted.
"""

from __future__ import annotations

import json

import numpy as np

from ..dataset import Scaler
from ..errors import ConfigError
from ..manifest import write_report
from .knn import KnnModel
from .logistic import LogisticConfig, LogisticModel
from .svm import SvmConfig, SvmModel
from .tree import TreeConfig, TreeModel, TreeNode

MODEL_FORMAT_VERSION = 1
MODEL_KINDS = ("logistic", "knn", "tree", "svm")


def model_kind(model):
    """Short kind string for a trained model instance."""
    if isinstance(model, LogisticModel):
        return "logistic"
    if isinstance(model, KnnModel):
        return "knn"
    if isinstance(model, TreeModel):
        return "tree"
    if isinstance(model, SvmModel):
        return "svm"
    raise ConfigError(f"unknown model type: {type(model).__name__}")


def _scaler_to_dict(scaler):
    if scaler is None:
        return None
    return {"mean": list(scaler.mean), "std": list(scaler.std)}


def _scaler_from_dict(payload):
    if payload is None:
        return None
    return Scaler(
        mean=np.asarray(payload["mean"], dtype=float),
        std=np.asarray(payload["std"], dtype=float),
    )


def _node_to_dict(node):
    payload = {
        "n_samples": node.n_samples,
        "n_flood": node.n_flood,
        "entropy_bits": node.entropy_bits,
    }
    if not node.is_leaf:
        payload.update(
            {
                "feature": node.feature,
                "threshold": node.threshold,
                "gain": node.gain,
                "left": _node_to_dict(node.left),
                "right": _node_to_dict(node.right),
            }
        )
    return payload


def _node_from_dict(payload):
    node = TreeNode(
        n_samples=int(payload["n_samples"]),
        n_flood=int(payload["n_flood"]),
        entropy_bits=float(payload["entropy_bits"]),
    )
    if "feature" in payload:
        node.feature = int(payload["feature"])
        node.threshold = float(payload["threshold"])
        node.gain = float(payload["gain"])
        node.left = _node_from_dict(payload["left"])
        node.right = _node_from_dict(payload["right"])
    return node


def model_to_dict(model, metadata=None):
    """Serializable payload for a trained model."""
    kind = model_kind(model)
    if kind == "logistic":
        hyper = {
            "learning_rate": model.config.learning_rate,
            "epochs": model.config.epochs,
            "l2": model.config.l2,
        }
        params = {"weights": list(model.weights), "intercept": model.intercept}
    elif kind == "knn":
        hyper = {"k": model.k}
        params = {
            "train_scaled": [list(row) for row in model.train_scaled],
            "train_labels": [int(v) for v in model.train_labels],
        }
    elif kind == "tree":
        hyper = {
            "max_depth": model.config.max_depth,
            "min_samples_leaf": model.config.min_samples_leaf,
        }
        params = {"n_features": model.n_features, "root": _node_to_dict(model.root)}
    else:
        hyper = {
            "C": model.config.C,
            "epochs": model.config.epochs,
            "learning_rate": model.config.learning_rate,
        }
        params = {"weights": list(model.weights), "bias": model.bias}
    return {
        "schema": "floodxai.model",
        "schema_version": 1,
        "format_version": MODEL_FORMAT_VERSION,
        "kind": kind,
        "hyperparameters": hyper,
        "parameters": params,
        "scaler": _scaler_to_dict(getattr(model, "scaler", None)),
        "metadata": dict(metadata or {}),
    }


def model_from_dict(payload):
    """Rebuild a trained model from its serialized payload."""
    version = payload.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ConfigError(
            f"unsupported model format_version {version!r}; "
            f"this build reads version {MODEL_FORMAT_VERSION}"
        )
    kind = payload.get("kind")
    hyper = payload.get("hyperparameters", {})
    params = payload.get("parameters", {})
    scaler = _scaler_from_dict(payload.get("scaler"))
    if kind == "logistic":
        return LogisticModel(
            weights=np.asarray(params["weights"], dtype=float),
            intercept=float(params["intercept"]),
            config=LogisticConfig(**hyper),
            scaler=scaler,
            loss_history=None,
        )
    if kind == "knn":
        return KnnModel(
            k=int(hyper["k"]),
            train_scaled=np.asarray(params["train_scaled"], dtype=float),
            train_labels=np.asarray(params["train_labels"], dtype=int),
            scaler=scaler,
        )
    if kind == "tree":
        return TreeModel(
            root=_node_from_dict(params["root"]),
            config=TreeConfig(**hyper),
            n_features=int(params["n_features"]),
        )
    if kind == "svm":
        return SvmModel(
            weights=np.asarray(params["weights"], dtype=float),
            bias=float(params["bias"]),
            config=SvmConfig(**hyper),
            scaler=scaler,
            objective_history=None,
        )
    raise ConfigError(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}")


def save_model(model, path, metadata=None, manifest=None):
    """Write a model JSON file atomically; optionally embed a run manifest."""
    payload = model_to_dict(model, metadata)
    if manifest is not None:
        payload["manifest"] = manifest
    return write_report(path, payload)


def load_model(path):
    """Load a model JSON file written by :func:`save_model`."""
    with open(path, "r", encoding="utf-8") as handle:
        payload = json.load(handle)
    return model_from_dict(payload)
