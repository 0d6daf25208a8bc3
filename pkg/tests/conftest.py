"""Shared fixtures: the bundled dataset, a fixed split, trained models."""

import contextlib
import io
import json
from pathlib import Path

import numpy as np
import pytest

from floodxai import (
    Dataset,
    RainfallRecord,
    impute_missing,
    load_csv,
    split,
    train_knn,
    train_logistic,
    train_svm,
    train_tree,
)
from floodxai.cli import main as cli_main

REPO_ROOT = Path(__file__).resolve().parent.parent
DATA_PATH = REPO_ROOT / "data" / "kerala.csv"
SCHEMA_DIR = REPO_ROOT / "schemas"

# verdict lines appended by the acceptance tests; echoed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def data_path():
    return DATA_PATH


@pytest.fixture(scope="session")
def dataset():
    return impute_missing(load_csv(DATA_PATH))


@pytest.fixture(scope="session")
def parts(dataset):
    return split(dataset, 0.7, 42)


@pytest.fixture(scope="session")
def logistic(parts):
    return train_logistic(parts.train)


@pytest.fixture(scope="session")
def knn(parts):
    return train_knn(parts.train)


@pytest.fixture(scope="session")
def tree(parts):
    return train_tree(parts.train)


@pytest.fixture(scope="session")
def svm(parts):
    return train_svm(parts.train)


@pytest.fixture(scope="session")
def all_models(logistic, knn, tree, svm):
    return {"logistic": logistic, "knn": knn, "tree": tree, "svm": svm}


@pytest.fixture
def make_dataset():
    """Build a small Dataset from a raw feature matrix and labels."""

    def _make(X, y, names=None):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if names is None:
            names = tuple(f"F{i}" for i in range(X.shape[1]))
        records = tuple(
            RainfallRecord(
                year=2000 + i,
                monthly_mm=tuple(float(v) for v in row),
                flood=int(label),
            )
            for i, (row, label) in enumerate(zip(X, y))
        )
        return Dataset(records=records, feature_names=tuple(names))

    return _make


@pytest.fixture
def run_cli():
    """Invoke the CLI in-process; returns (exit code, stdout, stderr)."""

    def _run(argv):
        out, err = io.StringIO(), io.StringIO()
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            try:
                code = cli_main([str(a) for a in argv])
            except SystemExit as exc:
                code = exc.code if isinstance(exc.code, int) else 2
        return code, out.getvalue(), err.getvalue()

    return _run


@pytest.fixture
def load_schema():
    def _load(name):
        with open(SCHEMA_DIR / f"{name}.v1.schema.json", "r", encoding="utf-8") as fh:
            return json.load(fh)

    return _load
