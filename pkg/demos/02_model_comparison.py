"""
Training the four classifiers and comparing their test scores
=============================================================

One fixed 70/30 split, four from-scratch models, one metrics table.
Every model uses its default hyperparameters; the point here is the
shared evaluation path, not tuning.
"""

from pathlib import Path

from floodxai import (
    evaluate,
    impute_missing,
    load_csv,
    render_table,
    split,
    train_knn,
    train_logistic,
    train_svm,
    train_tree,
)

DATA = Path(__file__).resolve().parent.parent / "data" / "kerala.csv"

dataset = impute_missing(load_csv(DATA))
parts = split(dataset, train_fraction=0.7, seed=42)
print(f"{len(parts.train)} training years, {len(parts.test)} held-out years")
print()

# Train each model on the same partition. The trainers standardize
# internally where the optimizer needs it, so raw millimetres go in.
models = {
    "Logistic regression": train_logistic(parts.train),
    "KNN": train_knn(parts.train),
    "Decision tree": train_tree(parts.train),
    "SVM": train_svm(parts.train),
}

# Score everything against the held-out years and print one table.
reports = [evaluate(model, parts.test, name=name) for name, model in models.items()]
print(render_table(reports))
print()

best = max(reports, key=lambda r: r.accuracy)
print(f"best test accuracy: {best.model} at {best.accuracy:.2f}")
