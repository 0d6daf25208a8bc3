"""
Do the two explanation views agree? (SHAP vs. LIME on 1947)
===========================================================

The global Shapley ranking and the local surrogate answer different
questions, but on a clear-cut flood year they should point at the
same months with the same signs. This script measures that overlap.
"""

from pathlib import Path

import numpy as np

from floodxai import (
    EXHAUSTIVE,
    LimeConfig,
    ShapConfig,
    compare_explanations,
    explain_local,
    global_importance,
    impute_missing,
    kernel_shap,
    load_csv,
    split,
    train_logistic,
)

DATA = Path(__file__).resolve().parent.parent / "data" / "kerala.csv"
YEAR = 1947

dataset = impute_missing(load_csv(DATA))
parts = split(dataset, train_fraction=0.7, seed=42)
model = train_logistic(parts.train)
names = dataset.feature_names

x = np.array(dataset.record_for_year(YEAR).monthly_mm)
background = parts.train.features().mean(axis=0, keepdims=True)
shap_config = ShapConfig(background=background, n_coalition_samples=EXHAUSTIVE)

# Three views of the same model: global ranking, local attribution,
# local surrogate.
importance = global_importance(model, dataset.features(), shap_config, names)
shap_local = kernel_shap(model, x, shap_config, names)
lime_local = explain_local(model, x, parts.train, LimeConfig(seed=0), names)

report = compare_explanations(importance, lime_local, shap_local=shap_local, top_k=5)

print(f"global top {report.top_k}:      {', '.join(report.shap_top)}")
print(f"surrogate features: {', '.join(report.lime_features)}")
print(f"overlap:            {', '.join(report.overlap)} "
      f"({report.overlap_fraction:.0%} of the top {report.top_k})")
print()

print("sign agreement on shared features (local phi vs surrogate weight):")
for entry in report.sign_agreement:
    mark = "agree" if entry["agree"] else "DISAGREE"
    print(
        f"  {entry['feature']:>4}  phi {entry['shap_phi']:+.4f}  "
        f"weight {entry['lime_weight']:+.4f}  {mark}"
    )
print(f"sign agreement fraction: {report.sign_agreement_fraction:.0%}")
