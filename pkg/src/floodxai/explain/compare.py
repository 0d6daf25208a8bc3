"""Agreement report between global Shapley rankings and a local surrogate.

Measures how much of the Shapley top-k reappears among the features of a
local explanation, and — when a local Shapley attribution for the same
instance is supplied — whether the two methods agree on the sign of each
shared feature's contribution.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, eq=False)
class AgreementReport:
    """Overlap and sign agreement between two explanation views."""

    top_k: int
    shap_top: tuple
    lime_features: tuple
    overlap: tuple
    overlap_fraction: float
    sign_agreement: tuple
    sign_agreement_fraction: float

    def to_dict(self):
        return {
            "schema": "floodxai.compare",
            "schema_version": 1,
            "top_k": self.top_k,
            "shap_top": list(self.shap_top),
            "lime_features": list(self.lime_features),
            "overlap": list(self.overlap),
            "overlap_fraction": self.overlap_fraction,
            "sign_agreement": [dict(entry) for entry in self.sign_agreement],
            "sign_agreement_fraction": self.sign_agreement_fraction,
        }


def compare_explanations(shap_global, lime_local, shap_local=None, top_k=None):
    """Overlap of the Shapley top-k with the local surrogate's features.

    `shap_global` and `lime_local` must come from the same model. When a
    `shap_local` attribution of the explained instance is given, each
    feature appearing in both explanations is checked for matching signs
    (local Shapley phi vs surrogate weight).
    """
    if top_k is None:
        top_k = len(lime_local.conditions)
    top_k = max(1, min(top_k, len(shap_global.feature_names)))
    shap_top = tuple(shap_global.top(top_k))
    lime_features = tuple(c.feature for c in lime_local.conditions)
    overlap = tuple(name for name in shap_top if name in lime_features)
    overlap_fraction = len(overlap) / top_k

    entries = []
    agreements = 0
    if shap_local is not None:
        phi_by_name = dict(zip(shap_local.feature_names, shap_local.phi))
        for cond in lime_local.conditions:
            if cond.feature not in phi_by_name:
                continue
            phi = float(phi_by_name[cond.feature])
            agree = (phi >= 0) == (cond.weight >= 0)
            agreements += agree
            entries.append(
                {
                    "feature": cond.feature,
                    "lime_weight": cond.weight,
                    "shap_phi": phi,
                    "agree": bool(agree),
                }
            )
    fraction = agreements / len(entries) if entries else float("nan")
    return AgreementReport(
        top_k=top_k,
        shap_top=shap_top,
        lime_features=lime_features,
        overlap=overlap,
        overlap_fraction=overlap_fraction,
        sign_agreement=tuple(entries),
        sign_agreement_fraction=fraction,
    )
