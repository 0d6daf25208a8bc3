"""Model-agnostic explanation tools: Shapley attributions and local surrogates."""

from .shapley import (
    EXHAUSTIVE,
    GlobalImportance,
    ShapConfig,
    ShapExplanation,
    coalition_value,
    exact_shapley,
    global_importance,
    kernel_shap,
)
from .lime import (
    Discretizer,
    LimeConfig,
    LimeExplanation,
    PerturbationSet,
    explain_local,
    fit_discretizer,
    fit_local_surrogate,
    perturb,
)
from .compare import AgreementReport, compare_explanations

__all__ = [
    "EXHAUSTIVE",
    "GlobalImportance",
    "ShapConfig",
    "ShapExplanation",
    "coalition_value",
    "exact_shapley",
    "global_importance",
    "kernel_shap",
    "Discretizer",
    "LimeConfig",
    "LimeExplanation",
    "PerturbationSet",
    "explain_local",
    "fit_discretizer",
    "fit_local_surrogate",
    "perturb",
    "AgreementReport",
    "compare_explanations",
]
