"""Exception types shared across the package."""


class FloodXaiError(Exception):
    """Base class for all package errors."""


class DatasetError(FloodXaiError):
    """Raised for malformed input data, schema violations or bad row values."""


class ConfigError(FloodXaiError):
    """Raised for invalid hyperparameters or explainer configuration."""
