"""Linguistic feature extraction and control-vector utilities."""

from ._core import (
    LingctlError,
    __version__,
    extract,
    feature_names,
    fit_stats,
    l1_error,
    parse_controls,
    render_prompt,
    reward,
    sample_control_vector,
    validate,
)

__all__ = [
    "LingctlError",
    "__version__",
    "extract",
    "feature_names",
    "fit_stats",
    "l1_error",
    "parse_controls",
    "render_prompt",
    "reward",
    "sample_control_vector",
    "validate",
]
