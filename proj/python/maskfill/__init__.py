"""Mask-and-fill negative sampling and factual-consistency evaluation.

Thin wrapper over the C++ core. Labels are the strings "consistent" and
"inconsistent"; configs are dicts in config-file shape or paths to a
config file.
"""

from ._maskfill import (
    BackendError,
    ConfigError,
    DataError,
    MaskfillError,
    balanced_accuracy,
    binarize,
    config_fingerprint,
    correlation_significance,
    diversity,
    extract_spans,
    fit_analysis,
    fit_quadratic,
    load_pairs,
    macro_f1,
    mask_count,
    mask_text,
    mock_fill,
    pearson,
    prepare_input,
    run_pipeline,
    run_sweep,
    spearman,
    split_half,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
