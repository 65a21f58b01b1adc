"""RSS-fingerprint indoor localization: python bindings over the C++ core."""

from ._blefp import (
    BlefpError,
    Estimate,
    Fingerprint,
    FingerprintDatabase,
    GridPoint,
    Metric,
    Neighbor,
    apply_selection,
    build_database,
    estimate,
    gamma_threshold,
    load_database,
    parse_metric,
    save_database,
    similarity,
    synth_log_csv,
)

__all__ = [
    "BlefpError",
    "Estimate",
    "Fingerprint",
    "FingerprintDatabase",
    "GridPoint",
    "Metric",
    "Neighbor",
    "apply_selection",
    "build_database",
    "estimate",
    "gamma_threshold",
    "load_database",
    "parse_metric",
    "save_database",
    "similarity",
    "synth_log_csv",
]
