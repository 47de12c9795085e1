"""Identifiability conditions for skew-normal mixtures and their ratio-limit evidence."""

from .check import CLAUSE_EQUAL, CLAUSE_RANK1, DEFAULT_GAMMA_TOL, check_identifiable
from .confusable import ConfusionCertificate, construct_confusable_mixture
from .io import dump_report, dump_trace, load_report, load_trace, trace_to_csv
from .limits import default_c_grid, log_ratio, observed_limit, predicted_limit, verify_ratio_limit
from .linear import direction_partition, find_witness_vector, nz_index, v_rate, xi_from_partition, xi_value
from .types import (
    DirectionCell,
    DirectionPartition,
    IdentifiabilityReport,
    LimitVerdict,
    LogComplex,
    RatioLimitResult,
    RatioTrace,
    Theorem,
    Transform,
    Verdict,
)

__all__ = [
    "CLAUSE_EQUAL",
    "CLAUSE_RANK1",
    "DEFAULT_GAMMA_TOL",
    "ConfusionCertificate",
    "DirectionCell",
    "DirectionPartition",
    "IdentifiabilityReport",
    "LimitVerdict",
    "LogComplex",
    "RatioLimitResult",
    "RatioTrace",
    "Theorem",
    "Transform",
    "Verdict",
    "check_identifiable",
    "construct_confusable_mixture",
    "default_c_grid",
    "direction_partition",
    "dump_report",
    "dump_trace",
    "find_witness_vector",
    "load_report",
    "load_trace",
    "log_ratio",
    "nz_index",
    "observed_limit",
    "predicted_limit",
    "trace_to_csv",
    "v_rate",
    "verify_ratio_limit",
    "xi_from_partition",
    "xi_value",
]
