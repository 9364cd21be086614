"""H-free random graph process simulator and verification toolkit.

Vertices are 0-based here; edge-list files written by the command-line tool
are 1-based.
"""

import json

from . import _core
from ._core import (
    InvalidArgument,
    Pattern,
    Process,
    ProcessTerminated,
    SizeLimitExceeded,
    canonical_config,
    compute_m,
    compute_q,
    config_hash,
    count_copies,
    density_scan,
    naive_closed_set,
    naive_max_density,
    parse_pattern,
    simulate,
    verify,
)

__version__ = _core.__version__


def constants(pattern, n, eps=None, mu=None):
    """All theory constants for (H, n) as a dict; eps and mu are decimal strings."""
    return json.loads(_core.constants_json(pattern, n, eps, mu))


def analyze(directory):
    """Aggregate the output directory of a simulate run."""
    return json.loads(_core.analyze_json(str(directory)))


__all__ = [
    "InvalidArgument",
    "Pattern",
    "Process",
    "ProcessTerminated",
    "SizeLimitExceeded",
    "analyze",
    "canonical_config",
    "compute_m",
    "compute_q",
    "config_hash",
    "constants",
    "count_copies",
    "density_scan",
    "naive_closed_set",
    "naive_max_density",
    "parse_pattern",
    "simulate",
    "verify",
]
