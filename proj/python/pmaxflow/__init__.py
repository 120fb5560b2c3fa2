"""Interior-point maximum flow solver."""

import json

from . import _core
from ._core import (
    Error,
    Graph,
    default_config,
    from_dimacs,
    generate,
    read_dimacs,
    reference_max_flow,
)

__all__ = [
    "Error",
    "Graph",
    "default_config",
    "from_dimacs",
    "generate",
    "read_dimacs",
    "reference_max_flow",
    "solve",
]


def solve(graph, mode="warmup", **options):
    """Solves a max-flow instance and returns the report as a dict.

    Keyword options use the JSON config keys (eta, W, p, step_tol,
    oracle_check, seed, ...). Unknown keys raise ValueError.
    """
    config = json.loads(default_config())
    options["mode"] = mode
    unknown = set(options) - set(config)
    if unknown:
        raise ValueError(f"unknown options: {sorted(unknown)}")
    config.update(options)
    return _core._solve(graph, json.dumps(config))

