"""Perturbation analysis of damped Markov chains P_eps = (1 - eps) P0 + eps D."""

import json as _json

from ._dampchain import (
    DampchainError,
    __version__,
    coupling_tail,
    damped_matrix,
    decompose,
    deviation_bound,
    ergodicity_coefficient,
    expansion,
    maximal_coupling,
    rate_bound,
    run_command_json,
    spectrum,
    stationary,
    stationary_series,
    triangular_limit,
)


def run_command(command, input, **kwargs):
    """Run a CLI command in-process and return the parsed report."""
    return _json.loads(run_command_json(command, input, **kwargs))


__all__ = [
    "DampchainError",
    "__version__",
    "coupling_tail",
    "damped_matrix",
    "decompose",
    "deviation_bound",
    "ergodicity_coefficient",
    "expansion",
    "maximal_coupling",
    "rate_bound",
    "run_command",
    "spectrum",
    "stationary",
    "stationary_series",
    "triangular_limit",
]
