"""Exact and simulated runtimes of randomized local search on generalized Needle functions.

Exact quantities come back as ``fractions.Fraction``; simulation batches as dicts.
"""

from ._core import (
    SingularSystemError,
    UnreachableError,
    binomial,
    binomial_cum,
    bound,
    chain_hitting_time_oracle,
    chain_hitting_times,
    classify,
    expected_runtime,
    hitting_times,
    runtime_profile,
    simulate,
    start_distribution_stats,
    sweep,
    verify,
)

__all__ = [
    "SingularSystemError",
    "UnreachableError",
    "binomial",
    "binomial_cum",
    "bound",
    "chain_hitting_time_oracle",
    "chain_hitting_times",
    "classify",
    "expected_runtime",
    "hitting_times",
    "runtime_profile",
    "simulate",
    "start_distribution_stats",
    "sweep",
    "verify",
]
