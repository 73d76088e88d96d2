"""Simulator and bound calculator for the shotgun sequencing channel with
erasures: cyclic read sampling, genie-aided island merging, coverage and
island statistics, and the closed-form achievability/converse curves."""

from .bounds import (
    BoundPoint,
    achievable_rate,
    analytic_delta_e,
    bound_point,
    converse_bound,
    converse_bound_raw,
    expected_coverage,
    expected_visible_coverage,
    noise_free_capacity,
    short_read_threshold,
)
from .channel import (
    ERASED,
    ChannelParams,
    Read,
    ReadSet,
    as_bits,
    child_seed,
    derive_params,
    extract_read,
    random_input,
    sample_read_set,
)
from .harness import SweepConfig, run_bounds_sweep, run_concentration_check, run_simulation_sweep
from .islands import (
    Island,
    IslandSet,
    MERGE_MAXIMAL,
    MERGE_STRICT,
    brute_force_islands,
    island_lengths,
    merge_true_islands,
)
from .stats import (
    AggregateReport,
    PartitionReport,
    TrialStats,
    aggregate,
    coverage,
    default_alpha,
    empirical_delta_e,
    max_reads_per_island,
    partition_islands,
    trial_stats,
    visible_coverage,
)

__all__ = [
    "ERASED",
    "AggregateReport",
    "BoundPoint",
    "ChannelParams",
    "Island",
    "IslandSet",
    "MERGE_MAXIMAL",
    "MERGE_STRICT",
    "PartitionReport",
    "Read",
    "ReadSet",
    "SweepConfig",
    "TrialStats",
    "achievable_rate",
    "aggregate",
    "analytic_delta_e",
    "as_bits",
    "bound_point",
    "brute_force_islands",
    "child_seed",
    "converse_bound",
    "converse_bound_raw",
    "coverage",
    "default_alpha",
    "derive_params",
    "empirical_delta_e",
    "expected_coverage",
    "expected_visible_coverage",
    "extract_read",
    "island_lengths",
    "max_reads_per_island",
    "merge_true_islands",
    "noise_free_capacity",
    "partition_islands",
    "random_input",
    "run_bounds_sweep",
    "run_concentration_check",
    "run_simulation_sweep",
    "sample_read_set",
    "short_read_threshold",
    "trial_stats",
    "visible_coverage",
]
