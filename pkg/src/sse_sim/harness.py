"""Monte Carlo sweep engine with deterministic seeding and CSV output.

Each (n, c, delta) combination runs a fixed number of trials; trial t of
combination i always uses the stream child_seed(master_seed, i, t), so
results are byte-identical regardless of the worker-pool size. Reductions
happen in trial order only.
"""

from __future__ import annotations

import csv
import io
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import product
from typing import Optional, Sequence, Union

import numpy as np

from .channel import ChannelParams, child_seed, derive_params, random_input, sample_read_set
from .islands import MERGE_MAXIMAL, MERGE_MODES, merge_true_islands
from .stats import (
    AggregateReport,
    TrialStats,
    aggregate,
    default_alpha,
    partition_from_histogram,
    pooled_bin_frequencies,
    trial_stats,
)
from . import bounds

SCHEMA_VERSION = 1

BOUNDS_COLUMNS = [
    "schema_version", "c", "delta", "lbar", "delta_e",
    "achievable", "converse_raw", "converse", "noise_free_cap", "gap",
]

SIMULATION_COLUMNS = [
    "schema_version", "n", "c_nominal", "c_effective", "delta", "lbar", "L", "K",
    "trials", "mean_phi", "se_phi", "exp_phi", "mean_phi_v", "se_phi_v", "exp_phi_v",
    "mean_delta_e", "se_delta_e", "exp_delta_e", "mean_k_prime", "se_k_prime",
    "scaled_k_prime", "exp_scaled_k_prime", "mean_island_frac", "se_island_frac",
    "mean_d_max", "se_d_max", "alpha", "d_threshold", "d_tail_freq", "d_tail_se",
]

CONCENTRATION_COLUMNS = [
    "schema_version", "kind", "n", "c_nominal", "c_effective", "delta", "lbar",
    "trials", "degenerate_trials", "l_prime", "j_max", "k", "pooled_q_hat",
    "mean_bin_count", "pr_e_event", "alpha", "d_threshold", "d_tail_freq", "d_tail_se",
]


class ConfigError(ValueError):
    """Invalid sweep configuration."""


@dataclass
class SweepConfig:
    n_values: list[int] = field(default_factory=lambda: [100_000])
    c_values: list[float] = field(default_factory=lambda: [1.0])
    delta_values: list[float] = field(default_factory=lambda: [0.0])
    lbar: float = 1.75
    trials: int = 50
    master_seed: int = 0
    l_prime: int = 2
    j_max: int = 40
    alpha: Union[float, str] = "auto"
    merge_mode: str = MERGE_MAXIMAL
    output_path: Optional[str] = None
    workers: int = 1

    def validate(self) -> None:
        if not self.n_values or not self.c_values or not self.delta_values:
            raise ConfigError("n, c, and delta grids must all be non-empty")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if self.merge_mode not in MERGE_MODES:
            raise ConfigError(f"merge mode must be one of {MERGE_MODES}")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if isinstance(self.alpha, str) and self.alpha != "auto":
            raise ConfigError("alpha must be a positive number or 'auto'")
        if not isinstance(self.alpha, str) and self.alpha <= 0:
            raise ConfigError("alpha must be a positive number or 'auto'")
        for n, c in product(self.n_values, self.c_values):
            for delta in self.delta_values:
                try:
                    derive_params(n, c, self.lbar, delta)
                except ValueError as exc:
                    raise ConfigError(str(exc)) from exc

    def resolve_alpha(self, c_effective: float) -> float:
        if self.alpha == "auto":
            return default_alpha(c_effective)
        return float(self.alpha)


def _fmt(value) -> str:
    """CSV cell: 6 significant digits for reals, NA for undefined, empty for
    absent standard errors."""
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if math.isnan(value):
        return "NA"
    return f"{value:.6g}"


NA = math.nan  # rendered as NA by _fmt


def write_csv(columns: Sequence[str], rows: Sequence[dict], path: Optional[str]) -> None:
    """Write rows to path (or stdout when path is None or '-')."""

    def emit(stream) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row.get(col)) for col in columns])

    if path is None or path == "-":
        emit(sys.stdout)
        return
    with open(path, "w", encoding="utf-8", newline="") as handle:
        emit(handle)


def csv_text(columns: Sequence[str], rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(col)) for col in columns])
    return buf.getvalue()


def run_bounds_sweep(config: SweepConfig) -> list[dict]:
    """Analytic bound curves, one row per (c, delta). No randomness."""
    config.validate()
    rows = []
    for c, delta in product(config.c_values, config.delta_values):
        point = bounds.bound_point(c, delta, config.lbar)
        rows.append({
            "schema_version": SCHEMA_VERSION,
            "c": c,
            "delta": delta,
            "lbar": config.lbar,
            "delta_e": point.delta_e,
            "achievable": NA if point.achievable is None else point.achievable,
            "converse_raw": point.converse_raw,
            "converse": point.converse,
            "noise_free_cap": NA if point.noise_free_cap is None else point.noise_free_cap,
            "gap": NA if point.gap is None else point.gap,
        })
    return rows


def _simulate_trial(args: tuple) -> TrialStats:
    n, c, lbar, delta, master_seed, combo_idx, trial_idx, merge_mode = args
    params = derive_params(n, c, lbar, delta)
    rng = np.random.default_rng(child_seed(master_seed, combo_idx, trial_idx))
    x = random_input(n, rng)
    reads = sample_read_set(x, params, rng)
    islands = merge_true_islands(reads, mode=merge_mode)
    return trial_stats(reads, islands=islands)


def run_trials(
    params: ChannelParams,
    trials: int,
    master_seed: int,
    combo_idx: int = 0,
    merge_mode: str = MERGE_MAXIMAL,
    workers: int = 1,
) -> list[TrialStats]:
    """Run independent trials for one parameter combination, in trial order."""
    args = [
        (params.n, params.c_nominal, params.lbar, params.delta,
         master_seed, combo_idx, t, merge_mode)
        for t in range(trials)
    ]
    if workers <= 1:
        return [_simulate_trial(a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_simulate_trial, args))


def _combos(config: SweepConfig):
    return enumerate(product(config.n_values, config.c_values, config.delta_values))


def run_simulation_sweep(config: SweepConfig) -> list[dict]:
    """Empirical means with analytic targets, one row per (n, c, delta)."""
    config.validate()
    rows = []
    for combo_idx, (n, c, delta) in _combos(config):
        params = derive_params(n, c, config.lbar, delta)
        stats = run_trials(params, config.trials, config.master_seed,
                           combo_idx=combo_idx, merge_mode=config.merge_mode,
                           workers=config.workers)
        report = aggregate(stats, params, alpha=config.resolve_alpha(params.c_effective))
        rows.append(_simulation_row(report))
    return rows


def _simulation_row(report: AggregateReport) -> dict:
    p = report.params
    return {
        "schema_version": SCHEMA_VERSION,
        "n": p.n,
        "c_nominal": p.c_nominal,
        "c_effective": p.c_effective,
        "delta": p.delta,
        "lbar": p.lbar,
        "L": p.L,
        "K": p.K,
        "trials": report.trials,
        "mean_phi": report.mean_phi,
        "se_phi": report.se_phi,
        "exp_phi": report.exp_phi,
        "mean_phi_v": report.mean_phi_v,
        "se_phi_v": report.se_phi_v,
        "exp_phi_v": report.exp_phi_v,
        "mean_delta_e": report.mean_delta_e,
        "se_delta_e": report.se_delta_e,
        "exp_delta_e": report.exp_delta_e,
        "mean_k_prime": report.mean_k_prime,
        "se_k_prime": report.se_k_prime,
        "scaled_k_prime": report.scaled_k_prime,
        "exp_scaled_k_prime": report.exp_scaled_k_prime,
        "mean_island_frac": report.mean_island_frac,
        "se_island_frac": report.se_island_frac,
        "mean_d_max": report.mean_d_max,
        "se_d_max": report.se_d_max,
        "alpha": report.alpha,
        "d_threshold": report.d_threshold,
        "d_tail_freq": report.d_tail_freq,
        "d_tail_se": report.d_tail_se,
    }


def run_concentration_check(config: SweepConfig) -> list[dict]:
    """Bin-count concentration rates and the max-reads tail, per (n, c, delta).

    Emits kind="bin" rows (one per length bin, with the across-trials
    frequency of the deviation event) and one kind="dmax" row per
    combination.
    """
    config.validate()
    rows = []
    for combo_idx, (n, c, delta) in _combos(config):
        params = derive_params(n, c, config.lbar, delta)
        alpha = config.resolve_alpha(params.c_effective)
        stats = run_trials(params, config.trials, config.master_seed,
                           combo_idx=combo_idx, merge_mode=config.merge_mode,
                           workers=config.workers)
        first_pass = [
            partition_from_histogram(s.length_histogram, n, config.l_prime, config.j_max)
            for s in stats
        ]
        q_ref = pooled_bin_frequencies(first_pass)
        reports = [
            partition_from_histogram(s.length_histogram, n, config.l_prime,
                                     config.j_max, q_ref=q_ref, alpha=alpha)
            for s in stats
        ]
        degenerate = sum(1 for r in reports if r.degenerate)
        base = {
            "schema_version": SCHEMA_VERSION,
            "n": n,
            "c_nominal": c,
            "c_effective": params.c_effective,
            "delta": delta,
            "lbar": config.lbar,
            "trials": config.trials,
            "degenerate_trials": degenerate,
            "l_prime": config.l_prime,
            "j_max": config.j_max,
        }
        live = [r for r in reports if not r.degenerate]
        for k in sorted(q_ref):
            flagged = sum(1 for r in live if r.e_event_flags.get(k, False))
            rows.append({
                **base,
                "kind": "bin",
                "k": k,
                "pooled_q_hat": q_ref[k],
                "mean_bin_count": sum(r.bin_counts.get(k, 0) for r in live) / max(1, len(live)),
                "pr_e_event": flagged / max(1, len(live)),
            })
        report = aggregate(stats, params, alpha=alpha)
        rows.append({
            **base,
            "kind": "dmax",
            "alpha": alpha,
            "d_threshold": report.d_threshold,
            "d_tail_freq": report.d_tail_freq,
            "d_tail_se": report.d_tail_se,
        })
    return rows


def fig2_preset(config: SweepConfig) -> SweepConfig:
    """Figure-reproduction grid: lbar=1.75, delta in {0, 0.2, 0.3},
    c from 0.05 to 10 in 200 steps."""
    step = (10.0 - 0.05) / 199
    return replace(
        config,
        lbar=1.75,
        delta_values=[0.0, 0.2, 0.3],
        c_values=[0.05 + i * step for i in range(200)],
    )
