"""Per-trial and aggregate measurement of the simulable channel statistics.

Covers the coverage fractions, the covered-but-not-visible rate, island
counts and lengths, the length partition with its concentration event, and
the maximum number of reads merged into any island.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from . import bounds
from .channel import ERASED, ChannelParams, ReadSet
from .islands import IslandSet, MERGE_MAXIMAL, island_lengths, merge_true_islands


@dataclass
class TrialStats:
    """Measurements of a single trial."""

    phi: float
    phi_v: float
    delta_e_hat: float
    k_prime: int
    sum_lengths: int
    d_max: int
    length_histogram: dict[int, int]


@dataclass
class PartitionReport:
    """Island-length partition of one trial.

    Bin k holds islands with (k-1)/l_prime * log2(n) <= N < k/l_prime * log2(n),
    lower-inclusive; bins 1..j_max-1 are kept separate and everything with
    k >= j_max is pooled under the key j_max. e_event_flags[k] records whether
    the bin count strayed from n*q_ref[k]/lambda_hat by more than
    epsilon*n/lambda_hat.
    """

    l_prime: int
    j_max: int
    bin_counts: dict[int, int]
    q_hat: dict[int, float]
    lambda_hat: float
    epsilon: float
    e_event_flags: dict[int, bool]
    degenerate: bool = False
    alpha: Optional[float] = None


def _position_masks(reads: ReadSet) -> tuple[np.ndarray, np.ndarray]:
    """Boolean masks over positions: covered by any read, visibly covered."""
    n, L = reads.params.n, reads.params.L
    covered = np.zeros(n, dtype=bool)
    visible = np.zeros(n, dtype=bool)
    if len(reads) == 0:
        return covered, visible
    idx = ((reads.starts[:, None] + np.arange(L)[None, :]) % n).ravel()
    covered[idx] = True
    visible[idx[reads.symbols.ravel() != ERASED]] = True
    return covered, visible


def coverage(reads: ReadSet) -> float:
    """Fraction of positions covered by at least one read."""
    covered, _ = _position_masks(reads)
    return int(covered.sum()) / reads.params.n


def visible_coverage(reads: ReadSet) -> float:
    """Fraction of positions with at least one unerased covering symbol."""
    _, visible = _position_masks(reads)
    return int(visible.sum()) / reads.params.n


def empirical_delta_e(reads: ReadSet) -> float:
    """Fraction of positions covered but not visibly covered (phi - phi_v)."""
    return coverage(reads) - visible_coverage(reads)


def trial_stats(reads: ReadSet, islands: Optional[IslandSet] = None,
                merge_mode: str = MERGE_MAXIMAL) -> TrialStats:
    """Measure one trial; merges the reads unless an IslandSet is supplied."""
    if islands is None:
        islands = merge_true_islands(reads, mode=merge_mode)
    covered, visible = _position_masks(reads)
    n = reads.params.n
    phi = int(covered.sum()) / n
    phi_v = int(visible.sum()) / n
    lengths = island_lengths(islands)
    return TrialStats(
        phi=phi,
        phi_v=phi_v,
        delta_e_hat=phi - phi_v,
        k_prime=len(islands),
        sum_lengths=sum(lengths),
        d_max=max_reads_per_island(islands),
        length_histogram=dict(Counter(lengths)),
    )


def max_reads_per_island(island_set: IslandSet) -> int:
    """Largest number of reads merged into a single island (0 if empty)."""
    if not island_set.islands:
        return 0
    return max(i.read_count for i in island_set.islands)


def bin_index(length: int, l_prime: int, log2n: float) -> int:
    """Partition bin for an island length, lower-inclusive boundaries."""
    return int(math.floor(length * l_prime / log2n)) + 1


def partition_from_histogram(
    histogram: Mapping[int, int],
    n: int,
    l_prime: int,
    j_max: int,
    q_ref: Optional[Mapping[int, float]] = None,
    alpha: Optional[float] = None,
) -> PartitionReport:
    """Build a PartitionReport from a length histogram.

    q_ref, when given, is a pooled across-trials estimate of the bin
    probabilities; the concentration flags compare this trial's counts
    against n*q_ref[k]/lambda_hat with tolerance epsilon*n/lambda_hat and
    epsilon = log2(n)*sqrt(2*lambda_hat/n). Without q_ref the trial's own
    frequencies are used.
    """
    if l_prime < 1:
        raise ValueError(f"l_prime must be >= 1, got {l_prime}")
    if j_max < 2:
        raise ValueError(f"j_max must be >= 2, got {j_max}")
    log2n = math.log2(n)
    keys = list(range(1, j_max + 1))  # key j_max pools every k >= j_max
    bin_counts = {k: 0 for k in keys}
    total = 0
    total_length = 0
    for length, count in histogram.items():
        k = min(bin_index(length, l_prime, log2n), j_max)
        bin_counts[k] += count
        total += count
        total_length += length * count

    if total == 0:
        return PartitionReport(
            l_prime=l_prime,
            j_max=j_max,
            bin_counts=bin_counts,
            q_hat={k: 0.0 for k in keys},
            lambda_hat=math.nan,
            epsilon=math.nan,
            e_event_flags={k: False for k in keys},
            degenerate=True,
            alpha=alpha,
        )

    q_hat = {k: bin_counts[k] / total for k in keys}
    lambda_hat = total_length / total
    epsilon = log2n * math.sqrt(2.0 * lambda_hat / n)
    ref = q_ref if q_ref is not None else q_hat
    tolerance = epsilon * n / lambda_hat
    flags = {
        k: abs(bin_counts[k] - n * ref.get(k, 0.0) / lambda_hat) > tolerance for k in keys
    }
    return PartitionReport(
        l_prime=l_prime,
        j_max=j_max,
        bin_counts=bin_counts,
        q_hat=q_hat,
        lambda_hat=lambda_hat,
        epsilon=epsilon,
        e_event_flags=flags,
        degenerate=False,
        alpha=alpha,
    )


def partition_islands(
    island_set: IslandSet,
    l_prime: int,
    j_max: int,
    q_ref: Optional[Mapping[int, float]] = None,
    alpha: Optional[float] = None,
) -> PartitionReport:
    """Partition the islands of one trial into length bins."""
    histogram = Counter(island_lengths(island_set))
    return partition_from_histogram(histogram, island_set.n, l_prime, j_max,
                                    q_ref=q_ref, alpha=alpha)


def pooled_bin_frequencies(reports: Sequence[PartitionReport]) -> dict[int, float]:
    """Across-trials bin probabilities: total bin counts over total islands."""
    totals: Counter = Counter()
    islands = 0
    for rep in reports:
        for k, count in rep.bin_counts.items():
            totals[k] += count
        islands += sum(rep.bin_counts.values())
    if islands == 0:
        return {k: 0.0 for k in totals}
    return {k: totals[k] / islands for k in sorted(totals)}


def default_alpha(c: float) -> float:
    """Default tail exponent for the max-reads check: twice the threshold
    above which Pr(D > alpha*log2 n) vanishes."""
    if c <= 0:
        raise ValueError(f"coverage depth must be positive, got {c}")
    return 2.0 * (-1.0 / math.log2(1.0 - math.exp(-c)))


def _mean_se(values: np.ndarray, trials: int) -> tuple[float, Optional[float]]:
    mean = float(values.mean())
    if trials < 2:
        return mean, None
    return mean, float(values.std(ddof=1) / math.sqrt(trials))


@dataclass
class AggregateReport:
    """Means and standard errors over trials, with the analytic targets
    evaluated at c_effective. Standard errors are None for a single trial."""

    params: ChannelParams
    trials: int
    alpha: float
    mean_phi: float
    se_phi: Optional[float]
    mean_phi_v: float
    se_phi_v: Optional[float]
    mean_delta_e: float
    se_delta_e: Optional[float]
    mean_k_prime: float
    se_k_prime: Optional[float]
    mean_island_frac: float
    se_island_frac: Optional[float]
    mean_d_max: float
    se_d_max: Optional[float]
    scaled_k_prime: float
    d_threshold: float
    d_tail_freq: float
    d_tail_se: Optional[float]
    exp_phi: float = field(init=False)
    exp_phi_v: float = field(init=False)
    exp_delta_e: float = field(init=False)
    exp_scaled_k_prime: float = field(init=False)

    def __post_init__(self):
        c, d = self.params.c_effective, self.params.delta
        self.exp_phi = bounds.expected_coverage(c)
        self.exp_phi_v = bounds.expected_visible_coverage(c, d)
        self.exp_delta_e = bounds.analytic_delta_e(c, d)
        self.exp_scaled_k_prime = (c / self.params.lbar) * math.exp(-c)


def aggregate(trials: Sequence[TrialStats], params: ChannelParams,
              alpha: Optional[float] = None) -> AggregateReport:
    """Fold per-trial stats into means, standard errors, and tail rates.

    Only sums, counts, and fixed-order reductions are used, so the result is
    independent of how trials were scheduled.
    """
    if not trials:
        raise ValueError("aggregate requires at least one trial")
    if alpha is None:
        alpha = default_alpha(params.c_effective)
    t = len(trials)
    n = params.n
    phi = np.array([s.phi for s in trials])
    phi_v = np.array([s.phi_v for s in trials])
    delta_e = np.array([s.delta_e_hat for s in trials])
    k_prime = np.array([s.k_prime for s in trials], dtype=float)
    island_frac = np.array([s.sum_lengths / n for s in trials])
    d_max = np.array([s.d_max for s in trials], dtype=float)
    threshold = alpha * math.log2(n)
    tail = (d_max > threshold).astype(float)

    mean_phi, se_phi = _mean_se(phi, t)
    mean_phi_v, se_phi_v = _mean_se(phi_v, t)
    mean_de, se_de = _mean_se(delta_e, t)
    mean_kp, se_kp = _mean_se(k_prime, t)
    mean_if, se_if = _mean_se(island_frac, t)
    mean_d, se_d = _mean_se(d_max, t)
    tail_freq, tail_se = _mean_se(tail, t)

    return AggregateReport(
        params=params,
        trials=t,
        alpha=alpha,
        mean_phi=mean_phi,
        se_phi=se_phi,
        mean_phi_v=mean_phi_v,
        se_phi_v=se_phi_v,
        mean_delta_e=mean_de,
        se_delta_e=se_de,
        mean_k_prime=mean_kp,
        se_k_prime=se_kp,
        mean_island_frac=mean_if,
        se_island_frac=se_if,
        mean_d_max=mean_d,
        se_d_max=se_d,
        scaled_k_prime=(math.log2(n) / n) * mean_kp,
        d_threshold=threshold,
        d_tail_freq=tail_freq,
        d_tail_se=tail_se,
    )
