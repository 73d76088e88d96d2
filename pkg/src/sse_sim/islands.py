"""Genie-aided merging of reads into true islands.

Reads whose extents overlap on the length-n cycle are merged using their
true start positions; a merged position keeps any bit that is unerased in
at least one covering read. Two merge modes exist:

* "maximal-run" (default): reads that exactly touch are merged, so islands
  are literally the maximal runs of covered positions and the identity
  sum(N_i) = #covered holds per trial.
* "strict-overlap": reads must share at least one position, so two exactly
  adjacent reads form two touching islands.

The difference occurs with probability O(K^2/n) and vanishes asymptotically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import ERASED, ReadSet

MERGE_MAXIMAL = "maximal-run"
MERGE_STRICT = "strict-overlap"
MERGE_MODES = (MERGE_MAXIMAL, MERGE_STRICT)


@dataclass
class Island:
    """A maximal merged segment: start, length N, symbols, and the number of
    reads that merged into it."""

    start: int
    length: int
    symbols: np.ndarray
    read_count: int

    def __eq__(self, other):
        if not isinstance(other, Island):
            return NotImplemented
        return (
            self.start == other.start
            and self.length == other.length
            and self.read_count == other.read_count
            and np.array_equal(self.symbols, other.symbols)
        )


@dataclass
class IslandSet:
    """Islands of one trial, sorted by start position on the cycle.

    erased_count is the number of covered positions that stayed erased in
    every covering read (the covered-but-not-visible positions).
    """

    n: int
    islands: list[Island] = field(default_factory=list)
    full_circle: bool = False
    erased_count: int = 0

    def __len__(self) -> int:
        return len(self.islands)

    def __eq__(self, other):
        if not isinstance(other, IslandSet):
            return NotImplemented
        return (
            self.n == other.n
            and self.full_circle == other.full_circle
            and self.erased_count == other.erased_count
            and self.islands == other.islands
        )

    def covered_count(self) -> int:
        return sum(i.length for i in self.islands)


def island_lengths(island_set: IslandSet) -> list[int]:
    """Island lengths N_i in start order; their sum is the covered count."""
    return [i.length for i in island_set.islands]


def _check_mode(mode: str) -> None:
    if mode not in MERGE_MODES:
        raise ValueError(f"merge mode must be one of {MERGE_MODES}, got {mode!r}")


def merge_true_islands(reads: ReadSet, mode: str = MERGE_MAXIMAL) -> IslandSet:
    """Merge reads into true islands by sort-and-sweep over start positions.

    All reads share length L, so after sorting the running coverage end is
    always last_start + L; a new island begins where the next start falls
    beyond (maximal-run) or at (strict-overlap) the current end. Wrap-around
    is handled afterwards by absorbing leading islands into the trailing one.
    """
    _check_mode(mode)
    n, L = reads.params.n, reads.params.L
    if len(reads) == 0:
        return IslandSet(n=n)

    order = np.argsort(reads.starts, kind="stable")
    s = reads.starts[order]

    if mode == MERGE_MAXIMAL:
        breaks = np.flatnonzero(np.diff(s) > L) + 1
    else:
        breaks = np.flatnonzero(np.diff(s) >= L) + 1
    groups = np.split(np.arange(len(s)), breaks)

    # Unwrapped [start, end) spans; end may exceed n before wrap handling.
    spans = [[int(s[g[0]]), int(s[g[-1]]) + L, list(order[g])] for g in groups]

    # Absorb leading islands into the trailing one while it wraps onto them.
    while len(spans) > 1:
        start0, end0, members0 = spans[0]
        endw = spans[-1][1] - n
        merges = endw >= start0 if mode == MERGE_MAXIMAL else endw > start0
        if not merges:
            break
        spans[-1][1] = max(spans[-1][1], end0 + n)
        spans[-1][2].extend(members0)
        spans.pop(0)

    # Only a single remaining span can wrap onto itself; cap it at one lap.
    if len(spans) == 1 and spans[0][1] - spans[0][0] >= n:
        spans[0][0], spans[0][1] = 0, n  # fixed convention: full circle starts at 0
    # In strict mode full coverage may be a chain of touching islands, so the
    # flag is defined by the covered count, not by the island count.
    full_circle = sum(end - start for start, end, _ in spans) >= n

    islands = []
    erased_total = 0
    for start, end, members in spans:
        length = end - start
        symbols = np.full(length, ERASED, dtype=np.int8)
        for r in members:
            off = (int(reads.starts[r]) - start) % n
            row = reads.symbols[r]
            head = min(L, length - off)
            np.maximum(symbols[off : off + head], row[:head], out=symbols[off : off + head])
            if head < L:  # the full-circle island wraps onto itself
                np.maximum(symbols[: L - head], row[head:], out=symbols[: L - head])
        erased_total += int(np.count_nonzero(symbols == ERASED))
        islands.append(
            Island(start=start % n, length=length, symbols=symbols, read_count=len(members))
        )

    islands.sort(key=lambda i: i.start)
    return IslandSet(n=n, islands=islands, full_circle=full_circle, erased_count=erased_total)


def brute_force_islands(reads: ReadSet) -> IslandSet:
    """Independent oracle for maximal-run merging, for n up to ~10^4.

    Builds the covered-position mask directly with plain Python loops, scans
    for maximal cyclic runs, and fills each covered position with the
    unerased value of any covering read.
    """
    n, L = reads.params.n, reads.params.L
    if n > 10_000:
        raise ValueError("brute-force oracle is restricted to n <= 10^4")
    if len(reads) == 0:
        return IslandSet(n=n)

    covered = [False] * n
    value = [ERASED] * n
    for start, row in zip(reads.starts, reads.symbols):
        for j in range(L):
            p = (int(start) + j) % n
            covered[p] = True
            if row[j] != ERASED:
                value[p] = int(row[j])

    if all(covered):
        symbols = np.array(value, dtype=np.int8)
        island = Island(start=0, length=n, symbols=symbols, read_count=len(reads))
        erased = sum(1 for v in value if v == ERASED)
        return IslandSet(n=n, islands=[island], full_circle=True, erased_count=erased)

    run_starts = [p for p in range(n) if covered[p] and not covered[(p - 1) % n]]
    islands = []
    erased_total = 0
    for start in run_starts:
        length = 0
        while covered[(start + length) % n]:
            length += 1
        positions = [(start + j) % n for j in range(length)]
        symbols = np.array([value[p] for p in positions], dtype=np.int8)
        count = sum(1 for s in reads.starts if (int(s) - start) % n < length)
        erased_total += sum(1 for p in positions if value[p] == ERASED)
        islands.append(Island(start=start, length=length, symbols=symbols, read_count=count))

    islands.sort(key=lambda i: i.start)
    return IslandSet(n=n, islands=islands, full_circle=False, erased_count=erased_total)
