"""Forward model of the shotgun sequencing channel with erasures.

The channel takes an n-bit input string, samples K length-L substrings
cyclically (wrap-around) with uniform random start positions, and erases
each symbol of each read independently with probability delta. Reads are
stored start-aligned, so downstream merging has genie access to the true
positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

# Symbol used for an erased bit; 0/1 are the data bits. int8 keeps read
# matrices compact and makes "union of unerased symbols" an elementwise max.
ERASED = -1

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator]


@dataclass(frozen=True)
class ChannelParams:
    """Channel configuration with the derived read geometry.

    L and K are rounded from the requested coverage depth, so all analytic
    comparisons should use c_effective = K*L/n rather than c_nominal.
    """

    n: int
    lbar: float
    delta: float
    c_nominal: float
    L: int
    K: int
    c_effective: float


@dataclass(frozen=True)
class Read:
    """One read: start position (0-based) plus L symbols over {0, 1, ERASED}."""

    start: int
    symbols: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, Read):
            return NotImplemented
        return self.start == other.start and np.array_equal(self.symbols, other.symbols)


@dataclass
class ReadSet:
    """Multiset of K reads sampled from one input string.

    starts has shape (K,), symbols has shape (K, L). Duplicated start
    positions are allowed; the channel samples with replacement.
    """

    params: ChannelParams
    starts: np.ndarray
    symbols: np.ndarray

    def __post_init__(self):
        if self.symbols.shape != (len(self.starts), self.params.L):
            raise ValueError("symbol matrix shape does not match starts/params")

    def __len__(self) -> int:
        return len(self.starts)

    @property
    def reads(self) -> list[Read]:
        return [Read(int(s), row) for s, row in zip(self.starts, self.symbols)]


def derive_params(n: int, c_nominal: float, lbar: float, delta: float) -> ChannelParams:
    """Derive (L, K, c_effective) from the requested channel parameters.

    L = max(1, round(lbar * log2 n)) and K = max(1, round(c * n / L)), so the
    realized coverage depth c_effective = K*L/n differs from c_nominal by at
    most (L/n)*(1 + c_nominal).
    """
    if n < 4:
        raise ValueError(f"n must be at least 4, got {n}")
    if not 0.0 <= delta < 1.0:
        raise ValueError(f"delta must be in [0, 1), got {delta}")
    if c_nominal <= 0:
        raise ValueError(f"coverage depth must be positive, got {c_nominal}")
    if lbar <= 0:
        raise ValueError(f"normalized read length must be positive, got {lbar}")
    L = max(1, round(lbar * math.log2(n)))
    if L >= n:
        raise ValueError(f"derived read length L={L} must be shorter than n={n}")
    K = max(1, round(c_nominal * n / L))
    return ChannelParams(
        n=n,
        lbar=lbar,
        delta=delta,
        c_nominal=c_nominal,
        L=L,
        K=K,
        c_effective=K * L / n,
    )


def as_bits(x: Union[str, Sequence[int], np.ndarray]) -> np.ndarray:
    """Coerce a binary string or 0/1 sequence to an int8 bit array."""
    if isinstance(x, str):
        arr = np.frombuffer(x.encode("ascii"), dtype=np.uint8) - ord("0")
        arr = arr.astype(np.int8)
    else:
        arr = np.asarray(x, dtype=np.int8)
    if arr.ndim != 1 or not np.isin(arr, (0, 1)).all():
        raise ValueError("input string must be one-dimensional over {0, 1}")
    return arr


def child_seed(master_seed: int, *indices: int) -> np.random.SeedSequence:
    """Fixed per-trial stream split: mixes (master_seed, indices) into a seed.

    Dispatching trial t to any worker with child_seed(master, combo, t) gives
    the same stream, so parallel and serial runs agree bit for bit.
    """
    return np.random.SeedSequence(master_seed, spawn_key=indices)


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_input(n: int, seed: SeedLike) -> np.ndarray:
    """i.i.d. uniform input bits; the model puts no distribution on x."""
    return _rng(seed).integers(0, 2, size=n, dtype=np.int8)


def extract_read(x: Union[str, Sequence[int], np.ndarray], start: int, L: int) -> Read:
    """Noise-free cyclic read: symbols[j] = x[(start + j) mod n]."""
    bits = as_bits(x)
    n = len(bits)
    if not 0 <= start < n:
        raise ValueError(f"start {start} out of range [0, {n})")
    if not 1 <= L < n:
        raise ValueError(f"read length {L} out of range [1, {n})")
    idx = (start + np.arange(L)) % n
    return Read(start=start, symbols=bits[idx])


def sample_read_set(
    x: Union[str, Sequence[int], np.ndarray],
    params: ChannelParams,
    seed: SeedLike,
) -> ReadSet:
    """Sample K reads cyclically and apply i.i.d. erasures.

    Start positions are uniform on [0, n) with replacement. The RNG draw
    order is fixed (starts first, then the erasure mask), so the output is
    fully determined by (x, params, seed).
    """
    bits = as_bits(x)
    if len(bits) != params.n:
        raise ValueError(f"input has length {len(bits)}, params expect n={params.n}")
    rng = _rng(seed)
    starts = rng.integers(0, params.n, size=params.K, dtype=np.int64)
    idx = (starts[:, None] + np.arange(params.L)[None, :]) % params.n
    symbols = bits[idx]
    if params.delta > 0:
        erased = rng.random(size=symbols.shape) < params.delta
        symbols = np.where(erased, np.int8(ERASED), symbols)
    return ReadSet(params=params, starts=starts, symbols=symbols)
