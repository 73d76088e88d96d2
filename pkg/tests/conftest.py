"""Shared helpers for building hand-crafted channel objects in tests."""

import math

import numpy as np

from sse_sim.channel import ERASED, ChannelParams, ReadSet, as_bits


def make_params(n: int, L: int, K: int, delta: float = 0.0) -> ChannelParams:
    """ChannelParams with an explicit read geometry (bypasses rounding)."""
    return ChannelParams(
        n=n,
        lbar=L / math.log2(n),
        delta=delta,
        c_nominal=K * L / n,
        L=L,
        K=K,
        c_effective=K * L / n,
    )


def make_read_set(x, L, starts, erased_offsets=None, delta=0.0):
    """Build a ReadSet from explicit starts over input x.

    erased_offsets maps read index -> iterable of within-read offsets that
    are forced to the erasure symbol.
    """
    bits = as_bits(x)
    n = len(bits)
    starts = np.asarray(starts, dtype=np.int64)
    params = make_params(n, L, len(starts), delta=delta)
    idx = (starts[:, None] + np.arange(L)[None, :]) % n
    symbols = bits[idx].copy()
    for r, offsets in (erased_offsets or {}).items():
        for off in offsets:
            symbols[r, off] = ERASED
    return ReadSet(params=params, starts=starts, symbols=symbols)
