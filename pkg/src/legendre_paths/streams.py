"""Counter-based random streams keyed by semantic identity.

A stream is a 64-bit key; its i-th output is the SplitMix64 finalizer
applied to ``key + (i + 1) * golden``. Outputs at different counters are
computed independently, so a sign attached to a prime q is read directly
at counter q and never depends on how many other primes were drawn, on
chunking, or on thread scheduling.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _u64(x) -> np.ndarray:
    """Reinterpret integers (Python or numpy, possibly negative) as uint64 words."""
    if isinstance(x, (int, np.integer)):
        return np.asarray(int(x) & _MASK, dtype=np.uint64)
    x = np.asarray(x)
    if x.dtype == np.uint64:
        return x
    if x.dtype.kind == "i":
        return x.astype(np.int64).view(np.uint64)
    if x.dtype.kind == "u":
        return x.astype(np.uint64)
    raise TypeError(f"expected integers, got dtype {x.dtype}")


def fmix64(z) -> np.ndarray:
    """SplitMix64 output finalizer (a bijection on 64-bit words)."""
    z = np.array(_u64(z), dtype=np.uint64)
    with np.errstate(over="ignore"):
        z ^= z >> np.uint64(30)
        z *= _M1
        z ^= z >> np.uint64(27)
        z *= _M2
        z ^= z >> np.uint64(31)
    return z


def derive_key(seed: int, *labels) -> np.ndarray:
    """Key of the sub-stream reached from ``seed`` by following ``labels``.

    Each label may be an int or an integer array; arrays broadcast, giving
    one key per element.
    """
    key = fmix64(seed)
    with np.errstate(over="ignore"):
        for label in labels:
            key = fmix64(key ^ fmix64(_u64(label) + _GOLDEN))
    return key


def raw(keys, counters) -> np.ndarray:
    """Outputs at ``counters`` of every stream in ``keys``; shape keys.shape + counters.shape."""
    keys = _u64(keys)
    counters = _u64(counters)
    keys = keys.reshape(keys.shape + (1,) * counters.ndim)
    with np.errstate(over="ignore"):
        z = keys + (counters + np.uint64(1)) * _GOLDEN
    return fmix64(z)


def signs(keys, counters) -> np.ndarray:
    """Rademacher signs (int8, +-1) from the top output bit."""
    top = (raw(keys, counters) >> np.uint64(63)).astype(np.int8)
    return (1 - 2 * top).astype(np.int8)


def uniforms(keys, counters) -> np.ndarray:
    """Uniform doubles in [0, 1) from the top 53 output bits."""
    return (raw(keys, counters) >> np.uint64(11)).astype(np.float64) * 2.0**-53
