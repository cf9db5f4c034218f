"""Per-prime evaluation over the window Q <= p <= 2Q.

Work is split into fixed chunks of primes. With more than one worker
(``LEGENDRE_THREADS``) the chunks run in a process pool; results are
reassembled in prime order either way, so every reduction downstream sees
the same array regardless of the worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .errors import DomainError
from .legendre_path import build_path, eval_path, polya_approx, sup_norm
from .number_theory import sieve_primes, symbol_table

PRIME_CHUNK = 64


def worker_count() -> int:
    raw = os.environ.get("LEGENDRE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise DomainError(f"LEGENDRE_THREADS must be an integer, got {raw!r}")


def prime_window(Q: int, residue_class: int | None = None) -> np.ndarray:
    """Odd primes in [Q, 2Q], optionally restricted to one class mod 4."""
    Q = int(Q)
    if Q < 2:
        raise DomainError(f"Q must be >= 2, got {Q}")
    primes = sieve_primes(max(3, Q), 2 * Q)
    if residue_class is not None:
        if residue_class not in (1, 3):
            raise DomainError("residue_class must be 1 or 3")
        primes = primes[primes % 4 == residue_class]
    if primes.size == 0:
        raise DomainError(f"no odd primes in [{Q}, {2 * Q}]")
    return primes


def _values_chunk(primes, points, mode, Z):
    out = np.empty((len(primes), len(points)))
    for i, p in enumerate(primes):
        p = int(p)
        if mode == "exact":
            out[i] = eval_path(build_path(p), points)
        else:
            out[i] = polya_approx(p, points, Z, table=symbol_table(p))
    return out


def _sup_chunk(primes):
    return np.array([sup_norm(build_path(int(p))) for p in primes])


def _map(func, primes, *args) -> list:
    chunks = [primes[i:i + PRIME_CHUNK] for i in range(0, primes.size, PRIME_CHUNK)]
    workers = worker_count()
    if workers == 1 or len(chunks) == 1:
        return [func(c, *args) for c in chunks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, chunks, *[[a] * len(chunks) for a in args]))


def path_values(primes: np.ndarray, points, mode: str = "exact", Z: float | None = None) -> np.ndarray:
    """Matrix (len(primes), k) of f_p(t_i), or of the truncated expansion when mode='polya'."""
    if mode not in ("exact", "polya"):
        raise DomainError(f"mode must be 'exact' or 'polya', got {mode!r}")
    if mode == "polya" and (Z is None or not Z >= 1):
        raise DomainError("polya mode needs a truncation Z >= 1")
    points = np.atleast_1d(np.asarray(points, dtype=np.float64))
    return np.vstack(_map(_values_chunk, primes, points, mode, Z))


def sup_norms(primes: np.ndarray) -> np.ndarray:
    return np.concatenate(_map(_sup_chunk, primes))
