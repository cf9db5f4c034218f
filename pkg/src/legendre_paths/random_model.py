"""Rademacher random completely multiplicative functions and the random
Fourier series built from them.

A sample carries one sign per prime and an independent sign for -1. The
partial sum F_N(t) is

    (1/pi) sum_{n<=N} X_n sin(2 pi n t) / n           if X_{-1} = +1
    (1/pi) sum_{n<=N} X_n (1 - cos(2 pi n t)) / n     if X_{-1} = -1

which is the two-sided series over 0 < |n| <= N with its Y/(2 pi i)
prefactor folded in.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import config, streams
from .errors import CapacityError, DomainError
from .number_theory import factorize, multiplicative_order, sieve_primes

# counter reserved for the sign at -1 (2^64 - 1 as an unsigned word)
_MINUS_ONE = -1


@dataclass(frozen=True, eq=False)
class RademacherSample:
    """Signs X_q for primes q <= prime_cutoff plus the sign X_{-1}."""

    seed: int
    prime_cutoff: int
    primes: np.ndarray
    signs: np.ndarray
    sign_minus_one: int
    key: np.ndarray = field(repr=False)

    @property
    def prime_signs(self) -> dict[int, int]:
        return dict(zip(self.primes.tolist(), self.signs.tolist()))

    def sign(self, q: int) -> int:
        """X_q for a prime q (read from the keyed stream if q > cutoff)."""
        q = int(q)
        if q <= self.prime_cutoff:
            i = int(np.searchsorted(self.primes, q))
            if i < self.primes.size and self.primes[i] == q:
                return int(self.signs[i])
        return int(streams.signs(self.key, np.array([q]))[0])

    @classmethod
    def from_signs(cls, prime_signs: dict[int, int], sign_minus_one: int,
                   prime_cutoff: int | None = None, seed: int = 0) -> "RademacherSample":
        """A fixed assignment; must cover every prime up to ``prime_cutoff``."""
        cutoff = int(max(prime_signs, default=1) if prime_cutoff is None else prime_cutoff)
        primes = sieve_primes(2, cutoff) if cutoff >= 2 else np.empty(0, dtype=np.int64)
        missing = set(primes.tolist()) - set(prime_signs)
        if missing:
            raise DomainError(f"no sign given for primes {sorted(missing)}")
        if any(v not in (-1, 1) for v in prime_signs.values()) or sign_minus_one not in (-1, 1):
            raise DomainError("signs must be +1 or -1")
        sgn = np.array([prime_signs[q] for q in primes.tolist()], dtype=np.int8)
        primes.setflags(write=False)
        sgn.setflags(write=False)
        return cls(int(seed), cutoff, primes, sgn, int(sign_minus_one), streams.derive_key(seed))

    def with_sign_minus_one(self, value: int) -> "RademacherSample":
        if value not in (-1, 1):
            raise DomainError("X_{-1} must be +1 or -1")
        return RademacherSample(self.seed, self.prime_cutoff, self.primes,
                                self.signs, int(value), self.key)


def sample_signs(seed: int, P: int) -> RademacherSample:
    """Draw X_q for primes q <= P and X_{-1} from the stream keyed by ``seed``."""
    P = int(P)
    if P > config.SIGN_CUTOFF_MAX:
        raise CapacityError(f"prime cutoff {P} exceeds guard 10^8")
    key = streams.derive_key(seed)
    primes = sieve_primes(2, P) if P >= 2 else np.empty(0, dtype=np.int64)
    sgn = streams.signs(key, primes)
    xm1 = int(streams.signs(key, np.array([_MINUS_ONE]))[0])
    primes.setflags(write=False)
    sgn.setflags(write=False)
    return RademacherSample(int(seed), P, primes, sgn, xm1, key)


def eval_multiplicative(sample: RademacherSample, n: int) -> int:
    """X_n for a nonzero integer n (only exponent parity matters)."""
    n = int(n)
    if n == 0:
        raise DomainError("X_n is defined for nonzero n only")
    out = sample.sign_minus_one if n < 0 else 1
    for q, e in factorize(abs(n)).items():
        if e % 2:
            out *= sample.sign(q)
    return out


def _extend(prime_values: np.ndarray, primes: np.ndarray, N: int) -> np.ndarray:
    """Completely multiplicative values X_0..X_N (X_0 = 0) along the last axis."""
    shape = prime_values.shape[:-1] + (N + 1,)
    X = np.zeros(shape, dtype=np.int8)
    if N >= 1:
        X[..., 1] = 1
    X[..., primes] = prime_values
    if N >= 4:
        multiplicative_order(N + 1).extend(X, N + 1)
    return X


def multiplicative_values(sample: RademacherSample, N: int) -> np.ndarray:
    """int8 array with entry n equal to X_n for 1 <= n <= N (entry 0 is 0)."""
    N = int(N)
    if N > sample.prime_cutoff:
        raise CapacityError(f"N={N} exceeds the sample's prime cutoff {sample.prime_cutoff}")
    k = int(np.searchsorted(sample.primes, N, side="right"))
    return _extend(sample.signs[:k], sample.primes[:k], N)


def _basis(t: np.ndarray, N: int, sign_minus_one: int) -> np.ndarray:
    """Rows sin(2 pi n t)/n or (1 - cos(2 pi n t))/n for n = 1..N."""
    n = np.arange(1, N + 1, dtype=np.float64)
    phase = np.outer(t, n)
    phase -= np.floor(phase)
    phase *= 2 * np.pi
    if sign_minus_one == 1:
        return np.sin(phase) / n
    return (1.0 - np.cos(phase)) / n


def _check_t(t) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    if np.any(~np.isfinite(t)) or np.any(t < 0) or np.any(t > 1):
        raise DomainError("t must lie in [0, 1]")
    return t


def eval_partial_series(sample: RademacherSample, N: int, t):
    """F_{X,N}(t) by direct summation; ``t`` may be a scalar or an array."""
    t = _check_t(t)
    X = multiplicative_values(sample, N)[1:].astype(np.float64)
    flat = np.atleast_1d(t).ravel()
    out = np.empty(flat.size)
    block = max(1, 2**22 // max(N, 1))
    for i in range(0, flat.size, block):
        out[i:i + block] = _basis(flat[i:i + block], N, sample.sign_minus_one) @ X / np.pi
    return float(out[0]) if t.ndim == 0 else out.reshape(t.shape)


@dataclass(frozen=True, eq=False)
class ModelPath:
    """A sampled path of F_{X,N} on a uniform grid of [0, 1]."""

    N: int
    grid: np.ndarray
    values: np.ndarray
    sign_minus_one: int
    seed: int

    def write_csv(self, fh) -> None:
        fh.write("t,value\n")
        for t, v in zip(self.grid.tolist(), self.values.tolist()):
            fh.write(f"{format(t, '.17g')},{format(v, '.17g')}\n")

    def sidecar(self) -> dict:
        return {"seed": self.seed, "N": self.N, "grid_size": int(self.grid.size),
                "sign_minus_one": self.sign_minus_one}

    def write_sidecar(self, fh) -> None:
        json.dump(self.sidecar(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _fft_grid_values(X: np.ndarray, M: int):
    """Sine and one-minus-cosine series on t_j = j/M, j = 0..M, via one FFT.

    ``X`` is (..., N + 1) with X[..., 0] ignored. Coefficients are folded
    mod M, so the evaluation is exact for any M; rows are independent.
    """
    N = X.shape[-1] - 1
    n = np.arange(1, N + 1)
    coef = X[..., 1:] / n
    folded = np.zeros(X.shape[:-1] + (M,), dtype=np.float64)
    if N < M:
        folded[..., 1:N + 1] = coef
    else:
        for r0 in range(0, N, M):
            chunk = coef[..., r0:r0 + M]
            folded[..., (n[r0:r0 + M] % M)] += chunk
    z = np.fft.ifft(folded, axis=-1) * M
    plus = np.empty(X.shape[:-1] + (M + 1,))
    minus = np.empty_like(plus)
    plus[..., :M] = z.imag / np.pi
    minus[..., :M] = (coef.sum(axis=-1, keepdims=True) - z.real) / np.pi
    # both series vanish exactly at integer t
    plus[..., 0] = plus[..., M] = 0.0
    minus[..., 0] = minus[..., M] = 0.0
    return plus, minus


def sample_model_path(sample: RademacherSample, N: int, grid_size: int,
                      method: str = "auto") -> ModelPath:
    """Evaluate F_{X,N} on t_j = j/(grid_size - 1).

    ``method='auto'`` uses the FFT when grid_size >= 2N + 2 and direct
    summation otherwise; 'fft' and 'direct' force one route.
    """
    grid_size = int(grid_size)
    if grid_size < 2:
        raise DomainError("grid_size must be >= 2")
    if method not in ("auto", "fft", "direct"):
        raise DomainError(f"unknown method {method!r}")
    M = grid_size - 1
    grid = np.arange(grid_size) / M
    use_fft = method == "fft" or (method == "auto" and grid_size >= 2 * N + 2)
    if use_fft:
        X = multiplicative_values(sample, N).astype(np.float64)
        plus, minus = _fft_grid_values(X, M)
        values = plus if sample.sign_minus_one == 1 else minus
    else:
        values = eval_partial_series(sample, N, grid)
    return ModelPath(int(N), grid, values, sample.sign_minus_one, sample.seed)


# ---------------------------------------------------------------- Monte Carlo


@dataclass(frozen=True)
class MCEstimate:
    """Monte Carlo mean with its standard error."""

    value: float
    stderr: float
    trials: int

    def __float__(self):
        return self.value


def trial_keys(seed: int, start: int, stop: int) -> np.ndarray:
    """Stream keys for trials ``start..stop-1`` under ``seed``."""
    return streams.derive_key(seed, np.arange(start, stop, dtype=np.int64))


def draw_batch(keys: np.ndarray, N: int):
    """Multiplicative values (T, N+1) and X_{-1} (T,) for a batch of trial keys."""
    primes = sieve_primes(2, N) if N >= 2 else np.empty(0, dtype=np.int64)
    X = _extend(streams.signs(keys, primes), primes, N)
    xm1 = streams.signs(keys, np.array([_MINUS_ONE]))[:, 0]
    return X, xm1


def _forced_sign(variant: str, xm1: np.ndarray) -> np.ndarray:
    if variant == "combined":
        return xm1
    if variant == "plus":
        return np.ones_like(xm1)
    if variant == "minus":
        return -np.ones_like(xm1)
    raise DomainError(f"unknown variant {variant!r}")


def model_values_at(seed: int, N: int, points, trials: int,
                    variant: str = "combined", chunk: int = config.CHUNK_SIZE) -> np.ndarray:
    """Matrix (trials, k) of F_{X,N}(t_i) for independent keyed trials."""
    pts = _check_t(np.atleast_1d(points))
    bplus = _basis(pts, N, 1).T
    bminus = _basis(pts, N, -1).T
    out = np.empty((trials, pts.size))
    for lo in range(0, trials, chunk):
        hi = min(trials, lo + chunk)
        X, xm1 = draw_batch(trial_keys(seed, lo, hi), N)
        Xf = X[:, 1:].astype(np.float64)
        fp = Xf @ bplus / np.pi
        fm = Xf @ bminus / np.pi
        sgn = _forced_sign(variant, xm1)
        out[lo:hi] = np.where(sgn[:, None] == 1, fp, fm)
    return out


def _estimate(samples: np.ndarray) -> MCEstimate:
    n = samples.size
    return MCEstimate(float(np.mean(samples)), float(np.std(samples, ddof=1) / math.sqrt(n)), n)


def joint_moment_mc(points, exponents, N: int, trials: int, seed: int,
                    variant: str = "combined") -> MCEstimate:
    """Monte Carlo estimate of E prod F_{X,N}(t_i)^{n_i}."""
    vals = model_values_at(seed, N, points, trials, variant)
    prod = np.prod(vals ** np.asarray(exponents)[None, :], axis=1)
    return _estimate(prod)


def increment_fourth_moment_mc(N: int, s: float, t: float, trials: int,
                               seed: int) -> MCEstimate:
    """Monte Carlo estimate of E|F_{X,N}(t) - F_{X,N}(s)|^4 (X_{-1} random)."""
    if not (0 <= s <= 1 and 0 <= t <= 1):
        raise DomainError("s, t must lie in [0, 1]")
    if s > t:
        raise DomainError("need s <= t")
    if trials < 100:
        raise DomainError("need at least 100 trials")
    if s == t:
        return MCEstimate(0.0, 0.0, int(trials))
    vals = model_values_at(seed, N, [s, t], trials)
    return _estimate((vals[:, 1] - vals[:, 0]) ** 4)


__all__ = [
    "MCEstimate",
    "ModelPath",
    "RademacherSample",
    "draw_batch",
    "eval_multiplicative",
    "eval_partial_series",
    "increment_fourth_moment_mc",
    "joint_moment_mc",
    "model_values_at",
    "multiplicative_values",
    "sample_model_path",
    "sample_signs",
    "trial_keys",
]
