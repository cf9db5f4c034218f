"""Distributional comparison between the prime family and the random model."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from . import config
from .errors import DomainError
from .family import path_values, prime_window, sup_norms
from .random_model import _fft_grid_values, _forced_sign, draw_batch, model_values_at, trial_keys

_SUP_CHUNK = 32
_PEAK_CANDIDATES = 3
_NEWTON_STEPS = 4


@dataclass(frozen=True)
class PrimeFamily:
    """Primes Q <= p <= 2Q, optionally one class mod 4."""

    Q: int
    residue_class: int | None = None

    def tag(self) -> str:
        rc = "" if self.residue_class is None else f", p%4={self.residue_class}"
        return f"primes(Q={self.Q}{rc})"


@dataclass(frozen=True)
class ModelFamily:
    """``count`` keyed draws of F_{X,N}; ``sign_minus_one`` fixes X_{-1} if set."""

    N: int
    count: int
    seed: int
    sign_minus_one: int | None = None

    def tag(self) -> str:
        return f"model(N={self.N}, count={self.count}, seed={self.seed})"

    @property
    def variant(self) -> str:
        return {None: "combined", 1: "plus", -1: "minus"}[self.sign_minus_one]


@dataclass(frozen=True, eq=False)
class EmpiricalSample:
    values: np.ndarray
    source: str
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.size == 0 or not np.all(np.isfinite(vals)):
            raise DomainError("sample values must be non-empty and finite")
        object.__setattr__(self, "values", vals)

    def write_csv(self, fh) -> None:
        fh.write("value\n")
        for v in self.values.tolist():
            fh.write(format(v, ".17g") + "\n")

    def write_sidecar(self, fh) -> None:
        json.dump({"source": self.source, **self.metadata}, fh, indent=2, sort_keys=True)
        fh.write("\n")


def supnorm_samples_primes(Q: int, residue_class: int | None = None) -> EmpiricalSample:
    """max_x |S_p(x)|/sqrt(p) for every prime in [Q, 2Q]."""
    primes = prime_window(Q, residue_class)
    fam = PrimeFamily(int(Q), residue_class)
    return EmpiricalSample(sup_norms(primes), fam.tag(),
                           {"Q": int(Q), "residue_class": residue_class, "count": int(primes.size)})


def _polish_peaks(X: np.ndarray, sign: int, t: np.ndarray, h: float) -> float:
    """max |F| after Newton steps on F' from each candidate t, kept within +-h."""
    N = X.size - 1
    n = np.arange(1, N + 1, dtype=np.float64)
    x = X[1:]
    xn = x * n
    lo, hi = np.maximum(t - h, 0.0), np.minimum(t + h, 1.0)
    for _ in range(_NEWTON_STEPS):
        ph = np.outer(t, n)
        ph -= np.floor(ph)
        ph *= 2 * np.pi
        if sign == 1:
            d1, d2 = 2 * (np.cos(ph) @ x), -4 * np.pi * (np.sin(ph) @ xn)
        else:
            d1, d2 = 2 * (np.sin(ph) @ x), 4 * np.pi * (np.cos(ph) @ xn)
        step = np.divide(d1, d2, out=np.zeros_like(d1), where=d2 != 0)
        t = np.clip(t - step, lo, hi)
    ph = np.outer(t, n)
    ph -= np.floor(ph)
    ph *= 2 * np.pi
    vals = (np.sin(ph) @ (x / n)) if sign == 1 else ((1 - np.cos(ph)) @ (x / n))
    return float(np.max(np.abs(vals)) / np.pi)


def _peak_candidates(v: np.ndarray, k: int) -> np.ndarray:
    a = np.abs(v)
    interior = np.flatnonzero((a[1:-1] >= a[:-2]) & (a[1:-1] >= a[2:])) + 1
    if interior.size == 0:
        return interior
    return interior[np.argsort(-a[interior], kind="stable")[:k]]


def supnorm_samples_model(N: int, grid: int, count: int, seed: int,
                          sign_minus_one: int | None = None,
                          refine: bool = True) -> EmpiricalSample:
    """max |F_{X,N}| over ``count`` keyed draws.

    F is first evaluated on t_j = j/(grid - 1), which needs at least
    2N + 2 points; four times N is the usual choice. With ``refine`` the
    best few grid peaks are then polished by Newton's method on F', so the
    result is the true maximum rather than the grid maximum and no longer
    depends on the grid beyond locating the right peak.
    """
    N, grid, count = int(N), int(grid), int(count)
    if count < 100:
        raise DomainError("count must be >= 100")
    if grid < 2 * N + 2:
        raise DomainError(f"grid must be >= 2N + 2 = {2 * N + 2}")
    fam = ModelFamily(N, count, int(seed), sign_minus_one)
    M = grid - 1
    out = np.empty(count)
    for lo in range(0, count, _SUP_CHUNK):
        hi = min(count, lo + _SUP_CHUNK)
        X, xm1 = draw_batch(trial_keys(seed, lo, hi), N)
        Xf = X.astype(np.float64)
        plus, minus = _fft_grid_values(Xf, M)
        sgn = _forced_sign(fam.variant, xm1)
        vals = np.where(sgn[:, None] == 1, plus, minus)
        out[lo:hi] = np.abs(vals).max(axis=1)
        if refine:
            for i in range(hi - lo):
                cand = _peak_candidates(vals[i], _PEAK_CANDIDATES)
                if cand.size:
                    polished = _polish_peaks(Xf[i], int(sgn[i]), cand / M, 1.0 / M)
                    out[lo + i] = max(out[lo + i], polished)
    return EmpiricalSample(out, fam.tag(), {"N": N, "grid": grid, "count": count,
                                            "seed": int(seed), "sign_minus_one": sign_minus_one,
                                            "refine": bool(refine)})


def ks_distance(a, b) -> float:
    """Two-sample Kolmogorov-Smirnov statistic sup |ECDF_a - ECDF_b|."""
    va = a.values if isinstance(a, EmpiricalSample) else np.asarray(a, dtype=np.float64)
    vb = b.values if isinstance(b, EmpiricalSample) else np.asarray(b, dtype=np.float64)
    if va.size == 0 or vb.size == 0:
        raise DomainError("KS distance needs two non-empty samples")
    return float(stats.ks_2samp(va, vb, method="asymp").statistic)


def finite_dim_samples(source, points) -> np.ndarray:
    """Rows (f(t_1), ..., f(t_k)) for each prime or model draw."""
    pts = np.atleast_1d(np.asarray(points, dtype=np.float64))
    if np.any(pts < 0) or np.any(pts > 1) or np.any(np.diff(pts) <= 0):
        raise DomainError("points must be strictly increasing in [0, 1]")
    if isinstance(source, PrimeFamily):
        return path_values(prime_window(source.Q, source.residue_class), pts)
    if isinstance(source, ModelFamily):
        return model_values_at(source.seed, source.N, pts, source.count, source.variant)
    raise DomainError(f"unknown source {source!r}")


def write_matrix_csv(matrix: np.ndarray, fh) -> None:
    k = matrix.shape[1]
    fh.write(",".join(f"t_{i + 1}" for i in range(k)) + "\n")
    for row in matrix.tolist():
        fh.write(",".join(format(v, ".17g") for v in row) + "\n")


def increment_powers(Q: int, s: float, t: float, power: int,
                     residue_class: int | None = None) -> np.ndarray:
    """|f_p(t) - f_p(s)|^power for each prime in the window."""
    vals = path_values(prime_window(Q, residue_class), [s, t])
    return np.abs(vals[:, 1] - vals[:, 0]) ** power


def prime_increment_moment(Q: int, s: float, t: float, power: int,
                           residue_class: int | None = None) -> float:
    """(1/pi*(Q)) sum_p |f_p(t) - f_p(s)|^power over primes in [Q, 2Q]."""
    power = int(power)
    if power < 2 or power % 2:
        raise DomainError("power must be a positive even integer")
    if not (0 <= s <= 1 and 0 <= t <= 1) or s > t:
        raise DomainError("need 0 <= s <= t <= 1")
    if s == t:
        return 0.0
    return float(np.mean(increment_powers(Q, s, t, power, residue_class)))


def prime_increment_envelope(s: float, t: float) -> float:
    """Calibrated mid-range bound C |t - s|^(1 + beta)."""
    return config.PRIME_INCREMENT_C * abs(t - s) ** (1 + config.PRIME_INCREMENT_BETA)


def model_increment_envelope(s: float, t: float) -> float:
    """Calibrated bound C |t - s|^(3/2) for the model's fourth moment."""
    return config.MODEL_TIGHTNESS_C * abs(t - s) ** 1.5


__all__ = [
    "EmpiricalSample",
    "ModelFamily",
    "PrimeFamily",
    "finite_dim_samples",
    "increment_powers",
    "ks_distance",
    "model_increment_envelope",
    "prime_increment_envelope",
    "prime_increment_moment",
    "supnorm_samples_model",
    "supnorm_samples_primes",
    "write_matrix_csv",
]
