"""Legendre paths: the normalized polygon of partial character sums.

The path for p has p + 1 vertices at t = j/p, j = 0..p. Vertex j is
S_p(j)/sqrt(p); the last segment is flat because chi_p(p) = 0, so the
path ends at 0 at t = 1.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from . import config
from .errors import CapacityError, DomainError, InvariantError
from .number_theory import PrimeRecord, SymbolTable, symbol_table


@dataclass(frozen=True, eq=False)
class LegendrePath:
    """Vertices of f_p together with the exact integer partial sums."""

    prime: PrimeRecord
    vertices: np.ndarray
    sums: np.ndarray

    @property
    def p(self) -> int:
        return self.prime.p

    def check_invariants(self) -> None:
        """Raise InvariantError unless every structural property holds exactly."""
        p, s = self.p, self.sums
        if s.shape != (p + 1,) or self.vertices.shape != (p + 1,):
            raise InvariantError("vertex array must have p + 1 entries")
        if s[0] != 0 or s[p - 1] != 0 or s[p] != 0:
            raise InvariantError("path must start and end at 0")
        steps = np.diff(s)
        if not np.all(np.abs(steps[: p - 1]) == 1) or steps[p - 1] != 0:
            raise InvariantError("interior increments must be +-1, final increment 0")
        if _symmetry_defect_exact(s, self.prime) != 0:
            raise InvariantError("reflection symmetry j -> p-1-j violated")


def build_path(p: int, table: SymbolTable | None = None) -> LegendrePath:
    """Build the Legendre path for the odd prime ``p`` in O(p)."""
    if table is None:
        table = symbol_table(p)
    p = table.p
    sums = np.zeros(p + 1, dtype=np.int32)
    np.cumsum(table.values, out=sums[1:p], dtype=np.int32)
    sums[p] = sums[p - 1]
    vertices = sums / math.sqrt(p)
    sums.setflags(write=False)
    vertices.setflags(write=False)
    return LegendrePath(PrimeRecord.of(p), vertices, sums)


def _check_unit_interval(t) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    if np.any(~np.isfinite(t)) or np.any(t < 0.0) or np.any(t > 1.0):
        raise DomainError("t must lie in [0, 1]")
    return t


def eval_path(path: LegendrePath, t):
    """Evaluate f_p at ``t`` (scalar or array) by linear interpolation.

    At t = j/p the vertex value is returned exactly, even when p * t is off
    from j by rounding.
    """
    t = _check_unit_interval(t)
    p = path.p
    x = p * t
    r = np.rint(x)
    on_vertex = np.abs(x - r) <= 4 * np.spacing(np.maximum(x, 1.0))
    j = np.minimum(np.floor(x), p - 1).astype(np.int64)
    frac = x - j
    v = path.vertices
    out = v[j] + frac * (v[j + 1] - v[j])
    out = np.where(on_vertex, v[r.astype(np.int64)], out)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class PolyaApproximation:
    """Truncation parameters of the Fourier expansion and its error budget."""

    prime: PrimeRecord
    Z: float
    c0: float = config.POLYA_C0

    def __post_init__(self):
        if not self.Z >= 1:
            raise DomainError(f"truncation Z must be >= 1, got {self.Z}")

    @property
    def error_budget(self) -> float:
        p = self.prime.p
        return self.c0 * (1 / math.sqrt(p) + math.sqrt(p) * math.log(p) / self.Z)


def polya_approx(p: int, t, Z: float, table: SymbolTable | None = None):
    """Truncated Fourier expansion of f_p at ``t``.

    For p = 1 mod 4 this is (1/pi) sum_{a<=Z} chi(a) sin(2 pi a t)/a; for
    p = 3 mod 4 the sine is replaced by 1 - cos(2 pi a t).
    """
    if not Z >= 1:
        raise DomainError(f"truncation Z must be >= 1, got {Z}")
    t = _check_unit_interval(t)
    if table is None:
        table = symbol_table(p)
    p = table.p
    a = np.arange(1, int(math.floor(Z)) + 1, dtype=np.int64)
    coef = table[a] / a
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    out = np.empty(t.shape, dtype=np.float64)
    block = max(1, 2**22 // a.size)
    flat_t, flat_out = t.ravel(), out.reshape(-1)
    for i in range(0, flat_t.size, block):
        tt = flat_t[i:i + block]
        # reduce a*t mod 1 before scaling to keep the phase accurate
        phase = np.outer(tt, a)
        phase -= np.floor(phase)
        phase *= 2 * np.pi
        basis = np.sin(phase) if p % 4 == 1 else 1.0 - np.cos(phase)
        flat_out[i:i + block] = basis @ coef / np.pi
    return float(out[0]) if scalar else out


def sup_norm(path: LegendrePath) -> float:
    """max |f_p| on [0, 1]; attained at a vertex because f_p is a polygon."""
    return float(np.max(np.abs(path.sums))) / math.sqrt(path.p)


def _symmetry_defect_exact(sums: np.ndarray, prime: PrimeRecord) -> int:
    p = prime.p
    sigma = 1 if prime.residue_class == 3 else -1
    head = sums[:p].astype(np.int64)
    return int(np.max(np.abs(head[::-1] - sigma * head)))


def symmetry_defect(path: LegendrePath) -> float:
    """max_j |v[p-1-j] - sigma v[j]| with sigma = +1 (p = 3 mod 4), -1 (p = 1 mod 4)."""
    return _symmetry_defect_exact(path.sums, path.prime) / math.sqrt(path.p)


def fourier_coefficient(path: LegendrePath, h: int) -> complex:
    """Exact integral of f_p(t) e(-ht) over [0, 1]; zero at h = 0 by convention.

    On [j/p, (j+1)/p] the path is linear, so each segment contributes
    e(-hj/p)/p * (v_j I0 + (v_{j+1} - v_j) I1) with I0, I1 the integrals of
    e(-hu/p) and u e(-hu/p) over u in [0, 1].
    """
    h = int(h)
    if abs(h) > config.FOURIER_H_MAX:
        raise CapacityError(f"|h|={abs(h)} exceeds guard 10^6")
    if h == 0:
        return 0j
    p = path.p
    v = path.vertices
    alpha = -2j * np.pi * h / p
    if h % p == 0:
        i0, i1 = 0j, 1 / alpha
    else:
        ea = np.exp(alpha)
        i0 = (ea - 1) / alpha
        i1 = ea / alpha - (ea - 1) / alpha**2
    j = np.arange(p)
    twiddle = np.exp(-2j * np.pi * ((h * j) % p) / p)
    seg = v[:-1] * i0 + np.diff(v) * i1
    return complex(np.sum(twiddle * seg) / p)


def fourier_leading_term(path: LegendrePath, h: int) -> complex:
    """Predicted leading term epsilon_p chi_p(-h) / (2 pi i h) of FT_p(h)."""
    h = int(h)
    if h == 0:
        return 0j
    chi = _chi(path, -h)
    return path.prime.epsilon * chi / (2j * np.pi * h)


def fourier_coefficient_discrete(path: LegendrePath, h: int) -> complex:
    """Fourier coefficient of the path with time rescaled by p - 1.

    This is the (p-1)-point discretization used in the literature: vertices
    S_p(j)/sqrt(p) placed at t = j/(p-1), j = 0..p-1.
    """
    h = int(h)
    if h == 0:
        return 0j
    p = path.p
    m = np.arange(1, p)
    chi = np.diff(path.sums[:p])
    x = np.pi * h / (p - 1)
    s = np.sum(chi * np.exp(-2j * np.pi * ((h * m) % (p - 1)) / (p - 1)))
    return complex(
        1 / (2j * np.pi * h) * (np.sin(x) / x) * np.exp(1j * x) * s / math.sqrt(p)
    )


def _chi(path: LegendrePath, n: int) -> int:
    p = path.p
    n %= p
    if n == 0:
        return 0
    return int(path.sums[n] - path.sums[n - 1])


def write_path_csv(path: LegendrePath, fh) -> None:
    """Write ``j,t,value`` rows for every vertex (17 significant digits)."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["j", "t", "value"])
    p = path.p
    for j in range(p + 1):
        writer.writerow([j, format(j / p, ".17g"), format(float(path.vertices[j]), ".17g")])


__all__ = [
    "LegendrePath",
    "PolyaApproximation",
    "build_path",
    "eval_path",
    "fourier_coefficient",
    "fourier_coefficient_discrete",
    "fourier_leading_term",
    "polya_approx",
    "sup_norm",
    "symmetry_defect",
    "write_path_csv",
]
