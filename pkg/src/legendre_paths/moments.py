"""Joint moments of the random Fourier series and of the prime family.

Theoretical moments use the square-support expansion

    M_{X,+}(n) = pi^{-n} sum_{a>=1} B_+(a^2) / a^2

where B_+ is the n-fold Dirichlet convolution of the functions
b -> sin(2 pi b t_i) (each t_i used n_i times); the minus variant uses
1 - cos instead of sin, and the combined moment is the mean of the two.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from . import config
from ._divisor_series import square_coefficients, square_divisor_counts
from .errors import CapacityError, DomainError
from .family import path_values, prime_window
from .number_theory import _base_sieve, _spf_cached, divisor_function, factorize

VARIANTS = ("plus", "minus", "combined")


@dataclass(frozen=True)
class MomentRequest:
    """Points 0 <= t_1 < ... < t_k <= 1, exponents n_i and a variant."""

    points: tuple
    exponents: tuple
    variant: str = "combined"

    def __post_init__(self):
        pts = tuple(float(t) for t in self.points)
        exps = tuple(int(e) for e in self.exponents)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "exponents", exps)
        if len(pts) != len(exps) or not pts:
            raise DomainError("points and exponents must be non-empty and of equal length")
        if any(not (0.0 <= t <= 1.0) for t in pts):
            raise DomainError("points must lie in [0, 1]")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise DomainError("points must be strictly increasing")
        if any(e < 0 for e in exps):
            raise DomainError("exponents must be nonnegative")
        if sum(exps) < 1:
            raise DomainError("total degree must be at least 1")
        if self.variant not in VARIANTS:
            raise DomainError(f"variant must be one of {VARIANTS}")

    @property
    def k(self) -> int:
        return len(self.points)

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def with_variant(self, variant: str) -> "MomentRequest":
        return MomentRequest(self.points, self.exponents, variant)

    def to_dict(self) -> dict:
        return {"points": list(self.points), "exponents": list(self.exponents),
                "variant": self.variant}


@dataclass(frozen=True)
class MomentValue:
    """Truncated series value and a rigorous bound on the omitted tail."""

    value: float
    truncation: int
    tail_bound: float
    variant: str
    support: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def _kind(variant: str) -> int:
    return 0 if variant == "plus" else 1


def _vanishes(kind: int, t: float) -> bool:
    # sin(2 pi b t) = 0 for all integers b iff 2t is an integer; 1 - cos iff t is
    return (2 * t).is_integer() if kind == 0 else float(t).is_integer()


def _psi(kind: int, t: float, b: int) -> float:
    x = (b * t) % 1.0
    return math.sin(2 * math.pi * x) if kind == 0 else 1.0 - math.cos(2 * math.pi * x)


def _divisors(factors: dict[int, int]) -> list[int]:
    divs = [1]
    for q, e in factors.items():
        divs = [d * q**k for d in divs for k in range(e + 1)]
    return divs


def b_coefficient(variant: str, request: MomentRequest, a: int) -> float:
    """B_{n,t,+-}(a) by recursive enumeration of ordered factorizations.

    Within each point the factorization runs over n_i factors; the
    factorization of ``a`` across the k points is ordered as well, which is
    the same as one ordered factorization into n = sum n_i factors.
    """
    if variant not in ("plus", "minus"):
        raise DomainError("b_coefficient is defined for 'plus' and 'minus'")
    a = int(a)
    if a < 1:
        raise DomainError("a must be a positive integer")
    if a > config.B_COEFFICIENT_A_MAX:
        raise CapacityError(f"a={a} exceeds divisor-enumeration guard 10^9")
    kind = _kind(variant)
    funcs = [t for t, e in zip(request.points, request.exponents) for _ in range(e)]
    memo: dict[tuple[int, int], float] = {}

    def rec(m: int, j: int) -> float:
        if j == len(funcs) - 1:
            return _psi(kind, funcs[j], m)
        key = (m, j)
        if key not in memo:
            memo[key] = sum(_psi(kind, funcs[j], d) * rec(m // d, j + 1)
                            for d in _divisors(factorize(m)))
        return memo[key]

    return rec(a, 0)


def _binom_table(n: int, kmax: int) -> np.ndarray:
    return np.array([math.comb(k + n - 1, n - 1) for k in range(kmax + 1)], dtype=np.float64)


def square_divisor_sum(n: int, A: int) -> float:
    """sum_{a<=A} d_n(a^2)/a^2."""
    A = int(A)
    counts = square_divisor_counts(A, n, _spf_cached(max(A, 2)), _binom_table(n, 128))
    a = np.arange(1, A + 1, dtype=np.float64)
    return math.fsum(counts[1:] / a**2)


@lru_cache(maxsize=64)
def square_divisor_tail(n: int, A: int) -> float:
    """Rigorous upper bound for sum_{a>A} d_n(a^2)/a^2.

    Rankin's trick: the tail is at most A^{-s} sum_a d_n(a^2) a^{s-2} for any
    0 < s < 1, and that sum is an Euler product with local factors
    ((1-y)^{-n} + (1+y)^{-n})/2, y = p^{-(2-s)/2}. Primes up to 10^6 are
    multiplied out; larger primes are bounded through the monotone ratio
    (E(y) - 1)/y^2 and an integral comparison.
    """
    P0 = 10**6
    primes = _base_sieve(P0).astype(np.float64)
    best = math.inf
    for s in np.arange(0.05, 0.96, 0.01):
        y = primes ** (-(2 - s) / 2)
        local = ((1 - y) ** (-n) + (1 + y) ** (-n)) / 2
        log_head = math.fsum(np.log(local))
        yP = P0 ** (-(2 - s) / 2)
        ratio = (((1 - yP) ** (-n) + (1 + yP) ** (-n)) / 2 - 1) / yP**2
        log_tail = ratio * P0 ** (s - 1) / (1 - s)
        best = min(best, math.exp(-s * math.log(A) + log_head + log_tail))
    return best * (1 + 1e-9)


def _series(points, exponents, variant: str, A: int, support: int | None) -> MomentValue:
    kind = _kind(variant)
    n = int(sum(exponents))
    used = [(float(t), int(e)) for t, e in zip(points, exponents) if e > 0]
    scale = 1.0 if variant == "plus" else 2.0**n
    if any(_vanishes(kind, t) for t, _ in used):
        return MomentValue(0.0, A, 0.0, variant, support)
    A_eff = A
    exact = False
    if support is not None:
        reach = math.isqrt(int(support) ** n) if n <= 40 else A
        if reach <= A:
            A_eff, exact = reach, True
    if A_eff < 1:
        return MomentValue(0.0, A, 0.0, variant, support)
    ts = np.array([t for t, _ in used])
    kinds = np.full(ts.size, kind, dtype=np.int64)
    fgroup = np.array([g for g, (_, e) in enumerate(used) for _ in range(e)], dtype=np.int64)
    cap = np.int64(support) if support is not None else np.int64(2**62)
    B = square_coefficients(A_eff, cap, _spf_cached(max(A_eff, 2)), kinds, ts, fgroup)
    a = np.arange(1, A_eff + 1, dtype=np.float64)
    value = math.fsum(B[1:] / a**2) / math.pi**n
    tail = 0.0 if exact else scale * square_divisor_tail(n, A) / math.pi**n
    return MomentValue(value, A, tail, variant, support)


def moment_series(points, exponents, variant: str, A: int = config.DEFAULT_TRUNCATION,
                  support: int | None = None) -> MomentValue:
    """Series value for arbitrary (t_i, n_i) pairs, in any order.

    ``support`` restricts every factor b to b <= support, which gives the
    moment of the partial sum F_{X,N} with N = support.
    """
    if variant not in VARIANTS:
        raise DomainError(f"variant must be one of {VARIANTS}")
    A = int(A)
    if A < 1:
        raise DomainError("truncation A must be >= 1")
    if variant == "combined":
        mp = _series(points, exponents, "plus", A, support)
        mm = _series(points, exponents, "minus", A, support)
        return MomentValue((mp.value + mm.value) / 2, A, (mp.tail_bound + mm.tail_bound) / 2,
                           "combined", support)
    return _series(points, exponents, variant, A, support)


def theoretical_moment(request: MomentRequest, A: int = config.DEFAULT_TRUNCATION,
                       support: int | None = None) -> MomentValue:
    """E prod F_X(t_i)^{n_i} for the request's variant, truncated at a <= A."""
    return moment_series(request.points, request.exponents, request.variant, A, support)


def increment_fourth_moment_exact(N: int, s: float, t: float) -> float:
    """Exact E|F_{X,N}(t) - F_{X,N}(s)|^4 with X_{-1} random.

    Writing the increment as (2 pi)^{-1} |sum_{0<|n|<=N} X_n c_n| with
    c_n = (e(-ns) - e(-nt))/n, its square is sum_m X_m g(m) with
    g(m) = sum_{n1 n2 = m} c_{n1} c_{n2}. E X_{m1} X_{m2} is 1 exactly when
    m1 m2 is a positive square, i.e. when m1, m2 share sign and squarefree
    part, so the fourth moment is the sum over those classes of |sum g|^2.
    """
    N = int(N)
    if N < 1:
        raise DomainError("N must be >= 1")
    if N > config.EXACT_FOURTH_MOMENT_N_MAX:
        raise CapacityError(f"N={N} exceeds exact fourth-moment guard 512")
    if not (0 <= s <= 1 and 0 <= t <= 1) or s > t:
        raise DomainError("need 0 <= s <= t <= 1")
    if s == t:
        return 0.0
    n = np.concatenate([-np.arange(N, 0, -1), np.arange(1, N + 1)])
    phase_s = (n * s) % 1.0
    phase_t = (n * t) % 1.0
    c = (np.exp(-2j * np.pi * phase_s) - np.exp(-2j * np.pi * phase_t)) / n
    m = np.multiply.outer(n, n).ravel()
    w = np.multiply.outer(c, c).ravel()
    M = N * N
    size = 2 * M + 1
    g = (np.bincount(m + M, weights=w.real, minlength=size)
         + 1j * np.bincount(m + M, weights=w.imag, minlength=size))
    idx = np.flatnonzero(g)
    vals = g[idx]
    mm = idx - M
    core = np.abs(mm)
    for q in _base_sieve(N):
        q2 = int(q) * int(q)
        hit = core % q2 == 0
        while hit.any():
            core[hit] //= q2
            hit = core % q2 == 0
    key = np.sign(mm) * core
    _, cls = np.unique(key, return_inverse=True)
    G = (np.bincount(cls, weights=vals.real) + 1j * np.bincount(cls, weights=vals.imag))
    return float(math.fsum(np.abs(G) ** 2) / (2 * np.pi) ** 4)


def _class_for(variant: str) -> int | None:
    return {"plus": 1, "minus": 3, "combined": None}[variant]


def empirical_moment(request: MomentRequest, Q: int, mode: str = "exact",
                     Z: float | None = None) -> float:
    """Average of prod f_p(t_i)^{n_i} over primes p in [Q, 2Q].

    ``plus`` restricts to p = 1 mod 4, ``minus`` to p = 3 mod 4 and
    ``combined`` averages over all primes of the window. ``mode='polya'``
    substitutes the expansion truncated at Z.
    """
    if Q < 100:
        raise DomainError("Q must be >= 100")
    primes = prime_window(Q, _class_for(request.variant))
    vals = path_values(primes, request.points, mode, Z)
    prod = np.prod(vals ** np.asarray(request.exponents)[None, :], axis=1)
    return float(np.mean(prod))


@dataclass(frozen=True)
class MomentGap:
    Q: int
    empirical: float
    theoretical: MomentValue
    gap: float

    def __float__(self):
        return self.gap

    def to_dict(self) -> dict:
        out = asdict(self)
        out["theoretical"] = self.theoretical.to_dict()
        return out


def moment_gap(request: MomentRequest, Q: int, A: int = config.DEFAULT_TRUNCATION,
               mode: str = "exact", Z: float | None = None) -> MomentGap:
    """|empirical - theoretical| for one Q, with the theoretical tail bound attached."""
    emp = empirical_moment(request, Q, mode, Z)
    theo = theoretical_moment(request, A)
    return MomentGap(int(Q), emp, theo, abs(emp - theo.value))


def moment_gap_sweep(request: MomentRequest, Qs, A: int = config.DEFAULT_TRUNCATION,
                     mode: str = "exact", Z: float | None = None) -> list[MomentGap]:
    """moment_gap over several Q sharing one theoretical evaluation."""
    theo = theoretical_moment(request, A)
    out = []
    for Q in Qs:
        emp = empirical_moment(request, Q, mode, Z)
        out.append(MomentGap(int(Q), emp, theo, abs(emp - theo.value)))
    return out


__all__ = [
    "MomentGap",
    "MomentRequest",
    "MomentValue",
    "b_coefficient",
    "divisor_function",
    "empirical_moment",
    "increment_fourth_moment_exact",
    "moment_gap",
    "moment_gap_sweep",
    "moment_series",
    "square_divisor_sum",
    "square_divisor_tail",
    "theoretical_moment",
]
