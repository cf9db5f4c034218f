"""Compiled kernels for divisor-lattice sums over squares.

For each a <= A the divisors of a^2 are laid out in mixed radix over the
prime exponents of a^2, so the Dirichlet convolution of n functions
restricted to divisors of a^2 becomes a sequence of box-limited lattice
convolutions.
"""

import numpy as np
from numba import njit

_MAX_PRIMES = 16  # a <= 10^12 has at most 11 distinct prime factors


@njit(cache=True)
def _psi(kind, t, b):
    x = b * t
    x -= np.floor(x)
    if kind == 0:
        return np.sin(2.0 * np.pi * x)
    return 1.0 - np.cos(2.0 * np.pi * x)


@njit(cache=True)
def square_coefficients(A, cap, spf, kinds, ts, fgroup):
    """B(a^2) for a = 1..A (index 0 unused).

    ``kinds[g]``/``ts[g]`` describe function g (0: sin(2 pi b t),
    1: 1 - cos(2 pi b t)); ``fgroup[j]`` is the function used by the j-th
    of the n ordered factors. Divisors larger than ``cap`` contribute 0.
    """
    n = fgroup.size
    ng = kinds.size
    out = np.zeros(A + 1)
    pr = np.zeros(_MAX_PRIMES, dtype=np.int64)
    ex = np.zeros(_MAX_PRIMES, dtype=np.int64)
    stride = np.zeros(_MAX_PRIMES, dtype=np.int64)
    cv = np.zeros(_MAX_PRIMES, dtype=np.int64)
    cw = np.zeros(_MAX_PRIMES, dtype=np.int64)
    for a in range(1, A + 1):
        m = a
        r = 0
        while m > 1:
            q = spf[m]
            e = 0
            while m % q == 0:
                m //= q
                e += 1
            pr[r] = q
            ex[r] = 2 * e
            r += 1
        L = 1
        for i in range(r):
            stride[i] = L
            L *= ex[i] + 1
        D = np.empty(L, dtype=np.int64)
        D[0] = 1
        for i in range(r):
            for idx in range(stride[i], stride[i] * (ex[i] + 1)):
                D[idx] = D[idx - stride[i]] * pr[i]
        psi = np.zeros((ng, L))
        for g in range(ng):
            for idx in range(L):
                if D[idx] <= cap:
                    psi[g, idx] = _psi(kinds[g], ts[g], D[idx])
        cur = psi[fgroup[n - 1]].copy()
        for j in range(n - 2, 0, -1):
            pg = psi[fgroup[j]]
            new = np.zeros(L)
            for v in range(L):
                for i in range(r):
                    cv[i] = (v // stride[i]) % (ex[i] + 1)
                    cw[i] = 0
                w = 0
                acc = 0.0
                while True:
                    acc += pg[w] * cur[v - w]
                    i = 0
                    while i < r:
                        if cw[i] < cv[i]:
                            cw[i] += 1
                            w += stride[i]
                            break
                        w -= cw[i] * stride[i]
                        cw[i] = 0
                        i += 1
                    if i == r:
                        break
                new[v] = acc
            cur = new
        top = L - 1
        if n == 1:
            out[a] = cur[top]
        else:
            pg = psi[fgroup[0]]
            acc = 0.0
            for w in range(L):
                acc += pg[w] * cur[top - w]
            out[a] = acc
    return out


@njit(cache=True)
def square_divisor_counts(A, n, spf, binom):
    """d_n(a^2) for a = 1..A; ``binom[k]`` must hold C(k + n - 1, n - 1)."""
    out = np.zeros(A + 1)
    for a in range(1, A + 1):
        m = a
        acc = 1.0
        while m > 1:
            q = spf[m]
            e = 0
            while m % q == 0:
                m //= q
                e += 1
            acc *= binom[2 * e]
        out[a] = acc
    return out
