"""Calibration runs behind the envelope constants in ``legendre_paths.config``.

Prints the observed ratio for each calibrated bound so the margin to the
fixed constant is visible. Takes a couple of minutes on one core.
"""

import math

import numpy as np

from legendre_paths import (
    MomentRequest,
    build_path,
    eval_path,
    fourier_coefficient,
    fourier_leading_term,
    increment_fourth_moment_mc,
    ks_distance,
    moment_gap_sweep,
    polya_approx,
    prime_increment_moment,
    sieve_primes,
    supnorm_samples_model,
    supnorm_samples_primes,
)
from legendre_paths import config


def polya():
    rng = np.random.default_rng(3)
    primes = rng.choice(sieve_primes(1000, 10**4), 20, replace=False).tolist()
    t = np.linspace(0, 1, 100)
    worst = 0.0
    for p in primes:
        exact = eval_path(build_path(p), t)
        for Z in (p, 4 * p):
            err = np.max(np.abs(polya_approx(p, t, Z) - exact))
            worst = max(worst, err / (1 / math.sqrt(p) + math.sqrt(p) * math.log(p) / Z))
    print(f"polya: max err / (1/sqrt p + sqrt p log p / Z) = {worst:.3f}  (C0 = {config.POLYA_C0})")


def tightness():
    pairs = [(0.1, 0.1001), (0.2, 0.201), (0.3, 0.31), (0.6, 0.62), (0.4, 0.45),
             (0.05, 0.15), (0.5, 0.75), (0.25, 0.75), (0.0, 0.5), (0.1, 0.9)]
    for s, t in pairs:
        est = increment_fourth_moment_mc(10**4, s, t, 2000, seed=2024)
        print(f"tightness: ({s}, {t})  E|dF|^4 / |t-s|^1.5 = {est.value / abs(t - s) ** 1.5:.3f}"
              f"  (C = {config.MODEL_TIGHTNESS_C})")


def prime_increments():
    for s, t in ((0.3, 0.35), (0.1, 0.2), (0.3, 0.4), (0.2, 0.5), (0.25, 0.75)):
        r = prime_increment_moment(10**4, s, t, 4) / (t - s) ** (1 + config.PRIME_INCREMENT_BETA)
        print(f"prime increments: ({s}, {t}) ratio = {r:.3f}  (C = {config.PRIME_INCREMENT_C})")


def fourier():
    for p in (991, 997):
        path = build_path(p)
        worst = max(abs(fourier_coefficient(path, h) - fourier_leading_term(path, h)) * math.sqrt(p) / abs(h)
                    for h in range(-10, 11) if h)
        print(f"fourier: p = {p}  max |err| sqrt(p) / |h| = {worst:.4f}  (envelope = {config.FOURIER_ENVELOPE})")


def moments():
    for g in moment_gap_sweep(MomentRequest((0.3,), (2,)), [10**3, 10**4, 10**5], A=10**6):
        print(f"moment gap: Q = {g.Q}  gap = {g.gap:.5f}")


def supnorm_ks():
    primes = supnorm_samples_primes(10**5)
    model = supnorm_samples_model(2 * 10**4, 8 * 10**4 + 1, 5000, seed=2024)
    print(f"sup-norm KS (Q = 1e5 vs N = 2e4) = {ks_distance(primes, model):.4f}")


if __name__ == "__main__":
    polya()
    tightness()
    prime_increments()
    fourier()
    moments()
    supnorm_ks()
