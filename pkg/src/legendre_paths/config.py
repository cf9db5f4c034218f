"""Capacity guards and calibrated envelope constants.

The envelope constants bound quantities whose true implied constants are
either unstated or non-effective. They were fixed once from calibration
runs (see ``demos/``) and are not tuned per test.
"""

# capacity guards
SIEVE_MAX = 2**40
SPF_MAX = 2**31
SYMBOL_TABLE_MAX = 2**26
GAUSS_SUM_MAX = 10**6
SIGN_CUTOFF_MAX = 10**8
FACTOR_MAX = 10**12
FOURIER_H_MAX = 10**6
EXACT_FOURTH_MOMENT_N_MAX = 512
B_COEFFICIENT_A_MAX = 10**9

# calibrated envelope constants
POLYA_C0 = 10.0              # |polya - path| <= C0 (1/sqrt p + sqrt p log p / Z)
MODEL_TIGHTNESS_C = 50.0     # E|F_N(t) - F_N(s)|^4 <= C |t - s|^(3/2)
PRIME_INCREMENT_C = 10.0     # mean |f_p(t) - f_p(s)|^4 <= C |t - s|^(1 + beta)
PRIME_INCREMENT_BETA = 1e-3
FOURIER_ENVELOPE = 5.0       # |FT_p(h) - leading term| <= 5 |h| / sqrt p

# default series truncation for theoretical moments
DEFAULT_TRUNCATION = 10**6

# fixed chunk size for Monte Carlo and prime-family reductions
CHUNK_SIZE = 1024
