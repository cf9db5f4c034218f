"""Legendre paths of quadratic character sums and their random multiplicative model."""

__version__ = "0.1.0"

from .errors import CapacityError, DomainError, InvariantError, LegendrePathsError
from .number_theory import (
    PrimeRecord,
    SymbolTable,
    divisor_function,
    factorize,
    gauss_sum,
    gauss_sum_closed_form,
    is_odd_prime,
    legendre_symbol,
    sieve_primes,
    smallest_prime_factor_table,
    symbol_table,
)
from .legendre_path import (
    LegendrePath,
    PolyaApproximation,
    build_path,
    eval_path,
    fourier_coefficient,
    fourier_leading_term,
    polya_approx,
    sup_norm,
    symmetry_defect,
)
from .random_model import (
    MCEstimate,
    ModelPath,
    RademacherSample,
    eval_multiplicative,
    eval_partial_series,
    increment_fourth_moment_mc,
    joint_moment_mc,
    multiplicative_values,
    sample_model_path,
    sample_signs,
)
from .moments import (
    MomentGap,
    MomentRequest,
    MomentValue,
    b_coefficient,
    empirical_moment,
    increment_fourth_moment_exact,
    moment_gap,
    moment_gap_sweep,
    moment_series,
    theoretical_moment,
)
from .distribution import (
    EmpiricalSample,
    ModelFamily,
    PrimeFamily,
    finite_dim_samples,
    ks_distance,
    prime_increment_moment,
    supnorm_samples_model,
    supnorm_samples_primes,
)
