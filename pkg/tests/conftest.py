"""Shared independent oracles.

Nothing here calls into the package's own number theory: residues come from
squaring, primes from trial division, so agreement is a genuine cross-check.
"""

import math

import numpy as np
import pytest


def is_prime_td(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def primes_td(lo: int, hi: int) -> list[int]:
    return [n for n in range(max(lo, 2), hi + 1) if is_prime_td(n)]


def chi_by_squares(p: int) -> list[int]:
    """chi_p(j) for j = 0..p-1 from the set of nonzero squares mod p."""
    squares = {(x * x) % p for x in range(1, p)}
    return [0] + [1 if j in squares else -1 for j in range(1, p)]


def polygon_vertices(p: int) -> np.ndarray:
    chi = chi_by_squares(p)
    s = np.concatenate([[0], np.cumsum(chi[1:]), [sum(chi)]])
    return s / math.sqrt(p)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def supnorm_primes_1e5():
    """Sup-norm sample over primes in [10^5, 2*10^5]; about 40 s, shared across modules."""
    from legendre_paths import supnorm_samples_primes

    return supnorm_samples_primes(10**5)


# ---------------------------------------------------------------- acceptance report

CRITERIA = {}  # number -> (title, detail)
_OUTCOMES = {}  # number -> "PASS" / "FAIL"


def record_criterion(number: int, title: str, detail: str) -> None:
    CRITERIA[number] = (title, detail)
    print(f"[criterion {number:2d}] {title}: {detail}")


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance.py" not in report.nodeid or not name.startswith("test_criterion_"):
        return
    number = int(name.split("_")[2])
    if report.failed:
        _OUTCOMES[number] = "FAIL"
    elif report.when == "call" and report.passed:
        _OUTCOMES.setdefault(number, "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_OUTCOMES):
        title, detail = CRITERIA.get(number, ("(no result recorded)", ""))
        terminalreporter.write_line(f"{_OUTCOMES[number]}  {number:2d}. {title} -- {detail}")
