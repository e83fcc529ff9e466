"""Divergences between discrete distributions and exact product-space oracles.

All logarithms are natural.  The product oracles enumerate every outcome
tuple of an n-fold product distribution (lexicographic order) and accumulate
probabilities with compensated summation, so they serve as exact references
for testing-error identities at small scale.
"""

from __future__ import annotations

import math

import numpy as np

from .chain import Distribution
from .errors import BudgetExceeded, DimensionMismatch, InvalidParameter

ENUMERATION_BUDGET = 10**7


def enumeration_feasible(d: int, n: int) -> bool:
    """Whether d^n outcomes fit the enumeration budget.

    Screens in log space first so astronomically large powers are never
    materialized; the near-boundary region is decided exactly.
    """
    if n * math.log(d) > math.log(ENUMERATION_BUDGET) + 1.0:
        return False
    return d**n <= ENUMERATION_BUDGET


def _paired(mu: Distribution, mu_prime: Distribution):
    if mu.d != mu_prime.d:
        raise DimensionMismatch(f"distributions have {mu.d} and {mu_prime.d} states")
    return mu.mass, mu_prime.mass


def total_variation(mu: Distribution, mu_prime: Distribution) -> float:
    """d_TV = (1/2) sum |mu_x - mu'_x|, in [0, 1]."""
    p, q = _paired(mu, mu_prime)
    return 0.5 * float(np.sum(np.abs(p - q)))


def kl_divergence(mu: Distribution, mu_prime: Distribution) -> float:
    """KL = sum mu_x log(mu_x / mu'_x); 0 log(0/q) = 0; +inf off support."""
    p, q = _paired(mu, mu_prime)
    on = p > 0
    if np.any(q[on] == 0):
        return math.inf
    return float(np.sum(p[on] * np.log(p[on] / q[on])))


def chi_square(mu: Distribution, mu_prime: Distribution) -> float:
    """Chi-square divergence sum mu'_x (mu_x / mu'_x - 1)^2; +inf off support."""
    p, q = _paired(mu, mu_prime)
    if np.any((q == 0) & (p > 0)):
        return math.inf
    on = q > 0
    return float(np.sum((p[on] - q[on]) ** 2 / q[on]))


def hellinger_sq(mu: Distribution, mu_prime: Distribution) -> float:
    """Squared Hellinger distance sum (sqrt(mu_x) - sqrt(mu'_x))^2, in [0, 2]."""
    p, q = _paired(mu, mu_prime)
    return float(np.sum((np.sqrt(p) - np.sqrt(q)) ** 2))


def _fsum(arr: np.ndarray) -> float:
    """Exact compensated sum of a float array (chunked math.fsum)."""
    chunk = 1 << 16
    if arr.size <= chunk:
        return math.fsum(arr.tolist())
    partials = [math.fsum(arr[i : i + chunk].tolist()) for i in range(0, arr.size, chunk)]
    return math.fsum(partials)


def _product_probabilities(mu: Distribution, mu_prime: Distribution, n: int):
    """Outcome probabilities of the two n-fold products, lexicographic order.

    Index sum_i x_i d^{n-i} corresponds to the tuple (x_1, ..., x_n), so the
    flattened iterated outer product enumerates outcomes lexicographically.
    """
    p, q = _paired(mu, mu_prime)
    if n < 1 or n != int(n):
        raise InvalidParameter(f"n must be a positive integer, got {n!r}")
    if not enumeration_feasible(mu.d, int(n)):
        raise BudgetExceeded(
            f"{mu.d}^{int(n)} outcomes exceed the enumeration budget {ENUMERATION_BUDGET}"
        )
    prod_p, prod_q = p.copy(), q.copy()
    for _ in range(int(n) - 1):
        prod_p = np.multiply.outer(prod_p, p).ravel()
        prod_q = np.multiply.outer(prod_q, q).ravel()
    return prod_p, prod_q


def exact_product_tv(mu: Distribution, mu_prime: Distribution, n: int) -> float:
    """Exact d_TV(mu^{(x) n}, mu'^{(x) n}) by full outcome enumeration.

    Requires d^n within the 1e7 outcome budget (BudgetExceeded otherwise).
    """
    prod_p, prod_q = _product_probabilities(mu, mu_prime, n)
    return 0.5 * _fsum(np.abs(prod_p - prod_q))


def exact_lr_error(mu: Distribution, mu_prime: Distribution, n: int) -> float:
    """Exact maximum error probability of the likelihood-ratio rule on n draws.

    The rule outputs mu on an outcome iff its probability under mu^{(x) n}
    strictly exceeds that under mu'^{(x) n} (ties go to mu', matching the
    sign-of-statistic rule with L_n = 0 resolved to mu').  Returns
    max(P_mu(output mu'), P_mu'(output mu)).
    """
    prod_p, prod_q = _product_probabilities(mu, mu_prime, n)
    decide_mu = prod_p > prod_q
    err_under_mu = _fsum(prod_p[~decide_mu])
    err_under_mu_prime = _fsum(prod_q[decide_mu])
    return max(err_under_mu, err_under_mu_prime)
