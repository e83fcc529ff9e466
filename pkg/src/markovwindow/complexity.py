"""Instance sample-complexity bounds for testing the initial distribution.

Given a reversible chain P and two candidates mu, mu', the number of i.i.d.
observations after t steps needed to tell them apart scales as 1/Delta(t)
with Delta(t) = ||mu P^t - mu' P^t||_pi^2.  This module provides:

- the explicit upper threshold ceil(16 eps^{-5/2} ln(1/delta) / Delta(t)) at
  which the likelihood-ratio test has error below delta, under the pairwise
  eps-bounded likelihood-ratio hypothesis;
- the matching impossibility threshold floor(8 eps delta^2 / Delta(t)) below
  which every test errs with probability at least 1/2 - delta;
- a hypothesis-free upper threshold via centered distributions;
- constructors for the extreme pairs pi +- alpha u_[2] / pi +- alpha u_[d]
  whose complexities bracket the statistical window;
- the window ratio and the crossing time at which a fixed sample size stops
  sufficing.

All logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .chain import Distribution, TransitionMatrix
from .errors import DimensionMismatch, Infeasible, InvalidParameter, UndefinedWindow
from .geometry import DEAD_MODE_TOL, coefficient_diff, decay_distance_sq
from .spectral import SpectralDecomposition, spectral_decomposition

DEFAULT_ETA = 0.75

# Relative slack when deciding that n * Delta(t) has crossed a threshold, so
# exact boundary cases (n * Delta(t) mathematically equal to the threshold)
# count as crossed instead of depending on rounding direction.
CROSSING_SLACK = 1e-12


def bounded_lr_epsilon(mu: Distribution, mu_prime: Distribution) -> float:
    """Largest eps with eps <= mu_x / mu'_x <= 1/eps for all x.

    Equals min_x min(mu_x/mu'_x, mu'_x/mu_x); 0 if the supports differ.
    States where both masses are zero impose no constraint.
    """
    if mu.d != mu_prime.d:
        raise DimensionMismatch(f"distributions have {mu.d} and {mu_prime.d} states")
    p, q = mu.mass, mu_prime.mass
    if np.any((p == 0) != (q == 0)):
        return 0.0
    on = p > 0
    if not np.any(on):
        return 1.0
    ratios = p[on] / q[on]
    return float(min(ratios.min(), 1.0 / ratios.max()))


def pairwise_epsilon(mu: Distribution, mu_prime: Distribution, pi: Distribution) -> float:
    """Smallest bounded-likelihood-ratio eps over the three pairs of {mu, mu', pi}."""
    return min(
        bounded_lr_epsilon(mu, mu_prime),
        bounded_lr_epsilon(mu, pi),
        bounded_lr_epsilon(mu_prime, pi),
    )


@dataclass(frozen=True, eq=False)
class TestingInstance:
    """A testing problem: which of mu, mu' was the initial distribution,
    observed through t steps of the reversible chain."""

    __test__ = False  # not a pytest class, despite the name

    chain: TransitionMatrix
    mu: Distribution
    mu_prime: Distribution
    t: int

    def __post_init__(self):
        if self.mu.d != self.chain.d or self.mu_prime.d != self.chain.d:
            raise DimensionMismatch("distribution / chain size mismatch")
        if self.t < 0 or self.t != int(self.t):
            raise InvalidParameter(f"t must be a nonnegative integer, got {self.t!r}")
        # Validates reversibility eagerly and primes the cache.
        self.__dict__["decomposition"] = spectral_decomposition(self.chain)

    @cached_property
    def decomposition(self) -> SpectralDecomposition:
        return spectral_decomposition(self.chain)

    @property
    def stationary(self) -> Distribution:
        return self.decomposition.stationary

    def delta(self, t: int | None = None) -> float:
        """Decay Delta(t) = ||mu P^t - mu' P^t||_pi^2 (defaults to this t)."""
        return decay_distance_sq(
            self.mu, self.mu_prime, self.decomposition, self.t if t is None else t
        )


def _threshold(numerator: float, delta_t: float, rounding) -> int | float:
    if delta_t == 0.0:
        return math.inf
    ratio = numerator / delta_t
    if math.isinf(ratio):
        return math.inf
    return rounding(ratio)


def sample_upper_bound(inst: TestingInstance, epsilon: float, delta: float) -> int | float:
    """Samples at which the likelihood-ratio test has error below delta:
    ceil(16 eps^{-5/2} ln(1/delta) / Delta(t)); inf if Delta(t) = 0.

    Requires the pairwise eps-bounded hypothesis on (mu, mu', pi), which the
    caller can verify via pairwise_epsilon.
    """
    if not 0.0 < epsilon < 1.0:
        raise InvalidParameter(f"epsilon must lie in (0, 1), got {epsilon!r}")
    if not 0.0 < delta < 1.0:
        raise InvalidParameter(f"delta must lie in (0, 1), got {delta!r}")
    C = 16.0 * epsilon**-2.5 * math.log(1.0 / delta)
    return _threshold(C, inst.delta(), math.ceil)


def sample_lower_bound(inst: TestingInstance, epsilon: float, delta: float) -> int | float:
    """Samples below which every test errs with probability >= 1/2 - delta:
    floor(8 eps delta^2 / Delta(t)); inf if Delta(t) = 0."""
    if not 0.0 < epsilon < 1.0:
        raise InvalidParameter(f"epsilon must lie in (0, 1), got {epsilon!r}")
    if not 0.0 < delta < 1.0:
        raise InvalidParameter(f"delta must lie in (0, 1), got {delta!r}")
    c = 8.0 * epsilon * delta**2
    return _threshold(c, inst.delta(), math.floor)


def general_upper_bound(
    inst: TestingInstance, delta: float, eta: float = DEFAULT_ETA
) -> int | float:
    """Upper threshold without any bounded-likelihood-ratio hypothesis.

    Centering both candidates toward beta = (mu + mu' + pi)/3 with weight eta
    yields an (eta/3)-bounded pair whose pi-distance shrinks by (1 - eta), so
    the error of the likelihood-ratio test is below delta once
    n >= 16 (eta/3)^{-5/2} (1 - eta)^{-1} ln(1/delta) / Delta(t).
    """
    if not 0.0 < delta < 1.0:
        raise InvalidParameter(f"delta must lie in (0, 1), got {delta!r}")
    if not 0.0 < eta < 1.0:
        raise InvalidParameter(f"eta must lie in (0, 1), got {eta!r}")
    coeff = 16.0 * (eta / 3.0) ** -2.5 / (1.0 - eta)
    return _threshold(coeff * math.log(1.0 / delta), inst.delta(), math.ceil)


def center_pair(
    mu: Distribution, mu_prime: Distribution, pi: Distribution, eta: float
) -> tuple[Distribution, Distribution]:
    """Centered versions pulling both candidates toward beta = (mu+mu'+pi)/3.

    Returns ((1-eta) mu + eta beta, (1-eta) mu' + eta beta).  The centered
    pair has an (eta/3)-bounded likelihood ratio, each centered distribution
    dominates (eta/3) pi entrywise, and every pi-distance between evolved
    centered distributions is exactly (1-eta) times the uncentered one.
    """
    if not 0.0 < eta < 1.0:
        raise InvalidParameter(f"eta must lie in (0, 1), got {eta!r}")
    if mu.d != mu_prime.d or mu.d != pi.d:
        raise DimensionMismatch("distribution size mismatch")
    beta = (mu.mass + mu_prime.mass + pi.mass) / 3.0
    centered = Distribution((1.0 - eta) * mu.mass + eta * beta)
    centered_prime = Distribution((1.0 - eta) * mu_prime.mass + eta * beta)
    return centered, centered_prime


@dataclass(frozen=True, eq=False)
class ExtremePairs:
    """The two aligned pairs bracketing the statistical window.

    (mu, mu_prime) = pi +- alpha u_[2] decays at the slowest rate lambda_[2];
    (gamma, gamma_prime) = pi +- alpha u_[d] decays at the fastest rate
    lambda_[d].  Both share the same alpha, so both have the same initial
    difficulty Delta(0) = 4 alpha^2.
    """

    mu: Distribution
    mu_prime: Distribution
    gamma: Distribution
    gamma_prime: Distribution
    alpha: float
    lambda_2: float
    lambda_d: float
    multiplicity_2: int
    multiplicity_d: int

    @property
    def pair_a(self) -> tuple[Distribution, Distribution]:
        return self.mu, self.mu_prime

    @property
    def pair_b(self) -> tuple[Distribution, Distribution]:
        return self.gamma, self.gamma_prime


def _alignment_limit(u: np.ndarray, pi: np.ndarray) -> float:
    """Largest alpha keeping pi +- alpha u nonnegative."""
    scale = float(np.max(np.abs(u)))
    active = np.abs(u) > 1e-14 * scale
    return float(np.min(pi[active] / np.abs(u[active])))


def extreme_pairs(P: TransitionMatrix, epsilon_target: float) -> ExtremePairs:
    """Aligned pairs pi +- alpha u_[2] and pi +- alpha u_[d], feasibly scaled.

    alpha is the largest value (times a 0.999 safety factor) such that all
    four perturbed vectors are distributions and both triples (pair, pi) are
    pairwise epsilon_target-bounded.  For eigenvalues with multiplicity the
    deterministic eigensolver's basis vector is used; multiplicities are
    reported alongside.
    """
    if epsilon_target >= 1.0:
        raise Infeasible(f"epsilon_target must be < 1, got {epsilon_target!r}")
    S = spectral_decomposition(P)
    if S.d < 3:
        raise InvalidParameter("extreme pairs need d >= 3")
    pi = S.stationary.mass
    u2 = S.left_by_abs_rank(2)
    ud = S.left_by_abs_rank(S.d)

    # The binding ratio constraint is within-pair: (1 + rho)/(1 - rho) <= 1/eps
    # at rho = alpha |u_x| / pi_x, i.e. rho <= (1 - eps)/(1 + eps); the
    # pair-vs-pi constraint rho <= 1 - eps and nonnegativity rho <= 1 are weaker.
    factor = 1.0
    if epsilon_target > 0.0:
        factor = (1.0 - epsilon_target) / (1.0 + epsilon_target)
    alpha = 0.999 * factor * min(_alignment_limit(u2, pi), _alignment_limit(ud, pi))
    if alpha <= 0.0:
        raise Infeasible("no positive alpha satisfies the constraints")

    return ExtremePairs(
        mu=Distribution(pi + alpha * u2),
        mu_prime=Distribution(pi - alpha * u2),
        gamma=Distribution(pi + alpha * ud),
        gamma_prime=Distribution(pi - alpha * ud),
        alpha=alpha,
        lambda_2=S.eigenvalue_by_abs_rank(2),
        lambda_d=S.eigenvalue_by_abs_rank(S.d),
        multiplicity_2=S.abs_multiplicity(2),
        multiplicity_d=S.abs_multiplicity(S.d),
    )


def statistical_window(
    P: TransitionMatrix,
    pair_a: tuple[Distribution, Distribution],
    pair_b: tuple[Distribution, Distribution],
    t: int,
) -> float:
    """Complexity ratio of pair A over pair B at time t, normalized to 1 at t=0.

    Computed as (Delta_A(t) / Delta_B(t)) * (Delta_B(0) / Delta_A(0)); since
    sample complexity scales as 1/Delta, this is the factor by which testing
    pair B has become harder relative to pair A.  For the extreme pairs it
    equals (lambda_[2] / lambda_[d])^{2t}.  Returns inf when pair B has fully
    decayed (Delta_B(t) = 0) while pair A has not.
    """
    S = spectral_decomposition(P)
    da_0 = decay_distance_sq(pair_a[0], pair_a[1], S, 0)
    db_0 = decay_distance_sq(pair_b[0], pair_b[1], S, 0)
    if da_0 == 0.0 or db_0 == 0.0:
        raise InvalidParameter("both pairs must differ at t = 0")
    da_t = decay_distance_sq(pair_a[0], pair_a[1], S, t)
    db_t = decay_distance_sq(pair_b[0], pair_b[1], S, t)
    if db_t == 0.0:
        if da_t == 0.0:
            raise UndefinedWindow(f"both pairs have fully decayed at t = {t}")
        return math.inf
    return (da_t * db_0) / (db_t * da_0)


def statistical_time(
    P: TransitionMatrix,
    mu: Distribution,
    mu_prime: Distribution,
    n: int,
    threshold: float,
) -> int | float:
    """Smallest t at which n * Delta(t) crosses below the threshold.

    This is the time at which a sample of size n stops sufficing at the
    impossibility scale set by the threshold (a boundary hit counts as
    crossed).  Returns inf when the pair keeps a component on an eigenvalue
    of absolute value 1, so n * Delta(t) never drops below the threshold.
    """
    if n < 1 or n != int(n):
        raise InvalidParameter(f"n must be a positive integer, got {n!r}")
    if not threshold > 0.0:
        raise InvalidParameter(f"threshold must be positive, got {threshold!r}")
    S = spectral_decomposition(P)
    bar = threshold * (1.0 + CROSSING_SLACK) / n

    diff = coefficient_diff(mu, mu_prime, S)
    coeffs = diff[1:] ** 2
    lam_abs = np.abs(S.eigenvalues[1:])
    delta_0 = float(coeffs.sum())
    if delta_0 == 0.0:
        raise InvalidParameter("mu and mu_prime must differ at t = 0")
    if delta_0 <= bar:
        return 0

    permanent = float(coeffs[lam_abs == 1.0].sum())
    if permanent > bar:
        return math.inf
    decaying = (lam_abs < 1.0) & (lam_abs >= DEAD_MODE_TOL)
    if not np.any(decaying):
        # Delta(t) = permanent for every t >= 1.
        return 1
    residual_0 = float(coeffs[decaying].sum())
    lam_top = float(lam_abs[decaying].max())
    target = bar - permanent
    if target <= 0.0:
        # Permanent mass sits exactly at the bar; the strictly positive
        # residual keeps n * Delta(t) above it forever.
        return math.inf
    if residual_0 <= target:
        t_cap = 1
    else:
        t_cap = math.ceil(math.log(residual_0 / target) / (2.0 * math.log(1.0 / lam_top))) + 2
    for t in range(1, t_cap + 1):
        if n * decay_distance_sq(mu, mu_prime, S, t) <= threshold * (1.0 + CROSSING_SLACK):
            return t
    return math.inf


@dataclass(frozen=True)
class ComplexityReport:
    """Per-time summary of the instance difficulty and sample thresholds."""

    delta_t: float
    epsilon: float | None
    n_upper: int | float
    n_lower: int | float
    n_star_scale: float
    t: int
    eigen_summary: dict

    def to_json_dict(self) -> dict:
        return {
            "delta_t": self.delta_t,
            "epsilon": self.epsilon,
            "n_upper": self.n_upper,
            "n_lower": self.n_lower,
            "n_star_scale": self.n_star_scale,
            "t": self.t,
            "eigen_summary": self.eigen_summary,
        }


def complexity_report(
    inst: TestingInstance, epsilon: float | None, delta: float, eta: float = DEFAULT_ETA
) -> ComplexityReport:
    """Bundle Delta(t), both thresholds, and the 1/Delta(t) scale.

    epsilon = None measures the pairwise bounded-likelihood-ratio parameter of
    (mu, mu', pi); an explicit value is used as given.  When no usable
    parameter exists (support mismatch gives 0), the report carries
    epsilon = None, the upper threshold comes from the hypothesis-free
    centered bound at the given eta, and the lower threshold is the vacuous
    0.  All three thresholds are inf exactly when Delta(t) = 0.
    """
    if epsilon is None:
        epsilon = pairwise_epsilon(inst.mu, inst.mu_prime, inst.stationary)
    delta_t = inst.delta()
    S = inst.decomposition
    summary = {
        "d": S.d,
        "lambda_abs_2": abs(S.eigenvalue_by_abs_rank(2)),
        "lambda_abs_d": abs(S.eigenvalue_by_abs_rank(S.d)),
        "multiplicity_2": S.abs_multiplicity(2),
        "multiplicity_d": S.abs_multiplicity(S.d),
    }
    if delta_t == 0.0:
        return ComplexityReport(
            delta_t=0.0,
            epsilon=epsilon if 0.0 < epsilon <= 1.0 else None,
            n_upper=math.inf,
            n_lower=math.inf,
            n_star_scale=math.inf,
            t=inst.t,
            eigen_summary=summary,
        )
    if not 0.0 < epsilon < 1.0:
        return ComplexityReport(
            delta_t=delta_t,
            epsilon=None,
            n_upper=general_upper_bound(inst, delta, eta),
            n_lower=0,
            n_star_scale=1.0 / delta_t,
            t=inst.t,
            eigen_summary=summary,
        )
    return ComplexityReport(
        delta_t=delta_t,
        epsilon=epsilon,
        n_upper=sample_upper_bound(inst, epsilon, delta),
        n_lower=sample_lower_bound(inst, epsilon, delta),
        n_star_scale=1.0 / delta_t,
        t=inst.t,
        eigen_summary=summary,
    )
