"""Sampling from evolved distributions, the likelihood-ratio test, and
empirical error-probability estimation.

Sampling is multinomial via inverse-CDF lookup on a cumulative table and is
deterministic given (distribution, n, seed).  Error estimation runs
independent trials under each hypothesis with per-trial RNG substreams
derived by counter-based mixing of (seed, hypothesis, trial index), so the
result is independent of trial execution order and safe to parallelize.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .chain import Distribution, evolve
from .complexity import TestingInstance, pairwise_epsilon, sample_lower_bound
from .divergences import (
    enumeration_feasible,
    exact_lr_error,
    exact_product_tv,
    kl_divergence,
)
from .errors import DimensionMismatch, InvalidParameter

MAX_SEED = 2**64


class Decision(enum.Enum):
    MU = "mu"
    MU_PRIME = "mu_prime"


@dataclass(frozen=True, eq=False)
class Sample:
    """Histogram of n i.i.d. draws over d states."""

    counts: np.ndarray
    n: int

    def __post_init__(self):
        arr = np.array(self.counts, dtype=np.int64)
        arr.setflags(write=False)
        if arr.ndim != 1 or np.any(arr < 0):
            raise InvalidParameter("counts must be a vector of nonnegative integers")
        if int(arr.sum()) != self.n:
            raise InvalidParameter(f"counts sum to {int(arr.sum())}, expected n = {self.n}")
        object.__setattr__(self, "counts", arr)


@dataclass(frozen=True)
class ErrorEstimate:
    """Empirical error probabilities of the likelihood-ratio test."""

    err_mu: float
    err_mu_prime: float
    err_max: float
    trials: int
    ci_halfwidth: float
    n: int
    t: int
    seed: int

    def to_json_dict(self) -> dict:
        return {
            "err_mu": self.err_mu,
            "err_mu_prime": self.err_mu_prime,
            "err_max": self.err_max,
            "trials": self.trials,
            "ci_halfwidth": self.ci_halfwidth,
            "n": self.n,
            "t": self.t,
            "seed": self.seed,
        }


def _check_seed(seed: int) -> int:
    if not isinstance(seed, (int, np.integer)) or not 0 <= int(seed) < MAX_SEED:
        raise InvalidParameter(f"seed must be a 64-bit unsigned integer, got {seed!r}")
    return int(seed)


def draw_sample(mu_t: Distribution, n: int, seed: int) -> Sample:
    """n i.i.d. draws from mu_t, as a histogram.

    Inverse-CDF sampling: n uniforms are located in the cumulative table of
    mu_t.  Deterministic given (mu_t, n, seed).
    """
    if n < 1 or n != int(n):
        raise InvalidParameter(f"n must be a positive integer, got {n!r}")
    rng = np.random.default_rng(_check_seed(seed))
    cdf = np.cumsum(mu_t.mass)
    cdf[-1] = 1.0
    uniforms = rng.random(int(n))
    idx = np.searchsorted(cdf, uniforms, side="right")
    return Sample(counts=np.bincount(idx, minlength=mu_t.d), n=int(n))


def lr_statistic(s: Sample, mu_t: Distribution, mu_prime_t: Distribution) -> float:
    """Empirical log-likelihood ratio sum_x (counts_x / n) ln(mu_t,x / mu'_t,x).

    A counted state outside the support of one hypothesis forces the decision
    and is reported as an infinite statistic of the corresponding sign; a
    sample impossible under both hypotheses yields 0 (and thus the tie rule).
    """
    if s.counts.size != mu_t.d or mu_t.d != mu_prime_t.d:
        raise DimensionMismatch("sample / distribution size mismatch")
    return _lr_statistic_arrays(s.counts, s.n, mu_t.mass, mu_prime_t.mass)


def _lr_statistic_arrays(counts: np.ndarray, n: int, p: np.ndarray, q: np.ndarray) -> float:
    counted = counts > 0
    outside_p = bool(np.any(counted & (p == 0.0)))
    outside_q = bool(np.any(counted & (q == 0.0)))
    if outside_p and outside_q:
        return 0.0
    if outside_p:
        return -math.inf
    if outside_q:
        return math.inf
    on = counted
    return float(np.sum((counts[on] / n) * np.log(p[on] / q[on])))


def lr_test(s: Sample, mu_t: Distribution, mu_prime_t: Distribution) -> Decision:
    """Likelihood-ratio decision: MU iff the statistic is positive, MU_PRIME
    on ties (statistic <= 0)."""
    stat = lr_statistic(s, mu_t, mu_prime_t)
    return Decision.MU if stat > 0.0 else Decision.MU_PRIME


def _trial_seed(seed: int, hypothesis: int, trial: int) -> int:
    ss = np.random.SeedSequence((seed, hypothesis, trial))
    return int(ss.generate_state(1, np.uint64)[0])


def estimate_error(
    inst: TestingInstance, n: int, trials: int, seed: int, workers: int = 1
) -> ErrorEstimate:
    """Monte Carlo estimate of the maximum error of the likelihood-ratio test.

    Runs `trials` independent experiments under each hypothesis: the true
    initial distribution is evolved once, a size-n sample is drawn from the
    evolved distribution (equivalent in law to simulating trajectories), and
    the test is applied.  Deterministic given (inst, n, trials, seed),
    regardless of `workers`.
    """
    if trials < 100:
        raise InvalidParameter(f"need at least 100 trials, got {trials}")
    if n < 1 or n != int(n):
        raise InvalidParameter(f"n must be a positive integer, got {n!r}")
    seed = _check_seed(seed)
    workers = max(1, int(workers))

    mu_t = evolve(inst.mu, inst.chain, inst.t)
    mu_prime_t = evolve(inst.mu_prime, inst.chain, inst.t)
    cdfs = []
    for dist in (mu_t, mu_prime_t):
        cdf = np.cumsum(dist.mass)
        cdf[-1] = 1.0
        cdfs.append(cdf)
    p, q = mu_t.mass, mu_prime_t.mass
    d = mu_t.d

    def run_block(hypothesis: int, start: int, stop: int) -> int:
        wrong = Decision.MU_PRIME if hypothesis == 0 else Decision.MU
        cdf = cdfs[hypothesis]
        errors = 0
        for trial in range(start, stop):
            rng = np.random.default_rng(_trial_seed(seed, hypothesis, trial))
            idx = np.searchsorted(cdf, rng.random(int(n)), side="right")
            counts = np.bincount(idx, minlength=d)
            stat = _lr_statistic_arrays(counts, int(n), p, q)
            decision = Decision.MU if stat > 0.0 else Decision.MU_PRIME
            if decision is wrong:
                errors += 1
        return errors

    blocks = []
    step = max(1, -(-trials // workers))
    for hypothesis in (0, 1):
        for start in range(0, trials, step):
            blocks.append((hypothesis, start, min(start + step, trials)))
    if workers == 1:
        results = [run_block(*b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda b: run_block(*b), blocks))
    per_hypothesis = [0, 0]
    for (hypothesis, _, _), errors in zip(blocks, results):
        per_hypothesis[hypothesis] += errors

    err_mu = per_hypothesis[0] / trials
    err_mu_prime = per_hypothesis[1] / trials
    err_max = max(err_mu, err_mu_prime)
    ci = 1.96 * math.sqrt(err_max * (1.0 - err_max) / trials)
    return ErrorEstimate(
        err_mu=err_mu,
        err_mu_prime=err_mu_prime,
        err_max=err_max,
        trials=trials,
        ci_halfwidth=ci,
        n=int(n),
        t=inst.t,
        seed=seed,
    )


@dataclass(frozen=True)
class LowerBoundWitness:
    """Concrete check that the impossibility threshold really is impossible.

    mode is "exact" (full enumeration), "pinsker" (enumeration over budget;
    the total variation is bounded via Pinsker + tensorization instead),
    "vacuous" (the threshold is below one sample), or "impossible"
    (Delta(t) = 0, so no sample size works).
    """

    n: int | float
    epsilon: float
    delta: float
    delta_t: float
    error_floor: float
    mode: str
    exact_tv: float | None = None
    exact_lr_err: float | None = None
    tv_bound_holds: bool | None = None
    lr_bound_holds: bool | None = None
    pinsker_tv_bound: float | None = None


def lower_bound_witness(inst: TestingInstance, delta: float) -> LowerBoundWitness:
    """Verify the impossibility threshold on an enumerable instance.

    Computes n = floor(8 eps delta^2 / Delta(t)) at the instance's measured
    pairwise eps.  If n >= 1 and d^n fits the enumeration budget, checks that
    the exact maximum error of the likelihood-ratio rule and the exact bound
    (1 - d_TV(product))/2 both reach the floor 1/2 - delta.  Falls back to
    the Pinsker + tensorization certificate when enumeration is too large.
    """
    if not 0.0 < delta < 1.0:
        raise InvalidParameter(f"delta must lie in (0, 1), got {delta!r}")
    eps = pairwise_epsilon(inst.mu, inst.mu_prime, inst.stationary)
    delta_t = inst.delta()
    floor_value = 0.5 - delta
    if delta_t == 0.0:
        return LowerBoundWitness(
            n=math.inf, epsilon=eps, delta=delta, delta_t=delta_t,
            error_floor=floor_value, mode="impossible",
        )
    if eps <= 0.0:
        n = 0
    else:
        n = sample_lower_bound(inst, eps, delta)
    if n < 1:
        return LowerBoundWitness(
            n=n, epsilon=eps, delta=delta, delta_t=delta_t,
            error_floor=floor_value, mode="vacuous",
        )

    mu_t = evolve(inst.mu, inst.chain, inst.t)
    mu_prime_t = evolve(inst.mu_prime, inst.chain, inst.t)
    if enumeration_feasible(inst.chain.d, n):
        tv = exact_product_tv(mu_t, mu_prime_t, n)
        lr_err = exact_lr_error(mu_t, mu_prime_t, n)
        return LowerBoundWitness(
            n=n, epsilon=eps, delta=delta, delta_t=delta_t,
            error_floor=floor_value, mode="exact",
            exact_tv=tv, exact_lr_err=lr_err,
            tv_bound_holds=(1.0 - tv) / 2.0 >= floor_value - 1e-12,
            lr_bound_holds=lr_err >= floor_value - 1e-12,
        )
    pinsker = math.sqrt(n * kl_divergence(mu_t, mu_prime_t) / 2.0)
    return LowerBoundWitness(
        n=n, epsilon=eps, delta=delta, delta_t=delta_t,
        error_floor=floor_value, mode="pinsker",
        pinsker_tv_bound=pinsker,
        tv_bound_holds=(1.0 - min(1.0, pinsker)) / 2.0 >= floor_value - 1e-12,
    )
