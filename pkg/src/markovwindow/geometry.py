"""The pi-weighted inner-product geometry.

Left eigenvectors of a reversible chain are orthonormal under
<u, w>_pi = sum_x u_x w_x / pi_x, so any distribution expands as
mu = sum_i alpha_i u_i with alpha_1 = 1, and the squared pi-distance between
two evolved distributions has the closed form

    ||mu P^t - mu' P^t||_pi^2 = sum_{i>=2} lam_i^{2t} (alpha_i - alpha'_i)^2.

This decay is the quantity that governs the sample complexity of testing
between the two initial distributions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import Distribution
from .errors import DimensionMismatch, InvalidParameter, ZeroStationaryMass
from .spectral import DEAD_MODE_TOL, SpectralDecomposition

# Coefficient differences below this fraction of the coefficient vector's
# norm are projection noise (the computed eigenbasis is orthonormal only to
# machine precision) and are zeroed, so a pair aligned with one eigenvector
# does not pick up phantom mass on the others.  The induced change in the
# decay is below 1e-24 relative, far inside every stated tolerance.
COEFF_FLOOR_REL = 1e-12


def pi_inner(u, w, pi: Distribution) -> float:
    """Inner product sum_x u_x w_x / pi_x."""
    u = np.asarray(u, dtype=float)
    w = np.asarray(w, dtype=float)
    if u.shape != w.shape or u.ndim != 1:
        raise DimensionMismatch(f"incompatible vector shapes {u.shape} and {w.shape}")
    if u.size != pi.d:
        raise DimensionMismatch(f"vectors have {u.size} entries, pi has {pi.d}")
    if np.any(pi.mass == 0):
        raise ZeroStationaryMass("pi has a zero entry")
    return float(np.sum(u * w / pi.mass))


def pi_norm(u, pi: Distribution) -> float:
    """Norm sqrt(<u, u>_pi)."""
    return float(np.sqrt(pi_inner(u, u, pi)))


@dataclass(frozen=True, eq=False)
class SpectralCoefficients:
    """Coordinates of a distribution in the left-eigenvector basis.

    alphas[i] = <u_i, mu>_pi; alphas[0] is always 1 for a distribution.
    """

    alphas: np.ndarray
    decomposition: SpectralDecomposition


def spectral_coefficients(mu: Distribution, S: SpectralDecomposition) -> SpectralCoefficients:
    """Expand mu in the eigenbasis: alpha_i = <u_i, mu>_pi."""
    if mu.d != S.d:
        raise DimensionMismatch(f"distribution has {mu.d} states, decomposition has {S.d}")
    alphas = S.left_eigenvectors @ (mu.mass / S.stationary.mass)
    alphas.setflags(write=False)
    return SpectralCoefficients(alphas=alphas, decomposition=S)


def _decay_weights(eigenvalues: np.ndarray, t: int) -> np.ndarray:
    """lam_i^{2t} computed as exp(2t log|lam_i|), with dead modes snapped to 0."""
    if t == 0:
        return np.ones_like(eigenvalues)
    weights = np.zeros_like(eigenvalues)
    alive = np.abs(eigenvalues) >= DEAD_MODE_TOL
    weights[alive] = np.exp(2.0 * t * np.log(np.abs(eigenvalues[alive])))
    return weights


def coefficient_diff(
    mu: Distribution, mu_prime: Distribution, S: SpectralDecomposition
) -> np.ndarray:
    """Per-mode coefficient differences <u_i, mu - mu'>_pi with noise floored."""
    if mu.d != S.d or mu_prime.d != S.d:
        raise DimensionMismatch("distribution / decomposition size mismatch")
    diff = S.left_eigenvectors @ ((mu.mass - mu_prime.mass) / S.stationary.mass)
    scale = float(np.linalg.norm(diff))
    if scale > 0.0:
        diff[np.abs(diff) < COEFF_FLOOR_REL * scale] = 0.0
    return diff


def decay_distance_sq(
    mu: Distribution, mu_prime: Distribution, S: SpectralDecomposition, t: int
) -> float:
    """Squared pi-distance ||mu P^t - mu' P^t||_pi^2 in closed form.

    Evaluates sum_{i>=2} lam_i^{2t} (alpha_i - alpha'_i)^2 without evolving
    either distribution.  Nonnegative; at t = 0 it equals ||mu - mu'||_pi^2.
    """
    if mu.d != S.d or mu_prime.d != S.d:
        raise DimensionMismatch("distribution / decomposition size mismatch")
    if t < 0 or t != int(t):
        raise InvalidParameter(f"t must be a nonnegative integer, got {t!r}")
    diff = coefficient_diff(mu, mu_prime, S)
    weights = _decay_weights(S.eigenvalues, int(t))
    return float(np.sum(weights[1:] * diff[1:] ** 2))
