"""Spectral decomposition of reversible chains via the symmetric conjugate.

For a reversible chain P with stationary distribution pi, the matrix
Q = Pi^{1/2} P Pi^{-1/2} is symmetric, so it has a real spectrum and an
orthonormal eigenbasis nu_1..nu_d.  Back-transforming gives left eigenvectors
u_i = Pi^{1/2} nu_i (orthonormal under the pi-weighted inner product) and
right eigenvectors v_i = Pi^{-1/2} nu_i, with u_i = Pi v_i.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass

import numpy as np

from .chain import Distribution, TransitionMatrix, check_reversible, stationary_distribution, symmetrize
from .errors import EigensolverFailure, NotReversible

EIGEN_RESIDUAL_TOL = 1e-10

# Eigenvalues this close to +-1 are boundary modes of a stochastic matrix up
# to solver noise; snapping keeps "information never decays along this mode"
# exact, mirroring the dead-mode snap below.
UNIT_SNAP_TOL = 1e-12

# Below this magnitude an eigenvalue is solver noise around an exact zero and
# is stored as 0, so no dead mode is ever resurrected by roundoff.
DEAD_MODE_TOL = 1e-13


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Full eigensystem of a reversible chain.

    Attributes
    ----------
    eigenvalues : (d,) array, sorted descending by signed value; first is 1.
    left_eigenvectors : (d, d) array, row i is u_i; u_1 = pi; pi-orthonormal.
    right_eigenvectors : (d, d) array, row i is v_i; v_1 = all-ones.
    abs_order : (d,) int array; abs_order[j] is the index (into the arrays
        above) of the eigenvalue of j-th largest absolute value.  Ties break
        by descending signed value, then ascending index.
    stationary : the chain's stationary distribution.
    """

    eigenvalues: np.ndarray
    left_eigenvectors: np.ndarray
    right_eigenvectors: np.ndarray
    abs_order: np.ndarray
    stationary: Distribution

    @property
    def d(self) -> int:
        return self.eigenvalues.size

    def eigenvalue_by_abs_rank(self, rank: int) -> float:
        """Eigenvalue of the rank-th largest absolute value (rank 1 is 1.0)."""
        return float(self.eigenvalues[self.abs_order[rank - 1]])

    def left_by_abs_rank(self, rank: int) -> np.ndarray:
        """Left eigenvector paired with eigenvalue_by_abs_rank(rank)."""
        return self.left_eigenvectors[self.abs_order[rank - 1]]

    def abs_multiplicity(self, rank: int, tol: float = 1e-9) -> int:
        """Multiplicity of the (signed) eigenvalue at the given abs rank."""
        target = self.eigenvalue_by_abs_rank(rank)
        return int(np.sum(np.abs(self.eigenvalues - target) <= tol))


def _fix_signs(U: np.ndarray) -> np.ndarray:
    """Flip eigenvector signs so the first non-negligible coordinate is positive."""
    out = U.copy()
    for i in range(out.shape[0]):
        row = out[i]
        scale = np.max(np.abs(row))
        if scale == 0.0:
            continue
        nonzero = np.nonzero(np.abs(row) > 1e-10 * scale)[0]
        if nonzero.size and row[nonzero[0]] < 0:
            out[i] = -row
    return out


# Chains are immutable, so the decomposition of a given object never changes;
# repeated queries (per-t CLI rows, window/time scans) hit this cache.
_CACHE: "weakref.WeakKeyDictionary[TransitionMatrix, SpectralDecomposition]" = (
    weakref.WeakKeyDictionary()
)


def spectral_decomposition(P: TransitionMatrix) -> SpectralDecomposition:
    """Eigenvalues and pi-orthonormal eigenvectors of a reversible chain.

    Raises NotReversible if detailed balance fails, and EigensolverFailure if
    the symmetric eigensolver's residual exceeds 1e-10.  Results are cached
    per chain object.
    """
    cached = _CACHE.get(P)
    if cached is not None:
        return cached
    result = _decompose(P)
    _CACHE[P] = result
    return result


def _decompose(P: TransitionMatrix) -> SpectralDecomposition:
    pi = stationary_distribution(P)
    if not check_reversible(P, pi):
        raise NotReversible("chain not reversible: detailed balance fails at tolerance 1e-8")
    Q = symmetrize(P, pi)

    try:
        lams, nus = np.linalg.eigh(Q)
    except np.linalg.LinAlgError as exc:
        raise EigensolverFailure(f"symmetric eigensolver did not converge: {exc}") from exc
    residual = float(np.max(np.abs(Q @ nus - nus * lams[None, :])))
    if residual > EIGEN_RESIDUAL_TOL:
        raise EigensolverFailure(
            f"eigensolver residual {residual:.3e} exceeds {EIGEN_RESIDUAL_TOL}"
        )

    # Descending by signed value; eigh returns ascending.
    order = np.argsort(-lams, kind="stable")
    lams = lams[order]
    nus = nus[:, order]

    if abs(lams[0] - 1.0) > EIGEN_RESIDUAL_TOL:
        raise EigensolverFailure(
            f"principal eigenvalue {lams[0]!r} is not 1 within {EIGEN_RESIDUAL_TOL}"
        )
    # Cross-check: the squared principal eigenvector of Q must reproduce pi.
    pi_from_q = nus[:, 0] ** 2
    pi_from_q /= pi_from_q.sum()
    if float(np.max(np.abs(pi_from_q - pi.mass))) > 1e-8:
        raise EigensolverFailure("principal eigenvector of Q does not reproduce pi")

    lams = np.clip(lams, -1.0, 1.0)
    near_unit = np.abs(np.abs(lams) - 1.0) <= UNIT_SNAP_TOL
    lams[near_unit] = np.sign(lams[near_unit])
    lams[np.abs(lams) < DEAD_MODE_TOL] = 0.0

    root = np.sqrt(pi.mass)
    U = _fix_signs((nus * root[:, None]).T)  # rows u_i = Pi^{1/2} nu_i
    # Exact boundary rows: u_1 = pi, hence v_1 = 1.
    U[0] = pi.mass
    V = U / pi.mass[None, :]  # v_i = Pi^{-1} u_i

    ranks = sorted(range(P.d), key=lambda i: (-abs(lams[i]), -lams[i], i))
    abs_order = np.array(ranks, dtype=np.intp)

    for arr in (lams, U, V, abs_order):
        arr.setflags(write=False)
    return SpectralDecomposition(
        eigenvalues=lams,
        left_eigenvectors=U,
        right_eigenvectors=V,
        abs_order=abs_order,
        stationary=pi,
    )
