"""Constructors for the example chain families, each paired with its
closed-form spectrum so the numerical eigensolver can be checked against an
independent formula.

Families: cycle, line, bipartite_clique, hypercube (standard walk),
hypercube_product (weighted product of two-state chains), blockmodel2
(deterministic regular two-block graph), pachinko (dyadic-tree walk on
leaves), random_chain (normalized symmetric random weights).

A JSON chain spec selects a family: {"type": "cycle", "d": 8} etc., or an
explicit matrix {"type": "explicit", "matrix": [[...], ...]}.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .chain import TransitionMatrix
from .errors import InvalidParameter


def cycle(d: int) -> TransitionMatrix:
    """Simple random walk on the d-cycle: step to i +- 1 mod d w.p. 1/2 each."""
    if d < 3:
        raise InvalidParameter(f"cycle needs d >= 3, got {d}")
    P = np.zeros((d, d))
    idx = np.arange(d)
    P[idx, (idx + 1) % d] = 0.5
    P[idx, (idx - 1) % d] = 0.5
    return TransitionMatrix(P)


def cycle_spectrum(d: int) -> np.ndarray:
    """Eigenvalue multiset of the d-cycle walk: cos(2 pi i / d)."""
    return np.cos(2.0 * np.pi * np.arange(d) / d)


def line(d: int) -> TransitionMatrix:
    """Random walk on the d-line with reflecting endpoints.

    Interior states move to either neighbor w.p. 1/2; the endpoints move to
    their unique neighbor w.p. 1.  Reversible with stationary distribution
    proportional to node degree, so not uniform.
    """
    if d < 3:
        raise InvalidParameter(f"line needs d >= 3, got {d}")
    P = np.zeros((d, d))
    P[0, 1] = 1.0
    P[d - 1, d - 2] = 1.0
    for j in range(1, d - 1):
        P[j, j - 1] = 0.5
        P[j, j + 1] = 0.5
    return TransitionMatrix(P)


def line_spectrum(d: int) -> np.ndarray:
    """Eigenvalue multiset of the d-line walk: cos(pi i / (d - 1))."""
    return np.cos(np.pi * np.arange(d) / (d - 1))


def bipartite_clique(d: int) -> TransitionMatrix:
    """Random walk on the complete bipartite graph with two sides of d/2.

    From any node, jump to a uniform node on the other side (probability
    2/d each).  States 0..d/2-1 are the left side.
    """
    if d < 4 or d % 2 != 0:
        raise InvalidParameter(f"bipartite clique needs even d >= 4, got {d}")
    half = d // 2
    P = np.zeros((d, d))
    P[:half, half:] = 2.0 / d
    P[half:, :half] = 2.0 / d
    return TransitionMatrix(P)


def bipartite_clique_spectrum(d: int) -> np.ndarray:
    """{1, -1} plus d - 2 zeros."""
    return np.concatenate(([1.0, -1.0], np.zeros(d - 2)))


def hypercube(k: int) -> TransitionMatrix:
    """Standard walk on the k-dimensional hypercube (d = 2^k states).

    Each step flips one of the k coordinates uniformly, i.e. probability 1/k
    per Hamming-1 neighbor (the unique row-stochastic normalization).
    """
    if k < 1:
        raise InvalidParameter(f"hypercube needs k >= 1, got {k}")
    d = 1 << k
    P = np.zeros((d, d))
    idx = np.arange(d)
    for b in range(k):
        P[idx, idx ^ (1 << b)] = 1.0 / k
    return TransitionMatrix(P)


def hypercube_spectrum(k: int) -> np.ndarray:
    """1 - 2j/k with multiplicity binomial(k, j), j = 0..k."""
    vals = [np.full(math.comb(k, j), 1.0 - 2.0 * j / k) for j in range(k + 1)]
    return np.concatenate(vals)


def two_state(p: float, q: float) -> TransitionMatrix:
    """Two-state chain: from state 0 flip w.p. p, from state 1 flip w.p. q.

    Stationary distribution (q, p) / (p + q); second eigenvalue 1 - (p + q).
    """
    _validate_flip_rates(p, q)
    return TransitionMatrix(np.array([[1.0 - p, p], [q, 1.0 - q]]))


def _validate_flip_rates(p: float, q: float) -> None:
    if not (0.0 < p <= 1.0 and 0.0 < q <= 1.0):
        raise InvalidParameter(f"flip rates must lie in (0, 1], got p={p!r}, q={q!r}")


def hypercube_product(weights, params) -> TransitionMatrix:
    """Weighted product of k two-state chains on the hypercube.

    A step picks coordinate j with probability weights[j] and moves it by the
    two-state chain with flip rates params[j] = (p_j, q_j); equivalently the
    entry from x to a Hamming-1 neighbor differing in coordinate j is
    w_j P_j(x_j, x'_j), and the diagonal carries sum_j w_j P_j(x_j, x_j).
    Coordinate j is bit j of the state index (bit 0 means factor state 0).

    With all rates 1 and uniform weights this is exactly the standard
    hypercube walk.
    """
    weights = np.asarray(weights, dtype=float)
    k = weights.size
    if k < 1 or len(params) != k:
        raise InvalidParameter("need one (p, q) pair per weight")
    if np.any(weights <= 0) or abs(float(weights.sum()) - 1.0) > 1e-12:
        raise InvalidParameter("weights must be positive and sum to 1")
    factors = []
    for p, q in params:
        _validate_flip_rates(p, q)
        factors.append(np.array([[1.0 - p, p], [q, 1.0 - q]]))

    d = 1 << k
    P = np.zeros((d, d))
    idx = np.arange(d)
    diag = np.zeros(d)
    for j in range(k):
        bit = (idx >> j) & 1
        M = factors[j]
        P[idx, idx ^ (1 << j)] = weights[j] * M[bit, 1 - bit]
        diag += weights[j] * M[bit, bit]
    P[idx, idx] = diag
    return TransitionMatrix(P)


def hypercube_product_spectrum(weights, params) -> np.ndarray:
    """1 - sum_{j in S} w_j (p_j + q_j) over all subsets S of coordinates."""
    weights = np.asarray(weights, dtype=float)
    k = weights.size
    rates = np.array([p + q for p, q in params], dtype=float)
    out = np.empty(1 << k)
    for mask in range(1 << k):
        members = [(mask >> j) & 1 for j in range(k)]
        out[mask] = 1.0 - float(np.sum(weights * np.array(members) * rates))
    return out


def blockmodel2(d: int, a: float, b: float) -> TransitionMatrix:
    """Deterministic regular two-block graph walk.

    Two blocks of d/2 nodes; every node has a*d neighbors inside its block
    (circulant offsets +-1..+-floor(a d / 2), plus the antipodal offset when
    a*d is odd) and b*d neighbors in the other block (circulant band of width
    b*d).  The walk is uniform over the (a + b) d neighbors; the signed-block
    vector is an eigenvector with eigenvalue (a - b) / (a + b).
    """
    if d < 4 or d % 2 != 0:
        raise InvalidParameter(f"blockmodel2 needs even d >= 4, got {d}")
    m = d // 2
    intra = _integral(a * d, "a*d")
    inter = _integral(b * d, "b*d")
    if inter < 1 or inter > m:
        raise InvalidParameter(f"inter-degree must lie in [1, {m}], got {inter}")
    if intra < 0 or intra >= m:
        raise InvalidParameter(f"intra-degree must lie in [0, {m - 1}], got {intra}")
    if intra % 2 == 1 and m % 2 != 0:
        raise InvalidParameter(
            f"odd intra-degree {intra} needs the antipodal offset, so d/2 must be even"
        )

    offsets = list(range(1, intra // 2 + 1)) + [m - o for o in range(1, intra // 2 + 1)]
    if intra % 2 == 1:
        offsets.append(m // 2)
    A_intra = np.zeros((m, m))
    idx = np.arange(m)
    for o in offsets:
        A_intra[idx, (idx + o) % m] = 1.0
    A_inter = np.zeros((m, m))
    for o in range(inter):
        A_inter[idx, (idx + o) % m] = 1.0

    A = np.block([[A_intra, A_inter], [A_inter.T, A_intra]])
    degree = intra + inter
    if not np.all(A.sum(axis=1) == degree) or not np.all(A.sum(axis=0) == degree):
        raise InvalidParameter("constructed blockmodel graph is not regular")
    return TransitionMatrix(A / degree)


def _integral(x: float, label: str) -> int:
    n = round(x)
    if abs(x - n) > 1e-9:
        raise InvalidParameter(f"{label} must be an integer, got {x!r}")
    return int(n)


def pachinko(r: int, betas) -> TransitionMatrix:
    """Walk on the 2^r leaves of a dyadic tree.

    The walk stays put with probability betas[0] and lands uniformly among
    the 2^{l-1} leaves whose first common ancestor with the current leaf has
    height l, with total probability betas[l] (so each such leaf gets
    betas[l] / 2^{l-1}).  Leaf index bits encode the root-to-leaf path (most
    significant bit first), so the common-ancestor height of leaves i != j is
    the bit length of i XOR j.

    betas must be positive, strictly decreasing, and sum to 1; the matrix is
    symmetric, so the stationary distribution is uniform.
    """
    if r < 1:
        raise InvalidParameter(f"pachinko needs r >= 1, got {r}")
    betas = np.asarray(betas, dtype=float)
    if betas.size != r + 1:
        raise InvalidParameter(f"need r + 1 = {r + 1} betas, got {betas.size}")
    if np.any(betas <= 0):
        raise InvalidParameter("betas must be positive")
    if np.any(np.diff(betas) >= 0):
        raise InvalidParameter("betas must be strictly decreasing")
    if abs(float(betas.sum()) - 1.0) > 1e-12:
        raise InvalidParameter("betas must sum to 1")

    d = 1 << r
    idx = np.arange(d)
    xor = idx[:, None] ^ idx[None, :]
    heights = np.zeros_like(xor)
    nz = xor > 0
    heights[nz] = np.floor(np.log2(xor[nz])).astype(np.int64) + 1
    per_leaf = np.empty(r + 1)
    per_leaf[0] = betas[0]
    for level in range(1, r + 1):
        per_leaf[level] = betas[level] / float(2 ** (level - 1))
    return TransitionMatrix(per_leaf[heights])


def pachinko_spectrum(r: int, betas) -> np.ndarray:
    """1, then for k = 2..r+1 the eigenvalue betas[0] + ... + betas[r+1-k]
    - betas[r+2-k] with multiplicity 2^{k-2}."""
    betas = np.asarray(betas, dtype=float)
    vals = [np.array([1.0])]
    for k in range(2, r + 2):
        gamma = float(betas[: r + 2 - k].sum() - betas[r + 2 - k])
        vals.append(np.full(1 << (k - 2), gamma))
    return np.concatenate(vals)


def random_chain(d: int, seed: int, weight_law="uniform01") -> TransitionMatrix:
    """Normalized symmetric random weights on the complete graph with loops.

    Draws one weight per unordered pair {i, j} (including i = j) i.i.d. from
    weight_law and normalizes rows: P_ij = U_ij / sum_x U_ix.  Reversible by
    construction with stationary distribution proportional to row sums, and
    deterministic given the seed.

    weight_law is "uniform01" (default) or a callable (rng, size) -> array of
    positive floats.
    """
    if d < 2:
        raise InvalidParameter(f"random_chain needs d >= 2, got {d}")
    rng = np.random.default_rng(seed)
    n_pairs = d * (d + 1) // 2
    if weight_law == "uniform01":
        vals = rng.random(n_pairs)
    elif callable(weight_law):
        vals = np.asarray(weight_law(rng, n_pairs), dtype=float)
        if vals.shape != (n_pairs,):
            raise InvalidParameter("weight_law must return one weight per pair")
        if np.any(vals < 0):
            raise InvalidParameter("weight_law must return nonnegative weights")
    else:
        raise InvalidParameter(f"unknown weight law {weight_law!r}")
    U = np.zeros((d, d))
    iu = np.triu_indices(d)
    U[iu] = vals
    U = U + np.triu(U, 1).T
    row_sums = U.sum(axis=1)
    if np.any(row_sums <= 0):
        raise InvalidParameter("a row of weights summed to zero")
    return TransitionMatrix(U / row_sums[:, None])


ZOO_FAMILIES = {
    "cycle": ["d"],
    "line": ["d"],
    "bipartite_clique": ["d"],
    "hypercube": ["k"],
    "hypercube_product": ["k", "weights", "params"],
    "blockmodel2": ["d", "intra_degree", "inter_degree"],
    "pachinko": ["r", "betas"],
    "random_chain": ["d", "seed", "weight_law"],
    "explicit": ["matrix"],
}


def chain_from_spec(spec) -> TransitionMatrix:
    """Build a chain from a JSON chain spec (dict or JSON string)."""
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise InvalidParameter(f"chain spec is not valid JSON: {exc}") from exc
    if not isinstance(spec, dict) or "type" not in spec:
        raise InvalidParameter('chain spec must be an object with a "type" field')
    kind = spec["type"]
    fields = ZOO_FAMILIES.get(kind)
    if fields is None:
        raise InvalidParameter(f"unknown chain type {kind!r}")
    extra = set(spec) - set(fields) - {"type"}
    if extra:
        raise InvalidParameter(f"unexpected fields for {kind!r}: {sorted(extra)}")

    def need(name, default=None):
        if name in spec:
            return spec[name]
        if default is not None:
            return default
        raise InvalidParameter(f"chain type {kind!r} requires field {name!r}")

    if kind == "explicit":
        return TransitionMatrix(np.asarray(need("matrix"), dtype=float))
    if kind == "cycle":
        return cycle(int(need("d")))
    if kind == "line":
        return line(int(need("d")))
    if kind == "bipartite_clique":
        return bipartite_clique(int(need("d")))
    if kind == "hypercube":
        return hypercube(int(need("k")))
    if kind == "hypercube_product":
        weights = need("weights")
        params = [tuple(pq) for pq in need("params")]
        if "k" in spec and int(spec["k"]) != len(weights):
            raise InvalidParameter("field k disagrees with the number of weights")
        return hypercube_product(weights, params)
    if kind == "blockmodel2":
        d = int(need("d"))
        return blockmodel2(d, int(need("intra_degree")) / d, int(need("inter_degree")) / d)
    if kind == "pachinko":
        return pachinko(int(need("r")), need("betas"))
    # random_chain
    return random_chain(int(need("d")), int(need("seed")), need("weight_law", "uniform01"))


def spec_to_json(spec: dict) -> str:
    """Stable serialization of a chain spec (sorted keys, no whitespace drift)."""
    return json.dumps(spec, sort_keys=True, separators=(",", ":"))
