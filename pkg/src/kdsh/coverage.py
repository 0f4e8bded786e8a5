"""Greedy coverage construction and the correlation/cardinality quantities behind it.

A coverage with overlap r is a subset of the k-subsets such that (i) any two
members share fewer than r nodes and (ii) every k-subset shares at least r nodes
with some member.  The greedy construction yields at least ceil(C(p,k) / B(r))
members, where

    B(r) = sum_{l=r}^{k} C(k,l) * C(p-k, k-l)

counts the solutions sharing >= r nodes with a fixed one (B(0) = C(p,k) by
Vandermonde, B(k) = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import CapacityError, ParameterError
from .instance import ProblemParams, log_binom, rate, rng_stream
from .tensor import binom, colex_tuples, rank_rows

GREEDY_CAP = 200_000


@dataclass(frozen=True)
class Coverage:
    r: int
    members: np.ndarray  # (cardinality, p) 0/1 int8 matrix, admission order

    @property
    def cardinality(self) -> int:
        return self.members.shape[0]


def b_of_r_exact(p: int, k: int, r: int) -> int:
    if not 0 <= r <= k <= p:
        raise ParameterError(f"need 0 <= r <= k <= p, got r={r}, k={k}, p={p}")
    return sum(binom(k, l) * binom(p - k, k - l) for l in range(r, k + 1))


def b_of_r(p: int, k: int, r: int) -> float:
    """log B(r), via log-sum-exp over lgamma-based log-binomials."""
    if not 0 <= r <= k <= p:
        raise ParameterError(f"need 0 <= r <= k <= p, got r={r}, k={k}, p={p}")
    terms = [
        log_binom(k, l) + log_binom(p - k, k - l)
        for l in range(r, k + 1)
        if k - l <= p - k  # zero terms contribute nothing
    ]
    if not terms:
        return -math.inf
    m = max(terms)
    return m + math.log(sum(math.exp(t - m) for t in terms))


def greedy_cover(p: int, k: int, r: int, cap: int = GREEDY_CAP) -> Coverage:
    """Greedy coverage: admit the next surviving k-subset (lexicographic order),
    then discard every k-subset overlapping it in >= r nodes.

    The admission order is fixed to lexicographic for reproducible cardinalities.
    """
    if not 0 <= r <= k:
        raise ParameterError(f"need 0 <= r <= k, got r={r}, k={k}")
    n = binom(p, k)
    if n > cap:
        raise CapacityError(f"binom({p},{k}) = {n} exceeds the enumeration cap {cap}")
    all_solutions = _solution_matrix(p, k)
    alive = np.ones(n, dtype=bool)
    members = []
    while True:
        idx = np.argmax(alive)
        if not alive[idx]:
            break
        x = all_solutions[idx]
        members.append(x)
        alive &= (all_solutions @ x.astype(np.int64)) < r
    return Coverage(r, np.array(members, dtype=np.int8))


def verify_cover(cover: Coverage, p: int, k: int, cap: int = GREEDY_CAP) -> bool:
    """Exhaustively check both coverage conditions over all of C_{p,k}."""
    n = binom(p, k)
    if n > cap:
        raise CapacityError(f"binom({p},{k}) = {n} exceeds the enumeration cap {cap}")
    m = cover.members.astype(np.int64)
    pair_overlaps = m @ m.T
    np.fill_diagonal(pair_overlaps, -1)
    if pair_overlaps.max(initial=-1) >= cover.r:
        return False
    all_solutions = _solution_matrix(p, k).astype(np.int64)
    best = (all_solutions @ m.T).max(axis=1)
    return bool((best >= cover.r).all())


def _solution_matrix(p: int, k: int) -> np.ndarray:
    """(C(p,k), p) 0/1 matrix of all k-subsets in lexicographic support order."""
    import itertools

    rows = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(p), k)),
        dtype=np.int64,
    ).reshape(-1, k)
    out = np.zeros((len(rows), p), dtype=np.int8)
    out[np.arange(len(rows))[:, None], rows] = 1
    return out


def correlation(k: int, d: int, r: int) -> float:
    """Correlation of the weights of two solutions sharing exactly r nodes:
    C(r,d) / C(k,d).  Zero for r < d, one for r = k, nondecreasing in r.
    """
    if not 0 <= r <= k or d > k:
        raise ParameterError(f"need 0 <= r <= k and d <= k, got r={r}, d={d}, k={k}")
    if r < d:
        return 0.0
    if r == k:
        return 1.0
    return math.exp(log_binom(r, d) - log_binom(k, d))


def empirical_correlation(
    params: ProblemParams, r: int, samples: int, trial: int = 0
) -> float:
    """Pearson correlation of S(x'), S(x'') over fresh noise draws, where x' and
    x'' are two fixed solutions sharing exactly r nodes.

    Only the hyperedges internal to either solution matter, so the noise is drawn
    just for that union of edges.
    """
    p, k, d = params.p, params.k, params.d
    if not 0 <= r <= k or k - r > p - k:
        raise ParameterError(
            f"no two k-subsets of [{p}] share exactly r={r} nodes (k={k})"
        )
    sup1 = np.arange(k, dtype=np.int32)
    sup2 = np.concatenate(
        [np.arange(r, dtype=np.int32), np.arange(k, 2 * k - r, dtype=np.int32)]
    )
    combos = colex_tuples(k, d)
    ranks1 = rank_rows(sup1[combos], p, d)
    ranks2 = rank_rows(sup2[combos], p, d)
    union, inv = np.unique(np.concatenate([ranks1, ranks2]), return_inverse=True)
    idx1, idx2 = inv[: len(ranks1)], inv[len(ranks1) :]
    rng = rng_stream(params.seed, trial, "edge-noise")
    z = rng.standard_normal((samples, len(union)))
    s1 = z[:, idx1].sum(axis=1)
    s2 = z[:, idx2].sum(axis=1)
    return float(np.corrcoef(s1, s2)[0, 1])


class CoverageRateBound(NamedTuple):
    exact: float  # finite-p rate log(C(p,k)/B(r)) / log p
    asymptotic: float  # the limit target r * (1 - alpha_k)


def coverage_rate_bound(p: int, k: int, r: int) -> CoverageRateBound:
    """Finite-p coverage-cardinality rate alongside its asymptotic proxy."""
    exact = (log_binom(p, k) - b_of_r(p, k, r)) / math.log(p)
    alpha_k = rate(k, p)
    return CoverageRateBound(exact=exact, asymptotic=r * (1.0 - alpha_k))
