"""Brute-force maximum-likelihood recovery over all k-subsets.

The MLE for the planted model is the k-densest sub-hypergraph: the k-subset
maximizing the total weight S of its internal hyperedges.  Everything here
enumerates the C(p,k) candidate solutions, so callers are protected by an
enumeration cap (a runtime configuration, not a compile-time limit).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ParameterError
from .instance import PlantedInstance, ProblemParams, generate_instance, overlap
from .tensor import binom, colex_tuples, rank_rows

ENUMERATION_CAP = 10**7
_CHUNK = 1 << 16


def _check_cap(p: int, k: int, cap: int) -> int:
    n = binom(p, k)
    if n > cap:
        raise CapacityError(f"binom({p},{k}) = {n} exceeds the enumeration cap {cap}")
    return n


def enumerate_solutions(p: int, k: int, cap: int = ENUMERATION_CAP):
    """Yield every k-subset indicator (0/1 int8) exactly once, lexicographic order."""
    _check_cap(p, k, cap)
    for combo in itertools.combinations(range(p), k):
        x = np.zeros(p, dtype=np.int8)
        x[list(combo)] = 1
        yield x


def _candidate_chunks(p: int, k: int):
    """Chunks of candidate supports as (n_chunk, k) int32 arrays, lex order."""
    it = itertools.combinations(range(p), k)
    while True:
        block = list(itertools.islice(it, _CHUNK))
        if not block:
            return
        yield np.array(block, dtype=np.int32)


def _chunk_weights(supports: np.ndarray, inst: PlantedInstance) -> np.ndarray:
    """S(x) for each candidate support row: gather the C(k,d) internal edges."""
    d = inst.params.d
    k = supports.shape[1]
    inner = colex_tuples(k, d)
    edge_ranks = rank_rows(
        supports[:, inner].reshape(-1, d), inst.params.p, d
    ).reshape(len(supports), -1)
    return inst.observations.data[edge_ranks].sum(axis=1)


@dataclass(frozen=True)
class MleResult:
    argmax_signal: np.ndarray
    max_weight: float
    overlap_with_planted: int
    tie_count: int


def mle_solve(inst: PlantedInstance, cap: int = ENUMERATION_CAP) -> MleResult:
    """Exhaustive argmax of S over all k-subsets.

    Deterministic tie-break: the lexicographically smallest maximizing support
    (ties have probability zero under continuous noise but occur under the
    zero-noise test hook).
    """
    p, k = inst.params.p, inst.params.k
    _check_cap(p, k, cap)
    best_w = -math.inf
    best_support = None
    ties = 0
    for supports in _candidate_chunks(p, k):
        w = _chunk_weights(supports, inst)
        cmax = float(w.max())
        if cmax > best_w:
            best_w = cmax
            best_support = supports[int(np.argmax(w))].copy()
            ties = int(np.count_nonzero(w == cmax))
        elif cmax == best_w:
            ties += int(np.count_nonzero(w == cmax))
    x = np.zeros(p, dtype=np.int8)
    x[best_support] = 1
    return MleResult(x, best_w, overlap(x, inst.signal), ties)


def max_by_overlap_class(inst: PlantedInstance, m: int, cap: int = ENUMERATION_CAP) -> float:
    """Max weight among solutions sharing exactly m nodes with the planted one.

    Returns -inf when the overlap class is empty (e.g. k - m > p - k), since the
    class partition is summed over possibly empty classes.
    """
    p, k = inst.params.p, inst.params.k
    if not 0 <= m <= k:
        raise ParameterError(f"overlap class m must be in [0, {k}], got {m}")
    _check_cap(p, k, cap)
    planted = inst.signal.astype(np.int64)
    best = -math.inf
    for supports in _candidate_chunks(p, k):
        ov = planted[supports].sum(axis=1)
        mask = ov == m
        if mask.any():
            best = max(best, float(_chunk_weights(supports[mask], inst).max()))
    return best


@dataclass(frozen=True)
class RecoveryStats:
    rate: float  # fraction of trials with overlap >= k'
    exact_rate: float  # fraction with overlap == k
    overlaps: np.ndarray  # per-trial overlap of the MLE with the planted signal
    kprime: int


def recovery_rate(
    params: ProblemParams,
    trials: int,
    kprime: int,
    cap: int = ENUMERATION_CAP,
) -> RecoveryStats:
    """Empirical P(<x_MLE, x> >= k') over seeded trials (streams keyed by trial)."""
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")
    if not 0 <= kprime <= params.k:
        raise ParameterError(f"kprime must be in [0, {params.k}], got {kprime}")
    overlaps = np.empty(trials, dtype=np.int64)
    for t in range(trials):
        inst = generate_instance(params, trial=t)
        overlaps[t] = mle_solve(inst, cap=cap).overlap_with_planted
    return RecoveryStats(
        rate=float(np.mean(overlaps >= kprime)),
        exact_rate=float(np.mean(overlaps == params.k)),
        overlaps=overlaps,
        kprime=kprime,
    )
