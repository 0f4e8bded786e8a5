"""Planted-instance generation under the Gaussian observation model.

A planted instance over p nodes hides a uniformly random k-subset; every
hyperedge (increasing d-tuple) fully inside the subset gets a bias beta, and all
C(p,d) hyperedge weights receive independent standard Gaussian noise.

SNR bookkeeping: algorithms consume the per-edge bias beta; phase diagrams are
parameterized by the scale-normalized snr

    gamma = beta * sqrt( C(k,d) / (k * 2 * log p) )

("log" is the natural logarithm throughout).
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterError
from .tensor import SymTensor, binom, colex_tuples, rank_rows

SNR_KINDS = ("beta", "gamma")


def rng_stream(seed: int, trial: int, tag: str) -> np.random.Generator:
    """Counter-based generator keyed by (seed, trial-index, purpose-tag).

    Philox streams derived this way are independent, so Monte Carlo trials can be
    distributed across workers in any order and still reproduce bit-identically.
    """
    key = zlib.crc32(tag.encode("utf-8"))
    ss = np.random.SeedSequence(entropy=[int(seed) & 0xFFFFFFFFFFFFFFFF, int(trial), key])
    return np.random.Generator(np.random.Philox(ss))


def log_binom(n: int, j: int) -> float:
    """log C(n, j) via lgamma; -inf outside the triangle."""
    if j < 0 or n < 0 or j > n:
        return -math.inf
    return math.lgamma(n + 1) - math.lgamma(j + 1) - math.lgamma(n - j + 1)


def rate(q: float, p: int) -> float:
    """Finite-p proxy of the rate exponent: log q / log p (so rate(p, p) = 1)."""
    if q < 1:
        raise ParameterError(f"rate requires q >= 1, got {q}")
    if p < 3:
        raise ParameterError(f"rate requires p >= 3, got {p}")
    return math.log(q) / math.log(p)


def beta_to_gamma(beta: float, p: int, k: int, d: int) -> float:
    if p < 3:
        raise ParameterError(f"snr rescaling requires p >= 3, got {p}")
    log_factor = 0.5 * (log_binom(k, d) - math.log(k) - math.log(2 * math.log(p)))
    return beta * math.exp(log_factor)


def gamma_to_beta(gamma: float, p: int, k: int, d: int) -> float:
    if p < 3:
        raise ParameterError(f"snr rescaling requires p >= 3, got {p}")
    log_factor = 0.5 * (log_binom(k, d) - math.log(k) - math.log(2 * math.log(p)))
    return gamma * math.exp(-log_factor)


@dataclass(frozen=True)
class ProblemParams:
    """Problem size (p, k, d), the supplied snr (beta or gamma), and the RNG seed."""

    p: int
    k: int
    d: int
    snr_kind: str
    snr_value: float
    seed: int = 0

    def __post_init__(self):
        if not 2 <= self.d <= self.k <= self.p:
            raise ParameterError(
                f"need 2 <= d <= k <= p, got d={self.d}, k={self.k}, p={self.p}"
            )
        if self.snr_kind not in SNR_KINDS:
            raise ParameterError(f"snr_kind must be one of {SNR_KINDS}, got {self.snr_kind!r}")
        if self.snr_value < 0:
            raise ParameterError(f"snr must be nonnegative, got {self.snr_value}")
        if self.snr_kind == "gamma" and self.p < 3:
            raise ParameterError("gamma parameterization requires p >= 3")

    @classmethod
    def with_beta(cls, p, k, d, beta, seed=0):
        return cls(p, k, d, "beta", float(beta), seed)

    @classmethod
    def with_gamma(cls, p, k, d, gamma, seed=0):
        return cls(p, k, d, "gamma", float(gamma), seed)

    @property
    def beta(self) -> float:
        if self.snr_kind == "beta":
            return self.snr_value
        return gamma_to_beta(self.snr_value, self.p, self.k, self.d)

    @property
    def gamma(self) -> float:
        if self.snr_kind == "gamma":
            return self.snr_value
        return beta_to_gamma(self.snr_value, self.p, self.k, self.d)

    @property
    def alpha_k(self) -> float:
        return rate(self.k, self.p)

    @property
    def delta(self) -> float:
        """Sparsity k/p, the parameter of the factorized Bernoulli approximation."""
        return self.k / self.p

    @property
    def n_planted_edges(self) -> int:
        return binom(self.k, self.d)


@dataclass(frozen=True)
class PlantedInstance:
    params: ProblemParams
    signal: np.ndarray  # 0/1 int8, exactly k ones
    observations: SymTensor

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.signal)


def sample_signal(params: ProblemParams, rng: np.random.Generator) -> np.ndarray:
    """Uniformly random k-subset indicator (0/1 int8 of length p)."""
    chosen = rng.choice(params.p, size=params.k, replace=False)
    x = np.zeros(params.p, dtype=np.int8)
    x[chosen] = 1
    return x


def planted_edge_ranks(signal: np.ndarray, d: int) -> np.ndarray:
    """Colex ranks of the C(k,d) hyperedges fully inside the signal support."""
    support = np.flatnonzero(signal).astype(np.int32)
    k = len(support)
    p = len(signal)
    combos = colex_tuples(k, d)
    return rank_rows(support[combos], p, d)


def generate_instance(
    params: ProblemParams,
    trial: int = 0,
    noise: str = "gaussian",
    max_entries: int | None = None,
) -> PlantedInstance:
    """Draw one planted instance; deterministic given (params.seed, trial).

    noise="zero" replaces the Gaussian stream with zeros (test hook for the
    noiseless checks); signal and noise use separate per-purpose streams so the
    planted set is identical across both settings.
    """
    if noise not in ("gaussian", "zero"):
        raise ParameterError(f"noise must be 'gaussian' or 'zero', got {noise!r}")
    kwargs = {} if max_entries is None else {"max_entries": max_entries}
    y = SymTensor.zeros(params.p, params.d, **kwargs)
    signal = sample_signal(params, rng_stream(params.seed, trial, "signal"))
    if noise == "gaussian":
        y.data[:] = rng_stream(params.seed, trial, "noise").standard_normal(y.n_entries)
    beta = params.beta
    if beta != 0.0:
        y.data[planted_edge_ranks(signal, params.d)] += beta
    return PlantedInstance(params, signal, y)


def overlap(a: np.ndarray, b: np.ndarray) -> int:
    """Number of shared selected nodes between two 0/1 signal vectors."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"signal lengths differ: {a.shape} vs {b.shape}")
    return int(np.dot(a.astype(np.int64), b.astype(np.int64)))
