"""Approximate message passing for the planted sub-hypergraph model.

One iteration updates, for every node i (sums over strictly increasing tuples):

    x_i = beta * sum_{i2<...<id, all != i} Y_{i i2..id} prod_j xhat_{ij}
          - beta^2 (d-1) * sum_{i2 != i} sigma_{i2}
                * sum_{i3<...<id, != i,i2} Y^2_{i i2..id} prod_{j>=3} (xhat_{ij} xhat_prev_{ij})
    a_i = beta^2 * sum_{i2<...<id, all != i} Y^2_{i i2..id} prod_j xhat_{ij}^2
    xhat' = f(a, x),   sigma' = diag Jacobian_x f(a, x)

The second term in x is the Onsager correction cancelling the contribution an
estimate made to its own incoming message; for d = 2 its inner product over
i3..id is empty and counts as 1.  The threshold f is the posterior mean under a
factorized Bernoulli(delta) prior ("bernoulli") or the same logistic family with
a scalar shift lambda enforcing sum_i f_i = k ("vectorial").

The implementation makes a single chunked pass over the tensor per iteration,
accumulating the signal contraction, the variance messages and the Onsager
partials together; per-tuple work is O(d^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit, logit

from .errors import DegenerateStateError, DivergenceError, ParameterError
from .instance import PlantedInstance, overlap, rng_stream
from .tensor import SymTensor, _leave_one_out_products

THRESHOLD_KINDS = ("bernoulli", "vectorial")
INIT_KINDS = ("uninformative", "informative")

_LAMBDA_BISECT_STEPS = 100


@dataclass(frozen=True)
class AmpConfig:
    threshold_kind: str = "vectorial"
    init_kind: str = "uninformative"
    max_iter: int = 200
    tol: float = 1e-8
    damping: float = 0.0  # 0 = none; small-k runs can oscillate without it
    lambda_solver_tol: float = 1e-10

    def __post_init__(self):
        if self.threshold_kind not in THRESHOLD_KINDS:
            raise ParameterError(f"threshold_kind must be one of {THRESHOLD_KINDS}")
        if self.init_kind not in INIT_KINDS:
            raise ParameterError(f"init_kind must be one of {INIT_KINDS}")
        if self.max_iter < 1:
            raise ParameterError("max_iter must be >= 1")
        if self.tol <= 0:
            raise ParameterError("tol must be positive")
        if not 0.0 <= self.damping < 1.0:
            raise ParameterError("damping must lie in [0, 1)")


@dataclass
class AmpState:
    xhat_cur: np.ndarray   # posterior means, entries in [0, 1]
    xhat_prev: np.ndarray
    x_msg: np.ndarray      # mean messages
    a_msg: np.ndarray      # variance messages, nonnegative
    sigma: np.ndarray      # Jacobian diagonal of the threshold
    iter: int = 0
    constraint_err: float = 0.0  # max |sum(xhat) - k| seen (vectorial mode)


def threshold_bernoulli(a: np.ndarray, x: np.ndarray, delta: float) -> np.ndarray:
    """Componentwise posterior mean under the factorized Bernoulli(delta) prior:

        f_i = 1 / (1 + exp(-x_i + a_i/2 + log(1/delta - 1)))
    """
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"delta must lie in (0, 1), got {delta}")
    return expit(x - a / 2.0 - math.log(1.0 / delta - 1.0))


def threshold_vectorial(a: np.ndarray, x: np.ndarray, k: int,
                        tol: float = 1e-10) -> tuple[np.ndarray, float]:
    """Logistic threshold with the scalar shift lambda chosen so sum_i f_i = k.

    sum_i expit(c_i - lambda) is strictly decreasing in lambda, so bisection on a
    saturation bracket cannot fail; returns (f, lambda).
    """
    p = len(x)
    if not 0 < k < p:
        raise ParameterError(f"need 0 < k < p, got k={k}, p={p}")
    c = x - a / 2.0
    lo = float(np.min(c)) - 40.0  # all f ~ 1 here, so the sum is ~p > k
    hi = float(np.max(c)) + 40.0  # all f ~ 0 here
    for _ in range(_LAMBDA_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        if float(np.sum(expit(c - mid))) > k:
            lo = mid
        else:
            hi = mid
    lam = 0.5 * (lo + hi)
    f = expit(c - lam)
    if abs(float(np.sum(f)) - k) > tol:
        raise DegenerateStateError(
            f"lambda bisection left |sum f - k| = {abs(float(np.sum(f)) - k):.3e} > {tol}"
        )
    return f, lam


def jacobian_diag(f: np.ndarray, mode: str) -> np.ndarray:
    """diag of the threshold Jacobian w.r.t. the mean messages, from the outputs f.

    bernoulli: f(1-f).  vectorial: implicit differentiation of the sum constraint
    gives f(1-f) * (1 - f(1-f) / sum_j f_j(1-f_j)).
    """
    g = f * (1.0 - f)
    if mode == "bernoulli":
        return g
    if mode == "vectorial":
        s = float(np.sum(g))
        if s == 0.0:
            raise DegenerateStateError("all estimates saturated at {0,1}; Jacobian undefined")
        return g * (1.0 - g / s)
    raise ParameterError(f"mode must be one of {THRESHOLD_KINDS}, got {mode!r}")


class AmpWorkspace:
    """Per-run cache: tuple index columns, squared tensor data and chunk layout.

    Index columns are stored contiguously (one 1-D array per tuple position) so
    the per-iteration gathers and arithmetic run on contiguous memory.
    """

    def __init__(self, observations: SymTensor, chunk: int = 1 << 22):
        self.tensor = observations
        self.y = observations.data
        self.y2 = observations.data * observations.data
        self.chunk = chunk
        self.p = observations.p
        self.d = observations.d
        self.cols = [np.ascontiguousarray(observations.tuples[:, j]) for j in range(self.d)]


def _loo_columns(vals: list) -> list:
    """Leave-one-out products over a list of d equal-length arrays."""
    d = len(vals)
    pre = [None] * d
    suf = [None] * d
    pre[0] = 1.0
    suf[d - 1] = 1.0
    for j in range(1, d):
        pre[j] = pre[j - 1] * vals[j - 1]
        suf[d - 1 - j] = suf[d - j] * vals[d - j]
    return [pre[j] * suf[j] if j not in (0, d - 1) else
            (suf[0] if j == 0 else pre[d - 1]) for j in range(d)]


def _pair_leave_out_columns(w: list, s: list) -> list:
    """Entry alpha: sum_{beta != alpha} s_beta * prod_{j not in {alpha,beta}} w_j.

    Specialized for d <= 4 (the practical orders); generic product fallback above.
    """
    d = len(w)
    if d == 2:
        return [s[1], s[0]]
    if d == 3:
        return [
            s[1] * w[2] + s[2] * w[1],
            s[0] * w[2] + s[2] * w[0],
            s[0] * w[1] + s[1] * w[0],
        ]
    if d == 4:
        p01, p02, p03 = w[0] * w[1], w[0] * w[2], w[0] * w[3]
        p12, p13, p23 = w[1] * w[2], w[1] * w[3], w[2] * w[3]
        return [
            s[1] * p23 + s[2] * p13 + s[3] * p12,
            s[0] * p23 + s[2] * p03 + s[3] * p02,
            s[0] * p13 + s[1] * p03 + s[3] * p01,
            s[0] * p12 + s[1] * p02 + s[2] * p01,
        ]
    out = []
    for alpha in range(d):
        acc = 0.0
        for beta in range(d):
            if beta == alpha:
                continue
            prod = 1.0
            for j in range(d):
                if j != alpha and j != beta:
                    prod = prod * w[j]
            acc = acc + s[beta] * prod
        out.append(acc)
    return out


def _accumulate_messages(ws: AmpWorkspace, xhat, xhat_prev, sigma):
    """One pass over the tensor: returns (signal, onsager, variance) node vectors."""
    p, d = ws.p, ws.d
    signal = np.zeros(p)
    onsager = np.zeros(p)
    variance = np.zeros(p)
    wv = xhat * xhat_prev
    n = len(ws.y)
    for lo in range(0, n, ws.chunk):
        hi = min(lo + ws.chunk, n)
        cols = [c[lo:hi] for c in ws.cols]
        y = ws.y[lo:hi]
        y2 = ws.y2[lo:hi]
        xc = [xhat[c] for c in cols]
        loo = _loo_columns(xc)
        inner = _pair_leave_out_columns([wv[c] for c in cols], [sigma[c] for c in cols])
        for a in range(d):
            signal += np.bincount(cols[a], weights=y * loo[a], minlength=p)
            # prod of squares = square of prod, so the variance pass reuses loo
            variance += np.bincount(cols[a], weights=y2 * (loo[a] * loo[a]), minlength=p)
            onsager += np.bincount(cols[a], weights=y2 * inner[a], minlength=p)
    return signal, onsager, variance


def _apply_threshold(a, x, inst: PlantedInstance, config: AmpConfig):
    if config.threshold_kind == "bernoulli":
        return threshold_bernoulli(a, x, inst.params.delta)
    f, _ = threshold_vectorial(a, x, inst.params.k, tol=config.lambda_solver_tol)
    return f


def amp_step(
    state: AmpState,
    inst: PlantedInstance,
    config: AmpConfig,
    workspace: AmpWorkspace | None = None,
) -> AmpState:
    """One full AMP update; raises DivergenceError on non-finite values."""
    if workspace is None:
        workspace = AmpWorkspace(inst.observations)
    beta = inst.params.beta
    signal, onsager, variance = _accumulate_messages(
        workspace, state.xhat_cur, state.xhat_prev, state.sigma
    )
    x_msg = beta * signal - beta * beta * (workspace.d - 1) * onsager
    a_msg = beta * beta * variance
    if not (np.all(np.isfinite(x_msg)) and np.all(np.isfinite(a_msg))):
        raise DivergenceError("non-finite AMP messages", iteration=state.iter)
    f = _apply_threshold(a_msg, x_msg, inst, config)
    sigma_new = jacobian_diag(f, config.threshold_kind)
    xhat_new = f if config.damping == 0.0 else (
        (1.0 - config.damping) * f + config.damping * state.xhat_cur
    )
    if not np.all(np.isfinite(xhat_new)):
        raise DivergenceError("non-finite AMP estimate", iteration=state.iter)
    err = state.constraint_err
    if config.threshold_kind == "vectorial":
        err = max(err, abs(float(np.sum(xhat_new)) - inst.params.k))
    return AmpState(
        xhat_cur=xhat_new,
        xhat_prev=state.xhat_cur,
        x_msg=x_msg,
        a_msg=a_msg,
        sigma=sigma_new,
        iter=state.iter + 1,
        constraint_err=err,
    )


def init_state(inst: PlantedInstance, config: AmpConfig, trial: int = 0) -> AmpState:
    """Initial state.

    Uninformative: xhat = delta * (1 + 0.01 u), u uniform on [-1, 1]; informative:
    the planted indicator clipped to [0.001, 0.999].  The previous iterate is set
    equal to the current one and sigma is derived from it, so the first Onsager
    term is well defined.  In vectorial mode the init is projected onto the
    sum-k constraint through the lambda solver.
    """
    params = inst.params
    if config.init_kind == "uninformative":
        u = rng_stream(params.seed, trial, "amp-init").uniform(-1.0, 1.0, params.p)
        xhat = params.delta * (1.0 + 0.01 * u)
    else:
        xhat = np.clip(inst.signal.astype(np.float64), 0.001, 0.999)
    err = 0.0
    if config.threshold_kind == "vectorial":
        xhat, _ = threshold_vectorial(
            np.zeros(params.p), logit(xhat), params.k, tol=config.lambda_solver_tol
        )
        err = abs(float(np.sum(xhat)) - params.k)
    return AmpState(
        xhat_cur=xhat,
        xhat_prev=xhat.copy(),
        x_msg=np.zeros(params.p),
        a_msg=np.zeros(params.p),
        sigma=jacobian_diag(xhat, config.threshold_kind),
        iter=0,
        constraint_err=err,
    )


def top_k_indicator(xhat: np.ndarray, k: int) -> np.ndarray:
    """Indicator of the k largest entries; ties broken toward lower indices."""
    order = np.argsort(-xhat, kind="stable")
    out = np.zeros(len(xhat), dtype=np.int8)
    out[order[:k]] = 1
    return out


@dataclass(frozen=True)
class AmpResult:
    estimate: np.ndarray        # 0/1 indicator of the top-k posterior means
    trajectory: list            # normalized overlap with the planted signal per iteration
    n_iter: int
    converged: bool
    state: AmpState


def run_amp(
    inst: PlantedInstance,
    config: AmpConfig,
    trial: int = 0,
    workspace: AmpWorkspace | None = None,
) -> AmpResult:
    """Iterate AMP to sup-norm tolerance or max_iter; estimate = top-k of xhat."""
    if workspace is None:
        workspace = AmpWorkspace(inst.observations)
    k = inst.params.k
    state = init_state(inst, config, trial=trial)
    trajectory = []
    converged = False
    for _ in range(config.max_iter):
        try:
            state = amp_step(state, inst, config, workspace)
        except DivergenceError as exc:
            raise DivergenceError(
                str(exc), iteration=state.iter, trajectory=trajectory
            ) from None
        trajectory.append(overlap(top_k_indicator(state.xhat_cur, k), inst.signal) / k)
        if float(np.max(np.abs(state.xhat_cur - state.xhat_prev))) < config.tol:
            converged = True
            break
    return AmpResult(
        estimate=top_k_indicator(state.xhat_cur, k),
        trajectory=trajectory,
        n_iter=state.iter,
        converged=converged,
        state=state,
    )
