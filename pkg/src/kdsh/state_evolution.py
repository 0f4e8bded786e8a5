"""Deterministic prediction of the AMP dynamics.

Scalar (factorized) recursion for the mean overlap m = (1/p)<x, xhat> of a
Bernoulli(delta) prior, delta = k/p:

    m' = delta * E_z[ f(mhat, mhat + sqrt(mhat) z) ],   z ~ N(0,1)

with the effective snr of the messages

    mhat = beta^2 * C(p-1, d-1) * m^(d-1).

(The tensor-valued overlap that appears in the multidimensional recursion has
components equal to the (d-1)-th power of the mean overlap, which is where the
power comes from; the d = 2 case is the familiar linear map.)  The expectation
is evaluated by Gauss-Hermite quadrature, so fixed points are deterministic and
phase grids are smooth.

In the sparse limit delta -> 0 the threshold linearizes and the recursion
collapses to the closed form m' = delta^2 * exp(mhat), whose fixed-point escape
is exactly the mechanism defining the analytic recovery threshold (see
thresholds.beta_amp).

Overlap normalization: the reported quantity is m / delta in [0, 1]; informative
initialization means m = delta (the raw overlap of a delta-sparse signal with
itself is delta, not 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .errors import ParameterError
from .instance import rng_stream
from .tensor import binom

DEFAULT_QUAD_ORDER = 61
_HERMITE_CACHE: dict = {}


def _hermite_nodes(order: int):
    if order < 3:
        raise ParameterError(f"quadrature order must be >= 3, got {order}")
    if order not in _HERMITE_CACHE:
        t, w = np.polynomial.hermite.hermgauss(order)
        # E_z g(z) = (1/sqrt(pi)) sum_i w_i g(sqrt(2) t_i)
        _HERMITE_CACHE[order] = (math.sqrt(2.0) * t, w / math.sqrt(math.pi))
    return _HERMITE_CACHE[order]


@dataclass(frozen=True)
class SeState:
    m: float       # mean overlap, in [0, delta]
    m_hat: float   # effective message snr that produced m
    iter: int = 0

    def normalized(self, delta: float) -> float:
        return self.m / delta


def message_snr(m: float, p: int, k: int, d: int, beta: float) -> float:
    return beta * beta * binom(p - 1, d - 1) * max(m, 0.0) ** (d - 1)


def bernoulli_se_expectation(m_hat: float, delta: float, order: int = DEFAULT_QUAD_ORDER) -> float:
    """delta * E_z[f(mhat, mhat + sqrt(mhat) z)] for the Bernoulli threshold."""
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"delta must lie in (0, 1), got {delta}")
    z, w = _hermite_nodes(order)
    log_odds = math.log(1.0 / delta - 1.0)
    vals = expit(m_hat / 2.0 + math.sqrt(max(m_hat, 0.0)) * z - log_odds)
    return delta * float(w @ vals)


def se_step_factorized(
    state: SeState, p: int, k: int, d: int, beta: float, order: int = DEFAULT_QUAD_ORDER
) -> SeState:
    """One scalar SE step; the new overlap is clipped to the physical range [0, delta]."""
    delta = k / p
    m = min(max(state.m, 0.0), delta)
    m_hat = message_snr(m, p, k, d, beta)
    m_new = min(max(bernoulli_se_expectation(m_hat, delta, order), 0.0), delta)
    return SeState(m=m_new, m_hat=m_hat, iter=state.iter + 1)


def se_step_small_delta(m: float, p: int, k: int, d: int, beta: float) -> float:
    """Closed-form sparse-limit map m' = delta^2 exp(mhat); diverges above threshold
    (callers cap at the physical ceiling m = delta)."""
    if m < 0:
        raise ParameterError(f"overlap must be nonnegative, got {m}")
    delta = k / p
    m_hat = message_snr(m, p, k, d, beta)
    try:
        return delta * delta * math.exp(m_hat)
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class SeFixedPoint:
    m_star: float
    normalized: float
    iterations: int
    converged: bool
    oscillating: bool


def se_fixed_point(
    p: int,
    k: int,
    d: int,
    beta: float,
    init: str = "ui",
    tol: float = 1e-10,
    max_iter: int = 4000,
    order: int = DEFAULT_QUAD_ORDER,
) -> SeFixedPoint:
    """Iterate the factorized SE to a fixed point.

    init "ui" starts at m = 0 (the first step lands at delta^2 regardless), "ii"
    at the planted overlap m = delta.  Convergence is |dm| < tol * delta; if the
    iteration ends in a two-cycle the average of the last two iterates is
    reported with the oscillation flag set.
    """
    if init not in ("ui", "ii"):
        raise ParameterError(f"init must be 'ui' or 'ii', got {init!r}")
    delta = k / p
    state = SeState(m=0.0 if init == "ui" else delta, m_hat=0.0)
    m_prev = state.m
    m_2ago = None
    for _ in range(max_iter):
        state = se_step_factorized(state, p, k, d, beta, order)
        if abs(state.m - m_prev) < tol * delta:
            return SeFixedPoint(state.m, state.m / delta, state.iter, True, False)
        if m_2ago is not None and abs(state.m - m_2ago) < tol * delta:
            m_star = 0.5 * (state.m + m_prev)  # two-cycle: report the midpoint
            return SeFixedPoint(m_star, m_star / delta, state.iter, False, True)
        m_2ago, m_prev = m_prev, state.m
    return SeFixedPoint(state.m, state.m / delta, state.iter, False, False)


def iterate_small_delta(p: int, k: int, d: int, beta: float, steps: int):
    """Iterate the sparse-limit map from m = 0, capped at the ceiling m = delta.

    Returns (trajectory, escaped): escaped means the uncapped map exceeded delta.
    """
    delta = k / p
    m = 0.0
    traj = []
    escaped = False
    for _ in range(steps):
        m_next = se_step_small_delta(m, p, k, d, beta)
        if m_next > delta:
            escaped = True
            m_next = delta
        traj.append(m_next)
        if m_next == m:
            break
        m = m_next
    return traj, escaped


# ---------------------------------------------------------------------------
# multidimensional SE (Monte Carlo)
# ---------------------------------------------------------------------------

def _elem_sym_leave_one_out(v: np.ndarray, j: int) -> np.ndarray:
    """e_j of each row of v with one coordinate removed, for every coordinate.

    Newton's identities give the full-row e_0..e_j; the leave-one-out values
    follow from the recurrence e_t(v\\i) = e_t(v) - v_i * e_{t-1}(v\\i).
    """
    n, p = v.shape
    powers = [np.ones((n, 1))]  # power sums broadcast later; index 0 unused
    for t in range(1, j + 1):
        powers.append(np.sum(v**t, axis=1, keepdims=True))
    e_full = [np.ones((n, 1))]
    for t in range(1, j + 1):
        acc = np.zeros((n, 1))
        for i in range(1, t + 1):
            acc += (-1.0) ** (i - 1) * e_full[t - i] * powers[i]
        e_full.append(acc / t)
    loo = np.ones((n, p))
    for t in range(1, j + 1):
        loo = e_full[t] - v * loo
    return loo


def _sample_signals(n: int, p: int, k: int, rng) -> np.ndarray:
    """n uniform k-subset indicators, one per row."""
    u = rng.random((n, p))
    idx = np.argpartition(u, k - 1, axis=1)[:, :k]
    out = np.zeros((n, p))
    np.put_along_axis(out, idx, 1.0, axis=1)
    return out


def _batch_vectorial(c: np.ndarray, k: int) -> np.ndarray:
    """Row-wise vectorial threshold: expit(c_i - lambda_row) with row sums = k."""
    lo = c.min(axis=1) - 40.0
    hi = c.max(axis=1) + 40.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        too_big = expit(c - mid[:, None]).sum(axis=1) > k
        lo = np.where(too_big, mid, lo)
        hi = np.where(too_big, hi, mid)
    return expit(c - (0.5 * (lo + hi))[:, None])


def se_step_multidimensional(
    samples: int,
    p: int,
    k: int,
    d: int,
    beta: float,
    m_vec: np.ndarray,
    seed: int = 0,
    trial: int = 0,
    threshold_kind: str = "vectorial",
    batch: int = 4096,
) -> tuple[np.ndarray, np.ndarray]:
    """Monte Carlo estimate of the multidimensional overlap update.

    Per sample: draw x uniform over the k-subsets and z ~ N(0, I_p), apply the
    threshold to (mhat, mhat*x + sqrt(mhat)*z) with mhat = beta^2 C(p-1,d-1) m,
    and contract v = x*f through the per-node leave-one-out elementary symmetric
    polynomial e_{d-1}(v without i) / C(p-1, d-1).

    Returns (component means, component standard errors).  The tensor-valued
    overlap has no canonical scalar normalization; callers wanting one number
    should take the mean over components (that interpretation is this module's,
    not a contract).
    """
    if samples < 100:
        raise ParameterError(f"need at least 100 samples, got {samples}")
    if threshold_kind not in ("bernoulli", "vectorial"):
        raise ParameterError(f"unknown threshold kind {threshold_kind!r}")
    m_vec = np.maximum(np.asarray(m_vec, dtype=np.float64), 0.0)
    if m_vec.shape != (p,):
        raise ParameterError(f"m_vec must have shape ({p},), got {m_vec.shape}")
    scale = binom(p - 1, d - 1)
    m_hat = beta * beta * scale * m_vec
    rng = rng_stream(seed, trial, "multidim-se")
    delta = k / p
    log_odds = math.log(1.0 / delta - 1.0)
    total = np.zeros(p)
    total_sq = np.zeros(p)
    done = 0
    while done < samples:
        n = min(batch, samples - done)
        x = _sample_signals(n, p, k, rng)
        z = rng.standard_normal((n, p))
        c = m_hat * x + np.sqrt(m_hat) * z - m_hat / 2.0
        if threshold_kind == "bernoulli":
            f = expit(c - log_odds)
        else:
            f = _batch_vectorial(c, k)
        contrib = _elem_sym_leave_one_out(x * f, d - 1) / scale
        total += contrib.sum(axis=0)
        total_sq += (contrib * contrib).sum(axis=0)
        done += n
    mean = total / samples
    var = np.maximum(total_sq / samples - mean * mean, 0.0)
    return mean, np.sqrt(var / samples)


# ---------------------------------------------------------------------------
# phase grid
# ---------------------------------------------------------------------------

def phase_grid(
    p: int,
    d: int,
    k_values,
    beta_values,
    init_kinds=("ui", "ii"),
    order: int = DEFAULT_QUAD_ORDER,
    tol: float = 1e-10,
    max_iter: int = 4000,
):
    """Normalized SE fixed points over a (k, beta) grid, plus the analytic
    threshold for overlay.  Returns a list of row dicts."""
    from .instance import beta_to_gamma
    from .thresholds import beta_amp, gamma_amp

    if len(beta_values) == 0 or len(k_values) == 0:
        raise ParameterError("phase grid must be nonempty")
    rows = []
    for k in k_values:
        b_amp = beta_amp(p, k, d)
        g_amp = gamma_amp(p, k, d)
        for init in init_kinds:
            for beta in beta_values:
                fp = se_fixed_point(p, k, d, beta, init=init, tol=tol,
                                    max_iter=max_iter, order=order)
                rows.append({
                    "p": p, "d": d, "k": k,
                    "beta": float(beta),
                    "gamma": beta_to_gamma(float(beta), p, k, d),
                    "init": init,
                    "m_star_normalized": fp.normalized,
                    "iters": fp.iterations,
                    "converged": int(fp.converged),
                    "beta_amp_claim": b_amp,
                    "gamma_amp_claim": g_amp,
                })
    return rows


def transition_beta(
    p: int,
    k: int,
    d: int,
    init: str = "ui",
    target: float = 0.5,
    lo: float | None = None,
    hi: float | None = None,
    steps: int = 40,
    order: int = DEFAULT_QUAD_ORDER,
    max_iter: int = 4000,
) -> float:
    """Smallest beta whose SE fixed point reaches the target normalized overlap.

    The fixed point is nondecreasing in beta (the SE map is monotone in the
    message snr), so bisection applies.
    """
    from .thresholds import beta_amp

    ref = beta_amp(p, k, d)
    lo = 0.01 * ref if lo is None else lo
    hi = 5.0 * ref if hi is None else hi
    while se_fixed_point(p, k, d, hi, init=init, max_iter=max_iter, order=order).normalized < target:
        hi *= 2.0
        if hi > 1e6 * ref:
            raise ParameterError("no transition found below 1e6 * beta_amp")
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if se_fixed_point(p, k, d, mid, init=init, max_iter=max_iter, order=order).normalized >= target:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
