"""Closed-form and numerically optimized snr thresholds for the planted model.

All thresholds live on the scale-normalized snr axis gamma (see instance module)
unless the name says beta.  Binomials are evaluated through lgamma so every
formula stays finite at sizes where direct arithmetic would overflow; wherever a
direct-arithmetic path exists the two agree to ~1e-9 relative (tested).

Asymptotic regime switches (d in o(sqrt(k)), d in omega(1)) cannot be inferred
from a single finite triple (p, k, d); they are caller-supplied flags with the
documented finite-p heuristic defaults d*d < k and d >= log log p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DomainError, ParameterError
from .instance import log_binom, rate

OPTIMIZER_TOL = 1e-8

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


# ---------------------------------------------------------------------------
# recovery upper bounds (achievability of the exhaustive-search estimator)
# ---------------------------------------------------------------------------

def gamma_upper_partial(alpha_k: float, alpha_kprime: float, alpha_k_minus_kprime: float) -> float:
    """Partial-recovery achievability constant:

        sqrt(1 + a_k - 2 a_{k-k'} + a_{k'}) + sqrt(a_k - a_{k-k'} + a_{k'})
    """
    for name, a in (("alpha_k", alpha_k), ("alpha_kprime", alpha_kprime),
                    ("alpha_k_minus_kprime", alpha_k_minus_kprime)):
        if not 0.0 <= a <= 1.0:
            raise DomainError(f"{name} must lie in [0, 1], got {a}")
    first = 1.0 + alpha_k - 2.0 * alpha_k_minus_kprime + alpha_kprime
    second = alpha_k - alpha_k_minus_kprime + alpha_kprime
    if first < 0:
        raise DomainError(f"first radicand negative: 1+a_k-2a_(k-k')+a_k' = {first}")
    if second < 0:
        raise DomainError(f"second radicand negative: a_k-a_(k-k')+a_k' = {second}")
    return math.sqrt(first) + math.sqrt(second)


def gamma_upper_exact(alpha_k: float) -> float:
    """Exact-recovery specialization: sqrt(1 + 2 a_k) + sqrt(2 a_k)."""
    return gamma_upper_partial(alpha_k, alpha_k, 0.0)


def gamma_upper_fraction(alpha_k: float) -> float:
    """Constant-fraction recovery (k' = lambda*k): 1 + sqrt(a_k)."""
    if not 0.0 <= alpha_k <= 1.0:
        raise DomainError(f"alpha_k must lie in [0, 1], got {alpha_k}")
    return 1.0 + math.sqrt(alpha_k)


# ---------------------------------------------------------------------------
# recovery lower bounds (impossibility)
# ---------------------------------------------------------------------------

def gamma_lower_gauss(alpha_k: float, small_d: bool) -> float:
    """Impossibility threshold from the max-of-correlated-Gaussians argument:
    sqrt(1 - a_k) in the d in o(sqrt(k)) regime, else sqrt(1 - a_k)/sqrt(e).
    """
    if not 0.0 < alpha_k < 1.0:
        raise DomainError(f"alpha_k must lie in (0, 1), got {alpha_k}")
    v = math.sqrt(1.0 - alpha_k)
    return v if small_d else v / math.sqrt(math.e)


def gamma_lower_fano(alpha_k: float) -> float:
    """Impossibility threshold from the generalized Fano argument: sqrt((1-a_k)/2)."""
    if not 0.0 < alpha_k < 1.0:
        raise DomainError(f"alpha_k must lie in (0, 1), got {alpha_k}")
    return math.sqrt((1.0 - alpha_k) / 2.0)


def gamma_mmse(alpha_k: float) -> float:
    """Weak-recovery threshold of the tensorial minimum-MSE estimator: sqrt(1 - a_k)."""
    if not 0.0 <= alpha_k <= 1.0:
        raise DomainError(f"alpha_k must lie in [0, 1], got {alpha_k}")
    return math.sqrt(1.0 - alpha_k)


# ---------------------------------------------------------------------------
# algorithmic thresholds
# ---------------------------------------------------------------------------

def _check_pkd(p: int, k: int, d: int):
    if not (p >= 3 and p >= k >= d >= 2):
        raise ParameterError(f"need p >= k >= d >= 2 and p >= 3, got p={p}, k={k}, d={d}")


def gamma_amp(p: int, k: int, d: int) -> float:
    """Message-passing recovery threshold:

        sqrt( (1/(2e)) * (p/k)^(d-1) / (d (d-1) log p) )

    computed in log space.
    """
    _check_pkd(p, k, d)
    log_val = (
        -(1.0 + math.log(2.0))
        + (d - 1) * (math.log(p) - math.log(k))
        - math.log(d)
        - math.log(d - 1)
        - math.log(math.log(p))
    )
    return math.exp(0.5 * log_val)


def beta_amp(p: int, k: int, d: int) -> float:
    """Critical per-edge bias for message passing to reach the planted fixed point:

        sqrt( (1/(e(d-1))) * p^(2(d-1)) / (C(p-1,d-1) * k^(2(d-1))) )
    """
    _check_pkd(p, k, d)
    log_val = (
        -1.0
        - math.log(d - 1)
        + 2.0 * (d - 1) * (math.log(p) - math.log(k))
        - log_binom(p - 1, d - 1)
    )
    return math.exp(0.5 * log_val)


def gamma_sos(p: int, k: int, d: int) -> tuple[float, bool]:
    """Sum-of-squares algorithmic threshold (valid for d >= 3):

        sqrt( p^(d/2) * C(k,d) / (k^(d-1) * 2 * sqrt(log p)) )

    Returns (value, valid_flag); the flag is False below the d >= 3 regime.
    """
    _check_pkd(p, k, d)
    log_val = (
        0.5 * d * math.log(p)
        + log_binom(k, d)
        - (d - 1) * math.log(k)
        - math.log(2.0)
        - 0.5 * math.log(math.log(p))
    )
    return math.exp(0.5 * log_val), d >= 3


class PriorBounds(NamedTuple):
    lower: float
    upper: float
    branch: str  # which upper-bound regime was used


def prior_gamma_bounds(p: int, k: int, d: int, alpha_k: float | None = None) -> PriorBounds:
    """Earlier generic-prior bounds: lower sqrt(1/d); upper by the three-regime
    formula in the growth of C(k,d)/(k log p).

    Finite-p regime classification (documented heuristic): the ratio counts as
    vanishing below 0.1 and as diverging above 10; in between it is treated as
    the constant-limit branch with c = ratio.
    """
    _check_pkd(p, k, d)
    if alpha_k is None:
        alpha_k = rate(k, p)
    lower = math.sqrt(1.0 / d)
    log_ratio = log_binom(k, d) - math.log(k) - math.log(math.log(p))
    if log_ratio < math.log(0.1):
        return PriorBounds(lower, math.sqrt(2.0), "vanishing")
    if log_ratio <= math.log(10.0):
        c = math.exp(log_ratio)
        return PriorBounds(lower, 2.0 * math.sqrt(1.0 + c * (1.0 + math.log(2.0))), "constant")
    if not 0.0 < alpha_k < 1.0:
        raise DomainError(f"diverging branch needs alpha_k in (0, 1), got {alpha_k}")
    log_up = 0.5 * (log_ratio + math.log1p(math.log(2.0)) - math.log(1.0 - alpha_k))
    return PriorBounds(lower, 2.0 * math.exp(log_up), "diverging")


# ---------------------------------------------------------------------------
# detection thresholds (no closed form; 1-D numeric optimization)
# ---------------------------------------------------------------------------

def _golden_min(fn, lo: float, hi: float, tol: float = 1e-12) -> float:
    """Golden-section minimizer; returns the argmin (unimodal assumed)."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d_ = a + _GOLDEN * (b - a)
    fc, fd = fn(c), fn(d_)
    while b - a > tol:
        if fc < fd:
            b, d_, fd = d_, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d_, fd
            d_ = a + _GOLDEN * (b - a)
            fd = fn(d_)
    return 0.5 * (a + b)


def detection_objective(q: float, d: int) -> float:
    return math.sqrt(-math.log(1.0 - q * q) / q**d)


def _lambda_objective(t: float, lam: float, d: int) -> float:
    return lam * lam * t**d + math.log(1.0 - t) + t


def _sup_lambda_objective(lam: float, d: int, grid: int = 4001) -> float:
    """sup over t in (0,1) of lam^2 t^d + log(1-t) + t, grid + golden refinement.

    The objective is 0 at t=0 for every lam; admissibility is decided by strict
    interior positivity, so the scan starts just inside the interval.
    """
    lo, hi = 1e-12, 1.0 - 1e-12
    ts = [lo + (hi - lo) * i / (grid - 1) for i in range(grid)]
    vals = [_lambda_objective(t, lam, d) for t in ts]
    i = max(range(grid), key=vals.__getitem__)
    a = ts[max(i - 1, 0)]
    b = ts[min(i + 1, grid - 1)]
    t_star = _golden_min(lambda t: -_lambda_objective(t, lam, d), a, b)
    return max(vals[i], _lambda_objective(t_star, lam, d))


def detection_thresholds(d: int, tol: float = OPTIMIZER_TOL) -> tuple[float, float]:
    """The two non-closed-form detection thresholds for order d:

    - the squared-bias threshold inf_{q in (0,1)} sqrt(-log(1-q^2) / q^d),
    - lambda_c = sup{ lambda >= 0 : sup_{t in [0,1)} lambda^2 t^d + log(1-t) + t <= 0 }.
    """
    if d < 2:
        raise ParameterError(f"detection thresholds need d >= 2, got {d}")
    q_star = _golden_min(lambda q: detection_objective(q, d), 1e-9, 1.0 - 1e-9, tol=1e-12)
    beta_sq = detection_objective(min(max(q_star, 1e-9), 1.0 - 1e-9), d)

    lo, hi = 0.0, 1.0
    while _sup_lambda_objective(hi, d) <= 1e-12:
        hi *= 2.0
        if hi > 1e6:
            raise DomainError("lambda_c bracket expansion failed")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _sup_lambda_objective(mid, d) <= 1e-12:
            lo = mid
        else:
            hi = mid
    return beta_sq, 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# snr convention conversions
# ---------------------------------------------------------------------------

# Each entry maps the literature's snr parameter to mu/sigma for the unit-vector
# spike model with the stated noise variance, and back.
def _ours_factor(p, k, d):
    # gamma = (mu/sigma) * sqrt( C(k,d) / (k^(d+1) * 2 log p) )
    return math.exp(0.5 * (log_binom(k, d) - (d + 1) * math.log(k) - math.log(2 * math.log(p))))


_SCALINGS = {
    "richard": (
        lambda v, p, k, d: v * math.sqrt(p * math.factorial(d - 1)),
        lambda ms, p, k, d: ms / math.sqrt(p * math.factorial(d - 1)),
    ),
    "montanari": (
        lambda v, p, k, d: v * math.sqrt(p * math.factorial(d) / 2.0),
        lambda ms, p, k, d: ms / math.sqrt(p * math.factorial(d) / 2.0),
    ),
    "perry": (
        lambda v, p, k, d: v * math.sqrt(p * math.factorial(d) / 2.0),
        lambda ms, p, k, d: ms / math.sqrt(p * math.factorial(d) / 2.0),
    ),
    "hopkins": (
        lambda v, p, k, d: v,
        lambda ms, p, k, d: ms,
    ),
    "jagannath": (
        lambda v, p, k, d: v * math.sqrt(p),
        lambda ms, p, k, d: ms / math.sqrt(p),
    ),
    "niles": (
        lambda v, p, k, d: math.sqrt(v),
        lambda ms, p, k, d: ms * ms,
    ),
    "ours": (
        lambda v, p, k, d: v / _ours_factor(p, k, d),
        lambda ms, p, k, d: ms * _ours_factor(p, k, d),
    ),
}

SNR_SCALINGS = tuple(sorted(_SCALINGS))


def snr_convert(value: float, source: str, target: str, p: int, k: int, d: int) -> float:
    """Convert an snr value between the published parameterizations via mu/sigma."""
    try:
        to_ms = _SCALINGS[source][0]
    except KeyError:
        raise ParameterError(f"unknown snr scaling {source!r}; known: {SNR_SCALINGS}") from None
    try:
        from_ms = _SCALINGS[target][1]
    except KeyError:
        raise ParameterError(f"unknown snr scaling {target!r}; known: {SNR_SCALINGS}") from None
    if value < 0:
        raise ParameterError(f"snr values are nonnegative, got {value}")
    return from_ms(to_ms(value, p, k, d), p, k, d)


# ---------------------------------------------------------------------------
# aggregated report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThresholdReport:
    """Every threshold the package knows how to compute, for one (p, k, d)."""

    p: int
    k: int
    d: int
    kprime: int
    alpha_k: float
    small_d_regime: bool  # finite-p heuristic d^2 < k unless overridden
    growing_d_regime: bool  # finite-p heuristic d >= log log p
    gamma_ub_exact: float
    gamma_ub_partial: float
    gamma_ub_fraction: float
    gamma_lb_gauss: float
    gamma_lb_fano: float
    gamma_amp: float
    beta_amp: float
    gamma_sos: float
    gamma_sos_valid: bool
    gamma_mmse: float
    gamma_prior_lb: float
    gamma_prior_ub: float
    prior_branch: str
    beta_sq_detection: float
    lambda_c_detection: float

    NAMED_VALUES = (
        "gamma_ub_exact",
        "gamma_ub_partial",
        "gamma_ub_fraction",
        "gamma_lb_gauss",
        "gamma_lb_fano",
        "gamma_amp",
        "beta_amp",
        "gamma_sos",
        "gamma_mmse",
        "gamma_prior_lb",
        "gamma_prior_ub",
        "beta_sq_detection",
        "lambda_c_detection",
    )

    @property
    def ordering_ok(self) -> bool:
        return self.gamma_lb_fano <= self.gamma_lb_gauss <= self.gamma_ub_exact

    def named_values(self) -> dict:
        return {name: getattr(self, name) for name in self.NAMED_VALUES}


def compute_report(
    p: int,
    k: int,
    d: int,
    kprime: int | None = None,
    alpha_k: float | None = None,
    small_d: bool | None = None,
    growing_d: bool | None = None,
) -> ThresholdReport:
    _check_pkd(p, k, d)
    if kprime is None:
        kprime = max(1, (k + 1) // 2)
    if not 1 <= kprime <= k:
        raise ParameterError(f"kprime must be in [1, {k}], got {kprime}")
    if alpha_k is None:
        alpha_k = rate(k, p)
    if small_d is None:
        small_d = d * d < k
    if growing_d is None:
        growing_d = d >= math.log(max(math.log(p), math.e))
    a_kp = rate(kprime, p)
    a_kmkp = 0.0 if kprime == k else rate(k - kprime, p)
    sos_val, sos_valid = gamma_sos(p, k, d)
    prior = prior_gamma_bounds(p, k, d, alpha_k)
    beta_sq, lambda_c = detection_thresholds(d)
    return ThresholdReport(
        p=p,
        k=k,
        d=d,
        kprime=kprime,
        alpha_k=alpha_k,
        small_d_regime=small_d,
        growing_d_regime=growing_d,
        gamma_ub_exact=gamma_upper_exact(alpha_k),
        gamma_ub_partial=gamma_upper_partial(alpha_k, a_kp, a_kmkp),
        gamma_ub_fraction=gamma_upper_fraction(alpha_k),
        gamma_lb_gauss=gamma_lower_gauss(alpha_k, small_d),
        gamma_lb_fano=gamma_lower_fano(alpha_k),
        gamma_amp=gamma_amp(p, k, d),
        beta_amp=beta_amp(p, k, d),
        gamma_sos=sos_val,
        gamma_sos_valid=sos_valid,
        gamma_mmse=gamma_mmse(alpha_k),
        gamma_prior_lb=prior.lower,
        gamma_prior_ub=prior.upper,
        prior_branch=prior.branch,
        beta_sq_detection=beta_sq,
        lambda_c_detection=lambda_c,
    )
