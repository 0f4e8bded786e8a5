"""Shared test helpers: brute-force reference implementations kept deliberately
independent of the library's vectorized paths (nested loops, itertools)."""

import itertools
import math

import numpy as np
import pytest
from scipy.special import expit

from kdsh.amp import AmpConfig, run_amp


def colex_sorted_tuples(p, d):
    """Independent colex enumeration: sort by reversed tuple."""
    return sorted(itertools.combinations(range(p), d), key=lambda t: tuple(reversed(t)))


def brute_contract_map(tensor, x):
    """Nested-loop version of the node contraction."""
    p, d = tensor.p, tensor.d
    out = np.zeros(p)
    for t in itertools.combinations(range(p), d):
        v = tensor.value(t)
        for i in t:
            prod = 1.0
            for j in t:
                if j != i:
                    prod *= x[j]
            out[i] += v * prod
    return out


def brute_inner_with_power(tensor, x):
    total = 0.0
    for t in itertools.combinations(range(tensor.p), tensor.d):
        prod = tensor.value(t)
        for i in t:
            prod *= x[i]
        total += prod
    return total


def brute_amp_messages(y, beta, xhat, xhat_prev, sigma):
    """Literal per-node evaluation of the AMP mean/variance message sums.

    x_i  = beta * sum over increasing (d-1)-tuples avoiding i of Y * prod xhat
           - beta^2 (d-1) sum_{i2 != i} sigma_{i2}
             * sum over increasing (d-2)-tuples avoiding {i, i2} of Y^2 * prod w
    a_i  = beta^2 * sum over increasing (d-1)-tuples avoiding i of Y^2 * prod xhat^2
    with w = xhat * xhat_prev; the empty inner product (d = 2) counts as 1.
    """
    p, d = y.p, y.d
    w = xhat * xhat_prev
    x_msg = np.zeros(p)
    a_msg = np.zeros(p)
    for i in range(p):
        others = [j for j in range(p) if j != i]
        sig = 0.0
        var = 0.0
        for rest in itertools.combinations(others, d - 1):
            v = y.value(tuple(sorted((i,) + rest)))
            prod = 1.0
            prod2 = 1.0
            for j in rest:
                prod *= xhat[j]
                prod2 *= xhat[j] * xhat[j]
            sig += v * prod
            var += v * v * prod2
        ons = 0.0
        for i2 in others:
            inner = 0.0
            pool = [j for j in range(p) if j != i and j != i2]
            for rest in itertools.combinations(pool, d - 2):
                v = y.value(tuple(sorted((i, i2) + rest)))
                prod = 1.0
                for j in rest:
                    prod *= w[j]
                inner += v * v * prod
            ons += sigma[i2] * inner
        x_msg[i] = beta * sig - beta * beta * (d - 1) * ons
        a_msg[i] = beta * beta * var
    return x_msg, a_msg


def matrix_amp_messages(y, beta, xhat, xhat_prev, sigma):
    """Hand-written d=2 (matrix) AMP messages from the dense symmetric matrix."""
    p = y.p
    m = np.zeros((p, p))
    for (i, j), v in zip(y.tuples, y.data):
        m[i, j] = v
        m[j, i] = v
    x_msg = beta * (m @ xhat) - beta**2 * ((m * m) @ sigma)
    a_msg = beta**2 * ((m * m) @ (xhat * xhat))
    return x_msg, a_msg


def logistic_threshold_oracle(a, x, shift):
    """Direct logistic evaluation used as the threshold oracle."""
    return expit(x - a / 2.0 - shift)


def run_amp_checked(inst, config, trial=0):
    """run_amp plus the hard sum-constraint assertion for vectorial runs."""
    res = run_amp(inst, config, trial=trial)
    if config.threshold_kind == "vectorial":
        assert res.state.constraint_err <= 1e-6, (
            f"sum constraint violated by {res.state.constraint_err}"
        )
    return res


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
