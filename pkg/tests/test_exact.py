import itertools
import math

import numpy as np
import pytest
from scipy.stats import hypergeom

from kdsh.errors import CapacityError, ParameterError
from kdsh.exact import (
    MleResult,
    enumerate_solutions,
    max_by_overlap_class,
    mle_solve,
    recovery_rate,
)
from kdsh.instance import PlantedInstance, ProblemParams, generate_instance, overlap
from kdsh.tensor import SymTensor, binom, inner_with_power


def brute_mle(inst):
    """Second, fully independent exhaustive scan."""
    best = None
    best_w = -math.inf
    for combo in itertools.combinations(range(inst.params.p), inst.params.k):
        x = np.zeros(inst.params.p)
        x[list(combo)] = 1.0
        w = inner_with_power(inst.observations, x)
        if w > best_w:
            best_w = w
            best = combo
    return best, best_w


class TestEnumerate:
    def test_counts(self):
        assert len(list(enumerate_solutions(4, 2))) == 6
        assert len(list(enumerate_solutions(5, 5))) == 1

    def test_distinct_with_k_ones(self):
        sols = list(enumerate_solutions(12, 4))
        assert len(sols) == 495
        seen = {tuple(s) for s in sols}
        assert len(seen) == 495
        assert all(s.sum() == 4 for s in sols)

    def test_cap(self):
        with pytest.raises(CapacityError):
            list(enumerate_solutions(100, 50, cap=10**6))


class TestMleSolve:
    def test_zero_noise_returns_planted(self):
        pr = ProblemParams.with_beta(10, 4, 3, 2.0, seed=1)
        inst = generate_instance(pr, noise="zero")
        res = mle_solve(inst)
        assert np.array_equal(res.argmax_signal, inst.signal)
        assert res.overlap_with_planted == 4
        assert res.max_weight == pytest.approx(2.0 * binom(4, 3))
        assert res.tie_count == 1

    def test_matches_independent_scan_pure_noise(self):
        pr = ProblemParams.with_beta(9, 3, 2, 0.0, seed=4)
        for t in range(5):
            inst = generate_instance(pr, trial=t)
            res = mle_solve(inst)
            combo, w = brute_mle(inst)
            assert tuple(np.flatnonzero(res.argmax_signal)) == combo
            assert res.max_weight == pytest.approx(w, rel=1e-12)

    def test_tie_break_lexicographic(self):
        # all-equal tensor: every k-subset ties; lexicographically smallest wins
        pr = ProblemParams.with_beta(7, 3, 2, 0.0, seed=0)
        inst = generate_instance(pr, noise="zero")
        res = mle_solve(inst)
        assert tuple(np.flatnonzero(res.argmax_signal)) == (0, 1, 2)
        assert res.tie_count == binom(7, 3)

    def test_rescaling_invariance(self):
        pr = ProblemParams.with_beta(9, 3, 2, 0.7, seed=8)
        inst = generate_instance(pr, trial=2)
        res = mle_solve(inst)
        scaled = PlantedInstance(
            pr,
            inst.signal,
            SymTensor(9, 2, inst.observations.data * 37.5),
        )
        res2 = mle_solve(scaled)
        assert np.array_equal(res.argmax_signal, res2.argmax_signal)

    def test_high_snr_regime_recovers(self):
        pr = ProblemParams.with_gamma(10, 3, 2, 6.0, seed=21)
        stats = recovery_rate(pr, trials=200, kprime=3)
        assert stats.exact_rate >= 0.95


class TestOverlapClasses:
    def test_class_k_is_planted(self):
        pr = ProblemParams.with_beta(8, 3, 2, 1.0, seed=3)
        inst = generate_instance(pr)
        planted_w = inner_with_power(inst.observations, inst.signal.astype(float))
        assert max_by_overlap_class(inst, 3) == pytest.approx(planted_w)

    def test_filtered_scan_oracle(self):
        pr = ProblemParams.with_beta(6, 3, 2, 0.5, seed=6)
        inst = generate_instance(pr)
        expected = -math.inf
        for combo in itertools.combinations(range(6), 3):
            x = np.zeros(6)
            x[list(combo)] = 1.0
            if int(x @ inst.signal) == 2:
                expected = max(expected, inner_with_power(inst.observations, x))
        assert max_by_overlap_class(inst, 2) == pytest.approx(expected)

    def test_empty_class_sentinel(self):
        # p=6, k=3: overlap 0 needs 3 nodes outside, fine; p=5, k=3 makes m=0 empty
        pr = ProblemParams.with_beta(5, 3, 2, 1.0, seed=1)
        inst = generate_instance(pr)
        assert max_by_overlap_class(inst, 0) == -math.inf

    def test_out_of_range(self):
        pr = ProblemParams.with_beta(6, 3, 2, 1.0)
        inst = generate_instance(pr)
        with pytest.raises(ParameterError):
            max_by_overlap_class(inst, 4)

    def test_partition_is_exhaustive(self):
        # the max over all overlap classes is the global max
        pr = ProblemParams.with_beta(8, 3, 2, 0.8, seed=13)
        for t in range(3):
            inst = generate_instance(pr, trial=t)
            class_max = max(max_by_overlap_class(inst, m) for m in range(4))
            assert class_max == pytest.approx(mle_solve(inst).max_weight, rel=1e-12)


class TestRecoveryRate:
    def test_zero_noise_rate_one(self):
        pr = ProblemParams.with_beta(8, 3, 2, 5.0, seed=2)
        overlaps = []
        for t in range(5):
            inst = generate_instance(pr, trial=t, noise="zero")
            overlaps.append(mle_solve(inst).overlap_with_planted)
        assert overlaps == [3] * 5

    def test_hypergeometric_baseline(self):
        # gamma = 0: the argmax is a uniformly random subset by symmetry
        pr = ProblemParams.with_gamma(10, 3, 2, 0.0, seed=31)
        stats = recovery_rate(pr, trials=2000, kprime=1)
        expected = 1.0 - hypergeom.pmf(0, 10, 3, 3)
        assert expected == pytest.approx(0.70833, abs=1e-4)
        assert abs(stats.rate - expected) < 0.05

    def test_monotone_spot_check(self):
        lo = recovery_rate(ProblemParams.with_gamma(12, 4, 3, 0.2, seed=7), 200, 4)
        hi = recovery_rate(ProblemParams.with_gamma(12, 4, 3, 5.0, seed=7), 200, 4)
        assert hi.rate >= lo.rate

    def test_union_bound_sanity(self):
        # empirical P(fail k'-recovery) vs the overlap-class union bound
        pr = ProblemParams.with_gamma(10, 3, 2, 1.0, seed=41)
        trials = 300
        kprime = 2
        fails = 0
        class_events = np.zeros(kprime)
        for t in range(trials):
            inst = generate_instance(pr, trial=t)
            planted_w = inner_with_power(inst.observations, inst.signal.astype(float))
            res = mle_solve(inst)
            if res.overlap_with_planted < kprime:
                fails += 1
            for m in range(kprime):
                if planted_w < max_by_overlap_class(inst, m):
                    class_events[m] += 1
        lhs = fails / trials
        rhs = class_events.sum() / trials
        mc_se = math.sqrt(0.25 / trials)
        assert lhs <= rhs + 3 * mc_se

    def test_parameter_validation(self):
        pr = ProblemParams.with_beta(8, 3, 2, 1.0)
        with pytest.raises(ParameterError):
            recovery_rate(pr, trials=0, kprime=1)
        with pytest.raises(ParameterError):
            recovery_rate(pr, trials=1, kprime=5)
