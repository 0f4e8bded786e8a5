import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_contract_map, brute_inner_with_power, colex_sorted_tuples
from kdsh.errors import CapacityError, DimensionError, InvalidIndexError
from kdsh.tensor import (
    SymTensor,
    binom,
    colex_tuples,
    contract_map,
    elementwise_square,
    inner_with_power,
    rank,
    rank_rows,
    unrank,
)


class TestRankUnrank:
    def test_first_tuple(self):
        assert rank((0, 1, 2), 5) == 0
        assert unrank(0, 5, 3) == (0, 1, 2)

    def test_colex_examples(self):
        # frozen from the independent colex enumeration oracle
        assert rank((1, 2, 3), 4) == 3
        assert rank((0, 3), 4) == 3
        assert unrank(3, 4, 3) == (1, 2, 3)

    def test_last_tuple(self):
        for p, d in [(7, 3), (10, 2), (9, 4)]:
            assert unrank(binom(p, d) - 1, p, d) == tuple(range(p - d, p))

    @pytest.mark.parametrize("p,d", [(6, 2), (8, 3), (10, 4), (20, 4), (20, 2), (15, 3)])
    def test_bijection_exhaustive(self, p, d):
        for r, t in enumerate(colex_sorted_tuples(p, d)):
            assert rank(t, p) == r
            assert unrank(r, p, d) == t

    def test_rank_rejects_bad_tuples(self):
        with pytest.raises(InvalidIndexError):
            rank((2, 1, 3), 5)
        with pytest.raises(InvalidIndexError):
            rank((1, 1, 3), 5)
        with pytest.raises(InvalidIndexError):
            rank((0, 1, 5), 5)

    def test_unrank_rejects_out_of_range(self):
        with pytest.raises(InvalidIndexError):
            unrank(binom(6, 3), 6, 3)
        with pytest.raises(InvalidIndexError):
            unrank(-1, 6, 3)

    @given(st.data())
    @settings(max_examples=200, deadline=None)
    def test_bijection_property(self, data):
        p = data.draw(st.integers(2, 40))
        d = data.draw(st.integers(1, min(p, 5)))
        r = data.draw(st.integers(0, binom(p, d) - 1))
        t = unrank(r, p, d)
        assert rank(t, p) == r

    def test_colex_tuples_matches_oracle(self):
        for p, d in [(6, 2), (7, 3), (8, 4)]:
            arr = colex_tuples(p, d)
            oracle = colex_sorted_tuples(p, d)
            assert arr.shape == (binom(p, d), d)
            for r, t in enumerate(oracle):
                assert tuple(arr[r]) == t

    def test_rank_rows(self):
        arr = colex_tuples(9, 3)
        assert np.array_equal(rank_rows(arr, 9, 3), np.arange(binom(9, 3)))


class TestSymTensor:
    def test_zeros_shape(self):
        t = SymTensor.zeros(7, 3)
        assert t.n_entries == binom(7, 3)
        assert t.data.sum() == 0.0

    def test_bad_data_length(self):
        with pytest.raises(DimensionError):
            SymTensor(6, 2, np.zeros(5))

    def test_capacity_guard(self):
        with pytest.raises(CapacityError):
            SymTensor.zeros(100, 4, max_entries=1000)

    def test_value_roundtrip(self, rng):
        t = SymTensor(6, 3, rng.standard_normal(binom(6, 3)))
        for tup in itertools.combinations(range(6), 3):
            assert t.value(tup) == t.data[rank(tup, 6)]

    def test_elementwise_square(self, rng):
        t = SymTensor(7, 2, np.full(binom(7, 2), 2.0))
        assert np.all(elementwise_square(t).data == 4.0)
        z = SymTensor.zeros(7, 2)
        assert np.all(elementwise_square(z).data == 0.0)
        m = SymTensor(7, 2, rng.standard_normal(binom(7, 2)))
        sq = elementwise_square(m)
        assert np.all(sq.data >= 0.0)
        # loop-oracle check: total equals the squared Frobenius norm on stored entries
        assert sq.data.sum() == pytest.approx(sum(v * v for v in m.data), rel=1e-12)

    def test_dump_load_bit_exact(self, rng, tmp_path):
        t = SymTensor(9, 3, rng.standard_normal(binom(9, 3)))
        path = tmp_path / "tensor.bin"
        t.dump(path)
        back = SymTensor.load(path)
        assert back.p == t.p and back.d == t.d
        assert np.array_equal(back.data, t.data)
        assert back.data.tobytes() == t.data.tobytes()

    def test_load_rejects_bad_magic(self, tmp_path):
        path = tmp_path / "junk.bin"
        path.write_bytes(b"NOPE" + b"\x00" * 16)
        with pytest.raises(InvalidIndexError):
            SymTensor.load(path)


class TestContractions:
    def test_all_ones_p4_d3(self):
        # every component = C(3, 2) = 3 (frozen from the brute-force triple loop)
        t = SymTensor(4, 3, np.ones(binom(4, 3)))
        x = np.ones(4)
        out = contract_map(t, x)
        assert np.allclose(out, 3.0)
        assert np.allclose(out, brute_contract_map(t, x))

    def test_zero_tensor(self):
        t = SymTensor.zeros(6, 3)
        assert np.all(contract_map(t, np.ones(6)) == 0.0)

    def test_indicator_components(self):
        # all-ones tensor, x = indicator of a k-set: C(k-1, d-1) inside, C(k, d-1) outside
        p, k, d = 6, 3, 2
        t = SymTensor(p, d, np.ones(binom(p, d)))
        x = np.zeros(p)
        x[:k] = 1.0
        out = contract_map(t, x)
        expected = np.where(np.arange(p) < k, binom(k - 1, d - 1), binom(k, d - 1))
        assert np.allclose(out, expected)
        assert np.allclose(out, brute_contract_map(t, x))

    def test_contract_matches_brute_force_random(self, rng):
        for p, d in [(6, 2), (7, 3), (8, 4)]:
            t = SymTensor(p, d, rng.standard_normal(binom(p, d)))
            x = rng.standard_normal(p)
            assert np.allclose(contract_map(t, x), brute_contract_map(t, x), atol=1e-12)

    def test_dimension_mismatch(self):
        t = SymTensor.zeros(6, 2)
        with pytest.raises(DimensionError):
            contract_map(t, np.ones(5))
        with pytest.raises(DimensionError):
            inner_with_power(t, np.ones(7))

    def test_inner_zero_noise_planted(self):
        # bias-only tensor: S(planted) = beta * C(k, d)
        p, k, d, beta = 7, 4, 3, 2.5
        t = SymTensor.zeros(p, d)
        x = np.zeros(p)
        x[:k] = 1.0
        for tup in itertools.combinations(range(k), d):
            t.data[rank(tup, p)] = beta
        assert inner_with_power(t, x) == pytest.approx(beta * binom(k, d))

    def test_inner_all_zero_vector(self, rng):
        t = SymTensor(8, 3, rng.standard_normal(binom(8, 3)))
        assert inner_with_power(t, np.zeros(8)) == 0.0

    def test_inner_matches_enumeration(self, rng):
        # random Y, random 0/1 x at p=8, k=4, d=3: sum over the C(4,3) inside tuples
        p, k, d = 8, 4, 3
        t = SymTensor(p, d, rng.standard_normal(binom(p, d)))
        support = rng.choice(p, size=k, replace=False)
        x = np.zeros(p)
        x[support] = 1.0
        expected = sum(
            t.value(tup) for tup in itertools.combinations(sorted(support), d)
        )
        assert inner_with_power(t, x) == pytest.approx(expected, rel=1e-12)
        assert inner_with_power(t, x) == pytest.approx(brute_inner_with_power(t, x), rel=1e-12)

    @given(st.integers(4, 8), st.integers(2, 4), st.integers(0, 10**6))
    @settings(max_examples=30, deadline=None)
    def test_scatter_gather_identity(self, p, d, seed):
        # sum_i contract(Y, x)_i x_i = d * inner(Y, x) for 0/1 x
        d = min(d, p - 1)
        r = np.random.default_rng(seed)
        t = SymTensor(p, d, r.standard_normal(binom(p, d)))
        k = r.integers(d, p + 1)
        x = np.zeros(p)
        x[r.choice(p, size=k, replace=False)] = 1.0
        lhs = float(np.dot(contract_map(t, x), x))
        assert lhs == pytest.approx(d * inner_with_power(t, x), rel=1e-10, abs=1e-10)

    def test_chunked_paths_agree(self, rng):
        t = SymTensor(9, 3, rng.standard_normal(binom(9, 3)))
        x = rng.standard_normal(9)
        assert np.allclose(contract_map(t, x, chunk=7), contract_map(t, x))
        assert inner_with_power(t, x, chunk=7) == pytest.approx(inner_with_power(t, x))
