import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from probalg import kernels as K
from probalg._accel import HAS_NUMBA

weights = st.lists(st.integers(0, 50), min_size=1, max_size=9)
needs_numba = pytest.mark.skipif(not HAS_NUMBA, reason="numba disabled")


def subset_sums_oracle(w):
    return [sum(w[i] for i in range(len(w)) if m >> i & 1) for m in range(1 << len(w))]


class TestNumpyPath:
    @given(weights)
    def test_subset_sums(self, w):
        assert K._subset_sums_np(np.asarray(w, dtype=np.int64)).tolist() == subset_sums_oracle(w)

    @given(weights, st.data())
    def test_balanced_split(self, w, data):
        sums = K._subset_sums_np(np.asarray(w, dtype=np.int64))
        mask = data.draw(st.integers(0, (1 << len(w)) - 1))
        v, sub = K._balanced_split_np(sums, mask)
        subs = [s for s in range(mask + 1) if s & mask == s]
        assert v == min(abs(2 * sums[s] - sums[mask]) for s in subs)
        assert sub & mask == sub and abs(2 * sums[sub] - sums[mask]) == v

    def test_submasks(self):
        assert K.submasks_np(0b101).tolist() == [0, 1, 4, 5]

    def test_object_dtype(self):
        big = [2**70, 3 * 2**70, 1]
        w = K.as_weight_array(big)
        assert w.dtype == object
        sums = K.subset_sums(w)
        assert int(sums[0b111]) == sum(big)
        assert K.balanced_split(sums, 0b011) == (2**71, 0b001)

    def test_entropy(self):
        cond = np.array([[0.5, 1.0], [0.5, 0.0]])
        assert math.isclose(K._weighted_entropy_np(np.array([0.5, 0.5]), cond), 0.5 * math.log(2))


@needs_numba
class TestParity:
    @given(weights)
    def test_subset_sums(self, w):
        a = np.asarray(w, dtype=np.int64)
        assert K._subset_sums_nb(a).tolist() == K._subset_sums_np(a).tolist()

    @given(weights, st.data())
    def test_splits(self, w, data):
        sums = K._subset_sums_np(np.asarray(w, dtype=np.int64))
        mask = data.draw(st.integers(0, (1 << len(w)) - 1))
        nb = K._balanced_split_nb(sums, np.int64(mask))
        assert (int(nb[0]), int(nb[1])) == K._balanced_split_np(sums, mask)
        nb = K._finest_split_nb(sums, np.int64(mask))
        assert (int(nb[0]), int(nb[1])) == K._finest_split_np(sums, mask)

    @given(st.lists(st.integers(-40, 40), min_size=1, max_size=9))
    def test_max_abs_union(self, d):
        a = np.asarray(d, dtype=np.int64)
        v, m = K._max_abs_union_nb(a)
        vn, mn = K._max_abs_union_np(a)
        assert int(v) == int(vn) and int(m) == int(mn)

    @given(st.integers(1, 6), st.integers(1, 5), st.integers(0, 2**31))
    def test_entropy(self, r, c, seed):
        rng = np.random.default_rng(seed)
        cond = rng.random((r, c))
        cond[rng.random((r, c)) < 0.3] = 0.0
        mass = rng.random(c)
        assert abs(K._weighted_entropy_nb(mass, cond) - K._weighted_entropy_np(mass, cond)) <= 1e-12
