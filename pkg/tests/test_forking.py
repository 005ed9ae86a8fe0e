import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from probalg.algebra import Subalgebra, random_algebra, random_partition, random_refinement, random_subalgebra
from probalg.conditional import cond_prob, l1_distance
from probalg.errors import NotCoarsening
from probalg.forking import (
    chain_distances,
    epsilon_forks,
    forking_chain_check,
    forking_distance,
    nonforking_extension,
    random_chain,
)
from probalg.independence import characterization_report, independent

from .conftest import algebras

F = Fraction


@pytest.fixture
def setup(four):
    a1 = four.event(["p", "r"])
    a = [a1, ~a1]
    C = Subalgebra(four, (0b0011, 0b1100))
    return four, a, Subalgebra.trivial(four), C


class TestNonForking:
    def test_example(self, setup):
        alg, a, E, C = setup
        assert cond_prob(alg, a[0], C).values == (F(3, 4), F(1, 4))
        nf = nonforking_extension(alg, a, E, C)
        assert set(cond_prob(nf.alg, nf.a2[0], nf.C).values) == {F(1, 2)}
        rep = characterization_report(nf.alg, nf.a2, nf.C, nf.E)
        assert rep.conditions == (True, True, True, True)

    def test_same_base(self, setup):
        alg, a, _, C = setup
        nf = nonforking_extension(alg, a, C, C)
        assert [cond_prob(nf.alg, x, nf.C) for x in nf.a2] == [cond_prob(nf.alg, x, nf.C) for x in nf.a]
        assert forking_distance(alg, a, C, C) == 0

    def test_needs_increasing(self, setup):
        alg, a, E, C = setup
        with pytest.raises(NotCoarsening):
            nonforking_extension(alg, a, C, E)

    @given(algebras(max_atoms=6), st.integers(1, 3))
    def test_independent_copy(self, pr, m):
        alg, rng = pr
        a = random_partition(rng, alg, m)
        E = random_subalgebra(rng, alg)
        C = random_refinement(rng, E)
        nf = nonforking_extension(alg, a, E, C)
        assert independent(nf.alg, nf.a2, nf.C, nf.E)
        assert [cond_prob(nf.alg, x, nf.E) for x in nf.a2] == [cond_prob(nf.alg, x, nf.E) for x in nf.a]


class TestEpsilonForking:
    def test_example(self, setup):
        alg, a, E, C = setup
        assert forking_distance(alg, a, E, C) == F(1, 4)
        assert epsilon_forks(alg, a, E, C, F(1, 8))
        # strict: a distance equal to eps is not a fork
        assert not epsilon_forks(alg, a, E, C, F(1, 4))

    def test_no_fork_over_itself(self, setup):
        alg, a, _, C = setup
        assert not any(epsilon_forks(alg, a, C, C, F(1, 2**j)) for j in range(1, 8))

    @given(algebras(max_atoms=6), st.integers(2, 3))
    def test_distance_oracle(self, pr, m):
        # the non-forking copy has P(.|C) = P(.|E), so the distance is max_i ||P(a_i|C) - P(a_i|E)||_1
        alg, rng = pr
        a = random_partition(rng, alg, m)
        E = random_subalgebra(rng, alg)
        C = random_refinement(rng, E)
        expected = max(l1_distance(alg, cond_prob(alg, x, C), cond_prob(alg, x, E)) for x in a)
        assert forking_distance(alg, a, E, C) == expected


class TestChains:
    def test_chain_increases(self):
        rng = random.Random(5)
        alg = random_algebra(rng, 8)
        chain = random_chain(rng, alg, 10)
        assert all(lo.is_subalgebra_of(hi) for lo, hi in zip(chain, chain[1:]))

    def test_rejects_non_chain(self, setup):
        alg, a, E, C = setup
        with pytest.raises(NotCoarsening):
            forking_chain_check(alg, a, [C, E], F(1, 2))

    @pytest.mark.parametrize("seed", range(8))
    def test_bound(self, seed):
        rng = random.Random(seed)
        alg = random_algebra(rng, rng.randint(2, 10))
        a = random_partition(rng, alg, rng.randint(2, 4))
        chain = random_chain(rng, alg, 10)
        dists = chain_distances(alg, a, chain)
        for eps in (F(1, 2), F(1, 3), F(1, 4)):
            rep = forking_chain_check(alg, a, chain, eps, distances=dists)
            assert rep.ok
            assert all(d >= 0 for d in rep.norm_increments)
            assert sum(rep.norm_increments) <= 1

    def test_single_step_fork(self, setup):
        alg, a, E, C = setup
        rep = forking_chain_check(alg, a, [E, C], F(1, 8))
        assert rep.forking_steps == [0] and rep.longest_run == 1 and rep.ok
