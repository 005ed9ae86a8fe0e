import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given

from probalg.algebra import FiniteProbabilityAlgebra, random_algebra, uniform_algebra
from probalg.atoms import (
    PhiInvariant,
    at_n,
    atoms_report,
    chi,
    chi_with_witness,
    elementarily_equivalent,
    find_isomorphism,
    phi_invariant,
    phi_n_bruteforce,
    phi_n_closed,
    psi,
    theta,
    theta_with_witness,
)
from probalg.errors import AtomCapExceeded

from .conftest import algebras

F = Fraction


def phi_oracle(alg, a, n):
    # distance to the nearest union of at most n atoms, by enumerating those unions
    best = a.mu
    for r in range(1, n + 1):
        for combo in itertools.combinations(range(alg.k), r):
            u = alg.event(list(combo))
            best = min(best, (a ^ u).mu)
    return best


def chi_oracle(alg, a):
    return min(abs((a & y).mu - (a - y).mu) for y in alg.all_events())


class TestAtN:
    def test_examples(self, tri):
        assert at_n(tri, tri.full(), 1) == F(1, 2)
        assert at_n(tri, tri.full(), 4) == 0
        assert at_n(tri, tri.empty(), 2) == 0

    def test_bad_n(self, tri):
        with pytest.raises(ValueError):
            at_n(tri, tri.full(), 0)


class TestPhi:
    def test_closed_examples(self, tri):
        assert phi_n_closed(tri, tri.full(), 1) == F(1, 2)
        assert phi_n_closed(tri, tri.full(), 3) == 0
        assert phi_n_closed(tri, tri.event(["y"]), 1) == 0
        assert phi_n_closed(tri, tri.full(), 0) == 1

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_bruteforce_example(self, tri, n):
        assert phi_n_bruteforce(tri, tri.full(), n) == phi_n_closed(tri, tri.full(), n)

    def test_bruteforce_small_cases(self):
        one = uniform_algebra(1)
        assert phi_n_bruteforce(one, one.full(), 1) == 0
        assert phi_n_bruteforce(one, one.empty(), 2) == 0

    @given(algebras(max_atoms=6, max_weight=4))
    def test_closed_matches_union_oracle(self, pair):
        alg, rng = pair
        for a in alg.all_events():
            for n in range(0, 4):
                assert phi_n_closed(alg, a, n) == phi_oracle(alg, a, n)

    @given(algebras(max_atoms=5, max_weight=4))
    def test_chain_and_at_n(self, pair):
        alg, _ = pair
        for a in alg.all_events():
            vals = [phi_n_closed(alg, a, n) for n in range(0, alg.k + 2)]
            assert all(x >= y for x, y in zip(vals, vals[1:]))
            for n in range(1, alg.k + 1):
                assert at_n(alg, a, n) == vals[n - 1] - vals[n]


class TestChiTheta:
    def test_chi_examples(self):
        u2, u3 = uniform_algebra(2), uniform_algebra(3)
        assert chi(u2, u2.full()) == 0
        assert chi(u3, u3.full()) == F(1, 3)

    def test_witness(self, tri):
        value, y = chi_with_witness(tri, tri.full())
        a = tri.full()
        assert abs((a & y).mu - (a - y).mu) == value == 0

    def test_psi(self, tri):
        assert psi(tri, tri.event(["y"])) == 0
        assert psi(tri, tri.event(["x", "y"])) == F(3, 4) - F(1, 4)
        assert psi(tri, tri.full()) == 1

    @given(algebras(max_atoms=6))
    def test_chi_oracle(self, pair):
        alg, rng = pair
        a = alg.from_mask(rng.getrandbits(alg.k))
        assert chi(alg, a) == chi_oracle(alg, a)

    @given(algebras(max_atoms=6))
    def test_theta_positive_and_oracle(self, pair):
        alg, rng = pair
        a = alg.from_mask(rng.getrandbits(alg.k))
        expected = max(chi_oracle(alg, a & y) for y in alg.all_events())
        assert theta(alg, a) == expected
        assert (theta(alg, a) > 0) == bool(a)
        value, y = theta_with_witness(alg, a)
        assert chi(alg, a & y) == value

    def test_cap(self):
        alg = uniform_algebra(6)
        with pytest.raises(AtomCapExceeded):
            chi(alg, alg.full(), cap=5)


class TestClassification:
    def test_permuted_weights(self, tri):
        other = FiniteProbabilityAlgebra(["1/4", "1/2", "1/4"])
        assert elementarily_equivalent(tri, other)
        emb = find_isomorphism(tri, other)
        assert emb is not None and emb.is_measure_preserving()

    def test_not_equivalent(self, tri):
        u4 = uniform_algebra(4)
        assert not elementarily_equivalent(u4, tri)
        assert phi_invariant(u4)[0] != phi_invariant(tri)[0]
        assert find_isomorphism(u4, tri) is None

    def test_self(self, tri):
        assert elementarily_equivalent(tri, tri)
        assert find_isomorphism(tri, tri).atom_images == (1, 2, 4)

    def test_invariant_padding(self):
        p = PhiInvariant((F(1, 2), F(1, 2), F(0)))
        assert len(p) == 2 and p[5] == 0

    @given(algebras(max_atoms=7, max_weight=3))
    def test_equivalence_iff_isomorphism(self, pair):
        alg, rng = pair
        ws = list(alg.weights)
        rng.shuffle(ws)
        other = FiniteProbabilityAlgebra(ws)
        assert elementarily_equivalent(alg, other)
        assert find_isomorphism(alg, other).is_measure_preserving()
        third = random_algebra(rng, alg.k, max_weight=3)
        assert elementarily_equivalent(alg, third) == (find_isomorphism(alg, third) is not None)

    def test_report(self, tri):
        rep = atoms_report(tri)
        assert rep["phi_invariant"] == [F(1, 2), F(1, 4), F(1, 4)]
        assert rep["phi"][0] == F(1, 2)
        assert rep["at"] == [F(1, 2), F(1, 4), F(1, 4)]


def test_closed_form_on_ties():
    alg = random_algebra(random.Random(0), 6, max_weight=1)
    assert phi_n_bruteforce(alg, alg.full(), 2) == phi_n_closed(alg, alg.full(), 2) == F(2, 3)
