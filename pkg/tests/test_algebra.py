import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from probalg.algebra import (
    Embedding,
    Event,
    FiniteProbabilityAlgebra,
    Subalgebra,
    associated_partition,
    check_partition,
    complement,
    dist,
    fmt,
    generated_subalgebra,
    is_partition,
    join,
    meet,
    mu,
    random_algebra,
    random_event,
    random_partition,
    random_refinement,
    random_subalgebra,
    sign_tuples,
    split_atoms,
    to_fraction,
    tuple_from_partition,
    uniform_algebra,
    verify_axioms,
)
from probalg.errors import BadLength, EmptyTuple, ForeignEvent, InvalidAlgebra, NotAPartition

from .conftest import algebras


def set_measure(alg, members):
    # oracle: plain set of indices, summed weights
    return sum((alg.weights[i] for i in set(members)), Fraction(0))


class TestConstruction:
    def test_weights_are_exact(self, tri):
        assert tri.weights == (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4))
        assert tri.labels == ("x", "y", "z")

    def test_default_labels_are_indices(self):
        assert uniform_algebra(3).labels == ("0", "1", "2")

    def test_rejects_mass_not_one(self):
        with pytest.raises(InvalidAlgebra):
            FiniteProbabilityAlgebra(["1/2", "1/4"])

    def test_rejects_zero_weight(self):
        with pytest.raises(InvalidAlgebra):
            FiniteProbabilityAlgebra(["1", "0"])

    def test_rejects_floats(self):
        with pytest.raises(TypeError):
            to_fraction(0.5)

    def test_uniform(self):
        assert uniform_algebra(4).weights == (Fraction(1, 4),) * 4
        assert uniform_algebra(1).weights == (Fraction(1),)

    def test_random_algebra_is_deterministic(self):
        assert random_algebra(7, 3).weights == random_algebra(7, 3).weights

    def test_fmt(self):
        assert fmt(Fraction(0)) == "0/1"
        assert fmt(Fraction(6, 4)) == "3/2"


class TestMeasure:
    def test_examples(self, tri):
        assert mu(tri, tri.empty()) == 0
        assert mu(tri, tri.full()) == 1
        assert mu(tri, tri.event(["x", "y"])) == Fraction(3, 4)

    def test_dist_example(self, tri):
        assert dist(tri, tri.event(["x"]), tri.event(["y"])) == Fraction(3, 4)

    def test_dist_to_self(self, tri):
        e = tri.event(["x", "z"])
        assert dist(tri, e, e) == 0

    def test_boolean_examples(self, tri):
        assert complement(tri, tri.empty()) == tri.full()
        assert meet(tri, tri.event([0, 1]), tri.event([1, 2])) == tri.event([1])
        e = tri.event(["y"])
        assert join(tri, e, complement(tri, e)) == tri.full()

    def test_foreign_event(self, tri):
        other = uniform_algebra(3)
        with pytest.raises(ForeignEvent):
            tri.full() & other.full()
        with pytest.raises(ForeignEvent):
            mu(tri, other.full())

    @given(algebras(), st.data())
    def test_measure_matches_set_oracle(self, pair, data):
        alg, rng = pair
        e, f = random_event(rng, alg), random_event(rng, alg)
        assert e.mu == set_measure(alg, e.members)
        assert dist(alg, e, f) == set_measure(alg, set(e.members) ^ set(f.members))
        assert (e | f).mu == set_measure(alg, set(e.members) | set(f.members))
        assert dist(alg, ~e, ~f) == dist(alg, e, f)

    @given(algebras())
    def test_additivity_and_monotonicity(self, pair):
        alg, rng = pair
        e, f = random_event(rng, alg), random_event(rng, alg)
        assert (e | f).mu + (e & f).mu == e.mu + f.mu
        assert (e & f).mu <= e.mu <= (e | f).mu


class TestPartitions:
    def test_associated_partition_example(self, tri):
        x, xy = tri.event(["x"]), tri.event(["x", "y"])
        cells = associated_partition(tri, [x, xy])
        assert cells == [tri.event(["z"]), tri.event(["y"]), tri.empty(), tri.event(["x"])]

    def test_sign_order(self):
        assert sign_tuples(2) == [(-1, -1), (-1, 1), (1, -1), (1, 1)]

    def test_single_full(self, tri):
        assert associated_partition(tri, [tri.full()]) == [tri.empty(), tri.full()]

    def test_empty_tuple(self, tri):
        with pytest.raises(EmptyTuple):
            associated_partition(tri, [])

    def test_round_trip_example(self, tri):
        x, xy = tri.event(["x"]), tri.event(["x", "y"])
        assert tuple_from_partition(tri, associated_partition(tri, [x, xy])) == [x, xy]

    def test_from_two_parts(self, tri):
        assert tuple_from_partition(tri, [tri.empty(), tri.full()]) == [tri.full()]
        assert tuple_from_partition(tri, [tri.full(), tri.empty()]) == [tri.empty()]

    def test_bad_length(self, tri):
        with pytest.raises(BadLength):
            tuple_from_partition(tri, [tri.full(), tri.empty(), tri.empty()])
        with pytest.raises(BadLength):
            tuple_from_partition(tri, [tri.full()])

    def test_not_a_partition(self, tri):
        with pytest.raises(NotAPartition):
            check_partition(tri, [tri.full(), tri.event(["x"])])
        assert not is_partition(tri, [tri.event(["x"])])

    @given(algebras(), st.integers(1, 3))
    def test_cells_partition_and_round_trip(self, pair, n):
        alg, rng = pair
        tup = [random_event(rng, alg) for _ in range(n)]
        cells = associated_partition(alg, tup)
        assert is_partition(alg, cells)
        assert sum((c.mu for c in cells), Fraction(0)) == 1
        assert tuple_from_partition(alg, cells) == tup


class TestSubalgebra:
    def test_generated_examples(self, tri):
        assert generated_subalgebra(tri, []).blocks == (tri.full_mask,)
        assert generated_subalgebra(tri, [tri.event(["x"])]).blocks == (0b001, 0b110)
        assert generated_subalgebra(tri, tri.atoms()) == Subalgebra.full(tri)

    def test_canonical_order(self, tri):
        assert Subalgebra(tri, (0b110, 0b001)).blocks == (0b001, 0b110)

    def test_blocks_must_partition(self, tri):
        with pytest.raises(NotAPartition):
            Subalgebra(tri, (0b011, 0b110))

    def test_contains(self, tri):
        S = generated_subalgebra(tri, [tri.event(["x"])])
        assert S.contains(tri.event(["y", "z"]))
        assert not S.contains(tri.event(["y"]))

    @given(algebras())
    def test_refinement_and_join(self, pair):
        alg, rng = pair
        S = random_subalgebra(rng, alg)
        R = random_refinement(rng, S)
        T = random_subalgebra(rng, alg)
        assert S.is_subalgebra_of(R)
        J = S.join(T)
        assert S.is_subalgebra_of(J) and T.is_subalgebra_of(J)
        assert Subalgebra.trivial(alg).is_subalgebra_of(S)
        assert S.is_subalgebra_of(Subalgebra.full(alg))

    @given(algebras(max_atoms=5))
    def test_generated_is_closed(self, pair):
        alg, rng = pair
        gens = [random_event(rng, alg) for _ in range(2)]
        S = generated_subalgebra(alg, gens)
        members = set(S.union_masks())
        assert all(g.mask in members for g in gens)
        for m in members:
            assert alg.full_mask & ~m in members
            assert all(m & n in members for n in members)


class TestEmbedding:
    def test_split_atoms(self, tri):
        new, emb, pieces = split_atoms(tri, [["1/4", "1/4"], ["1/4"], ["1/8", "0", "1/8"]])
        assert new.labels == ("x_1", "x_2", "y", "z_1", "z_2")
        assert pieces[2] == [0b01000, 0, 0b10000]
        assert emb.is_measure_preserving()
        e = tri.event(["x", "z"])
        assert emb.image(e).mu == e.mu

    def test_split_must_add_up(self, tri):
        with pytest.raises(InvalidAlgebra):
            split_atoms(tri, [["1/4"], ["1/4"], ["1/4"]])

    def test_compose(self, tri):
        new, emb, _ = split_atoms(tri, [["1/4", "1/4"], ["1/4"], ["1/4"]])
        new2, emb2, _ = split_atoms(new, [[w] for w in new.weights])
        both = emb.then(emb2)
        assert both.is_measure_preserving()
        assert Embedding.identity(tri).then(emb).atom_images == emb.atom_images


class TestAxioms:
    def test_uniform_passes(self):
        assert verify_axioms(uniform_algebra(2)).ok

    def test_total_mass_failure(self):
        rep = verify_axioms(FiniteProbabilityAlgebra.unchecked(["1/2", "1/4"]))
        names = {r.name: r for r in rep.failures()}
        assert "total mass 1" in names
        assert names["total mass 1"].witness == {"sum": "3/4"}

    def test_zero_weight_failure(self):
        rep = verify_axioms(FiniteProbabilityAlgebra.unchecked(["1", "0"]))
        assert "strict positivity" in {r.name for r in rep.failures()}

    @pytest.mark.parametrize("k", [1, 4, 9])
    def test_random_algebras_pass(self, k):
        assert verify_axioms(random_algebra(random.Random(k), k)).ok

    def test_partition_sampler(self):
        rng = random.Random(3)
        alg = random_algebra(rng, 5)
        parts = random_partition(rng, alg, 3)
        assert len(parts) == 3 and is_partition(alg, parts)
        assert isinstance(parts[0], Event)
