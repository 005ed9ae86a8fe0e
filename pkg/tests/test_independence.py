from fractions import Fraction

import pytest
from hypothesis import given

from probalg.algebra import (
    Event,
    FiniteProbabilityAlgebra,
    Subalgebra,
    random_partition,
    random_refinement,
    random_subalgebra,
    uniform_algebra,
)
from probalg.conditional import cond_prob
from probalg.errors import NotCoarsening
from probalg.independence import (
    characterization_report,
    extend_with_independent_copy,
    extension_contract,
    independence_defect,
    independence_witness,
    independent,
)

from .conftest import algebras

F = Fraction


def independent_oracle(alg, S, T, W):
    # product rule for every element (not just atom) of <S> and <T>, on every block of <W>
    for c in W.blocks:
        mc = alg.mask_measure(c)
        for a in S.union_masks():
            for b in T.union_masks():
                if alg.mask_measure(a & b & c) * mc != alg.mask_measure(a & c) * alg.mask_measure(b & c):
                    return False
    return True


@pytest.fixture
def product():
    alg = uniform_algebra(4, ["00", "01", "10", "11"])
    return alg, alg.event(["10", "11"]), alg.event(["01", "11"])


class TestIndependence:
    def test_product(self, product):
        alg, first, second = product
        assert independent(alg, [first], [second])
        assert independence_defect(alg, [first], [second]) == 0

    def test_negative_example(self, tri):
        S, T = [tri.event(["x"])], [tri.event(["x", "y"])]
        assert not independent(tri, S, T)
        assert independence_defect(tri, S, T) == F(1, 8)
        assert independence_defect(tri, T, S) == F(1, 8)
        (a, b, c), v = independence_witness(tri, S, T)
        assert v == F(1, 8) and c == tri.full()

    def test_full_T(self, tri):
        assert independent(tri, [tri.event(["y"])], [tri.full()], [tri.event(["z"])])

    @given(algebras(max_atoms=6))
    def test_matches_oracle(self, pair):
        alg, rng = pair
        S, T, W = (random_subalgebra(rng, alg, 3) for _ in range(3))
        assert independent(alg, S, T, W) == independent_oracle(alg, S, T, W)

    @given(algebras(max_atoms=6))
    def test_symmetry(self, pair):
        alg, rng = pair
        S, T, W = (random_subalgebra(rng, alg) for _ in range(3))
        assert independence_defect(alg, S, T, W) == independence_defect(alg, T, S, W)


class TestCharacterization:
    def test_product_all_true(self, product):
        alg, first, second = product
        rep = characterization_report(alg, [first], [second])
        assert rep.conditions == (True, True, True, True)

    def test_negative_all_false(self, tri):
        rep = characterization_report(tri, [tri.event(["x"])], [tri.event(["x", "y"])])
        assert rep.conditions == (False, False, False, False)

    @given(algebras(max_atoms=7))
    def test_conditions_agree(self, pair):
        alg, rng = pair
        S, T, W = (random_subalgebra(rng, alg) for _ in range(3))
        assert characterization_report(alg, S, T, W).consistent

    def test_conditions_agree_on_products(self):
        p = FiniteProbabilityAlgebra(["1/3", "2/3"])
        q = FiniteProbabilityAlgebra(["1/5", "1/5", "3/5"])
        alg = FiniteProbabilityAlgebra([x * y for x in p.weights for y in q.weights])
        rows = Subalgebra(alg, (0b000111, 0b111000))
        cols = Subalgebra(alg, (0b001001, 0b010010, 0b100100))
        rep = characterization_report(alg, rows, cols)
        assert rep.consistent and rep.product_rule


class TestExtension:
    def test_example(self, tri):
        A = [tri.event(["x", "y"]), tri.event(["z"])]
        C, D = Subalgebra.trivial(tri), Subalgebra.full(tri)
        ext = extend_with_independent_copy(tri, A, C, D)
        assert list(ext.alg.weights) == [F(3, 8), F(1, 8), F(3, 16), F(1, 16), F(3, 16), F(1, 16)]
        E1 = ext.E[0]
        x_img = ext.embedding.image(tri.event(["x"]))
        assert E1.mu == F(3, 4)
        assert (E1 & x_img).mu == F(3, 8) == E1.mu * x_img.mu
        assert all(extension_contract(tri, A, C, D, ext).values())

    def test_measurable_A_is_identity(self, tri):
        A = [tri.event(["x"]), tri.event(["y", "z"])]
        C = Subalgebra(tri, (0b001, 0b110))
        ext = extend_with_independent_copy(tri, A, C, Subalgebra.full(tri))
        assert ext.alg.weights == tri.weights
        assert ext.E == ext.embedding.images(A)

    def test_single_part(self, tri):
        ext = extend_with_independent_copy(tri, [tri.full()], Subalgebra.trivial(tri), Subalgebra.full(tri))
        assert ext.alg.weights == tri.weights and ext.E == [ext.alg.full()]

    def test_needs_coarsening(self, tri):
        with pytest.raises(NotCoarsening):
            extend_with_independent_copy(tri, [tri.full()], Subalgebra.full(tri), Subalgebra.trivial(tri))

    @given(algebras(max_atoms=6))
    def test_contract(self, pair):
        alg, rng = pair
        A = random_partition(rng, alg, rng.randint(1, 3))
        C = random_subalgebra(rng, alg)
        D = random_refinement(rng, C)
        ext = extend_with_independent_copy(alg, A, C, D)
        res = extension_contract(alg, A, C, D, ext)
        assert res == {"same_conditional": True, "independent": True, "measure_preserving": True}
        # the copy is a partition with the same conditional law, checked with an independent oracle
        Cn, Dn = ext.embedding.image_sub(C), ext.embedding.image_sub(D)
        for e, a in zip(ext.E, A):
            assert cond_prob(ext.alg, e, Cn).atom_values() == cond_prob(ext.alg, ext.embedding.image(a), Cn).atom_values()
        assert independent_oracle(ext.alg, Subalgebra(ext.alg, tuple(e.mask for e in ext.E if e)), Dn, Cn)
        assert isinstance(ext.E[0], Event)
