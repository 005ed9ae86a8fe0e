import random

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from probalg.algebra import FiniteProbabilityAlgebra, random_algebra

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def tri():
    """Weights (1/2, 1/4, 1/4) on atoms x, y, z."""
    return FiniteProbabilityAlgebra(["1/2", "1/4", "1/4"], ["x", "y", "z"])


@pytest.fixture
def four():
    """Weights (3/8, 1/8, 1/8, 3/8); w = {p, q} and a1 = {p, r} give P(a1|w) = 3/4, P(a1|~w) = 1/4."""
    return FiniteProbabilityAlgebra(["3/8", "1/8", "1/8", "3/8"], ["p", "q", "r", "s"])


@st.composite
def algebras(draw, min_atoms=1, max_atoms=6, max_weight=12):
    """A random algebra together with an rng seeded from the same draw."""
    seed = draw(st.integers(0, 2**32 - 1))
    k = draw(st.integers(min_atoms, max_atoms))
    rng = random.Random(seed)
    return random_algebra(rng, k, max_weight=max_weight), rng
