"""Random terms and quantifier-free formulas for property tests."""
from __future__ import annotations

import random
from fractions import Fraction

from .ast import AbsDiff, Compl, Const, Dist, Half, Join, Max, Meet, Min, Minus, Mu, One, Plus, Var, Zero


def random_term(rng: random.Random, names, depth: int):
    if depth <= 0 or rng.random() < 0.3:
        r = rng.random()
        if r < 0.08:
            return Zero()
        if r < 0.16:
            return One()
        return Var(rng.choice(names))
    kind = rng.randrange(3)
    if kind == 0:
        return Compl(random_term(rng, names, depth - 1))
    cls = Meet if kind == 1 else Join
    return cls(random_term(rng, names, depth - 1), random_term(rng, names, depth - 1))


def random_formula(rng: random.Random, names, depth: int = 5, term_depth: int = 3):
    """Quantifier-free formula of nesting depth at most ``depth``."""
    if depth <= 1 or rng.random() < 0.2:
        r = rng.random()
        if r < 0.15:
            den = rng.randint(1, 6)
            return Const(Fraction(rng.randint(0, den), den))
        if r < 0.4:
            return Dist(random_term(rng, names, term_depth), random_term(rng, names, term_depth))
        return Mu(random_term(rng, names, term_depth))
    kind = rng.randrange(7)
    sub = lambda: random_formula(rng, names, depth - 1, term_depth)  # noqa: E731
    if kind == 0:
        return Half(sub())
    if kind == 1:
        return Minus(sub(), sub())
    if kind == 2:
        return Plus(sub(), sub())
    if kind == 3:
        return AbsDiff(sub(), sub())
    if kind == 4:
        return Min(tuple(sub() for _ in range(rng.randint(2, 3))))
    if kind == 5:
        return Max(tuple(sub() for _ in range(rng.randint(2, 3))))
    return Minus(Const(1), sub())
