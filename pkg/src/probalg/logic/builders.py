"""The atom-structure formulas chi, psi, phi_n and theta as syntax trees.

Every builder takes the argument as a term so the recursive definitions can
substitute ``x /\\ w`` for ``x``; bound variables are drawn fresh from a
:class:`Fresh` supply so nested copies never capture each other.
"""
from __future__ import annotations

import itertools

from .ast import AbsDiff, Compl, Dist, Formula, Inf, Meet, Minus, Mu, Plus, Sup, Term, Var, term_vars


class Fresh:
    """Supplies variable names ``_v1, _v2, ...`` avoiding a set of taken names."""

    def __init__(self, taken=()):
        self.taken = set(taken)
        self.counter = itertools.count(1)

    def __call__(self) -> str:
        while True:
            name = f"_v{next(self.counter)}"
            if name not in self.taken:
                self.taken.add(name)
                return name


def _arg(x):
    return Var(x) if isinstance(x, str) else x


def _fresh(x, fresh):
    return fresh if fresh is not None else Fresh(term_vars(x))


def chi(x: Term | str = "x", fresh: Fresh | None = None) -> Formula:
    """inf_y |mu(x /\\ y) - mu(x /\\ ~y)|"""
    x = _arg(x)
    fresh = _fresh(x, fresh)
    y = Var(fresh())
    return Inf(y.name, AbsDiff(Mu(Meet(x, y)), Mu(Meet(x, Compl(y)))))


def psi(x: Term | str = "x", fresh: Fresh | None = None) -> Formula:
    """mu(x) -. chi(x)"""
    x = _arg(x)
    fresh = _fresh(x, fresh)
    return Minus(Mu(x), chi(x, fresh))


def phi1(x: Term | str = "x", fresh: Fresh | None = None) -> Formula:
    """inf_z (d(x, z) +. psi(z))"""
    x = _arg(x)
    fresh = _fresh(x, fresh)
    z = Var(fresh())
    return Inf(z.name, Plus(Dist(x, z), psi(z, fresh)))


def phi_n(n: int, x: Term | str = "x", fresh: Fresh | None = None) -> Formula:
    """phi_1 for n = 1, else inf_w (phi_{n-1}(x /\\ w) +. phi_1(x /\\ ~w))."""
    if n < 1:
        raise ValueError("n must be positive")
    x = _arg(x)
    fresh = _fresh(x, fresh)
    if n == 1:
        return phi1(x, fresh)
    w = Var(fresh())
    return Inf(w.name, Plus(phi_n(n - 1, Meet(x, w), fresh), phi1(Meet(x, Compl(w)), fresh)))


def theta(x: Term | str = "x", fresh: Fresh | None = None) -> Formula:
    """sup_y inf_z |mu(x /\\ y /\\ z) - mu(x /\\ y /\\ ~z)|"""
    x = _arg(x)
    fresh = _fresh(x, fresh)
    y = Var(fresh())
    z = Var(fresh())
    xy = Meet(x, y)
    return Sup(y.name, Inf(z.name, AbsDiff(Mu(Meet(xy, z)), Mu(Meet(xy, Compl(z))))))
