"""Quantifier-free normal form over the cells of the variables and named events.

Each ``d(t1, t2)`` becomes ``mu(t1 sym t2)``. Each ``mu(t)`` becomes the
truncated sum of ``mu(cell)`` over the cells ``x^s /\\ c^r`` inside ``t``
(exact, because the cells are disjoint). Finally ``min``, ``max`` and
``|.-.|`` are rewritten into ``-.`` and ``+.``:

    min(a, b) = a -. (a -. b)
    max(a, b) = a +. (b -. a)
    |a - b|   = (a -. b) +. (b -. a)
"""
from __future__ import annotations

import itertools
from functools import reduce

from ..errors import UnsupportedConnective
from .ast import (
    AbsDiff,
    Compl,
    Const,
    Dist,
    Formula,
    Half,
    Inf,
    Join,
    Max,
    Meet,
    Min,
    Minus,
    Mu,
    One,
    Plus,
    Sup,
    Term,
    Var,
    Zero,
    term_vars,
)


def _truth(t: Term, assign: dict) -> bool:
    if isinstance(t, Zero):
        return False
    if isinstance(t, One):
        return True
    if isinstance(t, Var):
        return assign[t.name]
    if isinstance(t, Compl):
        return not _truth(t.arg, assign)
    if isinstance(t, Meet):
        return _truth(t.left, assign) and _truth(t.right, assign)
    if isinstance(t, Join):
        return _truth(t.left, assign) or _truth(t.right, assign)
    raise TypeError(f"not a term: {t!r}")


def symmetric_difference(a: Term, b: Term) -> Term:
    return Join(Meet(a, Compl(b)), Meet(Compl(a), b))


def cell_term(names, signs) -> Term:
    """x^s as a meet of literals; ``1`` for the empty sign tuple."""
    lits = [Var(n) if s > 0 else Compl(Var(n)) for n, s in zip(names, signs)]
    if not lits:
        return One()
    return reduce(Meet, lits)


def _named_events(phi: Formula, variables) -> list:
    names = set()

    def visit(f):
        if isinstance(f, Mu):
            names.update(term_vars(f.term))
        elif isinstance(f, Dist):
            names.update(term_vars(f.left) | term_vars(f.right))
        elif isinstance(f, Half):
            visit(f.arg)
        elif isinstance(f, (Minus, Plus, AbsDiff)):
            visit(f.left)
            visit(f.right)
        elif isinstance(f, (Min, Max)):
            for a in f.args:
                visit(a)

    visit(phi)
    return sorted(names - set(variables))


def _expand_mu(t: Term, names) -> Formula:
    cells = []
    for signs in itertools.product((-1, 1), repeat=len(names)):
        assign = {n: s > 0 for n, s in zip(names, signs)}
        if _truth(t, assign):
            cells.append(Mu(cell_term(names, signs)))
    if not cells:
        return Const(0)
    return reduce(Plus, cells)


def _rewrite(phi: Formula, names) -> Formula:
    if isinstance(phi, (Sup, Inf)):
        raise UnsupportedConnective("normal_form needs a quantifier-free formula")
    if isinstance(phi, Mu):
        return _expand_mu(phi.term, names)
    if isinstance(phi, Dist):
        return _expand_mu(symmetric_difference(phi.left, phi.right), names)
    if isinstance(phi, Const):
        return phi
    if isinstance(phi, Half):
        return Half(_rewrite(phi.arg, names))
    if isinstance(phi, Minus):
        return Minus(_rewrite(phi.left, names), _rewrite(phi.right, names))
    if isinstance(phi, Plus):
        return Plus(_rewrite(phi.left, names), _rewrite(phi.right, names))
    if isinstance(phi, AbsDiff):
        a, b = _rewrite(phi.left, names), _rewrite(phi.right, names)
        return Plus(Minus(a, b), Minus(b, a))
    if isinstance(phi, Min):
        args = [_rewrite(a, names) for a in phi.args]
        return reduce(lambda a, b: Minus(a, Minus(a, b)), args)
    if isinstance(phi, Max):
        args = [_rewrite(a, names) for a in phi.args]
        return reduce(lambda a, b: Plus(a, Minus(b, a)), args)
    raise UnsupportedConnective(f"unsupported connective {type(phi).__name__}")


def normal_form(phi: Formula, variables) -> Formula:
    """Equivalent formula whose atoms are ``mu`` of cells over ``variables`` and named events.

    Identifiers outside ``variables`` are treated as named events.
    """
    variables = list(variables)
    names = variables + _named_events(phi, variables)
    return _rewrite(phi, names)


def is_normal(phi: Formula, variables, events=()) -> bool:
    """Whether every atomic subformula is ``mu`` of a full cell and only restricted connectives occur."""
    names = list(variables) + list(events)

    def cell_ok(t):
        lits = []
        stack = [t]
        while stack:
            u = stack.pop()
            if isinstance(u, Meet):
                stack += [u.left, u.right]
            else:
                lits.append(u)
        if lits == [One()] and not names:
            return True
        seen = []
        for lit in lits:
            base = lit.arg if isinstance(lit, Compl) else lit
            if not isinstance(base, Var):
                return False
            seen.append(base.name)
        return sorted(seen) == sorted(names)

    def ok(f):
        if isinstance(f, Mu):
            return cell_ok(f.term)
        if isinstance(f, Const):
            return True
        if isinstance(f, Half):
            return ok(f.arg)
        if isinstance(f, (Minus, Plus)):
            return ok(f.left) and ok(f.right)
        return False

    return ok(phi)
