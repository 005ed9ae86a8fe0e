"""Boolean terms and continuous-logic formulas as immutable trees."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

# ------------------------------------------------------------------- terms


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Zero(Term):
    pass


@dataclass(frozen=True)
class One(Term):
    pass


@dataclass(frozen=True)
class Var(Term):
    """An identifier: a bound or free variable, or a named event."""

    name: str


@dataclass(frozen=True)
class Compl(Term):
    arg: Term


@dataclass(frozen=True)
class Meet(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Join(Term):
    left: Term
    right: Term


# ---------------------------------------------------------------- formulas


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Mu(Formula):
    term: Term


@dataclass(frozen=True)
class Dist(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Const(Formula):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class Half(Formula):
    arg: Formula


@dataclass(frozen=True)
class Minus(Formula):
    """Truncated difference ``max(left - right, 0)``."""

    left: Formula
    right: Formula


@dataclass(frozen=True)
class Plus(Formula):
    """Truncated sum ``min(left + right, 1)``."""

    left: Formula
    right: Formula


@dataclass(frozen=True)
class AbsDiff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Min(Formula):
    args: tuple


@dataclass(frozen=True)
class Max(Formula):
    args: tuple


@dataclass(frozen=True)
class Sup(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Inf(Formula):
    var: str
    body: Formula


QUANTIFIERS = (Sup, Inf)


def term_vars(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Compl):
        return term_vars(t.arg)
    if isinstance(t, (Meet, Join)):
        return term_vars(t.left) | term_vars(t.right)
    return frozenset()


def children(phi: Formula) -> tuple:
    """Sub-formulas (not terms) of ``phi``."""
    if isinstance(phi, Half):
        return (phi.arg,)
    if isinstance(phi, (Minus, Plus, AbsDiff)):
        return (phi.left, phi.right)
    if isinstance(phi, (Min, Max)):
        return phi.args
    if isinstance(phi, QUANTIFIERS):
        return (phi.body,)
    return ()


def terms_of(phi: Formula) -> tuple:
    if isinstance(phi, Mu):
        return (phi.term,)
    if isinstance(phi, Dist):
        return (phi.left, phi.right)
    return ()


def free_vars(phi: Formula) -> frozenset:
    """Identifiers not bound by a quantifier (variables and named events alike)."""
    if isinstance(phi, QUANTIFIERS):
        return free_vars(phi.body) - {phi.var}
    out = frozenset()
    for t in terms_of(phi):
        out |= term_vars(t)
    for c in children(phi):
        out |= free_vars(c)
    return out


def is_quantifier_free(phi: Formula) -> bool:
    if isinstance(phi, QUANTIFIERS):
        return False
    return all(is_quantifier_free(c) for c in children(phi))


def half_depth(phi: Formula) -> int:
    """Largest number of nested halvings along any branch."""
    below = max((half_depth(c) for c in children(phi)), default=0)
    return below + 1 if isinstance(phi, Half) else below


def constants(phi: Formula):
    if isinstance(phi, Const):
        yield phi.value
    for c in children(phi):
        yield from constants(c)


def size(phi: Formula) -> int:
    return 1 + sum(size(c) for c in children(phi))
