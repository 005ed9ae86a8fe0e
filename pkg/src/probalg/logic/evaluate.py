"""Exact evaluation of formulas on a finite probability algebra.

Quantifiers range over all ``2**k`` events. Every value is kept as an integer
multiple of ``1/M``, where ``M`` clears the atom-weight denominators, the
constant denominators and every halving, so inner loops never build Fractions.

Each quantifier node is memoised on the values of the maximal subterms of its
body that mention no variable bound at or below it. This is what makes the
nested definitions of the atom formulas tractable: ``phi_1(x /\\ w)`` is
evaluated once per value of ``x /\\ w`` instead of once per pair ``(x, w)``.
"""
from __future__ import annotations

import math
from fractions import Fraction

from ..algebra import Event, _own
from ..errors import AtomCapExceeded, UnboundVariable
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
    Var,
    Zero,
    constants,
    free_vars,
    half_depth,
    is_quantifier_free,
    term_vars,
)
from .parser import parse

DEFAULT_CAP = 16
BUILTIN_EVENTS = ("ALL", "NONE")


class Evaluator:
    """A formula compiled against one algebra and one table of named events.

    Reuse an instance to evaluate many valuations; quantifier memo tables are
    shared between calls.
    """

    def __init__(self, alg, phi: Formula | str, events: dict | None = None, cap: int = DEFAULT_CAP):
        if isinstance(phi, str):
            phi = parse(phi)
        self.alg = alg
        self.phi = phi
        self.cap = cap
        self.events = {"ALL": alg.full(), "NONE": alg.empty()}
        for name, e in (events or {}).items():
            _own(alg, e)
            self.events[name] = e
        if not is_quantifier_free(phi) and alg.k > cap:
            raise AtomCapExceeded(f"{alg.k} atoms exceed the quantifier cap of {cap}")
        denoms = [alg.scale] + [q.denominator for q in constants(phi)]
        self.M = math.lcm(*denoms) << half_depth(phi)
        self.one = self.M
        self.full = alg.full_mask
        if alg.k <= cap:
            sums = alg.subset_sums()
            factor = self.M // alg.scale
            table = [int(v) * factor for v in sums]
            self.measure = table.__getitem__
        else:
            factor = self.M // alg.scale
            iw = [int(v) * factor for v in alg.int_weights]

            def measure(mask):
                total, i = 0, 0
                while mask:
                    if mask & 1:
                        total += iw[i]
                    mask >>= 1
                    i += 1
                return total

            self.measure = measure
        self.quant_nodes = {}
        self.compiled = {}
        self.fn = self._formula(phi, frozenset())
        self.free = free_vars(phi)

    # -------------------------------------------------------------- public
    def env_for(self, valuation: dict | None) -> dict:
        valuation = valuation or {}
        env = {}
        for name in self.free:
            if name in valuation:
                e = valuation[name]
                _own(self.alg, e)
                env[name] = e.mask
            elif name in self.events:
                env[name] = self.events[name].mask
            else:
                raise UnboundVariable(f"variable {name!r} is not bound")
        return env

    def value(self, valuation: dict | None = None) -> Fraction:
        return Fraction(self.fn(self.env_for(valuation)), self.M)

    def witnesses(self, valuation: dict | None = None) -> list:
        """Optimal events along the leading chain of quantifiers, as ``(var, Event)`` pairs."""
        env = self.env_for(valuation)
        self.fn(env)
        out = []
        node = self.phi
        while isinstance(node, (Sup, Inf)):
            fn, key_fn = self.quant_nodes[node]
            _, wit = fn.memo[key_fn(env)]
            env = dict(env)
            env[node.var] = wit
            out.append((node.var, Event(self.alg, wit)))
            node = node.body
        return out

    # ------------------------------------------------------------ compiler
    def _term(self, t):
        full = self.full
        if isinstance(t, Zero):
            return lambda env: 0
        if isinstance(t, One):
            return lambda env: full
        if isinstance(t, Var):
            name = t.name
            return lambda env: env[name]
        if isinstance(t, Compl):
            f = self._term(t.arg)
            return lambda env: full ^ f(env)
        if isinstance(t, Meet):
            f, g = self._term(t.left), self._term(t.right)
            return lambda env: f(env) & g(env)
        if isinstance(t, Join):
            f, g = self._term(t.left), self._term(t.right)
            return lambda env: f(env) | g(env)
        raise TypeError(f"not a term: {t!r}")

    def _formula(self, phi, bound):
        one = self.one
        measure = self.measure
        if isinstance(phi, Mu):
            t = self._term(phi.term)
            return lambda env: measure(t(env))
        if isinstance(phi, Dist):
            a, b = self._term(phi.left), self._term(phi.right)
            return lambda env: measure(a(env) ^ b(env))
        if isinstance(phi, Const):
            v = int(phi.value * self.M)
            return lambda env: v
        if isinstance(phi, Half):
            f = self._formula(phi.arg, bound)
            return lambda env: f(env) // 2
        if isinstance(phi, Minus):
            f, g = self._formula(phi.left, bound), self._formula(phi.right, bound)

            def minus(env):
                v = f(env) - g(env)
                return v if v > 0 else 0

            return minus
        if isinstance(phi, Plus):
            f, g = self._formula(phi.left, bound), self._formula(phi.right, bound)

            def plus(env):
                v = f(env) + g(env)
                return v if v < one else one

            return plus
        if isinstance(phi, AbsDiff):
            f, g = self._formula(phi.left, bound), self._formula(phi.right, bound)
            return lambda env: abs(f(env) - g(env))
        if isinstance(phi, (Min, Max)):
            fs = [self._formula(a, bound) for a in phi.args]
            red = min if isinstance(phi, Min) else max
            return lambda env: red(f(env) for f in fs)
        if isinstance(phi, (Sup, Inf)):
            return self._quantifier(phi, bound)
        raise TypeError(f"not a formula: {phi!r}")

    def _quantifier(self, phi, bound):
        shared = self.compiled.get(phi)
        if shared is not None:
            return shared
        body = self._formula(phi.body, bound | {phi.var})
        key_terms = _key_terms(phi)
        key_fns = [self._term(t) for t in key_terms]

        def key_fn(env):
            return tuple(f(env) for f in key_fns)

        var = phi.var
        n = 1 << self.alg.k
        is_sup = isinstance(phi, Sup)
        stop = self.one if is_sup else 0
        memo = {}

        def quant(env):
            key = key_fn(env)
            hit = memo.get(key)
            if hit is not None:
                return hit[0]
            inner = dict(env)
            best = None
            wit = 0
            for m in range(n):
                inner[var] = m
                v = body(inner)
                if best is None or (v > best if is_sup else v < best):
                    best, wit = v, m
                    if v == stop:
                        break
            memo[key] = (best, wit)
            return best

        quant.memo = memo
        self.quant_nodes[phi] = (quant, key_fn)
        self.compiled[phi] = quant
        return quant


def _key_terms(node) -> list:
    """Maximal subterms in the body of ``node`` that use no variable bound at or below it."""
    found = []
    seen = set()

    def visit_term(t, blocked):
        names = _names(t)
        if not names:
            return
        if not names & blocked:
            if t not in seen:
                seen.add(t)
                found.append(t)
            return
        if isinstance(t, Compl):
            visit_term(t.arg, blocked)
        elif isinstance(t, (Meet, Join)):
            visit_term(t.left, blocked)
            visit_term(t.right, blocked)

    def visit(phi, blocked):
        if isinstance(phi, Mu):
            visit_term(phi.term, blocked)
        elif isinstance(phi, Dist):
            visit_term(phi.left, blocked)
            visit_term(phi.right, blocked)
        elif isinstance(phi, (Sup, Inf)):
            visit(phi.body, blocked | {phi.var})
        elif isinstance(phi, Half):
            visit(phi.arg, blocked)
        elif isinstance(phi, (Minus, Plus, AbsDiff)):
            visit(phi.left, blocked)
            visit(phi.right, blocked)
        elif isinstance(phi, (Min, Max)):
            for a in phi.args:
                visit(a, blocked)

    visit(node.body, frozenset({node.var}))
    return found


def _names(t) -> frozenset:
    return term_vars(t)


def evaluate(alg, phi: Formula | str, valuation: dict | None = None, events: dict | None = None,
             cap: int = DEFAULT_CAP) -> Fraction:
    """Exact value of ``phi`` under ``valuation`` (variable name to Event)."""
    return Evaluator(alg, phi, events, cap).value(valuation)


def evaluate_with_witness(alg, phi, valuation=None, events=None, cap=DEFAULT_CAP):
    ev = Evaluator(alg, phi, events, cap)
    return ev.value(valuation), ev.witnesses(valuation)
