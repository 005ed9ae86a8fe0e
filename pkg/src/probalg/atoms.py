"""Atom-structure invariants: at_n, phi_n, chi, theta and the invariant Phi."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .algebra import Embedding, Event, _own
from .errors import AtomCapExceeded
from .logic import builders
from .logic.evaluate import DEFAULT_CAP, Evaluator


def _weights_in(alg, a: Event) -> list:
    return sorted((alg.weights[i] for i in a.members), reverse=True)


def at_n(alg, a: Event, n: int) -> Fraction:
    """The n-th largest atom weight inside ``a``; 0 if ``a`` has fewer than ``n`` atoms."""
    _own(alg, a)
    if n < 1:
        raise ValueError("n must be positive")
    ws = _weights_in(alg, a)
    return ws[n - 1] if n <= len(ws) else Fraction(0)


def phi_n_closed(alg, a: Event, n: int) -> Fraction:
    """Distance from ``a`` to the unions of at most ``n`` atoms; ``phi_0`` is ``mu(a)``."""
    _own(alg, a)
    if n < 0:
        raise ValueError("n must be non-negative")
    ws = _weights_in(alg, a)
    return max(a.mu - sum(ws[:n], Fraction(0)), Fraction(0))


def phi_n_evaluator(alg, n: int, cap: int = DEFAULT_CAP) -> Evaluator:
    """Compiled quantifier formula for phi_n with free variable ``x``; reuse it across events."""
    return Evaluator(alg, builders.phi_n(n, "x"), cap=cap)


def phi_n_bruteforce(alg, a: Event, n: int, cap: int = DEFAULT_CAP) -> Fraction:
    """phi_n evaluated from its recursive quantifier definition over all events."""
    _own(alg, a)
    return phi_n_evaluator(alg, n, cap).value({"x": a})


def _table(alg, cap):
    if alg.k > cap:
        raise AtomCapExceeded(f"{alg.k} atoms exceed the enumeration cap of {cap}")
    return alg.subset_sums()


def chi_with_witness(alg, a: Event, cap: int = DEFAULT_CAP):
    """min over y of |mu(a & y) - mu(a - y)|, with an optimal ``a & y``."""
    _own(alg, a)
    sums = _table(alg, cap)
    v, sub = kernels.balanced_split(sums, a.mask)
    return alg.unscale(v), Event(alg, sub)


def chi(alg, a: Event, cap: int = DEFAULT_CAP) -> Fraction:
    return chi_with_witness(alg, a, cap)[0]


def psi(alg, a: Event, cap: int = DEFAULT_CAP) -> Fraction:
    return max(a.mu - chi(alg, a, cap), Fraction(0))


def theta_with_witness(alg, a: Event, cap: int = DEFAULT_CAP):
    """max over y of chi(a & y); the inner quantifier only sees subsets of ``a``."""
    _own(alg, a)
    sums = _table(alg, cap)
    v, u = kernels.finest_split(sums, a.mask)
    return alg.unscale(v), Event(alg, u)


def theta(alg, a: Event, cap: int = DEFAULT_CAP) -> Fraction:
    return theta_with_witness(alg, a, cap)[0]


# --------------------------------------------------------------- invariants


@dataclass(frozen=True)
class PhiInvariant:
    """Atom weights in weakly decreasing order, trailing zeros omitted."""

    sorted_weights: tuple

    def __post_init__(self):
        ws = sorted((Fraction(w) for w in self.sorted_weights), reverse=True)
        while ws and ws[-1] == 0:
            ws.pop()
        object.__setattr__(self, "sorted_weights", tuple(ws))

    def __getitem__(self, i: int) -> Fraction:
        """Entry ``i`` (0-based), padding with zeros."""
        return self.sorted_weights[i] if i < len(self.sorted_weights) else Fraction(0)

    def __len__(self):
        return len(self.sorted_weights)


def phi_invariant(alg) -> PhiInvariant:
    return PhiInvariant(tuple(alg.weights))


def elementarily_equivalent(alg1, alg2) -> bool:
    return phi_invariant(alg1) == phi_invariant(alg2)


def find_isomorphism(alg1, alg2):
    """A weight-preserving bijection of atoms as an :class:`Embedding`, or ``None``.

    Depth-first search over the atoms of ``alg1`` (heaviest first), pruned by
    comparing the multisets of weights still unmatched.
    """
    if alg1.k != alg2.k:
        return None
    order = sorted(range(alg1.k), key=lambda i: alg1.weights[i], reverse=True)
    remaining: dict = {}
    for w in alg2.weights:
        remaining[w] = remaining.get(w, 0) + 1
    need: dict = {}
    for w in alg1.weights:
        need[w] = need.get(w, 0) + 1
    if need != remaining:
        return None
    used = [False] * alg2.k
    image = [0] * alg1.k

    def search(pos):
        if pos == len(order):
            return True
        i = order[pos]
        for j in range(alg2.k):
            if not used[j] and alg2.weights[j] == alg1.weights[i]:
                used[j] = True
                image[i] = j
                if search(pos + 1):
                    return True
                used[j] = False
        return False

    if not search(0):
        return None
    return Embedding(alg1, alg2, tuple(1 << j for j in image))


def atoms_report(alg, a: Event | None = None) -> dict:
    """Phi, at_1..at_k and phi_1..phi_k for ``a`` (default: the top element)."""
    a = alg.full() if a is None else a
    _own(alg, a)
    return {
        "phi_invariant": list(phi_invariant(alg).sorted_weights),
        "event": list(a.labels),
        "mu": a.mu,
        "at": [at_n(alg, a, n) for n in range(1, alg.k + 1)],
        "phi": [phi_n_closed(alg, a, n) for n in range(1, alg.k + 1)],
    }
