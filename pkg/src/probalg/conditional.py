"""Step functions over finite subalgebras: conditional probability and expectation, L1/L2 distances."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import Event, Subalgebra, _own, fmt
from .errors import ForeignEvent, ValueOutOfRange


@dataclass(frozen=True, eq=False)
class StepFunction:
    """One rational value per block of ``base``."""

    base: Subalgebra
    values: tuple

    def __post_init__(self):
        vals = tuple(Fraction(v) for v in self.values)
        if len(vals) != len(self.base.blocks):
            raise ValueError(f"{len(vals)} values for {len(self.base.blocks)} blocks")
        object.__setattr__(self, "values", vals)

    @property
    def alg(self):
        return self.base.alg

    def __eq__(self, other):
        """Equal as functions on atoms (bases may differ)."""
        if not isinstance(other, StepFunction) or other.alg is not self.alg:
            return False
        return self.atom_values() == other.atom_values()

    def __hash__(self):
        return hash((id(self.alg), tuple(self.atom_values())))

    def __repr__(self):
        return "StepFunction(" + ", ".join(fmt(v) for v in self.values) + ")"

    def atom_values(self) -> list:
        out = [Fraction(0)] * self.alg.k
        for b, v in zip(self.base.blocks, self.values):
            for i in range(self.alg.k):
                if b >> i & 1:
                    out[i] = v
        return out

    def integrate(self, e: Event) -> Fraction:
        """Integral of the function over the event ``e``."""
        _own(self.alg, e)
        return sum((v * self.alg.mask_measure(b & e.mask) for b, v in zip(self.base.blocks, self.values)), Fraction(0))

    def on(self, sub: Subalgebra) -> "StepFunction":
        """The same function expressed over a refinement ``sub`` of its base."""
        if not self.base.is_subalgebra_of(sub):
            raise ValueError("target subalgebra does not refine the base")
        av = self.atom_values()
        return StepFunction(sub, tuple(av[(b & -b).bit_length() - 1] for b in sub.blocks))

    def in_unit_interval(self) -> bool:
        return all(0 <= v <= 1 for v in self.values)


def constant(alg, c, base: Subalgebra | None = None) -> StepFunction:
    base = base or Subalgebra.trivial(alg)
    return StepFunction(base, (Fraction(c),) * len(base.blocks))


def indicator(alg, a: Event) -> StepFunction:
    """chi_a over the full subalgebra."""
    _own(alg, a)
    full = Subalgebra.full(alg)
    return StepFunction(full, tuple(Fraction(1 if a.mask & b else 0) for b in full.blocks))


def _check_sub(alg, sub):
    if sub.alg is not alg:
        raise ForeignEvent("subalgebra belongs to another algebra")


def cond_prob(alg, a: Event, C: Subalgebra) -> StepFunction:
    """P(a|C): on each block E, mu(a & E) / mu(E)."""
    _own(alg, a)
    _check_sub(alg, C)
    return StepFunction(C, tuple(alg.mask_measure(a.mask & b) / alg.mask_measure(b) for b in C.blocks))


def cond_expect(alg, f: StepFunction, D: Subalgebra) -> StepFunction:
    """E(f|D), computed on the common refinement of ``f.base`` and ``D``."""
    _check_sub(alg, f.base)
    _check_sub(alg, D)
    vals = []
    for d in D.blocks:
        acc = Fraction(0)
        for b, v in zip(f.base.blocks, f.values):
            if b & d:
                acc += v * alg.mask_measure(b & d)
        vals.append(acc / alg.mask_measure(d))
    return StepFunction(D, tuple(vals))


def _pointwise(alg, f, g):
    for h in (f, g):
        _check_sub(alg, h.base)
    return zip(alg.weights, f.atom_values(), g.atom_values())


def l1_distance(alg, f: StepFunction, g: StepFunction) -> Fraction:
    return sum((w * abs(x - y) for w, x, y in _pointwise(alg, f, g)), Fraction(0))


def l2_distance_sq(alg, f: StepFunction, g: StepFunction) -> Fraction:
    return sum((w * (x - y) ** 2 for w, x, y in _pointwise(alg, f, g)), Fraction(0))


def norm_sq(alg, f: StepFunction) -> Fraction:
    """Squared L2 norm."""
    return l2_distance_sq(alg, f, constant(alg, 0))


def level_index(v: Fraction, k: int) -> int:
    """j with v in I_j, where I_j = [(j-1)/k, j/k) for j < k and I_k = [(k-1)/k, 1]."""
    if v == 1:
        return k
    return int(v * k) + 1


def level_partition(alg, f: StepFunction, k: int) -> Subalgebra:
    """Subalgebra generated by the level sets f^-1(I_j), j = 1..k."""
    if k < 1:
        raise ValueError("k must be positive")
    if not f.in_unit_interval():
        raise ValueOutOfRange("step function has a value outside [0,1]")
    classes: dict = {}
    for b, v in zip(f.base.blocks, f.values):
        j = level_index(v, k)
        classes[j] = classes.get(j, 0) | b
    return Subalgebra(alg, tuple(classes.values()))
