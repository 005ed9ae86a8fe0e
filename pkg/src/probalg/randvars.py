"""Partitions as [0,1]-valued step random variables: rho_n, d_P, the projection pi and dyadic approximation."""
from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from .algebra import Event, Subalgebra, check_partition
from .conditional import StepFunction, l1_distance
from .errors import ForeignEvent, LengthMismatch, OddLength, ValueOutOfRange


@dataclass(frozen=True, eq=False)
class RVPartition:
    """n labelled parts forming a partition of 1 (empty parts allowed)."""

    alg: object
    parts: tuple

    def __post_init__(self):
        parts = tuple(self.parts)
        check_partition(self.alg, parts)
        object.__setattr__(self, "parts", parts)

    @property
    def n(self) -> int:
        return len(self.parts)

    def __eq__(self, other):
        return isinstance(other, RVPartition) and other.alg is self.alg and other.parts == self.parts

    def __hash__(self):
        return hash((id(self.alg), tuple(p.mask for p in self.parts)))

    def __repr__(self):
        return "RVPartition(" + ", ".join(repr(p) for p in self.parts) + ")"

    def step_function(self) -> StepFunction:
        """f_E = sum_i (i/n) chi_{E_i}, i counted from 1."""
        nonempty = [(i, p) for i, p in enumerate(self.parts, start=1) if p]
        base = Subalgebra(self.alg, tuple(p.mask for _, p in nonempty))
        pos = {b: j for j, b in enumerate(base.blocks)}
        vals = [Fraction(0)] * len(base.blocks)
        for i, p in nonempty:
            vals[pos[p.mask]] = Fraction(i, self.n)
        return StepFunction(base, tuple(vals))


def _pair(E: RVPartition, F: RVPartition):
    if E.alg is not F.alg:
        raise ForeignEvent("partitions of different algebras")
    if E.n != F.n:
        raise LengthMismatch(f"partitions with {E.n} and {F.n} parts")
    return E.alg


def rho_n(alg, E: RVPartition, F: RVPartition) -> Fraction:
    """(1/n) sum over i != j of |i - j| mu(E_i & F_j)."""
    _pair(E, F)
    n = E.n
    total = Fraction(0)
    for i, e in enumerate(E.parts):
        for j, f in enumerate(F.parts):
            if i != j and e.mask & f.mask:
                total += abs(i - j) * alg.mask_measure(e.mask & f.mask)
    return total / n


def dP_rv(alg, E: RVPartition, F: RVPartition) -> Fraction:
    """Half the summed measure of the symmetric differences of corresponding parts."""
    _pair(E, F)
    return sum(((e ^ f).mu for e, f in zip(E.parts, F.parts)), Fraction(0)) / 2


def project_pi(alg, E: RVPartition) -> RVPartition:
    """(E_1 | E_2, E_3 | E_4, ...): merge consecutive pairs of parts."""
    if E.n % 2:
        raise OddLength(f"cannot halve {E.n} parts")
    p = E.parts
    return RVPartition(alg, tuple(p[2 * i] | p[2 * i + 1] for i in range(E.n // 2)))


def dyadic_index(v: Fraction, depth: int) -> int:
    """j with v in I_j: I_1 = [0, 2^-d] and I_j = ((j-1) 2^-d, j 2^-d] for j > 1."""
    n = 1 << depth
    if v == 0:
        return 1
    scaled = v * n
    j = scaled.numerator // scaled.denominator
    return j if j == scaled else j + 1


def dyadic_approx(alg, f: StepFunction, depth: int) -> RVPartition:
    """Partition into the preimages of the 2^depth dyadic intervals."""
    if depth < 1:
        raise ValueError("depth must be positive")
    if not f.in_unit_interval():
        raise ValueOutOfRange("step function has a value outside [0,1]")
    n = 1 << depth
    masks = [0] * n
    for b, v in zip(f.base.blocks, f.values):
        masks[dyadic_index(v, depth) - 1] |= b
    return RVPartition(alg, tuple(Event(alg, m) for m in masks))


def approximation_error(alg, f: StepFunction, depth: int) -> Fraction:
    return l1_distance(alg, dyadic_approx(alg, f, depth).step_function(), f)


@dataclass(frozen=True)
class PiecewiseLinear:
    """Continuous piecewise-linear map on [0,1] through rational points (x_0 = 0 < ... < x_m = 1)."""

    xs: tuple
    ys: tuple

    def __post_init__(self):
        xs = tuple(Fraction(x) for x in self.xs)
        ys = tuple(Fraction(y) for y in self.ys)
        if len(xs) != len(ys) or len(xs) < 2 or xs[0] != 0 or xs[-1] != 1:
            raise ValueError("breakpoints must run from 0 to 1 with one value each")
        if any(a >= b for a, b in zip(xs, xs[1:])):
            raise ValueError("breakpoints must increase")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    def __call__(self, v) -> Fraction:
        v = Fraction(v)
        if not 0 <= v <= 1:
            raise ValueOutOfRange(f"{v} is outside [0,1]")
        i = min(bisect.bisect_right(self.xs, v), len(self.xs) - 1)
        x0, x1, y0, y1 = self.xs[i - 1], self.xs[i], self.ys[i - 1], self.ys[i]
        return y0 + (y1 - y0) * (v - x0) / (x1 - x0)


def compose(alg, theta, *fs: StepFunction) -> StepFunction:
    """theta(f_1, ..., f_m) on the common refinement of the bases; ``theta`` maps rationals to rationals."""
    base = reduce(lambda s, t: s.join(t), (f.base for f in fs))
    atom_vals = [f.atom_values() for f in fs]
    vals = []
    for b in base.blocks:
        i = (b & -b).bit_length() - 1
        vals.append(Fraction(theta(*(av[i] for av in atom_vals))))
    return StepFunction(base, tuple(vals))
