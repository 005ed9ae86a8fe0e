"""Finite probability algebras, events as atom bitmasks, and subalgebras as partitions."""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import kernels
from .errors import (
    BadLength,
    EmptyTuple,
    ForeignEvent,
    InvalidAlgebra,
    NotAPartition,
)


def to_fraction(value) -> Fraction:
    """Exact rational from an int, Fraction or ``"p/q"`` string (floats are refused)."""
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass a Fraction or a 'p/q' string")
    return Fraction(value)


def fmt(q: Fraction) -> str:
    """Render as ``p/q`` with an explicit denominator, e.g. ``1/1``."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def sign_tuples(n: int):
    """All s in {-1,+1}^n in lexicographic order with -1 < +1."""
    return list(itertools.product((-1, 1), repeat=n))


class FiniteProbabilityAlgebra:
    """Atoms with strictly positive rational weights summing to 1.

    Equality is identity: two algebras with equal weights are still distinct
    ambient structures, and events never mix between them.
    """

    def __init__(self, weights, labels=None, *, validate: bool = True):
        self.weights = tuple(to_fraction(w) for w in weights)
        if labels is None:
            labels = [str(i) for i in range(len(self.weights))]
        self.labels = tuple(str(x) for x in labels)
        if len(self.labels) != len(self.weights):
            raise InvalidAlgebra("one label per atom is required")
        if len(set(self.labels)) != len(self.labels):
            raise InvalidAlgebra("atom labels must be distinct")
        if validate:
            if not self.weights:
                raise InvalidAlgebra("an algebra needs at least one atom")
            bad = [i for i, w in enumerate(self.weights) if w <= 0]
            if bad:
                raise InvalidAlgebra(f"atom {self.labels[bad[0]]} has non-positive weight")
            total = sum(self.weights, Fraction(0))
            if total != 1:
                raise InvalidAlgebra(f"weights sum to {fmt(total)}, not 1")
        self._index = {lab: i for i, lab in enumerate(self.labels)}

    @classmethod
    def unchecked(cls, weights, labels=None):
        """Build without validating; used to exercise :func:`verify_axioms` on broken data."""
        return cls(weights, labels, validate=False)

    # --------------------------------------------------------------- basics
    @property
    def k(self) -> int:
        return len(self.weights)

    @property
    def full_mask(self) -> int:
        return (1 << self.k) - 1

    def __len__(self):
        return self.k

    def __repr__(self):
        ws = ", ".join(f"{lab}:{fmt(w)}" for lab, w in zip(self.labels, self.weights))
        return f"FiniteProbabilityAlgebra({ws})"

    def index_of(self, label) -> int:
        if isinstance(label, (int, np.integer)) and not isinstance(label, bool):
            i = int(label)
            if not 0 <= i < self.k:
                raise ForeignEvent(f"atom index {i} out of range")
            return i
        try:
            return self._index[str(label)]
        except KeyError:
            raise ForeignEvent(f"unknown atom label {label!r}") from None

    def event(self, members=()) -> "Event":
        """Event from atom indices or labels."""
        mask = 0
        for m in members:
            mask |= 1 << self.index_of(m)
        return Event(self, mask)

    def from_mask(self, mask: int) -> "Event":
        mask = int(mask)
        if mask < 0 or mask > self.full_mask:
            raise ForeignEvent("mask has bits outside the atom range")
        return Event(self, mask)

    def full(self) -> "Event":
        return Event(self, self.full_mask)

    def empty(self) -> "Event":
        return Event(self, 0)

    def atom(self, i) -> "Event":
        return Event(self, 1 << self.index_of(i))

    def atoms(self):
        return [Event(self, 1 << i) for i in range(self.k)]

    def all_events(self):
        return [Event(self, m) for m in range(1 << self.k)]

    # ------------------------------------------------------------- measures
    def mask_measure(self, mask: int) -> Fraction:
        total = Fraction(0)
        i = 0
        while mask:
            if mask & 1:
                total += self.weights[i]
            mask >>= 1
            i += 1
        return total

    @cached_property
    def scale(self) -> int:
        """Least common denominator of the weights."""
        return math.lcm(*(w.denominator for w in self.weights)) if self.weights else 1

    @cached_property
    def int_weights(self) -> np.ndarray:
        """Weights times :attr:`scale`, as int64 when safe and object otherwise."""
        return kernels.as_weight_array([int(w * self.scale) for w in self.weights])

    def subset_sums(self) -> np.ndarray:
        """Scaled measure of every mask; memoised, so only call for small ``k``."""
        cached = self.__dict__.get("_subset_sums")
        if cached is None:
            cached = kernels.subset_sums(self.int_weights)
            self.__dict__["_subset_sums"] = cached
        return cached

    def unscale(self, value) -> Fraction:
        return Fraction(int(value), self.scale)


@dataclass(frozen=True, eq=False)
class Event:
    """A set of atoms of one algebra, stored as a bitmask."""

    alg: FiniteProbabilityAlgebra
    mask: int

    def _same(self, other: "Event"):
        if not isinstance(other, Event):
            raise TypeError(f"expected an Event, got {type(other).__name__}")
        if other.alg is not self.alg:
            raise ForeignEvent("events belong to different algebras")

    def __eq__(self, other):
        return isinstance(other, Event) and other.alg is self.alg and other.mask == self.mask

    def __hash__(self):
        return hash((id(self.alg), self.mask))

    def __invert__(self):
        return Event(self.alg, self.alg.full_mask & ~self.mask)

    def __and__(self, other):
        self._same(other)
        return Event(self.alg, self.mask & other.mask)

    def __or__(self, other):
        self._same(other)
        return Event(self.alg, self.mask | other.mask)

    def __xor__(self, other):
        self._same(other)
        return Event(self.alg, self.mask ^ other.mask)

    def __sub__(self, other):
        self._same(other)
        return Event(self.alg, self.mask & ~other.mask)

    def __le__(self, other):
        self._same(other)
        return self.mask & ~other.mask == 0

    def __bool__(self):
        return self.mask != 0

    def __len__(self):
        return bin(self.mask).count("1")

    def __iter__(self):
        return iter(self.members)

    @property
    def members(self) -> tuple:
        return tuple(i for i in range(self.alg.k) if self.mask >> i & 1)

    @property
    def labels(self) -> tuple:
        return tuple(self.alg.labels[i] for i in self.members)

    @property
    def mu(self) -> Fraction:
        return self.alg.mask_measure(self.mask)

    def __repr__(self):
        return "{" + ",".join(self.labels) + "}"


def _own(alg, *events):
    for e in events:
        if not isinstance(e, Event):
            raise TypeError(f"expected an Event, got {type(e).__name__}")
        if e.alg is not alg:
            raise ForeignEvent("event belongs to another algebra")


def mu(alg, e: Event) -> Fraction:
    _own(alg, e)
    return e.mu


def dist(alg, e: Event, f: Event) -> Fraction:
    _own(alg, e, f)
    return (e ^ f).mu


def complement(alg, e):
    _own(alg, e)
    return ~e


def meet(alg, e, f):
    _own(alg, e, f)
    return e & f


def join(alg, e, f):
    _own(alg, e, f)
    return e | f


def symdiff(alg, e, f):
    _own(alg, e, f)
    return e ^ f


# ------------------------------------------------------------------ partitions


def cell(alg, tuple_, s) -> Event:
    """a^s: the meet of a_i for s_i = +1 and of the complement of a_i for s_i = -1."""
    m = alg.full_mask
    for a, si in zip(tuple_, s):
        m &= a.mask if si > 0 else ~a.mask
    return Event(alg, m & alg.full_mask)


def associated_partition(alg, tuple_) -> list:
    """The 2^n cells a^s in lexicographic order of s."""
    tuple_ = list(tuple_)
    if not tuple_:
        raise EmptyTuple("associated_partition needs at least one event")
    _own(alg, *tuple_)
    return [cell(alg, tuple_, s) for s in sign_tuples(len(tuple_))]


def check_partition(alg, parts):
    _own(alg, *parts)
    seen = 0
    for p in parts:
        if seen & p.mask:
            raise NotAPartition("parts overlap")
        seen |= p.mask
    if seen != alg.full_mask:
        raise NotAPartition("parts do not cover every atom")


def is_partition(alg, parts) -> bool:
    try:
        check_partition(alg, parts)
    except NotAPartition:
        return False
    return True


def tuple_from_partition(alg, parts) -> list:
    parts = list(parts)
    n = len(parts).bit_length() - 1
    if len(parts) == 0 or len(parts) != 1 << n or n == 0:
        raise BadLength(f"length {len(parts)} is not 2^n with n >= 1")
    check_partition(alg, parts)
    out = []
    signs = sign_tuples(n)
    for i in range(n):
        m = 0
        for s, p in zip(signs, parts):
            if s[i] > 0:
                m |= p.mask
        out.append(Event(alg, m))
    return out


# ------------------------------------------------------------------ subalgebras


def _canonical(blocks):
    blocks = [b for b in blocks if b]
    return tuple(sorted(blocks, key=lambda b: b & -b))


@dataclass(frozen=True, eq=False)
class Subalgebra:
    """A finite subalgebra, stored as the partition of atoms into its own atoms (blocks)."""

    alg: FiniteProbabilityAlgebra
    blocks: tuple = field()

    def __post_init__(self):
        object.__setattr__(self, "blocks", _canonical(int(b) for b in self.blocks))
        seen = 0
        for b in self.blocks:
            if seen & b:
                raise NotAPartition("subalgebra blocks overlap")
            seen |= b
        if seen != self.alg.full_mask:
            raise NotAPartition("subalgebra blocks do not cover every atom")

    @classmethod
    def trivial(cls, alg):
        return cls(alg, (alg.full_mask,))

    @classmethod
    def full(cls, alg):
        return cls(alg, tuple(1 << i for i in range(alg.k)))

    @classmethod
    def from_events(cls, alg, parts):
        """Subalgebra whose atoms are the nonempty members of a partition."""
        parts = list(parts)
        check_partition(alg, parts)
        return cls(alg, tuple(p.mask for p in parts))

    def __eq__(self, other):
        return isinstance(other, Subalgebra) and other.alg is self.alg and other.blocks == self.blocks

    def __hash__(self):
        return hash((id(self.alg), self.blocks))

    def __len__(self):
        return len(self.blocks)

    def __repr__(self):
        inner = " | ".join(repr(Event(self.alg, b)) for b in self.blocks)
        return f"Subalgebra({inner})"

    def block_events(self) -> list:
        return [Event(self.alg, b) for b in self.blocks]

    def block_measures(self) -> list:
        return [self.alg.mask_measure(b) for b in self.blocks]

    def block_of_atom(self) -> list:
        """Block index of every atom."""
        out = [0] * self.alg.k
        for j, b in enumerate(self.blocks):
            for i in range(self.alg.k):
                if b >> i & 1:
                    out[i] = j
        return out

    def contains(self, e: Event) -> bool:
        """Whether ``e`` is a union of blocks, i.e. an element of this subalgebra."""
        _own(self.alg, e)
        return all((b & e.mask) in (0, b) for b in self.blocks)

    def is_subalgebra_of(self, other: "Subalgebra") -> bool:
        """Self is contained in ``other``: every block of self is a union of blocks of other."""
        if other.alg is not self.alg:
            raise ForeignEvent("subalgebras of different algebras")
        return all(any((b & c) == b for c in self.blocks) for b in other.blocks)

    def join(self, other: "Subalgebra") -> "Subalgebra":
        """The subalgebra generated by both, i.e. the common refinement."""
        if other.alg is not self.alg:
            raise ForeignEvent("subalgebras of different algebras")
        return Subalgebra(self.alg, tuple(b & c for b in self.blocks for c in other.blocks if b & c))

    def union_masks(self):
        """Every element of the subalgebra as a mask (2^blocks of them)."""
        masks = [0]
        for b in self.blocks:
            masks += [m | b for m in masks]
        return masks


def generated_subalgebra(alg, events) -> Subalgebra:
    events = list(events)
    _own(alg, *events)
    classes: dict = {}
    for i in range(alg.k):
        key = tuple(e.mask >> i & 1 for e in events)
        classes[key] = classes.get(key, 0) | (1 << i)
    return Subalgebra(alg, tuple(classes.values()))


# ---------------------------------------------------------------- constructors


def uniform_algebra(n: int, labels=None) -> FiniteProbabilityAlgebra:
    if n < 1:
        raise InvalidAlgebra("n must be positive")
    return FiniteProbabilityAlgebra([Fraction(1, n)] * n, labels)


def random_algebra(seed, n: int, max_weight: int = 12) -> FiniteProbabilityAlgebra:
    """``n`` atoms with integer raw weights in ``[1, max_weight]``, normalised; deterministic in ``seed``."""
    if n < 1:
        raise InvalidAlgebra("n must be positive")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    raw = [rng.randint(1, max_weight) for _ in range(n)]
    total = sum(raw)
    return FiniteProbabilityAlgebra([Fraction(r, total) for r in raw])


def random_event(rng: random.Random, alg) -> Event:
    return Event(alg, rng.getrandbits(alg.k) if alg.k else 0)


def random_partition(rng: random.Random, alg, m: int) -> list:
    """Partition of the atoms into ``m`` labelled parts (some possibly empty)."""
    masks = [0] * m
    for i in range(alg.k):
        masks[rng.randrange(m)] |= 1 << i
    return [Event(alg, x) for x in masks]


def random_subalgebra(rng: random.Random, alg, max_blocks=None) -> Subalgebra:
    m = rng.randint(1, max_blocks or alg.k)
    return Subalgebra(alg, tuple(p.mask for p in random_partition(rng, alg, m)))


def random_refinement(rng: random.Random, sub: Subalgebra) -> Subalgebra:
    """A random subalgebra containing ``sub`` (each block split at random)."""
    out = []
    for b in sub.blocks:
        members = [i for i in range(sub.alg.k) if b >> i & 1]
        parts = rng.randint(1, len(members))
        masks = [0] * parts
        for i in members:
            masks[rng.randrange(parts)] |= 1 << i
        out.extend(masks)
    return Subalgebra(sub.alg, tuple(out))


# ----------------------------------------------------------------- embeddings


@dataclass(frozen=True, eq=False)
class Embedding:
    """Measure-preserving boolean embedding given by the image of each source atom."""

    source: FiniteProbabilityAlgebra
    target: FiniteProbabilityAlgebra
    atom_images: tuple

    @classmethod
    def identity(cls, alg):
        return cls(alg, alg, tuple(1 << i for i in range(alg.k)))

    def mask(self, mask: int) -> int:
        out = 0
        i = 0
        while mask:
            if mask & 1:
                out |= self.atom_images[i]
            mask >>= 1
            i += 1
        return out

    def image(self, e: Event) -> Event:
        _own(self.source, e)
        return Event(self.target, self.mask(e.mask))

    def images(self, events):
        return [self.image(e) for e in events]

    def image_sub(self, sub: Subalgebra) -> Subalgebra:
        if sub.alg is not self.source:
            raise ForeignEvent("subalgebra of another algebra")
        return Subalgebra(self.target, tuple(self.mask(b) for b in sub.blocks))

    def then(self, other: "Embedding") -> "Embedding":
        """Apply self, then ``other``."""
        if other.source is not self.target:
            raise ForeignEvent("embeddings do not compose")
        return Embedding(self.source, other.target, tuple(other.mask(m) for m in self.atom_images))

    def is_measure_preserving(self) -> bool:
        images_disjoint = sum(bin(m).count("1") for m in self.atom_images) == bin(
            self.mask(self.source.full_mask)
        ).count("1")
        covers = self.mask(self.source.full_mask) == self.target.full_mask
        weights_ok = all(
            self.target.mask_measure(m) == w for m, w in zip(self.atom_images, self.source.weights)
        )
        return images_disjoint and covers and weights_ok


def split_atoms(alg, pieces):
    """Split atom ``i`` into pieces of the given absolute weights (``pieces[i]`` sums to its weight).

    Zero pieces are dropped. Returns the new algebra, the embedding of ``alg``,
    and for each atom the list of new-atom masks (``0`` where a piece was dropped),
    aligned with ``pieces[i]``.
    """
    weights, labels, piece_masks, images = [], [], [], []
    for i, ws in enumerate(pieces):
        ws = [Fraction(w) for w in ws]
        if sum(ws, Fraction(0)) != alg.weights[i]:
            raise InvalidAlgebra(f"pieces of atom {alg.labels[i]} do not add up to its weight")
        nonzero = sum(1 for w in ws if w)
        row, img, j = [], 0, 0
        for w in ws:
            if w < 0:
                raise InvalidAlgebra("negative piece")
            if w == 0:
                row.append(0)
                continue
            j += 1
            bit = 1 << len(weights)
            weights.append(w)
            labels.append(alg.labels[i] if nonzero == 1 else f"{alg.labels[i]}_{j}")
            row.append(bit)
            img |= bit
        piece_masks.append(row)
        images.append(img)
    new = FiniteProbabilityAlgebra(weights, labels)
    return new, Embedding(alg, new, tuple(images)), piece_masks


# ------------------------------------------------------------ axiom checking


@dataclass
class AxiomResult:
    name: str
    passed: bool
    witness: object = None


@dataclass
class AxiomReport:
    results: list

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self):
        return [r for r in self.results if not r.passed]

    def __iter__(self):
        return iter(self.results)


EXHAUSTIVE_ATOMS = 12


def verify_axioms(alg, *, seed: int = 0, samples: int = 500) -> AxiomReport:
    """Check the probability-algebra axioms on ``alg``.

    Pairs of events are enumerated exhaustively up to :data:`EXHAUSTIVE_ATOMS`
    atoms; triples (distributivity, triangle inequality) and larger algebras
    are sampled. Works on unvalidated algebras built with
    :meth:`FiniteProbabilityAlgebra.unchecked`.
    """
    res = []
    w = alg.weights
    bad = next((i for i, x in enumerate(w) if x <= 0), None)
    res.append(AxiomResult("nonempty", alg.k > 0, None if alg.k else "no atoms"))
    res.append(
        AxiomResult(
            "strict positivity",
            bad is None,
            None if bad is None else {"atom": alg.labels[bad], "weight": fmt(w[bad])},
        )
    )
    total = sum(w, Fraction(0))
    res.append(AxiomResult("total mass 1", total == 1, None if total == 1 else {"sum": fmt(total)}))
    if alg.k == 0:
        return AxiomReport(res)

    full = alg.full_mask
    rng = random.Random(seed)
    boolean_wit = additivity_wit = metric_wit = None

    if alg.k <= EXHAUSTIVE_ATOMS:
        L = math.lcm(*(x.denominator for x in w))
        iw = kernels.as_weight_array([int(x * L) for x in w])
        S = kernels.subset_sums(iw)
        ys = np.arange(1 << alg.k, dtype=np.int64)
        chunk = max(1, (1 << 20) >> alg.k)
        for x0 in range(0, 1 << alg.k, chunk):
            xs = np.arange(x0, min(x0 + chunk, 1 << alg.k), dtype=np.int64)[:, None]
            y = ys[None, :]
            nx, ny = full ^ xs, full ^ y
            conds = [
                ((xs & y) | (xs & ny)) == xs,  # x = (x & y) | (x & ~y)
                (full ^ (xs | y)) == (nx & ny),  # De Morgan
                (xs | (xs & y)) == xs,  # absorption
                (xs & nx) == 0,
                (xs | nx) == full,
            ]
            ok = np.logical_and.reduce(np.broadcast_arrays(*conds))
            if boolean_wit is None and not ok.all():
                i, j = np.argwhere(~ok)[0]
                boolean_wit = {"x": int(xs[i, 0]), "y": int(ys[j])}
            add = S[xs | y] + S[xs & y] == S[xs] + S[y]
            if additivity_wit is None and not add.all():
                i, j = np.argwhere(~add)[0]
                additivity_wit = {"x": int(xs[i, 0]), "y": int(ys[j])}
            # d(x,y) through symmetric difference against mu(x - y) + mu(y - x)
            met = S[xs ^ y] == S[xs & ny] + S[y & nx]
            if metric_wit is None and not met.all():
                i, j = np.argwhere(~met)[0]
                metric_wit = {"x": int(xs[i, 0]), "y": int(ys[j])}
        zero_ok = S[0] == 0
        one_ok = S[full] == L
    else:
        for _ in range(samples):
            x, y = rng.getrandbits(alg.k), rng.getrandbits(alg.k)
            ex, ey = Event(alg, x), Event(alg, y)
            if boolean_wit is None and not (
                ((ex & ey) | (ex & ~ey)) == ex and ~(ex | ey) == (~ex & ~ey) and (ex | (ex & ey)) == ex
            ):
                boolean_wit = {"x": x, "y": y}
            if additivity_wit is None and (ex | ey).mu + (ex & ey).mu != ex.mu + ey.mu:
                additivity_wit = {"x": x, "y": y}
            if metric_wit is None and (ex ^ ey).mu != (ex - ey).mu + (ey - ex).mu:
                metric_wit = {"x": x, "y": y}
        zero_ok = alg.mask_measure(0) == 0
        one_ok = alg.mask_measure(full) == 1

    if alg.k <= EXHAUSTIVE_ATOMS:
        def m(x):
            return int(S[x])
    else:
        m = alg.mask_measure
    dist_wit = tri_wit = None
    for _ in range(samples):
        x, y, z = (rng.getrandbits(alg.k) for _ in range(3))
        if boolean_wit is None and x & (y | z) != (x & y) | (x & z):
            boolean_wit = {"x": x, "y": y, "z": z}
        dxy, dyz, dxz = m(x ^ y), m(y ^ z), m(x ^ z)
        if tri_wit is None and dxz > dxy + dyz:
            tri_wit = {"x": x, "y": y, "z": z}
        if dist_wit is None and (m((full ^ x) ^ (full ^ y)) != dxy or dxy != m(y ^ x)):
            dist_wit = {"x": x, "y": y}

    def lab(wit):
        if wit is None:
            return None
        return {k: repr(Event(alg, v)) for k, v in wit.items()}

    res.append(AxiomResult("boolean identities", boolean_wit is None, lab(boolean_wit)))
    res.append(AxiomResult("mu(0) = 0", bool(zero_ok)))
    res.append(AxiomResult("mu(1) = 1", bool(one_ok), None if one_ok else {"mu(1)": fmt(total)}))
    res.append(AxiomResult("additivity", additivity_wit is None, lab(additivity_wit)))
    res.append(AxiomResult("d = mu of symmetric difference", metric_wit is None, lab(metric_wit)))
    res.append(AxiomResult("d symmetric, complement invariant", dist_wit is None, lab(dist_wit)))
    res.append(AxiomResult("triangle inequality", tri_wit is None, lab(tri_wit)))
    return AxiomReport(res)
