"""Types over finite subalgebras: descriptors, realization, distances and the d_Cb metric."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .algebra import (
    Embedding,
    Event,
    Subalgebra,
    _own,
    associated_partition,
    check_partition,
    is_partition,
    sign_tuples,
    split_atoms,
)
from .conditional import StepFunction, cond_prob, l1_distance, level_partition
from .errors import EmptyTuple, ForeignEvent, InvalidDescriptor, LengthMismatch

MAX_UNION_BLOCKS = 20


@dataclass(frozen=True, eq=False)
class TypeDescriptor:
    """tp(a/C) for an n-tuple: the step functions g_s = P(a^s|C), s in lexicographic order."""

    n: int
    base: Subalgebra
    g: dict

    def __post_init__(self):
        keys = sign_tuples(self.n)
        if set(self.g) != set(keys):
            raise InvalidDescriptor(f"need one step function per s in {{-1,+1}}^{self.n}")
        g = {}
        for s in keys:
            f = self.g[s]
            if f.base != self.base:
                f = _rebase(f, self.base)
            if not f.in_unit_interval():
                raise InvalidDescriptor(f"g_{s} has a value outside [0,1]")
            g[s] = f
        for j in range(len(self.base.blocks)):
            if sum((g[s].values[j] for s in keys), Fraction(0)) != 1:
                raise InvalidDescriptor(f"values on block {j} do not sum to 1")
        object.__setattr__(self, "g", g)

    def __eq__(self, other):
        return (
            isinstance(other, TypeDescriptor)
            and other.n == self.n
            and other.base == self.base
            and all(other.g[s].values == self.g[s].values for s in self.g)
        )

    def __hash__(self):
        return hash((self.n, self.base, tuple(self.g[s].values for s in sign_tuples(self.n))))

    def __repr__(self):
        inner = "; ".join(f"{''.join('+' if x > 0 else '-' for x in s)}: {self.g[s]!r}" for s in self.g)
        return f"TypeDescriptor(n={self.n}, {inner})"

    def table(self) -> list:
        """Rows (s, values per block)."""
        return [(s, self.g[s].values) for s in sign_tuples(self.n)]

    def transport(self, emb: Embedding) -> "TypeDescriptor":
        """The same descriptor over the image of the base under ``emb``."""
        new_base = emb.image_sub(self.base)
        pos = {emb.mask(b): j for j, b in enumerate(self.base.blocks)}
        order = [pos[b] for b in new_base.blocks]
        g = {s: StepFunction(new_base, tuple(f.values[j] for j in order)) for s, f in self.g.items()}
        return TypeDescriptor(self.n, new_base, g)


def _rebase(f: StepFunction, base: Subalgebra) -> StepFunction:
    if f.base.alg is not base.alg or f.base.blocks != base.blocks:
        raise InvalidDescriptor("step functions must share the descriptor base")
    return StepFunction(base, f.values)


def _tuple(alg, tup):
    tup = list(tup)
    if not tup:
        raise EmptyTuple("need at least one event")
    _own(alg, *tup)
    return tup


def type_of(alg, tup, C: Subalgebra) -> TypeDescriptor:
    tup = _tuple(alg, tup)
    if C.alg is not alg:
        raise ForeignEvent("subalgebra belongs to another algebra")
    cells = associated_partition(alg, tup)
    return TypeDescriptor(len(tup), C, {s: cond_prob(alg, c, C) for s, c in zip(sign_tuples(len(tup)), cells)})


def realizes(alg, tup, desc: TypeDescriptor) -> bool:
    return type_of(alg, tup, desc.base) == desc


@dataclass
class Realization:
    alg: object
    embedding: Embedding
    tuple: list


def _stack(alg, members, targets):
    """Cut the atoms ``members`` (in order) against consecutive masses ``targets``.

    Returns per atom a list of (mass, target index) pieces.
    """
    out = {}
    t, left = 0, (targets[0] if targets else Fraction(0))
    for x in members:
        remaining = alg.weights[x]
        pieces = []
        while remaining > 0:
            while left == 0:
                t += 1
                left = targets[t]
            take = min(remaining, left)
            pieces.append((take, t))
            remaining -= take
            left -= take
        out[x] = pieces
    return out


def realize_type(alg, desc: TypeDescriptor) -> Realization:
    """Split atoms so that some tuple has exactly the type ``desc``.

    Inside each base block the atoms are laid end to end and cut at the
    cumulative masses g_s * mu(block), taking s from (+1,...,+1) down to
    (-1,...,-1).
    """
    if desc.base.alg is not alg:
        raise InvalidDescriptor("descriptor base is not a subalgebra of this algebra")
    signs = list(reversed(sign_tuples(desc.n)))
    assignment = {}
    for j, b in enumerate(desc.base.blocks):
        mb = alg.mask_measure(b)
        targets = [desc.g[s].values[j] * mb for s in signs]
        members = [i for i in range(alg.k) if b >> i & 1]
        assignment.update(_stack(alg, members, targets))
    new, emb, piece_masks = split_atoms(alg, [[w for w, _ in assignment[x]] for x in range(alg.k)])
    tup = [0] * desc.n
    for x in range(alg.k):
        for (w, t), m in zip(assignment[x], piece_masks[x]):
            s = signs[t]
            for i in range(desc.n):
                if s[i] > 0:
                    tup[i] |= m
    return Realization(new, emb, [Event(new, m) for m in tup])


# -------------------------------------------------------------- distances


def _partitions(alg, a, b):
    a, b = list(a), list(b)
    if len(a) != len(b):
        raise LengthMismatch(f"tuples of lengths {len(a)} and {len(b)}")
    if not a:
        raise EmptyTuple("need at least one event")
    check_partition(alg, a)
    check_partition(alg, b)
    return a, b


def coordinate_distances(alg, a, b, C: Subalgebra) -> list:
    """||P(a_i|C) - P(b_i|C)||_1 for each coordinate."""
    return [l1_distance(alg, cond_prob(alg, x, C), cond_prob(alg, y, C)) for x, y in zip(a, b)]


def type_distance_partitions(alg, a, b, C: Subalgebra) -> Fraction:
    """Exact distance between the types over C of two partitions of 1."""
    a, b = _partitions(alg, a, b)
    return max(coordinate_distances(alg, a, b, C))


@dataclass
class OptimalRealization:
    alg: object
    embedding: Embedding
    b_prime: list
    distances: list


def optimal_realization(alg, a, b, C: Subalgebra) -> OptimalRealization:
    """A realization b' of tp(b/C) next to the image of ``a`` attaining every coordinate distance.

    Inside each block c of C: where mu(a_i & c) >= mu(b_i & c), b'_i is a
    piece of a_i & c of mass mu(b_i & c); the leftover of those a_i is cut
    into pieces of mass mu(b_j & c) - mu(a_j & c) and each added to a_j & c
    for the remaining coordinates j.
    """
    a, b = _partitions(alg, a, b)
    if C.alg is not alg:
        raise ForeignEvent("subalgebra belongs to another algebra")
    n = len(a)
    owner = [next(i for i in range(n) if a[i].mask >> x & 1) for x in range(alg.k)]
    assignment = {}
    for c in C.blocks:
        alpha = [alg.mask_measure(a[i].mask & c) for i in range(n)]
        beta = [alg.mask_measure(b[i].mask & c) for i in range(n)]
        keep = [i for i in range(n) if alpha[i] >= beta[i]]
        grow = [j for j in range(n) if alpha[j] < beta[j]]
        leftover_targets = [beta[j] - alpha[j] for j in grow]
        leftover_atoms = []
        for i in keep:
            members = [x for x in range(alg.k) if c >> x & 1 and owner[x] == i]
            # first beta_i of a_i & c stays labelled i, the rest is leftover
            cut = _stack(alg, members, [beta[i], alpha[i] - beta[i]])
            for x, pieces in cut.items():
                assignment[x] = []
                for w, t in pieces:
                    if t == 0:
                        assignment[x].append((w, i))
                    else:
                        leftover_atoms.append((x, w))
        cursor, left = 0, (leftover_targets[0] if leftover_targets else Fraction(0))
        for x, w in leftover_atoms:
            while w > 0:
                while left == 0:
                    cursor += 1
                    left = leftover_targets[cursor]
                take = min(w, left)
                assignment[x].append((take, grow[cursor]))
                w -= take
                left -= take
        for j in grow:
            for x in range(alg.k):
                if c >> x & 1 and owner[x] == j:
                    assignment[x] = [(alg.weights[x], j)]
    new, emb, piece_masks = split_atoms(alg, [[w for w, _ in assignment[x]] for x in range(alg.k)])
    bp = [0] * n
    for x in range(alg.k):
        for (w, label), m in zip(assignment[x], piece_masks[x]):
            bp[label] |= m
    b_prime = [Event(new, m) for m in bp]
    a_img = emb.images(a)
    dists = [(u ^ v).mu for u, v in zip(a_img, b_prime)]
    return OptimalRealization(new, emb, b_prime, dists)


def dP(alg, a, b) -> Fraction:
    """Half the summed distance between corresponding cells of the associated partitions."""
    a, b = _tuple(alg, a), _tuple(alg, b)
    if len(a) != len(b):
        raise LengthMismatch(f"tuples of lengths {len(a)} and {len(b)}")
    pa, pb = associated_partition(alg, a), associated_partition(alg, b)
    return sum(((x ^ y).mu for x, y in zip(pa, pb)), Fraction(0)) / 2


def _max_union(alg, deltas_scaled):
    if len(deltas_scaled) <= MAX_UNION_BLOCKS:
        dtype = object if sum(abs(d) for d in deltas_scaled) * 4 >= kernels.INT64_SAFE else "int64"
        arr = np.array(deltas_scaled, dtype=dtype)
        return kernels.max_abs_union(arr)
    pos = sum(d for d in deltas_scaled if d > 0)
    neg = -sum(d for d in deltas_scaled if d < 0)
    if pos >= neg:
        return pos, sum(1 << j for j, d in enumerate(deltas_scaled) if d > 0)
    return neg, sum(1 << j for j, d in enumerate(deltas_scaled) if d < 0)


def dCb_with_witness(alg, a, b, C: Subalgebra):
    """max over s and over elements c of C of |mu(a^s & c) - mu(b^s & c)|, with the maximising (s, c)."""
    a, b = _tuple(alg, a), _tuple(alg, b)
    if len(a) != len(b):
        raise LengthMismatch(f"tuples of lengths {len(a)} and {len(b)}")
    if C.alg is not alg:
        raise ForeignEvent("subalgebra belongs to another algebra")
    L = alg.scale
    best, wit = -1, None
    for s, x, y in zip(sign_tuples(len(a)), associated_partition(alg, a), associated_partition(alg, b)):
        deltas = [int((alg.mask_measure(x.mask & c) - alg.mask_measure(y.mask & c)) * L) for c in C.blocks]
        v, sel = _max_union(alg, deltas)
        if v > best:
            cmask = 0
            for j, c in enumerate(C.blocks):
                if sel >> j & 1:
                    cmask |= c
            best, wit = v, (s, Event(alg, cmask))
    return Fraction(best, L), wit


def dCb(alg, a, b, C: Subalgebra) -> Fraction:
    return dCb_with_witness(alg, a, b, C)[0]


def dCb_closed(alg, a, b, C: Subalgebra) -> Fraction:
    """Same value from positive and negative parts: max over s of max(sum of gains, sum of losses)."""
    best = Fraction(0)
    for x, y in zip(associated_partition(alg, a), associated_partition(alg, b)):
        deltas = [alg.mask_measure(x.mask & c) - alg.mask_measure(y.mask & c) for c in C.blocks]
        best = max(best, sum(d for d in deltas if d > 0), -sum(d for d in deltas if d < 0))
    return best


# ------------------------------------------------------------------ Pi_n


def pi_map(desc: TypeDescriptor) -> TypeDescriptor:
    """Type of the associated partition (a^s)_s, a 2^n-tuple, from the type of a."""
    signs = sign_tuples(desc.n)
    N = len(signs)
    zero = StepFunction(desc.base, (Fraction(0),) * len(desc.base.blocks))
    g = {}
    for t in sign_tuples(N):
        ups = [j for j, tj in enumerate(t) if tj > 0]
        g[t] = desc.g[signs[ups[0]]] if len(ups) == 1 else zero
    return TypeDescriptor(N, desc.base, g)


@dataclass
class LipschitzBracket:
    lower: Fraction
    upper: Fraction
    middle: Fraction

    def contains(self, value) -> bool:
        return self.lower <= value <= self.upper


def lipschitz_check(alg, a, b, C: Subalgebra) -> LipschitzBracket:
    """Certified bracket [d/n, 2^(n-1) d] for the n-type distance, d the distance of the associated partitions."""
    a, b = _tuple(alg, a), _tuple(alg, b)
    if len(a) != len(b):
        raise LengthMismatch(f"tuples of lengths {len(a)} and {len(b)}")
    n = len(a)
    middle = type_distance_partitions(alg, associated_partition(alg, a), associated_partition(alg, b), C)
    return LipschitzBracket(middle / n, middle * 2 ** (n - 1), middle)


def constructive_tuple_distance(alg, a, b, C: Subalgebra) -> Fraction:
    """max_i d(a_i, b'_i) for the b' obtained from the optimal realization of the associated partitions.

    An upper bound for the n-type distance, at most 2^(n-1) times the partition distance.
    """
    a, b = _tuple(alg, a), _tuple(alg, b)
    n = len(a)
    pa, pb = associated_partition(alg, a), associated_partition(alg, b)
    opt = optimal_realization(alg, pa, pb, C)
    signs = sign_tuples(n)
    a_img = opt.embedding.images(a)
    out = Fraction(0)
    for i in range(n):
        m = 0
        for s, cell in zip(signs, opt.b_prime):
            if s[i] > 0:
                m |= cell.mask
        out = max(out, (a_img[i] ^ Event(opt.alg, m)).mu)
    return out


# -------------------------------------------------------------------- SFB


@dataclass
class SFBReport:
    eps: Fraction
    k: int
    partition_distance: Fraction  # max_s ||P(a^s|C) - P(b^s|C)||_1
    lhs: Fraction
    dcb: Fraction
    rhs: Fraction
    blocks_of_E: int
    steps_ok: bool

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs and self.partition_distance <= self.rhs and self.steps_ok


def sfb_check(alg, a, b, C: Subalgebra, eps) -> SFBReport:
    """Check 2^(1-n) d <= (1/eps + 1)^2 d_Cb + 2 eps along the steps of its proof.

    ``lhs`` is 2^(1-n) times the exact partition-type distance when ``a`` and
    ``b`` are partitions of 1, and otherwise the associated-partition distance,
    which bounds 2^(1-n) d from above. Each intermediate inequality of the proof
    is also checked, with E generated by the level partitions of P(a^s|C) and
    P(b^s|C) for k - 1 <= 1/eps < k.
    """
    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    a, b = _tuple(alg, a), _tuple(alg, b)
    if len(a) != len(b):
        raise LengthMismatch(f"tuples of lengths {len(a)} and {len(b)}")
    n = len(a)
    k = int(1 / eps) + 1
    pa, pb = associated_partition(alg, a), associated_partition(alg, b)
    middle = type_distance_partitions(alg, pa, pb, C)
    d_cb = dCb(alg, a, b, C)
    rhs = (1 / eps + 1) ** 2 * d_cb + 2 * eps
    if is_partition(alg, a) and is_partition(alg, b):
        lhs = type_distance_partitions(alg, a, b, C) / 2 ** (n - 1)
    else:
        lhs = middle
    steps_ok = True
    worst_blocks = 0
    for x, y in zip(pa, pb):
        fa, fb = cond_prob(alg, x, C), cond_prob(alg, y, C)
        E = level_partition(alg, fa, k).join(level_partition(alg, fb, k))
        worst_blocks = max(worst_blocks, len(E.blocks))
        ga, gb = cond_prob(alg, x, E), cond_prob(alg, y, E)
        coarse = l1_distance(alg, ga, gb)
        blockwise = sum(
            (abs(alg.mask_measure(x.mask & e) - alg.mask_measure(y.mask & e)) for e in E.blocks), Fraction(0)
        )
        steps_ok &= l1_distance(alg, fa, ga) <= Fraction(1, k) and l1_distance(alg, fb, gb) <= Fraction(1, k)
        steps_ok &= l1_distance(alg, fa, fb) <= coarse + 2 * eps
        steps_ok &= coarse == blockwise <= len(E.blocks) * d_cb
        steps_ok &= len(E.blocks) <= k * k <= (1 / eps + 1) ** 2
    return SFBReport(eps, k, middle, lhs, d_cb, rhs, worst_blocks, steps_ok)
