"""Non-forking extensions, epsilon-forking, and the bound on forking chains."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Embedding, Subalgebra, check_partition, random_refinement
from .conditional import cond_prob, norm_sq
from .errors import ForeignEvent, NotCoarsening
from .independence import extend_with_independent_copy
from .typespace import type_distance_partitions


@dataclass
class NonForking:
    """Common extension holding the image of ``a`` and the non-forking copy ``a2``."""

    alg: object
    embedding: Embedding
    a: list  # image of the original partition
    a2: list  # realizes the non-forking extension of tp(a/E) to C
    C: Subalgebra  # image of C
    E: Subalgebra  # image of E


def _check(alg, a, E, C):
    a = list(a)
    check_partition(alg, a)
    for sub in (E, C):
        if sub.alg is not alg:
            raise ForeignEvent("subalgebra belongs to another algebra")
    if not E.is_subalgebra_of(C):
        raise NotCoarsening("E must be a subalgebra of C")
    return a


def nonforking_extension(alg, a, E: Subalgebra, C: Subalgebra) -> NonForking:
    """Realize the unique extension of tp(a/E) to C that is independent from C over E."""
    a = _check(alg, a, E, C)
    ext = extend_with_independent_copy(alg, a, E, C)
    emb = ext.embedding
    return NonForking(ext.alg, emb, emb.images(a), ext.E, emb.image_sub(C), emb.image_sub(E))


def forking_distance(alg, a, E: Subalgebra, C: Subalgebra) -> Fraction:
    """Distance between tp(a/C) and the non-forking extension of tp(a/E), in a common extension."""
    nf = nonforking_extension(alg, a, E, C)
    return type_distance_partitions(nf.alg, nf.a, nf.a2, nf.C)


def epsilon_forks(alg, a, E: Subalgebra, C: Subalgebra, eps) -> bool:
    """tp(a/C) epsilon-forks over E: its distance to the non-forking extension exceeds eps."""
    return forking_distance(alg, a, E, C) > Fraction(eps)


@dataclass
class ChainReport:
    eps: Fraction
    bound: Fraction
    forking_steps: list = field(default_factory=list)  # indices j where step j -> j+1 forks
    longest_run: int = 0
    norm_increments: list = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.forking_steps)

    @property
    def ok(self) -> bool:
        return self.count <= self.bound and self.longest_run <= self.bound


def chain_distances(alg, a, chain) -> list:
    """Forking distance of every step of an increasing chain."""
    return [forking_distance(alg, a, lo, hi) for lo, hi in zip(chain, chain[1:])]


def forking_chain_check(alg, a, chain, eps, distances=None) -> ChainReport:
    """Count epsilon-forking steps along an increasing chain and compare with (1/eps)^2.

    Step j compares tp(a/chain[j+1]) with the non-forking extension of
    tp(a/chain[j]). Pass ``distances`` from :func:`chain_distances` to reuse
    them across several values of eps. The increments of sum_i ||P(a_i|.)||_2^2 are recorded;
    they telescope to at most 1, which is why the bound holds.
    """
    eps = Fraction(eps)
    a = list(a)
    check_partition(alg, a)
    chain = list(chain)
    for lo, hi in zip(chain, chain[1:]):
        if not lo.is_subalgebra_of(hi):
            raise NotCoarsening("chain must increase")
    rep = ChainReport(eps, (1 / eps) ** 2)
    run = 0

    def energy(sub):
        return sum((norm_sq(alg, cond_prob(alg, x, sub)) for x in a), Fraction(0))

    if distances is None:
        distances = chain_distances(alg, a, chain)
    for j, (lo, hi) in enumerate(zip(chain, chain[1:])):
        rep.norm_increments.append(energy(hi) - energy(lo))
        if distances[j] > eps:
            rep.forking_steps.append(j)
            run += 1
            rep.longest_run = max(rep.longest_run, run)
        else:
            run = 0
    return rep


def random_chain(rng, alg, steps: int) -> list:
    """Increasing chain from the trivial subalgebra, splitting one block per step where possible."""
    chain = [Subalgebra.trivial(alg)]
    for _ in range(steps):
        cur = chain[-1]
        splittable = [b for b in cur.blocks if bin(b).count("1") > 1]
        if not splittable:
            break
        if rng.random() < 0.3:
            nxt = random_refinement(rng, cur)
            if nxt == cur:
                continue
        else:
            b = rng.choice(splittable)
            members = [i for i in range(alg.k) if b >> i & 1]
            rng.shuffle(members)
            cut = rng.randint(1, len(members) - 1)
            part = sum(1 << i for i in members[:cut])
            nxt = Subalgebra(alg, tuple(x for x in cur.blocks if x != b) + (part, b & ~part))
        chain.append(nxt)
    return chain
