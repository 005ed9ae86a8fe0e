"""Conditional independence of finite families and the independent-copy extension."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import Embedding, Event, Subalgebra, _own, check_partition, generated_subalgebra, split_atoms
from .conditional import cond_prob, norm_sq
from .errors import ForeignEvent, NotCoarsening


def as_subalgebra(alg, x) -> Subalgebra:
    """A Subalgebra as is, or the subalgebra generated by a list of events."""
    if isinstance(x, Subalgebra):
        if x.alg is not alg:
            raise ForeignEvent("subalgebra belongs to another algebra")
        return x
    return generated_subalgebra(alg, list(x))


def _triples(alg, S, T, W):
    s, t, w = (as_subalgebra(alg, x) for x in (S, T, W))
    m = alg.mask_measure
    for c in w.blocks:
        mc = m(c)
        for a in s.blocks:
            mac = m(a & c)
            for b in t.blocks:
                yield (a, b, c), m(a & b & c) * mc - mac * m(b & c)


def independent(alg, S, T, W=()) -> bool:
    """Whether mu(A & B & C) mu(C) = mu(A & C) mu(B & C) for all atoms A, B, C of <S>, <T>, <W>."""
    return all(v == 0 for _, v in _triples(alg, S, T, W))


def independence_defect(alg, S, T, W=()) -> Fraction:
    return max((abs(v) for _, v in _triples(alg, S, T, W)), default=Fraction(0))


def independence_witness(alg, S, T, W=()):
    """Atoms (A, B, C) of largest defect, as events, with the defect."""
    (a, b, c), v = max(_triples(alg, S, T, W), key=lambda kv: abs(kv[1]))
    return (Event(alg, a), Event(alg, b), Event(alg, c)), abs(v)


@dataclass
class CharacterizationReport:
    defect: Fraction
    product_rule: bool  # (i)
    same_conditional: bool  # (ii) P(A|<WT>) = P(A|<W>)
    w_measurable: bool  # (iii) P(A|<WT>) constant on <W>-blocks
    equal_norms: bool  # (iv) equal L2 norms

    @property
    def conditions(self):
        return (self.product_rule, self.same_conditional, self.w_measurable, self.equal_norms)

    @property
    def consistent(self) -> bool:
        return len(set(self.conditions)) == 1


def characterization_report(alg, S, T, W=()) -> CharacterizationReport:
    s, t, w = (as_subalgebra(alg, x) for x in (S, T, W))
    wt = w.join(t)
    defect = independence_defect(alg, s, t, w)
    same = measurable = norms = True
    for a in s.block_events():
        big, small = cond_prob(alg, a, wt), cond_prob(alg, a, w)
        same &= big == small
        av = big.atom_values()
        measurable &= all(len({av[i] for i in Event(alg, c).members}) == 1 for c in w.blocks)
        norms &= norm_sq(alg, big) == norm_sq(alg, small)
    return CharacterizationReport(defect, defect == 0, same, measurable, norms)


@dataclass
class Extension:
    """Result of :func:`extend_with_independent_copy`."""

    alg: object
    embedding: Embedding
    E: list


def extend_with_independent_copy(alg, A_atoms, C: Subalgebra, D: Subalgebra) -> Extension:
    """Embed ``alg`` into an algebra carrying a copy E of the partition A, independent from D over C.

    Every old atom x is cut into pieces of weight ``mu(x) * P(A_i|C)(x)``;
    E_i is the union of the i-th pieces. Zero pieces are dropped.
    """
    A_atoms = list(A_atoms)
    check_partition(alg, A_atoms)
    for sub in (C, D):
        if sub.alg is not alg:
            raise ForeignEvent("subalgebra belongs to another algebra")
    if not C.is_subalgebra_of(D):
        raise NotCoarsening("C must be a subalgebra of D")
    fs = [cond_prob(alg, a, C).atom_values() for a in A_atoms]
    pieces = [[alg.weights[x] * f[x] for f in fs] for x in range(alg.k)]
    new, emb, piece_masks = split_atoms(alg, pieces)
    E = []
    for i in range(len(A_atoms)):
        m = 0
        for row in piece_masks:
            m |= row[i]
        E.append(Event(new, m))
    return Extension(new, emb, E)


def extension_contract(alg, A_atoms, C, D, ext: Extension) -> dict:
    """The two guarantees of the extension, checked exactly."""
    Cn, Dn = ext.embedding.image_sub(C), ext.embedding.image_sub(D)
    A_img = ext.embedding.images(A_atoms)
    same_cond = all(cond_prob(ext.alg, e, Cn) == cond_prob(ext.alg, a, Cn) for e, a in zip(ext.E, A_img))
    indep = independent(ext.alg, ext.E, Dn, Cn)
    preserving = ext.embedding.is_measure_preserving()
    return {"same_conditional": same_cond, "independent": indep, "measure_preserving": preserving}
