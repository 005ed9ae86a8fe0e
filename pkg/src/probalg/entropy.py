"""Conditional entropy of finite subalgebras (natural log) and its relation to forking.

Entropies are binary64; every bound they are compared with stays an exact
rational, and the tolerance :data:`TOL` is applied to the float side only.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .algebra import Subalgebra
from .conditional import cond_prob, norm_sq
from .errors import NotCoarsening
from .forking import forking_distance
from .independence import as_subalgebra, independent

TOL = 1e-12


def cond_entropy(alg, A, C) -> float:
    """H(A/C) = -sum_j mu(e_j) sum_i p_ij ln p_ij with p_ij = mu(a_i & e_j) / mu(e_j)."""
    A, C = as_subalgebra(alg, A), as_subalgebra(alg, C)
    mass = np.array([float(m) for m in C.block_measures()])
    cond = np.array(
        [[float(alg.mask_measure(a & e) / alg.mask_measure(e)) for e in C.blocks] for a in A.blocks]
    )
    return kernels.weighted_entropy(mass, cond)


def entropy(alg, A) -> float:
    return cond_entropy(alg, A, Subalgebra.trivial(alg))


def chain_rule_check(alg, A, C, E):
    """(H(A v C / E), H(A/E) + H(C / A v E), absolute difference)."""
    A, C, E = (as_subalgebra(alg, x) for x in (A, C, E))
    lhs = cond_entropy(alg, A.join(C), E)
    rhs = cond_entropy(alg, A, E) + cond_entropy(alg, C, A.join(E))
    return lhs, rhs, abs(lhs - rhs)


@dataclass
class EntropyDrop:
    gap: float  # H(A/E) - H(A/D)
    rhs_bound: Fraction  # half the summed growth of squared L2 norms
    independent: bool

    @property
    def holds(self) -> bool:
        inequality = self.gap >= float(self.rhs_bound) - TOL and self.rhs_bound >= 0
        equality_case = (abs(self.gap) <= TOL) == self.independent
        return inequality and equality_case


def entropy_drop(alg, A, E, D) -> EntropyDrop:
    A, E, D = (as_subalgebra(alg, x) for x in (A, E, D))
    if not E.is_subalgebra_of(D):
        raise NotCoarsening("E must be a subalgebra of D")
    gap = cond_entropy(alg, A, E) - cond_entropy(alg, A, D)
    rhs = sum(
        (norm_sq(alg, cond_prob(alg, a, D)) - norm_sq(alg, cond_prob(alg, a, E)) for a in A.block_events()),
        Fraction(0),
    ) / 2
    return EntropyDrop(gap, rhs, independent(alg, A, D, E))


@dataclass
class ForkingGap:
    eps: Fraction
    distance: Fraction
    forks: bool
    h_small: float  # H(a#/E)
    h_large: float  # H(a#/D)
    bound: Fraction  # eps^2 / 2

    @property
    def gap(self) -> float:
        return self.h_small - self.h_large

    @property
    def holds(self) -> bool:
        return (not self.forks) or self.gap > float(self.bound) - TOL


def entropy_forking_gap(alg, a, E: Subalgebra, D: Subalgebra, eps) -> ForkingGap:
    """If tp(a/D) eps-forks over E then H(a#/E) exceeds H(a#/D) + eps^2/2; a# is generated by ``a``."""
    eps = Fraction(eps)
    a = list(a)
    if not E.is_subalgebra_of(D):
        raise NotCoarsening("E must be a subalgebra of D")
    dist = forking_distance(alg, a, E, D)
    A = as_subalgebra(alg, a)
    return ForkingGap(eps, dist, dist > eps, cond_entropy(alg, A, E), cond_entropy(alg, A, D), eps * eps / 2)
