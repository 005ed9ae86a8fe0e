"""Exhaustive realization search: an independent upper bound for type distances.

A realization of tp(b/C) next to a fixed tuple ``a`` is searched inside the
refinement that cuts every atom into ``r`` equal pieces. Each piece goes to
one cell of the realization, subject to the cell masses on every block of C
that the type prescribes. The cost of coordinate i is the mass placed where
membership in ``a_i`` and in the realized ``b'_i`` disagree.

The search is a dynamic programme per block of C over (atom, remaining cell
capacity), keeping only Pareto-minimal cost vectors; blocks are combined by
Minkowski sums. The result is the least max-coordinate cost over the whole
family, hence an upper bound for the true infimum over all realizations.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .algebra import Subalgebra, _own, associated_partition, check_partition, sign_tuples
from .errors import LengthMismatch


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def pareto(vectors) -> list:
    """Vectors not weakly dominated by another one."""
    vs = sorted(set(vectors))
    out = []
    for v in vs:
        if not any(all(u[i] <= v[i] for i in range(len(v))) for u in out):
            out = [u for u in out if not all(v[i] <= u[i] for i in range(len(v)))]
            out.append(v)
    return out


def _block_front(pieces, patterns, cells, targets, r):
    """Pareto front of cost vectors for one block.

    ``pieces[x]`` is the integer mass of one of the r pieces of atom x,
    ``patterns[x]`` its membership vector in ``a``, ``cells`` the membership
    vectors of the realized cells and ``targets`` their integer masses.
    """
    n = len(cells[0])
    N = len(cells)
    comps = list(_compositions(r, N))
    mism = [[[int(p[i] != c[i]) for i in range(n)] for c in cells] for p in patterns]

    @lru_cache(maxsize=None)
    def solve(idx, remaining):
        if idx == len(pieces):
            return [(0,) * n] if not any(remaining) else []
        p = pieces[idx]
        front = []
        for comp in comps:
            rem = list(remaining)
            ok = True
            for s in range(N):
                if comp[s]:
                    rem[s] -= comp[s] * p
                    if rem[s] < 0:
                        ok = False
                        break
            if not ok:
                continue
            tail = solve(idx + 1, tuple(rem))
            if not tail:
                continue
            here = [0] * n
            for s in range(N):
                if comp[s]:
                    for i in range(n):
                        here[i] += comp[s] * p * mism[idx][s][i]
            front.extend(tuple(t[i] + here[i] for i in range(n)) for t in tail)
        return pareto(front)

    return solve(0, tuple(targets))


def _search(alg, patterns, cells, target_fn, C: Subalgebra, r: int) -> Fraction | None:
    """min over the r-split family of max_i cost_i, or None when the family has no realization."""
    unit = alg.scale * r
    total = [(0,) * len(cells[0])]
    for c in C.blocks:
        members = [x for x in range(alg.k) if c >> x & 1]
        pieces = [int(alg.weights[x] * alg.scale) for x in members]
        targets = [target_fn(s, c) * unit for s in range(len(cells))]
        if any(t.denominator != 1 for t in targets):
            return None
        front = _block_front(pieces, [patterns[x] for x in members], cells, [int(t) for t in targets], r)
        if not front:
            return None
        total = pareto(tuple(u[i] + v[i] for i in range(len(u))) for u in total for v in front)
    return Fraction(min(max(v) for v in total), unit)


def search_tuple_distance(alg, a, b, C: Subalgebra, r: int = 2) -> Fraction | None:
    """Least max_i d(a_i, b'_i) over realizations b' of tp(b/C) in the r-split refinement."""
    a, b = list(a), list(b)
    if len(a) != len(b):
        raise LengthMismatch("tuples differ in length")
    _own(alg, *a, *b)
    n = len(a)
    patterns = [tuple(int(e.mask >> x & 1) for e in a) for x in range(alg.k)]
    signs = sign_tuples(n)
    cells = [tuple(int(si > 0) for si in s) for s in signs]
    bcells = associated_partition(alg, b)
    return _search(alg, patterns, cells, lambda s, c: alg.mask_measure(bcells[s].mask & c), C, r)


def search_partition_distance(alg, a, b, C: Subalgebra, r: int = 3) -> Fraction | None:
    """Least max_i d(a_i, b'_i) over partitions b' realizing tp(b/C) in the r-split refinement."""
    a, b = list(a), list(b)
    if len(a) != len(b):
        raise LengthMismatch("tuples differ in length")
    check_partition(alg, a)
    check_partition(alg, b)
    n = len(a)
    patterns = [tuple(int(e.mask >> x & 1) for e in a) for x in range(alg.k)]
    cells = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    return _search(alg, patterns, cells, lambda j, c: alg.mask_measure(b[j].mask & c), C, r)


def best_over_splits(search, alg, a, b, C, max_r: int):
    """Minimum of ``search`` over split factors 1..max_r (None where infeasible)."""
    vals = [v for v in (search(alg, a, b, C, r) for r in range(1, max_r + 1)) if v is not None]
    return min(vals) if vals else None
