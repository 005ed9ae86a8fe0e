"""Hot enumeration loops over integer-scaled atom weights.

Every kernel exists twice: a numba ``@njit`` loop and a vectorised numpy
version. :func:`use_compiled` picks one per call; the numpy versions also
accept ``dtype=object`` arrays so weights too large for int64 stay exact.

Events are bitmasks over atom indices; ``sums[m]`` is the scaled measure of
mask ``m``.
"""
import numpy as np

from ._accel import HAS_NUMBA, njit

INT64_SAFE = 2**61


def use_compiled(arr):
    return HAS_NUMBA and arr.dtype == np.int64


def as_weight_array(ints):
    """int64 array when every partial sum fits, otherwise an object array."""
    if sum(ints) * 4 < INT64_SAFE:
        return np.asarray(ints, dtype=np.int64)
    return np.asarray(ints, dtype=object)


# ---------------------------------------------------------------- subset sums


@njit(cache=True)
def _subset_sums_nb(w):
    k = w.shape[0]
    out = np.zeros(1 << k, dtype=np.int64)
    for m in range(1, 1 << k):
        low = m & (-m)
        i = 0
        while (1 << i) != low:
            i += 1
        out[m] = out[m ^ low] + w[i]
    return out


def _subset_sums_np(w):
    out = np.zeros(1, dtype=w.dtype)
    for i in range(w.shape[0]):
        out = np.concatenate([out, out + w[i]])
    return out


def subset_sums(w):
    """Measure of every one of the ``2**k`` masks."""
    if use_compiled(w):
        return _subset_sums_nb(w)
    return _subset_sums_np(w)


def submasks_np(mask):
    """All submasks of ``mask`` in increasing numeric order."""
    subs = np.zeros(1, dtype=np.int64)
    bit = 0
    m = int(mask)
    while m >> bit:
        if (m >> bit) & 1:
            subs = np.concatenate([subs, subs | (1 << bit)])
            subs.sort()
        bit += 1
    return subs


# ------------------------------------------------------- balanced splitting


@njit(cache=True)
def _balanced_split_nb(sums, mask):
    total = sums[mask]
    best = total
    best_sub = 0
    sub = mask
    while True:
        v = 2 * sums[sub] - total
        if v < 0:
            v = -v
        if v < best or (v == best and sub < best_sub):
            best = v
            best_sub = sub
        if sub == 0:
            break
        sub = (sub - 1) & mask
    return best, best_sub


def _balanced_split_np(sums, mask):
    subs = submasks_np(mask)
    vals = np.abs(2 * sums[subs] - sums[mask])
    i = int(np.argmin(vals))
    return vals[i], int(subs[i])


def balanced_split(sums, mask):
    """``min |mu(y) - mu(mask - y)|`` over ``y`` inside ``mask``, scaled, with the minimising ``y``.

    Ties resolve to the numerically smallest submask on both paths.
    """
    if use_compiled(sums):
        v, s = _balanced_split_nb(sums, np.int64(mask))
        return int(v), int(s)
    v, s = _balanced_split_np(sums, mask)
    return int(v), s


@njit(cache=True)
def _finest_split_nb(sums, mask):
    best = -1
    best_u = 0
    u = mask
    while True:
        v, _ = _balanced_split_nb(sums, u)
        if v > best or (v == best and u < best_u):
            best = v
            best_u = u
        if u == 0:
            break
        u = (u - 1) & mask
    return best, best_u


def _finest_split_np(sums, mask):
    best, best_u = -1, 0
    for u in submasks_np(mask):
        v, _ = _balanced_split_np(sums, int(u))
        if v > best:
            best, best_u = v, int(u)
    return best, best_u


def finest_split(sums, mask):
    """``max`` over ``u`` inside ``mask`` of :func:`balanced_split` of ``u``, with the maximising ``u``."""
    if use_compiled(sums):
        v, u = _finest_split_nb(sums, np.int64(mask))
        return int(v), int(u)
    v, u = _finest_split_np(sums, mask)
    return int(v), u


# ------------------------------------------------ sup over unions of blocks


@njit(cache=True)
def _max_abs_union_nb(deltas):
    m = deltas.shape[0]
    best = 0
    best_mask = 0
    acc = 0
    gray = 0
    for step in range(1, 1 << m):
        # flip the lowest set bit of step
        low = step & (-step)
        i = 0
        while (1 << i) != low:
            i += 1
        if gray & low:
            acc -= deltas[i]
        else:
            acc += deltas[i]
        gray ^= low
        v = acc if acc >= 0 else -acc
        if v > best or (v == best and gray < best_mask):
            best = v
            best_mask = gray
    return best, best_mask


def _max_abs_union_np(deltas):
    sums = _subset_sums_np(deltas)
    vals = np.abs(sums)
    i = int(np.argmax(vals))
    return vals[i], i


def max_abs_union(deltas):
    """``max |sum(deltas[j] for j in S)|`` over all index sets ``S``, with the maximising set as a mask."""
    if use_compiled(deltas):
        v, m = _max_abs_union_nb(deltas)
        return int(v), int(m)
    v, m = _max_abs_union_np(deltas)
    return int(v), m


# ------------------------------------------------------------------ entropy


@njit(cache=True)
def _weighted_entropy_nb(mass, cond):
    total = 0.0
    for j in range(cond.shape[1]):
        inner = 0.0
        for i in range(cond.shape[0]):
            p = cond[i, j]
            if p > 0.0:
                inner -= p * np.log(p)
        total += mass[j] * inner
    return total


def _weighted_entropy_np(mass, cond):
    safe = np.where(cond > 0.0, cond, 1.0)
    terms = np.where(cond > 0.0, -cond * np.log(safe), 0.0)
    return float(np.dot(mass, terms.sum(axis=0)))


def weighted_entropy(mass, cond):
    """``sum_j mass[j] * H(cond[:, j])`` in nats; ``0 ln 0`` contributes 0."""
    mass = np.ascontiguousarray(mass, dtype=np.float64)
    cond = np.ascontiguousarray(cond, dtype=np.float64)
    if HAS_NUMBA:
        return float(_weighted_entropy_nb(mass, cond))
    return _weighted_entropy_np(mass, cond)
