"""Property suites over random finite algebras, one per acceptance criterion.

Every instance is drawn from its own ``random.Random`` seeded from the run
seed, the suite and the instance index, so a run is reproducible and a
failure can be replayed alone. A failing suite reports the smallest failing
instance it met (fewest atoms, then first index).

Faults can be injected by name (see :data:`FAULTS`) to check that the
harness notices a broken implementation.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import atoms, entropy, forking, independence, randvars, typespace
from .algebra import (
    FiniteProbabilityAlgebra,
    Subalgebra,
    fmt,
    random_algebra,
    random_event,
    random_partition,
    random_refinement,
    random_subalgebra,
    split_atoms,
    uniform_algebra,
    verify_axioms,
)
from .conditional import cond_prob, l1_distance
from .logic import evaluate, normal_form
from .logic.generate import random_formula
from .oracles import best_over_splits, search_partition_distance, search_tuple_distance

DEFAULT_SEED = 20240601

DEFAULT_COUNTS = {
    "axioms": 200,
    "phi_n": 8,
    "normal_form": 1000,
    "independence": 500,
    "extension": 500,
    "distance": 150,
    "lipschitz": 120,
    "sfb": 500,
    "rv": 500,
    "entropy": 500,
    "chain": 60,
    "classification": 200,
}


# ------------------------------------------------------------------ faults

def _bad_phi_n(alg, a, n):
    return atoms.phi_n_closed(alg, a, n + 1) if n else a.mu


def _bad_rho(alg, E, F):
    return randvars.rho_n(alg, E, F) * E.n


def _bad_entropy(alg, A, C):
    return entropy.cond_entropy(alg, A, C) / math.log(2)


def _bad_iso(alg1, alg2):
    return None


FAULTS = {
    "phi_n_closed": _bad_phi_n,
    "rho_n": _bad_rho,
    "cond_entropy": _bad_entropy,
    "find_isomorphism": _bad_iso,
}

_REAL = {
    "phi_n_closed": atoms.phi_n_closed,
    "rho_n": randvars.rho_n,
    "cond_entropy": entropy.cond_entropy,
    "find_isomorphism": atoms.find_isomorphism,
}


@dataclass
class SuiteResult:
    name: str
    title: str
    instances: int
    failures: int
    seconds: float
    witness: str | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.instances > 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = f"{status} {self.name:<15} {self.instances:>5} instances {self.seconds:7.2f}s  {self.title}"
        if self.witness:
            out += f"\n     witness: {self.witness}"
        return out


@dataclass
class _Ctx:
    name: str
    seed: int
    impl: dict
    instances: int = 0
    failures: int = 0
    best: tuple | None = field(default=None)

    def rng(self, i: int) -> random.Random:
        return random.Random(f"{self.seed}/{self.name}/{i}")

    def fail(self, i: int, k: int, detail: str):
        self.failures += 1
        if self.best is None or (k, i) < self.best[:2]:
            self.best = (k, i, f"instance {i} ({k} atoms): {detail}")


def _weights(alg) -> str:
    return "[" + ", ".join(fmt(w) for w in alg.weights) + "]"


def _ev(e) -> str:
    return "{" + ",".join(e.labels) + "}"


# ------------------------------------------------------------------ suites

def suite_axioms(ctx: _Ctx, count: int):
    for i in range(count):
        rng = ctx.rng(i)
        alg = random_algebra(rng, 1 + i % 10)
        rep = verify_axioms(alg, seed=i, samples=200)
        ctx.instances += 1
        if not rep.ok:
            names = ", ".join(r.name for r in rep.failures())
            ctx.fail(i, alg.k, f"weights {_weights(alg)} fail {names}")


def suite_phi_n(ctx: _Ctx, count: int):
    """Every event of one random and one tie-heavy algebra per size 1..count."""
    phi = ctx.impl["phi_n_closed"]
    for i in range(count):
        rng = ctx.rng(i)
        k = i + 1
        algs = [random_algebra(rng, k), random_algebra(rng, k, max_weight=2)]
        for alg in algs:
            evs = [atoms.phi_n_evaluator(alg, n) for n in range(1, 5)]
            for a in alg.all_events():
                ctx.instances += 1
                closed = [phi(alg, a, n) for n in range(0, 5)]
                brute = [a.mu] + [ev.value({"x": a}) for ev in evs]
                if closed != brute:
                    ctx.fail(i, k, f"weights {_weights(alg)}, a={_ev(a)}: closed "
                             f"{[fmt(v) for v in closed]} vs brute force {[fmt(v) for v in brute]}")
                    continue
                if any(x < y for x, y in zip(closed, closed[1:])):
                    ctx.fail(i, k, f"a={_ev(a)}: chain not decreasing")
                    continue
                for n in range(1, 5):
                    if atoms.at_n(alg, a, n) != max(closed[n - 1] - closed[n], Fraction(0)):
                        ctx.fail(i, k, f"a={_ev(a)}: at_{n} differs from phi_{n - 1} - phi_{n}")
                        break


def suite_normal_form(ctx: _Ctx, count: int):
    for i in range(count):
        rng = ctx.rng(i)
        alg = random_algebra(rng, rng.randint(1, 6))
        names = ["x", "y", "z"][: rng.randint(1, 3)]
        phi = random_formula(rng, names, depth=rng.randint(1, 5))
        val = {v: random_event(rng, alg) for v in names}
        ctx.instances += 1
        lhs = evaluate(alg, phi, val)
        rhs = evaluate(alg, normal_form(phi, names), val)
        if lhs != rhs:
            from .logic import pretty
            ctx.fail(i, alg.k, f"{pretty(phi)} gives {fmt(lhs)}, normal form {fmt(rhs)}")


def suite_independence(ctx: _Ctx, count: int):
    """Half the instances are random, half are built independent by product construction."""
    for i in range(count):
        rng = ctx.rng(i)
        if i % 2:
            alg = random_algebra(rng, rng.randint(1, 8))
            S, T, W = (random_subalgebra(rng, alg) for _ in range(3))
        else:
            # product of two random algebras: coordinates are independent
            p, q = random_algebra(rng, rng.randint(1, 3)), random_algebra(rng, rng.randint(1, 3))
            ws = [x * y for x in p.weights for y in q.weights]
            alg = FiniteProbabilityAlgebra(ws)
            rows = [sum(1 << (r * q.k + c) for c in range(q.k)) for r in range(p.k)]
            cols = [sum(1 << (r * q.k + c) for r in range(p.k)) for c in range(q.k)]
            S, T = Subalgebra(alg, tuple(rows)), Subalgebra(alg, tuple(cols))
            W = Subalgebra.trivial(alg)
        ctx.instances += 1
        rep = independence.characterization_report(alg, S, T, W)
        if not rep.consistent:
            ctx.fail(i, alg.k, f"weights {_weights(alg)}: conditions {rep.conditions}")


def suite_extension(ctx: _Ctx, count: int):
    for i in range(count):
        rng = ctx.rng(i)
        alg = random_algebra(rng, rng.randint(1, 7))
        A = random_partition(rng, alg, rng.randint(1, 4))
        C = random_subalgebra(rng, alg)
        D = random_refinement(rng, C)
        ext = independence.extend_with_independent_copy(alg, A, C, D)
        res = independence.extension_contract(alg, A, C, D, ext)
        ctx.instances += 1
        if not all(res.values()):
            ctx.fail(i, alg.k, f"weights {_weights(alg)}: {res}")


def suite_distance(ctx: _Ctx, count: int):
    for i in range(count):
        rng = ctx.rng(i)
        alg = random_algebra(rng, rng.randint(1, 6), max_weight=6)
        m = rng.randint(1, 3)
        a, b = random_partition(rng, alg, m), random_partition(rng, alg, m)
        C = random_subalgebra(rng, alg)
        ctx.instances += 1
        d = typespace.type_distance_partitions(alg, a, b, C)
        opt = typespace.optimal_realization(alg, a, b, C)
        attained = max(opt.distances) == d and typespace.realizes(
            opt.alg, opt.b_prime, typespace.type_of(alg, b, C).transport(opt.embedding))
        found = best_over_splits(search_partition_distance, alg, a, b, C, 3)
        if not attained or (found is not None and found < d):
            ctx.fail(i, alg.k, f"weights {_weights(alg)}: closed form {fmt(d)}, optimal "
                     f"{fmt(max(opt.distances))}, search {found and fmt(found)}")


def suite_lipschitz(ctx: _Ctx, count: int):
    for i in range(count):
        rng = ctx.rng(i)
        alg = random_algebra(rng, rng.randint(1, 5), max_weight=6)
        n = rng.randint(1, 2)
        a = [random_event(rng, alg) for _ in range(n)]
        b = [random_event(rng, alg) for _ in range(n)]
        C = random_subalgebra(rng, alg)
        ctx.instances += 1
        br = typespace.lipschitz_check(alg, a, b, C)
        found = best_over_splits(search_tuple_distance, alg, a, b, C, 2)
        cons = typespace.constructive_tuple_distance(alg, a, b, C)
        value = cons if found is None else min(found, cons)
        if not br.contains(value):
            ctx.fail(i, alg.k, f"weights {_weights(alg)}: tuple distance {fmt(value)} outside "
                     f"[{fmt(br.lower)}, {fmt(br.upper)}]")


def suite_sfb(ctx: _Ctx, count: int):
    for i in range(count):
        rng = ctx.rng(i)
        alg = random_algebra(rng, rng.randint(1, 8))
        n = rng.randint(1, 3)
        if rng.random() < 0.5:
            a, b = random_partition(rng, alg, n), random_partition(rng, alg, n)
        else:
            a = [random_event(rng, alg) for _ in range(n)]
            b = [random_event(rng, alg) for _ in range(n)]
        C = random_subalgebra(rng, alg)
        ctx.instances += 1
        for eps in (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)):
            rep = typespace.sfb_check(alg, a, b, C, eps)
            if not rep.holds:
                ctx.fail(i, alg.k, f"weights {_weights(alg)}, eps={eps}: lhs {fmt(rep.lhs)} "
                         f"rhs {fmt(rep.rhs)} steps_ok={rep.steps_ok}")
                break


def suite_rv(ctx: _Ctx, count: int):
    rho = ctx.impl["rho_n"]
    for i in range(count):
        rng = ctx.rng(i)
        alg = random_algebra(rng, rng.randint(1, 8))
        n = rng.randint(1, 6)
        E = randvars.RVPartition(alg, random_partition(rng, alg, n))
        F = randvars.RVPartition(alg, random_partition(rng, alg, n))
        ctx.instances += 1
        r, d = rho(alg, E, F), randvars.dP_rv(alg, E, F)
        l1 = l1_distance(alg, E.step_function(), F.step_function())
        if not (d / n <= r <= d and r == l1):
            ctx.fail(i, alg.k, f"weights {_weights(alg)}, n={n}: rho {fmt(r)}, dP {fmt(d)}, L1 {fmt(l1)}")
            continue
        f = cond_prob(alg, random_event(rng, alg), random_subalgebra(rng, alg))
        depth = rng.randint(2, 4)
        fine, coarse = randvars.dyadic_approx(alg, f, depth), randvars.dyadic_approx(alg, f, depth - 1)
        err = randvars.approximation_error(alg, f, depth)
        if randvars.project_pi(alg, fine) != coarse or err > Fraction(1, 1 << depth):
            ctx.fail(i, alg.k, f"weights {_weights(alg)}: dyadic approximation at depth {depth} "
                     f"incoherent or error {fmt(err)} too large")


def suite_entropy(ctx: _Ctx, count: int):
    H = ctx.impl["cond_entropy"]
    coin = uniform_algebra(2)
    spot = H(coin, [coin.atom(0), coin.atom(1)], Subalgebra.trivial(coin))
    if abs(spot - math.log(2)) > entropy.TOL:
        ctx.fail(-1, 2, f"fair coin entropy {spot!r} differs from ln 2")
    for i in range(count):
        rng = ctx.rng(i)
        alg = random_algebra(rng, rng.randint(1, 8))
        A, Cs = random_subalgebra(rng, alg), random_subalgebra(rng, alg)
        E = random_subalgebra(rng, alg)
        D = random_refinement(rng, E)
        ctx.instances += 1
        lhs = H(alg, A.join(Cs), E)
        rhs = H(alg, A, E) + H(alg, Cs, A.join(E))
        if abs(lhs - rhs) > entropy.TOL:
            ctx.fail(i, alg.k, f"weights {_weights(alg)}: chain rule {lhs!r} vs {rhs!r}")
            continue
        drop = entropy.entropy_drop(alg, A, E, D)
        gap = H(alg, A, E) - H(alg, A, D)
        if abs(gap - drop.gap) > entropy.TOL or not drop.holds:
            ctx.fail(i, alg.k, f"weights {_weights(alg)}: drop {gap!r} vs bound {fmt(drop.rhs_bound)}")
            continue
        a = random_partition(rng, alg, rng.randint(2, 4))
        eps = rng.choice((Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)))
        fg = entropy.entropy_forking_gap(alg, a, E, D, eps)
        g = H(alg, a, E) - H(alg, a, D)
        if fg.forks and not g > float(fg.bound) - entropy.TOL:
            ctx.fail(i, alg.k, f"weights {_weights(alg)}: forks at eps={eps} but gap {g!r}")


def suite_chain(ctx: _Ctx, count: int):
    for i in range(count):
        rng = ctx.rng(i)
        alg = random_algebra(rng, rng.randint(2, 10))
        a = random_partition(rng, alg, rng.randint(2, 4))
        chain = forking.random_chain(rng, alg, 10)
        dists = forking.chain_distances(alg, a, chain)
        ctx.instances += 1
        for eps in (Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)):
            rep = forking.forking_chain_check(alg, a, chain, eps, distances=dists)
            if not rep.ok or sum(rep.norm_increments) > 1:
                ctx.fail(i, alg.k, f"weights {_weights(alg)}, eps={eps}: {rep.count} forking steps, "
                         f"longest run {rep.longest_run}, bound {fmt(rep.bound)}")
                break


def suite_classification(ctx: _Ctx, count: int):
    """Pairs are permutations (isomorphic), near misses and unrelated algebras in turn."""
    iso = ctx.impl["find_isomorphism"]
    for i in range(count):
        rng = ctx.rng(i)
        k = rng.randint(1, 8)
        alg1 = random_algebra(rng, k, max_weight=4)
        mode = i % 3
        if mode == 0:
            ws = list(alg1.weights)
            rng.shuffle(ws)
            alg2 = FiniteProbabilityAlgebra(ws)
        elif mode == 1 and k > 1:
            # split one atom and merge two others: same number of atoms, usually different weights
            x = rng.randrange(k)
            alg2, _, _ = split_atoms(alg1, [[w] if j != x else [w / 2, w / 2] for j, w in enumerate(alg1.weights)])
            ws = list(alg2.weights)
            j = rng.randrange(len(ws) - 1)
            ws[j:j + 2] = [ws[j] + ws[j + 1]]
            alg2 = FiniteProbabilityAlgebra(ws)
        else:
            alg2 = random_algebra(rng, k, max_weight=4)
        ctx.instances += 1
        eq = atoms.elementarily_equivalent(alg1, alg2)
        emb = iso(alg1, alg2)
        ok_emb = emb is None or (emb.is_measure_preserving() and sorted(emb.atom_images) == [1 << j for j in range(alg2.k)])
        if eq != (emb is not None) or not ok_emb:
            ctx.fail(i, k, f"{_weights(alg1)} vs {_weights(alg2)}: equivalent={eq}, isomorphism={emb is not None}")


SUITES = [
    ("axioms", "probability-algebra axioms on random algebras", suite_axioms),
    ("phi_n", "phi_n closed form equals its quantifier definition", suite_phi_n),
    ("normal_form", "normal form preserves values", suite_normal_form),
    ("independence", "independence characterizations agree", suite_independence),
    ("extension", "independent copy extension contract", suite_extension),
    ("distance", "optimal realization attains the type distance", suite_distance),
    ("lipschitz", "tuple distance inside the Lipschitz bracket", suite_lipschitz),
    ("sfb", "SFB inequality for eps in {1/2, 1/4, 1/8}", suite_sfb),
    ("rv", "rho_n sandwich, L1 identity, dyadic coherence", suite_rv),
    ("entropy", "chain rule, drop inequality, forking gap", suite_entropy),
    ("chain", "eps-forking chains bounded by (1/eps)^2", suite_chain),
    ("classification", "elementary equivalence iff isomorphism", suite_classification),
]

SUITE_NAMES = [s[0] for s in SUITES]


def run_suite(name: str, seed: int = DEFAULT_SEED, count: int | None = None, faults=()) -> SuiteResult:
    unknown = set(faults) - set(FAULTS)
    if unknown:
        raise ValueError(f"unknown fault(s): {', '.join(sorted(unknown))}")
    impl = {k: (FAULTS[k] if k in faults else v) for k, v in _REAL.items()}
    title, fn = next((t, f) for n, t, f in SUITES if n == name)
    ctx = _Ctx(name, seed, impl)
    start = time.perf_counter()
    fn(ctx, DEFAULT_COUNTS[name] if count is None else count)
    elapsed = time.perf_counter() - start
    return SuiteResult(name, title, ctx.instances, ctx.failures, elapsed, ctx.best[2] if ctx.best else None)


def run_all(seed: int = DEFAULT_SEED, scale: float = 1.0, faults=(), only=None):
    """Yield one :class:`SuiteResult` per suite; ``scale`` multiplies every instance count."""
    for name in SUITE_NAMES:
        if only and name not in only:
            continue
        yield run_suite(name, seed, max(1, round(DEFAULT_COUNTS[name] * scale)), faults)
