"""Every acceptance criterion at its full instance count, one PASS/FAIL line each."""
import math

import pytest

from probalg import selftest
from probalg.algebra import Subalgebra, uniform_algebra
from probalg.entropy import entropy

CRITERIA = [
    ("axioms", "axioms hold on 200 random algebras"),
    ("phi_n", "closed-form phi_n equals brute force for n <= 4, with the chain and at_n identities"),
    ("normal_form", "normal form preserves values on 1000 formulas"),
    ("independence", "four independence characterizations agree on 500 instances"),
    ("extension", "extension contract holds on 500 instances"),
    ("distance", "optimal realization attains the distance, search never beats it"),
    ("lipschitz", "tuple distance stays inside the Lipschitz bracket"),
    ("sfb", "SFB inequality for eps in {1/2, 1/4, 1/8} on 500 instances"),
    ("rv", "rho_n sandwich, L1 identity and dyadic coherence on 500 pairs"),
    ("entropy", "chain rule, drop inequality and forking gap on 500 instances"),
    ("chain", "no eps-forking chain longer than (1/eps)^2"),
    ("classification", "elementary equivalence iff isomorphism on 200 pairs"),
]


def report(capsys, ok, name, detail):
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")


@pytest.mark.parametrize("name, text", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(capsys, name, text):
    res = selftest.run_suite(name)
    report(capsys, res.passed, name, f"{text} ({res.instances} instances, {res.failures} failures)")
    assert res.instances >= selftest.DEFAULT_COUNTS[name]
    assert res.passed, res.witness


def test_fair_coin_entropy(capsys):
    alg = uniform_algebra(2)
    h = entropy(alg, Subalgebra.full(alg))
    ok = abs(h - math.log(2)) <= 1e-12 and abs(h - 0.6931471805) <= 1e-9
    report(capsys, ok, "ln2", f"fair-coin entropy {h:.13f}")
    assert ok
