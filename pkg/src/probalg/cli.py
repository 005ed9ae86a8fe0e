"""Command-line front end.

Exit codes: 0 ok, 1 property failure, 2 parse error, 3 semantic error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import atoms, entropy, forking, independence, randvars, selftest, typespace
from .algebra import Event, Subalgebra, fmt, is_partition, verify_axioms
from .conditional import cond_prob, l1_distance
from .errors import FormulaSyntaxError, ProbAlgError, UnknownSymbol
from .io import Structure, StructureError, generate_structure, load_structure, structure_to_dict
from .logic import Evaluator, parse
from .logic.evaluate import DEFAULT_CAP

EXIT_OK, EXIT_PROPERTY, EXIT_PARSE, EXIT_SEMANTIC = 0, 1, 2, 3


class _Fail(Exception):
    """Raised by a command whose report shows a property failure; carries the payload."""

    def __init__(self, payload):
        super().__init__("property failure")
        self.payload = payload


# ------------------------------------------------------------------ output

def _jsonable(v):
    if isinstance(v, Fraction):
        return fmt(v)
    if isinstance(v, Event):
        return list(v.labels)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _text(v) -> str:
    if isinstance(v, Fraction):
        return f"{fmt(v)} ≈ {float(v):.6f}"
    if isinstance(v, float):
        return f"{v:.10f}"
    if isinstance(v, Event):
        return "{" + ",".join(v.labels) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(fmt(x) if isinstance(x, Fraction) else _text(x) for x in v) + "]"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def _render(payload: dict, indent: int = 0) -> list:
    lines = []
    width = max((len(str(k)) for k in payload), default=0)
    for k, v in payload.items():
        if isinstance(v, dict):
            lines.append(" " * indent + f"{k}:")
            lines.extend(_render(v, indent + 2))
        else:
            lines.append(" " * indent + f"{str(k):<{width}}  {_text(v)}")
    return lines


def _emit(payload: dict, as_json: bool):
    if as_json:
        print(json.dumps(_jsonable(payload), indent=2, ensure_ascii=False))
    else:
        print("\n".join(_render(payload)))


# ----------------------------------------------------------------- helpers

def _structure(args, validate: bool = True) -> Structure:
    if not args.structure:
        raise StructureError("--structure FILE is required")
    return load_structure(args.structure, validate=validate)


def _events(st: Structure, spec: str) -> list:
    """A subalgebra name gives its blocks; otherwise a comma-separated list of events."""
    if spec in st.subalgebras or spec in ("trivial", "full"):
        return st.subalgebra(spec).block_events()
    return st.event_list(spec)


def _sub(st: Structure, spec: str | None) -> Subalgebra:
    return Subalgebra.trivial(st.alg) if spec is None else st.subalgebra(spec)


def _step(f) -> dict:
    return {"{" + ",".join(Event(f.base.alg, b).labels) + "}": v for b, v in zip(f.base.blocks, f.values)}


def _bindings(st: Structure, binds) -> dict:
    out = {}
    for b in binds or ():
        if "=" not in b:
            raise StructureError(f"binding {b!r} is not of the form var=EVENT")
        var, name = b.split("=", 1)
        out[var.strip()] = st.event(name.strip())
    return out


# ---------------------------------------------------------------- commands

def cmd_eval(args):
    st = _structure(args)
    if args.formula:
        with open(args.formula, encoding="utf-8") as fh:
            text = fh.read()
    elif args.inline is not None:
        text = args.inline
    else:
        raise StructureError("give --formula FILE or --inline TEXT")
    phi = parse(text)
    ev = Evaluator(st.alg, phi, st.events, cap=args.max_atoms)
    val = _bindings(st, args.bind)
    value = ev.value(val)
    if args.json:
        payload = {"value": value, "decimal": float(value)}
        if args.witness:
            payload["witnesses"] = {v: e for v, e in ev.witnesses(val)}
        _emit(payload, True)
    else:
        print(f"{fmt(value)}  ≈ {float(value):.6f}")
        if args.witness:
            for v, e in ev.witnesses(val):
                print(f"  {v} = {_text(e)}")


def cmd_atoms(args):
    st = _structure(args)
    a = st.event(args.event) if args.event else None
    rep = atoms.atoms_report(st.alg, a)
    payload = {
        "Phi": rep["phi_invariant"],
        "event": "{" + ",".join(rep["event"]) + "}",
        "mu": rep["mu"],
        "at": {f"at_{n}": v for n, v in enumerate(rep["at"], 1)},
        "phi": {f"phi_{n}": v for n, v in enumerate(rep["phi"], 1)},
    }
    if st.alg.k <= args.max_atoms:
        payload["chi"] = atoms.chi(st.alg, a or st.alg.full(), cap=args.max_atoms)
        payload["theta"] = atoms.theta(st.alg, a or st.alg.full(), cap=args.max_atoms)
    _emit(payload, args.json)


def cmd_indep(args):
    st = _structure(args)
    S, T, W = _sub(st, args.S), _sub(st, args.T), _sub(st, args.W)
    rep = independence.characterization_report(st.alg, S, T, W)
    (wa, wb, wc), wd = independence.independence_witness(st.alg, S, T, W)
    payload = {
        "defect": rep.defect,
        "independent": rep.defect == 0,
        "product_rule": rep.product_rule,
        "same_conditional": rep.same_conditional,
        "w_measurable": rep.w_measurable,
        "equal_norms": rep.equal_norms,
        "consistent": rep.consistent,
        "worst_blocks": {"S": wa, "T": wb, "W": wc, "defect": wd},
    }
    if not rep.consistent:
        raise _Fail(payload)
    _emit(payload, args.json)


def cmd_type(args):
    st = _structure(args)
    alg = st.alg
    a = _events(st, args.a)
    C = _sub(st, args.C)
    desc = typespace.type_of(alg, a, C)
    payload = {"n": desc.n, "type": {"".join("+" if x > 0 else "-" for x in s): _step(f) for s, f in desc.g.items()}}
    if args.b:
        b = _events(st, args.b)
        payload["equal"] = typespace.type_of(alg, b, C) == desc
        if is_partition(alg, a) and is_partition(alg, b) and len(a) == len(b):
            payload["distance"] = typespace.type_distance_partitions(alg, a, b, C)
            payload["coordinate_distances"] = typespace.coordinate_distances(alg, a, b, C)
        else:
            br = typespace.lipschitz_check(alg, a, b, C)
            payload["partition_distance"] = br.middle
            payload["distance_bracket"] = [br.lower, br.upper]
            payload["constructive_distance"] = typespace.constructive_tuple_distance(alg, a, b, C)
        payload["dP"] = typespace.dP(alg, a, b)
        payload["dCb"] = typespace.dCb(alg, a, b, C)
    if args.realize:
        real = typespace.realize_type(alg, desc)
        payload["realization"] = {
            "atoms": {lab: w for lab, w in zip(real.alg.labels, real.alg.weights)},
            "tuple": real.tuple,
        }
    _emit(payload, args.json)


def cmd_forking(args):
    st = _structure(args)
    a = _events(st, args.a)
    E, C = _sub(st, args.E), _sub(st, args.C)
    eps = Fraction(args.eps)
    nf = forking.nonforking_extension(st.alg, a, E, C)
    dist = typespace.type_distance_partitions(nf.alg, nf.a, nf.a2, nf.C)
    payload = {
        "extension_atoms": {lab: w for lab, w in zip(nf.alg.labels, nf.alg.weights)},
        "nonforking_copy": nf.a2,
        "nonforking_type": {f"a{i + 1}": _step(cond_prob(nf.alg, x, nf.C)) for i, x in enumerate(nf.a2)},
        "distance": dist,
        "eps": eps,
        "forks": dist > eps,
    }
    _emit(payload, args.json)


def cmd_rv(args):
    st = _structure(args)
    alg = st.alg
    payload = {}
    if args.E or args.F:
        if not (args.E and args.F):
            raise StructureError("give both --E and --F")
        E = randvars.RVPartition(alg, tuple(_events(st, args.E)))
        F = randvars.RVPartition(alg, tuple(_events(st, args.F)))
        payload.update({
            "n": E.n,
            "rho_n": randvars.rho_n(alg, E, F),
            "dP": randvars.dP_rv(alg, E, F),
            "L1": l1_distance(alg, E.step_function(), F.step_function()),
        })
    if args.dyadic:
        f = cond_prob(alg, st.event(args.dyadic), _sub(st, args.C))
        approx = randvars.dyadic_approx(alg, f, args.depth)
        n = 1 << args.depth
        payload["dyadic"] = {
            f"I_{j}": part for j, part in enumerate(approx.parts, 1)
        }
        payload["dyadic_error"] = randvars.approximation_error(alg, f, args.depth)
        payload["error_bound"] = Fraction(1, n)
    if not payload:
        raise StructureError("give --E/--F or --dyadic EVENT")
    _emit(payload, args.json)


def cmd_entropy(args):
    st = _structure(args)
    alg = st.alg
    A = st.subalgebra(args.A)
    C = _sub(st, args.C)
    payload = {f"H({args.A}/{args.C or 'trivial'})": entropy.cond_entropy(alg, A, C)}
    if args.D:
        D = st.subalgebra(args.D)
        drop = entropy.entropy_drop(alg, A, C, D)
        payload["drop"] = {
            f"H({args.A}/{args.D})": entropy.cond_entropy(alg, A, D),
            "gap": drop.gap,
            "bound": drop.rhs_bound,
            "independent": drop.independent,
            "holds": drop.holds,
        }
        if args.eps is not None:
            fg = entropy.entropy_forking_gap(alg, A.block_events(), C, D, Fraction(args.eps))
            payload["forking"] = {
                "eps": fg.eps,
                "distance": fg.distance,
                "forks": fg.forks,
                "gap": fg.gap,
                "bound": fg.bound,
                "holds": fg.holds,
            }
        if not drop.holds or ("forking" in payload and not payload["forking"]["holds"]):
            raise _Fail(payload)
    _emit(payload, args.json)


def cmd_axioms(args):
    st = _structure(args, validate=False)
    rep = verify_axioms(st.alg, seed=args.seed)
    payload = {r.name: r.passed for r in rep}
    fails = {r.name: str(r.witness) for r in rep.failures()}
    if fails:
        payload["failures"] = fails
        raise _Fail(payload)
    _emit(payload, args.json)


def cmd_gen(args):
    st = generate_structure(args.seed, args.atoms, args.events, args.uniform)
    print(json.dumps(structure_to_dict(st), indent=2))


def cmd_selftest(args):
    faults = tuple(args.inject_fault or ())
    ok = True
    results = []
    for r in selftest.run_all(args.seed, args.scale, faults, args.only):
        ok &= r.passed
        results.append(r)
        if not args.json:
            status = "PASS" if r.passed else "FAIL"
            print(f"{status} {r.name:<15} {r.instances:>5} instances  {r.title}", flush=True)
            if r.witness:
                print(f"     witness: {r.witness}", flush=True)
    if args.json:
        print(json.dumps([{"suite": r.name, "passed": r.passed, "instances": r.instances,
                           "failures": r.failures, "witness": r.witness} for r in results], indent=2))
    else:
        print("all suites passed" if ok else "property failures found")
    return EXIT_OK if ok else EXIT_PROPERTY


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--structure", metavar="FILE", help="structure document (JSON)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=selftest.DEFAULT_SEED)
    common.add_argument("--max-atoms", type=int, default=DEFAULT_CAP,
                        help="atom cap for quantifier enumeration (default %(default)s)")

    p = argparse.ArgumentParser(prog="probalg", description="Exact reports on finite probability algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="evaluate a formula")
    src = e.add_mutually_exclusive_group()
    src.add_argument("--formula", metavar="FILE")
    src.add_argument("--inline", metavar="TEXT")
    e.add_argument("--bind", action="append", metavar="VAR=EVENT")
    e.add_argument("--witness", action="store_true", help="list quantifier witnesses")
    e.set_defaults(func=cmd_eval)

    a = sub.add_parser("atoms", parents=[common], help="Phi, at_n and phi_n")
    a.add_argument("--event", help="event to report on (default ALL)")
    a.set_defaults(func=cmd_atoms)

    i = sub.add_parser("indep", parents=[common], help="independence report")
    for name in ("S", "T", "W"):
        i.add_argument(f"--{name}", help="subalgebra name or comma-separated generating events")
    i.set_defaults(func=cmd_indep)

    t = sub.add_parser("type", parents=[common], help="types over a subalgebra")
    t.add_argument("--a", required=True, help="tuple: events or a subalgebra's blocks")
    t.add_argument("--b", help="second tuple for equality and distances")
    t.add_argument("--C", help="base subalgebra (default trivial)")
    t.add_argument("--realize", action="store_true", help="realize tp(a/C) in a fresh extension")
    t.set_defaults(func=cmd_type)

    f = sub.add_parser("forking", parents=[common], help="non-forking extension and eps-forking")
    f.add_argument("--a", required=True, help="partition of 1")
    f.add_argument("--E", help="small subalgebra (default trivial)")
    f.add_argument("--C", required=True, help="large subalgebra")
    f.add_argument("--eps", default="1/4")
    f.set_defaults(func=cmd_forking)

    r = sub.add_parser("rv", parents=[common], help="random-variable metrics")
    r.add_argument("--E", help="partition (ordered events)")
    r.add_argument("--F", help="partition (ordered events)")
    r.add_argument("--dyadic", metavar="EVENT", help="dyadic approximation of P(EVENT|C)")
    r.add_argument("--C", help="conditioning subalgebra (default trivial)")
    r.add_argument("--depth", type=int, default=2)
    r.set_defaults(func=cmd_rv)

    h = sub.add_parser("entropy", parents=[common], help="conditional entropy reports")
    h.add_argument("--A", required=True)
    h.add_argument("--C", help="conditioning subalgebra (default trivial)")
    h.add_argument("--D", help="larger subalgebra for the drop and forking-gap reports")
    h.add_argument("--eps", help="report the forking gap at this eps (needs --D)")
    h.set_defaults(func=cmd_entropy)

    x = sub.add_parser("axioms", parents=[common], help="check the axioms on a structure")
    x.set_defaults(func=cmd_axioms)

    g = sub.add_parser("gen", parents=[common], help="print a random structure document")
    g.add_argument("--atoms", type=int, default=6)
    g.add_argument("--events", type=int, default=3)
    g.add_argument("--uniform", action="store_true")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("selftest", parents=[common], help="run the property suites")
    s.add_argument("--scale", type=float, default=1.0, help="multiply every instance count")
    s.add_argument("--only", action="append", choices=selftest.SUITE_NAMES)
    s.add_argument("--inject-fault", action="append", choices=sorted(selftest.FAULTS))
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args)
    except _Fail as fail:
        _emit(fail.payload, args.json)
        return EXIT_PROPERTY
    except (FormulaSyntaxError, UnknownSymbol, json.JSONDecodeError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BrokenPipeError:
        # downstream closed early (e.g. `| head`); silence the flush at exit
        sys.stdout = open(os.devnull, "w")
        return EXIT_OK
    except (ProbAlgError, OSError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
