"""Structure documents: algebras with named events and subalgebras, as JSON.

    {"atoms": [{"label": "x", "weight": "1/2"}, ...],
     "events": {"A": ["x", "y"], ...},
     "subalgebras": {"S": ["A", ...], ...}}

Weights are exact ``p/q`` strings. ``ALL`` and ``NONE`` are always defined as
events, ``trivial`` and ``full`` as subalgebras.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    Event,
    FiniteProbabilityAlgebra,
    Subalgebra,
    fmt,
    generated_subalgebra,
    random_algebra,
    random_event,
    uniform_algebra,
)
from .errors import InvalidAlgebra, ProbAlgError


class StructureError(ProbAlgError):
    """A structure document is malformed or references something undefined."""


@dataclass
class Structure:
    alg: FiniteProbabilityAlgebra
    events: dict = field(default_factory=dict)
    subalgebras: dict = field(default_factory=dict)

    def event(self, name: str) -> Event:
        if name == "ALL":
            return self.alg.full()
        if name == "NONE":
            return self.alg.empty()
        try:
            return self.events[name]
        except KeyError:
            raise StructureError(f"unknown event {name!r}") from None

    def subalgebra(self, name: str) -> Subalgebra:
        """A named subalgebra, ``trivial``/``full``, or one generated by comma-separated events."""
        if name == "trivial":
            return Subalgebra.trivial(self.alg)
        if name == "full":
            return Subalgebra.full(self.alg)
        if name in self.subalgebras:
            return self.subalgebras[name]
        names = [x for x in name.split(",") if x]
        if names and all(x in self.events or x in ("ALL", "NONE") for x in names):
            return generated_subalgebra(self.alg, [self.event(x) for x in names])
        raise StructureError(f"unknown subalgebra {name!r}")

    def event_list(self, spec: str) -> list:
        return [self.event(x.strip()) for x in spec.split(",") if x.strip()]


def _weight(raw) -> Fraction:
    if isinstance(raw, bool) or isinstance(raw, float):
        raise StructureError(f"weight {raw!r} must be a 'p/q' string or an integer")
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError, TypeError):
        raise StructureError(f"weight {raw!r} is not a rational") from None


def structure_from_dict(doc: dict, *, validate: bool = True) -> Structure:
    if not isinstance(doc, dict) or "atoms" not in doc:
        raise StructureError("document needs an 'atoms' list")
    atoms = doc["atoms"]
    if not isinstance(atoms, list):
        raise StructureError("'atoms' must be a list")
    labels, weights = [], []
    for i, atom in enumerate(atoms):
        if not isinstance(atom, dict) or "weight" not in atom:
            raise StructureError(f"atom {i} needs a weight")
        labels.append(str(atom.get("label", i)))
        weights.append(_weight(atom["weight"]))
    try:
        alg = FiniteProbabilityAlgebra(weights, labels, validate=validate)
    except InvalidAlgebra as exc:
        raise StructureError(str(exc)) from None
    st = Structure(alg)
    for name, members in (doc.get("events") or {}).items():
        if name in ("ALL", "NONE"):
            raise StructureError(f"event name {name} is reserved")
        try:
            st.events[name] = alg.event(members)
        except ProbAlgError as exc:
            raise StructureError(f"event {name!r}: {exc}") from None
    for name, members in (doc.get("subalgebras") or {}).items():
        if name in ("trivial", "full"):
            raise StructureError(f"subalgebra name {name} is reserved")
        st.subalgebras[name] = generated_subalgebra(alg, [st.event(m) for m in members])
    return st


def load_structure(path: str, *, validate: bool = True) -> Structure:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return structure_from_dict(doc, validate=validate)


def structure_to_dict(st: Structure) -> dict:
    alg = st.alg
    out = {
        "atoms": [{"label": lab, "weight": fmt(w)} for lab, w in zip(alg.labels, alg.weights)],
        "events": {name: list(e.labels) for name, e in st.events.items()},
    }
    if st.subalgebras:
        subs = {}
        for name, sub in st.subalgebras.items():
            # record a generating family: all blocks but the last
            gens = []
            for j, b in enumerate(sub.blocks[:-1]):
                ev = f"{name}_{j + 1}"
                out["events"][ev] = list(Event(alg, b).labels)
                gens.append(ev)
            subs[name] = gens
        out["subalgebras"] = subs
    return out


def generate_structure(seed: int, n_atoms: int, n_events: int = 3, uniform: bool = False) -> Structure:
    """Random structure: ``n_atoms`` atoms, events ``E1..`` and one random subalgebra ``S``."""
    rng = random.Random(seed)
    labels = [f"a{i}" for i in range(n_atoms)]
    base = uniform_algebra(n_atoms) if uniform else random_algebra(rng, n_atoms)
    alg = FiniteProbabilityAlgebra(base.weights, labels)
    st = Structure(alg)
    for j in range(1, n_events + 1):
        st.events[f"E{j}"] = random_event(rng, alg)
    st.subalgebras["S"] = generated_subalgebra(alg, [random_event(rng, alg)])
    return st
