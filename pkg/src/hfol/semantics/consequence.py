"""Bounded global consequence by exhaustive enumeration of small models."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

from ..signature import HFOLSignature
from ..syntax import Sentence
from .kripke import KripkeStructure, WorldStructure
from .satisfaction import sat_global


@dataclass(frozen=True)
class Verdict:
    status: str  # "holds", "countermodel", "found", "none" or "budget_exceeded"
    checked: int
    max_worlds: int
    max_carrier: int
    countermodel: KripkeStructure | None = None

    __hash__ = None  # type: ignore[assignment]

    @property
    def holds(self) -> bool:
        return self.status == "holds"


def _restricted_growth(n_items: int, n_values: int) -> Iterator[tuple[int, ...]]:
    """Assignments of ``n_items`` to values where each value is at most one above the max so far."""
    def rec(prefix, top):
        if len(prefix) == n_items:
            yield tuple(prefix)
            return
        for v in range(min(top + 2, n_values)):
            yield from rec(prefix + [v], max(top, v))
    yield from rec([], -1)


def _subsets(items):
    items = list(items)
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)


def _tables(domain: list[tuple], codomain: list[str]):
    for values in itertools.product(codomain, repeat=len(domain)):
        yield dict(zip(domain, values))


def enumerate_models(sig: HFOLSignature, max_worlds: int, max_carrier: int
                     ) -> Iterator[KripkeStructure]:
    """Models with at most the given numbers of worlds and elements per carrier.

    Worlds are ``w0, w1, ...`` and elements ``e0, e1, ...``.  Nominals are
    assigned in restricted-growth order and carrier sizes are the only
    freedom for carriers, which removes most isomorphic duplicates.
    """
    noms = sig.nominal_list
    rigid, flexible = sig.rigid_sorts, sig.flexible_sorts
    for n in range(1, max_worlds + 1):
        worlds = [f"w{i}" for i in range(n)]
        nominal_choices = list(_restricted_growth(len(noms), n)) if noms else [()]
        for nom_idx in nominal_choices:
            nominals = {k: worlds[i] for k, i in zip(noms, nom_idx)}
            mod_choices = []
            for m, arity in sorted(sig.mod.items()):
                base = worlds if arity == 1 else list(itertools.product(worlds, worlds))
                mod_choices.append([frozenset(x) for x in _subsets(base)])
            for mods in itertools.product(*mod_choices):
                modalities = dict(zip(sorted(sig.mod), mods))
                yield from _structures(sig, worlds, nominals, modalities, rigid, flexible,
                                       max_carrier)


def _structures(sig, worlds, nominals, modalities, rigid, flexible, max_carrier):
    sizes_rigid = list(itertools.product(range(1, max_carrier + 1), repeat=len(rigid)))
    sizes_flex = list(itertools.product(range(1, max_carrier + 1), repeat=len(flexible) * len(worlds)))
    for rs in sizes_rigid:
        for fs in sizes_flex:
            carriers = {}
            for i, w in enumerate(worlds):
                c = {s: frozenset(f"e{j}" for j in range(rs[a])) for a, s in enumerate(rigid)}
                for a, s in enumerate(flexible):
                    c[s] = frozenset(f"e{j}" for j in range(fs[i * len(flexible) + a]))
                carriers[w] = c
            yield from _interpretations(sig, worlds, nominals, modalities, carriers)


def _interpretations(sig, worlds, nominals, modalities, carriers):
    first = worlds[0]
    slots = []  # (kind, name, worlds it covers, choices)
    for name, f in sorted(sig.fun.items()):
        targets = [first] if sig.is_rigid_fun(name) else worlds
        for w in targets:
            dom = list(itertools.product(*(sorted(carriers[w][s]) for s in f.arity)))
            slots.append(("f", name, w, list(_tables(dom, sorted(carriers[w][f.result])))))
    for name, r in sorted(sig.rel.items()):
        targets = [first] if sig.is_rigid_rel(name) else worlds
        for w in targets:
            dom = list(itertools.product(*(sorted(carriers[w][s]) for s in r.arity)))
            slots.append(("r", name, w, [frozenset(x) for x in _subsets(dom)]))
    for choice in itertools.product(*(s[3] for s in slots)):
        funs = {w: {} for w in worlds}
        rels = {w: {} for w in worlds}
        for (kind, name, w, _), value in zip(slots, choice):
            rigid = sig.is_rigid_fun(name) if kind == "f" else sig.is_rigid_rel(name)
            for v in (worlds if rigid else [w]):
                (funs if kind == "f" else rels)[v][name] = value
        structures = {w: WorldStructure(carriers[w], funs[w], rels[w]) for w in worlds}
        yield KripkeStructure(sig, tuple(worlds), nominals, modalities, structures)


def consequence_bounded(sig: HFOLSignature, premises: Iterable[Sentence], conclusion: Sentence,
                        max_worlds: int = 2, max_carrier: int = 2,
                        budget: int | None = 200_000) -> Verdict:
    """Search for a model of ``premises`` that globally refutes ``conclusion``."""
    premises = list(premises)
    checked = 0
    for model in enumerate_models(sig, max_worlds, max_carrier):
        if budget is not None and checked >= budget:
            return Verdict("budget_exceeded", checked, max_worlds, max_carrier)
        checked += 1
        if all(sat_global(model, p) for p in premises) and not sat_global(model, conclusion):
            return Verdict("countermodel", checked, max_worlds, max_carrier, model)
    return Verdict("holds", checked, max_worlds, max_carrier)


def find_model(sig: HFOLSignature, sentences: Iterable[Sentence], max_worlds: int = 2,
               max_carrier: int = 2, budget: int | None = 200_000) -> Verdict:
    """Search for a model globally satisfying every sentence; status is "found" or "none"."""
    sentences = list(sentences)
    checked = 0
    for model in enumerate_models(sig, max_worlds, max_carrier):
        if budget is not None and checked >= budget:
            return Verdict("budget_exceeded", checked, max_worlds, max_carrier)
        checked += 1
        if all(sat_global(model, p) for p in sentences):
            return Verdict("found", checked, max_worlds, max_carrier, model)
    return Verdict("none", checked, max_worlds, max_carrier)
