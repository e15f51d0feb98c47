"""Reachable worlds and elements, and replacement of unreachable elements."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from ..errors import PlanError
from ..syntax import AtSort, HybridSort, at_sort
from .kripke import KripkeStructure, WorldStructure


def _rigid_profiles(model: KripkeStructure):
    """Symbols of the rigidified signature as (name, world, arity, result)."""
    sig = model.signature
    out = []
    for name, f in sorted(sig.fun.items()):
        if sig.is_rigid_fun(name):
            out.append((name, model.worlds[0], tuple(f.arity), f.result))
        else:
            for k in sig.nominal_list:
                out.append((name, model.nominals[k], tuple(at_sort(sig, k, s) for s in f.arity),
                            at_sort(sig, k, f.result)))
    return out


def term_denotations(model: KripkeStructure, max_depth: int | None = None
                     ) -> dict[HybridSort, set[str]]:
    """Values of rigid hybrid terms, per hybrid sort, up to ``max_depth`` (None: closure)."""
    profiles = _rigid_profiles(model)
    values: dict[HybridSort, set[str]] = {}
    d = 0
    while max_depth is None or d < max_depth:
        d += 1
        new: dict[HybridSort, set[str]] = {}
        for name, where, arity, result in profiles:
            table = model.structures[where].functions[name]
            pools = [sorted(values.get(s, ())) for s in arity]
            for args in itertools.product(*pools):
                v = table[args]
                if v not in values.get(result, ()):
                    new.setdefault(result, set()).add(v)
        if not new:
            break
        for s, vs in new.items():
            values.setdefault(s, set()).update(vs)
    return values


@dataclass(frozen=True)
class ReachabilityReport:
    worlds: frozenset
    elements: Mapping[str, Mapping[str, frozenset]]  # world -> sort -> reachable elements
    reachable: bool
    unreachable_rigid: tuple = ()
    unnamed_worlds: tuple = ()

    __hash__ = None  # type: ignore[assignment]


def reachability_report(model: KripkeStructure, max_depth: int | None = None) -> ReachabilityReport:
    sig = model.signature
    den = term_denotations(model, max_depth)
    named = frozenset(model.nominals[k] for k in sig.nominals)
    elements: dict[str, dict[str, frozenset]] = {}
    for w in model.worlds:
        per = {}
        names = [k for k in sig.nominal_list if model.nominals[k] == w]
        for s in sig.sorts:
            if not names:
                per[s] = frozenset()
            elif sig.is_rigid_sort(s):
                per[s] = frozenset(den.get(s, ()))
            else:
                per[s] = frozenset().union(*(den.get(AtSort(k, s), ()) for k in names))
        elements[w] = per
    bad_rigid = []
    for s in sig.rigid_sorts:
        missing = set(model.rigid_carrier(s)) - den.get(s, set())
        bad_rigid.extend((s, e) for e in sorted(missing))
    unnamed = tuple(w for w in model.worlds if w not in named)
    return ReachabilityReport(named, elements, not bad_rigid and not unnamed,
                              tuple(bad_rigid), unnamed)


def is_reachable(model: KripkeStructure) -> bool:
    return reachability_report(model).reachable


def reachable_by(model: KripkeStructure, nominals: Iterable[str], constants: Iterable[str]) -> bool:
    """Worlds are named by ``nominals`` and rigid carriers are values of ``constants``."""
    sig = model.signature
    named = {model.nominals[k] for k in nominals}
    if named != set(model.worlds):
        return False
    first = model.structures[model.worlds[0]]
    covered: dict[str, set[str]] = {}
    for c in constants:
        f = sig.fun[c]
        if f.arity or not sig.is_rigid_sort(f.result):
            continue
        covered.setdefault(f.result, set()).add(first.functions[c][()])
    return all(set(model.rigid_carrier(s)) <= covered.get(s, set()) for s in sig.rigid_sorts)


def generated_elements(model: KripkeStructure, w: str) -> dict[str, set[str]]:
    """Elements at ``w`` denoted by some term under some variable assignment.

    This is the closure of all rigid elements under the functions of world
    ``w``.  A flexible element outside it is never the value of any term, so
    it can be replaced without changing which sentences hold.  For models in
    which every world is named and every rigid element is a term value this
    coincides with the reachable elements at ``w``.
    """
    sig = model.signature
    ws = model.structures[w]
    values = {s: set(ws.carriers[s]) if sig.is_rigid_sort(s) else set() for s in sig.sorts}
    changed = True
    while changed:
        changed = False
        for name, f in sorted(sig.fun.items()):
            pools = [sorted(values[s]) for s in f.arity]
            for args in itertools.product(*pools):
                v = ws.functions[name][args]
                if v not in values[f.result]:
                    values[f.result].add(v)
                    changed = True
    return values


def unreachable_elements(model: KripkeStructure) -> dict[str, dict[str, set[str]]]:
    """Per world and flexible sort, the elements outside :func:`generated_elements`."""
    sig = model.signature
    out = {}
    for w in model.worlds:
        gen = generated_elements(model, w)
        out[w] = {s: set(model.structures[w].carriers[s]) - gen[s] for s in sig.flexible_sorts}
    return out


@dataclass(frozen=True)
class ReplacementPlan:
    """Which flexible elements to drop and add, and values on new arguments.

    ``remove`` and ``add`` map ``(world, sort)`` to element sets.  ``fills``
    maps ``(world, function)`` to ``{args: value}`` and ``relation_fills``
    maps ``(world, relation)`` to tuples that should hold; both only matter
    for argument tuples that involve new elements.  Unspecified function
    values default to the least element of the result carrier.
    """
    remove: Mapping[tuple, Iterable[str]] = field(default_factory=dict)
    add: Mapping[tuple, Iterable[str]] = field(default_factory=dict)
    fills: Mapping[tuple, Mapping[tuple, str]] = field(default_factory=dict)
    relation_fills: Mapping[tuple, Iterable[tuple]] = field(default_factory=dict)

    __hash__ = None  # type: ignore[assignment]


def swap_unreachable(model: KripkeStructure, plan: ReplacementPlan) -> KripkeStructure:
    sig = model.signature
    unreach = unreachable_elements(model)
    for (w, s), es in list(plan.remove.items()) + list(plan.add.items()):
        if w not in model.structures:
            raise PlanError(f"unknown world '{w}'")
        if s not in sig.base.sorts:
            raise PlanError(f"unknown sort '{s}'")
        if sig.is_rigid_sort(s):
            raise PlanError(f"plan touches rigid sort '{s}'")
    for (w, s), es in plan.remove.items():
        for e in es:
            if e not in model.structures[w].carriers[s]:
                raise PlanError(f"element '{e}' is not in the carrier of '{s}' at '{w}'")
            if e not in unreach[w][s]:
                raise PlanError(f"element '{e}' of sort '{s}' at '{w}' is reachable")
    new_carriers: dict[str, dict[str, frozenset]] = {}
    added: dict[str, dict[str, set]] = {}
    for w in model.worlds:
        ws = model.structures[w]
        carriers = {}
        for s in sig.sorts:
            old = set(ws.carriers[s])
            gone = set(plan.remove.get((w, s), ()))
            fresh = set(plan.add.get((w, s), ()))
            clash = fresh & (old - gone)
            if clash:
                raise PlanError(f"added element '{sorted(clash)[0]}' already in sort '{s}' at '{w}'")
            carriers[s] = frozenset((old - gone) | fresh)
            if not carriers[s]:
                raise PlanError(f"plan empties the carrier of '{s}' at '{w}'")
            added.setdefault(w, {})[s] = fresh
        new_carriers[w] = carriers
    structures = {}
    for w in model.worlds:
        ws = model.structures[w]
        carriers = new_carriers[w]
        funs = {}
        for name, f in sorted(sig.fun.items()):
            old = ws.functions[name]
            fill = plan.fills.get((w, name), {})
            table = {}
            for args in itertools.product(*(sorted(carriers[s]) for s in f.arity)):
                v = old.get(args)
                if args in fill:
                    if v is not None and v in carriers[f.result] and fill[args] != v:
                        raise PlanError(f"plan changes '{name}' at '{w}' on inherited "
                                        f"arguments {args!r}")
                    v = fill[args]
                if v is None or v not in carriers[f.result]:
                    v = min(carriers[f.result])
                table[args] = v
            funs[name] = table
        rels = {}
        for name, r in sorted(sig.rel.items()):
            keep = {t for t in ws.relations[name]
                    if all(e in carriers[s] for e, s in zip(t, r.arity))}
            extra = {tuple(t) for t in plan.relation_fills.get((w, name), ())}
            rels[name] = frozenset(keep | extra)
        structures[w] = WorldStructure(carriers, funs, rels)
    return KripkeStructure(sig, model.worlds, model.nominals, model.modalities, structures)
