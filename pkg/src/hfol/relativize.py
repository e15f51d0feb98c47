"""Relativized unions of signatures and models, and the guarded translation ``rt``.

The union signature is the coproduct of the two parts plus two nominals
``o1``, ``o2`` and two unary modalities ``pi1``, ``pi2`` marking the parts.
A sentence of part ``i`` is translated so that it speaks only about worlds
inside ``pi_i`` and holds trivially elsewhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

from .errors import RelativizationError
from .semantics.kripke import KripkeStructure, WorldStructure, reduct
from .semantics.satisfaction import sat_global
from .signature import (NOMINAL_SORT, HFOLSignature, Modality, SignatureMorphism, _fresh,
                        coproduct)
from .syntax import (And, At, Diamond, Eq, Exists, Implies, Nominal, Not, Or, Prop, Rel,
                     Sentence, Store, desugar, translate)


@dataclass(frozen=True)
class RelativizedUnion:
    parts: tuple  # (Delta1, Delta2)
    signature: HFOLSignature
    axioms: tuple
    witnesses: tuple  # (o1, o2)
    markers: tuple  # (pi1, pi2)
    injections: tuple  # (inj1, inj2), each Delta_i -> union signature

    __hash__ = None  # type: ignore[assignment]

    def marker(self, i: int) -> str:
        return self.markers[i - 1]

    def witness(self, i: int) -> str:
        return self.witnesses[i - 1]

    def injection(self, i: int) -> SignatureMorphism:
        return self.injections[i - 1]


def _retarget(chi: SignatureMorphism, target: HFOLSignature) -> SignatureMorphism:
    return SignatureMorphism(chi.source, target, chi.sorts, chi.nominals, chi.modalities,
                             chi.functions, chi.relations)


def relativized_union_sig(left: HFOLSignature, right: HFOLSignature) -> RelativizedUnion:
    union, inj1, inj2 = coproduct(left, right)
    atoms = set(union.nominals) | set(union.mod) | set(union.rel)
    o1 = _fresh("o1", atoms)
    o2 = _fresh("o2", atoms | {o1})
    pi1 = _fresh("pi1", atoms | {o1, o2})
    pi2 = _fresh("pi2", atoms | {o1, o2, pi1})
    sig = HFOLSignature(
        union.nominals | {o1, o2},
        union.modalities | {Modality(pi1, 1), Modality(pi2, 1)},
        union.base, union.rigid)
    inj1, inj2 = _retarget(inj1, sig), _retarget(inj2, sig)
    axioms = [Or((Prop(pi1), Prop(pi2)))]
    for inj, part, o, pi in ((inj1, left, o1, pi1), (inj2, right, o2, pi2)):
        for k in part.nominal_list:
            axioms.append(At(inj.nominals[k], Prop(pi)))
        axioms.append(At(o, Prop(pi)))
    return RelativizedUnion((left, right), sig, tuple(axioms), (o1, o2), (pi1, pi2),
                            (inj1, inj2))


def satisfies_axioms(u: RelativizedUnion, model: KripkeStructure) -> bool:
    return all(sat_global(model, phi) for phi in u.axioms)


def relativized_reduct(u: RelativizedUnion, model: KripkeStructure, i: int) -> KripkeStructure:
    """Restrict a model of the union presentation to the worlds of part ``i``."""
    failing = [str(phi) for phi in u.axioms if not sat_global(model, phi)]
    if failing:
        raise RelativizationError(f"model does not satisfy the union axioms: {failing[0]}")
    inj = u.injection(i)
    part = inj.source
    worlds = model.modalities[u.marker(i)]
    flat = reduct(inj, model)
    mods = {}
    for m, arity in part.mod.items():
        if arity == 1:
            mods[m] = frozenset(flat.modalities[m]) & worlds
        else:
            mods[m] = frozenset((a, b) for a, b in flat.modalities[m] if a in worlds and b in worlds)
    structures = {w: flat.structures[w] for w in worlds}
    return KripkeStructure(part, tuple(worlds), flat.nominals, mods, structures)


# --------------------------------------------------------------------------
# the guarded translation

def rt_translate(u: RelativizedUnion, i: int, gamma: Sentence) -> Sentence:
    """Translate a part-``i`` sentence into the union signature, guarded by ``pi_i``."""
    inner = translate(u.injection(i), desugar(gamma))
    return _rt(Prop(u.marker(i)), inner)


def _rt(pi: Prop, g: Sentence) -> Sentence:
    if isinstance(g, (Nominal, Prop, Eq, Rel)):
        return Implies(pi, g)
    if isinstance(g, At):
        return Implies(pi, At(g.nominal, _rt(pi, g.body)))
    if isinstance(g, Diamond):
        return Implies(pi, Diamond(g.modality, And((pi, _rt(pi, g.body)))))
    if isinstance(g, Not):
        return Implies(pi, Not(_rt(pi, g.body)))
    if isinstance(g, Or):
        if not g.items:
            # the empty disjunction must still hold outside the part
            return Implies(pi, g)
        return Or(tuple(_rt(pi, x) for x in g.items))
    if isinstance(g, Store):
        return Implies(pi, Store(g.var, _rt(pi, g.body)))
    if isinstance(g, Exists):
        guards = [At(x, pi) for x, s in g.variables if s == NOMINAL_SORT]
        body = _rt(pi, g.body)
        if guards:
            body = And(tuple(guards) + (body,))
        return Implies(pi, Exists(g.variables, body))
    raise RelativizationError(f"unexpected sentence in guarded translation: {g!r}")


# --------------------------------------------------------------------------
# union of models

POLICIES = ("minimal", "padded")


def _default_carrier(policy: str) -> frozenset:
    return frozenset({"d0"}) if policy == "minimal" else frozenset({"d0", "d1"})


def relativized_union_models(u: RelativizedUnion, m1: KripkeStructure, m2: KripkeStructure,
                             policy: str = "minimal") -> KripkeStructure:
    """A model of the union presentation whose relativized reducts are ``m1`` and ``m2``.

    Symbols of the other part at a world get default interpretations chosen by
    ``policy``: ``minimal`` uses one-element carriers, least values and empty
    relations; ``padded`` uses two-element carriers, greatest values and full
    relations.  Rigid symbols of each part are copied to every world.
    """
    if policy not in POLICIES:
        raise RelativizationError(f"unknown policy '{policy}'")
    if set(m1.worlds) & set(m2.worlds):
        raise RelativizationError("the two models share world names; rename them apart first")
    models = (m1, m2)
    sig = u.signature
    worlds = tuple(m1.worlds) + tuple(m2.worlds)
    nominals: dict[str, str] = {}
    mods: dict[str, frozenset] = {}
    for idx, m in enumerate(models, start=1):
        inj = u.injection(idx)
        for k, v in m.nominals.items():
            nominals[inj.nominals[k]] = v
        for name, val in m.modalities.items():
            mods[inj.modalities[name]] = frozenset(val)
        nominals[u.witness(idx)] = m.worlds[0]
        mods[u.marker(idx)] = frozenset(m.worlds)
    # names of the union signature owned by each part, and their rigid carriers
    owned = []
    for idx, m in enumerate(models, start=1):
        inj = u.injection(idx)
        first = m.structures[m.worlds[0]]
        owned.append({
            "sorts": {inj.sorts[s]: s for s in inj.source.base.sorts},
            "funs": {inj.functions[f]: f for f in inj.source.fun},
            "rels": {inj.relations[r]: r for r in inj.source.rel},
            "first": first,
        })
    structures = {}
    for idx, m in enumerate(models, start=1):
        mine, other = owned[idx - 1], owned[2 - idx]
        for w in m.worlds:
            ws = m.structures[w]
            carriers = {t: ws.carriers[s] for t, s in mine["sorts"].items()}
            for t, s in other["sorts"].items():
                carriers[t] = other["first"].carriers[s] if sig.is_rigid_sort(t) \
                    else _default_carrier(policy)
            funs = {t: ws.functions[f] for t, f in mine["funs"].items()}
            rels = {t: ws.relations[r] for t, r in mine["rels"].items()}
            for t, f in other["funs"].items():
                if sig.is_rigid_fun(t):
                    funs[t] = other["first"].functions[f]
                else:
                    funs[t] = _default_table(sig.fun[t], carriers, policy)
            for t, r in other["rels"].items():
                if sig.is_rigid_rel(t):
                    rels[t] = other["first"].relations[r]
                else:
                    rels[t] = _default_relation(sig.rel[t], carriers, policy)
            structures[w] = WorldStructure(carriers, funs, rels)
    return KripkeStructure(sig, worlds, nominals, mods, structures)


def _default_table(f, carriers, policy):
    pick = min if policy == "minimal" else max
    value = pick(carriers[f.result])
    return {args: value for args in itertools.product(*(sorted(carriers[s]) for s in f.arity))}


def _default_relation(r, carriers, policy):
    if policy == "minimal":
        return frozenset()
    return frozenset(itertools.product(*(sorted(carriers[s]) for s in r.arity)))


def relabel_worlds(model: KripkeStructure, mapping: Mapping[str, str]) -> KripkeStructure:
    """Rename worlds (useful before forming a union of models that share world names)."""
    f = lambda w: mapping.get(w, w)  # noqa: E731
    mods = {}
    for m, arity in model.signature.mod.items():
        val = model.modalities[m]
        mods[m] = frozenset(f(x) for x in val) if arity == 1 else \
            frozenset((f(a), f(b)) for a, b in val)
    return KripkeStructure(model.signature, tuple(f(w) for w in model.worlds),
                           {k: f(v) for k, v in model.nominals.items()}, mods,
                           {f(w): ws for w, ws in model.structures.items()})
