"""Finite Kripke structures, reducts, expansions and homomorphisms.

Worlds and elements are plain strings.  A structure stores, for each world,
the carriers of every sort and the full tables of every function and
relation.  Rigid symbols are stored at every world and must agree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from ..errors import ModelError
from ..signature import (NOMINAL_SORT, HFOLSignature, SignatureExtension,
                         SignatureMorphism)


@dataclass(frozen=True)
class WorldStructure:
    """A first-order structure for one world."""
    carriers: Mapping[str, frozenset] = field(default_factory=dict)
    functions: Mapping[str, Mapping[tuple, str]] = field(default_factory=dict)
    relations: Mapping[str, frozenset] = field(default_factory=dict)

    __hash__ = None  # type: ignore[assignment]

    def carrier(self, sort: str) -> list[str]:
        return sorted(self.carriers[sort])


@dataclass(frozen=True)
class KripkeStructure:
    signature: HFOLSignature
    worlds: tuple
    nominals: Mapping[str, str]
    modalities: Mapping[str, frozenset]
    structures: Mapping[str, WorldStructure]

    __hash__ = None  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "worlds", tuple(sorted(set(self.worlds))))

    def at(self, w: str) -> WorldStructure:
        return self.structures[w]

    def carrier(self, w: str, sort: str) -> list[str]:
        return sorted(self.structures[w].carriers[sort])

    def rigid_carrier(self, sort: str) -> list[str]:
        return sorted(self.structures[self.worlds[0]].carriers[sort])

    def nominal(self, k: str) -> str:
        return self.nominals[k]

    def same_interpretation(self, other: "KripkeStructure") -> bool:
        """Equality of everything except the signature object."""
        return (self.worlds == other.worlds and dict(self.nominals) == dict(other.nominals)
                and dict(self.modalities) == dict(other.modalities)
                and dict(self.structures) == dict(other.structures))


def build_model(sig: HFOLSignature, worlds: Iterable[str], nominals: Mapping[str, str],
                modalities: Mapping[str, Iterable] | None = None,
                carriers: Mapping[str, Mapping[str, Iterable[str]]] | None = None,
                functions: Mapping[str, Mapping[str, Mapping[tuple, str]]] | None = None,
                relations: Mapping[str, Mapping[str, Iterable[tuple]]] | None = None,
                ) -> KripkeStructure:
    """Assemble a structure from per-world dictionaries.

    ``carriers[w][s]``, ``functions[w][f]`` and ``relations[w][p]`` give the
    interpretation at world ``w``.  Missing modalities default to empty;
    constants may be given as a bare value instead of ``{(): value}``.
    """
    worlds = list(worlds)
    modalities = modalities or {}
    carriers = carriers or {}
    functions = functions or {}
    relations = relations or {}
    mods = {}
    for m, arity in sig.mod.items():
        raw = modalities.get(m, ())
        if arity == 1:
            mods[m] = frozenset(raw)
        else:
            mods[m] = frozenset(tuple(p) for p in raw)
    structures = {}
    for w in worlds:
        funs = {}
        for f, table in functions.get(w, {}).items():
            if not isinstance(table, Mapping):
                table = {(): table}
            funs[f] = {tuple(k) if isinstance(k, tuple) else (k,): v for k, v in table.items()}
        structures[w] = WorldStructure(
            {s: frozenset(es) for s, es in carriers.get(w, {}).items()},
            funs,
            {p: frozenset(tuple(t) if isinstance(t, tuple) else (t,) for t in ts)
             for p, ts in relations.get(w, {}).items()},
        )
    return KripkeStructure(sig, tuple(worlds), dict(nominals), mods, structures)


def validate_model(model: KripkeStructure, sig: HFOLSignature | None = None) -> list[str]:
    sig = sig or model.signature
    diags: list[str] = []
    worlds = set(model.worlds)
    if not worlds:
        return ["frame has no worlds"]
    for k in sorted(sig.nominals):
        if k not in model.nominals:
            diags.append(f"nominal '{k}' is not interpreted")
        elif model.nominals[k] not in worlds:
            diags.append(f"nominal '{k}' denotes unknown world '{model.nominals[k]}'")
    for k in sorted(set(model.nominals) - set(sig.nominals)):
        diags.append(f"unknown nominal '{k}'")
    for m, arity in sorted(sig.mod.items()):
        if m not in model.modalities:
            diags.append(f"modality '{m}' is not interpreted")
            continue
        for item in sorted(model.modalities[m]):
            members = (item,) if arity == 1 else item
            if arity == 2 and (not isinstance(item, tuple) or len(item) != 2):
                diags.append(f"modality '{m}' contains a non-pair {item!r}")
            elif any(x not in worlds for x in members):
                diags.append(f"modality '{m}' mentions unknown world in {item!r}")
    for m in sorted(set(model.modalities) - set(sig.mod)):
        diags.append(f"unknown modality '{m}'")
    if set(model.structures) != worlds:
        diags.append("world structures do not match the set of worlds")
        return diags
    for w in model.worlds:
        diags.extend(f"world '{w}': {d}" for d in _validate_world(sig, model.structures[w]))
    if diags:
        return diags
    first = model.structures[model.worlds[0]]
    for w in model.worlds[1:]:
        ws = model.structures[w]
        for s in sig.rigid_sorts:
            if ws.carriers[s] != first.carriers[s]:
                diags.append(f"rigid sharing violated: carrier of sort '{s}' differs at "
                             f"'{model.worlds[0]}' and '{w}'")
        for f in sorted(sig.rigid.functions):
            if ws.functions[f.name] != first.functions[f.name]:
                diags.append(f"rigid sharing violated: function '{f.name}' differs at "
                             f"'{model.worlds[0]}' and '{w}'")
        for r in sorted(sig.rigid.relations):
            if ws.relations[r.name] != first.relations[r.name]:
                diags.append(f"rigid sharing violated: relation '{r.name}' differs at "
                             f"'{model.worlds[0]}' and '{w}'")
    return diags


def _validate_world(sig: HFOLSignature, ws: WorldStructure) -> list[str]:
    diags = []
    for s in sig.sorts:
        if s not in ws.carriers:
            diags.append(f"sort '{s}' has no carrier")
        elif not ws.carriers[s]:
            diags.append(f"carrier of sort '{s}' is empty")
    for s in sorted(set(ws.carriers) - set(sig.sorts)):
        diags.append(f"unknown sort '{s}'")
    if diags:
        return diags
    for name, f in sorted(sig.fun.items()):
        table = ws.functions.get(name)
        if table is None:
            diags.append(f"function '{name}' is not interpreted")
            continue
        domain = set(itertools.product(*(sorted(ws.carriers[s]) for s in f.arity)))
        if set(table) != domain:
            missing = sorted(domain - set(table))
            extra = sorted(set(table) - domain)
            if missing:
                diags.append(f"function '{name}' is not total: missing {missing[0]!r}")
            if extra:
                diags.append(f"function '{name}' defined outside its domain at {extra[0]!r}")
        for args, v in sorted(table.items()):
            if v not in ws.carriers[f.result]:
                diags.append(f"function '{name}' maps {args!r} outside sort '{f.result}'")
                break
    for name in sorted(set(ws.functions) - set(sig.fun)):
        diags.append(f"unknown function '{name}'")
    for name, r in sorted(sig.rel.items()):
        tuples = ws.relations.get(name)
        if tuples is None:
            diags.append(f"relation '{name}' is not interpreted")
            continue
        for t in sorted(tuples):
            if len(t) != len(r.arity) or any(e not in ws.carriers[s] for e, s in zip(t, r.arity)):
                diags.append(f"relation '{name}' contains ill-sorted tuple {t!r}")
                break
    for name in sorted(set(ws.relations) - set(sig.rel)):
        diags.append(f"unknown relation '{name}'")
    return diags


def check_model(model: KripkeStructure) -> KripkeStructure:
    diags = validate_model(model)
    if diags:
        raise ModelError("; ".join(diags))
    return model


# --------------------------------------------------------------------------
# reducts and expansions

def reduct(chi: SignatureMorphism, model: KripkeStructure) -> KripkeStructure:
    """Pull ``model`` (over the target of ``chi``) back to the source of ``chi``."""
    src = chi.source
    structures = {}
    for w in model.worlds:
        ws = model.structures[w]
        structures[w] = WorldStructure(
            {s: ws.carriers[chi.sorts[s]] for s in src.base.sorts},
            {f: ws.functions[chi.functions[f]] for f in src.fun},
            {r: ws.relations[chi.relations[r]] for r in src.rel},
        )
    return KripkeStructure(
        src, model.worlds,
        {k: model.nominals[chi.nominals[k]] for k in src.nominals},
        {m: model.modalities[chi.modalities[m]] for m in src.mod},
        structures,
    )


def expansion_count(model: KripkeStructure, ext: SignatureExtension) -> int:
    n = len(model.worlds) ** len(ext.nominal_vars)
    for _, s in ext.rigid_vars:
        n *= len(model.rigid_carrier(s))
    return n


def expand(model: KripkeStructure, ext: SignatureExtension, values: Mapping[str, str]) -> KripkeStructure:
    """The expansion of ``model`` interpreting the added constants by ``values``."""
    nominals = dict(model.nominals)
    for z in ext.nominal_vars:
        nominals[z] = values[z]
    structures = {}
    for w in model.worlds:
        ws = model.structures[w]
        funs = dict(ws.functions)
        for y, _ in ext.rigid_vars:
            funs[y] = {(): values[y]}
        structures[w] = WorldStructure(ws.carriers, funs, ws.relations)
    return KripkeStructure(ext.signature, model.worlds, nominals, model.modalities, structures)


def expansions(model: KripkeStructure, ext: SignatureExtension) -> Iterator[KripkeStructure]:
    """Every expansion of ``model`` along the extension, in a fixed order."""
    names = [n for n, _ in ext.added]
    domains = [list(model.worlds) if s == NOMINAL_SORT else model.rigid_carrier(s)
               for _, s in ext.added]
    for combo in itertools.product(*domains):
        yield expand(model, ext, dict(zip(names, combo)))


# --------------------------------------------------------------------------
# homomorphisms

@dataclass(frozen=True)
class KripkeHomomorphism:
    source: KripkeStructure
    target: KripkeStructure
    frame: Mapping[str, str]
    maps: Mapping[str, Mapping[str, Mapping[str, str]]]  # world -> sort -> element map

    __hash__ = None  # type: ignore[assignment]


def identity_homomorphism(model: KripkeStructure) -> KripkeHomomorphism:
    return KripkeHomomorphism(
        model, model, {w: w for w in model.worlds},
        {w: {s: {e: e for e in es} for s, es in model.structures[w].carriers.items()}
         for w in model.worlds})


def homomorphism_violations(h: KripkeHomomorphism) -> list[str]:
    a, b = h.source, h.target
    sig = a.signature
    out: list[str] = []
    for w in a.worlds:
        if h.frame.get(w) not in b.structures:
            return [f"frame map undefined or invalid at '{w}'"]
    for k in sorted(sig.nominals):
        if h.frame[a.nominals[k]] != b.nominals[k]:
            out.append(f"nominal '{k}' not preserved")
    for m, arity in sorted(sig.mod.items()):
        for item in a.modalities[m]:
            img = h.frame[item] if arity == 1 else (h.frame[item[0]], h.frame[item[1]])
            if img not in b.modalities[m]:
                out.append(f"modality '{m}' not preserved at {item!r}")
                break
    for w in a.worlds:
        aw, bw = a.structures[w], b.structures[h.frame[w]]
        hw = h.maps.get(w, {})
        for s in sig.sorts:
            m = hw.get(s)
            if m is None or set(m) != set(aw.carriers[s]) or \
                    any(v not in bw.carriers[s] for v in m.values()):
                out.append(f"component at world '{w}', sort '{s}' is not a map between carriers")
        if out:
            return out
        for name, f in sorted(sig.fun.items()):
            for args, v in aw.functions[name].items():
                img = tuple(hw[s][e] for s, e in zip(f.arity, args))
                if bw.functions[name][img] != hw[f.result][v]:
                    out.append(f"function '{name}' not preserved at world '{w}' on {args!r}")
                    break
        for name, r in sorted(sig.rel.items()):
            for t in aw.relations[name]:
                img = tuple(hw[s][e] for s, e in zip(r.arity, t))
                if img not in bw.relations[name]:
                    out.append(f"relation '{name}' not preserved at world '{w}' on {t!r}")
                    break
    for s in sig.rigid_sorts:
        comps = {tuple(sorted(h.maps[w][s].items())) for w in a.worlds}
        if len(comps) > 1:
            out.append(f"rigid sort '{s}' components differ across worlds")
    return out


def is_homomorphism(h: KripkeHomomorphism) -> bool:
    return not homomorphism_violations(h)


def inverse(h: KripkeHomomorphism) -> KripkeHomomorphism:
    inv_frame = {v: w for w, v in h.frame.items()}
    maps = {}
    for w, comps in h.maps.items():
        maps[h.frame[w]] = {s: {v: e for e, v in m.items()} for s, m in comps.items()}
    return KripkeHomomorphism(h.target, h.source, inv_frame, maps)


def _bijective(m: Mapping, domain, codomain) -> bool:
    return set(m) == set(domain) and len(set(m.values())) == len(m) and set(m.values()) == set(codomain)


def is_isomorphism(h: KripkeHomomorphism) -> bool:
    a, b = h.source, h.target
    if not is_homomorphism(h):
        return False
    if not _bijective(h.frame, a.worlds, b.worlds):
        return False
    for w in a.worlds:
        for s in a.signature.sorts:
            if not _bijective(h.maps[w][s], a.structures[w].carriers[s],
                              b.structures[h.frame[w]].carriers[s]):
                return False
    return is_homomorphism(inverse(h))


def find_isomorphism(a: KripkeStructure, b: KripkeStructure) -> KripkeHomomorphism | None:
    """Brute-force search for an isomorphism ``a -> b`` (small models only)."""
    return next(isomorphisms(a, b), None)


def isomorphisms(a: KripkeStructure, b: KripkeStructure) -> Iterator[KripkeHomomorphism]:
    """Every isomorphism ``a -> b``, by brute force."""
    sig = a.signature
    if len(a.worlds) != len(b.worlds):
        return
    rigid = sig.rigid_sorts
    flexible = sig.flexible_sorts
    for perm in itertools.permutations(b.worlds):
        frame = dict(zip(a.worlds, perm))
        if any(frame[a.nominals[k]] != b.nominals[k] for k in sig.nominals):
            continue
        ok = True
        for m, arity in sig.mod.items():
            img = {frame[x] for x in a.modalities[m]} if arity == 1 else \
                {(frame[x], frame[y]) for x, y in a.modalities[m]}
            if img != set(b.modalities[m]):
                ok = False
                break
        if not ok:
            continue
        first = a.worlds[0]
        rigid_choices = [_bijections(a.structures[first].carriers[s],
                                     b.structures[frame[first]].carriers[s]) for s in rigid]
        for rigid_maps in itertools.product(*rigid_choices):
            rmap = dict(zip(rigid, rigid_maps))
            per_world = []
            for w in a.worlds:
                choices = [_bijections(a.structures[w].carriers[s],
                                       b.structures[frame[w]].carriers[s]) for s in flexible]
                good = []
                for flex_maps in itertools.product(*choices):
                    comp = dict(rmap)
                    comp.update(zip(flexible, flex_maps))
                    if _world_iso(sig, a.structures[w], b.structures[frame[w]], comp):
                        good.append(comp)
                if not good:
                    break
                per_world.append(good)
            else:
                for combo in itertools.product(*per_world):
                    yield KripkeHomomorphism(a, b, frame, dict(zip(a.worlds, combo)))


def _bijections(src, tgt) -> list[dict]:
    src, tgt = sorted(src), sorted(tgt)
    if len(src) != len(tgt):
        return []
    return [dict(zip(src, p)) for p in itertools.permutations(tgt)]


def _world_iso(sig, aw, bw, comp) -> bool:
    for name, f in sig.fun.items():
        for args, v in aw.functions[name].items():
            img = tuple(comp[s][e] for s, e in zip(f.arity, args))
            if bw.functions[name][img] != comp[f.result][v]:
                return False
    for name, r in sig.rel.items():
        img = {tuple(comp[s][e] for s, e in zip(r.arity, t)) for t in aw.relations[name]}
        if img != set(bw.relations[name]):
            return False
    return True


def relabel(model: KripkeStructure, h: KripkeHomomorphism) -> KripkeStructure:
    """Rename worlds and elements of ``model`` along the bijective maps of ``h``."""
    sig = model.signature
    worlds = tuple(h.frame[w] for w in model.worlds)
    structures = {}
    for w in model.worlds:
        ws = model.structures[w]
        comp = h.maps[w]
        structures[h.frame[w]] = WorldStructure(
            {s: frozenset(comp[s][e] for e in es) for s, es in ws.carriers.items()},
            {name: {tuple(comp[s][e] for s, e in zip(sig.fun[name].arity, args)):
                    comp[sig.fun[name].result][v] for args, v in table.items()}
             for name, table in ws.functions.items()},
            {name: frozenset(tuple(comp[s][e] for s, e in zip(sig.rel[name].arity, t)) for t in ts)
             for name, ts in ws.relations.items()},
        )
    mods = {}
    for m, arity in sig.mod.items():
        if arity == 1:
            mods[m] = frozenset(h.frame[x] for x in model.modalities[m])
        else:
            mods[m] = frozenset((h.frame[x], h.frame[y]) for x, y in model.modalities[m])
    return KripkeStructure(sig, worlds, {k: h.frame[v] for k, v in model.nominals.items()},
                           mods, structures)
