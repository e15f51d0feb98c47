"""Signatures of many-sorted hybrid first-order logic and their morphisms.

A signature carries nominals and modalities (the frame part), a many-sorted
first-order signature, and the sub-signature of rigid symbols.  Everything
here is an immutable value; operations return new objects.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping

from .errors import MorphismError, SignatureError

NOMINAL_SORT = "n"


@dataclass(frozen=True, order=True)
class FunSym:
    name: str
    arity: tuple[str, ...]
    result: str

    def __str__(self) -> str:
        return f"{self.name} : {' '.join(self.arity)} -> {self.result}".replace(":  ->", ": ->")


@dataclass(frozen=True, order=True)
class RelSym:
    name: str
    arity: tuple[str, ...]

    def __str__(self) -> str:
        return f"{self.name} : {' '.join(self.arity)}".rstrip()


@dataclass(frozen=True, order=True)
class Modality:
    name: str
    arity: int


@dataclass(frozen=True)
class FOSignature:
    sorts: frozenset[str] = frozenset()
    functions: frozenset[FunSym] = frozenset()
    relations: frozenset[RelSym] = frozenset()


@dataclass(frozen=True)
class HFOLSignature:
    nominals: frozenset[str] = frozenset()
    modalities: frozenset[Modality] = frozenset()
    base: FOSignature = FOSignature()
    rigid: FOSignature = FOSignature()

    # lookup tables; valid signatures have unique names per kind
    @cached_property
    def fun(self) -> dict[str, FunSym]:
        return {f.name: f for f in sorted(self.base.functions)}

    @cached_property
    def rel(self) -> dict[str, RelSym]:
        return {r.name: r for r in sorted(self.base.relations)}

    @cached_property
    def mod(self) -> dict[str, int]:
        return {m.name: m.arity for m in sorted(self.modalities)}

    @cached_property
    def sorts(self) -> tuple[str, ...]:
        return tuple(sorted(self.base.sorts))

    @cached_property
    def rigid_sorts(self) -> tuple[str, ...]:
        return tuple(sorted(self.rigid.sorts))

    @cached_property
    def flexible_sorts(self) -> tuple[str, ...]:
        return tuple(sorted(self.base.sorts - self.rigid.sorts))

    @cached_property
    def nominal_list(self) -> tuple[str, ...]:
        return tuple(sorted(self.nominals))

    @cached_property
    def symbol_names(self) -> frozenset[str]:
        return frozenset(self.nominals) | {m.name for m in self.modalities} | \
            {f.name for f in self.base.functions} | {r.name for r in self.base.relations}

    def is_rigid_sort(self, s: str) -> bool:
        return s in self.rigid.sorts

    def is_rigid_fun(self, name: str) -> bool:
        return self.fun[name] in self.rigid.functions

    def is_rigid_rel(self, name: str) -> bool:
        return self.rel[name] in self.rigid.relations

    def extended_sorts(self) -> tuple[str, ...]:
        """Sorts a quantifier may bind: the rigid ones plus the nominal sort."""
        return (NOMINAL_SORT,) + self.rigid_sorts

    def unary_modalities(self) -> tuple[str, ...]:
        return tuple(m for m, a in self.mod.items() if a == 1)

    def binary_modalities(self) -> tuple[str, ...]:
        return tuple(m for m, a in self.mod.items() if a == 2)

    def is_empty(self) -> bool:
        return not (self.nominals or self.modalities or self.base.sorts
                    or self.base.functions or self.base.relations)


def make_signature(*, nominals: Iterable[str] = (), modalities=(), sorts=(),
                   functions: Iterable[tuple] = (), relations: Iterable[tuple] = ()) -> HFOLSignature:
    """Convenience constructor.

    ``sorts`` is a mapping name -> rigid flag, or an iterable of flexible sort
    names.  Functions are ``(name, arity, result[, rigid])`` and relations
    ``(name, arity[, rigid])``; the rigid flag defaults to False.
    """
    if isinstance(sorts, Mapping):
        sort_flags = dict(sorts)
    else:
        sort_flags = {s: False for s in sorts}
    if isinstance(modalities, Mapping):
        mods = frozenset(Modality(n, a) for n, a in modalities.items())
    else:
        mods = frozenset(Modality(n, a) for n, a in modalities)
    funs, rfuns = set(), set()
    for entry in functions:
        name, arity, result, *rest = entry
        f = FunSym(name, tuple(arity), result)
        funs.add(f)
        if rest and rest[0]:
            rfuns.add(f)
    rels, rrels = set(), set()
    for entry in relations:
        name, arity, *rest = entry
        r = RelSym(name, tuple(arity))
        rels.add(r)
        if rest and rest[0]:
            rrels.add(r)
    base = FOSignature(frozenset(sort_flags), frozenset(funs), frozenset(rels))
    rigid = FOSignature(frozenset(s for s, r in sort_flags.items() if r),
                        frozenset(rfuns), frozenset(rrels))
    return HFOLSignature(frozenset(nominals), mods, base, rigid)


def validate_signature(sig: HFOLSignature) -> list[str]:
    diags: list[str] = []
    base, rigid = sig.base, sig.rigid
    if NOMINAL_SORT in base.sorts:
        diags.append(f"reserved sort name: '{NOMINAL_SORT}' is the sort of nominals")
    for s in sorted(rigid.sorts - base.sorts):
        diags.append(f"rigid not included in base: sort '{s}'")
    for f in sorted(rigid.functions - base.functions):
        diags.append(f"rigid not included in base: function '{f.name}'")
    for r in sorted(rigid.relations - base.relations):
        diags.append(f"rigid not included in base: relation '{r.name}'")
    for f in sorted(base.functions):
        for s in f.arity + (f.result,):
            if s not in base.sorts:
                diags.append(f"unknown sort '{s}' in profile of function '{f.name}'")
    for r in sorted(base.relations):
        for s in r.arity:
            if s not in base.sorts:
                diags.append(f"unknown sort '{s}' in arity of relation '{r.name}'")
    for f in sorted(rigid.functions & base.functions):
        for s in sorted(set(f.arity + (f.result,))):
            if s in base.sorts and s not in rigid.sorts:
                diags.append(f"rigid function '{f.name}' uses flexible sort '{s}'")
    for r in sorted(rigid.relations & base.relations):
        for s in sorted(set(r.arity)):
            if s in base.sorts and s not in rigid.sorts:
                diags.append(f"rigid relation '{r.name}' uses flexible sort '{s}'")
    for name, n in _duplicates(f.name for f in base.functions):
        diags.append(f"duplicate function name '{name}' ({n} profiles)")
    for name, n in _duplicates(r.name for r in base.relations):
        diags.append(f"duplicate relation name '{name}' ({n} profiles)")
    for name, n in _duplicates(m.name for m in sig.modalities):
        diags.append(f"duplicate modality name '{name}' ({n} arities)")
    for m in sorted(sig.modalities):
        if m.arity not in (1, 2):
            diags.append(f"modality '{m.name}' has arity {m.arity}; only 1 and 2 are allowed")
    atoms = [(k, "nominal") for k in sig.nominals] + \
        [(m, "modality") for m in {m.name for m in sig.modalities}] + \
        [(r, "relation") for r in {r.name for r in base.relations}]
    kinds: dict[str, set[str]] = {}
    for name, kind in atoms:
        kinds.setdefault(name, set()).add(kind)
    for name in sorted(kinds):
        if len(kinds[name]) > 1:
            diags.append(f"name '{name}' used by several kinds: {', '.join(sorted(kinds[name]))}")
    reserved = {"not", "down", "exists", "forall", "true", "false"}
    names = set(sig.nominals) | {m.name for m in sig.modalities} | set(base.sorts) | \
        {f.name for f in base.functions} | {r.name for r in base.relations}
    for name in sorted(names & reserved):
        diags.append(f"keyword '{name}' cannot be a symbol name")
    return diags


def _duplicates(names: Iterable[str]) -> list[tuple[str, int]]:
    counts: dict[str, int] = {}
    for n in names:
        counts[n] = counts.get(n, 0) + 1
    return sorted((n, c) for n, c in counts.items() if c > 1)


def check_signature(sig: HFOLSignature) -> HFOLSignature:
    diags = validate_signature(sig)
    if diags:
        raise SignatureError("; ".join(diags))
    return sig


# --------------------------------------------------------------------------
# morphisms

@dataclass(frozen=True)
class SignatureMorphism:
    source: HFOLSignature
    target: HFOLSignature
    sorts: Mapping[str, str] = field(default_factory=dict)
    nominals: Mapping[str, str] = field(default_factory=dict)
    modalities: Mapping[str, str] = field(default_factory=dict)
    functions: Mapping[str, str] = field(default_factory=dict)
    relations: Mapping[str, str] = field(default_factory=dict)

    def sort(self, s: str) -> str:
        if s == NOMINAL_SORT:
            return s
        return self.sorts[s]

    def arity(self, ar: Iterable[str]) -> tuple[str, ...]:
        return tuple(self.sort(s) for s in ar)

    def nominal(self, k: str) -> str:
        return self.nominals[k]

    def modality(self, m: str) -> str:
        return self.modalities[m]

    def function(self, f: str) -> str:
        return self.functions[f]

    def relation(self, r: str) -> str:
        return self.relations[r]

    def maps(self) -> tuple[dict, dict, dict, dict, dict]:
        return (dict(self.sorts), dict(self.nominals), dict(self.modalities),
                dict(self.functions), dict(self.relations))

    def __eq__(self, other):
        if not isinstance(other, SignatureMorphism):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.maps() == other.maps())

    __hash__ = None  # type: ignore[assignment]


def identity(sig: HFOLSignature) -> SignatureMorphism:
    return SignatureMorphism(
        sig, sig,
        {s: s for s in sig.base.sorts},
        {k: k for k in sig.nominals},
        {m.name: m.name for m in sig.modalities},
        {f.name: f.name for f in sig.base.functions},
        {r.name: r.name for r in sig.base.relations},
    )


def validate_morphism(chi: SignatureMorphism) -> list[str]:
    src, tgt = chi.source, chi.target
    diags: list[str] = []

    def total(kind: str, names: Iterable[str], mapping: Mapping[str, str], known) -> None:
        for n in sorted(names):
            if n not in mapping:
                diags.append(f"not total: {kind} '{n}' is unmapped")
            elif mapping[n] not in known:
                diags.append(f"unknown target: {kind} '{n}' maps to missing '{mapping[n]}'")
        for n in sorted(set(mapping) - set(names)):
            diags.append(f"unknown source: {kind} '{n}' is not in the source signature")

    total("sort", src.base.sorts, chi.sorts, tgt.base.sorts)
    total("nominal", src.nominals, chi.nominals, tgt.nominals)
    total("modality", src.mod, chi.modalities, tgt.mod)
    total("function", src.fun, chi.functions, tgt.fun)
    total("relation", src.rel, chi.relations, tgt.rel)
    if diags:
        return diags

    for m, a in sorted(src.mod.items()):
        if tgt.mod[chi.modalities[m]] != a:
            diags.append(f"modality arity not preserved: '{m}'/{a} maps to "
                         f"'{chi.modalities[m]}'/{tgt.mod[chi.modalities[m]]}")
    for name, f in sorted(src.fun.items()):
        g = tgt.fun[chi.functions[name]]
        if chi.arity(f.arity) != g.arity or chi.sort(f.result) != g.result:
            diags.append(f"profile mismatch: function '{name}' maps to '{g.name}' with "
                         f"profile {g.arity}->{g.result}, expected "
                         f"{chi.arity(f.arity)}->{chi.sort(f.result)}")
    for name, r in sorted(src.rel.items()):
        q = tgt.rel[chi.relations[name]]
        if chi.arity(r.arity) != q.arity:
            diags.append(f"profile mismatch: relation '{name}' maps to '{q.name}' with "
                         f"arity {q.arity}, expected {chi.arity(r.arity)}")
    for s in sorted(src.rigid.sorts):
        if not tgt.is_rigid_sort(chi.sorts[s]):
            diags.append(f"rigidity not preserved: rigid sort '{s}' maps to flexible '{chi.sorts[s]}'")
    for f in sorted(src.rigid.functions):
        if not tgt.is_rigid_fun(chi.functions[f.name]):
            diags.append(f"rigidity not preserved: rigid function '{f.name}' maps to flexible "
                         f"'{chi.functions[f.name]}'")
    for r in sorted(src.rigid.relations):
        if not tgt.is_rigid_rel(chi.relations[r.name]):
            diags.append(f"rigidity not preserved: rigid relation '{r.name}' maps to flexible "
                         f"'{chi.relations[r.name]}'")
    return diags


def check_morphism(chi: SignatureMorphism) -> SignatureMorphism:
    diags = validate_morphism(chi)
    if diags:
        raise MorphismError("; ".join(diags))
    return chi


def compose(first: SignatureMorphism, second: SignatureMorphism) -> SignatureMorphism:
    """Diagrammatic composition: apply ``first`` then ``second``."""
    if first.target != second.source:
        raise MorphismError("cannot compose: target of the first morphism is not the "
                            "source of the second")
    return SignatureMorphism(
        first.source, second.target,
        {k: second.sorts[v] for k, v in first.sorts.items()},
        {k: second.nominals[v] for k, v in first.nominals.items()},
        {k: second.modalities[v] for k, v in first.modalities.items()},
        {k: second.functions[v] for k, v in first.functions.items()},
        {k: second.relations[v] for k, v in first.relations.items()},
    )


def is_injective_on_sorts(chi: SignatureMorphism) -> bool:
    return len(set(chi.sorts.values())) == len(chi.sorts)


def is_injective_on_nominals(chi: SignatureMorphism) -> bool:
    return len(set(chi.nominals.values())) == len(chi.nominals)


def is_signature_isomorphism(chi: SignatureMorphism) -> bool:
    """Bijective on every kind, with rigidity reflected as well as preserved."""
    src, tgt = chi.source, chi.target
    pairs = [(chi.sorts, tgt.base.sorts), (chi.nominals, tgt.nominals),
             (chi.modalities, tgt.mod), (chi.functions, tgt.fun), (chi.relations, tgt.rel)]
    for mapping, codomain in pairs:
        if len(set(mapping.values())) != len(mapping) or set(mapping.values()) != set(codomain):
            return False
    if validate_morphism(chi):
        return False
    return (len(src.rigid.sorts) == len(tgt.rigid.sorts)
            and len(src.rigid.functions) == len(tgt.rigid.functions)
            and len(src.rigid.relations) == len(tgt.rigid.relations))


def enumerate_morphisms(src: HFOLSignature, tgt: HFOLSignature) -> Iterator[SignatureMorphism]:
    """Every valid morphism ``src -> tgt``, in a deterministic order."""
    src_sorts, tgt_sorts = src.sorts, tgt.sorts
    sort_choices = [[t for t in tgt_sorts if not src.is_rigid_sort(s) or tgt.is_rigid_sort(t)]
                    for s in src_sorts]
    noms = src.nominal_list
    mods = sorted(src.mod)
    mod_choices = [[m for m in sorted(tgt.mod) if tgt.mod[m] == src.mod[n]] for n in mods]
    funs = sorted(src.fun)
    rels = sorted(src.rel)
    for sort_img in itertools.product(*sort_choices):
        smap = dict(zip(src_sorts, sort_img))

        def img(ar):
            return tuple(smap[s] for s in ar)

        fun_choices = []
        for name in funs:
            f = src.fun[name]
            rigid = src.is_rigid_fun(name)
            fun_choices.append([
                g.name for g in sorted(tgt.base.functions)
                if g.arity == img(f.arity) and g.result == smap[f.result]
                and (not rigid or g in tgt.rigid.functions)])
        rel_choices = []
        for name in rels:
            r = src.rel[name]
            rigid = src.is_rigid_rel(name)
            rel_choices.append([
                q.name for q in sorted(tgt.base.relations)
                if q.arity == img(r.arity) and (not rigid or q in tgt.rigid.relations)])
        for nom_img in itertools.product(tgt.nominal_list, repeat=len(noms)):
            for mod_img in itertools.product(*mod_choices):
                for fun_img in itertools.product(*fun_choices):
                    for rel_img in itertools.product(*rel_choices):
                        yield SignatureMorphism(src, tgt, smap, dict(zip(noms, nom_img)),
                                                dict(zip(mods, mod_img)),
                                                dict(zip(funs, fun_img)),
                                                dict(zip(rels, rel_img)))


# --------------------------------------------------------------------------
# rigidification and extensions

def at_name(nominal: str, symbol: str) -> str:
    return f"{symbol}@{nominal}"


def rigidify(sig: HFOLSignature) -> tuple[FOSignature, FOSignature]:
    """Return ``(@Sigma, Sigma-bar)``.

    Rigid symbols are their own @-copies, so they appear un-prefixed in
    ``@Sigma`` and are not duplicated in ``Sigma-bar``.
    """
    def s_at(k, s):
        return s if sig.is_rigid_sort(s) else at_name(k, s)

    at_sorts, at_funs, at_rels = set(), set(), set()
    flex_sorts, flex_funs, flex_rels = set(), set(), set()
    for k in sig.nominals:
        for s in sig.base.sorts:
            at_sorts.add(s_at(k, s))
            if not sig.is_rigid_sort(s):
                flex_sorts.add(at_name(k, s))
        for f in sig.base.functions:
            if f in sig.rigid.functions:
                at_funs.add(f)
            else:
                g = FunSym(at_name(k, f.name), tuple(s_at(k, s) for s in f.arity), s_at(k, f.result))
                at_funs.add(g)
                flex_funs.add(g)
        for r in sig.base.relations:
            if r in sig.rigid.relations:
                at_rels.add(r)
            else:
                q = RelSym(at_name(k, r.name), tuple(s_at(k, s) for s in r.arity))
                at_rels.add(q)
                flex_rels.add(q)
    at_sig = FOSignature(frozenset(at_sorts), frozenset(at_funs), frozenset(at_rels))
    bar = FOSignature(sig.base.sorts | flex_sorts, sig.base.functions | flex_funs,
                      sig.base.relations | flex_rels)
    return at_sig, bar


@dataclass(frozen=True)
class SignatureExtension:
    base: HFOLSignature
    added: tuple[tuple[str, str], ...]
    signature: HFOLSignature
    inclusion: SignatureMorphism

    @property
    def nominal_vars(self) -> tuple[str, ...]:
        return tuple(n for n, s in self.added if s == NOMINAL_SORT)

    @property
    def rigid_vars(self) -> tuple[tuple[str, str], ...]:
        return tuple((n, s) for n, s in self.added if s != NOMINAL_SORT)


def inclusion(small: HFOLSignature, big: HFOLSignature) -> SignatureMorphism:
    chi = SignatureMorphism(
        small, big,
        {s: s for s in small.base.sorts},
        {k: k for k in small.nominals},
        {m.name: m.name for m in small.modalities},
        {f.name: f.name for f in small.base.functions},
        {r.name: r.name for r in small.base.relations},
    )
    return check_morphism(chi)


def extend(sig: HFOLSignature, variables: Iterable[tuple[str, str]]) -> SignatureExtension:
    """Add nominal variables as nominals and rigid variables as rigid constants."""
    added = tuple(sorted(set(variables)))
    names = [n for n, _ in added]
    if len(set(names)) != len(names):
        raise SignatureError("variable names must be distinct")
    nominals = set(sig.nominals)
    funs, rfuns = set(sig.base.functions), set(sig.rigid.functions)
    for name, sort in added:
        if name in sig.symbol_names:
            raise SignatureError(f"name clash: '{name}' is already a symbol of the signature")
        if sort == NOMINAL_SORT:
            nominals.add(name)
        elif sig.is_rigid_sort(sort):
            f = FunSym(name, (), sort)
            funs.add(f)
            rfuns.add(f)
        elif sort in sig.base.sorts:
            raise SignatureError(f"variable '{name}' has flexible sort '{sort}'; only rigid "
                                 f"sorts and '{NOMINAL_SORT}' may be bound")
        else:
            raise SignatureError(f"variable '{name}' has unknown sort '{sort}'")
    new = HFOLSignature(frozenset(nominals), sig.modalities,
                        FOSignature(sig.base.sorts, frozenset(funs), sig.base.relations),
                        FOSignature(sig.rigid.sorts, frozenset(rfuns), sig.rigid.relations))
    return SignatureExtension(sig, added, new, inclusion(sig, new))


# --------------------------------------------------------------------------
# colimits

def _fresh(name: str, used: set[str]) -> str:
    cand = name
    i = 2
    while cand in used:
        cand = f"{name}#{i}"
        i += 1
    return cand


_GROUPS = ("sort", "fun", "atom")


def _names_by_group(sig: HFOLSignature) -> dict[str, set[str]]:
    return {
        "sort": set(sig.base.sorts),
        "fun": set(sig.fun),
        "atom": set(sig.nominals) | set(sig.mod) | set(sig.rel),
    }


def coproduct(left: HFOLSignature, right: HFOLSignature):
    """Disjoint union; names present on both sides get tags ``#1`` / ``#2``.

    Returns ``(signature, inj1, inj2)``.
    """
    ln, rn = _names_by_group(left), _names_by_group(right)
    renames: list[dict[str, dict[str, str]]] = [{}, {}]
    for g in _GROUPS:
        clash = ln[g] & rn[g]
        used = ln[g] | rn[g]
        for side, names in enumerate((ln[g], rn[g])):
            ren = {}
            for n in sorted(names):
                if n in clash:
                    ren[n] = _fresh(f"{n}#{side + 1}", used)
                    used.add(ren[n])
                else:
                    ren[n] = n
            renames[side][g] = ren

    def rename_all(sig, ren):
        s, f, a = ren["sort"], ren["fun"], ren["atom"]

        def rf(x):
            return FunSym(f[x.name], tuple(s[y] for y in x.arity), s[x.result])

        def rr(x):
            return RelSym(a[x.name], tuple(s[y] for y in x.arity))
        return (frozenset(a[k] for k in sig.nominals),
                frozenset(Modality(a[m.name], m.arity) for m in sig.modalities),
                FOSignature(frozenset(s[x] for x in sig.base.sorts),
                            frozenset(rf(x) for x in sig.base.functions),
                            frozenset(rr(x) for x in sig.base.relations)),
                FOSignature(frozenset(s[x] for x in sig.rigid.sorts),
                            frozenset(rf(x) for x in sig.rigid.functions),
                            frozenset(rr(x) for x in sig.rigid.relations)))

    parts = [rename_all(left, renames[0]), rename_all(right, renames[1])]
    union = HFOLSignature(
        parts[0][0] | parts[1][0], parts[0][1] | parts[1][1],
        FOSignature(*(a | b for a, b in zip(_fo_tuple(parts[0][2]), _fo_tuple(parts[1][2])))),
        FOSignature(*(a | b for a, b in zip(_fo_tuple(parts[0][3]), _fo_tuple(parts[1][3])))),
    )
    injections = []
    for sig, ren in ((left, renames[0]), (right, renames[1])):
        injections.append(check_morphism(SignatureMorphism(
            sig, union,
            {x: ren["sort"][x] for x in sig.base.sorts},
            {x: ren["atom"][x] for x in sig.nominals},
            {x: ren["atom"][x] for x in sig.mod},
            {x: ren["fun"][x] for x in sig.fun},
            {x: ren["atom"][x] for x in sig.rel},
        )))
    return union, injections[0], injections[1]


def _fo_tuple(fo: FOSignature):
    return fo.sorts, fo.functions, fo.relations


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def classes(self):
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return sorted(sorted(v) for v in out.values())


@dataclass(frozen=True)
class Pushout:
    chi1: SignatureMorphism
    chi2: SignatureMorphism
    signature: HFOLSignature
    upsilon1: SignatureMorphism
    upsilon2: SignatureMorphism


def pushout(chi1: SignatureMorphism, chi2: SignatureMorphism) -> Pushout:
    """Pushout of the span ``Delta1 <-chi1- Delta -chi2-> Delta2``.

    Each kind is quotiented by the equivalence generated by chi1(x) ~ chi2(x).
    A class is named after its least member from the left signature (or the
    right one when it has no left member); a class is rigid when any member
    is rigid.
    """
    if chi1.source != chi2.source:
        raise MorphismError("span legs have different sources")
    for chi in (chi1, chi2):
        check_morphism(chi)
    d1, d2 = chi1.target, chi2.target
    kinds = {
        "sort": (d1.base.sorts, d2.base.sorts, chi1.sorts, chi2.sorts),
        "nominal": (d1.nominals, d2.nominals, chi1.nominals, chi2.nominals),
        "modality": (d1.mod, d2.mod, chi1.modalities, chi2.modalities),
        "fun": (d1.fun, d2.fun, chi1.functions, chi2.functions),
        "rel": (d1.rel, d2.rel, chi1.relations, chi2.relations),
    }
    classes: dict[str, list[list[tuple[int, str]]]] = {}
    for kind, (n1, n2, m1, m2) in kinds.items():
        uf = _UnionFind([(1, x) for x in n1] + [(2, x) for x in n2])
        for x in m1:
            uf.union((1, m1[x]), (2, m2[x]))
        classes[kind] = uf.classes()

    group_of = {"sort": "sort", "fun": "fun", "nominal": "atom", "modality": "atom", "rel": "atom"}
    names: dict[str, dict[tuple[int, str], str]] = {k: {} for k in kinds}
    for g in _GROUPS:
        entries = []
        for kind in kinds:
            if group_of[kind] != g:
                continue
            for cls in classes[kind]:
                left = [x for side, x in cls if side == 1]
                cand = min(left) if left else min(x for _, x in cls)
                entries.append((0 if left else 1, cand, kind, cls))
        used: set[str] = set()
        for _, cand, kind, cls in sorted(entries, key=lambda e: (e[0], e[1], e[2])):
            name = _fresh(cand, used)
            used.add(name)
            for member in cls:
                names[kind][member] = name

    sigs = {1: d1, 2: d2}
    sort_name = names["sort"]
    sorts, rsorts = set(), set()
    for cls in classes["sort"]:
        n = sort_name[cls[0]]
        sorts.add(n)
        if any(sigs[side].is_rigid_sort(x) for side, x in cls):
            rsorts.add(n)

    def profile(side, ar):
        return tuple(sort_name[(side, s)] for s in ar)

    funs, rfuns = set(), set()
    for cls in classes["fun"]:
        profiles = {(profile(side, sigs[side].fun[x].arity),
                     sort_name[(side, sigs[side].fun[x].result)]) for side, x in cls}
        if len(profiles) != 1:
            raise MorphismError(f"profile conflict in class {cls}: {sorted(profiles)}")
        (ar, res), = profiles
        f = FunSym(names["fun"][cls[0]], ar, res)
        funs.add(f)
        if any(sigs[side].is_rigid_fun(x) for side, x in cls):
            rfuns.add(f)
    rels, rrels = set(), set()
    for cls in classes["rel"]:
        profiles = {profile(side, sigs[side].rel[x].arity) for side, x in cls}
        if len(profiles) != 1:
            raise MorphismError(f"profile conflict in class {cls}: {sorted(profiles)}")
        (ar,) = profiles
        r = RelSym(names["rel"][cls[0]], ar)
        rels.add(r)
        if any(sigs[side].is_rigid_rel(x) for side, x in cls):
            rrels.add(r)
    mods = set()
    for cls in classes["modality"]:
        arities = {sigs[side].mod[x] for side, x in cls}
        if len(arities) != 1:
            raise MorphismError(f"modality arity conflict in class {cls}")
        mods.add(Modality(names["modality"][cls[0]], arities.pop()))
    noms = {names["nominal"][cls[0]] for cls in classes["nominal"]}

    result = HFOLSignature(frozenset(noms), frozenset(mods),
                           FOSignature(frozenset(sorts), frozenset(funs), frozenset(rels)),
                           FOSignature(frozenset(rsorts), frozenset(rfuns), frozenset(rrels)))
    legs = []
    for side, sig in ((1, d1), (2, d2)):
        legs.append(check_morphism(SignatureMorphism(
            sig, result,
            {x: names["sort"][(side, x)] for x in sig.base.sorts},
            {x: names["nominal"][(side, x)] for x in sig.nominals},
            {x: names["modality"][(side, x)] for x in sig.mod},
            {x: names["fun"][(side, x)] for x in sig.fun},
            {x: names["rel"][(side, x)] for x in sig.rel},
        )))
    return Pushout(chi1, chi2, result, legs[0], legs[1])


def mediator(po: Pushout, theta1: SignatureMorphism, theta2: SignatureMorphism) -> SignatureMorphism:
    """The unique morphism out of the pushout vertex through which a cocone factors."""
    if theta1.source != po.upsilon1.source or theta2.source != po.upsilon2.source:
        raise MorphismError("cocone legs do not start at the span's targets")
    if theta1.target != theta2.target:
        raise MorphismError("cocone legs have different targets")
    if compose(po.chi1, theta1) != compose(po.chi2, theta2):
        raise MorphismError("cocone does not commute over the span")
    target = theta1.target
    legs = ((po.upsilon1, theta1), (po.upsilon2, theta2))
    maps: list[dict[str, str]] = [{} for _ in range(5)]
    for ups, theta in legs:
        for i, (um, tm) in enumerate(zip(ups.maps(), theta.maps())):
            for x, cls in um.items():
                prev = maps[i].setdefault(cls, tm[x])
                if prev != tm[x]:
                    raise MorphismError(f"cocone does not factor: class '{cls}' has images "
                                        f"'{prev}' and '{tm[x]}'")
    mu = SignatureMorphism(po.signature, target, *maps)
    return check_morphism(mu)
