"""Seeded random generators for signatures, morphisms, models, terms and sentences.

Every generator takes a :class:`random.Random` so that instance streams are
reproducible from a seed.
"""

from __future__ import annotations

import itertools
import random
from typing import Mapping

from .relativize import RelativizedUnion
from .semantics.kripke import KripkeStructure, WorldStructure
from .semantics.reachability import ReplacementPlan, unreachable_elements
from .signature import (NOMINAL_SORT, FOSignature, FunSym, HFOLSignature, Modality, RelSym,
                        SignatureExtension, SignatureMorphism, check_morphism, check_signature,
                        extend)
from .syntax import (FALSE, TRUE, And, AtSort, At, Box, Diamond, Eq, Exists, Fn, Forall, Iff,
                     Implies, KEYWORDS, Nominal, Not, Or, Prop, Rel, Sentence, Store, Var,
                     at_sort, fresh_name)


# --------------------------------------------------------------------------
# signatures

def random_signature(rng: random.Random, *, max_nominals: int = 2, max_sorts: int = 2,
                     max_functions: int = 3, max_relations: int = 1, max_modalities: int = 2,
                     max_arity: int = 2, rigid_bias: float = 0.4, prefix: str = "") -> HFOLSignature:
    """A random valid signature; names carry ``prefix`` so two calls can be kept apart."""
    n_sorts = rng.randint(1, max_sorts)
    sorts = {f"{prefix}s{i}": rng.random() < rigid_bias for i in range(n_sorts)}
    nominals = [f"{prefix}k{i}" for i in range(rng.randint(1, max_nominals))]
    mods = []
    for i in range(rng.randint(0, max_modalities)):
        mods.append(Modality(f"{prefix}m{i}", 1) if rng.random() < 0.5 else
                    Modality(f"{prefix}l{i}", 2))
    funs, rfuns = set(), set()
    names = sorted(sorts)
    for i in range(rng.randint(0, max_functions)):
        arity = tuple(rng.choice(names) for _ in range(rng.randint(0, max_arity)))
        f = FunSym(f"{prefix}f{i}", arity, rng.choice(names))
        funs.add(f)
        if all(sorts[s] for s in arity + (f.result,)) and rng.random() < 0.5:
            rfuns.add(f)
    rels, rrels = set(), set()
    for i in range(rng.randint(0, max_relations)):
        r = RelSym(f"{prefix}p{i}", tuple(rng.choice(names) for _ in range(rng.randint(0, max_arity))))
        rels.add(r)
        if all(sorts[s] for s in r.arity) and rng.random() < 0.5:
            rrels.add(r)
    sig = HFOLSignature(frozenset(nominals), frozenset(mods),
                        FOSignature(frozenset(sorts), frozenset(funs), frozenset(rels)),
                        FOSignature(frozenset(s for s, r in sorts.items() if r),
                                    frozenset(rfuns), frozenset(rrels)))
    return check_signature(sig)


# --------------------------------------------------------------------------
# morphisms

def random_morphism(rng: random.Random, src: HFOLSignature, *, injective: bool = False,
                    protecting: bool = False, extra: bool = True, prefix: str = "t"
                    ) -> SignatureMorphism:
    """A random morphism out of ``src`` into a freshly built target.

    ``injective`` keeps sorts and nominals apart; ``protecting`` additionally
    makes the morphism protect flexible symbols.  ``extra`` allows the
    target to have symbols outside the image.
    """
    if protecting:
        injective = True
    merge = 0.0 if injective else 0.35
    src_sorts = sorted(src.sorts)

    def group(items, p_merge):
        classes: list[list] = []
        for x in items:
            if classes and rng.random() < p_merge:
                rng.choice(classes).append(x)
            else:
                classes.append([x])
        return classes

    sort_classes = group(src_sorts, merge)
    sort_map, tgt_sorts = {}, {}
    for i, cls in enumerate(sort_classes):
        name = f"{prefix}s{i}"
        rigid = any(src.is_rigid_sort(s) for s in cls)
        if not rigid and not protecting and rng.random() < 0.2:
            rigid = True  # a flexible sort may become rigid
        tgt_sorts[name] = rigid
        for s in cls:
            sort_map[s] = name
    if extra and rng.random() < 0.4:
        tgt_sorts[f"{prefix}s{len(sort_classes)}"] = rng.random() < 0.5

    nom_classes = group(sorted(src.nominals), merge)
    nom_map = {k: f"{prefix}k{i}" for i, cls in enumerate(nom_classes) for k in cls}
    tgt_noms = set(nom_map.values())
    if extra and rng.random() < 0.5:
        tgt_noms.add(f"{prefix}k{len(nom_classes)}")

    mod_map, tgt_mods = {}, set()
    for arity in (1, 2):
        names = sorted(m for m, a in src.mod.items() if a == arity)
        for i, cls in enumerate(group(names, 0.0 if protecting else merge)):
            name = f"{prefix}{'m' if arity == 1 else 'l'}{i}"
            tgt_mods.add(Modality(name, arity))
            for m in cls:
                mod_map[m] = name
    if extra and rng.random() < 0.3:
        tgt_mods.add(Modality(f"{prefix}mx", 1))

    def image(ar):
        return tuple(sort_map[s] for s in ar)

    flexible_src = set(src.flexible_sorts)
    fun_map, tgt_funs, tgt_rfuns = {}, {}, set()
    by_profile: dict = {}
    for name, f in sorted(src.fun.items()):
        by_profile.setdefault((image(f.arity), sort_map[f.result]), []).append(name)
    counter = itertools.count()
    for (ar, res), names in sorted(by_profile.items()):
        p = merge
        if protecting and (set(src.fun[names[0]].arity) & flexible_src
                           or src.fun[names[0]].result in flexible_src):
            p = 0.0
        for cls in group(names, p):
            t = f"{prefix}f{next(counter)}"
            tgt_funs[t] = FunSym(t, ar, res)
            rigid = any(src.is_rigid_fun(x) for x in cls)
            if not rigid and all(tgt_sorts[s] for s in ar + (res,)) and rng.random() < 0.3:
                rigid = True
            if rigid:
                tgt_rfuns.add(t)
            for x in cls:
                fun_map[x] = t
    if extra and rng.random() < 0.5:
        names = sorted(tgt_sorts)
        ar = tuple(rng.choice(names) for _ in range(rng.randint(0, 1)))
        res = rng.choice(names)
        flex_images = {sort_map[s] for s in flexible_src}
        if not (protecting and res in flex_images):
            t = f"{prefix}f{next(counter)}"
            tgt_funs[t] = FunSym(t, ar, res)
            if all(tgt_sorts[s] for s in ar + (res,)) and rng.random() < 0.5:
                tgt_rfuns.add(t)

    rel_map, tgt_rels, tgt_rrels = {}, {}, set()
    by_arity: dict = {}
    for name, r in sorted(src.rel.items()):
        by_arity.setdefault(image(r.arity), []).append(name)
    counter = itertools.count()
    for ar, names in sorted(by_arity.items()):
        p = 0.0 if protecting and set(src.rel[names[0]].arity) & flexible_src else merge
        for cls in group(names, p):
            t = f"{prefix}p{next(counter)}"
            tgt_rels[t] = RelSym(t, ar)
            rigid = any(src.is_rigid_rel(x) for x in cls)
            if rigid:
                tgt_rrels.add(t)
            for x in cls:
                rel_map[x] = t

    target = HFOLSignature(
        frozenset(tgt_noms), frozenset(tgt_mods),
        FOSignature(frozenset(tgt_sorts), frozenset(tgt_funs.values()), frozenset(tgt_rels.values())),
        FOSignature(frozenset(s for s, r in tgt_sorts.items() if r),
                    frozenset(tgt_funs[t] for t in tgt_rfuns),
                    frozenset(tgt_rels[t] for t in tgt_rrels)))
    check_signature(target)
    return check_morphism(SignatureMorphism(src, target, sort_map, nom_map, mod_map,
                                            fun_map, rel_map))


# --------------------------------------------------------------------------
# models

def _table(rng, domain, codomain) -> dict:
    return {args: rng.choice(codomain) for args in domain}


def random_model(rng: random.Random, sig: HFOLSignature, *, max_worlds: int = 3,
                 max_carrier: int = 3, worlds: list[str] | None = None,
                 density: float = 0.5) -> KripkeStructure:
    worlds = list(worlds) if worlds is not None else \
        [f"w{i}" for i in range(rng.randint(1, max_worlds))]
    nominals = {k: rng.choice(worlds) for k in sorted(sig.nominals)}
    mods = {}
    for m, arity in sorted(sig.mod.items()):
        pool = worlds if arity == 1 else list(itertools.product(worlds, worlds))
        mods[m] = frozenset(x for x in pool if rng.random() < density)
    rigid_carriers = {s: frozenset(f"e{i}" for i in range(rng.randint(1, max_carrier)))
                      for s in sig.rigid_sorts}
    carriers = {}
    for w in worlds:
        c = dict(rigid_carriers)
        for s in sig.flexible_sorts:
            c[s] = frozenset(f"e{i}" for i in range(rng.randint(1, max_carrier)))
        carriers[w] = c
    shared_funs, shared_rels = {}, {}
    first = worlds[0]
    for name, f in sorted(sig.fun.items()):
        if sig.is_rigid_fun(name):
            dom = list(itertools.product(*(sorted(carriers[first][s]) for s in f.arity)))
            shared_funs[name] = _table(rng, dom, sorted(carriers[first][f.result]))
    for name, r in sorted(sig.rel.items()):
        if sig.is_rigid_rel(name):
            dom = itertools.product(*(sorted(carriers[first][s]) for s in r.arity))
            shared_rels[name] = frozenset(t for t in dom if rng.random() < density)
    structures = {}
    for w in worlds:
        funs, rels = dict(shared_funs), dict(shared_rels)
        for name, f in sorted(sig.fun.items()):
            if name not in funs:
                dom = list(itertools.product(*(sorted(carriers[w][s]) for s in f.arity)))
                funs[name] = _table(rng, dom, sorted(carriers[w][f.result]))
        for name, r in sorted(sig.rel.items()):
            if name not in rels:
                dom = itertools.product(*(sorted(carriers[w][s]) for s in r.arity))
                rels[name] = frozenset(t for t in dom if rng.random() < density)
        structures[w] = WorldStructure(carriers[w], funs, rels)
    return KripkeStructure(sig, tuple(worlds), nominals, mods, structures)


def random_expansion(rng: random.Random, model: KripkeStructure, chi: SignatureMorphism,
                     max_carrier: int = 3) -> KripkeStructure:
    """A random model over ``chi.target`` whose ``chi``-reduct is ``model``.

    Requires ``chi`` injective on sorts, nominals and modalities and with
    distinct images for distinct symbols, so the reduct pins down the image.
    Flexible symbols must stay flexible, since ``model`` may interpret them
    differently at different worlds.
    """
    tgt = chi.target
    inv_sort = {t: s for s, t in chi.sorts.items()}
    inv_fun = {t: f for f, t in chi.functions.items()}
    inv_rel = {t: r for r, t in chi.relations.items()}
    inv_nom = {t: k for k, t in chi.nominals.items()}
    inv_mod = {t: m for m, t in chi.modalities.items()}
    worlds = list(model.worlds)
    nominals = {k: model.nominals[inv_nom[k]] if k in inv_nom else rng.choice(worlds)
                for k in tgt.nominals}
    mods = {}
    for m, arity in tgt.mod.items():
        if m in inv_mod:
            mods[m] = model.modalities[inv_mod[m]]
        else:
            pool = worlds if arity == 1 else list(itertools.product(worlds, worlds))
            mods[m] = frozenset(x for x in pool if rng.random() < 0.5)
    new_rigid = {s: frozenset(f"e{i}" for i in range(rng.randint(1, max_carrier)))
                 for s in tgt.rigid_sorts if s not in inv_sort}
    shared_f, shared_r = {}, {}
    structures = {}
    for w in worlds:
        ws = model.structures[w]
        carriers = {}
        for s in tgt.sorts:
            if s in inv_sort:
                carriers[s] = ws.carriers[inv_sort[s]]
            elif s in new_rigid:
                carriers[s] = new_rigid[s]
            else:
                carriers[s] = frozenset(f"e{i}" for i in range(rng.randint(1, max_carrier)))
        funs, rels = {}, {}
        for name, f in tgt.fun.items():
            if name in inv_fun:
                funs[name] = ws.functions[inv_fun[name]]
            elif tgt.is_rigid_fun(name) and name in shared_f:
                funs[name] = shared_f[name]
            else:
                dom = list(itertools.product(*(sorted(carriers[s]) for s in f.arity)))
                funs[name] = _table(rng, dom, sorted(carriers[f.result]))
                if tgt.is_rigid_fun(name):
                    shared_f[name] = funs[name]
        for name, r in tgt.rel.items():
            if name in inv_rel:
                rels[name] = ws.relations[inv_rel[name]]
            elif tgt.is_rigid_rel(name) and name in shared_r:
                rels[name] = shared_r[name]
            else:
                dom = itertools.product(*(sorted(carriers[s]) for s in r.arity))
                rels[name] = frozenset(t for t in dom if rng.random() < 0.5)
                if tgt.is_rigid_rel(name):
                    shared_r[name] = rels[name]
        structures[w] = WorldStructure(carriers, funs, rels)
    return KripkeStructure(tgt, tuple(worlds), nominals, mods, structures)


def random_union_model(rng: random.Random, u: RelativizedUnion, *, max_worlds: int = 3,
                       max_carrier: int = 2, overlap: float = 0.3) -> KripkeStructure:
    """A random model of the union axioms; the parts may share worlds."""
    base = random_model(rng, u.signature, max_worlds=max_worlds, max_carrier=max_carrier)
    worlds = list(base.worlds)
    pi1, pi2 = set(), set()
    for w in worlds:
        r = rng.random()
        if r < overlap:
            pi1.add(w)
            pi2.add(w)
        elif r < overlap + (1 - overlap) / 2:
            pi1.add(w)
        else:
            pi2.add(w)
    if not pi1:
        pi1.add(rng.choice(worlds))
    if not pi2:
        pi2.add(rng.choice(worlds))
    mods = dict(base.modalities)
    mods[u.marker(1)] = frozenset(pi1)
    mods[u.marker(2)] = frozenset(pi2)
    nominals = dict(base.nominals)
    for i, part in ((1, pi1), (2, pi2)):
        inj = u.injection(i)
        pool = sorted(part)
        for k in inj.source.nominals:
            nominals[inj.nominals[k]] = rng.choice(pool)
        nominals[u.witness(i)] = rng.choice(pool)
    return KripkeStructure(u.signature, base.worlds, nominals, mods, base.structures)


def random_swap_plan(rng: random.Random, model: KripkeStructure,
                     max_new: int = 2) -> ReplacementPlan | None:
    """A plan dropping some unreachable elements and adding fresh ones; None if impossible."""
    sig = model.signature
    unreach = unreachable_elements(model)
    remove, add = {}, {}
    for w in model.worlds:
        for s in sig.flexible_sorts:
            gone = {e for e in sorted(unreach[w][s]) if rng.random() < 0.5}
            if len(gone) == len(model.structures[w].carriers[s]):
                gone.discard(min(gone))
            if gone:
                remove[(w, s)] = gone
            n_new = rng.randint(0, max_new)
            if n_new:
                add[(w, s)] = {f"u{i}" for i in range(n_new)} - set(model.structures[w].carriers[s])
    if not remove and not add:
        return None
    fills = {}
    for w in model.worlds:
        ws = model.structures[w]
        carriers = {s: (set(ws.carriers[s]) - remove.get((w, s), set())) | add.get((w, s), set())
                    for s in sig.sorts}
        for name, f in sig.fun.items():
            table = {}
            for args in itertools.product(*(sorted(carriers[s]) for s in f.arity)):
                if args not in ws.functions[name]:
                    table[args] = rng.choice(sorted(carriers[f.result]))
            if table:
                fills[(w, name)] = table
    return ReplacementPlan(remove=remove, add=add, fills=fills)


# --------------------------------------------------------------------------
# terms and sentences

class SentenceGenerator:
    """Random well-formed terms and sentences over a signature."""

    CONSTRUCTORS = ("nominal", "prop", "eq", "rel", "const", "at", "not", "or", "store",
                    "exists", "diamond", "and", "implies", "iff", "forall", "box")

    def __init__(self, sig: HFOLSignature, rng: random.Random, *, sugar: bool = True,
                 term_depth: int = 2, extra_avoid=()):
        self.sig = sig
        self.rng = rng
        self.sugar = sugar
        self.term_depth = term_depth
        self.avoid = set(sig.symbol_names) | set(sig.base.sorts) | KEYWORDS | set(extra_avoid)

    # scope: dict name -> sort
    def _nominals(self, scope):
        return sorted(self.sig.nominals) + sorted(n for n, s in scope.items() if s == NOMINAL_SORT)

    def term(self, sort, scope, depth: int | None = None):
        """A random term of hybrid sort ``sort`` or None if there is none within the depth."""
        depth = self.term_depth if depth is None else depth
        if depth <= 0:
            return None
        sig, rng = self.sig, self.rng
        options = []
        plain = sort if isinstance(sort, str) else None
        if plain is not None:
            options += [("var", n) for n, s in sorted(scope.items()) if s == plain]
            for name, f in sorted(sig.fun.items()):
                if f.result == plain:
                    options.append(("fn", name, None))
            if sig.is_rigid_sort(plain):
                for name, f in sorted(sig.fun.items()):
                    if f.result == plain and not sig.is_rigid_fun(name):
                        options += [("fn", name, k) for k in self._nominals(scope)]
        else:
            for name, f in sorted(sig.fun.items()):
                if f.result == sort.sort and not sig.is_rigid_fun(name):
                    options.append(("fn", name, sort.nominal))
        rng.shuffle(options)
        for opt in options:
            if opt[0] == "var":
                return Var(opt[1])
            _, name, at = opt
            f = sig.fun[name]
            if f.arity and depth <= 1:
                continue
            args = []
            for s in f.arity:
                want = s if at is None else at_sort(sig, at, s)
                a = self.term(want, scope, depth - 1)
                if a is None:
                    break
                args.append(a)
            else:
                return Fn(name, tuple(args), at)
        return None

    def _fresh(self, scope, base):
        name = fresh_name(base, self.avoid | set(scope))
        return name

    def _atom(self, scope) -> Sentence:
        sig, rng = self.sig, self.rng
        for _ in range(8):
            kind = rng.choice(("nominal", "prop", "eq", "eq", "rel", "const"))
            if kind == "nominal":
                noms = self._nominals(scope)
                if noms:
                    return Nominal(rng.choice(noms))
            elif kind == "prop":
                props = sig.unary_modalities()
                if props:
                    return Prop(rng.choice(props))
            elif kind == "eq":
                sorts = sorted(sig.sorts)
                if not sorts:
                    continue
                s = rng.choice(sorts)
                hs = s
                if not sig.is_rigid_sort(s) and rng.random() < 0.4 and self._nominals(scope):
                    hs = AtSort(rng.choice(self._nominals(scope)), s)
                t1, t2 = self.term(hs, scope), self.term(hs, scope)
                if t1 is not None and t2 is not None:
                    return Eq(t1, t2)
            elif kind == "rel":
                if not sig.rel:
                    continue
                name = rng.choice(sorted(sig.rel))
                r = sig.rel[name]
                at = None
                if not sig.is_rigid_rel(name) and rng.random() < 0.3 and self._nominals(scope):
                    at = rng.choice(self._nominals(scope))
                args = [self.term(s if at is None else at_sort(sig, at, s), scope) for s in r.arity]
                if all(a is not None for a in args):
                    return Rel(name, tuple(args), at)
            else:
                return rng.choice((TRUE, FALSE))
        return rng.choice((TRUE, FALSE))

    def sentence(self, depth: int, scope: Mapping[str, str] | None = None) -> Sentence:
        scope = dict(scope or {})
        return self._sentence(depth, scope)

    def _sentence(self, depth: int, scope: dict) -> Sentence:
        sig, rng = self.sig, self.rng
        if depth <= 1:
            return self._atom(scope)
        kinds = ["atom", "at", "not", "or", "store", "exists", "diamond"]
        if self.sugar:
            kinds += ["and", "implies", "iff", "forall", "box"]
        for _ in range(8):
            kind = rng.choice(kinds)
            sub = lambda sc=scope: self._sentence(rng.randint(1, depth - 1), sc)  # noqa: E731
            if kind == "atom":
                return self._atom(scope)
            if kind == "at":
                noms = self._nominals(scope)
                if noms:
                    return At(rng.choice(noms), sub())
            elif kind == "not":
                return Not(sub())
            elif kind in ("or", "and"):
                n = rng.choice((0, 1, 2, 2, 2, 3))
                items = tuple(sub() for _ in range(n))
                return Or(items) if kind == "or" else And(items)
            elif kind in ("diamond", "box"):
                mods = sig.binary_modalities()
                if mods:
                    return (Diamond if kind == "diamond" else Box)(rng.choice(mods), sub())
            elif kind == "store":
                z = self._fresh(scope, "z")
                inner = dict(scope)
                inner[z] = NOMINAL_SORT
                return Store(z, sub(inner))
            elif kind in ("exists", "forall"):
                choices = [NOMINAL_SORT] + list(sig.rigid_sorts)
                variables = []
                inner = dict(scope)
                for _ in range(rng.choice((1, 1, 2))):
                    s = rng.choice(choices)
                    x = self._fresh(inner, "z" if s == NOMINAL_SORT else "x")
                    inner[x] = s
                    variables.append((x, s))
                return (Exists if kind == "exists" else Forall)(tuple(variables), sub(inner))
            elif kind == "implies":
                return Implies(sub(), sub())
            elif kind == "iff":
                return Iff(sub(), sub())
        return self._atom(scope)


def random_sentence(rng: random.Random, sig: HFOLSignature, depth: int, *,
                    sugar: bool = True, scope: Mapping[str, str] | None = None) -> Sentence:
    return SentenceGenerator(sig, rng, sugar=sugar).sentence(depth, scope)


def random_extension(rng: random.Random, sig: HFOLSignature, *, max_nominals: int = 2,
                     max_constants: int = 2) -> SignatureExtension:
    added = []
    used = set(sig.symbol_names) | set(sig.base.sorts)
    for i in range(rng.randint(0, max_nominals)):
        added.append((fresh_name("zc", used), NOMINAL_SORT))
        used.add(added[-1][0])
    rigid = list(sig.rigid_sorts)
    for i in range(rng.randint(0, max_constants) if rigid else 0):
        added.append((fresh_name("yc", used), rng.choice(rigid)))
        used.add(added[-1][0])
    return extend(sig, added)


# --------------------------------------------------------------------------
# lifting instances

def rename_elements(rng: random.Random, model: KripkeStructure, tag: str) -> KripkeStructure:
    """Rename worlds and elements; rigid carriers are renamed the same way at every world."""
    from .semantics.kripke import KripkeHomomorphism, relabel
    sig = model.signature
    frame = {w: f"{tag}{w}" for w in model.worlds}

    def perm(es):
        es = sorted(es)
        shuffled = es[:]
        rng.shuffle(shuffled)
        return {e: f"{tag}{x}" for e, x in zip(es, shuffled)}

    rigid = {s: perm(model.rigid_carrier(s)) for s in sig.rigid_sorts}
    maps = {w: {s: rigid[s] if s in rigid else perm(model.structures[w].carriers[s])
                for s in sig.sorts} for w in model.worlds}
    return relabel(model, KripkeHomomorphism(model, None, frame, maps))


def random_lift_instance(rng: random.Random, *, max_worlds: int = 3, max_carrier: int = 2):
    """A valid input ``(chi, ext1, v1, wm)`` for :func:`hfol.squares.lift_expansion`.

    ``chi`` protects flexible symbols, ``v1`` is reachable by the added
    constants, and ``wm`` is the reduct of ``v1`` with unreachable elements
    swapped and every world and element renamed.
    """
    from .semantics.kripke import expand, reduct
    from .semantics.reachability import swap_unreachable
    from .squares import lift_context
    sig = random_signature(rng)
    chi = random_morphism(rng, sig, protecting=True)
    sig1 = chi.target
    m1 = random_model(rng, sig1, max_worlds=max_worlds, max_carrier=max_carrier)
    used = set(sig1.symbol_names) | set(sig1.sorts)
    added, values = [], {}
    worlds = list(m1.worlds)
    rng.shuffle(worlds)
    extra = [rng.choice(worlds)] if rng.random() < 0.3 else []
    for w in worlds + extra:
        name = fresh_name("zc", used)
        used.add(name)
        added.append((name, NOMINAL_SORT))
        values[name] = w
    for s in sig1.rigid_sorts:
        elems = m1.rigid_carrier(s)
        extra = [rng.choice(elems)] if rng.random() < 0.3 else []
        for e in elems + extra:
            name = fresh_name("yc", used)
            used.add(name)
            added.append((name, s))
            values[name] = e
    ext1 = extend(sig1, added)
    v1 = expand(m1, ext1, values)
    _, chi_c = lift_context(chi, ext1)
    n = reduct(chi_c, v1)
    plan = random_swap_plan(rng, n)
    wm = swap_unreachable(n, plan) if plan is not None else n
    return chi, ext1, v1, rename_elements(rng, wm, "x")
