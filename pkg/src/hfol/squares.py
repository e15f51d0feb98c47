"""Spans, squares and the constructions around joint consistency.

* :func:`preserves_flexible` / :func:`protects_flexible` check the conditions
  a span leg needs so that expansions can be lifted along it.
* :func:`lift_expansion` runs the three-step lifting construction on finite
  reachable models.
* :func:`amalgamate` glues two models over a pushout whose reducts agree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import AmalgamationError, LiftError
from .semantics.kripke import (KripkeHomomorphism, KripkeStructure, WorldStructure,
                               isomorphisms, reduct, relabel)
from .semantics.reachability import generated_elements, reachable_by
from .signature import (NOMINAL_SORT, HFOLSignature, Pushout, SignatureExtension,
                        SignatureMorphism, check_morphism, extend, is_injective_on_nominals,
                        is_injective_on_sorts)
from .syntax import AtSort, at_sort


# --------------------------------------------------------------------------
# protection analysis

@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: str | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def preserves_flexible(chi: SignatureMorphism) -> Verdict:
    src, tgt = chi.source, chi.target
    for s in src.flexible_sorts:
        if tgt.is_rigid_sort(chi.sorts[s]):
            return Verdict(False, s, f"flexible sort '{s}' is mapped to rigid sort '{chi.sorts[s]}'")
    flex_images = {chi.sorts[s] for s in src.flexible_sorts}
    for name, g in sorted(tgt.fun.items()):
        if tgt.is_rigid_fun(name) or g.result not in flex_images:
            continue
        sources = [f for f in src.fun if chi.functions[f] == name and not src.is_rigid_fun(f)
                   and not src.is_rigid_sort(src.fun[f].result)
                   and chi.sorts[src.fun[f].result] == g.result]
        if not sources:
            return Verdict(False, name, f"new flexible operation '{name}' on the image of a "
                                        f"flexible sort ('{g.result}')")
    return Verdict(True)


def protects_flexible(chi: SignatureMorphism) -> Verdict:
    pres = preserves_flexible(chi)
    if not pres:
        return pres
    src = chi.source
    seen: dict[str, str] = {}
    for s in src.flexible_sorts:
        t = chi.sorts[s]
        if t in seen:
            return Verdict(False, f"{seen[t]},{s}", f"flexible sorts '{seen[t]}' and '{s}' are merged")
        seen[t] = s
    flexible = set(src.flexible_sorts)
    for kind, table, mapping, is_rigid in (
            ("function", src.fun, chi.functions, src.is_rigid_fun),
            ("relation", src.rel, chi.relations, src.is_rigid_rel)):
        seen = {}
        for name, sym in sorted(table.items()):
            if is_rigid(name) or not (set(sym.arity) & flexible):
                continue
            t = mapping[name]
            if t in seen:
                return Verdict(False, f"{seen[t]},{name}",
                               f"flexible {kind}s '{seen[t]}' and '{name}' are merged")
            seen[t] = name
    return Verdict(True)


@dataclass(frozen=True)
class Span:
    """Two morphisms out of a common signature, with optional presentations."""
    chi1: SignatureMorphism
    chi2: SignatureMorphism
    base: tuple = ()
    left: tuple = ()
    right: tuple = ()

    __hash__ = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.chi1.source != self.chi2.source:
            raise ValueError("span legs have different sources")

    @property
    def source(self) -> HFOLSignature:
        return self.chi1.source


@dataclass(frozen=True)
class LegReport:
    injective_sorts: bool
    injective_nominals: bool
    preserves: Verdict
    protects: Verdict

    @property
    def hypotheses(self) -> bool:
        return self.injective_sorts and self.injective_nominals and self.protects.ok

    def as_dict(self) -> dict:
        return {
            "injective_on_sorts": self.injective_sorts,
            "injective_on_nominals": self.injective_nominals,
            "preserves_flexible": self.preserves.ok,
            "preserves_witness": self.preserves.witness,
            "protects_flexible": self.protects.ok,
            "protects_witness": self.protects.witness,
            "hypotheses": self.hypotheses,
        }


@dataclass(frozen=True)
class RobinsonReport:
    legs: tuple  # (LegReport for chi1, LegReport for chi2)
    notes: tuple = ()

    @property
    def hypotheses(self) -> bool:
        """Whether some leg is injective on sorts and nominals and protects flexible symbols."""
        return any(leg.hypotheses for leg in self.legs)

    def as_dict(self) -> dict:
        return {"chi1": self.legs[0].as_dict(), "chi2": self.legs[1].as_dict(),
                "hypotheses": self.hypotheses, "notes": list(self.notes)}


def analyze_leg(chi: SignatureMorphism) -> LegReport:
    return LegReport(is_injective_on_sorts(chi), is_injective_on_nominals(chi),
                     preserves_flexible(chi), protects_flexible(chi))


def analyze_span(span: Span) -> RobinsonReport:
    return RobinsonReport(
        (analyze_leg(span.chi1), analyze_leg(span.chi2)),
        ("maximal consistency of the base presentation is assumed, not checked",))


# --------------------------------------------------------------------------
# lifting expansions

def lift_context(chi: SignatureMorphism, ext1: SignatureExtension
                 ) -> tuple[SignatureExtension, SignatureMorphism]:
    """The pulled-back extension ``Delta(C)`` and the extended morphism ``Delta(C) -> Delta1(C1)``."""
    if ext1.base != chi.target:
        raise LiftError("bad-extension", "extension is not over the target of the morphism")
    inverse_sorts: dict[str, list[str]] = {}
    for s, t in chi.sorts.items():
        inverse_sorts.setdefault(t, []).append(s)
    added = []
    for name, sort in ext1.added:
        if sort == NOMINAL_SORT:
            added.append((name, NOMINAL_SORT))
        else:
            for s in inverse_sorts.get(sort, ()):
                added.append((name, s))
    try:
        ext = extend(chi.source, added)
    except Exception as exc:  # name clash or flexible preimage sort
        raise LiftError("bad-extension", str(exc)) from exc
    funs = dict(chi.functions)
    noms = dict(chi.nominals)
    for name, sort in ext.added:
        if sort == NOMINAL_SORT:
            noms[name] = name
        else:
            funs[name] = name
    chi_c = SignatureMorphism(ext.signature, ext1.signature, dict(chi.sorts), noms,
                              dict(chi.modalities), funs, dict(chi.relations))
    return ext, check_morphism(chi_c)


def _joint_denotations(m: KripkeStructure, n: KripkeStructure, frame: dict):
    """Pairs (value in m, value in n) of every rigid hybrid term, per hybrid sort."""
    sig = m.signature
    profiles = []
    for name, f in sorted(sig.fun.items()):
        if sig.is_rigid_fun(name):
            profiles.append((name, m.worlds[0], n.worlds[0], tuple(f.arity), f.result))
        else:
            for k in sig.nominal_list:
                profiles.append((name, m.nominals[k], n.nominals[k],
                                 tuple(at_sort(sig, k, s) for s in f.arity),
                                 at_sort(sig, k, f.result)))
    pairs: dict = {}
    changed = True
    while changed:
        changed = False
        for name, wm, wn, arity, result in profiles:
            tm = m.structures[wm].functions[name]
            tn = n.structures[wn].functions[name]
            pools = [sorted(pairs.get(s, ())) for s in arity]
            for combo in itertools.product(*pools):
                p = (tm[tuple(a for a, _ in combo)], tn[tuple(b for _, b in combo)])
                bucket = pairs.setdefault(result, set())
                if p not in bucket:
                    bucket.add(p)
                    changed = True
    return pairs


def _as_function(pairs, what: str) -> dict:
    out: dict = {}
    for a, b in sorted(pairs):
        if out.setdefault(a, b) != b:
            raise LiftError("h-not-functional",
                            f"{what}: element '{a}' is denoted by terms with values "
                            f"'{out[a]}' and '{b}' on the other side")
    if len(set(out.values())) != len(out):
        raise LiftError("h-not-bijective", f"{what}: distinct elements are identified")
    return out


def _fresh_label(base: str, taken: set) -> str:
    cand, i = base, 1
    while cand in taken:
        cand = f"{base}'{i}" if i > 1 else f"{base}'"
        i += 1
    return cand


def lift_expansion(chi: SignatureMorphism, ext1: SignatureExtension, v1: KripkeStructure,
                   wm: KripkeStructure) -> KripkeStructure:
    """Build a ``chi^C``-expansion of ``wm`` that agrees with ``v1`` on all sentences.

    ``v1`` is a model over ``Delta1(C1)`` and ``wm`` a model over the
    pulled-back ``Delta(C)`` (see :func:`lift_context`).  Failed
    preconditions raise :class:`LiftError` with a code naming the failure.
    """
    if not (is_injective_on_sorts(chi) and is_injective_on_nominals(chi)):
        raise LiftError("not-injective", "the morphism must be injective on sorts and nominals")
    prot = protects_flexible(chi)
    if not prot:
        raise LiftError("not-protecting", prot.reason)
    ext, chi_c = lift_context(chi, ext1)
    if v1.signature != ext1.signature:
        raise LiftError("bad-extension", "the model to lift from is not over the extended target")
    if wm.signature != ext.signature:
        raise LiftError("bad-extension", "the model to expand is not over the pulled-back extension")
    c1_noms = [n for n, s in ext1.added if s == NOMINAL_SORT]
    c1_consts = [n for n, s in ext1.added if s != NOMINAL_SORT]
    c_consts = [n for n, s in ext.added if s != NOMINAL_SORT]
    if not reachable_by(v1, c1_noms, c1_consts):
        raise LiftError("not-reachable", "the model to lift from is not reachable by the added constants")
    if not reachable_by(wm, c1_noms, c_consts):
        raise LiftError("not-reachable", "the model to expand is not reachable by the added constants")

    sig = ext.signature
    sig1 = ext1.signature
    n = reduct(chi_c, v1)  # (V, N)

    # step 1: the isomorphism h : (W, M) -> (V, R)
    frame: dict[str, str] = {}
    for k in c1_noms:
        a, b = wm.nominals[k], n.nominals[k]
        if frame.setdefault(a, b) != b:
            raise LiftError("h-not-functional", f"world '{a}' corresponds to '{frame[a]}' and '{b}'")
    if len(set(frame.values())) != len(frame) or set(frame.values()) != set(n.worlds):
        raise LiftError("h-not-bijective", "the frames differ in size")
    for k in sig.nominal_list:
        if frame[wm.nominals[k]] != n.nominals[k]:
            raise LiftError("frame-mismatch", f"nominal '{k}' is interpreted differently")
    for mname, arity in sig.mod.items():
        img = {frame[x] for x in wm.modalities[mname]} if arity == 1 else \
            {(frame[x], frame[y]) for x, y in wm.modalities[mname]}
        if img != set(n.modalities[mname]):
            raise LiftError("frame-mismatch", f"modality '{mname}' is interpreted differently")

    pairs = _joint_denotations(wm, n, frame)
    h: dict[str, dict[str, dict[str, str]]] = {}
    reach: dict[str, dict[str, set]] = {}
    r_carriers: dict[str, dict[str, frozenset]] = {}
    for w in wm.worlds:
        v = frame[w]
        names = [k for k in sig.nominal_list if wm.nominals[k] == w]
        h[w], reach[w], r_carriers[v] = {}, {}, {}
        for s in sig.sorts:
            if sig.is_rigid_sort(s):
                hs = _as_function(pairs.get(s, ()), f"rigid sort '{s}'")
                if set(hs) != set(wm.structures[w].carriers[s]) or \
                        set(hs.values()) != set(n.structures[v].carriers[s]):
                    raise LiftError("h-not-bijective", f"rigid sort '{s}' is not matched one-to-one")
                h[w][s], reach[w][s] = hs, set(hs)
                r_carriers[v][s] = n.structures[v].carriers[s]
                continue
            joint = set().union(*(pairs.get(AtSort(k, s), set()) for k in names))
            hs = _as_function(joint, f"sort '{s}' at world '{w}'")
            reach[w][s] = set(hs)
            # unreachable elements of M are transplanted, renamed apart from N's reachable ones
            taken = set(hs.values())
            for e in sorted(set(wm.structures[w].carriers[s]) - set(hs)):
                label = _fresh_label(e, taken)
                taken.add(label)
                hs[e] = label
            h[w][s] = hs
            r_carriers[v][s] = frozenset(hs.values())

    # (V, R) is (W, M) transported along h; it must agree with (V, N) on reachable arguments
    r_structures: dict[str, WorldStructure] = {}
    for w in wm.worlds:
        v = frame[w]
        hw, rw = h[w], reach[w]
        ws, nw = wm.structures[w], n.structures[v]
        funs = {}
        for name, f in sig.fun.items():
            table = {}
            for args, val in ws.functions[name].items():
                img = tuple(hw[s][e] for s, e in zip(f.arity, args))
                table[img] = hw[f.result][val]
                if all(e in rw[s] for s, e in zip(f.arity, args)) and nw.functions[name][img] != table[img]:
                    raise LiftError("not-equivalent", f"function '{name}' differs at world '{v}' "
                                                      f"on reachable arguments {img!r}")
            funs[name] = table
        rels = {}
        for name, r in sig.rel.items():
            rel = frozenset(tuple(hw[s][e] for s, e in zip(r.arity, t)) for t in ws.relations[name])
            for t in itertools.product(*(sorted(rw[s]) for s in r.arity)):
                img = tuple(hw[s][e] for s, e in zip(r.arity, t))
                if (img in rel) != (img in nw.relations[name]):
                    raise LiftError("not-equivalent", f"relation '{name}' differs at world '{v}' "
                                                      f"on reachable tuple {img!r}")
            rels[name] = rel
        r_structures[v] = WorldStructure(r_carriers[v], funs, rels)

    # step 2: (V1, R1) from (V1, N1)
    inv_sort = {t: s for s, t in chi.sorts.items()}
    flex_img = {chi.sorts[s] for s in chi.source.flexible_sorts}
    inv_fun = {chi_c.functions[f]: f for f in sig.fun}
    inv_rel = {chi_c.relations[p]: p for p in sig.rel}
    r1: dict[str, WorldStructure] = {}
    for v in v1.worlds:
        n1 = v1.structures[v]
        rv = r_structures[v]
        gen1 = generated_elements(v1, v)
        carriers = {}
        for s1 in sig1.sorts:
            carriers[s1] = rv.carriers[inv_sort[s1]] if s1 in flex_img else n1.carriers[s1]
        funs = {}
        for name, g in sig1.fun.items():
            touches = bool(set(g.arity) & flex_img)
            if touches and name in inv_fun and not sig.is_rigid_fun(inv_fun[name]):
                funs[name] = rv.functions[inv_fun[name]]
            elif touches:
                default = min(carriers[g.result])
                table = {}
                for args in itertools.product(*(sorted(carriers[s]) for s in g.arity)):
                    val = n1.functions[name].get(args)
                    table[args] = val if val is not None and val in carriers[g.result] else default
                funs[name] = table
            else:
                funs[name] = n1.functions[name]
        rels = {}
        for name, q in sig1.rel.items():
            touches = bool(set(q.arity) & flex_img)
            if touches and name in inv_rel and not sig.is_rigid_rel(inv_rel[name]):
                rels[name] = rv.relations[inv_rel[name]]
            elif touches:
                rels[name] = frozenset(t for t in n1.relations[name]
                                       if all(e in gen1[s] for e, s in zip(t, q.arity)))
            else:
                rels[name] = n1.relations[name]
        r1[v] = WorldStructure(carriers, funs, rels)

    # step 3: pull (V1, R1) back along h1 to get (W1, M1)
    back = {v: w for w, v in frame.items()}
    structures = {}
    for w in wm.worlds:
        v = frame[w]
        h1 = {}
        for s1 in sig1.sorts:
            if s1 in inv_sort:
                h1[s1] = h[w][inv_sort[s1]]
            else:
                h1[s1] = {e: e for e in r1[v].carriers[s1]}
        inv1 = {s1: {b: a for a, b in m.items()} for s1, m in h1.items()}
        carriers = {s1: frozenset(h1[s1]) for s1 in sig1.sorts}
        funs = {}
        for name, g in sig1.fun.items():
            table = {}
            for args in itertools.product(*(sorted(carriers[s]) for s in g.arity)):
                img = tuple(h1[s][e] for s, e in zip(g.arity, args))
                table[args] = inv1[g.result][r1[v].functions[name][img]]
            funs[name] = table
        rels = {}
        for name, q in sig1.rel.items():
            rels[name] = frozenset(tuple(inv1[s][e] for s, e in zip(q.arity, t))
                                   for t in r1[v].relations[name])
        structures[w] = WorldStructure(carriers, funs, rels)
    nominals = {k: back[v1.nominals[k]] for k in sig1.nominals}
    mods = {}
    for mname, arity in sig1.mod.items():
        val = v1.modalities[mname]
        mods[mname] = frozenset(back[x] for x in val) if arity == 1 else \
            frozenset((back[x], back[y]) for x, y in val)
    return KripkeStructure(sig1, wm.worlds, nominals, mods, structures)



# --------------------------------------------------------------------------
# amalgamation

def first_difference(a: KripkeStructure, b: KripkeStructure) -> str | None:
    """A description of the first place where two models over one signature differ."""
    if tuple(a.worlds) != tuple(b.worlds):
        return f"worlds differ: {list(a.worlds)} vs {list(b.worlds)}"
    sig = a.signature
    for k in sig.nominal_list:
        if a.nominals[k] != b.nominals[k]:
            return f"nominal '{k}' differs"
    for m in sorted(sig.mod):
        if set(a.modalities[m]) != set(b.modalities[m]):
            return f"modality '{m}' differs"
    for w in a.worlds:
        x, y = a.structures[w], b.structures[w]
        for s in sorted(sig.sorts):
            if set(x.carriers[s]) != set(y.carriers[s]):
                return f"carrier of sort '{s}' differs at world '{w}'"
        for f in sorted(sig.fun):
            if dict(x.functions[f]) != dict(y.functions[f]):
                return f"function '{f}' differs at world '{w}'"
        for r in sorted(sig.rel):
            if set(x.relations[r]) != set(y.relations[r]):
                return f"relation '{r}' differs at world '{w}'"
    return None


def amalgamate(po: Pushout, m1: KripkeStructure, m2: KripkeStructure) -> KripkeStructure:
    """The unique model over the pushout vertex whose reducts are ``m1`` and ``m2``.

    The two models must have exactly equal reducts to the span's source.
    """
    diff = first_difference(reduct(po.chi1, m1), reduct(po.chi2, m2))
    if diff is not None:
        raise AmalgamationError(f"reducts disagree: {diff}")
    sig = po.signature
    # each symbol of the vertex gets the interpretation of one of its preimages
    owners: list[dict] = [{}, {}, {}, {}, {}]
    for model, ups in ((m2, po.upsilon2), (m1, po.upsilon1)):
        for i, mapping in enumerate(ups.maps()):
            for x, y in mapping.items():
                owners[i][y] = (model, x)
    sorts, noms, mods, funs, rels = owners
    structures = {}
    for w in m1.worlds:
        structures[w] = WorldStructure(
            {s: m.structures[w].carriers[x] for s, (m, x) in sorts.items()},
            {f: m.structures[w].functions[x] for f, (m, x) in funs.items()},
            {r: m.structures[w].relations[x] for r, (m, x) in rels.items()},
        )
    out = KripkeStructure(sig, m1.worlds,
                          {k: m.nominals[x] for k, (m, x) in noms.items()},
                          {k: m.modalities[x] for k, (m, x) in mods.items()},
                          structures)
    for ups, m in ((po.upsilon1, m1), (po.upsilon2, m2)):
        diff = first_difference(reduct(ups, out), m)
        if diff is not None:  # only possible if classes glue symbols with different meanings
            raise AmalgamationError(f"amalgam does not restrict correctly: {diff}")
    return out


def amalgamate_up_to_iso(po: Pushout, m1: KripkeStructure, m2: KripkeStructure) -> KripkeStructure:
    """Like :func:`amalgamate`, first renaming ``m2`` so its reduct equals that of ``m1``."""
    r1, r2 = reduct(po.chi1, m1), reduct(po.chi2, m2)
    if first_difference(r1, r2) is None:
        return amalgamate(po, m1, m2)
    found = False
    for iso in isomorphisms(r2, r1):
        found = True
        maps = _induced_renaming(po.chi2, m2, iso)
        if maps is not None:
            h = KripkeHomomorphism(m2, None, dict(iso.frame), maps)
            return amalgamate(po, m1, relabel(m2, h))
    if not found:
        raise AmalgamationError("reducts are not isomorphic")
    raise AmalgamationError("no isomorphism of the reducts is induced by a renaming of the "
                            "second model")


def _induced_renaming(chi2: SignatureMorphism, m2: KripkeStructure, iso) -> dict | None:
    """Per-world renamings of ``m2`` whose reduct along ``chi2`` is ``iso``, if any."""
    maps = {}
    for w in m2.worlds:
        comp = {}
        for s2 in m2.signature.sorts:
            pre = [s for s in chi2.source.sorts if chi2.sorts[s] == s2]
            choices = {tuple(sorted(iso.maps[w][s].items())) for s in pre}
            if len(choices) > 1:
                return None
            comp[s2] = dict(choices.pop()) if choices else \
                {e: e for e in m2.structures[w].carriers[s2]}
        maps[w] = comp
    return maps
