"""Finite probe sets standing in for elementary equivalence.

Two models agree on a probe set when they globally satisfy exactly the same
probe sentences.  Probe sets are enumerated deterministically by interleaving
one stream per sentence constructor, so every constructor the signature
supports shows up early even when the set is truncated.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from ..signature import NOMINAL_SORT, HFOLSignature
from ..syntax import (FALSE, At, Diamond, Eq, Exists, Fn, Nominal, Not, Or, Prop,
                      Rel, Sentence, Store, Var, at_sort, fresh_name, sort_key, KEYWORDS)
from .kripke import KripkeStructure
from .satisfaction import sat_global


@dataclass(frozen=True)
class ProbeSet:
    signature: HFOLSignature
    depth: int
    quantifier_budget: int
    term_depth: int
    sentences: tuple

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)


def probe_sentences(sig: HFOLSignature, depth: int, quantifier_budget: int = 1,
                    term_depth: int = 2, limit: int | None = 400) -> ProbeSet:
    gen = _Generator(sig, term_depth, limit)
    sentences = gen.level(depth, (), quantifier_budget) if depth > 0 else ()
    return ProbeSet(sig, depth, quantifier_budget, term_depth, tuple(sentences))


def equivalent_on(a: KripkeStructure, b: KripkeStructure, probes) -> tuple[bool, Sentence | None]:
    """Whether ``a`` and ``b`` agree on every probe; otherwise the first that separates them."""
    for phi in probes:
        if sat_global(a, phi) != sat_global(b, phi):
            return False, phi
    return True, None


def _interleave(streams, limit):
    out, seen = [], set()
    iters = [iter(s) for s in streams]
    while iters and (limit is None or len(out) < limit):
        alive = []
        for it in iters:
            for item in it:
                if item not in seen:
                    seen.add(item)
                    out.append(item)
                    alive.append(it)
                    break
            if limit is not None and len(out) >= limit:
                break
        iters = alive
    return out


class _Generator:
    def __init__(self, sig: HFOLSignature, term_depth: int, limit: int | None):
        self.sig = sig
        self.term_depth = term_depth
        self.limit = limit
        self.avoid = set(sig.symbol_names) | KEYWORDS
        self.level = lru_cache(maxsize=None)(self._level)
        self.terms = lru_cache(maxsize=None)(self._terms)

    # scope is a tuple of (name, sort) pairs, innermost last
    def _nominals(self, scope):
        return list(self.sig.nominal_list) + [n for n, s in scope if s == NOMINAL_SORT]

    def _terms(self, scope) -> dict:
        """Terms of depth <= term_depth, keyed by hybrid sort."""
        sig = self.sig
        noms = self._nominals(scope)
        symbols = []
        for name, f in sig.fun.items():
            symbols.append((name, None, tuple(f.arity), f.result))
            if not sig.is_rigid_fun(name):
                for k in noms:
                    symbols.append((name, k, tuple(at_sort(sig, k, s) for s in f.arity),
                                    at_sort(sig, k, f.result)))
        by_sort: dict = {}
        for n, s in scope:
            if s != NOMINAL_SORT:
                by_sort.setdefault(s, []).append(Var(n))
        for d in range(1, self.term_depth + 1):
            new: dict = {}
            for name, at, arity, result in symbols:
                if not arity:
                    if d == 1:
                        new.setdefault(result, []).append(Fn(name, (), at))
                    continue
                pools = [by_sort.get(s, []) for s in arity]
                if d == 1 or not all(pools):
                    continue
                for combo in itertools.product(*pools):
                    t = Fn(name, tuple(combo), at)
                    if t not in new.get(result, ()):
                        new.setdefault(result, []).append(t)
            for s, ts in new.items():
                pool = by_sort.setdefault(s, [])
                pool.extend(t for t in ts if t not in pool)
        return by_sort

    def _atoms(self, scope) -> list[Sentence]:
        sig = self.sig
        streams = [[Nominal(k) for k in self._nominals(scope)],
                   [Prop(m) for m in sig.unary_modalities()],
                   [FALSE]]
        terms = self.terms(scope)
        eqs = []
        for s in sorted(terms, key=sort_key):
            ts = terms[s]
            for i, t1 in enumerate(ts):
                for t2 in ts[i:]:
                    eqs.append(Eq(t1, t2))
        streams.append(eqs)
        rels = []
        for name, r in sorted(sig.rel.items()):
            variants = [(None, tuple(r.arity))]
            if not sig.is_rigid_rel(name):
                variants += [(k, tuple(at_sort(sig, k, s) for s in r.arity))
                             for k in self._nominals(scope)]
            for at, arity in variants:
                pools = [terms.get(s, []) for s in arity]
                for combo in itertools.product(*pools):
                    rels.append(Rel(name, tuple(combo), at))
        streams.append(rels)
        return _interleave(streams, self.limit)

    def _fresh(self, scope, base):
        taken = self.avoid | {n for n, _ in scope}
        return fresh_name(base, taken)

    def _level(self, depth, scope, budget) -> tuple:
        if depth <= 0:
            return ()
        atoms = self._atoms(scope)
        if depth == 1:
            return tuple(atoms)
        sub = list(self.level(depth - 1, scope, budget))
        sig = self.sig
        streams = [atoms, [Not(p) for p in sub]]
        streams.append([At(k, p) for p in sub for k in self._nominals(scope)])
        streams.append([Diamond(m, p) for p in sub for m in sig.binary_modalities()])
        head = sub[:24]
        streams.append([Or((a, b)) for a, b in itertools.combinations(head, 2)])
        if budget > 0:
            z = self._fresh(scope, "z")
            inner = scope + ((z, NOMINAL_SORT),)
            streams.append([Store(z, p) for p in self.level(depth - 1, inner, budget - 1)])
            for s in (NOMINAL_SORT,) + sig.rigid_sorts:
                x = self._fresh(scope, "x" if s != NOMINAL_SORT else "y")
                inner = scope + ((x, s),)
                streams.append([Exists(((x, s),), p)
                                for p in self.level(depth - 1, inner, budget - 1)])
        streams.append(sub)
        return tuple(_interleave(streams, self.limit))
