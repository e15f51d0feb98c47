"""Hybrid terms and sentences.

Names inside sentences are resolved by scope: a name bound by an enclosing
``down`` or ``exists`` is a variable, anything else is a symbol of the
ambient signature.  Variables must not reuse symbol names, so the two never
collide; :func:`translate` renames bound variables when a target signature
would capture them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Union

from .errors import SentenceError
from .signature import NOMINAL_SORT, HFOLSignature, SignatureMorphism

KEYWORDS = frozenset({"not", "down", "exists", "forall", "true", "false"})


# --------------------------------------------------------------------------
# sorts of hybrid terms

@dataclass(frozen=True, order=True)
class AtSort:
    """The sort ``@k s`` of a flexible sort ``s`` read at nominal ``k``."""
    nominal: str
    sort: str

    def __str__(self) -> str:
        return f"{self.sort}@{self.nominal}"


HybridSort = Union[str, AtSort]


def at_sort(sig: HFOLSignature, nominal: str, sort: str) -> HybridSort:
    return sort if sig.is_rigid_sort(sort) else AtSort(nominal, sort)


def sort_key(s: HybridSort) -> tuple:
    return (0, s, "") if isinstance(s, str) else (1, s.sort, s.nominal)


# --------------------------------------------------------------------------
# terms

class _Printable:
    @cached_property
    def text(self) -> str:
        return self._render()

    def __str__(self) -> str:
        return self.text

    def _render(self) -> str:  # pragma: no cover - overridden
        raise NotImplementedError


@dataclass(frozen=True, eq=True)
class Var(_Printable):
    name: str

    def _render(self) -> str:
        return self.name


@dataclass(frozen=True, eq=True)
class Fn(_Printable):
    """Application of a function symbol, optionally rigidified at a nominal."""
    name: str
    args: tuple = ()
    at: str | None = None

    def _render(self) -> str:
        head = self.name if self.at is None else f"{self.name}@{self.at}"
        if not self.args:
            return head
        return f"{head}({', '.join(a.text for a in self.args)})"


Term = Union[Var, Fn]


# --------------------------------------------------------------------------
# sentences

# binding strength used by the printer; larger binds tighter
_ATOM, _AND, _OR, _IMP, _IFF, _BINDER = 5, 4, 3, 2, 1, 0


class Sentence(_Printable):
    level = _ATOM

    def children(self) -> tuple["Sentence", ...]:
        return ()


def _paren(child: Sentence, min_level: int) -> str:
    if child.level < min_level or _open_right(child):
        return f"({child.text})"
    return child.text


def _open_right(phi: Sentence) -> bool:
    """True when the printed form ends in a binder body that would swallow a suffix."""
    if phi.level == _BINDER:
        return True
    if isinstance(phi, (Not, At, Diamond, Box)):
        return _open_right(phi.body) if phi.body.level >= _ATOM or phi.body.level == _BINDER else False
    return False


def _prefix_body(body: Sentence) -> str:
    if body.level == _ATOM or body.level == _BINDER:
        return body.text
    return f"({body.text})"


@dataclass(frozen=True)
class Nominal(Sentence):
    name: str

    def _render(self) -> str:
        return self.name


@dataclass(frozen=True)
class Prop(Sentence):
    """A unary modality used as an atomic sentence."""
    name: str

    def _render(self) -> str:
        return self.name


@dataclass(frozen=True)
class Eq(Sentence):
    left: Term
    right: Term

    def _render(self) -> str:
        return f"{self.left.text} = {self.right.text}"


@dataclass(frozen=True)
class Rel(Sentence):
    name: str
    args: tuple = ()
    at: str | None = None

    def _render(self) -> str:
        head = self.name if self.at is None else f"{self.name}@{self.at}"
        if not self.args:
            return head
        return f"{head}({', '.join(a.text for a in self.args)})"


@dataclass(frozen=True)
class At(Sentence):
    nominal: str
    body: Sentence

    def children(self):
        return (self.body,)

    def _render(self) -> str:
        return f"@{self.nominal} {_prefix_body(self.body)}"


@dataclass(frozen=True)
class Not(Sentence):
    body: Sentence

    def children(self):
        return (self.body,)

    def _render(self) -> str:
        return f"not {_prefix_body(self.body)}"


def _canonical(items: Iterable[Sentence]) -> tuple[Sentence, ...]:
    seen: dict[str, Sentence] = {}
    for it in items:
        if not isinstance(it, Sentence):
            raise SentenceError(f"not a sentence: {it!r}")
        seen.setdefault(it.text, it)
    return tuple(seen[k] for k in sorted(seen))


@dataclass(frozen=True)
class Or(Sentence):
    """Disjunction of a finite set; items are kept sorted and duplicate-free."""
    items: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "items", _canonical(self.items))

    @property
    def level(self):
        return _OR if len(self.items) >= 2 else _ATOM

    def children(self):
        return self.items

    def _render(self) -> str:
        if not self.items:
            return "false"
        if len(self.items) == 1:
            return f"\\/{{{self.items[0].text}}}"
        return " \\/ ".join(_paren(i, _AND) for i in self.items)


@dataclass(frozen=True)
class Store(Sentence):
    var: str
    body: Sentence
    level = _BINDER

    def children(self):
        return (self.body,)

    def _render(self) -> str:
        return f"down {self.var} . {self.body.text}"


def _vars_text(variables) -> str:
    return ", ".join(f"{n}:{s}" for n, s in variables)


@dataclass(frozen=True)
class Exists(Sentence):
    variables: tuple
    body: Sentence
    level = _BINDER

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(tuple(v) for v in self.variables))

    def children(self):
        return (self.body,)

    def _render(self) -> str:
        return f"exists {_vars_text(self.variables)} . {self.body.text}"


@dataclass(frozen=True)
class Diamond(Sentence):
    modality: str
    body: Sentence

    def children(self):
        return (self.body,)

    def _render(self) -> str:
        return f"<{self.modality}> {_prefix_body(self.body)}"


# sugar ------------------------------------------------------------------

@dataclass(frozen=True)
class And(Sentence):
    items: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "items", _canonical(self.items))

    @property
    def level(self):
        return _AND if len(self.items) >= 2 else _ATOM

    def children(self):
        return self.items

    def _render(self) -> str:
        if not self.items:
            return "true"
        if len(self.items) == 1:
            return f"/\\{{{self.items[0].text}}}"
        return " /\\ ".join(_paren(i, _ATOM) for i in self.items)


@dataclass(frozen=True)
class Implies(Sentence):
    left: Sentence
    right: Sentence
    level = _IMP

    def children(self):
        return (self.left, self.right)

    def _render(self) -> str:
        return f"{_paren(self.left, _OR)} => {_paren(self.right, _IMP)}"


@dataclass(frozen=True)
class Iff(Sentence):
    left: Sentence
    right: Sentence
    level = _IFF

    def children(self):
        return (self.left, self.right)

    def _render(self) -> str:
        return f"{_paren(self.left, _IMP)} <=> {_paren(self.right, _IMP)}"


@dataclass(frozen=True)
class Forall(Sentence):
    variables: tuple
    body: Sentence
    level = _BINDER

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(tuple(v) for v in self.variables))

    def children(self):
        return (self.body,)

    def _render(self) -> str:
        return f"forall {_vars_text(self.variables)} . {self.body.text}"


@dataclass(frozen=True)
class Box(Sentence):
    modality: str
    body: Sentence

    def children(self):
        return (self.body,)

    def _render(self) -> str:
        return f"[{self.modality}] {_prefix_body(self.body)}"


TRUE = And(())
FALSE = Or(())

SUGAR = (And, Implies, Iff, Forall, Box)
CORE = (Nominal, Prop, Eq, Rel, At, Not, Or, Store, Exists, Diamond)


def disj(*items: Sentence) -> Or:
    return Or(items)


def conj(*items: Sentence) -> And:
    return And(items)


# --------------------------------------------------------------------------
# generic traversal

def rebuild(phi: Sentence, children: tuple) -> Sentence:
    """Copy of ``phi`` with its immediate sub-sentences replaced."""
    if isinstance(phi, (Or, And)):
        return type(phi)(children)
    if isinstance(phi, (Implies, Iff)):
        return type(phi)(children[0], children[1])
    if isinstance(phi, At):
        return At(phi.nominal, children[0])
    if isinstance(phi, Not):
        return Not(children[0])
    if isinstance(phi, Store):
        return Store(phi.var, children[0])
    if isinstance(phi, (Exists, Forall)):
        return type(phi)(phi.variables, children[0])
    if isinstance(phi, (Diamond, Box)):
        return type(phi)(phi.modality, children[0])
    return phi


def bound_names(phi: Sentence) -> tuple[tuple[str, str], ...]:
    if isinstance(phi, Store):
        return ((phi.var, NOMINAL_SORT),)
    if isinstance(phi, (Exists, Forall)):
        return phi.variables
    return ()


def depth(phi: Sentence) -> int:
    kids = phi.children()
    return 1 + max((depth(k) for k in kids), default=0)


def subsentences(phi: Sentence) -> Iterator[Sentence]:
    yield phi
    for k in phi.children():
        yield from subsentences(k)


def desugar(phi: Sentence) -> Sentence:
    kids = tuple(desugar(k) for k in phi.children())
    if isinstance(phi, And):
        return Not(Or(tuple(Not(k) for k in kids)))
    if isinstance(phi, Implies):
        return Or((Not(kids[0]), kids[1]))
    if isinstance(phi, Iff):
        return Not(Or((Not(Or((Not(kids[0]), kids[1]))), Not(Or((Not(kids[1]), kids[0]))))))
    if isinstance(phi, Forall):
        return Not(Exists(phi.variables, Not(kids[0])))
    if isinstance(phi, Box):
        return Not(Diamond(phi.modality, Not(kids[0])))
    return rebuild(phi, kids)


def is_core(phi: Sentence) -> bool:
    return all(isinstance(p, CORE) for p in subsentences(phi))


# --------------------------------------------------------------------------
# well-formedness

def term_sort(sig: HFOLSignature, t: Term, scope: Mapping[str, str] | None = None) -> HybridSort:
    """Hybrid sort of ``t``; raises :class:`SentenceError` on ill-sorted terms."""
    scope = scope or {}
    if isinstance(t, Var):
        s = scope.get(t.name)
        if s is None:
            raise SentenceError(f"unbound variable '{t.name}'")
        if s == NOMINAL_SORT:
            raise SentenceError(f"nominal variable '{t.name}' used as a term")
        return s
    if not isinstance(t, Fn):
        raise SentenceError(f"not a term: {t!r}")
    f = sig.fun.get(t.name)
    if f is None:
        raise SentenceError(f"unknown function symbol '{t.name}'")
    if len(t.args) != len(f.arity):
        raise SentenceError(f"arity mismatch: '{t.name}' expects {len(f.arity)} "
                            f"argument(s), got {len(t.args)}")
    if t.at is None:
        expected: list[HybridSort] = list(f.arity)
        result: HybridSort = f.result
    else:
        _check_nominal(sig, t.at, scope)
        if sig.is_rigid_fun(t.name):
            raise SentenceError(f"'@{t.at}' applied to rigid function '{t.name}'")
        expected = [at_sort(sig, t.at, s) for s in f.arity]
        result = at_sort(sig, t.at, f.result)
    for i, (a, want) in enumerate(zip(t.args, expected)):
        got = term_sort(sig, a, scope)
        if got != want:
            raise SentenceError(f"sort mismatch: argument {i + 1} of '{t.name}' has sort "
                                f"{got}, expected {want}")
    return result


def _check_nominal(sig: HFOLSignature, name: str, scope: Mapping[str, str]) -> None:
    if scope.get(name) == NOMINAL_SORT:
        return
    if name in scope:
        raise SentenceError(f"variable '{name}' of sort {scope[name]} used as a nominal")
    if name not in sig.nominals:
        raise SentenceError(f"unknown nominal '{name}'")


def wellformed(sig: HFOLSignature, phi: Sentence, scope: Mapping[str, str] | None = None) -> list[str]:
    diags: list[str] = []
    _wf(sig, phi, dict(scope or {}), diags)
    return diags


def check_sentence(sig: HFOLSignature, phi: Sentence) -> Sentence:
    diags = wellformed(sig, phi)
    if diags:
        raise SentenceError("; ".join(diags))
    return phi


def _wf(sig, phi, scope, diags) -> None:
    try:
        if isinstance(phi, Nominal):
            _check_nominal(sig, phi.name, scope)
        elif isinstance(phi, Prop):
            if sig.mod.get(phi.name) != 1:
                diags.append(f"unknown unary modality '{phi.name}'")
        elif isinstance(phi, Eq):
            s1 = term_sort(sig, phi.left, scope)
            s2 = term_sort(sig, phi.right, scope)
            if s1 != s2:
                diags.append(f"sort mismatch in equation '{phi.text}': {s1} vs {s2}")
        elif isinstance(phi, Rel):
            r = sig.rel.get(phi.name)
            if r is None:
                diags.append(f"unknown relation symbol '{phi.name}'")
                return
            if len(phi.args) != len(r.arity):
                diags.append(f"arity mismatch: '{phi.name}' expects {len(r.arity)} "
                             f"argument(s), got {len(phi.args)}")
                return
            if phi.at is None:
                expected = list(r.arity)
            else:
                _check_nominal(sig, phi.at, scope)
                if sig.is_rigid_rel(phi.name):
                    diags.append(f"'@{phi.at}' applied to rigid relation '{phi.name}'")
                    return
                expected = [at_sort(sig, phi.at, s) for s in r.arity]
            for i, (a, want) in enumerate(zip(phi.args, expected)):
                got = term_sort(sig, a, scope)
                if got != want:
                    diags.append(f"sort mismatch: argument {i + 1} of '{phi.name}' has sort "
                                 f"{got}, expected {want}")
        elif isinstance(phi, At):
            _check_nominal(sig, phi.nominal, scope)
            _wf(sig, phi.body, scope, diags)
        elif isinstance(phi, (Diamond, Box)):
            if sig.mod.get(phi.modality) != 2:
                diags.append(f"unknown binary modality '{phi.modality}'")
            _wf(sig, phi.body, scope, diags)
        elif isinstance(phi, (Store, Exists, Forall)):
            variables = bound_names(phi)
            names = [n for n, _ in variables]
            if not variables:
                diags.append("quantifier binds no variables")
            if len(set(names)) != len(names):
                diags.append(f"repeated variable in binder: {', '.join(names)}")
            inner = dict(scope)
            for name, sort in variables:
                if name in sig.symbol_names or name in KEYWORDS:
                    diags.append(f"variable '{name}' clashes with a symbol name")
                if sort != NOMINAL_SORT and not sig.is_rigid_sort(sort):
                    where = "flexible" if sort in sig.base.sorts else "unknown"
                    diags.append(f"variable '{name}' has {where} sort '{sort}'; binders "
                                 f"range over rigid sorts and '{NOMINAL_SORT}'")
                inner[name] = sort
            _wf(sig, phi.body, inner, diags)
        elif isinstance(phi, (Not, Or, And, Implies, Iff)):
            for k in phi.children():
                _wf(sig, k, scope, diags)
        else:
            diags.append(f"not a sentence: {phi!r}")
    except SentenceError as exc:
        diags.append(str(exc))


# --------------------------------------------------------------------------
# names, renaming and translation

def names_in(phi: Sentence) -> set[str]:
    """Every identifier occurring in ``phi`` (symbols and variables alike)."""
    out: set[str] = set()

    def term(t):
        if isinstance(t, Var):
            out.add(t.name)
        else:
            out.add(t.name)
            if t.at is not None:
                out.add(t.at)
            for a in t.args:
                term(a)

    for p in subsentences(phi):
        if isinstance(p, (Nominal, Prop)):
            out.add(p.name)
        elif isinstance(p, Eq):
            term(p.left)
            term(p.right)
        elif isinstance(p, Rel):
            out.add(p.name)
            if p.at is not None:
                out.add(p.at)
            for a in p.args:
                term(a)
        elif isinstance(p, At):
            out.add(p.nominal)
        elif isinstance(p, (Diamond, Box)):
            out.add(p.modality)
        out.update(n for n, _ in bound_names(p))
    return out


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    if base not in avoid:
        return base
    i = 1
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


def translate(chi: SignatureMorphism, phi: Sentence) -> Sentence:
    """Translate ``phi`` along ``chi``; bound variables are renamed if captured."""
    avoid = set(chi.target.symbol_names) | KEYWORDS
    return _tr(chi, phi, {}, avoid | names_in(phi))


def _tr_nom(chi, name, ren):
    if name in ren:
        return ren[name][0]
    return chi.nominal(name)


def _tr_term(chi, t, ren):
    if isinstance(t, Var):
        return Var(ren[t.name][0]) if t.name in ren else t
    args = tuple(_tr_term(chi, a, ren) for a in t.args)
    g = chi.function(t.name)
    at = None
    if t.at is not None and not chi.target.is_rigid_fun(g):
        at = _tr_nom(chi, t.at, ren)
    return Fn(g, args, at)


def _tr(chi, phi, ren, avoid):
    if isinstance(phi, Nominal):
        return Nominal(_tr_nom(chi, phi.name, ren))
    if isinstance(phi, Prop):
        return Prop(chi.modality(phi.name))
    if isinstance(phi, Eq):
        return Eq(_tr_term(chi, phi.left, ren), _tr_term(chi, phi.right, ren))
    if isinstance(phi, Rel):
        q = chi.relation(phi.name)
        at = None
        if phi.at is not None and not chi.target.is_rigid_rel(q):
            at = _tr_nom(chi, phi.at, ren)
        return Rel(q, tuple(_tr_term(chi, a, ren) for a in phi.args), at)
    if isinstance(phi, At):
        return At(_tr_nom(chi, phi.nominal, ren), _tr(chi, phi.body, ren, avoid))
    if isinstance(phi, (Diamond, Box)):
        return type(phi)(chi.modality(phi.modality), _tr(chi, phi.body, ren, avoid))
    if isinstance(phi, (Store, Exists, Forall)):
        inner = dict(ren)
        new_vars = []
        for name, sort in bound_names(phi):
            new = name
            if name in chi.target.symbol_names:
                new = fresh_name(name, avoid)
                avoid = avoid | {new}
            new_sort = chi.sort(sort)
            inner[name] = (new, new_sort)
            new_vars.append((new, new_sort))
        body = _tr(chi, phi.body, inner, avoid)
        if isinstance(phi, Store):
            return Store(new_vars[0][0], body)
        return type(phi)(tuple(new_vars), body)
    return rebuild(phi, tuple(_tr(chi, k, ren, avoid) for k in phi.children()))


def rename_free(phi: Sentence, mapping: Mapping[str, str]) -> Sentence:
    """Rename free occurrences of variables (and nominal references) in ``phi``."""
    def term(t):
        if isinstance(t, Var):
            return Var(mapping.get(t.name, t.name))
        at = mapping.get(t.at, t.at) if t.at is not None else None
        return Fn(t.name, tuple(term(a) for a in t.args), at)

    if not mapping:
        return phi
    if isinstance(phi, Nominal):
        return Nominal(mapping.get(phi.name, phi.name))
    if isinstance(phi, Eq):
        return Eq(term(phi.left), term(phi.right))
    if isinstance(phi, Rel):
        at = mapping.get(phi.at, phi.at) if phi.at is not None else None
        return Rel(phi.name, tuple(term(a) for a in phi.args), at)
    if isinstance(phi, At):
        return At(mapping.get(phi.nominal, phi.nominal), rename_free(phi.body, mapping))
    if isinstance(phi, (Store, Exists, Forall)):
        shadowed = {n for n, _ in bound_names(phi)}
        inner = {k: v for k, v in mapping.items() if k not in shadowed}
        return rebuild(phi, (rename_free(phi.body, inner),))
    return rebuild(phi, tuple(rename_free(k, mapping) for k in phi.children()))


def alpha_normalize(phi: Sentence) -> Sentence:
    """Rename bound variables to ``_v0, _v1, ...`` in binding order."""
    counter = [0]

    def go(p, ren):
        if isinstance(p, (Store, Exists, Forall)):
            inner = dict(ren)
            new_vars = []
            for name, sort in bound_names(p):
                new = f"_v{counter[0]}"
                counter[0] += 1
                inner[name] = new
                new_vars.append((new, sort))
            body = go(p.body, inner)
            if isinstance(p, Store):
                return Store(new_vars[0][0], body)
            return type(p)(tuple(new_vars), body)
        if isinstance(p, (Nominal, Eq, Rel, At)):
            q = rename_free(p, ren) if not isinstance(p, At) else At(ren.get(p.nominal, p.nominal), go(p.body, ren))
            return q
        return rebuild(p, tuple(go(k, ren) for k in p.children()))

    return go(phi, {})


def instantiate(phi: Sentence, constants: Iterable[str]) -> Sentence:
    """Turn free rigid variables with the given names into constant applications."""
    names = set(constants)

    def term(t):
        if isinstance(t, Var):
            return Fn(t.name) if t.name in names else t
        return Fn(t.name, tuple(term(a) for a in t.args), t.at)

    def go(p, active):
        if not active:
            return p
        if isinstance(p, Eq):
            return Eq(term(p.left), term(p.right))
        if isinstance(p, Rel):
            return Rel(p.name, tuple(term(a) for a in p.args), p.at)
        if isinstance(p, (Store, Exists, Forall)):
            inner = active - {n for n, _ in bound_names(p)}
            return rebuild(p, (go(p.body, inner),))
        return rebuild(p, tuple(go(k, active) for k in p.children()))

    return go(phi, names)


# --------------------------------------------------------------------------
# semantic opposites

OPPOSITE_VAR = "zo"


def opposite_var(sig: HFOLSignature, phi: Sentence | None = None) -> str:
    avoid = set(sig.symbol_names) | KEYWORDS
    if phi is not None:
        avoid |= names_in(phi)
    return fresh_name(OPPOSITE_VAR, avoid)


def semantic_opposite(phi: Sentence, sign: str, sig: HFOLSignature) -> Sentence:
    """``+phi`` is ``forall zo:n . @zo phi``; ``-phi`` is ``exists zo:n . @zo not phi``."""
    z = opposite_var(sig, phi)
    if sign == "+":
        return Forall(((z, NOMINAL_SORT),), At(z, phi))
    if sign == "-":
        return Exists(((z, NOMINAL_SORT),), At(z, Not(phi)))
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


# --------------------------------------------------------------------------
# rigid term enumeration

def _rigid_symbols(sig: HFOLSignature, nominals: Iterable[str]):
    """Symbols of the rigidified signature as (name, at, arity, result)."""
    out = []
    for name, f in sig.fun.items():
        if sig.is_rigid_fun(name):
            out.append((name, None, tuple(f.arity), f.result))
        else:
            for k in nominals:
                out.append((name, k, tuple(at_sort(sig, k, s) for s in f.arity),
                            at_sort(sig, k, f.result)))
    return out


def enumerate_rigid_terms(sig: HFOLSignature, sort: HybridSort, max_depth: int,
                          extra_nominals: Iterable[str] = ()) -> list:
    """All rigid hybrid terms of ``sort`` with depth at most ``max_depth``.

    For the nominal sort the result lists nominal names.  Rigid constants that
    were added by a signature extension are ordinary symbols of ``sig``.
    """
    nominals = sorted(set(sig.nominals) | set(extra_nominals))
    if sort == NOMINAL_SORT:
        return list(nominals) if max_depth >= 1 else []
    symbols = _rigid_symbols(sig, nominals)
    by_sort: dict[HybridSort, list] = {}
    levels: list[dict[HybridSort, list]] = []
    for d in range(1, max_depth + 1):
        new: dict[HybridSort, list] = {}
        for name, at, arity, result in symbols:
            if not arity:
                if d == 1:
                    new.setdefault(result, []).append(Fn(name, (), at))
                continue
            if d == 1:
                continue
            pools = [by_sort.get(s, []) for s in arity]
            if not all(pools):
                continue
            prev = [set(levels[-1].get(s, [])) for s in arity] if levels else None
            for combo in _product(pools):
                if prev is not None and not any(c in prev[i] for i, c in enumerate(combo)):
                    continue
                new.setdefault(result, []).append(Fn(name, tuple(combo), at))
        levels.append(new)
        for s, ts in new.items():
            by_sort.setdefault(s, []).extend(ts)
    return list(by_sort.get(sort, []))


def _product(pools):
    if not pools:
        yield ()
        return
    for head in pools[0]:
        for rest in _product(pools[1:]):
            yield (head,) + rest
