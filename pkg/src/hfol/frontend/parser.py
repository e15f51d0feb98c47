"""Parser for ``.hfol`` documents and for sentences in concrete syntax.

A document is a sequence of declarations::

    signature D { nominals: k; modalities: m/1, l/2; sorts: s flexible;
                  ops: c : -> s; f : s s -> s rigid; rels: p : s; }
    extension DC of D { nominals: z; consts: y : s; }
    morphism chi : D -> D1 { sort s |-> t; nominal k |-> k; op c |-> d; }
    model M over D { worlds: w; nominal k = w; mod m = {w};
                     shared { carrier s = {a}; }
                     world w { op c = a; op f = { (a, a) -> a; }; rel p = {a}; } }
    theory T over D { @k c = c; forall x:s . x = c; }
    span S { left: chi1; right: chi2; base: T; left_theory: T1; right_theory: T2; }

``%`` starts a comment that runs to the end of the line.  Names that clash
with keywords can be written in double quotes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import HFOLError
from ..semantics.kripke import KripkeStructure, WorldStructure, validate_model
from ..signature import (NOMINAL_SORT, SignatureMorphism, extend, make_signature,
                         validate_morphism, validate_signature)
from ..syntax import (FALSE, TRUE, And, At, Box, Diamond, Eq, Exists, Fn, Forall, Iff, Implies,
                      Nominal, Not, Or, Prop, Rel, Sentence, Store, Var, wellformed)
from .workspace import Workspace


class ParseError(HFOLError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line, self.col, self.message = line, col, message
        super().__init__(f"{line}:{col}: {message}" if line else message)


@dataclass(frozen=True)
class Token:
    kind: str  # "name", "quoted", "sym" or "eof"
    value: str
    line: int
    col: int


_SYMBOLS = ("|->", "<=>", "->", "=>", "\\/", "/\\", "{", "}", "(", ")", "[", "]", "<", ">",
            ",", ";", ":", ".", "=", "@", "/")
_NAME = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_'#]*")
PLAIN_NAME = re.compile(r"\A[A-Za-z0-9_][A-Za-z0-9_'#]*\Z")


def tokenize(text: str) -> list[Token]:
    tokens, i, line, col = [], 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        if ch == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == '"':
            j = text.find('"', i + 1)
            if j < 0 or "\n" in text[i:j]:
                raise ParseError("unterminated quoted name", line, col)
            if j == i + 1:
                raise ParseError("empty quoted name", line, col)
            tokens.append(Token("quoted", text[i + 1:j], line, col))
            col += j + 1 - i
            i = j + 1
            continue
        m = _NAME.match(text, i)
        if m:
            tokens.append(Token("name", m.group(), line, col))
            col += m.end() - i
            i = m.end()
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token("sym", sym, line, col))
                i, col = i + len(sym), col + len(sym)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


_SENTENCE_KEYWORDS = {"not", "down", "exists", "forall", "true", "false"}
_SECTIONS = {"nominals", "modalities", "sorts", "ops", "rels", "consts", "worlds",
             "left", "right", "base", "left_theory", "right_theory"}


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    # token helpers ------------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col)

    def at_sym(self, value: str) -> bool:
        return self.tok.kind == "sym" and self.tok.value == value

    def at_word(self, value: str) -> bool:
        return self.tok.kind == "name" and self.tok.value == value

    def expect_sym(self, value: str) -> Token:
        if not self.at_sym(value):
            raise self.error(f"expected '{value}', found {self._describe()}")
        t = self.tok
        self.pos += 1
        return t

    def expect_word(self, value: str) -> Token:
        if not self.at_word(value):
            raise self.error(f"expected '{value}', found {self._describe()}")
        t = self.tok
        self.pos += 1
        return t

    def name(self, what: str = "name") -> str:
        if self.tok.kind not in ("name", "quoted"):
            raise self.error(f"expected {what}, found {self._describe()}")
        value = self.tok.value
        self.pos += 1
        return value

    def accept_sym(self, value: str) -> bool:
        if self.at_sym(value):
            self.pos += 1
            return True
        return False

    def _describe(self) -> str:
        t = self.tok
        return "end of input" if t.kind == "eof" else f"'{t.value}'"

    def at_section(self) -> bool:
        return self.tok.kind == "name" and self.tok.value in _SECTIONS and \
            self.peek().kind == "sym" and self.peek().value == ":"

    # sentences ------------------------------------------------------------
    def sentence(self, sig, scope: dict) -> Sentence:
        left = self.implication(sig, scope)
        if self.accept_sym("<=>"):
            right = self.implication(sig, scope)
            if self.at_sym("<=>"):
                raise self.error("'<=>' does not associate; add parentheses")
            left = Iff(left, right)
        return left

    def implication(self, sig, scope):
        left = self.disjunction(sig, scope)
        if self.accept_sym("=>"):
            return Implies(left, self.implication(sig, scope))
        return left

    def disjunction(self, sig, scope):
        items = [self.conjunction(sig, scope)]
        while self.at_sym("\\/") and not (self.peek().kind == "sym" and self.peek().value == "{"):
            self.pos += 1
            items.append(self.conjunction(sig, scope))
        return items[0] if len(items) == 1 else Or(tuple(items))

    def conjunction(self, sig, scope):
        items = [self.unary(sig, scope)]
        while self.at_sym("/\\") and not (self.peek().kind == "sym" and self.peek().value == "{"):
            self.pos += 1
            items.append(self.unary(sig, scope))
        return items[0] if len(items) == 1 else And(tuple(items))

    def unary(self, sig, scope):
        if self.at_word("not"):
            self.pos += 1
            return Not(self.unary(sig, scope))
        if self.at_sym("@"):
            self.pos += 1
            tok = self.tok
            k = self.name("nominal")
            self._check_nominal(sig, scope, k, tok)
            return At(k, self.unary(sig, scope))
        if self.at_sym("<"):
            self.pos += 1
            tok = self.tok
            m = self.name("modality")
            self._check_modality(sig, m, 2, tok)
            self.expect_sym(">")
            return Diamond(m, self.unary(sig, scope))
        if self.at_sym("["):
            self.pos += 1
            tok = self.tok
            m = self.name("modality")
            self._check_modality(sig, m, 2, tok)
            self.expect_sym("]")
            return Box(m, self.unary(sig, scope))
        if self.at_word("down"):
            self.pos += 1
            tok = self.tok
            z = self.name("variable")
            self._check_var(sig, z, tok)
            self.expect_sym(".")
            inner = dict(scope)
            inner[z] = NOMINAL_SORT
            return Store(z, self.sentence(sig, inner))
        if self.at_word("exists") or self.at_word("forall"):
            quant = self.tok.value
            self.pos += 1
            variables = []
            inner = dict(scope)
            while True:
                tok = self.tok
                x = self.name("variable")
                self._check_var(sig, x, tok)
                self.expect_sym(":")
                stok = self.tok
                s = self.name("sort")
                if s != NOMINAL_SORT and s not in sig.base.sorts:
                    raise self.error(f"unknown sort '{s}'", stok)
                if any(x == v for v, _ in variables):
                    raise self.error(f"variable '{x}' bound twice", tok)
                variables.append((x, s))
                inner[x] = s
                if not self.accept_sym(","):
                    break
            self.expect_sym(".")
            body = self.sentence(sig, inner)
            return (Exists if quant == "exists" else Forall)(tuple(variables), body)
        return self.atom(sig, scope)

    def atom(self, sig, scope):
        if self.accept_sym("("):
            phi = self.sentence(sig, scope)
            self.expect_sym(")")
            return phi
        if self.at_word("true"):
            self.pos += 1
            return TRUE
        if self.at_word("false"):
            self.pos += 1
            return FALSE
        for sym, cls in (("\\/", Or), ("/\\", And)):
            if self.at_sym(sym):
                self.pos += 1
                self.expect_sym("{")
                items = []
                if not self.at_sym("}"):
                    items.append(self.sentence(sig, scope))
                    while self.accept_sym(","):
                        items.append(self.sentence(sig, scope))
                self.expect_sym("}")
                return cls(tuple(items))
        tok = self.tok
        if tok.kind == "name" and tok.value in _SENTENCE_KEYWORDS:
            raise self.error(f"unexpected keyword '{tok.value}'")
        name = self.name("sentence")
        at = None
        if self.at_sym("@") and self.peek().kind in ("name", "quoted"):
            self.pos += 1
            atok = self.tok
            at = self.name("nominal")
            self._check_nominal(sig, scope, at, atok)
        args = ()
        if self.at_sym("("):
            args = self.term_args(sig, scope)
        if self.at_sym("="):
            self.pos += 1
            left = self._term_from(sig, scope, name, at, args, tok)
            right = self.term(sig, scope)
            return Eq(left, right)
        if name in sig.rel:
            return Rel(name, args, at)
        if at is not None or args:
            raise self.error(f"'{name}' is not a relation", tok)
        if scope.get(name) == NOMINAL_SORT or name in sig.nominals:
            return Nominal(name)
        if sig.mod.get(name) == 1:
            return Prop(name)
        raise self.error(f"unknown name '{name}' in sentence position", tok)

    def term_args(self, sig, scope) -> tuple:
        self.expect_sym("(")
        args = [self.term(sig, scope)]
        while self.accept_sym(","):
            args.append(self.term(sig, scope))
        self.expect_sym(")")
        return tuple(args)

    def term(self, sig, scope):
        tok = self.tok
        name = self.name("term")
        at = None
        if self.at_sym("@") and self.peek().kind in ("name", "quoted"):
            self.pos += 1
            atok = self.tok
            at = self.name("nominal")
            self._check_nominal(sig, scope, at, atok)
        args = self.term_args(sig, scope) if self.at_sym("(") else ()
        return self._term_from(sig, scope, name, at, args, tok)

    def _term_from(self, sig, scope, name, at, args, tok):
        if name in scope and scope[name] != NOMINAL_SORT:
            if at is not None or args:
                raise self.error(f"variable '{name}' cannot be applied", tok)
            return Var(name)
        if name not in sig.fun:
            raise self.error(f"unknown function symbol '{name}'", tok)
        return Fn(name, args, at)

    def _check_nominal(self, sig, scope, k, tok):
        if scope.get(k) == NOMINAL_SORT or (k not in scope and k in sig.nominals):
            return
        raise self.error(f"unknown nominal '{k}'", tok)

    def _check_modality(self, sig, m, arity, tok):
        if sig.mod.get(m) != arity:
            raise self.error(f"unknown modality '{m}' of arity {arity}", tok)

    def _check_var(self, sig, x, tok):
        if x in sig.symbol_names or x in sig.base.sorts:
            raise self.error(f"variable '{x}' clashes with a symbol of the signature", tok)
        if x in _SENTENCE_KEYWORDS:
            raise self.error(f"variable '{x}' is a keyword", tok)

    # declarations ---------------------------------------------------------
    def document(self, ws: Workspace) -> Workspace:
        while self.tok.kind != "eof":
            tok = self.tok
            if tok.kind != "name":
                raise self.error(f"expected a declaration, found {self._describe()}")
            handler = {
                "signature": self.signature_decl, "extension": self.extension_decl,
                "morphism": self.morphism_decl, "model": self.model_decl,
                "theory": self.theory_decl, "span": self.span_decl,
            }.get(tok.value)
            if handler is None:
                raise self.error(f"unknown declaration '{tok.value}'")
            self.pos += 1
            handler(ws, tok)
        return ws

    def _declare(self, ws: Workspace, kind: str, tok: Token) -> str:
        name = self.name(f"{kind} name")
        if ws.has(name):
            raise self.error(f"'{name}' is already declared", tok)
        ws.locations[name] = (tok.line, tok.col)
        return name

    def _list(self) -> list[str]:
        items = []
        if self.at_sym(";"):
            return items
        items.append(self.name())
        while self.accept_sym(","):
            items.append(self.name())
        return items

    def _rigidity(self, default: bool = False) -> bool:
        if self.at_word("rigid"):
            self.pos += 1
            return True
        if self.at_word("flexible"):
            self.pos += 1
            return False
        return default

    def signature_decl(self, ws: Workspace, tok: Token) -> None:
        name = self._declare(ws, "signature", tok)
        self.expect_sym("{")
        nominals, modalities, sorts, functions, relations = [], [], {}, [], []
        while not self.at_sym("}"):
            if not self.at_section():
                raise self.error(f"expected a section, found {self._describe()}")
            section = self.name()
            self.expect_sym(":")
            if section == "nominals":
                nominals += self._list()
                self.expect_sym(";")
            elif section == "modalities":
                while not self.at_sym(";"):
                    m = self.name("modality")
                    self.expect_sym("/")
                    atok = self.tok
                    arity = self.name("arity")
                    if arity not in ("1", "2"):
                        raise self.error("modality arity must be 1 or 2", atok)
                    modalities.append((m, int(arity)))
                    if not self.accept_sym(","):
                        break
                self.expect_sym(";")
            elif section == "sorts":
                while not self.at_sym(";"):
                    stok = self.tok
                    s = self.name("sort")
                    if s in sorts:
                        raise self.error(f"sort '{s}' declared twice", stok)
                    sorts[s] = self._rigidity()
                    if not self.accept_sym(","):
                        break
                self.expect_sym(";")
            elif section in ("ops", "rels"):
                while not (self.at_sym("}") or self.at_section()):
                    f = self.name("symbol")
                    self.expect_sym(":")
                    arity = []
                    while self.tok.kind in ("name", "quoted") and not (
                            self.at_word("rigid") or self.at_word("flexible")):
                        arity.append(self.name())
                    if section == "ops":
                        self.expect_sym("->")
                        result = self.name("result sort")
                        functions.append((f, tuple(arity), result, self._rigidity()))
                    else:
                        relations.append((f, tuple(arity), self._rigidity()))
                    self.expect_sym(";")
            else:
                raise self.error(f"section '{section}' is not allowed in a signature")
        self.expect_sym("}")
        sig = make_signature(nominals=nominals, modalities=modalities, sorts=sorts,
                             functions=functions, relations=relations)
        diags = validate_signature(sig)
        for (a, b) in ((nominals, "nominal"), ([m for m, _ in modalities], "modality")):
            if len(set(a)) != len(a):
                diags.append(f"duplicate {b}")
        if len({f for f, *_ in functions}) != len(functions):
            diags.append("duplicate function symbol")
        if len({r for r, *_ in relations}) != len(relations):
            diags.append("duplicate relation symbol")
        if diags:
            raise ParseError(f"signature '{name}': {diags[0]}", tok.line, tok.col)
        ws.signatures[name] = sig

    def _signature_ref(self, ws: Workspace):
        tok = self.tok
        ref = self.name("signature name")
        sig = ws.signature(ref)
        if sig is None:
            raise self.error(f"unknown signature '{ref}'", tok)
        return ref, sig

    def extension_decl(self, ws: Workspace, tok: Token) -> None:
        name = self._declare(ws, "extension", tok)
        self.expect_word("of")
        base_name, base = self._signature_ref(ws)
        self.expect_sym("{")
        added = []
        while not self.at_sym("}"):
            if not self.at_section():
                raise self.error(f"expected a section, found {self._describe()}")
            section = self.name()
            self.expect_sym(":")
            if section == "nominals":
                added += [(z, NOMINAL_SORT) for z in self._list()]
                self.expect_sym(";")
            elif section == "consts":
                while not (self.at_sym("}") or self.at_section()):
                    c = self.name("constant")
                    self.expect_sym(":")
                    s = self.name("sort")
                    added.append((c, s))
                    self.expect_sym(";")
            else:
                raise self.error(f"section '{section}' is not allowed in an extension")
        self.expect_sym("}")
        try:
            ext = extend(base, added)
        except HFOLError as exc:
            raise ParseError(f"extension '{name}': {exc}", tok.line, tok.col) from exc
        ws.extensions[name] = ext
        ws.extension_bases[name] = base_name

    def morphism_decl(self, ws: Workspace, tok: Token) -> None:
        name = self._declare(ws, "morphism", tok)
        self.expect_sym(":")
        src_name, src = self._signature_ref(ws)
        self.expect_sym("->")
        tgt_name, tgt = self._signature_ref(ws)
        self.expect_sym("{")
        maps = {"sort": {}, "nominal": {}, "mod": {}, "op": {}, "rel": {}}
        known = {"sort": src.base.sorts, "nominal": src.nominals, "mod": src.mod,
                 "op": src.fun, "rel": src.rel}
        while not self.at_sym("}"):
            ktok = self.tok
            kind = self.name("mapping kind")
            if kind not in maps:
                raise self.error(f"unknown mapping kind '{kind}'", ktok)
            xtok = self.tok
            x = self.name()
            if x not in known[kind]:
                raise self.error(f"'{x}' is not a {kind} of '{src_name}'", xtok)
            if x in maps[kind]:
                raise self.error(f"{kind} '{x}' mapped twice", xtok)
            self.expect_sym("|->")
            maps[kind][x] = self.name()
            self.expect_sym(";")
        self.expect_sym("}")
        # unmapped symbols go to the symbol of the same name
        for kind, names in known.items():
            for x in names:
                maps[kind].setdefault(x, x)
        chi = SignatureMorphism(src, tgt, maps["sort"], maps["nominal"], maps["mod"],
                                maps["op"], maps["rel"])
        diags = validate_morphism(chi)
        if diags:
            raise ParseError(f"morphism '{name}': {diags[0]}", tok.line, tok.col)
        ws.morphisms[name] = chi
        ws.morphism_ends[name] = (src_name, tgt_name)

    def _elements(self) -> list[str]:
        self.expect_sym("{")
        items = []
        if not self.at_sym("}"):
            items.append(self.name("element"))
            while self.accept_sym(","):
                items.append(self.name("element"))
        self.expect_sym("}")
        return items

    def _tuple(self) -> tuple:
        if self.accept_sym("("):
            items = []
            if not self.at_sym(")"):
                items.append(self.name("element"))
                while self.accept_sym(","):
                    items.append(self.name("element"))
            self.expect_sym(")")
            return tuple(items)
        return (self.name("element"),)

    def _tuples(self) -> list[tuple]:
        self.expect_sym("{")
        items = []
        if not self.at_sym("}"):
            items.append(self._tuple())
            while self.accept_sym(","):
                items.append(self._tuple())
        self.expect_sym("}")
        return items

    def _world_items(self, sig, target: dict) -> None:
        """Parse ``carrier``/``op``/``rel`` items into ``target`` until '}'."""
        while not self.at_sym("}"):
            ktok = self.tok
            kind = self.name("item")
            stok = self.tok
            sym = self.name("symbol")
            if kind == "carrier":
                if sym not in sig.base.sorts:
                    raise self.error(f"unknown sort '{sym}'", stok)
                self.expect_sym("=")
                target.setdefault("carriers", {})[sym] = frozenset(self._elements())
            elif kind == "op":
                if sym not in sig.fun:
                    raise self.error(f"unknown function symbol '{sym}'", stok)
                self.expect_sym("=")
                if self.at_sym("{"):
                    self.pos += 1
                    table = {}
                    while not self.at_sym("}"):
                        args = self._tuple()
                        self.expect_sym("->")
                        table[args] = self.name("element")
                        self.expect_sym(";")
                    self.expect_sym("}")
                else:
                    table = {(): self.name("element")}
                target.setdefault("functions", {})[sym] = table
            elif kind == "rel":
                if sym not in sig.rel:
                    raise self.error(f"unknown relation symbol '{sym}'", stok)
                self.expect_sym("=")
                target.setdefault("relations", {})[sym] = frozenset(self._tuples())
            else:
                raise self.error(f"unknown item '{kind}'", ktok)
            self.expect_sym(";")

    def model_decl(self, ws: Workspace, tok: Token) -> None:
        name = self._declare(ws, "model", tok)
        self.expect_word("over")
        sig_name, sig = self._signature_ref(ws)
        self.expect_sym("{")
        worlds: list[str] = []
        nominals: dict[str, str] = {}
        mods: dict[str, frozenset] = {}
        shared: dict = {}
        per_world: dict[str, dict] = {}
        while not self.at_sym("}"):
            if self.at_section() and self.tok.value == "worlds":
                self.pos += 2
                worlds += self._list()
                self.expect_sym(";")
                continue
            ktok = self.tok
            kind = self.name("model item")
            if kind == "nominal":
                ntok = self.tok
                k = self.name("nominal")
                if k not in sig.nominals:
                    raise self.error(f"unknown nominal '{k}'", ntok)
                self.expect_sym("=")
                nominals[k] = self.name("world")
                self.expect_sym(";")
            elif kind == "mod":
                mtok = self.tok
                m = self.name("modality")
                if m not in sig.mod:
                    raise self.error(f"unknown modality '{m}'", mtok)
                self.expect_sym("=")
                tuples = self._tuples()
                if any(len(t) != sig.mod[m] for t in tuples):
                    raise self.error(f"modality '{m}' needs entries of length {sig.mod[m]}", mtok)
                mods[m] = frozenset(t[0] for t in tuples) if sig.mod[m] == 1 else frozenset(tuples)
                self.expect_sym(";")
            elif kind == "shared":
                self.expect_sym("{")
                self._world_items(sig, shared)
                self.expect_sym("}")
            elif kind == "world":
                wtok = self.tok
                w = self.name("world")
                if w in per_world:
                    raise self.error(f"world '{w}' described twice", wtok)
                self.expect_sym("{")
                per_world[w] = {}
                self._world_items(sig, per_world[w])
                self.expect_sym("}")
            else:
                raise self.error(f"unknown model item '{kind}'", ktok)
        self.expect_sym("}")
        if not worlds:
            raise ParseError(f"model '{name}' declares no worlds", tok.line, tok.col)
        if len(set(worlds)) != len(worlds):
            raise ParseError(f"model '{name}' repeats a world", tok.line, tok.col)
        for w in per_world:
            if w not in worlds:
                raise ParseError(f"model '{name}': unknown world '{w}'", tok.line, tok.col)
        structures = {}
        for w in worlds:
            parts = {"carriers": {}, "functions": {}, "relations": {}}
            for src in (shared, per_world.get(w, {})):
                for key in parts:
                    parts[key].update(src.get(key, {}))
            missing = [s for s in sig.base.sorts if s not in parts["carriers"]]
            missing += [f for f in sig.fun if f not in parts["functions"]]
            if missing:
                raise ParseError(f"model '{name}': no interpretation of '{sorted(missing)[0]}' "
                                 f"at world '{w}'", tok.line, tok.col)
            for r in sig.rel:
                parts["relations"].setdefault(r, frozenset())
            structures[w] = WorldStructure(parts["carriers"], parts["functions"],
                                           parts["relations"])
        for m in sig.mod:
            mods.setdefault(m, frozenset())
        missing_noms = sorted(set(sig.nominals) - set(nominals))
        if missing_noms:
            raise ParseError(f"model '{name}': nominal '{missing_noms[0]}' is not interpreted",
                             tok.line, tok.col)
        model = KripkeStructure(sig, tuple(worlds), nominals, mods, structures)
        diags = validate_model(model)
        if diags:
            raise ParseError(f"model '{name}': {diags[0]}", tok.line, tok.col)
        ws.models[name] = model
        ws.model_signatures[name] = sig_name

    def theory_decl(self, ws: Workspace, tok: Token) -> None:
        name = self._declare(ws, "theory", tok)
        self.expect_word("over")
        sig_name, sig = self._signature_ref(ws)
        self.expect_sym("{")
        sentences = []
        while not self.at_sym("}"):
            stok = self.tok
            phi = self.sentence(sig, {})
            diags = wellformed(sig, phi)
            if diags:
                raise self.error(diags[0], stok)
            sentences.append(phi)
            self.expect_sym(";")
        self.expect_sym("}")
        ws.theories[name] = tuple(sentences)
        ws.theory_signatures[name] = sig_name

    def span_decl(self, ws: Workspace, tok: Token) -> None:
        name = self._declare(ws, "span", tok)
        self.expect_sym("{")
        fields: dict[str, str] = {}
        while not self.at_sym("}"):
            if not self.at_section():
                raise self.error(f"expected a span field, found {self._describe()}")
            ftok = self.tok
            key = self.name()
            if key not in ("left", "right", "base", "left_theory", "right_theory"):
                raise self.error(f"unknown span field '{key}'", ftok)
            self.expect_sym(":")
            vtok = self.tok
            value = self.name()
            table = ws.morphisms if key in ("left", "right") else ws.theories
            if value not in table:
                kind = "morphism" if key in ("left", "right") else "theory"
                raise self.error(f"unknown {kind} '{value}'", vtok)
            fields[key] = value
            self.expect_sym(";")
        self.expect_sym("}")
        if "left" not in fields or "right" not in fields:
            raise ParseError(f"span '{name}' needs both legs", tok.line, tok.col)
        left, right = ws.morphisms[fields["left"]], ws.morphisms[fields["right"]]
        if left.source != right.source:
            raise ParseError(f"span '{name}': legs have different sources", tok.line, tok.col)
        ws.spans[name] = fields


def parse_document(text: str, ws: Workspace | None = None) -> Workspace:
    """Parse a document, adding its declarations to ``ws`` (a fresh workspace by default)."""
    ws = ws if ws is not None else Workspace()
    return _Parser(text).document(ws)


def parse_sentence(text: str, sig, scope: dict | None = None) -> Sentence:
    """Parse one sentence over ``sig``; ``scope`` maps free variable names to sorts."""
    p = _Parser(text)
    start = p.tok
    phi = p.sentence(sig, dict(scope or {}))
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p._describe()} after sentence")
    diags = wellformed(sig, phi, scope)
    if diags:
        raise p.error(diags[0], start)
    return phi


def parse_term(text: str, sig, scope: dict | None = None):
    p = _Parser(text)
    t = p.term(sig, dict(scope or {}))
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p._describe()} after term")
    return t
