"""Canonical text for workspaces; the parser reads it back to an equal workspace."""

from __future__ import annotations

from ..semantics.kripke import KripkeStructure
from ..signature import HFOLSignature, SignatureExtension, SignatureMorphism
from .parser import PLAIN_NAME
from .workspace import Workspace

_RESERVED = {"not", "down", "exists", "forall", "true", "false", "rigid", "flexible", "of",
             "over", "carrier", "op", "rel", "nominal", "mod", "sort", "shared", "world",
             "nominals", "modalities", "sorts", "ops", "rels", "consts", "worlds", "left",
             "right", "base", "left_theory", "right_theory", "signature", "extension",
             "morphism", "model", "theory", "span"}


def q(name: str) -> str:
    """A name as it must be written in a document."""
    if PLAIN_NAME.match(name) and name not in _RESERVED:
        return name
    return f'"{name}"'


def _join(names) -> str:
    return ", ".join(q(x) for x in names)


def print_signature(name: str, sig: HFOLSignature) -> str:
    lines = [f"signature {q(name)} {{"]
    if sig.nominals:
        lines.append(f"  nominals: {_join(sorted(sig.nominals))};")
    if sig.mod:
        lines.append("  modalities: " + ", ".join(f"{q(m)}/{a}" for m, a in sorted(sig.mod.items()))
                     + ";")
    if sig.sorts:
        lines.append("  sorts: " + ", ".join(
            f"{q(s)} {'rigid' if sig.is_rigid_sort(s) else 'flexible'}" for s in sorted(sig.sorts))
            + ";")
    if sig.fun:
        lines.append("  ops:")
        for f, sym in sorted(sig.fun.items()):
            arity = " ".join(q(s) for s in sym.arity)
            arity = f"{arity} " if arity else ""
            kind = "rigid" if sig.is_rigid_fun(f) else "flexible"
            lines.append(f"    {q(f)} : {arity}-> {q(sym.result)} {kind};")
    if sig.rel:
        lines.append("  rels:")
        for r, sym in sorted(sig.rel.items()):
            arity = "".join(f" {q(s)}" for s in sym.arity)
            kind = "rigid" if sig.is_rigid_rel(r) else "flexible"
            lines.append(f"    {q(r)} :{arity} {kind};")
    lines.append("}")
    return "\n".join(lines)


def print_extension(name: str, ext: SignatureExtension, base_name: str) -> str:
    lines = [f"extension {q(name)} of {q(base_name)} {{"]
    if ext.nominal_vars:
        lines.append(f"  nominals: {_join(ext.nominal_vars)};")
    if ext.rigid_vars:
        lines.append("  consts:")
        for c, s in ext.rigid_vars:
            lines.append(f"    {q(c)} : {q(s)};")
    lines.append("}")
    return "\n".join(lines)


def print_morphism(name: str, chi: SignatureMorphism, src: str, tgt: str) -> str:
    lines = [f"morphism {q(name)} : {q(src)} -> {q(tgt)} {{"]
    for kind, mapping in (("sort", chi.sorts), ("nominal", chi.nominals), ("mod", chi.modalities),
                          ("op", chi.functions), ("rel", chi.relations)):
        for x, y in sorted(mapping.items()):
            lines.append(f"  {kind} {q(x)} |-> {q(y)};")
    lines.append("}")
    return "\n".join(lines)


def _tuple(t: tuple) -> str:
    return f"({_join(t)})"


def _items(ws, sig, symbols, indent: str) -> list[str]:
    """Lines for carriers, ops and rels of one world structure restricted to ``symbols``."""
    sorts, funs, rels = symbols
    lines = []
    for s in sorted(sorts):
        lines.append(f"{indent}carrier {q(s)} = {{{_join(sorted(ws.carriers[s]))}}};")
    for f in sorted(funs):
        table = ws.functions[f]
        if not sig.fun[f].arity:
            lines.append(f"{indent}op {q(f)} = {q(table[()])};")
            continue
        lines.append(f"{indent}op {q(f)} = {{")
        for args in sorted(table):
            lines.append(f"{indent}  {_tuple(args)} -> {q(table[args])};")
        lines.append(f"{indent}}};")
    for r in sorted(rels):
        tuples = sorted(ws.relations[r])
        if sig.rel[r].arity and len(sig.rel[r].arity) == 1:
            body = _join(t[0] for t in tuples)
        else:
            body = ", ".join(_tuple(t) for t in tuples)
        lines.append(f"{indent}rel {q(r)} = {{{body}}};")
    return lines


def print_model(name: str, model: KripkeStructure, sig_name: str) -> str:
    sig = model.signature
    lines = [f"model {q(name)} over {q(sig_name)} {{", f"  worlds: {_join(model.worlds)};"]
    for k in sorted(sig.nominals):
        lines.append(f"  nominal {q(k)} = {q(model.nominals[k])};")
    for m, arity in sorted(sig.mod.items()):
        val = model.modalities[m]
        body = _join(sorted(val)) if arity == 1 else ", ".join(_tuple(t) for t in sorted(val))
        lines.append(f"  mod {q(m)} = {{{body}}};")
    rigid = (sig.rigid_sorts, [f for f in sig.fun if sig.is_rigid_fun(f)],
             [r for r in sig.rel if sig.is_rigid_rel(r)])
    flexible = (sig.flexible_sorts, [f for f in sig.fun if not sig.is_rigid_fun(f)],
                [r for r in sig.rel if not sig.is_rigid_rel(r)])
    if any(rigid):
        lines.append("  shared {")
        lines += _items(model.structures[model.worlds[0]], sig, rigid, "    ")
        lines.append("  }")
    for w in model.worlds:
        body = _items(model.structures[w], sig, flexible, "    ")
        lines.append(f"  world {q(w)} {{")
        lines += body
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines)


def print_theory(name: str, sentences, sig_name: str) -> str:
    lines = [f"theory {q(name)} over {q(sig_name)} {{"]
    lines += [f"  {phi.text};" for phi in sentences]
    lines.append("}")
    return "\n".join(lines)


def print_span(name: str, fields: dict) -> str:
    lines = [f"span {q(name)} {{"]
    for key in ("left", "right", "base", "left_theory", "right_theory"):
        if key in fields:
            lines.append(f"  {key}: {q(fields[key])};")
    lines.append("}")
    return "\n".join(lines)


def print_workspace(ws: Workspace) -> str:
    blocks = [print_signature(n, s) for n, s in ws.signatures.items()]
    blocks += [print_extension(n, e, ws.extension_bases[n]) for n, e in ws.extensions.items()]
    blocks += [print_morphism(n, m, *ws.morphism_ends[n]) for n, m in ws.morphisms.items()]
    blocks += [print_model(n, m, ws.model_signatures[n]) for n, m in ws.models.items()]
    blocks += [print_theory(n, t, ws.theory_signatures[n]) for n, t in ws.theories.items()]
    blocks += [print_span(n, f) for n, f in ws.spans.items()]
    return "\n\n".join(blocks) + ("\n" if blocks else "")
