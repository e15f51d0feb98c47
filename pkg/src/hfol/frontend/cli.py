"""Command-line interface.

Every subcommand reads a ``.hfol`` document (a path, or the name of a shipped
fixture such as ``counter2``) and takes its remaining inputs as ``key=value``
arguments.  Exit status: 0 when all checks pass, 1 when a checked property
fails, 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from ..counterexamples import CASES, SCHEMA, fixture_text, reports_json, verify_counterexample
from ..errors import HFOLError, LiftError
from ..relativize import relativized_union_sig, rt_translate
from ..semantics.consequence import consequence_bounded
from ..semantics.kripke import reduct
from ..semantics.probes import equivalent_on, probe_sentences
from ..semantics.satisfaction import sat_global, sat_local
from ..signature import pushout
from ..squares import (amalgamate, amalgamate_up_to_iso, analyze_leg, first_difference,
                       lift_context, lift_expansion)
from ..syntax import translate
from .parser import ParseError, parse_document, parse_sentence
from .printer import print_model, print_morphism, print_signature
from .workspace import Workspace

OK, FAILED, INPUT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _color() -> bool:
    return os.environ.get("HFOL_COLOR", "").lower() in ("1", "true", "yes", "always")


def _load(source: str) -> Workspace:
    path = Path(source)
    if path.exists():
        text = path.read_text(encoding="utf-8")
    elif source in CASES:
        text = fixture_text(source)
    else:
        raise UsageError(f"no such file or fixture: '{source}'")
    return parse_document(text)


def _params(items: list[str], required: tuple, optional: tuple = ()) -> dict:
    out = {}
    for item in items:
        if "=" not in item:
            raise UsageError(f"expected key=value, got '{item}'")
        key, value = item.split("=", 1)
        if key not in required and key not in optional:
            raise UsageError(f"unknown parameter '{key}'")
        out[key] = value
    missing = [k for k in required if k not in out]
    if missing:
        raise UsageError(f"missing parameter '{missing[0]}'")
    return out


def _get(table: dict, name: str, kind: str):
    if name not in table:
        raise UsageError(f"unknown {kind} '{name}'")
    return table[name]


class _Out:
    """Collects a report as text lines and as a JSON document."""

    def __init__(self, command: str, as_json: bool):
        self.command = command
        self.as_json = as_json
        self.lines: list[str] = []
        self.data: dict = {}

    def line(self, text: str = "") -> None:
        self.lines.append(text)

    def verdict(self, ok: bool, text: str) -> None:
        word = "PASS" if ok else "FAIL"
        if _color():
            word = f"\033[{32 if ok else 31}m{word}\033[0m"
        self.lines.append(f"{word}: {text}")

    def emit(self, code: int) -> int:
        if self.as_json:
            doc = {"schema": SCHEMA, "command": self.command, "exit": code}
            doc.update(self.data)
            print(json.dumps(doc, sort_keys=True, indent=2))
        elif self.lines:
            print("\n".join(self.lines))
        return code


# --------------------------------------------------------------------------
# subcommands

def cmd_check_sig(args, out: _Out) -> int:
    ws = _load(args.file)
    names = [args.name] if args.name else list(ws.signatures) + list(ws.extensions)
    report = {}
    for n in names:
        sig = ws.signature(n)
        if sig is None:
            raise UsageError(f"unknown signature '{n}'")
        report[n] = {"nominals": len(sig.nominals), "modalities": len(sig.mod),
                     "sorts": len(sig.sorts), "rigid_sorts": len(sig.rigid_sorts),
                     "functions": len(sig.fun), "relations": len(sig.rel)}
        out.verdict(True, f"signature {n}: {len(sig.nominals)} nominals, {len(sig.mod)} "
                          f"modalities, {len(sig.sorts)} sorts ({len(sig.rigid_sorts)} rigid), "
                          f"{len(sig.fun)} functions, {len(sig.rel)} relations")
    out.data["signatures"] = report
    return out.emit(OK)


def cmd_check_morphism(args, out: _Out) -> int:
    ws = _load(args.file)
    p = _params(args.params, ("morphism",))
    chi = _get(ws.morphisms, p["morphism"], "morphism")
    leg = analyze_leg(chi)
    out.data["morphism"] = p["morphism"]
    out.data["report"] = leg.as_dict()
    ok = True
    out.line(f"morphism {p['morphism']}")
    if args.injective:
        good = leg.injective_sorts and leg.injective_nominals
        ok &= good
        out.verdict(good, f"injective on sorts: {leg.injective_sorts}, "
                          f"on nominals: {leg.injective_nominals}")
    if args.protects_flexible:
        ok &= leg.protects.ok
        detail = "protects flexible symbols" if leg.protects.ok else \
            f"does not protect flexible symbols: {leg.protects.reason} (witness {leg.protects.witness})"
        out.verdict(leg.protects.ok, detail)
    if not (args.injective or args.protects_flexible):
        for key, value in leg.as_dict().items():
            out.line(f"  {key}: {value}")
    return out.emit(OK if ok else FAILED)


def cmd_translate(args, out: _Out) -> int:
    ws = _load(args.file)
    p = _params(args.params, ("morphism", "sentence"))
    chi = _get(ws.morphisms, p["morphism"], "morphism")
    phi = parse_sentence(p["sentence"], chi.source)
    result = translate(chi, phi)
    out.data.update({"input": phi.text, "output": result.text})
    out.line(result.text)
    return out.emit(OK)


def cmd_reduct(args, out: _Out) -> int:
    ws = _load(args.file)
    p = _params(args.params, ("morphism", "model"))
    chi = _get(ws.morphisms, p["morphism"], "morphism")
    model = _get(ws.models, p["model"], "model")
    if model.signature != chi.target:
        raise UsageError(f"model '{p['model']}' is not over the target of '{p['morphism']}'")
    red = reduct(chi, model)
    src_name = ws.morphism_ends[p["morphism"]][0]
    text = print_model(f"{p['model']}_reduct", red, src_name)
    out.data["model"] = text
    out.line(text)
    return out.emit(OK)


def cmd_sat(args, out: _Out) -> int:
    ws = _load(args.file)
    p = _params(args.params, ("model", "sentence"))
    model = _get(ws.models, p["model"], "model")
    phi = parse_sentence(p["sentence"], model.signature)
    if args.world is not None:
        if args.world not in model.structures:
            raise UsageError(f"unknown world '{args.world}'")
        value = sat_local(model, args.world, phi)
        where = f"at world {args.world}"
    else:
        value = sat_global(model, phi)
        where = "globally"
    out.data.update({"sentence": phi.text, "model": p["model"], "holds": value,
                     "world": args.world})
    out.line(f"{'true' if value else 'false'}: {p['model']} {where} |= {phi.text}")
    return out.emit(OK if value else FAILED)


def cmd_pushout(args, out: _Out) -> int:
    ws = _load(args.file)
    p = _params(args.params, ("span",), ("compare",))
    _get(ws.spans, p["span"], "span")
    span = ws.span(p["span"])
    po = pushout(span.chi1, span.chi2)
    fields = ws.spans[p["span"]]
    d1, d2 = ws.morphism_ends[fields["left"]][1], ws.morphism_ends[fields["right"]][1]
    name = p.get("compare", "vertex")
    text = "\n\n".join([print_signature(name, po.signature),
                        print_morphism("upsilon1", po.upsilon1, d1, name),
                        print_morphism("upsilon2", po.upsilon2, d2, name)])
    out.data["pushout"] = text
    out.line(text)
    code = OK
    if "compare" in p:
        declared = _get(ws.signatures, p["compare"], "signature")
        same = declared == po.signature
        out.data["matches"] = same
        out.line()
        out.verdict(same, f"pushout vertex {'equals' if same else 'differs from'} "
                          f"declared signature {p['compare']}")
        code = OK if same else FAILED
    return out.emit(code)


def cmd_amalgamate(args, out: _Out) -> int:
    ws = _load(args.file)
    p = _params(args.params, ("span", "left", "right"))
    _get(ws.spans, p["span"], "span")
    span = ws.span(p["span"])
    m1 = _get(ws.models, p["left"], "model")
    m2 = _get(ws.models, p["right"], "model")
    po = pushout(span.chi1, span.chi2)
    glue = amalgamate_up_to_iso if args.up_to_iso else amalgamate
    try:
        model = glue(po, m1, m2)
    except HFOLError as exc:
        out.data["error"] = str(exc)
        out.verdict(False, str(exc))
        return out.emit(FAILED)
    text = print_model("amalgam", model, "vertex")
    out.data["model"] = text
    out.line(text)
    return out.emit(OK)


def cmd_relativize(args, out: _Out) -> int:
    ws = _load(args.file)
    p = _params(args.params, ("left", "right"), ("part", "sentence"))
    left = ws.signature(p["left"])
    right = ws.signature(p["right"])
    if left is None or right is None:
        raise UsageError("unknown signature")
    u = relativized_union_sig(left, right)
    if args.rt:
        if "sentence" not in p:
            raise UsageError("--rt needs sentence=...")
        part = int(p.get("part", "1"))
        if part not in (1, 2):
            raise UsageError("part must be 1 or 2")
        phi = parse_sentence(p["sentence"], left if part == 1 else right)
        result = rt_translate(u, part, phi)
        out.data.update({"input": phi.text, "output": result.text, "part": part})
        out.line(result.text)
        return out.emit(OK)
    text = print_signature("union", u.signature)
    axioms = [a.text for a in u.axioms]
    out.data.update({"signature": text, "axioms": axioms})
    out.line(text)
    out.line()
    out.line("axioms:")
    for a in axioms:
        out.line(f"  {a};")
    return out.emit(OK)


def cmd_lift(args, out: _Out) -> int:
    ws = _load(args.file)
    p = _params(args.params, ("morphism", "extension", "from", "model"))
    chi = _get(ws.morphisms, p["morphism"], "morphism")
    ext1 = _get(ws.extensions, p["extension"], "extension")
    v1 = _get(ws.models, p["from"], "model")
    wm = _get(ws.models, p["model"], "model")
    try:
        lifted = lift_expansion(chi, ext1, v1, wm)
    except LiftError as exc:
        out.data["error"] = {"code": exc.code, "message": str(exc)}
        out.verdict(False, f"{exc.code}: {exc}")
        return out.emit(FAILED)
    _, chi_c = lift_context(chi, ext1)
    exact = first_difference(reduct(chi_c, lifted), wm) is None
    probes = probe_sentences(v1.signature, args.probe_depth)
    equiv, witness = equivalent_on(lifted, v1, probes)
    text = print_model("lifted", lifted, p["extension"])
    out.data.update({"model": text, "reduct_exact": exact, "probe_equivalent": equiv,
                     "probes": len(probes)})
    out.line(text)
    out.line()
    out.verdict(exact, "reduct equals the given model")
    out.verdict(equiv, f"agrees with {p['from']} on {len(probes)} probes of depth {args.probe_depth}"
                if equiv else f"separated from {p['from']} by {witness}")
    return out.emit(OK if exact and equiv else FAILED)


def cmd_consequence(args, out: _Out) -> int:
    ws = _load(args.file)
    p = _params(args.params, ("theory", "sentence"))
    theory = _get(ws.theories, p["theory"], "theory")
    sig = ws.signature(ws.theory_signatures[p["theory"]])
    phi = parse_sentence(p["sentence"], sig)
    v = consequence_bounded(sig, theory, phi, args.max_worlds, args.max_carrier, args.budget)
    out.data.update({"status": v.status, "checked": v.checked, "max_worlds": v.max_worlds,
                     "max_carrier": v.max_carrier})
    if v.countermodel is not None:
        text = print_model("countermodel", v.countermodel, ws.theory_signatures[p["theory"]])
        out.data["countermodel"] = text
    out.verdict(v.holds, f"{v.status} after {v.checked} models "
                         f"(<= {v.max_worlds} worlds, <= {v.max_carrier} elements)")
    if v.countermodel is not None:
        out.line(out.data["countermodel"])
    return out.emit(OK if v.holds else FAILED)


def cmd_verify_paper(args, out: _Out) -> int:
    cases = CASES if args.case == "all" else (args.case,)
    reports = [verify_counterexample(c) for c in cases]
    ok = all(r.passed for r in reports)
    if out.as_json:
        print(reports_json(reports))
        return OK if ok else FAILED
    out.line("\n\n".join(r.text(color=_color()) for r in reports))
    return out.emit(OK if ok else FAILED)


def cmd_probe(args, out: _Out) -> int:
    ws = _load(args.file)
    p = _params(args.params, ("model",), ("other",))
    a = _get(ws.models, p["model"], "model")
    probes = probe_sentences(a.signature, args.depth, limit=args.limit)
    out.data.update({"depth": args.depth, "probes": len(probes)})
    if "other" in p:
        b = _get(ws.models, p["other"], "model")
        if a.signature != b.signature:
            raise UsageError("models are over different signatures")
        ok, witness = equivalent_on(a, b, probes)
        out.data.update({"equivalent": ok, "witness": witness.text if witness else None})
        out.verdict(ok, f"{p['model']} and {p['other']} agree on {len(probes)} probes"
                    if ok else f"separated by {witness}")
        return out.emit(OK if ok else FAILED)
    held = [phi.text for phi in probes if sat_global(a, phi)]
    out.data["holding"] = held
    out.line(f"{len(held)} of {len(probes)} probes of depth {args.depth} hold in {p['model']}")
    for t in held:
        out.line(f"  {t}")
    return out.emit(OK)


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hfol", description="Hybrid first-order logic toolkit")
    parser.add_argument("--json", action="store_true", help="emit a JSON report")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, params=True):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="emit a JSON report")
        if params:
            sp.add_argument("file", help="document path or fixture name")
            sp.add_argument("params", nargs="*", help="key=value arguments")
        return sp

    sp = add("check-sig", cmd_check_sig, "validate signatures", params=False)
    sp.add_argument("file")
    sp.add_argument("--name")
    sp = add("check-morphism", cmd_check_morphism, "check properties of a morphism")
    sp.add_argument("--protects-flexible", action="store_true")
    sp.add_argument("--injective", action="store_true")
    add("translate", cmd_translate, "translate a sentence along a morphism")
    add("reduct", cmd_reduct, "reduct of a model along a morphism")
    sp = add("sat", cmd_sat, "evaluate a sentence in a model")
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--world")
    group.add_argument("--global", dest="global_", action="store_true")
    add("pushout", cmd_pushout, "pushout of a span")
    sp = add("amalgamate", cmd_amalgamate, "amalgamate two models over a span's pushout")
    sp.add_argument("--up-to-iso", action="store_true")
    sp = add("relativize", cmd_relativize, "relativized union signature or guarded translation")
    sp.add_argument("--rt", action="store_true")
    sp = add("lift", cmd_lift, "lift an expansion along a protecting morphism")
    sp.add_argument("--probe-depth", type=int, default=3)
    sp = add("consequence", cmd_consequence, "bounded semantic consequence")
    sp.add_argument("--max-worlds", type=int, default=2)
    sp.add_argument("--max-carrier", type=int, default=2)
    sp.add_argument("--budget", type=int, default=200_000)
    sp = add("verify-paper", cmd_verify_paper, "check the shipped counterexamples", params=False)
    sp.add_argument("--case", choices=CASES + ("all",), default="all")
    sp = add("probe", cmd_probe, "probe sentences of a model")
    sp.add_argument("--depth", type=int, default=2)
    sp.add_argument("--limit", type=int, default=400)
    return parser


def run_cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        # key=value arguments may follow options, which argparse leaves over
        args, extra = parser.parse_known_args(argv)
        if extra:
            if not hasattr(args, "params") or any(x.startswith("-") or "=" not in x for x in extra):
                parser.error(f"unrecognized arguments: {' '.join(extra)}")
            args.params = list(args.params) + extra
    except SystemExit as exc:  # argparse reports usage errors itself
        return OK if exc.code in (0, None) else INPUT_ERROR
    out = _Out(args.command, bool(getattr(args, "json", False)))
    try:
        return args.func(args, out)
    except (UsageError, ParseError, HFOLError, ValueError) as exc:
        if out.as_json:
            print(json.dumps({"schema": SCHEMA, "command": args.command, "exit": INPUT_ERROR,
                              "error": str(exc)}, sort_keys=True, indent=2))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
