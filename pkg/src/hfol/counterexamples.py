"""Scripted checks of the three interpolation counterexamples shipped as fixtures.

Each case re-runs every step of its argument that can be checked on finite
models and records a pass/fail line per step.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .semantics.consequence import consequence_bounded
from .semantics.kripke import KripkeHomomorphism, is_isomorphism, reduct
from .semantics.probes import equivalent_on, probe_sentences
from .semantics.reachability import ReplacementPlan, swap_unreachable, unreachable_elements
from .semantics.satisfaction import sat_all, sat_global
from .signature import pushout
from .squares import analyze_span, first_difference
from .syntax import translate

CASES = ("counter1", "counter2", "counter3")
SCHEMA = 1
PROBE_DEPTH = 3


@dataclass(frozen=True)
class Step:
    name: str
    passed: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class CaseReport:
    case: str
    steps: tuple = ()
    analysis: dict = field(default_factory=dict)

    __hash__ = None  # type: ignore[assignment]

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.steps)

    def as_dict(self) -> dict:
        return {"case": self.case, "passed": self.passed,
                "steps": [s.as_dict() for s in self.steps], "analysis": self.analysis}

    def text(self, color: bool = False) -> str:
        def mark(ok: bool) -> str:
            word = "PASS" if ok else "FAIL"
            if color:
                return f"\033[{32 if ok else 31}m{word}\033[0m"
            return word
        lines = [f"{self.case}: {mark(self.passed)}"]
        for s in self.steps:
            lines.append(f"  [{mark(s.passed)}] {s.name}" + (f": {s.detail}" if s.detail else ""))
        return "\n".join(lines)


def fixture_text(case: str) -> str:
    if case not in CASES:
        raise ValueError(f"unknown case '{case}'")
    return resources.files("hfol").joinpath("fixtures", f"{case}.hfol").read_text(encoding="utf-8")


def load_fixture(case: str):
    from .frontend.parser import parse_document
    return parse_document(fixture_text(case))


class _Recorder:
    def __init__(self):
        self.steps: list[Step] = []

    def check(self, name: str, fn) -> bool:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashing step is a failed step
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        self.steps.append(Step(name, bool(ok), detail))
        return bool(ok)


def _pushout_matches(ws):
    def run():
        span = ws.span(next(iter(ws.spans)))
        po = pushout(span.chi1, span.chi2)
        ok = (po.signature == ws.signatures["Dp"] and po.upsilon1 == ws.morphisms["u1"]
              and po.upsilon2 == ws.morphisms["u2"])
        return ok, "computed vertex and legs equal the declared ones" if ok else \
            "computed pushout differs from the declared one"
    return run


def _consequence(ws, premises, conclusions):
    def run():
        po = pushout(ws.morphisms["chi1"], ws.morphisms["chi2"])
        pre = [translate(po.upsilon1, p) for p in premises]
        checked = 0
        for phi in conclusions:
            v = consequence_bounded(po.signature, pre, translate(po.upsilon2, phi),
                                    max_worlds=2, max_carrier=2)
            checked += v.checked
            if not v.holds:
                return False, f"{v.status} for {phi}"
        return True, f"no countermodel among {checked} models (<=2 worlds, <=2 elements)"
    return run


def _satisfies(model, theory):
    def run():
        failing = [str(p) for p in theory if not sat_global(model, p)]
        return not failing, "all sentences hold" if not failing else f"fails {failing[0]}"
    return run


def _refutes(model, theory):
    def run():
        failing = [str(p) for p in theory if not sat_global(model, p)]
        return bool(failing), f"fails {failing[0]}" if failing else "all sentences hold"
    return run


def _equal(a, b, what):
    def run():
        diff = first_difference(a, b)
        return diff is None, what if diff is None else diff
    return run


def _probe_equivalent(a, b):
    def run():
        probes = probe_sentences(a.signature, PROBE_DEPTH)
        ok, witness = equivalent_on(a, b, probes)
        return ok, f"agree on {len(probes)} probes of depth {PROBE_DEPTH}" if ok else \
            f"separated by {witness}"
    return run


def _analysis(ws, expect):
    report = analyze_span(ws.span(next(iter(ws.spans))))

    def run():
        return expect(report)
    return report, run


def verify_counter1() -> CaseReport:
    ws = load_fixture("counter1")
    rec = _Recorder()
    chi1, chi2 = ws.morphisms["chi1"], ws.morphisms["chi2"]
    w1m1, vn, v2n2 = ws.models["W1M1"], ws.models["VN"], ws.models["V2N2"]
    phi1, phi2 = ws.theories["Phi1"], ws.theories["Phi2"]
    rec.check("pushout of the span is the declared vertex", _pushout_matches(ws))
    rec.check("translated Phi1 entails translated Phi2 (bounded)", _consequence(ws, phi1, phi2))
    rec.check("W1M1 satisfies Phi1", _satisfies(w1m1, phi1))
    red = reduct(chi1, w1m1)

    def changed_c3():
        diff = [f for f in sorted(red.signature.fun)
                if red.structures["w"].functions[f] != vn.structures["w"].functions[f]]
        same_rest = first_difference(red, vn) in (None, "function 'c3' differs at world 'w'")
        ok = diff == ["c3"] and same_rest and vn.structures["w"].functions["c3"][()] == "e"
        return ok, f"VN differs from the chi1-reduct exactly in {diff}"
    rec.check("VN is the chi1-reduct of W1M1 with c3 moved to e", changed_c3)

    def iso():
        ident = {"d": "d", "e": "e"}
        swap = {"d": "e", "e": "d"}
        h = KripkeHomomorphism(vn, red, {"w": "w"}, {"w": {"s1": ident, "s2": ident, "s3": swap}})
        return is_isomorphism(h), "identity on s1, s2 and the swap d<->e on s3"
    rec.check("h : VN -> reduct is an isomorphism", iso)
    rec.check("VN and the reduct agree on probes", _probe_equivalent(vn, red))
    rec.check("V2N2 is a chi2-expansion of VN", _equal(reduct(chi2, v2n2), vn, "reduct is exact"))
    rec.check("V2N2 does not satisfy Phi2", _refutes(v2n2, phi2))

    def expect(r):
        legs = [r.legs[0], r.legs[1]]
        ok = all(not (x.injective_sorts or x.injective_nominals) for x in legs) and not r.hypotheses
        return ok, "both legs identify sorts and nominals"
    report, run = _analysis(ws, expect)
    rec.check("span fails the injectivity hypotheses", run)
    return CaseReport("counter1", tuple(rec.steps), report.as_dict())


def verify_counter2() -> CaseReport:
    ws = load_fixture("counter2")
    rec = _Recorder()
    chi1, chi2 = ws.morphisms["chi1"], ws.morphisms["chi2"]
    w1m1, wm, w2m2 = ws.models["W1M1"], ws.models["WM"], ws.models["W2M2"]
    phi1, phi2 = ws.theories["Phi1"], ws.theories["Phi2"]
    rec.check("pushout of the span is the declared vertex", _pushout_matches(ws))
    rec.check("translated Phi1 entails translated Phi2 (bounded)", _consequence(ws, phi1, phi2))
    rec.check("W1M1 satisfies Phi1", _satisfies(w1m1, phi1))
    red = reduct(chi1, w1m1)
    swapped = swap_unreachable(red, ReplacementPlan(add={("w", "s"): {"d"}}))
    rec.check("adding the unreachable element d gives WM", _equal(swapped, wm, "models coincide"))

    def unreachable():
        u = unreachable_elements(wm)
        return u["w"]["s"] == {"d"}, f"unreachable elements of s: {sorted(u['w']['s'])}"
    rec.check("d is unreachable in WM", unreachable)
    rec.check("WM and the chi1-reduct agree on probes", _probe_equivalent(wm, red))
    rec.check("W2M2 is a chi2-expansion of WM", _equal(reduct(chi2, w2m2), wm, "reduct is exact"))

    def values():
        f = w2m2.structures["w"].functions
        return f["c"][()] == "e" and f["c2"][()] == "d", \
            f"c = {f['c'][()]}, c2 = {f['c2'][()]}"
    rec.check("W2M2 interprets c as e and c2 as d", values)
    rec.check("W2M2 does not satisfy Phi2", _refutes(w2m2, phi2))

    def expect(r):
        leg = r.legs[1]
        ok = leg.injective_sorts and leg.injective_nominals and not leg.protects.ok \
            and leg.protects.witness == "c2" and not r.hypotheses
        return ok, f"chi2 protection witness: {leg.protects.witness}"
    report, run = _analysis(ws, expect)
    rec.check("chi2 does not protect flexible symbols", run)
    return CaseReport("counter2", tuple(rec.steps), report.as_dict())


def verify_counter3() -> CaseReport:
    ws = load_fixture("counter3")
    rec = _Recorder()
    chi1, chi2 = ws.morphisms["chi1"], ws.morphisms["chi2"]
    w1m1, wm, w2m2 = ws.models["W1M1"], ws.models["WM"], ws.models["W2M2"]
    phi1, phi2 = ws.theories["Phi1"], ws.theories["Phi2"]
    rec.check("pushout of the span is the declared vertex", _pushout_matches(ws))

    def contained():
        po = pushout(chi1, chi2)
        left = {translate(po.upsilon1, p) for p in phi1}
        ok = all(translate(po.upsilon2, p) in left for p in phi2)
        return ok, "every translated sentence of Phi2 is a translated sentence of Phi1"
    rec.check("translated Phi1 entails translated Phi2", contained)
    rec.check("W1M1 satisfies Phi1", _satisfies(w1m1, phi1))
    red = reduct(chi1, w1m1)
    plan = ReplacementPlan(add={(w, "Nat"): {"h2"} for w in red.worlds},
                           fills={(w, "succ"): {("h2",): "h0"} for w in red.worlds})
    swapped = swap_unreachable(red, plan)
    rec.check("adding h2 with succ(h2) = h0 gives WM", _equal(swapped, wm, "models coincide"))

    def unreachable():
        u = unreachable_elements(wm)
        ok = all(u[w]["Nat"] == {"h2"} for w in wm.worlds)
        return ok, "h2 is outside the elements generated at every world"
    rec.check("h2 is unreachable in WM", unreachable)
    rec.check("WM and the chi1-reduct agree on probes", _probe_equivalent(wm, red))
    rec.check("W2M2 is a chi2-expansion of WM", _equal(reduct(chi2, w2m2), wm, "reduct is exact"))

    def succ2():
        f = w2m2.structures["w1"].functions["succ"]
        v = f[(f[("h2",)],)]
        return v == "h1", f"succ(succ(h2)) = {v} at w1"
    rec.check("succ(succ(h2)) is h1", succ2)
    rec.check("W2M2 does not satisfy Phi2", _refutes(w2m2, phi2))

    def expect(r):
        leg = r.legs[1]
        ok = not leg.preserves.ok and leg.preserves.witness == "Nat" and not r.hypotheses
        return ok, f"chi2 preservation witness: {leg.preserves.witness}"
    report, run = _analysis(ws, expect)
    rec.check("chi2 does not preserve flexible sorts", run)
    return CaseReport("counter3", tuple(rec.steps), report.as_dict())


_VERIFIERS = {"counter1": verify_counter1, "counter2": verify_counter2,
              "counter3": verify_counter3}


def verify_counterexample(case: str) -> CaseReport:
    if case not in _VERIFIERS:
        raise ValueError(f"unknown case '{case}'; expected one of {', '.join(CASES)}")
    return _VERIFIERS[case]()


def reports_json(reports) -> str:
    doc = {"schema": SCHEMA, "passed": all(r.passed for r in reports),
           "cases": [r.as_dict() for r in reports]}
    return json.dumps(doc, sort_keys=True, indent=2)
