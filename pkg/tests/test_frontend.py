import pytest
from hypothesis import given

from hfol.counterexamples import CASES, fixture_text
from hfol.frontend import ParseError, Workspace, parse_document, parse_sentence, parse_term
from hfol.frontend.parser import tokenize
from hfol.frontend.printer import print_model, print_signature, print_workspace, q
from hfol.generators import random_model, random_signature
from hfol.signature import make_signature
from hfol.syntax import Fn, Var

from conftest import rng_of, seeds
from oracle import model_key

DOC = """
% a small document
signature D {
  nominals: k, j;
  modalities: p/1, r/2;
  sorts: s flexible, nat rigid;
  ops: c : -> s; f : s -> s; zero : -> nat rigid;
  rels: q : s;
}
extension DC of D { nominals: z; consts: y : nat; }
morphism id : D -> D { sort s |-> s; sort nat |-> nat; nominal k |-> k; nominal j |-> j;
  mod p |-> p; mod r |-> r; op c |-> c; op f |-> f; op zero |-> zero; rel q |-> q; }
model M over D {
  worlds: w, v;
  nominal k = w; nominal j = v;
  mod p = {w}; mod r = {(w, v)};
  shared { carrier nat = {h}; op zero = h; }
  world w { carrier s = {a, b}; op c = a; op f = { (a) -> b; (b) -> b; }; rel q = {b}; }
  world v { carrier s = {a}; op c = a; op f = { (a) -> a; }; rel q = {}; }
}
theory T over D { @k p; <r> j; }
span S { left: id; right: id; base: T; }
"""


def test_tokenize_positions_and_comments():
    toks = tokenize("a |-> b % gone\n  <=> \"x y\"")
    assert [(t.kind, t.value, t.line, t.col) for t in toks] == [
        ("name", "a", 1, 1), ("sym", "|->", 1, 3), ("name", "b", 1, 7),
        ("sym", "<=>", 2, 3), ("quoted", "x y", 2, 7), ("eof", "", 2, 12)]


@pytest.mark.parametrize("text, message", [
    ("a $ b", r"unexpected character '\$'"),
    ('"open', "unterminated quoted name"),
    ('""', "empty quoted name"),
])
def test_tokenize_errors(text, message):
    with pytest.raises(ParseError, match=message):
        tokenize(text)


def test_document_parses_every_declaration():
    ws = parse_document(DOC)
    assert set(ws.signatures) == {"D"} and set(ws.extensions) == {"DC"}
    assert ws.extension_bases["DC"] == "D"
    assert ws.morphism_ends["id"] == ("D", "D")
    m = ws.models["M"]
    assert m.worlds == ("v", "w")  # worlds are kept sorted
    assert m.structures["v"].carriers["nat"] == {"h"}
    assert m.structures["w"].functions["f"] == {("a",): "b", ("b",): "b"}
    assert [t.text for t in ws.theories["T"]] == ["@k p", "<r> j"]
    assert ws.span("S").base == ws.theories["T"]
    assert ws.signature("DC").nominals >= {"k", "j", "z"}
    assert ws.signature_name(ws.signatures["D"]) == "D"
    assert ws.locations["M"][0] == 13


@pytest.mark.parametrize("text, line, col, fragment", [
    ("signature D { sorts: s; }\nsignature D { }", 2, 1, "already declared"),
    ("signature D {\n  sorts: s;\n  ops: c : -> t;\n}", 1, 1, "unknown sort 't'"),
    ("model M over X { }", 1, 14, "unknown signature 'X'"),
    ("signature D { nominals: k; }\nmodel M over D { worlds: w; }", 2, 1,
     "nominal 'k' is not interpreted"),
    ("signature D { modalities: m/3; }", 1, 29, "arity must be 1 or 2"),
    ("banana", 1, 1, "unknown declaration 'banana'"),
])
def test_document_errors_have_positions(text, line, col, fragment):
    with pytest.raises(ParseError) as err:
        parse_document(text)
    assert fragment in err.value.message
    assert (err.value.line, err.value.col) == (line, col)
    assert str(err.value).startswith(f"{line}:{col}: ")


SIG = make_signature(nominals=["k"], modalities=[("p", 1), ("r", 2)], sorts=["s"],
                     functions=[("c", (), "s"), ("f", ("s",), "s")])


@pytest.mark.parametrize("text, fragment", [
    ("p <=> p <=> p", "does not associate"),
    ("p p", "after sentence"),
    ("<p> k", "unknown modality 'p' of arity 2"),
    ("@zz p", "unknown nominal 'zz'"),
    ("g(c) = c", "unknown function symbol 'g'"),
    ("exists x:s . p", "flexible sort"),
    ("down c . p", "clashes"),
])
def test_sentence_errors(text, fragment):
    with pytest.raises(ParseError, match=fragment):
        parse_sentence(text, SIG)


def test_parse_term_and_scope():
    assert parse_term("f(f@k(c@k))", SIG) == Fn("f", (Fn("f", (Fn("c", (), "k"),), "k"),))
    assert parse_term("x", SIG, {"x": "s"}) == Var("x")
    with pytest.raises(ParseError, match="after term"):
        parse_term("c c", SIG)


def test_quoting():
    assert q("abc") == "abc"
    assert q("model") == '"model"'
    assert q("a b") == '"a b"'
    sig = make_signature(nominals=["model"], sorts=["s"])
    text = print_signature("signature", sig)
    assert text.startswith('signature "signature" {')
    assert parse_document(text).signatures["signature"] == sig


@pytest.mark.parametrize("case", CASES)
def test_fixtures_round_trip(case):
    ws = parse_document(fixture_text(case))
    again = parse_document(print_workspace(ws))
    assert again == ws
    assert print_workspace(again) == print_workspace(ws)


def test_document_round_trip():
    ws = parse_document(DOC)
    assert parse_document(print_workspace(ws)) == ws
    assert print_workspace(Workspace()) == ""


def test_parse_document_extends_a_workspace():
    ws = parse_document("signature A { sorts: s; }")
    parse_document("model M over A { worlds: w; world w { carrier s = {e}; } }", ws)
    assert set(ws.models) == {"M"}


@given(seeds)
def test_random_models_round_trip(seed):
    rng = rng_of(seed)
    sig = random_signature(rng)
    model = random_model(rng, sig)
    text = print_signature("D", sig) + "\n\n" + print_model("M", model, "D")
    ws = parse_document(text)
    assert ws.signatures["D"] == sig
    assert model_key(ws.models["M"]) == model_key(model)
