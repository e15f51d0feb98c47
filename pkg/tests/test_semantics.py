import pytest
from hypothesis import given

from hfol.errors import ModelError, PlanError
from hfol.frontend import parse_sentence
from hfol.generators import (rename_elements, random_model, random_morphism, random_sentence,
                             random_signature, random_swap_plan)
from hfol.semantics import (KripkeHomomorphism, ReplacementPlan, build_model, check_model,
                            consequence_bounded, enumerate_models, equivalent_on, eval_term,
                            expansion_count, expansions, find_isomorphism, find_model,
                            generated_elements, homomorphism_violations, identity_homomorphism,
                            inverse, is_homomorphism, is_isomorphism, is_reachable,
                            probe_sentences, reachability_report, reduct, sat_global, sat_local,
                            satisfying_worlds, swap_unreachable, term_denotations,
                            unreachable_elements, validate_model)
from hfol.signature import extend, identity, make_signature
from hfol.syntax import Fn, Prop

from conftest import rng_of, seeds
from oracle import model_key, worlds_satisfying

SIG = make_signature(nominals=["k", "j"], modalities=[("p", 1), ("r", 2)],
                     sorts={"s": False, "nat": True},
                     functions=[("c", (), "s"), ("f", ("s",), "s"), ("zero", (), "nat", True),
                                ("succ", ("nat",), "nat", True)],
                     relations=[("q", ("s",))])


def _model():
    """Two worlds; s has two elements at w1 and one at w2; nat is Z2."""
    z2 = {"h0": "h1", "h1": "h0"}
    return build_model(
        SIG, ["w1", "w2"], {"k": "w1", "j": "w2"},
        {"p": ["w1"], "r": [("w1", "w2"), ("w2", "w2")]},
        {"w1": {"s": ["a", "b"], "nat": ["h0", "h1"]}, "w2": {"s": ["a"], "nat": ["h0", "h1"]}},
        {"w1": {"c": "a", "f": {"a": "b", "b": "b"}, "zero": "h0", "succ": z2},
         "w2": {"c": "a", "f": {"a": "a"}, "zero": "h0", "succ": z2}},
        {"w1": {"q": ["b"]}, "w2": {"q": []}},
    )


# ---------------------------------------------------------------- hand-computed satisfaction

@pytest.mark.parametrize("text, worlds", [
    ("p", ("w1",)),
    ("k", ("w1",)),
    ("q(f(c))", ("w1",)),
    ("<r> j", ("w1", "w2")),
    ("[r] not p", ("w1", "w2")),
    ("@j not q(c)", ("w1", "w2")),
    ("f@k(c@k) = f@k(f@k(c@k))", ("w1", "w2")),
    ("f(c) = c", ("w2",)),
    ("down x . <r> x", ("w2",)),
    ("forall x:nat . succ(succ(x)) = x", ("w1", "w2")),
    ("exists x:nat . succ(x) = zero /\\ not x = zero", ("w1", "w2")),
    ("exists y:n . @y p /\\ not y", ("w2",)),
    ("q@k(f@k(c@k))", ("w1", "w2")),
    ("p <=> k", ("w1", "w2")),
    ("false", ()),
])
def test_hand_computed_satisfaction(text, worlds):
    model = _model()
    phi = parse_sentence(text, SIG)
    assert satisfying_worlds(model, phi) == worlds
    assert worlds_satisfying(model, phi) == frozenset(worlds)
    assert sat_global(model, phi) == (len(worlds) == 2)


def test_eval_term():
    model = _model()
    assert eval_term(model, "w1", Fn("f", (Fn("c"),))) == "b"
    assert eval_term(model, "w2", Fn("f", (Fn("c", (), "k"),), "k")) == "b"


@given(seeds)
def test_satisfaction_agrees_with_oracle(seed):
    rng = rng_of(seed)
    sig = random_signature(rng)
    model = random_model(rng, sig)
    for _ in range(4):
        phi = random_sentence(rng, sig, rng.randint(1, 5))
        assert frozenset(satisfying_worlds(model, phi)) == worlds_satisfying(model, phi)


# ---------------------------------------------------------------- validation

def test_model_validation():
    assert validate_model(_model()) == []
    bad = build_model(SIG, ["w1"], {"k": "w9"}, {}, {"w1": {"s": ["a"], "nat": []}})
    diags = validate_model(bad)
    assert any("nominal 'k' denotes unknown world" in d for d in diags)
    assert any("nominal 'j' is not interpreted" in d for d in diags)
    assert any("carrier of sort 'nat' is empty" in d for d in diags)
    with pytest.raises(ModelError):
        check_model(bad)


def test_rigid_sharing_is_checked():
    m = _model()
    ws = m.structures["w2"]
    funs = dict(ws.functions)
    funs["zero"] = {(): "h1"}
    broken = type(m)(m.signature, m.worlds, m.nominals, m.modalities,
                     {"w1": m.structures["w1"], "w2": type(ws)(ws.carriers, funs, ws.relations)})
    assert any("rigid sharing violated: function 'zero'" in d for d in validate_model(broken))


@given(seeds)
def test_generated_models_are_valid(seed):
    rng = rng_of(seed)
    assert validate_model(random_model(rng, random_signature(rng))) == []


# ---------------------------------------------------------------- reducts and expansions

@given(seeds)
def test_reduct_along_identity_and_composition(seed):
    rng = rng_of(seed)
    sig = random_signature(rng)
    f = random_morphism(rng, sig, prefix="b")
    g = random_morphism(rng, f.target, prefix="c")
    from hfol.signature import compose
    model = random_model(rng, g.target)
    assert model_key(reduct(identity(g.target), model)) == model_key(model)
    assert model_key(reduct(f, reduct(g, model))) == model_key(reduct(compose(f, g), model))
    assert validate_model(reduct(f, reduct(g, model))) == []


def test_expansions():
    model = _model()
    ext = extend(SIG, [("x", "n"), ("y", "nat")])
    # [DERIVED] 2 worlds for x times 2 elements for y
    assert expansion_count(model, ext) == 4
    all_exp = list(expansions(model, ext))
    assert len(all_exp) == 4
    assert {(e.nominals["x"], e.structures["w1"].functions["y"][()]) for e in all_exp} == \
        {("w1", "h0"), ("w1", "h1"), ("w2", "h0"), ("w2", "h1")}
    assert all(model_key(reduct(ext.inclusion, e)) == model_key(model) for e in all_exp)


# ---------------------------------------------------------------- homomorphisms

def test_identity_and_inverse():
    m = _model()
    h = identity_homomorphism(m)
    assert is_homomorphism(h) and is_isomorphism(h)
    assert is_isomorphism(inverse(h))


def test_non_homomorphism_is_reported():
    m = _model()
    maps = {w: {s: {e: e for e in m.structures[w].carriers[s]} for s in SIG.sorts}
            for w in m.worlds}
    maps["w1"]["s"] = {"a": "b", "b": "b"}
    h = KripkeHomomorphism(m, m, {"w1": "w1", "w2": "w2"}, maps)
    assert homomorphism_violations(h)
    assert not is_homomorphism(h)


@given(seeds)
def test_find_isomorphism_on_relabelled_models(seed):
    rng = rng_of(seed)
    model = random_model(rng, random_signature(rng), max_worlds=2, max_carrier=2)
    renamed = rename_elements(rng, model, "x")
    iso = find_isomorphism(model, renamed)
    assert iso is not None and is_isomorphism(iso)


# ---------------------------------------------------------------- reachability

def test_reachability_report():
    m = _model()
    rep = reachability_report(m)
    assert rep.reachable
    assert rep.elements["w1"]["s"] == {"a", "b"}
    assert term_denotations(m)["nat"] == {"h0", "h1"}
    assert is_reachable(m)


def test_unreachable_and_swap():
    sig = make_signature(nominals=["k"], sorts=["s"], functions=[("c", (), "s")])
    m = build_model(sig, ["w"], {"k": "w"}, {}, {"w": {"s": ["a", "b"]}}, {"w": {"c": "a"}})
    assert generated_elements(m, "w") == {"s": {"a"}}
    assert unreachable_elements(m) == {"w": {"s": {"b"}}}
    out = swap_unreachable(m, ReplacementPlan(remove={("w", "s"): {"b"}}, add={("w", "s"): {"d"}}))
    assert out.structures["w"].carriers["s"] == {"a", "d"}
    with pytest.raises(PlanError, match="reachable"):
        swap_unreachable(m, ReplacementPlan(remove={("w", "s"): {"a"}}))


@given(seeds)
def test_swapping_unreachable_elements_preserves_truth(seed):
    rng = rng_of(seed)
    sig = random_signature(rng)
    model = random_model(rng, sig)
    plan = random_swap_plan(rng, model)
    if plan is None:
        return
    other = swap_unreachable(model, plan)
    assert validate_model(other) == []
    for _ in range(3):
        phi = random_sentence(rng, sig, 4)
        assert satisfying_worlds(model, phi) == satisfying_worlds(other, phi)


# ---------------------------------------------------------------- enumeration and consequence

def test_enumerate_models_count():
    sig = make_signature(nominals=["k"], sorts=["s"], functions=[("c", (), "s")])
    # [DERIVED] one world: carrier sizes 1, 2 give 1 + 2 models; two worlds: k at w0 and
    # sizes (1,1), (1,2), (2,1), (2,2) give 1 + 2 + 2 + 4
    models = list(enumerate_models(sig, 2, 2))
    assert len(models) == 12
    assert all(validate_model(m) == [] for m in models)
    assert len({model_key(m) for m in models}) == 12


def test_bounded_consequence():
    sig = make_signature(nominals=["k"], modalities=[("p", 1)], sorts={"r": True},
                         functions=[("a", (), "r", True), ("b", (), "r", True)])
    premise = parse_sentence("a = b", sig)
    assert consequence_bounded(sig, [premise], parse_sentence("b = a", sig)).holds
    v = consequence_bounded(sig, [], parse_sentence("p", sig))
    assert v.status == "countermodel" and not sat_global(v.countermodel, Prop("p"))
    assert find_model(sig, [parse_sentence("not a = b", sig)]).status == "found"
    assert find_model(sig, [parse_sentence("not a = a", sig)]).status == "none"
    assert consequence_bounded(sig, [], Prop("p"), budget=0).status == "budget_exceeded"


# ---------------------------------------------------------------- probes

def test_probes_separate_and_agree():
    m = _model()
    probes = probe_sentences(SIG, 2)
    assert 0 < len(probes) <= 400
    assert equivalent_on(m, m, probes) == (True, None)
    renamed = rename_elements(rng_of(0), m, "x")
    assert equivalent_on(m, renamed, probes)[0]
    other = build_model(SIG, ["w1", "w2"], {"k": "w1", "j": "w2"}, {"p": ["w2"]},
                        {w: {"s": ["a"], "nat": ["h0"]} for w in ("w1", "w2")},
                        {w: {"c": "a", "f": {"a": "a"}, "zero": "h0", "succ": {"h0": "h0"}}
                         for w in ("w1", "w2")}, {})
    ok, witness = equivalent_on(m, other, probes)
    assert not ok and sat_global(m, witness) != sat_global(other, witness)


def test_probe_sets_are_deterministic():
    a = probe_sentences(SIG, 3)
    b = probe_sentences(SIG, 3)
    assert a.sentences == b.sentences
    kinds = {type(p).__name__ for p in a}
    assert {"Nominal", "Prop", "Eq", "At", "Not", "Or", "Store", "Exists", "Diamond"} <= kinds


def test_sat_local_uses_environment():
    m = _model()
    assert sat_local(m, "w1", parse_sentence("x", SIG, {"x": "n"}), {"x": "w1"})
