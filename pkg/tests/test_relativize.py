import pytest
from hypothesis import given

from hfol.errors import RelativizationError
from hfol.frontend import parse_sentence
from hfol.generators import random_model, random_sentence, random_signature, random_union_model
from hfol.relativize import (relabel_worlds, relativized_reduct, relativized_union_models,
                             relativized_union_sig, rt_translate, satisfies_axioms)
from hfol.semantics import build_model, sat_global, validate_model
from hfol.signature import make_signature
from hfol.syntax import FALSE, At, Implies, Or, Prop

from conftest import rng_of, seeds
from oracle import holds_globally, model_key

LEFT = make_signature(nominals=["k"], modalities=[("p", 1)], sorts=["s"],
                      functions=[("c", (), "s")])
RIGHT = make_signature(nominals=["k", "j"], modalities=[("r", 2)], sorts={"nat": True},
                       functions=[("zero", (), "nat", True)])


def test_union_signature_shape():
    u = relativized_union_sig(LEFT, RIGHT)
    assert u.witnesses == ("o1", "o2") and u.markers == ("pi1", "pi2")
    assert u.signature.nominals == {"k#1", "k#2", "j", "o1", "o2"}
    assert u.signature.mod["pi1"] == 1 and u.signature.mod["pi2"] == 1
    assert [a.text for a in u.axioms] == ["pi1 \\/ pi2", "@k#1 pi1", "@o1 pi1",
                                          "@j pi2", "@k#2 pi2", "@o2 pi2"]
    assert u.injection(1).nominals == {"k": "k#1"}
    assert u.injection(2).nominals == {"k": "k#2", "j": "j"}


def test_fresh_witness_names_avoid_clashes():
    left = make_signature(nominals=["o1"], modalities=[("pi1", 1)])
    u = relativized_union_sig(left, make_signature())
    assert u.witness(1) != "o1" and u.marker(1) != "pi1"
    assert u.witness(1) in u.signature.nominals and u.marker(1) in u.signature.mod


def _part_models():
    m1 = build_model(LEFT, ["a1", "a2"], {"k": "a2"}, {"p": ["a1"]},
                     {w: {"s": ["x", "y"]} for w in ("a1", "a2")},
                     {"a1": {"c": "x"}, "a2": {"c": "y"}})
    m2 = build_model(RIGHT, ["b"], {"k": "b", "j": "b"}, {"r": [("b", "b")]},
                     {"b": {"nat": ["z"]}}, {"b": {"zero": "z"}})
    return m1, m2


@pytest.mark.parametrize("policy", ["minimal", "padded"])
def test_union_of_models_restricts_back(policy):
    u = relativized_union_sig(LEFT, RIGHT)
    m1, m2 = _part_models()
    um = relativized_union_models(u, m1, m2, policy)
    assert validate_model(um) == []
    assert satisfies_axioms(u, um)
    assert model_key(relativized_reduct(u, um, 1)) == model_key(m1)
    assert model_key(relativized_reduct(u, um, 2)) == model_key(m2)


def test_union_of_models_rejects_shared_worlds_and_bad_policy():
    u = relativized_union_sig(LEFT, RIGHT)
    m1, m2 = _part_models()
    clash = relabel_worlds(m2, {"b": "a1"})
    assert clash.worlds == ("a1",) and clash.nominals["j"] == "a1"
    with pytest.raises(RelativizationError, match="share world names"):
        relativized_union_models(u, m1, clash)
    with pytest.raises(RelativizationError, match="unknown policy"):
        relativized_union_models(u, m1, m2, "huge")


def test_reduct_requires_axioms():
    u = relativized_union_sig(LEFT, RIGHT)
    um = relativized_union_models(u, *_part_models())
    broken = type(um)(um.signature, um.worlds, um.nominals,
                      {**um.modalities, "pi1": frozenset()}, um.structures)
    with pytest.raises(RelativizationError, match="union axioms"):
        relativized_reduct(u, broken, 1)


# ---------------------------------------------------------------- guarded translation

@pytest.mark.parametrize("text, expected", [
    ("p", "pi1 => p"),
    ("@k p", "pi1 => @k#1 (pi1 => p)"),
    ("not p", "pi1 => not (pi1 => p)"),
    ("down x . x", "pi1 => (down x . pi1 => x)"),
    ("exists x:n . @x p", "pi1 => (exists x:n . @x pi1 /\\ (pi1 => @x (pi1 => p)))"),
])
def test_guarded_translation_shapes(text, expected):
    u = relativized_union_sig(LEFT, RIGHT)
    assert rt_translate(u, 1, parse_sentence(text, LEFT)).text == expected


def test_guarded_translation_of_modal_and_empty_disjunction():
    u = relativized_union_sig(LEFT, RIGHT)
    out = rt_translate(u, 2, parse_sentence("<r> j", RIGHT))
    assert out.text == "pi2 => <r> (pi2 /\\ (pi2 => j))"
    assert rt_translate(u, 1, FALSE) == Implies(Prop("pi1"), Or(()))
    assert rt_translate(u, 1, At("k", FALSE)).text == "pi1 => @k#1 (pi1 => false)"


@given(seeds)
def test_guarded_translation_holds_iff_part_satisfies(seed):
    rng = rng_of(seed)
    left, right = random_signature(rng, prefix="a"), random_signature(rng, prefix="b")
    u = relativized_union_sig(left, right)
    um = random_union_model(rng, u)
    assert satisfies_axioms(u, um)
    for i, part in ((1, left), (2, right)):
        red = relativized_reduct(u, um, i)
        assert validate_model(red) == []
        phi = random_sentence(rng, part, 4)
        out = rt_translate(u, i, phi)
        assert sat_global(um, out) == sat_global(red, phi)
        assert holds_globally(um, out) == holds_globally(red, phi)


@given(seeds)
def test_union_then_reduct_is_identity(seed):
    rng = rng_of(seed)
    left, right = random_signature(rng, prefix="a"), random_signature(rng, prefix="b")
    u = relativized_union_sig(left, right)
    m1 = random_model(rng, left)
    m2 = random_model(rng, right)
    m2 = relabel_worlds(m2, {w: f"v{w}" for w in m2.worlds})
    um = relativized_union_models(u, m1, m2, rng.choice(["minimal", "padded"]))
    assert model_key(relativized_reduct(u, um, 1)) == model_key(m1)
    assert model_key(relativized_reduct(u, um, 2)) == model_key(m2)
