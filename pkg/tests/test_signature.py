import itertools

import pytest
from hypothesis import given

from hfol.errors import MorphismError, SignatureError
from hfol.generators import random_morphism, random_signature
from hfol.signature import (FunSym, RelSym, SignatureMorphism, check_morphism, compose,
                            coproduct, enumerate_morphisms, extend, identity, inclusion,
                            is_injective_on_nominals, is_injective_on_sorts,
                            is_signature_isomorphism, make_signature, mediator, pushout,
                            rigidify, validate_morphism, validate_signature)

from conftest import rng_of, seeds
from oracle import morphism_key

SIG = make_signature(nominals=["k", "j"], modalities=[("p", 1), ("r", 2)],
                     sorts={"s": False, "n0": True},
                     functions=[("c", (), "s"), ("f", ("s",), "s"), ("z", (), "n0", True)],
                     relations=[("q", ("s",))])


# ---------------------------------------------------------------- validation

def test_valid_signature_has_no_diagnostics():
    assert validate_signature(SIG) == []


@pytest.mark.parametrize("sig, fragment", [
    (make_signature(sorts=["n"]), "reserved sort name"),
    (make_signature(sorts={"s": False}, functions=[("f", ("s",), "s", True)]),
     "rigid function 'f' uses flexible sort 's'"),
    (make_signature(sorts=["s"], functions=[("f", ("t",), "s")]), "unknown sort 't'"),
    (make_signature(sorts=["s"], functions=[("f", (), "s"), ("f", ("s",), "s")]),
     "duplicate function name 'f'"),
    (make_signature(nominals=["a"], modalities=[("a", 1)]), "used by several kinds"),
    (make_signature(modalities=[("m", 3)]), "only 1 and 2"),
    (make_signature(nominals=["down"]), "keyword 'down'"),
    (make_signature(sorts={"s": False}, relations=[("q", ("s",), True)]),
     "rigid relation 'q' uses flexible sort 's'"),
])
def test_signature_diagnostics(sig, fragment):
    diags = validate_signature(sig)
    assert any(fragment in d for d in diags), diags


def test_rigid_symbol_diagnostic_is_not_repeated():
    sig = make_signature(sorts={"s": False}, functions=[("f", ("s",), "s", True)])
    assert len(validate_signature(sig)) == 1


def test_morphism_diagnostics():
    src = make_signature(sorts={"r": True}, functions=[("e", (), "r", True)])
    tgt = make_signature(sorts={"s": False}, functions=[("e", (), "s")])
    chi = SignatureMorphism(src, tgt, {"r": "s"}, {}, {}, {"e": "e"}, {})
    diags = validate_morphism(chi)
    assert any("rigid sort 'r'" in d for d in diags)
    assert any("rigid function 'e'" in d for d in diags)
    with pytest.raises(MorphismError):
        check_morphism(chi)
    partial = SignatureMorphism(src, tgt, {}, {}, {}, {}, {})
    assert validate_morphism(partial)[0].startswith("not total")


# ---------------------------------------------------------------- rigidification

def test_rigidify_names_copies_per_nominal():
    at_sig, bar = rigidify(SIG)
    assert at_sig.sorts == {"n0", "s@k", "s@j"}
    assert FunSym("f@k", ("s@k",), "s@k") in at_sig.functions
    assert FunSym("z", (), "n0") in at_sig.functions
    assert RelSym("q@j", ("s@j",)) in at_sig.relations
    # the barred signature keeps the originals and adds the flexible copies only
    assert "s" in bar.sorts and "s@k" in bar.sorts
    assert FunSym("z@k", (), "n0") not in bar.functions


# ---------------------------------------------------------------- composition

def _sort_maps(src, tgt):
    for img in itertools.product(sorted(tgt.base.sorts), repeat=len(src.sorts)):
        yield dict(zip(src.sorts, img))


def _brute_force_count(src, tgt):
    """Count morphisms by trying every assignment and validating it."""
    count = 0
    kinds = [sorted(src.nominals), sorted(src.mod), sorted(src.fun), sorted(src.rel)]
    pools = [sorted(tgt.nominals), sorted(tgt.mod), sorted(tgt.fun), sorted(tgt.rel)]
    for smap in _sort_maps(src, tgt):
        choice_lists = [itertools.product(pool, repeat=len(names))
                        for names, pool in zip(kinds, pools)]
        for combo in itertools.product(*choice_lists):
            maps = [dict(zip(names, img)) for names, img in zip(kinds, combo)]
            chi = SignatureMorphism(src, tgt, smap, *maps)
            if not validate_morphism(chi):
                count += 1
    return count


@pytest.mark.parametrize("src, tgt", [
    (make_signature(nominals=["k"], sorts=["s"], functions=[("c", (), "s")]),
     make_signature(nominals=["a", "b"], sorts=["u", "v"],
                    functions=[("x", (), "u"), ("y", (), "v"), ("w", (), "u")])),
    (make_signature(sorts={"r": True, "s": False}, functions=[("f", ("r",), "s")]),
     make_signature(sorts={"r": True, "t": True, "s": False},
                    functions=[("f", ("r",), "s"), ("g", ("t",), "s"), ("h", ("r",), "r", True)])),
    (make_signature(modalities=[("m", 1), ("l", 2)], relations=[]),
     make_signature(modalities=[("a", 1), ("b", 1), ("c", 2)])),
])
def test_enumerate_morphisms_matches_brute_force(src, tgt):
    listed = list(enumerate_morphisms(src, tgt))
    assert all(not validate_morphism(m) for m in listed)
    assert len({morphism_key(m) for m in listed}) == len(listed)
    assert len(listed) == _brute_force_count(src, tgt)


@given(seeds)
def test_composition_is_associative_and_unital(seed):
    rng = rng_of(seed)
    a = random_signature(rng)
    f = random_morphism(rng, a, prefix="b")
    g = random_morphism(rng, f.target, prefix="c")
    h = random_morphism(rng, g.target, prefix="d")
    assert compose(compose(f, g), h) == compose(f, compose(g, h))
    assert compose(identity(a), f) == f == compose(f, identity(f.target))
    assert not validate_morphism(compose(f, g))


@given(seeds)
def test_injectivity_flags_follow_generator(seed):
    rng = rng_of(seed)
    chi = random_morphism(rng, random_signature(rng), injective=True)
    assert is_injective_on_sorts(chi) and is_injective_on_nominals(chi)


def test_signature_isomorphism():
    assert is_signature_isomorphism(identity(SIG))
    small = make_signature(nominals=["k"], sorts=["s"])
    assert not is_signature_isomorphism(inclusion(small, SIG))


# ---------------------------------------------------------------- extensions

def test_extend_adds_nominals_and_rigid_constants():
    ext = extend(SIG, [("x", "n0"), ("y", "n")])
    assert ext.nominal_vars == ("y",) and ext.rigid_vars == (("x", "n0"),)
    assert "y" in ext.signature.nominals
    assert ext.signature.is_rigid_fun("x")
    assert ext.inclusion.source == SIG


@pytest.mark.parametrize("added, fragment", [
    ([("c", "n")], "name clash"),
    ([("x", "s")], "flexible sort"),
    ([("x", "zz")], "unknown sort"),
    ([("x", "n"), ("x", "n0")], "distinct"),
])
def test_extend_rejects(added, fragment):
    with pytest.raises(SignatureError, match=fragment):
        extend(SIG, added)


# ---------------------------------------------------------------- colimits

def test_coproduct_tags_shared_names():
    left = make_signature(nominals=["k"], sorts=["s"], functions=[("c", (), "s")])
    right = make_signature(nominals=["k", "m"], sorts=["s", "t"], functions=[("d", (), "t")])
    union, inj1, inj2 = coproduct(left, right)
    assert union.nominals == {"k#1", "k#2", "m"}
    assert union.sorts == ("s#1", "s#2", "t")
    assert inj1.sorts == {"s": "s#1"} and inj2.sorts == {"s": "s#2", "t": "t"}
    assert inj1.functions == {"c": "c"}


def test_pushout_of_counter1_span(fixtures):
    ws = fixtures["counter1"]
    po = pushout(ws.morphisms["chi1"], ws.morphisms["chi2"])
    # [PAPER] the vertex has one nominal k, one sort s and constants c, c3
    assert po.signature.nominals == {"k"}
    assert po.signature.sorts == ("s",)
    assert set(po.signature.fun) == {"c", "c3"}
    assert po.upsilon2.functions == {"c1": "c", "c2": "c", "c3": "c3"}


def test_pushout_class_is_rigid_if_any_member_is():
    base = make_signature(sorts=["s"])
    left = make_signature(sorts={"s": True})
    right = make_signature(sorts={"t": False})
    chi1 = SignatureMorphism(base, left, {"s": "s"})
    chi2 = SignatureMorphism(base, right, {"s": "t"})
    po = pushout(chi1, chi2)
    assert po.signature.rigid_sorts == ("s",)


def test_pushout_names_prefer_left_members():
    base = make_signature(nominals=["k"])
    left = make_signature(nominals=["b", "z"])
    right = make_signature(nominals=["a", "y"])
    po = pushout(SignatureMorphism(base, left, nominals={"k": "z"}),
                 SignatureMorphism(base, right, nominals={"k": "a"}))
    assert po.upsilon1.nominals == {"b": "b", "z": "z"}
    assert po.upsilon2.nominals == {"a": "z", "y": "y"}


@given(seeds)
def test_pushout_square_commutes(seed):
    rng = rng_of(seed)
    base = random_signature(rng)
    chi1 = random_morphism(rng, base, prefix="a")
    chi2 = random_morphism(rng, base, prefix="b")
    po = pushout(chi1, chi2)
    assert compose(chi1, po.upsilon1) == compose(chi2, po.upsilon2)
    assert validate_signature(po.signature) == []
    # the legs are jointly surjective
    for i, codomain in enumerate((po.signature.base.sorts, po.signature.nominals,
                                  po.signature.mod, po.signature.fun, po.signature.rel)):
        images = set(po.upsilon1.maps()[i].values()) | set(po.upsilon2.maps()[i].values())
        assert images == set(codomain)
    # the pushout's own legs form a cocone whose mediator is the identity
    assert mediator(po, po.upsilon1, po.upsilon2) == identity(po.signature)


def test_mediator_rejects_non_commuting_cocone():
    base = make_signature(nominals=["k"])
    left = make_signature(nominals=["a"])
    right = make_signature(nominals=["b"])
    po = pushout(SignatureMorphism(base, left, nominals={"k": "a"}),
                 SignatureMorphism(base, right, nominals={"k": "b"}))
    target = make_signature(nominals=["x", "y"])
    with pytest.raises(MorphismError, match="does not commute"):
        mediator(po, SignatureMorphism(left, target, nominals={"a": "x"}),
                 SignatureMorphism(right, target, nominals={"b": "y"}))
