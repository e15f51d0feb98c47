import random

from hypothesis import given, settings

from hfol.generators import (SentenceGenerator, random_expansion, random_extension,
                             random_lift_instance, random_model, random_morphism,
                             random_sentence, random_signature, random_swap_plan,
                             random_union_model, rename_elements)
from hfol.relativize import relativized_union_sig, satisfies_axioms
from hfol.semantics import (find_isomorphism, generated_elements, reduct, swap_unreachable,
                            validate_model)
from hfol.signature import make_signature, validate_morphism, validate_signature
from hfol.squares import protects_flexible

from conftest import rng_of, seeds
from oracle import model_key


def test_generators_are_deterministic():
    def build(seed):
        rng = random.Random(seed)
        sig = random_signature(rng)
        return sig, random_morphism(rng, sig), model_key(random_model(rng, sig)), \
            random_sentence(rng, sig, 4)
    assert build(7) == build(7)


@given(seeds)
def test_generated_objects_are_valid(seed):
    rng = rng_of(seed)
    sig = random_signature(rng)
    assert validate_signature(sig) == []
    chi = random_morphism(rng, sig, protecting=True)
    assert validate_morphism(chi) == [] and protects_flexible(chi)
    ext = random_extension(rng, sig)
    assert ext.base == sig and validate_signature(ext.signature) == []
    model = random_model(rng, chi.target)
    assert validate_model(model) == []
    assert validate_model(reduct(chi, model)) == []


@given(seeds)
def test_random_expansion_restricts_to_the_model(seed):
    rng = rng_of(seed)
    sig = random_signature(rng)
    chi = random_morphism(rng, sig, protecting=True)
    # the reduct must pin down every image symbol
    if any(len(set(m.values())) != len(m) for m in chi.maps()):
        return
    tgt = chi.target
    if any(tgt.is_rigid_fun(chi.functions[f]) for f in sig.fun if not sig.is_rigid_fun(f)) or \
            any(tgt.is_rigid_sort(chi.sorts[s]) for s in sig.flexible_sorts):
        return
    model = random_model(rng, sig)
    out = random_expansion(rng, model, chi, 3)
    assert validate_model(out) == []
    assert model_key(reduct(chi, out)) == model_key(model)


@given(seeds)
def test_union_models_satisfy_the_axioms(seed):
    rng = rng_of(seed)
    u = relativized_union_sig(random_signature(rng, prefix="a"), random_signature(rng, prefix="b"))
    um = random_union_model(rng, u)
    assert validate_model(um) == [] and satisfies_axioms(u, um)


@given(seeds)
def test_swap_plans_only_touch_unreachable_elements(seed):
    rng = rng_of(seed)
    model = random_model(rng, random_signature(rng))
    plan = random_swap_plan(rng, model)
    if plan is None:
        return
    for (w, s), removed in plan.remove.items():
        assert not removed & generated_elements(model, w)[s]
    out = swap_unreachable(model, plan)
    for w in model.worlds:
        assert generated_elements(out, w) == generated_elements(model, w)


@given(seeds)
def test_renaming_gives_an_isomorphic_copy(seed):
    rng = rng_of(seed)
    model = random_model(rng, random_signature(rng), max_worlds=2, max_carrier=2)
    copy = rename_elements(rng, model, "t")
    assert validate_model(copy) == []
    assert all(w.startswith("t") for w in copy.worlds)
    assert find_isomorphism(model, copy) is not None


def test_sentence_generator_covers_every_constructor():
    sig = make_signature(nominals=["k"], modalities=[("p", 1), ("r", 2)],
                         sorts={"s": False, "nat": True},
                         functions=[("c", (), "s"), ("z", (), "nat", True)],
                         relations=[("q", ("s",))])
    gen = SentenceGenerator(sig, random.Random(0))
    kinds = set()

    def walk(phi):
        kinds.add(type(phi).__name__)
        for name in ("body", "left", "right"):
            if hasattr(phi, name):
                walk(getattr(phi, name))
        for x in getattr(phi, "items", ()):
            walk(x)
    for _ in range(400):
        walk(gen.sentence(5))
    assert {"Nominal", "Prop", "Eq", "At", "Not", "Or", "Store", "Exists", "Diamond", "And",
            "Implies", "Iff", "Forall", "Box"} <= kinds


@settings(max_examples=40)
@given(seeds)
def test_lift_instances_meet_the_preconditions(seed):
    chi, ext1, v1, wm = random_lift_instance(rng_of(seed))
    assert protects_flexible(chi)
    assert v1.signature == ext1.signature
    assert validate_model(v1) == [] and validate_model(wm) == []
