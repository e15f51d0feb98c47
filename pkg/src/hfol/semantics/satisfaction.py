"""Local and global satisfaction of sentences in finite Kripke structures.

Quantifiers and ``down`` are evaluated through an environment that plays
the role of the expansion to the extended signature: nominal variables map
to worlds and rigid variables to elements of the shared rigid carriers.
Sugar (``/\\``, ``=>``, ``<=>``, ``forall``, ``[l]``) is evaluated directly.
"""

from __future__ import annotations

import itertools
from typing import Mapping

from ..errors import SentenceError
from ..signature import NOMINAL_SORT
from ..syntax import (And, At, Box, Diamond, Eq, Exists, Fn, Forall, Iff, Implies,
                      Nominal, Not, Or, Prop, Rel, Sentence, Store, Term, Var)
from .kripke import KripkeStructure

Env = Mapping[str, str]


def world_of(model: KripkeStructure, name: str, env: Env) -> str:
    if name in env:
        return env[name]
    try:
        return model.nominals[name]
    except KeyError:
        raise SentenceError(f"unknown nominal '{name}'") from None


def eval_term(model: KripkeStructure, w: str, t: Term, env: Env | None = None) -> str:
    env = env or {}
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise SentenceError(f"unbound variable '{t.name}'") from None
    args = tuple(eval_term(model, w, a, env) for a in t.args)
    where = w if t.at is None else world_of(model, t.at, env)
    try:
        return model.structures[where].functions[t.name][args]
    except KeyError:
        raise SentenceError(f"cannot evaluate '{t.text}' at world '{where}'") from None


def _domain(model: KripkeStructure, sort: str) -> list[str]:
    if sort == NOMINAL_SORT:
        return list(model.worlds)
    return model.rigid_carrier(sort)


def sat_local(model: KripkeStructure, w: str, phi: Sentence, env: Env | None = None) -> bool:
    """``model |=^w phi`` under the variable assignment ``env``."""
    return _sat(model, w, phi, dict(env or {}))


def _sat(m: KripkeStructure, w: str, phi: Sentence, env: dict) -> bool:
    if isinstance(phi, Nominal):
        return world_of(m, phi.name, env) == w
    if isinstance(phi, Prop):
        return w in m.modalities[phi.name]
    if isinstance(phi, Eq):
        return eval_term(m, w, phi.left, env) == eval_term(m, w, phi.right, env)
    if isinstance(phi, Rel):
        args = tuple(eval_term(m, w, a, env) for a in phi.args)
        where = w if phi.at is None else world_of(m, phi.at, env)
        return args in m.structures[where].relations[phi.name]
    if isinstance(phi, At):
        return _sat(m, world_of(m, phi.nominal, env), phi.body, env)
    if isinstance(phi, Not):
        return not _sat(m, w, phi.body, env)
    if isinstance(phi, Or):
        return any(_sat(m, w, p, env) for p in phi.items)
    if isinstance(phi, And):
        return all(_sat(m, w, p, env) for p in phi.items)
    if isinstance(phi, Implies):
        return (not _sat(m, w, phi.left, env)) or _sat(m, w, phi.right, env)
    if isinstance(phi, Iff):
        return _sat(m, w, phi.left, env) == _sat(m, w, phi.right, env)
    if isinstance(phi, Store):
        inner = dict(env)
        inner[phi.var] = w
        return _sat(m, w, phi.body, inner)
    if isinstance(phi, (Exists, Forall)):
        names = [n for n, _ in phi.variables]
        domains = [_domain(m, s) for _, s in phi.variables]
        want = isinstance(phi, Exists)
        for combo in itertools.product(*domains):
            inner = dict(env)
            inner.update(zip(names, combo))
            if _sat(m, w, phi.body, inner) == want:
                return want
        return not want
    if isinstance(phi, Diamond):
        return any(_sat(m, v, phi.body, env) for (u, v) in _successors(m, phi.modality, w))
    if isinstance(phi, Box):
        return all(_sat(m, v, phi.body, env) for (u, v) in _successors(m, phi.modality, w))
    raise SentenceError(f"not a sentence: {phi!r}")


def _successors(m: KripkeStructure, modality: str, w: str):
    return sorted(p for p in m.modalities[modality] if p[0] == w)


def sat_global(model: KripkeStructure, phi: Sentence, env: Env | None = None) -> bool:
    return all(sat_local(model, w, phi, env) for w in model.worlds)


def sat_all(model: KripkeStructure, sentences, env: Env | None = None) -> bool:
    return all(sat_global(model, phi, env) for phi in sentences)


def satisfying_worlds(model: KripkeStructure, phi: Sentence) -> tuple[str, ...]:
    return tuple(w for w in model.worlds if sat_local(model, w, phi))
