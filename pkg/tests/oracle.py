"""An independent reference evaluator used as a test oracle.

It shares no code with ``hfol.semantics.satisfaction``: sentences are first
reduced to core form by hand and then evaluated bottom-up as the *set* of
worlds where they hold, the way a model checker labels states.
"""

from __future__ import annotations

import itertools

from hfol.signature import NOMINAL_SORT
from hfol.syntax import (And, At, Box, Diamond, Eq, Exists, Forall, Iff, Implies, Nominal, Not,
                         Or, Prop, Rel, Store, Var)


def _core(phi):
    if isinstance(phi, And):
        return Not(Or(tuple(Not(_core(x)) for x in phi.items)))
    if isinstance(phi, Implies):
        return Or((Not(_core(phi.left)), _core(phi.right)))
    if isinstance(phi, Iff):
        a, b = _core(phi.left), _core(phi.right)
        return Or((Not(Or((Not(a), Not(b)))), Not(Or((a, b)))))
    if isinstance(phi, Forall):
        return Not(Exists(phi.variables, Not(_core(phi.body))))
    if isinstance(phi, Box):
        return Not(Diamond(phi.modality, Not(_core(phi.body))))
    if isinstance(phi, (At, Not, Store, Exists, Diamond)):
        return type(phi)(*[_core(getattr(phi, f)) if f == "body" else getattr(phi, f)
                           for f in phi.__dataclass_fields__])
    if isinstance(phi, Or):
        return Or(tuple(_core(x) for x in phi.items))
    return phi


def _term(m, w, t, env):
    if isinstance(t, Var):
        return env[t.name]
    where = w if t.at is None else env.get(t.at, m.nominals.get(t.at))
    args = tuple(_term(m, w, a, env) for a in t.args)
    return m.structures[where].functions[t.name][args]


def _world(m, name, env):
    return env[name] if name in env else m.nominals[name]


def _label(m, phi, env) -> frozenset:
    worlds = frozenset(m.worlds)
    if isinstance(phi, Nominal):
        return frozenset({_world(m, phi.name, env)})
    if isinstance(phi, Prop):
        return frozenset(m.modalities[phi.name])
    if isinstance(phi, Eq):
        return frozenset(w for w in worlds if _term(m, w, phi.left, env) == _term(m, w, phi.right, env))
    if isinstance(phi, Rel):
        out = set()
        for w in worlds:
            where = w if phi.at is None else _world(m, phi.at, env)
            if tuple(_term(m, w, a, env) for a in phi.args) in m.structures[where].relations[phi.name]:
                out.add(w)
        return frozenset(out)
    if isinstance(phi, At):
        return worlds if _world(m, phi.nominal, env) in _label(m, phi.body, env) else frozenset()
    if isinstance(phi, Not):
        return worlds - _label(m, phi.body, env)
    if isinstance(phi, Or):
        out = frozenset()
        for x in phi.items:
            out |= _label(m, x, env)
        return out
    if isinstance(phi, Store):
        return frozenset(w for w in worlds if w in _label(m, phi.body, {**env, phi.var: w}))
    if isinstance(phi, Exists):
        pools = [sorted(worlds) if s == NOMINAL_SORT else
                 sorted(m.structures[m.worlds[0]].carriers[s]) for _, s in phi.variables]
        out = frozenset()
        for combo in itertools.product(*pools):
            inner = dict(env)
            inner.update({x: v for (x, _), v in zip(phi.variables, combo)})
            out |= _label(m, phi.body, inner)
        return out
    if isinstance(phi, Diamond):
        target = _label(m, phi.body, env)
        return frozenset(a for a, b in m.modalities[phi.modality] if b in target)
    raise TypeError(f"unexpected sentence {phi!r}")


def worlds_satisfying(model, phi, env=None) -> frozenset:
    return _label(model, _core(phi), dict(env or {}))


def holds_globally(model, phi) -> bool:
    return worlds_satisfying(model, phi) == frozenset(model.worlds)


def model_key(model) -> tuple:
    """A hashable fingerprint; equal keys mean equal models."""
    sig = model.signature
    return (
        tuple(model.worlds),
        tuple(sorted(model.nominals.items())),
        tuple((m, tuple(sorted(model.modalities[m]))) for m in sorted(sig.mod)),
        tuple((w, tuple((s, tuple(sorted(model.structures[w].carriers[s]))) for s in sig.sorts),
               tuple((f, tuple(sorted(model.structures[w].functions[f].items())))
                     for f in sorted(sig.fun)),
               tuple((r, tuple(sorted(model.structures[w].relations[r]))) for r in sorted(sig.rel)))
              for w in model.worlds),
    )


def morphism_key(chi) -> tuple:
    return tuple(tuple(sorted(m.items())) for m in chi.maps())
