"""Finite n-models: construction, validation, JSON round-trip, random generation.

An n-model has a nonempty ordered world list, an (n+1)-ary accessibility
relation (each tuple pairs a source world with an n-vector of successors)
and a total valuation.  The order of the ``worlds`` tuple fixes iteration
order everywhere downstream; the JSON canonical form sorts everything.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import ModelLoadError, UnknownWorldError


@dataclass(frozen=True)
class NModel:
    arity: int
    worlds: tuple[str, ...]
    relation: frozenset[tuple[str, ...]]
    valuation: Mapping[str, frozenset[str]]

    def letters_at(self, world: str) -> frozenset[str]:
        if world not in self.valuation:
            raise UnknownWorldError(f"unknown world {world!r}")
        return self.valuation[world]


@dataclass(frozen=True)
class PointedModel:
    model: NModel
    point: str

    def __post_init__(self):
        if self.point not in self.model.worlds:
            raise UnknownWorldError(f"point {self.point!r} not among the worlds")


def make_model(
    arity: int,
    worlds: Iterable[str],
    relation: Iterable[tuple[str, ...]],
    valuation: Mapping[str, Iterable[str]],
) -> NModel:
    """Normalize plain containers into an NModel; missing valuation entries
    default to the empty set."""
    world_tuple = tuple(worlds)
    val = {w: frozenset(valuation.get(w, ())) for w in world_tuple}
    return NModel(
        arity=arity,
        worlds=world_tuple,
        relation=frozenset(tuple(t) for t in relation),
        valuation=val,
    )


def validate(m: NModel) -> list[str]:
    """Well-formedness check; the empty list means the model is valid."""
    violations = []
    if m.arity < 1:
        violations.append(f"arity must be >= 1, got {m.arity}")
    if not m.worlds:
        violations.append("worlds must be nonempty")
    seen = set()
    for w in m.worlds:
        if w in seen:
            violations.append(f"duplicate world {w!r}")
        seen.add(w)
    for t in sorted(m.relation):
        if len(t) != m.arity + 1:
            violations.append(
                f"tuple {list(t)} has length {len(t)}, expected {m.arity + 1}"
            )
        for v in t:
            if v not in seen:
                violations.append(f"tuple {list(t)} mentions undeclared world {v!r}")
    for w in sorted(m.valuation):
        if w not in seen:
            violations.append(f"valuation mentions undeclared world {w!r}")
    for w in m.worlds:
        if w not in m.valuation:
            violations.append(f"valuation missing for world {w!r}")
    return violations


# ---------------------------------------------------------------------------
# JSON round-trip

def model_to_dict(m: NModel) -> dict:
    return {
        "arity": m.arity,
        "worlds": sorted(m.worlds),
        "relation": [list(t) for t in sorted(m.relation)],
        "valuation": {w: sorted(m.valuation[w]) for w in sorted(m.worlds)},
    }


def model_from_dict(data: object) -> NModel:
    if not isinstance(data, dict):
        raise ModelLoadError("model JSON must be an object")
    for key in ("arity", "worlds", "relation", "valuation"):
        if key not in data:
            raise ModelLoadError(f"model JSON missing key {key!r}")
    arity = data["arity"]
    if not isinstance(arity, int) or arity < 1:
        raise ModelLoadError(f"arity must be an integer >= 1, got {arity!r}")
    worlds = data["worlds"]
    if not isinstance(worlds, list) or not all(isinstance(w, str) for w in worlds):
        raise ModelLoadError("worlds must be a list of strings")
    relation = data["relation"]
    if not isinstance(relation, list):
        raise ModelLoadError("relation must be a list of tuples")
    tuples = []
    for i, t in enumerate(relation):
        if not isinstance(t, list) or not all(isinstance(v, str) for v in t):
            raise ModelLoadError(f"relation[{i}] must be a list of world-ids")
        tuples.append(tuple(t))
    valuation = data["valuation"]
    if not isinstance(valuation, dict):
        raise ModelLoadError("valuation must be an object")
    val = {}
    for w, ls in valuation.items():
        if not isinstance(ls, list) or not all(isinstance(x, str) for x in ls):
            raise ModelLoadError(f"valuation[{w!r}] must be a list of letters")
        val[w] = ls
    m = make_model(arity, worlds, tuples, val)
    violations = validate(m)
    if violations:
        raise ModelLoadError("invalid model: " + "; ".join(violations))
    return m


def load(text: bytes | str) -> NModel:
    """Parse model JSON; the file's world order becomes the model's order."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelLoadError(f"malformed JSON: {e}") from e
    return model_from_dict(data)


def save(m: NModel) -> bytes:
    """Serialize to canonical JSON: worlds, tuples and letter lists sorted."""
    return (json.dumps(model_to_dict(m), indent=2, sort_keys=True) + "\n").encode()


# ---------------------------------------------------------------------------
# Generation and reducts

def random_model(
    arity: int,
    num_worlds: int,
    relation_density: float,
    alphabet: Iterable[str],
    seed: int,
) -> NModel:
    """Seed-deterministic random model: each candidate (arity+1)-tuple is
    kept with probability ``relation_density``, each letter holds at each
    world with probability 1/2."""
    if num_worlds < 1:
        raise ValueError("num_worlds must be >= 1")
    if not 0 <= relation_density <= 1:
        raise ValueError("relation_density must be in [0, 1]")
    rng = random.Random(seed)
    worlds = tuple(f"w{i}" for i in range(num_worlds))
    relation = [
        t
        for t in itertools.product(worlds, repeat=arity + 1)
        if rng.random() < relation_density
    ]
    letters = sorted(set(alphabet))
    valuation = {
        w: [l for l in letters if rng.random() < 0.5] for w in worlds
    }
    return make_model(arity, worlds, relation, valuation)


def restrict_valuation(m: NModel, alphabet: Iterable[str]) -> NModel:
    """The same model with every valuation intersected with ``alphabet``."""
    keep = frozenset(alphabet)
    return NModel(
        arity=m.arity,
        worlds=m.worlds,
        relation=m.relation,
        valuation={w: m.valuation[w] & keep for w in m.worlds},
    )
