"""Model checking for the diagonal n-semantics, validity, bounded satisfiability.

Truth at a world: ``box f`` holds at w iff every relation tuple
(w, v1..vn) has some slot i with f true at v_i; ``dia f`` holds iff some
tuple has f true at every slot.  A point with no outgoing tuple satisfies
every box and no diamond.
"""

from __future__ import annotations

import itertools
from typing import Iterator

from . import syntax
from .errors import BudgetExceededError, UnknownWorldError
from .model import NModel, PointedModel, make_model
from .syntax import (
    And,
    Bottom,
    Box,
    Diamond,
    Formula,
    Iff,
    Implies,
    Letter,
    Not,
    Or,
    Top,
)

DEFAULT_SEARCH_BUDGET = 2_000_000


class ModelEvaluator:
    """Bit-mask evaluator for one model; caches per-formula truth masks.

    Bit i of a mask is the truth value at ``model.worlds[i]``.
    """

    def __init__(self, m: NModel):
        self.model = m
        self.pos = {w: i for i, w in enumerate(m.worlds)}
        self.full = (1 << len(m.worlds)) - 1
        succ: dict[str, list[tuple[int, ...]]] = {w: [] for w in m.worlds}
        for t in sorted(m.relation):
            succ[t[0]].append(tuple(self.pos[v] for v in t[1:]))
        self.succ = [succ[w] for w in m.worlds]
        self._cache: dict[Formula, int] = {}

    def mask(self, f: Formula) -> int:
        cached = self._cache.get(f)
        if cached is not None:
            return cached
        match f:
            case Letter(name):
                bits = 0
                for i, w in enumerate(self.model.worlds):
                    if name in self.model.valuation[w]:
                        bits |= 1 << i
            case Top():
                bits = self.full
            case Bottom():
                bits = 0
            case Not(g):
                bits = ~self.mask(g) & self.full
            case And(l, r):
                bits = self.mask(l) & self.mask(r)
            case Or(l, r):
                bits = self.mask(l) | self.mask(r)
            case Implies(l, r):
                bits = (~self.mask(l) & self.full) | self.mask(r)
            case Iff(l, r):
                bits = ~(self.mask(l) ^ self.mask(r)) & self.full
            case Box(g):
                child = self.mask(g)
                bits = 0
                for i in range(len(self.model.worlds)):
                    if all(
                        any(child >> v & 1 for v in vec) for vec in self.succ[i]
                    ):
                        bits |= 1 << i
            case Diamond(g):
                child = self.mask(g)
                bits = 0
                for i in range(len(self.model.worlds)):
                    if any(
                        all(child >> v & 1 for v in vec) for vec in self.succ[i]
                    ):
                        bits |= 1 << i
            case _:
                raise TypeError(f"not a formula: {f!r}")
        self._cache[f] = bits
        return bits

    def holds(self, world: str, f: Formula) -> bool:
        if world not in self.pos:
            raise UnknownWorldError(f"unknown world {world!r}")
        return bool(self.mask(f) >> self.pos[world] & 1)


def check(m: NModel, w: str, f: Formula) -> bool:
    """Truth of f at world w.  Letters missing from the valuation are false."""
    return ModelEvaluator(m).holds(w, f)


def valid_on_model(m: NModel, f: Formula) -> bool:
    """True iff f holds at every world of m."""
    ev = ModelEvaluator(m)
    return ev.mask(f) == ev.full


# ---------------------------------------------------------------------------
# Bounded satisfiability
#
# Deciding whether a formula holds somewhere in some model with at most k
# worlds only depends on which "world types" the model realizes, where a
# type fixes the truth of every letter and every modal subformula.  A set
# of types U is self-supporting when each member can choose a successor
# tuple set over U matching its own modal bits; f is satisfiable with at
# most k worlds iff some self-supporting U with |U| <= k contains a type
# that makes f true (worlds sharing a type collapse into one).  The
# decision phase works on types; the witness itself is then recovered by
# enumerating models of the minimal world count in canonical order, so the
# returned witness is the canonically least one.


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.spent = 0

    def spend(self, amount: int = 1) -> None:
        self.spent += amount
        if self.spent > self.limit:
            raise BudgetExceededError(
                f"search budget of {self.limit} steps exhausted"
            )


def _modal_subformulas(f: Formula) -> list[Formula]:
    found: dict[Formula, None] = {}

    def walk(g: Formula) -> None:
        match g:
            case Letter() | Top() | Bottom():
                pass
            case Not(h):
                walk(h)
            case And(l, r) | Or(l, r) | Implies(l, r) | Iff(l, r):
                walk(l)
                walk(r)
            case Box(h) | Diamond(h):
                found.setdefault(g)
                walk(h)

    walk(f)
    return sorted(found, key=syntax.formula_key)


class _TypeSpace:
    """Truth tables over all world types of a formula.

    A type index encodes one bit per letter (low bits) and one bit per
    modal subformula.  ``truth[g]`` is a big integer whose t-th bit is the
    truth of subformula g under type t.
    """

    def __init__(self, f: Formula, arity: int, budget: _Budget):
        self.arity = arity
        self.letters = sorted(syntax.letters(f))
        self.modals = _modal_subformulas(f)
        self.nbits = len(self.letters) + len(self.modals)
        if self.nbits > 22:
            raise BudgetExceededError(
                f"type space with {self.nbits} independent bits is too large"
            )
        self.count = 1 << self.nbits
        self.all_types = (1 << self.count) - 1
        budget.spend(self.count)
        self._bit_patterns = [self._pattern(b) for b in range(self.nbits)]
        self._truth: dict[Formula, int] = {}
        for i, name in enumerate(self.letters):
            self._truth[Letter(name)] = self._bit_patterns[i]
        for j, g in enumerate(self.modals):
            self._truth[g] = self._bit_patterns[len(self.letters) + j]
        self.root_mask = self.truth(f)
        # (kind, own truth, child truth) per modal subformula
        self.modal_info = [
            (isinstance(g, Box), self._truth[g], self.truth(g.operand))
            for g in self.modals
        ]

    def _pattern(self, b: int) -> int:
        # bits t with (t >> b) & 1 == 1, for t in range(self.count)
        block = ((1 << (1 << b)) - 1) << (1 << b)
        pattern = 0
        step = 1 << (b + 1)
        for start in range(0, self.count, step):
            pattern |= block << start
        return pattern & self.all_types

    def truth(self, g: Formula) -> int:
        cached = self._truth.get(g)
        if cached is not None:
            return cached
        match g:
            case Top():
                bits = self.all_types
            case Bottom():
                bits = 0
            case Not(h):
                bits = ~self.truth(h) & self.all_types
            case And(l, r):
                bits = self.truth(l) & self.truth(r)
            case Or(l, r):
                bits = self.truth(l) | self.truth(r)
            case Implies(l, r):
                bits = (~self.truth(l) & self.all_types) | self.truth(r)
            case Iff(l, r):
                bits = ~(self.truth(l) ^ self.truth(r)) & self.all_types
            case _:
                raise TypeError(f"unexpected subformula: {g!r}")
        self._truth[g] = bits
        return bits

    def demands(self, t: int) -> list[tuple[int, list[int]]]:
        """Existential successor demands of type t: for each, the slot pool
        every slot of the witness tuple must come from, plus the pools the
        tuple must additionally intersect (one per universal constraint)."""
        constraints = []  # every successor tuple must intersect these
        existential = []  # some successor tuple must live inside these
        for is_box, own, child in self.modal_info:
            holds = bool(own >> t & 1)
            inverse = ~child & self.all_types
            if is_box:
                if holds:
                    constraints.append(child)
                else:
                    existential.append(inverse)
            else:
                if holds:
                    existential.append(child)
                else:
                    constraints.append(inverse)
        return [(inside, constraints) for inside in existential]


def _iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _demand_satisfiable(
    inside: int,
    constraints: list[int],
    u_mask: int,
    arity: int,
    budget: _Budget,
    memo: dict,
) -> bool:
    """Can an ``arity``-slot tuple be drawn from ``u_mask & inside`` so that
    each constraint pool is hit by at least one slot?"""
    pool = u_mask & inside
    if pool == 0:
        return False
    hit_pools = []
    for c in constraints:
        hp = pool & c
        if hp == 0:
            return False
        hit_pools.append(hp)
    if len(hit_pools) <= arity:
        return True
    key = (pool, tuple(hit_pools))
    cached = memo.get(key)
    if cached is not None:
        return cached
    # minimum number of slots covering all constraint pools (exact set cover)
    budget.spend()
    coverages = set()
    for t in _iter_bits(pool):
        cov = 0
        for j, hp in enumerate(hit_pools):
            if hp >> t & 1:
                cov |= 1 << j
        coverages.add(cov)
    target = (1 << len(hit_pools)) - 1
    best = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for state in frontier:
            for cov in coverages:
                merged = state | cov
                cost = best[state] + 1
                if merged not in best or best[merged] > cost:
                    best[merged] = cost
                    nxt.append(merged)
        frontier = nxt
    ok = best.get(target, arity + 1) <= arity
    memo[key] = ok
    return ok


def _realizable(
    space: _TypeSpace, t: int, u_mask: int, budget: _Budget, memo: dict
) -> bool:
    budget.spend()
    return all(
        _demand_satisfiable(inside, constraints, u_mask, space.arity, budget, memo)
        for inside, constraints in space.demands(t)
    )


def _eliminate(space: _TypeSpace, budget: _Budget, memo: dict) -> int:
    """Greatest set of types each realizable against the set itself."""
    u_mask = space.all_types
    while True:
        survivors = 0
        for t in _iter_bits(u_mask):
            if _realizable(space, t, u_mask, budget, memo):
                survivors |= 1 << t
        if survivors == u_mask:
            return u_mask
        u_mask = survivors


def _min_support(
    space: _TypeSpace, star_mask: int, max_size: int, budget: _Budget, memo: dict
) -> int | None:
    """Smallest size of a self-supporting type set containing a root type,
    or None if none exists within ``max_size``."""
    root_types = [t for t in _iter_bits(space.root_mask & star_mask)]
    if not root_types:
        return None
    for k in range(1, max_size + 1):
        seen: set[frozenset[int]] = set()

        def grow(chosen: frozenset[int]) -> bool:
            if chosen in seen:
                return False
            seen.add(chosen)
            budget.spend()
            u_mask = 0
            for t in chosen:
                u_mask |= 1 << t
            for t in sorted(chosen):
                for inside, constraints in space.demands(t):
                    if _demand_satisfiable(
                        inside, constraints, u_mask, space.arity, budget, memo
                    ):
                        continue
                    if len(chosen) == k:
                        return False
                    for cand in _iter_bits(star_mask & inside & ~u_mask):
                        if grow(chosen | {cand}):
                            return True
                    return False
            return True

        for root in root_types:
            if grow(frozenset({root})):
                return k
    return None


def _letter_subsets(letters: list[str]) -> list[tuple[str, ...]]:
    # subsets in lexicographic order of their sorted element lists
    out: list[tuple[str, ...]] = []

    def extend(prefix: tuple[str, ...], start: int) -> None:
        out.append(prefix)
        for i in range(start, len(letters)):
            extend(prefix + (letters[i],), i + 1)

    extend((), 0)
    return out


def _relation_subsets(
    candidates: list[tuple[str, ...]]
) -> Iterator[tuple[tuple[str, ...], ...]]:
    # subsets in lexicographic order of their sorted tuple lists
    def extend(prefix: tuple, start: int) -> Iterator[tuple]:
        yield prefix
        for i in range(start, len(candidates)):
            yield from extend(prefix + (candidates[i],), i + 1)

    yield from extend((), 0)


def _walk_witness(
    f: Formula, arity: int, num_worlds: int, letters: list[str], budget: _Budget
) -> PointedModel:
    worlds = tuple(f"w{i}" for i in range(num_worlds))
    candidates = sorted(itertools.product(worlds, repeat=arity + 1))
    subsets = _letter_subsets(letters)
    for relation in _relation_subsets(candidates):
        for assignment in itertools.product(subsets, repeat=num_worlds):
            budget.spend()
            m = make_model(
                arity, worlds, relation, dict(zip(worlds, assignment))
            )
            ev = ModelEvaluator(m)
            bits = ev.mask(f)
            if bits:
                for w in worlds:
                    if bits >> ev.pos[w] & 1:
                        return PointedModel(m, w)
    raise AssertionError("decision phase promised a witness at this size")


def bounded_sat(
    f: Formula,
    arity: int,
    max_worlds: int,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> PointedModel | None:
    """Search all models with at most ``max_worlds`` worlds (valuations over
    the letters of f) for a point satisfying f.

    Returns the canonically least witness of minimal world count: models
    are ordered by world count, then by sorted relation tuple list, then by
    valuation, and the least world of the first satisfying model is
    returned.  ``None`` means unsatisfiable up to the bound.  Raises
    BudgetExceededError when the step budget runs out, which is distinct
    from an exhaustive negative answer.
    """
    if arity < 1:
        raise ValueError("arity must be >= 1")
    if max_worlds < 1:
        raise ValueError("max_worlds must be >= 1")
    tracker = _Budget(budget)
    space = _TypeSpace(f, arity, tracker)
    if space.root_mask == 0:
        return None
    memo: dict = {}
    # quick refutation: a root type unrealizable against every type at once
    # can never occur, whatever the world bound
    if not any(
        _realizable(space, t, space.all_types, tracker, memo)
        for t in _iter_bits(space.root_mask)
    ):
        return None
    star_mask = _eliminate(space, tracker, memo)
    if space.root_mask & star_mask == 0:
        return None
    k0 = _min_support(space, star_mask, max_worlds, tracker, memo)
    if k0 is None:
        return None
    return _walk_witness(f, arity, k0, space.letters, tracker)
