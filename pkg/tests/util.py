"""Shared test helpers: independent oracles and random generators.

The oracles here deliberately avoid the engine's fixed-point iteration.
Closed and consistent sets are found by enumerating all 2^n subsets of the
universe, and colists are compared by unrolling indices. These are the
ground truths the fast paths get checked against, so they must stay
independent of the code under test.
"""

from __future__ import annotations

import random
from itertools import product

from corules import (
    Colist,
    ElementPredicate,
    Finite,
    InferenceSystem,
    JudgmentSet,
    Lasso,
    Rule,
    apply_step,
    eq_to,
    get,
    greater_than,
)
from corules.predicates import EVEN, ODD, POSITIVE


def closed_by_scan(rules: tuple[Rule, ...], members: frozenset[int]) -> bool:
    return all(r.conclusion in members
               for r in rules if r.premises <= members)


def consistent_by_scan(rules: tuple[Rule, ...], members: frozenset[int]) -> bool:
    return all(any(r.conclusion == j and r.premises <= members for r in rules)
               for j in members)


def _subsets(n: int):
    for bits in range(1 << n):
        yield frozenset(j for j in range(n) if bits >> j & 1)


def ind_oracle(system: InferenceSystem, use_corules: bool = False) -> JudgmentSet:
    """Intersection of all closed subsets, by exhaustive enumeration."""
    rules = system.all_rules(use_corules)
    n = system.universe_size
    acc = frozenset(range(n))
    for members in _subsets(n):
        if closed_by_scan(rules, members):
            acc &= members
    return JudgmentSet.of(n, acc)


def coind_oracle(system: InferenceSystem) -> JudgmentSet:
    """Union of all consistent subsets, by exhaustive enumeration."""
    n = system.universe_size
    acc: frozenset[int] = frozenset()
    for members in _subsets(n):
        if consistent_by_scan(system.rules, members):
            acc |= members
    return JudgmentSet.of(n, acc)


def gen_oracle(system: InferenceSystem) -> JudgmentSet:
    """The generated interpretation via the enumeration oracles only."""
    bound = set(ind_oracle(system, use_corules=True))
    restricted = InferenceSystem(
        system.universe_size,
        tuple(r for r in system.rules if r.conclusion in bound))
    return coind_oracle(restricted)


def step_by_scan(system: InferenceSystem, members: frozenset[int],
                 use_corules: bool = False) -> frozenset[int]:
    """Per-rule scan of one inference step, independent of the bitmask path."""
    return frozenset(r.conclusion for r in system.all_rules(use_corules)
                     if r.premises <= members)


def random_system(rng: random.Random, max_universe: int = 8, max_rules: int = 16,
                  max_corules: int = 0, max_premises: int = 3) -> InferenceSystem:
    n = rng.randint(1, max_universe)

    def some_rules(count: int) -> tuple[Rule, ...]:
        out = []
        for _ in range(count):
            k = rng.randint(0, min(max_premises, n))
            premises = frozenset(rng.sample(range(n), k))
            out.append(Rule(premises, rng.randrange(n)))
        return tuple(out)

    rules = some_rules(rng.randint(0, max_rules))
    corules = some_rules(rng.randint(0, max_corules)) if max_corules else ()
    return InferenceSystem(n, rules, corules)


def coaxioms_for(system: InferenceSystem) -> InferenceSystem:
    """The same rules with one coaxiom per judgment of the universe."""
    coaxioms = tuple(Rule(frozenset(), j) for j in range(system.universe_size))
    return InferenceSystem(system.universe_size, system.rules, coaxioms)


def without_corules(system: InferenceSystem) -> InferenceSystem:
    return InferenceSystem(system.universe_size, system.rules, ())


def random_colist(rng: random.Random, max_element: int = 4, max_prefix: int = 3,
                  max_loop: int = 3) -> Colist:
    def chunk(lo: int, hi: int) -> tuple[int, ...]:
        return tuple(rng.randint(0, max_element)
                     for _ in range(rng.randint(lo, hi)))

    if rng.random() < 0.3:
        return Finite(chunk(0, max_prefix + max_loop))
    return Lasso(chunk(0, max_prefix), chunk(1, max_loop))


def random_lasso(rng: random.Random, max_element: int = 4, max_prefix: int = 3,
                 max_loop: int = 3) -> Lasso:
    while True:
        xs = random_colist(rng, max_element, max_prefix, max_loop)
        if isinstance(xs, Lasso):
            return xs


def all_finite_lists(max_len: int, max_element: int) -> list[Finite]:
    out = [Finite(())]
    for length in range(1, max_len + 1):
        out.extend(Finite(es)
                   for es in product(range(max_element + 1), repeat=length))
    return out


def unroll(xs: Colist, count: int) -> list:
    return [get(xs, i) for i in range(count)]


def elements_of(xs: Colist) -> tuple[int, ...]:
    return xs.elements if isinstance(xs, Finite) else xs.prefix + xs.loop


PREDICATE_POOL: tuple[ElementPredicate, ...] = (
    POSITIVE, EVEN, ODD, eq_to(0), eq_to(2), greater_than(1),
)


def kleene_iterations(system: InferenceSystem, use_corules: bool,
                      downward: bool) -> int:
    """Count step applications until stabilization, via the public step only."""
    n = system.universe_size
    current = JudgmentSet.full(n) if downward else JudgmentSet.empty(n)
    for rounds in range(1, n + 3):
        nxt = apply_step(system, current, use_corules=use_corules)
        if nxt == current:
            return rounds
        current = nxt
    raise AssertionError("no fixed point found within universe_size + 2 rounds")
