"""Predicates on colists, instantiated as finite inference systems.

Six predicate families are supported, each over the suffix automaton of a
colist:

* ``member``: some position holds a given value (inductive),
* ``allpos``: every element is strictly positive (coinductive),
* ``always``: a predicate holds at every position (coinductive),
* ``eventually``: a predicate holds at some position (inductive),
* ``infoften``: a predicate holds at infinitely many positions
  (corule-generated),
* ``max``: a value is the maximum element (corule-generated).

Each ``gen_*_system`` function returns the inference system together with a
JudgmentScheme mapping abstract judgments (value, suffix state) to dense
ids. Two independent deciders, ``decide_direct`` (structural, looking at
prefix and loop directly) and ``spec_oracle`` (index-quantified brute
force over one periodicity window), exist purely to cross-check the engine
verdicts; they share no code with the interpretations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .colist import Colist, Finite, Lasso, SuffixAutomaton, get, suffix_automaton
from .inference import InferenceSystem, rule


class Kind(enum.Enum):
    """The supported predicate families."""

    MEMBER_OF = "member"
    ALL_POS = "allpos"
    EVENTUALLY = "eventually"
    ALWAYS = "always"
    INFINITELY_OFTEN = "infoften"
    MAX_ELEM = "max"


# Which interpretation gives each kind its intended meaning.
INTERPRETATION_OF_INTEREST = {
    Kind.MEMBER_OF: "ind",
    Kind.ALL_POS: "coind",
    Kind.EVENTUALLY: "ind",
    Kind.ALWAYS: "coind",
    Kind.INFINITELY_OFTEN: "gen",
    Kind.MAX_ELEM: "gen",
}


@dataclass(frozen=True)
class ElementPredicate:
    """A named, total, decidable predicate on naturals."""

    name: str
    holds: Callable[[int], bool]

    def __call__(self, n: int) -> bool:
        return bool(self.holds(n))

    def __repr__(self) -> str:
        return f"ElementPredicate({self.name!r})"


POSITIVE = ElementPredicate("positive", lambda n: n > 0)
EVEN = ElementPredicate("even", lambda n: n % 2 == 0)
ODD = ElementPredicate("odd", lambda n: n % 2 == 1)


def eq_to(k: int) -> ElementPredicate:
    return ElementPredicate(f"eq:{k}", lambda n: n == k)


def greater_than(k: int) -> ElementPredicate:
    return ElementPredicate(f"gt:{k}", lambda n: n > k)


def from_table(values: Iterable[int], name: Optional[str] = None) -> ElementPredicate:
    """A predicate that holds exactly on the given values."""
    table = frozenset(values)
    return ElementPredicate(name or f"in:{sorted(table)}", lambda n: n in table)


def predicate_by_name(text: str) -> ElementPredicate:
    """Parse a predicate name: positive, even, odd, eq:<n>, gt:<n>."""
    if text == "positive":
        return POSITIVE
    if text == "even":
        return EVEN
    if text == "odd":
        return ODD
    head, sep, arg = text.partition(":")
    if sep and head in ("eq", "gt"):
        if not arg.isdigit():
            raise ValueError(f"predicate argument must be a natural number: {text!r}")
        return eq_to(int(arg)) if head == "eq" else greater_than(int(arg))
    raise ValueError(f"unknown predicate {text!r} "
                     "(expected positive, even, odd, eq:<n>, gt:<n>)")


def max_of(a: int, b: int) -> int:
    """Larger of two naturals."""
    return a if a >= b else b


@dataclass(frozen=True)
class JudgmentScheme:
    """Bijection between a family's abstract judgments and dense ids.

    For ``member`` and ``max`` the universe is candidates x suffix states
    and ids are ``value_index * state_count + state``; for the other kinds
    the universe is the states themselves.
    """

    kind: Kind
    colist: Colist
    automaton: SuffixAutomaton
    candidates: Optional[tuple[int, ...]] = None
    predicate: Optional[ElementPredicate] = None

    @property
    def state_count(self) -> int:
        return self.automaton.state_count

    @property
    def universe_size(self) -> int:
        if self.candidates is None:
            return self.state_count
        return len(self.candidates) * self.state_count

    def encode(self, state: int, value: Optional[int] = None) -> int:
        if not 0 <= state < self.state_count:
            raise ValueError(f"state {state} out of range")
        if self.candidates is None:
            if value is not None:
                raise ValueError(f"{self.kind.value} judgments carry no value")
            return state
        if value is None or value not in self.candidates:
            raise ValueError(f"value {value!r} is not a candidate")
        return self.candidates.index(value) * self.state_count + state

    def decode(self, j: int) -> tuple[Optional[int], int]:
        """The (value, state) pair of a judgment id; value is None for
        state-only kinds."""
        if not 0 <= j < self.universe_size:
            raise ValueError(f"judgment id {j} out of range")
        if self.candidates is None:
            return None, j
        vi, state = divmod(j, self.state_count)
        return self.candidates[vi], state

    def label(self, j: int) -> str:
        value, state = self.decode(j)
        if value is None:
            return f"{self.kind.value}(s{state})"
        return f"{self.kind.value}({value},s{state})"

    def labels(self) -> tuple[str, ...]:
        return tuple(self.label(j) for j in range(self.universe_size))


def gen_member_system(x: int, xs: Colist) -> tuple[InferenceSystem, JudgmentScheme]:
    """Inference system for membership of ``x`` in ``xs`` (inductive).

    An axiom derives membership at every suffix whose head is ``x``; a step
    rule lifts membership in a tail to membership in the suffix. Nothing
    concludes at the empty suffix.
    """
    if x < 0:
        raise ValueError("element must be a natural number")
    aut = suffix_automaton(xs)
    scheme = JudgmentScheme(Kind.MEMBER_OF, xs, aut, candidates=(x,))
    rules = []
    for s in aut.states():
        if aut.heads[s] is None:
            continue
        if aut.heads[s] == x:
            rules.append(rule(scheme.encode(s, x)))
        nxt = aut.nexts[s]
        if nxt is not None:
            rules.append(rule(scheme.encode(s, x), scheme.encode(nxt, x)))
    return InferenceSystem(scheme.universe_size, tuple(rules),
                           labels=scheme.labels()), scheme


def gen_always_system(p: ElementPredicate,
                      xs: Colist) -> tuple[InferenceSystem, JudgmentScheme]:
    """Inference system for ``p`` holding at every position (coinductive).

    The empty suffix is an axiom; a non-empty suffix whose head satisfies
    ``p`` is derived from its tail. Interpreted inductively this only
    reaches finite colists, which is exactly why the coinductive reading is
    the one of interest.
    """
    aut = suffix_automaton(xs)
    scheme = JudgmentScheme(Kind.ALWAYS, xs, aut, predicate=p)
    rules = []
    for s in aut.states():
        head = aut.heads[s]
        if head is None:
            rules.append(rule(scheme.encode(s)))
        elif p(head):
            rules.append(rule(scheme.encode(s), scheme.encode(aut.nexts[s])))
    return InferenceSystem(scheme.universe_size, tuple(rules),
                           labels=scheme.labels()), scheme


def gen_allpos_system(xs: Colist) -> tuple[InferenceSystem, JudgmentScheme]:
    """The strictly-positive instance of the always system."""
    aut = suffix_automaton(xs)
    scheme = JudgmentScheme(Kind.ALL_POS, xs, aut, predicate=POSITIVE)
    system, _ = gen_always_system(POSITIVE, xs)
    return InferenceSystem(system.universe_size, system.rules,
                           labels=scheme.labels()), scheme


def gen_eventually_system(p: ElementPredicate,
                          xs: Colist) -> tuple[InferenceSystem, JudgmentScheme]:
    """Inference system for ``p`` holding at some position (inductive).

    An axiom fires at every suffix whose head satisfies ``p``; a step rule
    lifts a hit in the tail. Its coinductive interpretation is all states on
    any lasso (the step rule alone sustains an infinite tree), so only the
    inductive reading means anything.
    """
    aut = suffix_automaton(xs)
    scheme = JudgmentScheme(Kind.EVENTUALLY, xs, aut, predicate=p)
    rules = []
    for s in aut.states():
        head = aut.heads[s]
        if head is None:
            continue
        if p(head):
            rules.append(rule(scheme.encode(s)))
        nxt = aut.nexts[s]
        if nxt is not None:
            rules.append(rule(scheme.encode(s), scheme.encode(nxt)))
    return InferenceSystem(scheme.universe_size, tuple(rules),
                           labels=scheme.labels()), scheme


def gen_infoften_system(p: ElementPredicate,
                        xs: Colist) -> tuple[InferenceSystem, JudgmentScheme]:
    """Inference system for ``p`` holding infinitely often (corule-generated).

    The only rules step from a suffix to its tail, so nothing is derivable
    inductively and everything is derivable coinductively on a lasso. The
    coaxioms, one per suffix whose head satisfies ``p``, cut the coinductive
    reading down to suffixes from which hits never stop coming.
    """
    aut = suffix_automaton(xs)
    scheme = JudgmentScheme(Kind.INFINITELY_OFTEN, xs, aut, predicate=p)
    rules = []
    corules = []
    for s in aut.states():
        head = aut.heads[s]
        if head is None:
            continue
        rules.append(rule(scheme.encode(s), scheme.encode(aut.nexts[s])))
        if p(head):
            corules.append(rule(scheme.encode(s)))
    return InferenceSystem(scheme.universe_size, tuple(rules), tuple(corules),
                           labels=scheme.labels()), scheme


def gen_maxelem_system(xs: Colist,
                       candidates: Iterable[int]) -> tuple[InferenceSystem, JudgmentScheme]:
    """Inference system for "value is the maximum element" (corule-generated).

    Judgments pair a candidate value with a suffix state. An axiom derives
    the head as maximum of a one-element remainder (finite colists only); a
    step rule combines the head with a candidate maximum of the tail; a
    coaxiom claims any head as maximum of its suffix. Candidates must cover
    every element of the colist (those are the only possible maxima) and may
    add probe values, which the corules then correctly fail to justify.
    """
    cands = tuple(sorted(set(candidates)))
    if not cands:
        raise ValueError("candidate set must be nonempty")
    _check_candidates_are_naturals(cands)
    occurring = set(_all_elements(xs))
    missing = occurring - set(cands)
    if missing:
        raise ValueError(f"candidates must include every element of the colist; "
                         f"missing {sorted(missing)}")
    aut = suffix_automaton(xs)
    scheme = JudgmentScheme(Kind.MAX_ELEM, xs, aut, candidates=cands)
    rules = []
    corules = []
    for s in aut.states():
        head = aut.heads[s]
        if head is None:
            continue
        nxt = aut.nexts[s]
        if nxt is not None and aut.heads[nxt] is None:
            rules.append(rule(scheme.encode(s, head)))
        if nxt is not None:
            for y in cands:
                # max(head, y) is itself a candidate: it is head or y.
                rules.append(rule(scheme.encode(s, max_of(head, y)),
                                  scheme.encode(nxt, y)))
        corules.append(rule(scheme.encode(s, head)))
    return InferenceSystem(scheme.universe_size, tuple(rules), tuple(corules),
                           labels=scheme.labels()), scheme


def _check_candidates_are_naturals(cands: tuple[int, ...]) -> None:
    for c in cands:
        if not isinstance(c, int) or isinstance(c, bool) or c < 0:
            raise ValueError(f"candidates must be natural numbers, got {c!r}")


def _all_elements(xs: Colist) -> tuple[int, ...]:
    if isinstance(xs, Finite):
        return xs.elements
    return xs.prefix + xs.loop


def decide_direct(kind: Kind, xs: Colist, *, x: Optional[int] = None,
                  predicate: Optional[ElementPredicate] = None):
    """Direct structural decision, independent of the inference engine.

    Returns a boolean, except for ``max`` which returns the maximum element
    or None on the empty colist.
    """
    if kind is Kind.MEMBER_OF:
        return _require_value(kind, x) in _all_elements(xs)
    if kind is Kind.ALL_POS:
        return all(POSITIVE(e) for e in _all_elements(xs))
    if kind is Kind.ALWAYS:
        p = _require_predicate(kind, predicate)
        return all(p(e) for e in _all_elements(xs))
    if kind is Kind.EVENTUALLY:
        p = _require_predicate(kind, predicate)
        return any(p(e) for e in _all_elements(xs))
    if kind is Kind.INFINITELY_OFTEN:
        p = _require_predicate(kind, predicate)
        return isinstance(xs, Lasso) and any(p(e) for e in xs.loop)
    if kind is Kind.MAX_ELEM:
        elements = _all_elements(xs)
        return max(elements) if elements else None
    raise ValueError(f"unknown kind {kind!r}")


def _window(xs: Colist) -> int:
    """Quantifier bound exploiting periodicity: every position from the
    prefix-plus-loop horizon on repeats within one further loop unroll."""
    if isinstance(xs, Finite):
        return len(xs.elements)
    return len(xs.prefix) + 2 * len(xs.loop)


def _lifted(p: ElementPredicate, value: Optional[int]) -> bool:
    return value is not None and p(value)


def spec_oracle(kind: Kind, xs: Colist, *, x: Optional[int] = None,
                predicate: Optional[ElementPredicate] = None) -> bool:
    """Index-quantified specification, brute-forced over one periodicity window.

    This is the meaning each inference system is checked against, evaluated
    without any reference to rules or automaton states.
    """
    bound = _window(xs)
    if kind is Kind.MEMBER_OF:
        value = _require_value(kind, x)
        return any(get(xs, i) == value for i in range(bound))
    if kind in (Kind.ALL_POS, Kind.ALWAYS):
        p = POSITIVE if kind is Kind.ALL_POS else _require_predicate(kind, predicate)
        return all(p(get(xs, i)) for i in range(bound))
    if kind is Kind.EVENTUALLY:
        p = _require_predicate(kind, predicate)
        return any(p(get(xs, i)) for i in range(bound))
    if kind is Kind.INFINITELY_OFTEN:
        p = _require_predicate(kind, predicate)
        if bound == 0:
            # An empty universal quantifier would claim the empty colist has
            # infinitely many hits; the unbounded specification says no.
            return False
        return all(any(_lifted(p, get(xs, n)) for n in range(i + 1, i + bound + 1))
                   for i in range(bound))
    if kind is Kind.MAX_ELEM:
        m = _require_value(kind, x)
        if not any(get(xs, i) == m for i in range(bound)):
            return False
        return all(m == max_of(m, get(xs, i)) for i in range(bound))
    raise ValueError(f"unknown kind {kind!r}")


def _require_value(kind: Kind, x: Optional[int]) -> int:
    if x is None:
        raise ValueError(f"{kind.value} needs a value")
    return x


def _require_predicate(kind: Kind, p: Optional[ElementPredicate]) -> ElementPredicate:
    if p is None:
        raise ValueError(f"{kind.value} needs an element predicate")
    return p
