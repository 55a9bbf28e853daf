"""Finite inference systems and their three interpretations.

An inference system is a finite universe of judgments (dense ids
``0..universe_size-1``) plus rules, each a set of premise ids and one
conclusion id. Corules are extra rules that participate only in the
auxiliary inductive phase of the generated interpretation.

The three interpretations:

* ``ind_interpretation``: the least closed set (judgments with a finite
  proof tree), computed by Kleene iteration upward from the empty set.
* ``coind_interpretation``: the largest consistent set (judgments with a
  finite or infinite proof tree), computed downward from the full universe.
* ``gen_interpretation``: the coinductive interpretation of the system
  restricted to conclusions that are inductively derivable once corules
  are allowed. With no corules this collapses to the inductive
  interpretation; with one coaxiom per judgment it collapses to the
  coinductive one.

``is_closed``, ``is_consistent``, and ``bounded_coinduction_check``
mechanize the induction, coinduction, and bounded coinduction proof
obligations, reporting per-judgment counterexamples and witnesses.

All values are immutable and every operation is a pure function, so
everything here can be freely shared across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Optional

# Reason tags carried by CheckReport failures.
CLOSEDNESS = "closedness"
CONSISTENCY = "consistency"
BOUNDEDNESS = "boundedness"


class InternalError(Exception):
    """A violated engine invariant. Not a user error."""


@dataclass(frozen=True)
class Judgment:
    """A judgment: a dense index into the universe, optionally labeled."""

    id: int
    label: Optional[str] = None

    def __str__(self) -> str:
        return self.label if self.label is not None else f"j{self.id}"


@dataclass(frozen=True)
class Rule:
    """An inference rule: if all premises hold, the conclusion holds.

    Premises form a set (order and multiplicity never matter). A rule with
    no premises is an axiom.
    """

    premises: frozenset[int]
    conclusion: int

    def __post_init__(self):
        object.__setattr__(self, "premises", frozenset(self.premises))

    @property
    def is_axiom(self) -> bool:
        return not self.premises

    def __str__(self) -> str:
        return f"{self.conclusion} <- {' '.join(map(str, sorted(self.premises)))}".rstrip()


def rule(conclusion: int, *premises: int) -> Rule:
    """Shorthand constructor, reading like ``conclusion <- premises``."""
    return Rule(frozenset(premises), conclusion)


@dataclass(frozen=True)
class JudgmentSet:
    """A subset of the universe as a fixed-width bit vector.

    All set operations are exact. Two sets are equal iff they have the same
    universe size and the same members.
    """

    size: int
    bits: int = 0

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("universe size must be non-negative")
        if self.bits < 0 or self.bits >> self.size:
            raise ValueError("bit vector out of range for universe size")

    @classmethod
    def empty(cls, size: int) -> "JudgmentSet":
        return cls(size, 0)

    @classmethod
    def full(cls, size: int) -> "JudgmentSet":
        return cls(size, (1 << size) - 1)

    @classmethod
    def of(cls, size: int, ids: Iterable[int]) -> "JudgmentSet":
        bits = 0
        for j in ids:
            if not 0 <= j < size:
                raise ValueError(f"judgment id {j} out of range for universe of {size}")
            bits |= 1 << j
        return cls(size, bits)

    def __contains__(self, j: int) -> bool:
        return 0 <= j < self.size and bool(self.bits >> j & 1)

    def __iter__(self) -> Iterator[int]:
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return bool(self.bits)

    def _check_peer(self, other: "JudgmentSet") -> None:
        if self.size != other.size:
            raise ValueError("judgment sets over different universes")

    def union(self, other: "JudgmentSet") -> "JudgmentSet":
        self._check_peer(other)
        return JudgmentSet(self.size, self.bits | other.bits)

    def intersection(self, other: "JudgmentSet") -> "JudgmentSet":
        self._check_peer(other)
        return JudgmentSet(self.size, self.bits & other.bits)

    def difference(self, other: "JudgmentSet") -> "JudgmentSet":
        self._check_peer(other)
        return JudgmentSet(self.size, self.bits & ~other.bits)

    def is_subset_of(self, other: "JudgmentSet") -> bool:
        self._check_peer(other)
        return self.bits & ~other.bits == 0

    __or__ = union
    __and__ = intersection
    __sub__ = difference
    __le__ = is_subset_of

    def ids(self) -> tuple[int, ...]:
        return tuple(self)


@dataclass(frozen=True)
class InferenceSystem:
    """A finite universe together with rules and (optionally) corules.

    Rule and corule order is irrelevant to every interpretation; it only
    breaks ties when reporting witnesses. Duplicate rules are permitted and
    semantically inert. ``labels``, when given, names every judgment.
    """

    universe_size: int
    rules: tuple[Rule, ...]
    corules: tuple[Rule, ...] = ()
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "corules", tuple(self.corules))
        if self.universe_size < 0:
            raise ValueError("universe size must be non-negative")
        for r in self.rules + self.corules:
            ids = set(r.premises) | {r.conclusion}
            bad = [j for j in ids if not 0 <= j < self.universe_size]
            if bad:
                raise ValueError(f"rule {r} references judgment ids {sorted(bad)} "
                                 f"outside universe of {self.universe_size}")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != self.universe_size:
                raise ValueError("label table must name every judgment")
            if len(set(self.labels)) != len(self.labels):
                raise ValueError("judgment labels must be unique")

    def judgment(self, j: int) -> Judgment:
        if not 0 <= j < self.universe_size:
            raise ValueError(f"judgment id {j} out of range")
        return Judgment(j, self.labels[j] if self.labels else None)

    def label_of(self, j: int) -> str:
        return str(self.judgment(j))

    def all_rules(self, use_corules: bool = False) -> tuple[Rule, ...]:
        """The rules of the system, with corules appended when requested."""
        return self.rules + self.corules if use_corules else self.rules

    @cached_property
    def _rule_masks(self) -> tuple[tuple[int, int], ...]:
        return tuple((_premise_mask(r), 1 << r.conclusion) for r in self.rules)

    @cached_property
    def _corule_masks(self) -> tuple[tuple[int, int], ...]:
        return tuple((_premise_mask(r), 1 << r.conclusion) for r in self.corules)


def _premise_mask(r: Rule) -> int:
    mask = 0
    for p in r.premises:
        mask |= 1 << p
    return mask


def _step_bits(masks: Iterable[tuple[int, int]], bits: int) -> int:
    out = 0
    for premise_mask, conclusion_bit in masks:
        if bits & premise_mask == premise_mask:
            out |= conclusion_bit
    return out


def _masks(system: InferenceSystem, use_corules: bool) -> tuple[tuple[int, int], ...]:
    return system._rule_masks + system._corule_masks if use_corules else system._rule_masks


def apply_step(system: InferenceSystem, s: JudgmentSet,
               use_corules: bool = False) -> JudgmentSet:
    """One inference step: conclusions of all rules whose premises lie in ``s``.

    This is the monotone operator whose least and greatest fixed points are
    the inductive and coinductive interpretations.
    """
    if s.size != system.universe_size:
        raise ValueError("judgment set sized for a different universe")
    return JudgmentSet(s.size, _step_bits(_masks(system, use_corules), s.bits))


def _kleene(masks, start: int, size: int) -> tuple[int, int]:
    """Iterate the step from ``start`` to a fixed point.

    Returns (fixpoint bits, number of step applications). Monotone ascent or
    descent over a universe of ``size`` judgments must stabilize within
    ``size + 1`` applications; exceeding that bound is an engine bug.
    """
    current = start
    for rounds in range(1, size + 2):
        nxt = _step_bits(masks, current)
        if nxt == current:
            return current, rounds
        current = nxt
    raise InternalError(f"no fixed point within {size + 1} iterations")


def ind_interpretation(system: InferenceSystem, use_corules: bool = False) -> JudgmentSet:
    """The least fixed point: judgments with a finite proof tree."""
    bits, _ = _kleene(_masks(system, use_corules), 0, system.universe_size)
    return JudgmentSet(system.universe_size, bits)


def coind_interpretation(system: InferenceSystem) -> JudgmentSet:
    """The greatest fixed point: judgments with an arbitrary proof tree.

    Corules never participate here; they only matter to
    ``gen_interpretation``.
    """
    n = system.universe_size
    bits, _ = _kleene(system._rule_masks, (1 << n) - 1, n)
    return JudgmentSet(n, bits)


def derivation_rounds(system: InferenceSystem,
                      use_corules: bool = False) -> tuple[Optional[int], ...]:
    """First Kleene round (1-based) at which each judgment becomes derivable.

    None for judgments outside the inductive interpretation. Premises of the
    rule that first derives a judgment all have strictly smaller rounds,
    which is what makes extracted proof trees finite.
    """
    n = system.universe_size
    masks = _masks(system, use_corules)
    rounds: list[Optional[int]] = [None] * n
    current = 0
    for r in range(1, n + 2):
        nxt = _step_bits(masks, current)
        if nxt == current:
            return tuple(rounds)
        new = nxt & ~current
        while new:
            low = new & -new
            rounds[low.bit_length() - 1] = r
            new ^= low
        current = nxt
    raise InternalError(f"no fixed point within {n + 1} iterations")


def restrict(system: InferenceSystem, s: JudgmentSet) -> InferenceSystem:
    """The system over the same universe keeping only rules concluding in ``s``.

    Corules are dropped. Rule order is preserved.
    """
    if s.size != system.universe_size:
        raise ValueError("judgment set sized for a different universe")
    kept = tuple(r for r in system.rules if r.conclusion in s)
    return InferenceSystem(system.universe_size, kept, (), system.labels)


def gen_interpretation(system: InferenceSystem) -> JudgmentSet:
    """The corule-generated interpretation.

    First the inductive interpretation with corules admitted is computed;
    then the coinductive interpretation of the system restricted to those
    conclusions. The result is a fixed point of the restricted step,
    in general neither its least nor its greatest.
    """
    bound = ind_interpretation(system, use_corules=True)
    result = coind_interpretation(restrict(system, bound))
    if not result.is_subset_of(bound):
        raise InternalError("generated interpretation escaped its inductive bound")
    return result


@dataclass(frozen=True)
class Failure:
    """One violated proof obligation: which judgment, why, and through which rule."""

    judgment: int
    reason: str
    rule: Optional[Rule] = None


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a principle check.

    ``ok`` is true iff there are no failures. ``witnesses`` maps each
    consistent judgment to the first declared rule that concludes it from
    premises inside the checked set.
    """

    ok: bool
    failures: tuple[Failure, ...] = ()
    witnesses: Mapping[int, Rule] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "failures", tuple(self.failures))
        if self.ok != (not self.failures):
            raise ValueError("ok must hold exactly when there are no failures")

    def failures_tagged(self, reason: str) -> tuple[Failure, ...]:
        return tuple(f for f in self.failures if f.reason == reason)


def is_closed(system: InferenceSystem, s: JudgmentSet) -> CheckReport:
    """Check the induction obligation: every applicable rule concludes in ``s``.

    Each failure names the conclusion that is missing and the rule that
    derives it, in ascending judgment order then rule declaration order.
    """
    if s.size != system.universe_size:
        raise ValueError("judgment set sized for a different universe")
    hits = []
    for idx, r in enumerate(system.rules):
        if all(p in s for p in r.premises) and r.conclusion not in s:
            hits.append((r.conclusion, idx, r))
    hits.sort(key=lambda h: (h[0], h[1]))
    failures = tuple(Failure(c, CLOSEDNESS, r) for c, _, r in hits)
    return CheckReport(not failures, failures)


def is_consistent(system: InferenceSystem, s: JudgmentSet) -> CheckReport:
    """Check the coinduction obligation: every member of ``s`` is concluded
    by some rule whose premises lie in ``s``.

    Witnesses record, for each member, the first such rule in declaration
    order. Corules never count.
    """
    if s.size != system.universe_size:
        raise ValueError("judgment set sized for a different universe")
    failures = []
    witnesses: dict[int, Rule] = {}
    for j in s:
        for r in system.rules:
            if r.conclusion == j and all(p in s for p in r.premises):
                witnesses[j] = r
                break
        else:
            failures.append(Failure(j, CONSISTENCY, None))
    return CheckReport(not failures, tuple(failures), witnesses)


def bounded_coinduction_check(system: InferenceSystem, spec: JudgmentSet) -> CheckReport:
    """Check the bounded coinduction obligations for ``spec``.

    Two sub-checks, distinguishable by failure reason tag:

    * boundedness: every judgment of ``spec`` is inductively derivable once
      corules are admitted (failures are tagged ``BOUNDEDNESS``);
    * consistency: ``spec`` is consistent with respect to the rules alone
      (failures are tagged ``CONSISTENCY``, witnesses as in
      ``is_consistent``).

    When both pass, ``spec`` is contained in the generated interpretation;
    this inclusion is verified before returning.
    """
    if spec.size != system.universe_size:
        raise ValueError("judgment set sized for a different universe")
    bound = ind_interpretation(system, use_corules=True)
    failures = [Failure(j, BOUNDEDNESS, None) for j in spec if j not in bound]
    consistency = is_consistent(system, spec)
    failures.extend(consistency.failures)
    failures.sort(key=lambda f: (f.judgment, f.reason))
    ok = not failures
    if ok and not spec.is_subset_of(gen_interpretation(system)):
        raise InternalError("bounded and consistent spec escaped the "
                            "generated interpretation")
    return CheckReport(ok, tuple(failures), consistency.witnesses)
