"""Derivation witnesses: finite proof trees and rational (cyclic) proof graphs.

A finite proof tree witnesses inductive membership. A rational proof tree is
a finite graph whose back-edges encode an infinite regular tree; it
witnesses membership in the generated interpretation when every node
matches a rule of the system and every node's judgment is inductively
derivable with corules admitted.

Rule indices in finite trees address the combined rule list (rules first,
then corules); rational trees may only reference plain rules. Malformed
trees (out-of-range indices, unreachable nodes) raise StructuralError,
which is distinct from a well-formed but invalid derivation (checkers
return False).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .inference import (
    InferenceSystem,
    InternalError,
    coind_interpretation,
    derivation_rounds,
    ind_interpretation,
    restrict,
)


class StructuralError(Exception):
    """The tree does not even have the right shape to be checked."""


@dataclass(frozen=True)
class FiniteProofTree:
    """A finite derivation: a judgment, the rule deriving it, one subtree per premise."""

    judgment: int
    rule_index: int
    children: tuple["FiniteProofTree", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)


@dataclass(frozen=True)
class RationalNode:
    """One node of a rational proof graph; children are node indices."""

    judgment: int
    rule_index: int
    children: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class RationalProofTree:
    """A finite graph presentation of a possibly-infinite regular proof tree."""

    nodes: tuple[RationalNode, ...]
    root: int = 0

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))


def _combined_rule(system: InferenceSystem, index: int):
    combined = system.rules + system.corules
    if not 0 <= index < len(combined):
        raise StructuralError(f"rule index {index} out of range "
                              f"(system has {len(combined)} rules and corules)")
    return combined[index]


def check_finite(tree: FiniteProofTree, system: InferenceSystem,
                 allow_corules: bool = False) -> bool:
    """Validate a finite derivation against the system.

    True iff at every node the referenced rule concludes the node's judgment
    and the children are exactly one subtree per premise. A node that uses a
    corule is rejected unless ``allow_corules`` is set.
    """
    stack = [tree]
    while stack:
        node = stack.pop()
        r = _combined_rule(system, node.rule_index)
        if node.rule_index >= len(system.rules) and not allow_corules:
            return False
        if r.conclusion != node.judgment:
            return False
        child_judgments = {c.judgment for c in node.children}
        if child_judgments != r.premises or len(node.children) != len(r.premises):
            return False
        stack.extend(node.children)
    return True


def extract_finite_proof(system: InferenceSystem, j: int,
                         allow_corules: bool = False) -> Optional[FiniteProofTree]:
    """A finite derivation of ``j``, or None when ``j`` is not inductively derivable.

    Each judgment is derived by the first declared rule that fires at the
    Kleene round where the judgment first appeared, so premise rounds
    strictly decrease toward the leaves and the tree depth never exceeds the
    universe size.
    """
    rounds = derivation_rounds(system, use_corules=allow_corules)
    if not 0 <= j < system.universe_size:
        raise ValueError(f"judgment id {j} out of range")
    if rounds[j] is None:
        return None
    candidates = list(enumerate(system.all_rules(allow_corules)))
    memo: dict[int, FiniteProofTree] = {}

    def build(k: int) -> FiniteProofTree:
        if k in memo:
            return memo[k]
        rk = rounds[k]
        for idx, r in candidates:
            if r.conclusion != k:
                continue
            if all(rounds[p] is not None and rounds[p] < rk for p in r.premises):
                children = tuple(build(p) for p in sorted(r.premises))
                memo[k] = FiniteProofTree(k, idx, children)
                return memo[k]
        raise InternalError(f"judgment {k} derivable at round {rk} but no rule fires")

    return build(j)


def _validate_rational(tree: RationalProofTree, system: InferenceSystem) -> None:
    n = len(tree.nodes)
    if n == 0:
        raise StructuralError("rational proof tree has no nodes")
    if not 0 <= tree.root < n:
        raise StructuralError(f"root index {tree.root} out of range")
    for node in tree.nodes:
        if not 0 <= node.rule_index < len(system.rules):
            raise StructuralError(f"rule index {node.rule_index} out of range "
                                  "(corules are not allowed in rational proofs)")
        if not 0 <= node.judgment < system.universe_size:
            raise StructuralError(f"judgment id {node.judgment} out of range")
        for c in node.children:
            if not 0 <= c < n:
                raise StructuralError(f"child index {c} out of range")
    seen = {tree.root}
    stack = [tree.root]
    while stack:
        for c in tree.nodes[stack.pop()].children:
            if c not in seen:
                seen.add(c)
                stack.append(c)
    if len(seen) != n:
        raise StructuralError("every node must be reachable from the root")


def check_rational_in_gen(tree: RationalProofTree, system: InferenceSystem) -> bool:
    """Validate a rational proof as a witness for the generated interpretation.

    True iff every node is derived by a rule of the system (corules
    forbidden) from exactly its premises, and every node's judgment is
    inductively derivable once corules are admitted. Acceptance implies the
    root lies in the generated interpretation.
    """
    _validate_rational(tree, system)
    bound = ind_interpretation(system, use_corules=True)
    for node in tree.nodes:
        r = system.rules[node.rule_index]
        if r.conclusion != node.judgment:
            return False
        child_judgments = {tree.nodes[c].judgment for c in node.children}
        if child_judgments != r.premises or len(node.children) != len(r.premises):
            return False
        if node.judgment not in bound:
            return False
    return True


def extract_rational_proof(system: InferenceSystem, j: int) -> Optional[RationalProofTree]:
    """A rational proof of ``j``, or None when ``j`` is outside the generated
    interpretation.

    Judgments are shared as graph nodes, so cycles arise exactly where the
    derivation is genuinely infinite. A judgment that is inductively
    derivable in the restricted system is derived by the rule firing at its
    first Kleene round (keeping that part of the graph acyclic); the rest
    use their consistency witness, the first declared applicable rule.
    """
    if not 0 <= j < system.universe_size:
        raise ValueError(f"judgment id {j} out of range")
    bound = ind_interpretation(system, use_corules=True)
    restricted = restrict(system, bound)
    gen = coind_interpretation(restricted)
    if j not in gen:
        return None
    rounds = derivation_rounds(restricted)
    eligible = [(idx, r) for idx, r in enumerate(system.rules) if r.conclusion in bound]

    def witness(k: int) -> int:
        rk = rounds[k]
        if rk is not None:
            for idx, r in eligible:
                if r.conclusion == k and all(
                        rounds[p] is not None and rounds[p] < rk for p in r.premises):
                    return idx
        for idx, r in eligible:
            if r.conclusion == k and all(p in gen for p in r.premises):
                return idx
        raise InternalError(f"judgment {k} in generated interpretation "
                            "but no rule sustains it")

    nodes: list[Optional[RationalNode]] = []
    index: dict[int, int] = {}

    def build(k: int) -> int:
        if k in index:
            return index[k]
        ni = len(nodes)
        index[k] = ni
        nodes.append(None)
        idx = witness(k)
        children = tuple(build(p) for p in sorted(system.rules[idx].premises))
        nodes[ni] = RationalNode(k, idx, children)
        return ni

    build(j)
    assert all(n is not None for n in nodes)
    return RationalProofTree(tuple(nodes), root=0)


def is_acyclic(tree: RationalProofTree) -> bool:
    """Whether the proof graph has no cycle (i.e. denotes a finite tree)."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = [WHITE] * len(tree.nodes)

    def visit(i: int) -> bool:
        color[i] = GRAY
        for c in tree.nodes[i].children:
            if color[c] == GRAY:
                return False
            if color[c] == WHITE and not visit(c):
                return False
        color[i] = BLACK
        return True

    return all(color[i] != WHITE or visit(i) for i in range(len(tree.nodes)))


def _rule_name(system: InferenceSystem, index: int) -> str:
    if index < len(system.rules):
        return f"rule {index}"
    return f"corule {index - len(system.rules)}"


def format_finite(tree: FiniteProofTree, system: InferenceSystem) -> str:
    """Indented text rendering of a finite proof tree."""
    lines: list[str] = []

    def emit(node: FiniteProofTree, depth: int) -> None:
        label = system.label_of(node.judgment)
        lines.append(f"{'  ' * depth}{label}  [{_rule_name(system, node.rule_index)}]")
        for c in node.children:
            emit(c, depth + 1)

    emit(tree, 0)
    return "\n".join(lines)


def format_rational(tree: RationalProofTree, system: InferenceSystem) -> str:
    """Indented text rendering of a rational proof graph.

    Nodes are numbered at first occurrence; later occurrences print as a
    ``^n`` reference, which is how back-edges stay finite on the page.
    """
    lines: list[str] = []
    seen: set[int] = set()

    def emit(ni: int, depth: int) -> None:
        pad = "  " * depth
        if ni in seen:
            lines.append(f"{pad}^{ni}")
            return
        seen.add(ni)
        node = tree.nodes[ni]
        label = system.label_of(node.judgment)
        lines.append(f"{pad}{ni}: {label}  [rule {node.rule_index}]")
        for c in node.children:
            emit(c, depth + 1)

    emit(tree.root, 0)
    return "\n".join(lines)
