"""Text formats and command-line entry points.

System files (``.inf``) are line oriented; ``#`` starts a comment:

    judgments: a b c        # exactly once, first directive
    rule: c <- a b          # conclusion <- premises; an axiom has none
    corule: a <-
    spec: a c               # optional, at most once

Judgment names are arbitrary non-whitespace tokens (except the reserved
``<-``), mapped to dense ids in declaration order.

Colist literals are whitespace-separated naturals, with ``|`` introducing
the loop of a lasso: ``1 2`` is a finite list, ``1 2 | 3 4`` repeats
``3 4`` forever after ``1 2``, ``| 1`` is the constant stream, and the
empty string is the empty list.

Exit codes: 0 success (for ``pred``: all routes agree on true), 1 a
well-formed negative outcome (failed check, underivable judgment, agreed
false verdict), 2 route disagreement in ``pred`` (an engine bug signal),
64 unparsable input, 70 violated internal invariant.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .colist import Colist, Finite, Lasso
from .inference import (
    BOUNDEDNESS,
    CONSISTENCY,
    InferenceSystem,
    InternalError,
    JudgmentSet,
    Rule,
    bounded_coinduction_check,
    coind_interpretation,
    gen_interpretation,
    ind_interpretation,
)
from .predicates import (
    Kind,
    decide_direct,
    gen_allpos_system,
    gen_always_system,
    gen_eventually_system,
    gen_infoften_system,
    gen_maxelem_system,
    gen_member_system,
    predicate_by_name,
    spec_oracle,
)
from .prooftree import (
    StructuralError,
    extract_finite_proof,
    extract_rational_proof,
    format_finite,
    format_rational,
)

ARROW = "<-"


class ParseError(Exception):
    """A diagnosable problem in an input text."""

    def __init__(self, message: str, line: Optional[int] = None,
                 column: Optional[int] = None, code: str = "parse-error"):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column
        self.code = code

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        return f"line {self.line}, column {self.column}: {self.message}"


@dataclass(frozen=True)
class SystemFile:
    """A parsed system file: names in declaration order, the system, and the
    optional specification set."""

    names: tuple[str, ...]
    system: InferenceSystem
    spec: Optional[JudgmentSet]

    def id_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ParseError(f"unknown judgment name {name!r}", code="unknown-name") from None


def _tokens(line_body: str) -> list[tuple[str, int]]:
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line_body)]


def parse_system(text: str) -> SystemFile:
    names: list[str] = []
    ids: dict[str, int] = {}
    rules: list[Rule] = []
    corules: list[Rule] = []
    spec_ids: Optional[list[int]] = None
    saw_header = False

    def lookup(name: str, line: int, col: int) -> int:
        if name == ARROW:
            raise ParseError(f"unexpected {ARROW}", line, col, "malformed-arrow")
        if name not in ids:
            raise ParseError(f"unknown judgment name {name!r}", line, col, "unknown-name")
        return ids[name]

    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        tokens = _tokens(body)
        directive, col = tokens[0]
        rest = tokens[1:]
        if directive == "judgments:":
            if saw_header:
                raise ParseError("duplicate judgments: header", lineno, col,
                                 "duplicate-header")
            saw_header = True
            if not rest:
                raise ParseError("judgments: needs at least one name", lineno, col,
                                 "empty-judgments")
            for name, ncol in rest:
                if name == ARROW:
                    raise ParseError(f"{ARROW} is not a valid judgment name",
                                     lineno, ncol, "reserved-name")
                if name in ids:
                    raise ParseError(f"duplicate judgment name {name!r}", lineno, ncol,
                                     "duplicate-name")
                ids[name] = len(names)
                names.append(name)
        elif directive in ("rule:", "corule:"):
            if not saw_header:
                raise ParseError("judgments: header must be the first directive",
                                 lineno, col, "missing-header")
            if not rest:
                raise ParseError(f"{directive} needs a conclusion and {ARROW}",
                                 lineno, col, "malformed-arrow")
            (concl_name, ccol), tail = rest[0], rest[1:]
            conclusion = lookup(concl_name, lineno, ccol)
            if not tail or tail[0][0] != ARROW:
                where = tail[0][1] if tail else ccol + len(concl_name)
                raise ParseError(f"expected {ARROW} after the conclusion",
                                 lineno, where, "malformed-arrow")
            premises = frozenset(lookup(n, lineno, ncol) for n, ncol in tail[1:])
            target = rules if directive == "rule:" else corules
            target.append(Rule(premises, conclusion))
        elif directive == "spec:":
            if not saw_header:
                raise ParseError("judgments: header must be the first directive",
                                 lineno, col, "missing-header")
            if spec_ids is not None:
                raise ParseError("duplicate spec: line", lineno, col, "duplicate-spec")
            spec_ids = [lookup(n, lineno, ncol) for n, ncol in rest]
        else:
            if not saw_header:
                raise ParseError("judgments: header must be the first directive",
                                 lineno, col, "missing-header")
            raise ParseError(f"unknown directive {directive!r}", lineno, col,
                             "unknown-directive")
    if not saw_header:
        raise ParseError("missing judgments: header", 1, 1, "missing-header")
    system = InferenceSystem(len(names), tuple(rules), tuple(corules),
                             labels=tuple(names))
    spec = JudgmentSet.of(len(names), spec_ids) if spec_ids is not None else None
    return SystemFile(tuple(names), system, spec)


def _render_rule(keyword: str, r: Rule, names: tuple[str, ...]) -> str:
    parts = [keyword, names[r.conclusion], ARROW]
    parts.extend(names[p] for p in sorted(r.premises))
    return " ".join(parts)


def render_system(sf: SystemFile) -> str:
    """Canonical text for a parsed system; reparsing yields an equal SystemFile."""
    lines = ["judgments: " + " ".join(sf.names)]
    lines.extend(_render_rule("rule:", r, sf.names) for r in sf.system.rules)
    lines.extend(_render_rule("corule:", r, sf.names) for r in sf.system.corules)
    if sf.spec is not None:
        lines.append(" ".join(["spec:"] + [sf.names[j] for j in sf.spec]).rstrip())
    return "\n".join(lines) + "\n"


def parse_colist(text: str) -> Colist:
    pieces = text.replace("|", " | ").split()
    separators = pieces.count("|")
    if separators > 1:
        raise ParseError("more than one loop separator '|'", code="extra-separator")

    def nat(token: str) -> int:
        if not token.isdigit():
            raise ParseError(f"not a natural number: {token!r}", code="bad-token")
        return int(token)

    if separators == 1:
        k = pieces.index("|")
        loop = tuple(nat(t) for t in pieces[k + 1:])
        if not loop:
            raise ParseError("loop declared empty", code="empty-loop")
        return Lasso(tuple(nat(t) for t in pieces[:k]), loop)
    return Finite(tuple(nat(t) for t in pieces))


def format_colist(xs: Colist) -> str:
    if isinstance(xs, Finite):
        return " ".join(map(str, xs.elements))
    prefix = " ".join(map(str, xs.prefix))
    loop = " ".join(map(str, xs.loop))
    return f"{prefix} | {loop}" if prefix else f"| {loop}"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="corules",
                     description="Interpret finite inference systems with corules "
                                 "and check proof-principle obligations.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, blurb in (("ind", "inductive"), ("coind", "coinductive"),
                        ("gen", "corule-generated")):
        p = sub.add_parser(name, help=f"print the {blurb} interpretation")
        p.add_argument("file", help="system file (.inf)")
        p.set_defaults(handler=_cmd_interpret)
    p = sub.add_parser("check", help="run the bounded coinduction check "
                                     "against the file's spec: line")
    p.add_argument("file", help="system file (.inf)")
    p.set_defaults(handler=_cmd_check)
    p = sub.add_parser("prove", help="extract a derivation of a judgment")
    p.add_argument("file", help="system file (.inf)")
    p.add_argument("judgment", help="judgment name")
    p.add_argument("--rational", action="store_true",
                   help="extract a rational (possibly cyclic) proof instead of "
                        "a finite one")
    p.set_defaults(handler=_cmd_prove)
    p = sub.add_parser("pred", help="evaluate a colist predicate three ways "
                                    "(engine, direct, oracle)")
    p.add_argument("kind", choices=[k.value for k in Kind])
    p.add_argument("--list", required=True, dest="colist", metavar="LITERAL",
                   help="colist literal, e.g. '1 2 | 3'")
    p.add_argument("--p", dest="pred", metavar="NAME",
                   help="element predicate: positive, even, odd, eq:<n>, gt:<n>")
    p.add_argument("--x", type=int, metavar="N",
                   help="element (member) or candidate maximum (max)")
    p.add_argument("--candidates", metavar="N,...",
                   help="candidate values for max (default: elements of the "
                        "colist plus --x)")
    p.set_defaults(handler=_cmd_pred)
    return parser


def _load(path: str) -> SystemFile:
    return parse_system(Path(path).read_text(encoding="utf-8"))


def _cmd_interpret(ns) -> int:
    sf = _load(ns.file)
    fn = {"ind": ind_interpretation, "coind": coind_interpretation,
          "gen": gen_interpretation}[ns.command]
    for j in fn(sf.system):
        print(sf.names[j])
    return 0


def _cmd_check(ns) -> int:
    sf = _load(ns.file)
    if sf.spec is None:
        raise ParseError("file has no spec: line to check", code="missing-spec")
    report = bounded_coinduction_check(sf.system, sf.spec)
    for tag, title in ((BOUNDEDNESS, "boundedness"), (CONSISTENCY, "consistency")):
        failures = report.failures_tagged(tag)
        print(f"{title}: {'FAIL' if failures else 'PASS'}")
        for f in failures:
            print(f"  counterexample: {sf.names[f.judgment]}")
    print(f"spec-in-gen: {'PASS' if report.ok else 'SKIPPED'}")
    return 0 if report.ok else 1


def _cmd_prove(ns) -> int:
    sf = _load(ns.file)
    j = sf.id_of(ns.judgment)
    if ns.rational:
        rational = extract_rational_proof(sf.system, j)
        if rational is None:
            print(f"{ns.judgment}: underivable")
            return 1
        print(format_rational(rational, sf.system))
    else:
        finite = extract_finite_proof(sf.system, j, allow_corules=True)
        if finite is None:
            print(f"{ns.judgment}: underivable")
            return 1
        print(format_finite(finite, sf.system))
    return 0


def _need(ns, attr: str, flag: str, kind: str):
    value = getattr(ns, attr)
    if value is None:
        raise _UsageError(f"pred {kind} requires {flag}")
    return value


def _cmd_pred(ns) -> int:
    kind = Kind(ns.kind)
    xs = parse_colist(ns.colist)
    predicate = None
    x = None
    if kind in (Kind.ALWAYS, Kind.EVENTUALLY, Kind.INFINITELY_OFTEN):
        predicate = predicate_by_name(_need(ns, "pred", "--p", kind.value))
    elif ns.pred is not None:
        raise _UsageError(f"pred {kind.value} does not take --p")
    if kind in (Kind.MEMBER_OF, Kind.MAX_ELEM):
        x = _need(ns, "x", "--x", kind.value)
        if x < 0:
            raise _UsageError("--x must be a natural number")
    elif ns.x is not None:
        raise _UsageError(f"pred {kind.value} does not take --x")
    if kind is not Kind.MAX_ELEM and ns.candidates is not None:
        raise _UsageError(f"pred {kind.value} does not take --candidates")

    if kind is Kind.MEMBER_OF:
        system, scheme = gen_member_system(x, xs)
        engine = scheme.encode(0, x) in ind_interpretation(system)
    elif kind is Kind.ALL_POS:
        system, scheme = gen_allpos_system(xs)
        engine = scheme.encode(0) in coind_interpretation(system)
    elif kind is Kind.ALWAYS:
        system, scheme = gen_always_system(predicate, xs)
        engine = scheme.encode(0) in coind_interpretation(system)
    elif kind is Kind.EVENTUALLY:
        system, scheme = gen_eventually_system(predicate, xs)
        engine = scheme.encode(0) in ind_interpretation(system)
    elif kind is Kind.INFINITELY_OFTEN:
        system, scheme = gen_infoften_system(predicate, xs)
        engine = scheme.encode(0) in gen_interpretation(system)
    else:
        if ns.candidates is not None:
            candidates = parse_candidates(ns.candidates)
        else:
            elements = xs.elements if isinstance(xs, Finite) else xs.prefix + xs.loop
            candidates = sorted(set(elements) | {x})
        system, scheme = gen_maxelem_system(xs, candidates)
        engine = scheme.encode(0, x) in gen_interpretation(system)

    if kind is Kind.MAX_ELEM:
        direct = decide_direct(kind, xs) == x
    else:
        direct = decide_direct(kind, xs, x=x, predicate=predicate)
    oracle = spec_oracle(kind, xs, x=x, predicate=predicate)

    agree = engine == direct == oracle
    print(f"kind: {kind.value}")
    print(f"colist: {format_colist(xs)}")
    print(f"engine: {'true' if engine else 'false'}")
    print(f"direct: {'true' if direct else 'false'}")
    print(f"oracle: {'true' if oracle else 'false'}")
    print(f"verdict: {'AGREE' if agree else 'DISAGREE'}")
    if not agree:
        return 2
    return 0 if engine else 1


def parse_candidates(text: str) -> list[int]:
    out = []
    for piece in text.split(","):
        piece = piece.strip()
        if not piece.isdigit():
            raise ParseError(f"not a natural number: {piece!r}", code="bad-token")
        out.append(int(piece))
    return out


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = list(argv) if argv is not None else sys.argv[1:]
    try:
        ns = _build_parser().parse_args(args)
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 64
    except SystemExit as e:  # --help
        return e.code if isinstance(e.code, int) else 0
    try:
        return ns.handler(ns)
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 64
    except (ParseError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 64
    except (InternalError, StructuralError) as e:
        print(f"internal error: {e}", file=sys.stderr)
        return 70


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
