"""Line-oriented evidence file language.

One statement per line; ``#`` starts a comment::

    prop A "Harry lit his pipe"
    obs A : 9 / 30
    obs B | A : 5 / 6
    axiom B -> A
    bound 0.6 <= P(heads & joe) <= 0.8
    query P(B | A)

In ``obs`` and ``query`` the first ``|`` outside parentheses separates the
event from its condition, so a disjunctive event needs parentheses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import FormulaSyntaxError
from .evidence import Axiom, Experiment, IntervalConstraint, KnowledgeBase
from .formula import (
    KEYWORDS,
    TRUE,
    Formula,
    FormulaParser,
    Token,
    format_event,
    format_formula,
)

_LINE_TOKEN = re.compile(
    r"""
    (?P<str>"(?:[^"\\]|\\.)*")
  | (?P<op><->|<=|->|[!&|():/])
  | (?P<num>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Prop:
    name: str
    description: str | None = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Obs:
    event: Formula
    successes: int
    trials: int
    condition: Formula | None = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class AxiomStmt:
    formula: Formula
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Bound:
    formula: Formula
    lo: float
    hi: float
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Query:
    event: Formula
    condition: Formula | None = None
    line: int = field(default=0, compare=False)

    @property
    def text(self) -> str:
        if self.condition is None:
            return f"P({format_event(self.event)})"
        return f"P({format_event(self.event)} | {format_formula(self.condition)})"


Statement = Prop | Obs | AxiomStmt | Bound | Query


@dataclass(frozen=True)
class EvidenceFile:
    statements: tuple[Statement, ...]

    @property
    def props(self) -> list[Prop]:
        return [s for s in self.statements if isinstance(s, Prop)]

    @property
    def queries(self) -> list[Query]:
        return [s for s in self.statements if isinstance(s, Query)]


def _tokenize(text: str, lineno: int) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch == "#":
            break
        m = _LINE_TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {ch!r}", lineno, pos + 1)
        kind = m.lastgroup
        tok = Token(kind, m.group(kind), pos + 1)
        if kind == "str":
            tok.value = re.sub(r"\\(.)", r"\1", tok.text[1:-1])
        elif kind == "num":
            tok.value = float(tok.text)
        tokens.append(tok)
        pos = m.end()
    tokens.append(Token("end", "", len(text.rstrip()) + 1))
    return tokens


class _LineParser:
    def __init__(self, tokens: list[Token], lineno: int, declared: set[str]):
        self.toks = tokens
        self.pos = 0
        self.lineno = lineno
        self.declared = declared

    @property
    def peek(self) -> Token:
        return self.toks[self.pos]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.peek
        return FormulaSyntaxError(msg, self.lineno, tok.col)

    def expect(self, kind: str, text: str | None = None) -> Token:
        tok = self.peek
        if tok.kind != kind or (text is not None and tok.text != text):
            want = repr(text) if text else kind
            found = "end of line" if tok.kind == "end" else repr(tok.text)
            raise self.error(f"expected {want}, found {found}")
        self.pos += 1
        return tok

    def accept(self, text: str) -> bool:
        tok = self.peek
        if tok.kind == "op" and tok.text == text:
            self.pos += 1
            return True
        return False

    def formula(self, stop_at_bar: bool = False) -> Formula:
        start = self.pos
        parser = FormulaParser(self.toks, self.pos)
        try:
            f = parser.parse(stop_at_bar)
        except FormulaSyntaxError as exc:
            raise FormulaSyntaxError(exc.message, self.lineno, exc.column) from None
        for tok in self.toks[start : parser.pos]:
            if tok.kind == "ident" and tok.text not in KEYWORDS:
                if tok.text not in self.declared:
                    raise self.error(f"undeclared atom {tok.text!r}", tok)
        self.pos = parser.pos
        return f

    def integer(self) -> int:
        tok = self.expect("num")
        if not tok.text.isdigit():
            raise self.error(f"expected a whole number, found {tok.text!r}", tok)
        return int(tok.text)

    def probability(self) -> float:
        tok = self.expect("num")
        if not 0.0 <= tok.value <= 1.0:
            raise self.error(f"probability {tok.text} is outside [0, 1]", tok)
        return tok.value

    def end(self):
        if self.peek.kind != "end":
            raise self.error(f"unexpected {self.peek.text!r}")

    def statement(self) -> Statement:
        kw = self.expect("ident")
        n = self.lineno
        if kw.text == "prop":
            name = self.expect("ident")
            if name.text in KEYWORDS:
                raise self.error(f"{name.text!r} is reserved", name)
            if name.text in self.declared:
                raise self.error(f"atom {name.text!r} already declared", name)
            desc = None
            if self.peek.kind == "str":
                desc = self.expect("str").value
            self.end()
            self.declared.add(name.text)
            return Prop(name.text, desc, line=n)
        if kw.text == "obs":
            event = self.formula(stop_at_bar=True)
            cond = self.formula() if self.accept("|") else None
            self.expect("op", ":")
            num_tok = self.peek
            succ = self.integer()
            self.expect("op", "/")
            trials = self.integer()
            self.end()
            if trials < 1:
                raise self.error("number of trials must be positive", num_tok)
            if succ > trials:
                raise self.error(
                    f"successes ({succ}) exceed trials ({trials})", num_tok
                )
            return Obs(event, succ, trials, cond, line=n)
        if kw.text == "axiom":
            f = self.formula()
            self.end()
            return AxiomStmt(f, line=n)
        if kw.text == "bound":
            lo_tok = self.peek
            lo = self.probability()
            self.expect("op", "<=")
            self._open_p()
            f = self.formula()
            self.expect("op", ")")
            self.expect("op", "<=")
            hi = self.probability()
            self.end()
            if lo > hi:
                raise self.error(f"empty bound: {lo} > {hi}", lo_tok)
            return Bound(f, lo, hi, line=n)
        if kw.text == "query":
            self._open_p()
            event = self.formula(stop_at_bar=True)
            cond = self.formula() if self.accept("|") else None
            self.expect("op", ")")
            self.end()
            return Query(event, cond, line=n)
        raise self.error(f"unknown statement {kw.text!r}", kw)

    def _open_p(self):
        tok = self.expect("ident")
        if tok.text != "P":
            raise self.error(f"expected 'P(', found {tok.text!r}", tok)
        self.expect("op", "(")


def parse_evidence(text: str) -> EvidenceFile:
    """Parse evidence text.  Errors carry 1-based line and column."""
    declared: set[str] = set()
    statements = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokenize(raw, lineno)
        if tokens[0].kind == "end":
            continue
        statements.append(_LineParser(tokens, lineno, declared).statement())
    return EvidenceFile(tuple(statements))


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def format_statement(s: Statement) -> str:
    if isinstance(s, Prop):
        return f"prop {s.name}" + (f" {_quote(s.description)}" if s.description is not None else "")
    if isinstance(s, Obs):
        if s.condition is None:
            return f"obs {format_event(s.event)} : {s.successes} / {s.trials}"
        return (
            f"obs {format_event(s.event)} | {format_formula(s.condition)}"
            f" : {s.successes} / {s.trials}"
        )
    if isinstance(s, AxiomStmt):
        return f"axiom {format_formula(s.formula)}"
    if isinstance(s, Bound):
        return f"bound {s.lo!r} <= P({format_formula(s.formula)}) <= {s.hi!r}"
    return f"query {s.text}"


def format_evidence(ef: EvidenceFile) -> str:
    return "".join(format_statement(s) + "\n" for s in ef.statements)


def build_knowledge_base(ef: EvidenceFile) -> KnowledgeBase:
    kb = KnowledgeBase()
    for s in ef.statements:
        if isinstance(s, Prop):
            kb.register_atom(s.name, s.description)
        elif isinstance(s, Obs):
            cond = TRUE if s.condition is None else s.condition
            kb.add_experiment(Experiment(s.event, s.successes, s.trials, cond), source=s.line)
        elif isinstance(s, AxiomStmt):
            kb.add_axiom(Axiom(s.formula), source=s.line)
        elif isinstance(s, Bound):
            kb.add_interval(IntervalConstraint(s.formula, s.lo, s.hi), source=s.line)
    return kb
