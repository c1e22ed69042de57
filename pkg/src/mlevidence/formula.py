"""Atoms, propositional formulas, worlds and observation vectors.

World ``w`` is the integer in ``[0, 2**n)`` whose bit ``i`` is set exactly
when atom ``i`` is true.  Observation vectors are 0/1 arrays indexed by world.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import EvidenceError, FormulaSyntaxError

DEFAULT_MAX_ATOMS = 20

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
KEYWORDS = frozenset({"TRUE", "FALSE", "true", "false"})


@dataclass(frozen=True)
class Atom:
    id: int
    name: str
    description: str | None = None


class AtomRegistry:
    """Ordered set of atoms; ids are contiguous from 0 in declaration order."""

    def __init__(self, max_atoms: int = DEFAULT_MAX_ATOMS):
        self.max_atoms = max_atoms
        self._atoms: list[Atom] = []
        self._by_name: dict[str, Atom] = {}
        self._frozen = False

    def register(self, name: str, description: str | None = None) -> Atom:
        if self._frozen:
            raise EvidenceError(f"cannot register atom {name!r}: registry is frozen")
        if not _IDENT.match(name) or name in KEYWORDS:
            raise EvidenceError(f"invalid atom name {name!r}")
        if name in self._by_name:
            raise EvidenceError(f"atom {name!r} is already registered")
        if len(self._atoms) >= self.max_atoms:
            raise EvidenceError(
                f"atom limit of {self.max_atoms} reached (2^{self.max_atoms} worlds)"
            )
        atom = Atom(len(self._atoms), name, description)
        self._atoms.append(atom)
        self._by_name[name] = atom
        return atom

    def freeze(self) -> None:
        self._frozen = True

    @property
    def frozen(self) -> bool:
        return self._frozen

    def __getitem__(self, name: str) -> Atom:
        try:
            return self._by_name[name]
        except KeyError:
            raise EvidenceError(f"unregistered atom {name!r}") from None

    def __contains__(self, name: object) -> bool:
        return name in self._by_name

    def __len__(self) -> int:
        return len(self._atoms)

    def __iter__(self) -> Iterator[Atom]:
        return iter(self._atoms)

    @property
    def names(self) -> list[str]:
        return [a.name for a in self._atoms]

    @property
    def n_worlds(self) -> int:
        return 1 << len(self._atoms)


# -- formula tree -------------------------------------------------------------


class Formula:
    """Base class of the formula tree.  Nodes are immutable and hashable."""

    __slots__ = ()

    def __invert__(self) -> Formula:
        return Not(self)

    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __rshift__(self, other: Formula) -> Formula:
        return Implies(self, other)

    def atoms(self) -> set[str]:
        out: set[str] = set()
        stack: list[Formula] = [self]
        while stack:
            f = stack.pop()
            if isinstance(f, Var):
                out.add(f.name)
            elif isinstance(f, Not):
                stack.append(f.operand)
            elif isinstance(f, _Binary):
                stack.extend((f.left, f.right))
        return out

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True, eq=True)
class Const(Formula):
    value: bool


@dataclass(frozen=True, eq=True)
class Var(Formula):
    name: str


@dataclass(frozen=True, eq=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True, eq=True)
class _Binary(Formula):
    left: Formula
    right: Formula


class And(_Binary):
    pass


class Or(_Binary):
    pass


class Implies(_Binary):
    pass


class Iff(_Binary):
    pass


TRUE = Const(True)
FALSE = Const(False)


def implies(a: Formula, b: Formula) -> Formula:
    return Implies(a, b)


def iff(a: Formula, b: Formula) -> Formula:
    return Iff(a, b)


# -- text grammar --------------------------------------------------------------

# Precedence, tightest first: ! & | -> <->.  "->" is right-associative, the
# other binary operators associate to the left.
_SYMBOL = {And: "&", Or: "|", Implies: "->", Iff: "<->"}
_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}

_TOKEN = re.compile(
    r"\s*(?:(?P<op><->|->|[!&|()])|(?P<ident>[A-Za-z_][A-Za-z0-9_]*))"
)


@dataclass
class Token:
    kind: str  # "op", "ident", "num", "str", "end"
    text: str
    col: int  # 1-based column in the source line
    value: object = field(default=None, compare=False)


def tokenize_formula(text: str, col_offset: int = 0) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise FormulaSyntaxError(
                f"unexpected character {text[pos]!r}", column=pos + 1 + col_offset
            )
        kind = "op" if m.group("op") else "ident"
        tok = m.group(kind)
        tokens.append(Token(kind, tok, m.start(kind) + 1 + col_offset))
        pos = m.end()
    tokens.append(Token("end", "", len(text) + 1 + col_offset))
    return tokens


class FormulaParser:
    """Recursive-descent parser over a token list.

    With ``stop_at_bar`` a ``|`` at parenthesis depth 0 ends the formula
    instead of building a disjunction; the evidence language uses it to
    separate an event from its condition.
    """

    def __init__(self, tokens: list[Token], pos: int = 0):
        self.tokens = tokens
        self.pos = pos

    @property
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def _take(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def _is(self, text: str) -> bool:
        tok = self.peek
        return tok.kind == "op" and tok.text == text

    def parse(self, stop_at_bar: bool = False) -> Formula:
        return self._iff(stop_at_bar)

    def _iff(self, bar: bool) -> Formula:
        left = self._implies(bar)
        while self._is("<->"):
            self._take()
            left = Iff(left, self._implies(bar))
        return left

    def _implies(self, bar: bool) -> Formula:
        left = self._or(bar)
        if self._is("->"):
            self._take()
            return Implies(left, self._implies(bar))
        return left

    def _or(self, bar: bool) -> Formula:
        left = self._and()
        while not bar and self._is("|"):
            self._take()
            left = Or(left, self._and())
        return left

    def _and(self) -> Formula:
        left = self._unary()
        while self._is("&"):
            self._take()
            left = And(left, self._unary())
        return left

    def _unary(self) -> Formula:
        tok = self.peek
        if tok.kind == "op" and tok.text == "!":
            self._take()
            return Not(self._unary())
        if tok.kind == "op" and tok.text == "(":
            self._take()
            inner = self._iff(False)
            if not self._is(")"):
                raise FormulaSyntaxError("expected ')'", column=self.peek.col)
            self._take()
            return inner
        if tok.kind == "ident":
            self._take()
            if tok.text in ("TRUE", "true"):
                return TRUE
            if tok.text in ("FALSE", "false"):
                return FALSE
            return Var(tok.text)
        what = "end of input" if tok.kind == "end" else repr(tok.text)
        raise FormulaSyntaxError(f"expected a formula, found {what}", column=tok.col)


def parse_formula(text: str) -> Formula:
    tokens = tokenize_formula(text)
    parser = FormulaParser(tokens)
    f = parser.parse()
    if parser.peek.kind != "end":
        raise FormulaSyntaxError(
            f"unexpected {parser.peek.text!r}", column=parser.peek.col
        )
    return f


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), 5)


def format_formula(f: Formula) -> str:
    """Render with the minimal parentheses that parse back to the same tree."""
    if isinstance(f, Const):
        return "TRUE" if f.value else "FALSE"
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Not):
        inner = format_formula(f.operand)
        return "!" + (f"({inner})" if isinstance(f.operand, _Binary) else inner)
    p = _prec(f)
    left = format_formula(f.left)
    right = format_formula(f.right)
    right_assoc = isinstance(f, Implies)
    if _prec(f.left) < p or (right_assoc and _prec(f.left) == p):
        left = f"({left})"
    if _prec(f.right) < p or (not right_assoc and _prec(f.right) == p):
        right = f"({right})"
    return f"{left} {_SYMBOL[type(f)]} {right}"


def format_event(f: Formula) -> str:
    """Render ``f`` so that no ``|`` appears outside parentheses."""
    text = format_formula(f)
    return f"({text})" if isinstance(f, (Or, Implies, Iff)) else text


# -- semantics -----------------------------------------------------------------


def _check_atoms(f: Formula, registry: AtomRegistry) -> None:
    for name in sorted(f.atoms()):
        if name not in registry:
            raise EvidenceError(f"unregistered atom {name!r} in formula {f}")


def eval_formula(f: Formula, world: int, registry: AtomRegistry) -> bool:
    """Truth value of ``f`` in the world with index ``world``."""
    _check_atoms(f, registry)
    return _eval(f, world, registry)


def _eval(f: Formula, world: int, registry: AtomRegistry) -> bool:
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Var):
        return bool((world >> registry[f.name].id) & 1)
    if isinstance(f, Not):
        return not _eval(f.operand, world, registry)
    a = _eval(f.left, world, registry)
    b = _eval(f.right, world, registry)
    if isinstance(f, And):
        return a and b
    if isinstance(f, Or):
        return a or b
    if isinstance(f, Implies):
        return (not a) or b
    return a == b


def world_assignment(world: int, registry: AtomRegistry) -> dict[str, bool]:
    return {a.name: bool((world >> a.id) & 1) for a in registry}


def observation_vector(
    f: Formula, registry: AtomRegistry, n_atoms: int | None = None
) -> np.ndarray:
    """0/1 indicator (dtype uint8, read-only) of the worlds where ``f`` holds."""
    _check_atoms(f, registry)
    n = len(registry) if n_atoms is None else n_atoms
    if n < len(f.atoms()) or any(registry[a].id >= n for a in f.atoms()):
        raise EvidenceError(f"formula {f} references atoms beyond the first {n}")
    worlds = np.arange(1 << n, dtype=np.int64)
    cache: dict[str, np.ndarray] = {}

    def rec(g: Formula) -> np.ndarray:
        if isinstance(g, Const):
            return np.full(worlds.shape, g.value, dtype=bool)
        if isinstance(g, Var):
            if g.name not in cache:
                cache[g.name] = ((worlds >> registry[g.name].id) & 1).astype(bool)
            return cache[g.name]
        if isinstance(g, Not):
            return ~rec(g.operand)
        a, b = rec(g.left), rec(g.right)
        if isinstance(g, And):
            return a & b
        if isinstance(g, Or):
            return a | b
        if isinstance(g, Implies):
            return ~a | b
        return a == b

    ov = rec(f).astype(np.uint8)
    ov.setflags(write=False)
    return ov


def prob_of(ov: np.ndarray, jdv: np.ndarray) -> float:
    ov = np.asarray(ov)
    jdv = np.asarray(jdv, dtype=float)
    if ov.shape != jdv.shape:
        raise ValueError(f"dimension mismatch: {ov.shape} vs {jdv.shape}")
    return float(ov.astype(float) @ jdv)


def truth_table_order(n_atoms: int) -> np.ndarray:
    """World indices in conventional truth-table order.

    Row 0 has every atom true; the first-declared atom varies slowest.  For
    atoms ``A, B`` this gives the worlds ``A&B, A&!B, !A&B, !A&!B``.
    """
    rows = np.arange(1 << n_atoms)
    idx = np.zeros_like(rows)
    for k in range(n_atoms):
        true_k = ((rows >> (n_atoms - 1 - k)) & 1) == 0
        idx |= true_k.astype(rows.dtype) << k
    return idx


def world_label(world: int, registry: AtomRegistry) -> str:
    return " & ".join(
        a.name if (world >> a.id) & 1 else "!" + a.name for a in registry
    ) or "TRUE"
