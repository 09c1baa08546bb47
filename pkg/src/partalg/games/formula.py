"""First-order formulas over J, K, meet, comp, 0 and inf, with a finite model checker."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, fields
from functools import cached_property
from typing import Iterable, Mapping

from ..algebra import AlgebraError, PartialAlgebra, TotalAlgebra


class FormulaError(AlgebraError):
    pass


class Node:
    """Structural equality and a cached hash, so shared subformulas stay cheap."""

    @cached_property
    def _key(self) -> tuple:
        return (type(self),) + tuple(getattr(self, f.name) for f in fields(self))

    @cached_property
    def _hash(self) -> int:
        return hash(self._key)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if type(self) is not type(other) or self._hash != other._hash:
            return False
        return self._key == other._key

    def __str__(self) -> str:
        return show(self)


# -- terms ----------------------------------------------------------------------


class Term(Node):
    pass


@dataclass(frozen=True, eq=False)
class Var(Term):
    name: str


@dataclass(frozen=True, eq=False)
class Const(Term):
    name: str  # "0" or "inf"


@dataclass(frozen=True, eq=False)
class App(Term):
    op: str  # join, minus, meet, comp
    left: Term
    right: Term


OP_SYMBOL = {"join": "+", "minus": "-", "meet": ".", "comp": ";"}
SYMBOL_OP = {v: k for k, v in OP_SYMBOL.items()}
REL_OP = {"J": "join", "K": "minus"}

# -- formulas -------------------------------------------------------------------


class Formula(Node):
    @cached_property
    def free(self) -> frozenset[str]:
        return free_vars(self)


@dataclass(frozen=True, eq=False)
class Top(Formula):
    pass


@dataclass(frozen=True, eq=False)
class Bottom(Formula):
    pass


@dataclass(frozen=True, eq=False)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True, eq=False)
class Rel(Formula):
    symbol: str  # "J" or "K"
    args: tuple[Term, Term, Term]


@dataclass(frozen=True, eq=False)
class Not(Formula):
    body: Formula


@dataclass(frozen=True, eq=False)
class And(Formula):
    parts: tuple[Formula, ...]


@dataclass(frozen=True, eq=False)
class Or(Formula):
    parts: tuple[Formula, ...]


@dataclass(frozen=True, eq=False)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Forall(Formula):
    vars: tuple[str, ...]
    body: Formula


@dataclass(frozen=True, eq=False)
class Exists(Formula):
    vars: tuple[str, ...]
    body: Formula


TOP = Top()
BOTTOM = Bottom()


def conj(parts: Iterable[Formula]) -> Formula:
    parts = tuple(parts)
    if not parts:
        return TOP
    return parts[0] if len(parts) == 1 else And(parts)


def disj(parts: Iterable[Formula]) -> Formula:
    parts = tuple(parts)
    if not parts:
        return BOTTOM
    return parts[0] if len(parts) == 1 else Or(parts)


def neq(s: Term, t: Term) -> Formula:
    return Not(Eq(s, t))


def term_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, App):
        return term_vars(t.left) | term_vars(t.right)
    return frozenset()


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, (Top, Bottom)):
        return frozenset()
    if isinstance(f, Eq):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, Rel):
        return frozenset().union(*(term_vars(t) for t in f.args))
    if isinstance(f, Not):
        return f.body.free
    if isinstance(f, (And, Or)):
        return frozenset().union(*(p.free for p in f.parts))
    if isinstance(f, (Implies, Iff)):
        return f.left.free | f.right.free
    if isinstance(f, (Forall, Exists)):
        return f.body.free - set(f.vars)
    raise FormulaError(f"not a formula: {f!r}")


def is_quantifier_free(f: Formula) -> bool:
    if isinstance(f, (Forall, Exists)):
        return False
    if isinstance(f, Not):
        return is_quantifier_free(f.body)
    if isinstance(f, (And, Or)):
        return all(is_quantifier_free(p) for p in f.parts)
    if isinstance(f, (Implies, Iff)):
        return is_quantifier_free(f.left) and is_quantifier_free(f.right)
    return True


def subformula_count(f: Formula) -> int:
    """Number of distinct subformula nodes (shared nodes counted once)."""
    seen = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if id(g) in seen:
            continue
        seen.add(id(g))
        if isinstance(g, Not):
            stack.append(g.body)
        elif isinstance(g, (And, Or)):
            stack.extend(g.parts)
        elif isinstance(g, (Implies, Iff)):
            stack.extend((g.left, g.right))
        elif isinstance(g, (Forall, Exists)):
            stack.append(g.body)
    return len(seen)


# -- printing -------------------------------------------------------------------


def show_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return t.name
    return f"({show_term(t.left)} {OP_SYMBOL[t.op]} {show_term(t.right)})"


def show(f) -> str:
    if isinstance(f, Term):
        return show_term(f)
    if isinstance(f, Top):
        return "T"
    if isinstance(f, Bottom):
        return "F"
    if isinstance(f, Eq):
        return f"{show_term(f.left)} = {show_term(f.right)}"
    if isinstance(f, Rel):
        return f"{f.symbol}({', '.join(show_term(t) for t in f.args)})"
    if isinstance(f, Not):
        if isinstance(f.body, Eq):
            return f"{show_term(f.body.left)} != {show_term(f.body.right)}"
        return f"~{_wrap(f.body)}"
    if isinstance(f, And):
        return " & ".join(_wrap(p) for p in f.parts)
    if isinstance(f, Or):
        return " | ".join(_wrap(p) for p in f.parts)
    if isinstance(f, Implies):
        return f"{_wrap(f.left)} -> {_wrap(f.right)}"
    if isinstance(f, Iff):
        return f"{_wrap(f.left)} <-> {_wrap(f.right)}"
    if isinstance(f, Forall):
        return f"forall {','.join(f.vars)}. {_wrap(f.body)}"
    if isinstance(f, Exists):
        return f"exists {','.join(f.vars)}. {_wrap(f.body)}"
    raise FormulaError(f"cannot print {f!r}")


def _wrap(f: Formula) -> str:
    if isinstance(f, (Top, Bottom, Eq, Rel, Not)):
        return show(f)
    return f"({show(f)})"


# -- parsing --------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(<->|->|!=|forall\b|exists\b|inf\b|[A-Za-z_][A-Za-z0-9_]*|0|[()=,.&|~+\-;])")


def _tokenize(text: str) -> list[tuple[str, int]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaError(f"unexpected character {text[pos:].strip()[:1]!r} at position {pos}")
        out.append((m.group(1), m.start(1)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def pos(self) -> int:
        return self.toks[self.i][1] if self.i < len(self.toks) else -1

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            where = "end of input" if tok is None else f"{tok!r} at position {self.pos()}"
            raise FormulaError(f"expected {repr(expected) if expected else 'a token'}, found {where}")
        self.i += 1
        return tok

    def formula(self) -> Formula:
        left = self.implication()
        while self.peek() == "<->":
            self.take()
            left = Iff(left, self.implication())
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        parts = [self.conjunction()]
        while self.peek() == "|":
            self.take()
            parts.append(self.conjunction())
        return disj(parts)

    def conjunction(self) -> Formula:
        parts = [self.unary()]
        while self.peek() == "&":
            self.take()
            parts.append(self.unary())
        return conj(parts)

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "~":
            self.take()
            return Not(self.unary())
        if tok in ("forall", "exists"):
            self.take()
            names = [self.variable()]
            while self.peek() == ",":
                self.take()
                names.append(self.variable())
            self.take(".")
            body = self.unary()
            return (Forall if tok == "forall" else Exists)(tuple(names), body)
        if tok == "T":
            self.take()
            return TOP
        if tok == "F":
            self.take()
            return BOTTOM
        if tok in ("J", "K") and self.i + 1 < len(self.toks) and self.toks[self.i + 1][0] == "(":
            self.take()
            self.take("(")
            args = [self.term()]
            for _ in range(2):
                self.take(",")
                args.append(self.term())
            self.take(")")
            return Rel(tok, tuple(args))
        if tok == "(":
            save = self.i
            try:
                self.take("(")
                inner = self.formula()
                self.take(")")
                if self.peek() not in ("=", "!=", "+", "-", ".", ";"):
                    return inner
            except FormulaError:
                pass
            self.i = save
        return self.atom()

    def atom(self) -> Formula:
        left = self.term()
        tok = self.peek()
        if tok == "=":
            self.take()
            return Eq(left, self.term())
        if tok == "!=":
            self.take()
            return neq(left, self.term())
        found = "end of input" if tok is None else f"{tok!r} at position {self.pos()}"
        raise FormulaError(f"expected '=' or '!=', found {found}")

    def variable(self) -> str:
        tok = self.peek()
        if tok is None or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok) or tok in ("T", "F", "inf"):
            raise FormulaError(f"expected a variable at position {self.pos()}")
        return self.take()

    def term(self) -> Term:
        left = self.primary()
        while self.peek() in SYMBOL_OP:
            op = SYMBOL_OP[self.take()]
            left = App(op, left, self.primary())
        return left

    def primary(self) -> Term:
        tok = self.peek()
        if tok == "(":
            self.take()
            t = self.term()
            self.take(")")
            return t
        if tok == "0":
            self.take()
            return Const("0")
        if tok == "inf":
            self.take()
            return Const("inf")
        return Var(self.variable())


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    if p.peek() is not None:
        raise FormulaError(f"unexpected {p.peek()!r} at position {p.pos()}")
    return f


def parse_term_expr(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.peek() is not None:
        raise FormulaError(f"unexpected {p.peek()!r} at position {p.pos()}")
    return t


# -- structures -----------------------------------------------------------------


class Structure:
    """Integer-coded view of an algebra for model checking."""

    names: tuple[str, ...]
    size: int

    def rel(self, symbol: str, a: int, b: int, c: int) -> bool:
        raise NotImplementedError

    def app(self, op: str, a: int, b: int) -> int:
        raise NotImplementedError

    def const(self, name: str) -> int:
        raise NotImplementedError


class RelationalStructure(Structure):
    """A partial algebra seen through its graph relations J and K."""

    def __init__(self, alg: PartialAlgebra):
        self.alg = alg
        self.names = alg.carrier
        self.size = len(alg.carrier)
        ix = alg.indexed
        self.tables = ix.tables
        self.zero = ix.zero

    def rel(self, symbol, a, b, c):
        op = REL_OP[symbol]
        t = self.tables.get(op)
        if t is None:
            raise FormulaError(f"{symbol} needs {op} in the signature")
        return t[a][b] == c

    def app(self, op, a, b):
        if op not in ("meet", "comp"):
            raise FormulaError(f"{op} is partial; use the relation {'J' if op == 'join' else 'K'}")
        t = self.tables.get(op)
        if t is None:
            raise FormulaError(f"{op} is not in the signature")
        return t[a][b]

    def const(self, name):
        if name == "0" and self.zero >= 0:
            return self.zero
        raise FormulaError(f"constant {name} not available")


class TotalStructure(Structure):
    """A totalised algebra: every operation is a total function and inf is a constant."""

    def __init__(self, talg: TotalAlgebra):
        self.names = talg.carrier
        self.size = len(talg.carrier)
        idx = {x: i for i, x in enumerate(talg.carrier)}
        self.inf = idx[talg.inf]
        self.zero = idx.get(talg.zero, -1) if talg.zero is not None else -1
        self.tables = {}
        for name, _ in talg.tables:
            tab = talg.table(name)
            self.tables[name] = [[idx[tab[(a, b)]] for b in talg.carrier] for a in talg.carrier]

    def app(self, op, a, b):
        t = self.tables.get(op)
        if t is None:
            raise FormulaError(f"{op} is not in the signature")
        return t[a][b]

    def rel(self, symbol, a, b, c):
        return self.app(REL_OP[symbol], a, b) == c

    def const(self, name):
        if name == "inf":
            return self.inf
        if name == "0" and self.zero >= 0:
            return self.zero
        raise FormulaError(f"constant {name} not available")


def as_structure(obj) -> Structure:
    if isinstance(obj, Structure):
        return obj
    if isinstance(obj, PartialAlgebra):
        return RelationalStructure(obj)
    if isinstance(obj, TotalAlgebra):
        return TotalStructure(obj)
    raise FormulaError(f"cannot model-check over {type(obj).__name__}")


class Evaluator:
    """Tarskian evaluation by compiling formulas into closures.

    Variables live in slots of a shared list; each quantifier node keeps a
    memo table keyed by the values of its free variables.  Shared
    subformulas compile once, so hash-consed formulas stay cheap.
    """

    def __init__(self, structure: Structure):
        self.s = structure
        self.slots: dict[str, int] = {}
        self.compiled: dict[Node, object] = {}

    def slot(self, name: str) -> int:
        if name not in self.slots:
            self.slots[name] = len(self.slots)
        return self.slots[name]

    def term(self, t: Term):
        if isinstance(t, Var):
            i = self.slot(t.name)
            return lambda e: e[i]
        if isinstance(t, Const):
            value = self.s.const(t.name)
            return lambda e: value
        if isinstance(t, App):
            left, right = self.term(t.left), self.term(t.right)
            s = self.s
            op = t.op
            if s.size:
                s.app(op, 0, 0)  # fail early on operations the structure lacks
            return lambda e: s.app(op, left(e), right(e))
        raise FormulaError(f"not a term: {t!r}")

    def compile(self, f: Formula):
        hit = self.compiled.get(f)
        if hit is None:
            hit = self._compile(f)
            self.compiled[f] = hit
        return hit

    def _compile(self, f: Formula):
        if isinstance(f, Rel):
            op = REL_OP.get(f.symbol)
            table = self.s.tables.get(op) if op else None
            if table is None:
                raise FormulaError(f"{f.symbol} needs {op} in the signature")
            if all(isinstance(t, Var) for t in f.args):
                i, j, k = (self.slot(t.name) for t in f.args)
                return lambda e: table[e[i]][e[j]] == e[k]
            x, y, z = (self.term(t) for t in f.args)
            return lambda e: table[x(e)][y(e)] == z(e)
        if isinstance(f, Eq):
            x, y = self.term(f.left), self.term(f.right)
            return lambda e: x(e) == y(e)
        if isinstance(f, Not):
            body = self.compile(f.body)
            return lambda e: not body(e)
        if isinstance(f, And):
            parts = [self.compile(p) for p in f.parts]
            return lambda e: all(p(e) for p in parts)
        if isinstance(f, Or):
            parts = [self.compile(p) for p in f.parts]
            return lambda e: any(p(e) for p in parts)
        if isinstance(f, Implies):
            x, y = self.compile(f.left), self.compile(f.right)
            return lambda e: not x(e) or y(e)
        if isinstance(f, Iff):
            x, y = self.compile(f.left), self.compile(f.right)
            return lambda e: x(e) == y(e)
        if isinstance(f, Top):
            return lambda e: True
        if isinstance(f, Bottom):
            return lambda e: False
        if isinstance(f, (Forall, Exists)):
            return self._quantifier(f)
        raise FormulaError(f"not a formula: {f!r}")

    def _quantifier(self, f):
        body = self.compile(f.body)
        bound = [self.slot(v) for v in dict.fromkeys(f.vars)]
        free = [self.slot(v) for v in sorted(f.free)]
        grid = list(itertools.product(range(self.s.size), repeat=len(bound)))
        memo: dict = {}
        universal = isinstance(f, Forall)

        def run(e):
            key = tuple([e[i] for i in free])
            hit = memo.get(key)
            if hit is not None:
                return hit
            saved = [e[i] for i in bound]
            result = universal
            for values in grid:
                for i, x in zip(bound, values):
                    e[i] = x
                if body(e) != universal:
                    result = not universal
                    break
            for i, x in zip(bound, saved):
                e[i] = x
            memo[key] = result
            return result

        return run

    def eval(self, f: Formula, env: Mapping[str, int]) -> bool:
        fn = self.compile(f)
        e = [0] * len(self.slots)
        for v, x in env.items():
            if v in self.slots:
                e[self.slots[v]] = x
        return fn(e)


def eval_formula(alg, formula: Formula, assignment: Mapping[str, str] | None = None,
                 evaluator: Evaluator | None = None) -> bool:
    """Truth of ``formula`` in ``alg`` under ``assignment`` (element ids)."""
    ev = evaluator or Evaluator(as_structure(alg))
    index = {x: i for i, x in enumerate(ev.s.names)}
    env = {}
    for v, x in (assignment or {}).items():
        if x not in index:
            raise FormulaError(f"{x!r} is not an element")
        env[v] = index[x]
    missing = formula.free - set(env)
    if missing:
        raise FormulaError(f"free variable {sorted(missing)[0]} is unassigned")
    return ev.eval(formula, env)


def holds(alg, formula: Formula, evaluator: Evaluator | None = None) -> bool:
    """Validity: truth under every assignment of the free variables."""
    ev = evaluator or Evaluator(as_structure(alg))
    if isinstance(formula, And):
        return all(holds(alg, p, ev) for p in formula.parts)
    if isinstance(formula, Implies) and isinstance(ev.s, RelationalStructure):
        forced = _forced(formula, ev.s)
        if forced:
            return _holds_guarded(formula, forced, ev)
    free = tuple(sorted(formula.free))
    closed = Forall(free, formula) if free else formula
    return eval_formula(alg, closed, evaluator=ev)


def _forced(f: Implies, s: Structure) -> list[tuple[str, str, str, list]]:
    """Free variables pinned by a guard conjunct R(x, y, z): z is the value of x op y.

    Returned in an order where x and y are never pinned later than z.
    """
    guards = f.left.parts if isinstance(f.left, And) else (f.left,)
    candidates = {}
    for g in guards:
        if isinstance(g, Rel) and all(isinstance(t, Var) for t in g.args) and REL_OP.get(g.symbol) in s.tables:
            x, y, z = (t.name for t in g.args)
            if z not in (x, y) and z not in candidates:
                candidates[z] = (x, y, s.tables[REL_OP[g.symbol]])
    order, done = [], set(f.free) - set(candidates)
    while True:
        step = sorted(z for z, (x, y, _) in candidates.items() if z not in done and x in done and y in done)
        if not step:
            break
        for z in step:
            x, y, table = candidates[z]
            order.append((z, x, y, table))
            done.add(z)
    return order


def _holds_guarded(f: Implies, forced, ev: Evaluator) -> bool:
    pinned = {z for z, *_ in forced}
    base = sorted(f.free - pinned)
    for values in itertools.product(range(ev.s.size), repeat=len(base)):
        env = dict(zip(base, values))
        for z, x, y, table in forced:
            v = table[env[x]][env[y]]
            if v < 0:
                break  # the guard fails, so the implication holds
            env[z] = v
        else:
            if not ev.eval(f, env):
                return False
    return True


def counterexample(alg, formula: Formula) -> dict[str, str] | None:
    """First falsifying assignment of the free variables in carrier order, if any."""
    ev = Evaluator(as_structure(alg))
    free = tuple(sorted(formula.free))
    names = ev.s.names
    for values in itertools.product(range(ev.s.size), repeat=len(free)):
        env = dict(zip(free, values))
        if not ev.eval(formula, env):
            return {v: names[x] for v, x in env.items()}
    return None
