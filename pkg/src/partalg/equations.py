"""Equations between terms built from variables, 0 and a partial join.

An equation s = t is valid when, in every disjoint-union algebra of sets
with zero and under every assignment, either both sides are undefined or
both are defined and equal.  Validity reduces to two syntactic tests: both
sides use the same variables, and the same variables occur more than once.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass

from .algebra import AlgebraError, PartialAlgebra
from .io import ParseError
from .sets import power_set, set_algebra


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Variable(Term):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Zero(Term):
    def __str__(self) -> str:
        return "0"


@dataclass(frozen=True)
class Join(Term):
    left: Term
    right: Term

    def __str__(self) -> str:
        right = f"({self.right})" if isinstance(self.right, Join) else str(self.right)
        return f"{self.left} + {right}"


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    def __str__(self) -> str:
        return f"{self.lhs} = {self.rhs}"


# -- parsing ------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:([a-z][a-z0-9]*)|(0)|([+=()]))")


def _tokens(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[col]!r}", f"column {col + 1}")
        start = m.start(m.lastindex)
        kind = ("var", "zero", "sym")[m.lastindex - 1]
        out.append((kind, m.group(m.lastindex), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def fail(self, what: str):
        kind, value, pos = self.peek()
        found = "end of input" if kind == "end" else repr(value)
        raise ParseError(f"expected {what}, found {found}", f"column {pos + 1}")

    def expect(self, value: str):
        if self.peek()[1] != value or self.peek()[0] != "sym":
            self.fail(repr(value))
        self.i += 1

    def term(self) -> Term:
        out = self.atom()
        while self.peek() == ("sym", "+", self.peek()[2]):
            self.i += 1
            out = Join(out, self.atom())
        return out

    def atom(self) -> Term:
        kind, value, _ = self.peek()
        if kind == "var":
            self.i += 1
            return Variable(value)
        if kind == "zero":
            self.i += 1
            return Zero()
        if (kind, value) == ("sym", "("):
            self.i += 1
            inner = self.term()
            self.expect(")")
            return inner
        self.fail("a variable, 0 or '('")

    def done(self):
        if self.peek()[0] != "end":
            self.fail("end of input")


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    p.done()
    return t


def parse_equation(text: str) -> Equation:
    p = _Parser(text)
    lhs = p.term()
    p.expect("=")
    rhs = p.term()
    p.done()
    return Equation(lhs, rhs)


# -- semantics ------------------------------------------------------------------------


def _leaves(t: Term):
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, Join):
            stack.append(x.right)
            stack.append(x.left)
        else:
            yield x


def variables(t: Term) -> list[str]:
    """Variables in order of first occurrence."""
    return list(dict.fromkeys(x.name for x in _leaves(t) if isinstance(x, Variable)))


def eval_term(alg: PartialAlgebra, term: Term, assignment) -> str | None:
    """Value of ``term`` under ``assignment``; None when undefined."""
    if not alg.signature.has_join:
        raise AlgebraError("terms need join in the signature")

    def go(t):
        if isinstance(t, Variable):
            if t.name not in assignment:
                raise AlgebraError(f"variable {t.name} is unassigned")
            return assignment[t.name]
        if isinstance(t, Zero):
            if not alg.signature.has_zero:
                raise AlgebraError("the term uses 0 but the signature has no zero")
            return alg.zero
        left = go(t.left)
        if left is None:
            return None
        right = go(t.right)
        if right is None:
            return None
        return alg.op("join", left, right)

    return go(term)


def _profile(t: Term) -> tuple[frozenset[str], frozenset[str]]:
    counts = Counter(x.name for x in _leaves(t) if isinstance(x, Variable))
    return frozenset(counts), frozenset(v for v, k in counts.items() if k > 1)


def decide_validity(eq: Equation) -> bool:
    """Same variables on both sides, and the same variables repeated on both sides."""
    return _profile(eq.lhs) == _profile(eq.rhs)


@dataclass(frozen=True)
class Countermodel:
    algebra: PartialAlgebra
    assignment: dict[str, str]
    lhs: str | None
    rhs: str | None

    def describe(self) -> str:
        where = ", ".join(f"{v}={x}" for v, x in self.assignment.items())
        show = lambda x: "undefined" if x is None else x  # noqa: E731
        return f"{where}: left side {show(self.lhs)}, right side {show(self.rhs)}"


def find_countermodel(eq: Equation, size_bound: int = 3) -> Countermodel | None:
    """First falsifying assignment in the power set of {0..size_bound-1} with disjoint union and 0.

    Variables are taken in name order, subsets in size-then-lexicographic
    order, and the last variable varies fastest.
    """
    if size_bound < 1:
        raise AlgebraError("size_bound must be at least 1")
    alg = set_algebra(power_set(range(size_bound)), ("join", "zero"))
    names = sorted(set(variables(eq.lhs)) | set(variables(eq.rhs)))
    for values in itertools.product(alg.carrier, repeat=len(names)):
        env = dict(zip(names, values))
        left, right = eval_term(alg, eq.lhs, env), eval_term(alg, eq.rhs, env)
        if left != right:
            return Countermodel(alg, env, left, right)
    return None


def random_term(rng, variables: str = "abc", depth: int = 4) -> Term:
    """A random term of at most ``depth`` levels of join."""
    if depth == 0 or rng.random() < 0.3:
        return Zero() if rng.random() < 0.15 else Variable(rng.choice(variables))
    return Join(random_term(rng, variables, depth - 1), random_term(rng, variables, depth - 1))


def _rebuild(rng, leaves: list[Term]) -> Term:
    # near-balanced, so n leaves give depth ceil(log2 n)
    if len(leaves) == 1:
        return leaves[0]
    cut = rng.choice((len(leaves) // 2, (len(leaves) + 1) // 2))
    return Join(_rebuild(rng, leaves[:cut]), _rebuild(rng, leaves[cut:]))


def random_equation(rng, variables: str = "abc", depth: int = 4) -> Equation:
    """Half the time an independent pair of terms, otherwise a shuffled and rebracketed copy."""
    lhs = random_term(rng, variables, depth)
    if rng.random() < 0.5:
        return Equation(lhs, random_term(rng, variables, depth))
    leaves = [x for x in _leaves(lhs) if not isinstance(x, Zero) or rng.random() < 0.5]
    rng.shuffle(leaves)
    if len(leaves) < 2 ** depth and rng.random() < 0.3:
        leaves.insert(rng.randint(0, len(leaves)), Zero())
    return Equation(lhs, _rebuild(rng, leaves or [Zero()]))
