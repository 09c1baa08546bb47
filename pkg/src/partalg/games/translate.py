"""Translation of quantifier-free formulas about a totalised algebra into relational ones.

Each subterm t gets a variable v_t (a variable names itself).  A grounded
set D picks which subterms are defined: inf never is, and a compound term
can only be defined when its arguments are.  For each grounded D the
translation asserts that, if the operation graph agrees with D, the
formula holds with equations rewritten according to D.
"""

from __future__ import annotations

from dataclasses import dataclass

from .formula import (
    BOTTOM, TOP, And, App, Bottom, Const, Eq, Forall, Formula, FormulaError, Iff, Implies, Not,
    Or, Rel, Term, Top, Var, conj, is_quantifier_free, term_vars,
)

RELATION_FOR = {"join": "J", "minus": "K"}


def subterms(f: Formula) -> list[Term]:
    """Distinct subterms in post-order (arguments before the terms built from them)."""
    seen: dict[Term, None] = {}

    def visit_term(t: Term):
        if t in seen:
            return
        if isinstance(t, App):
            visit_term(t.left)
            visit_term(t.right)
        seen[t] = None

    def visit(g: Formula):
        if isinstance(g, Eq):
            visit_term(g.left)
            visit_term(g.right)
        elif isinstance(g, Rel):
            raise FormulaError("the formula to translate must not use relation symbols")
        elif isinstance(g, Not):
            visit(g.body)
        elif isinstance(g, (And, Or)):
            for p in g.parts:
                visit(p)
        elif isinstance(g, (Implies, Iff)):
            visit(g.left)
            visit(g.right)

    visit(f)
    return list(seen)


@dataclass(frozen=True)
class Translation:
    formula: Formula
    grounded: tuple[frozenset[str], ...]
    names: dict  # subterm -> variable name


def _name_subterms(terms: list[Term], taken: set[str]) -> dict[Term, str]:
    names: dict[Term, str] = {}
    counter = 0
    for t in terms:
        if isinstance(t, Var):
            names[t] = t.name
            continue
        if isinstance(t, Const) and t.name == "inf":
            base = "v_inf"
        elif isinstance(t, Const):
            base = "v_zero"
        else:
            base = f"v{counter}"
            counter += 1
        name = base
        while name in taken:
            name += "_"
        taken.add(name)
        names[t] = name
    return names


def _relation_atom(t: App, args: tuple[Var, Var], result: Term) -> Formula:
    if t.op in RELATION_FOR:
        return Rel(RELATION_FOR[t.op], (args[0], args[1], result))
    return Eq(App(t.op, args[0], args[1]), result)


def grounded_sets(terms: list[Term], names: dict[Term, str]):
    """All grounded sets, as frozensets of variable names, in a fixed order."""
    out = [frozenset()]
    for t in terms:
        if isinstance(t, Const) and t.name == "inf":
            continue
        v = names[t]
        nxt = []
        for D in out:
            nxt.append(D)
            if isinstance(t, App) and not (names[t.left] in D and names[t.right] in D):
                continue
            nxt.append(D | {v})
        out = nxt
    return out


def translate_to_relational(psi: Formula, with_info: bool = False):
    """The relational formula psi- that holds in A exactly when psi holds in the totalisation."""
    if not is_quantifier_free(psi):
        raise FormulaError("translation needs a quantifier-free formula")
    terms = subterms(psi)
    taken = set()
    for t in terms:
        taken |= term_vars(t)
    names = _name_subterms(terms, taken)
    w = "w"
    while w in taken:
        w += "_"
    grounded = grounded_sets(terms, names)

    conjuncts = []
    for D in grounded:
        phi = []
        for t in terms:
            if isinstance(t, App) and names[t.left] in D and names[t.right] in D:
                args = (Var(names[t.left]), Var(names[t.right]))
                if names[t] in D:
                    phi.append(_relation_atom(t, args, Var(names[t])))
                else:
                    phi.append(Forall((w,), Not(_relation_atom(t, args, Var(w)))))
            elif isinstance(t, Const) and t.name == "0":
                if names[t] in D:
                    phi.append(Eq(Var(names[t]), t))
                else:
                    phi.append(Forall((w,), Not(Eq(Var(w), t))))
        conjuncts.append(Implies(conj(phi), _rewrite(psi, D, names)))
    out = conj(conjuncts)
    if with_info:
        return Translation(out, tuple(grounded), {str(t): n for t, n in names.items()})
    return out


def _rewrite(f: Formula, D: frozenset[str], names: dict[Term, str]) -> Formula:
    if isinstance(f, Eq):
        s, t = names[f.left], names[f.right]
        if s in D and t in D:
            return Eq(Var(s), Var(t))
        if s not in D and t not in D:
            return TOP
        return BOTTOM
    if isinstance(f, (Top, Bottom)):
        return f
    if isinstance(f, Not):
        return Not(_rewrite(f.body, D, names))
    if isinstance(f, And):
        return And(tuple(_rewrite(p, D, names) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(_rewrite(p, D, names) for p in f.parts))
    if isinstance(f, Implies):
        return Implies(_rewrite(f.left, D, names), _rewrite(f.right, D, names))
    if isinstance(f, Iff):
        return Iff(_rewrite(f.left, D, names), _rewrite(f.right, D, names))
    raise FormulaError(f"unexpected subformula {f!r}")
