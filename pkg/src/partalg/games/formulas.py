"""The formulas mu_n(V, W) and rho_n expressing that the existential player wins."""

from __future__ import annotations

from .formula import (
    TOP, And, Bottom, Eq, Exists, Forall, Formula, Iff, Implies, Not, Or, Rel, Top, Var,
    conj, disj, neq,
)


def _fresh(letter: str, depth: int) -> str:
    return f"{letter}_{depth}"


def _check_names(names) -> None:
    for v in names:
        if "_" in v and v.split("_")[0] in ("a", "b", "c") and v.split("_")[-1].isdigit():
            raise ValueError(f"variable {v} clashes with the fresh-variable scheme a_k, b_k, c_k")


class _MuBuilder:
    def __init__(self):
        self.memo: dict = {}

    def mu(self, n: int, V: tuple[str, ...], W: tuple[str, ...], depth: int) -> Formula:
        key = (n, V, W, depth)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if n == 0:
            c = Var(_fresh("c", depth))
            parts = [Not(Exists((c.name,), Rel("J", (Var(v), Var(w), c)))) for v in V for w in V]
            parts += [neq(Var(v), Var(w)) for v in V for w in W]
            out = conj(parts)
        else:
            a, b = _fresh("a", depth), _fresh("b", depth)
            va, vb = Var(a), Var(b)
            with_a = self.mu(n - 1, V + (a,), W, depth + 1)
            with_b = self.mu(n - 1, V + (b,), W, depth + 1)
            parts = [Implies(Rel("J", (va, vb, Var(v))), disj((with_a, with_b))) for v in V]
            parts += [Implies(Rel("J", (va, Var(v), vb)), with_b) for v in V]
            parts += [Implies(Rel("J", (Var(v), va, vb)), with_b) for v in V]
            out = Forall((a, b), conj(parts))
        self.memo[key] = out
        return out


def gen_mu(n: int, V, W, depth: int = 0) -> Formula:
    """mu_n(V, W); V and W are disjoint lists of variable names."""
    V, W = tuple(V), tuple(W)
    if n < 0:
        raise ValueError("n must be non-negative")
    if set(V) & set(W):
        raise ValueError("V and W must be disjoint")
    _check_names(V + W)
    return _MuBuilder().mu(n, V, W, depth)


def gen_rho(n: int) -> Formula:
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return TOP
    builder = _MuBuilder()
    a, b, c = Var("a_0"), Var("b_0"), Var("c_0")
    m = n - 1
    distinct = disj((
        Eq(a, b),
        builder.mu(m, ("a_0",), ("b_0",), 1),
        builder.mu(m, ("b_0",), ("a_0",), 1),
    ))
    undefined = disj((
        Exists(("c_0",), Rel("J", (a, b, c))),
        builder.mu(m, ("a_0", "b_0"), (), 1),
    ))
    return Forall(("a_0", "b_0"), And((distinct, undefined)))


def atom_count(f: Formula) -> int:
    """Atoms in the fully expanded tree (shared subformulas counted each time)."""
    memo: dict[int, int] = {}

    def go(g) -> int:
        if id(g) in memo:
            return memo[id(g)]
        if isinstance(g, (Rel, Eq)):
            r = 1
        elif isinstance(g, (Top, Bottom)):
            r = 0
        elif isinstance(g, Not):
            r = go(g.body)
        elif isinstance(g, (And, Or)):
            r = sum(go(p) for p in g.parts)
        elif isinstance(g, (Implies, Iff)):
            r = go(g.left) + go(g.right)
        else:
            r = go(g.body)
        memo[id(g)] = r
        return r

    return go(f)
