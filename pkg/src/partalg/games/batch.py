"""Vectorised validity checking of one formula across many join tables at once.

A batch is an array ``T`` of shape (N, m, m) holding join tables coded as
integers, with -1 for undefined.  Assignments are expanded row-wise: an
environment maps each variable to an integer array broadcastable to
(N, K), where K is the number of assignments currently in play.
"""

from __future__ import annotations

import itertools

import numpy as np

from .formula import (
    And, App, Bottom, Const, Eq, Exists, Forall, Formula, FormulaError, Iff, Implies, Not, Or,
    Rel, Top, Var,
)


def all_join_tables(n: int) -> np.ndarray:
    """Every partial binary table on n elements: (n+1)^(n*n) of them."""
    cells = n * n
    count = (n + 1) ** cells
    codes = np.arange(count, dtype=np.int64)
    out = np.empty((count, cells), dtype=np.int8)
    for k in range(cells):
        out[:, k] = codes % (n + 1) - 1
        codes //= n + 1
    return out.reshape(count, n, n)


def iso_classes(tables: np.ndarray) -> np.ndarray:
    """One representative per isomorphism class (tables relabelled by every permutation)."""
    count, n, _ = tables.shape
    if n <= 1 or count == 0:
        return tables
    weights = (n + 1) ** np.arange(n * n, dtype=np.int64)
    best = None
    for perm in itertools.permutations(range(n)):
        p = np.array(perm)
        inv = np.argsort(p)
        # relabel x -> p[x]: new[p[a], p[b]] = p[old[a, b]]
        mapped = np.where(tables >= 0, p[np.clip(tables, 0, None)], -1)
        relabelled = mapped[:, inv][:, :, inv]
        code = ((relabelled.reshape(count, -1).astype(np.int64) + 1) * weights).sum(axis=1)
        best = code if best is None else np.minimum(best, code)
    _, keep = np.unique(best, return_index=True)
    return tables[np.sort(keep)]


def totalised(tables: np.ndarray) -> np.ndarray:
    """Add inf (coded n) as an absorbing element, sending undefined entries to it."""
    count, n, _ = tables.shape
    out = np.full((count, n + 1, n + 1), n, dtype=np.int8)
    out[:, :n, :n] = np.where(tables < 0, n, tables)
    return out


class _Batch:
    def __init__(self, tables: np.ndarray, total: bool):
        self.T = tables.astype(np.intp)
        self.N, self.m, _ = tables.shape
        self.total = total
        self.rows = np.arange(self.N)[:, None]
        self.inf = self.m - 1 if total else None

    def term(self, t, env):
        if isinstance(t, Var):
            return env[t.name]
        if isinstance(t, Const):
            if t.name == "inf" and self.total:
                return np.full((1, 1), self.inf, dtype=np.intp)
            raise FormulaError(f"constant {t.name} is not supported in batch evaluation")
        if isinstance(t, App):
            if t.op != "join" or not self.total:
                raise FormulaError("batch evaluation supports join terms over totalised tables only")
            s, u = np.broadcast_arrays(self.term(t.left, env), self.term(t.right, env))
            s = np.broadcast_to(s, (self.N, s.shape[1]))
            u = np.broadcast_to(u, (self.N, u.shape[1]))
            return self.T[self.rows, s, u]
        raise FormulaError(f"not a term: {t!r}")

    def eval(self, f: Formula, env, K: int) -> np.ndarray:
        if isinstance(f, Top):
            return np.ones((1, K), dtype=bool)
        if isinstance(f, Bottom):
            return np.zeros((1, K), dtype=bool)
        if isinstance(f, Eq):
            return self.term(f.left, env) == self.term(f.right, env)
        if isinstance(f, Rel):
            if f.symbol != "J":
                raise FormulaError("batch evaluation supports J only")
            x, y, z = (self.term(t, env) for t in f.args)
            x, y, z = np.broadcast_arrays(x, y, z)
            width = x.shape[1]
            x = np.broadcast_to(x, (self.N, width))
            y = np.broadcast_to(y, (self.N, width))
            return self.T[self.rows, x, y] == z
        if isinstance(f, Not):
            return ~self.eval(f.body, env, K)
        if isinstance(f, And):
            out = self.eval(f.parts[0], env, K)
            for p in f.parts[1:]:
                out = out & self.eval(p, env, K)
            return out
        if isinstance(f, Or):
            out = self.eval(f.parts[0], env, K)
            for p in f.parts[1:]:
                out = out | self.eval(p, env, K)
            return out
        if isinstance(f, Implies):
            return ~self.eval(f.left, env, K) | self.eval(f.right, env, K)
        if isinstance(f, Iff):
            return self.eval(f.left, env, K) == self.eval(f.right, env, K)
        if isinstance(f, (Forall, Exists)):
            env2, K2 = self.expand(env, K, f.vars)
            inner = np.broadcast_to(self.eval(f.body, env2, K2), (self.N, K2))
            inner = inner.reshape(self.N, K, self.m ** len(f.vars))
            return inner.all(axis=2) if isinstance(f, Forall) else inner.any(axis=2)
        raise FormulaError(f"not a formula: {f!r}")

    def expand(self, env, K: int, names) -> tuple[dict, int]:
        """Extend every current row by every assignment of ``names``."""
        r = self.m ** len(names)
        env2 = {v: np.repeat(a, r, axis=1) for v, a in env.items()}
        grid = np.array(list(itertools.product(range(self.m), repeat=len(names))), dtype=np.intp)
        for i, v in enumerate(names):
            env2[v] = np.tile(grid[:, i], K)[None, :]
        return env2, K * r

    def valid(self, f: Formula) -> np.ndarray:
        """Truth under all assignments of the free variables, for each table."""
        if isinstance(f, And):
            out = np.ones(self.N, dtype=bool)
            for p in f.parts:
                out &= self.valid(p)
            return out
        free = sorted(f.free)
        if not self.total and isinstance(f, Implies):
            return self._valid_guarded(f, free)
        env, K = self.expand({}, 1, free)
        return np.broadcast_to(self.eval(f, env, K), (self.N, K)).all(axis=1)

    def _valid_guarded(self, f: Implies, free) -> np.ndarray:
        """Validity of (A -> B) where A may fix variables through J(x, y, z) conjuncts.

        A conjunct J(x, y, z) with z free forces z = x + y, so z need not be
        enumerated; rows where x + y is undefined make the implication true.
        """
        guards = f.left.parts if isinstance(f.left, And) else (f.left,)
        forced = {}
        for g in guards:
            if isinstance(g, Rel) and g.symbol == "J" and all(isinstance(t, Var) for t in g.args):
                x, y, z = (t.name for t in g.args)
                if z in free and z not in (x, y) and z not in forced:
                    forced[z] = (x, y)
        # keep only forcings whose inputs resolve without cycles
        order, ready = [], set(v for v in free if v not in forced)
        pending = dict(forced)
        while pending:
            step = [z for z, (x, y) in pending.items() if x in ready and y in ready]
            if not step:
                ready |= set(pending)
                break
            for z in sorted(step):
                order.append(z)
                ready.add(z)
                del pending[z]
        base = [v for v in free if v not in order]
        env, K = self.expand({}, 1, base)
        alive = np.ones((self.N, K), dtype=bool)
        for z in order:
            x, y = forced[z]
            xs = np.broadcast_to(env[x], (self.N, K))
            ys = np.broadcast_to(env[y], (self.N, K))
            val = self.T[self.rows, xs, ys]
            alive &= val >= 0
            env[z] = np.where(val >= 0, val, 0)
        body = np.broadcast_to(self.eval(f, env, K), (self.N, K))
        return (body | ~alive).all(axis=1)


def batch_valid(tables: np.ndarray, formula: Formula, total: bool, chunk: int = 16384) -> np.ndarray:
    """Validity of ``formula`` in each table: relational view, or totalised when ``total``."""
    if total:
        tables = totalised(tables)
    out = np.empty(len(tables), dtype=bool)
    for start in range(0, len(tables), chunk):
        part = tables[start:start + chunk]
        out[start:start + chunk] = _Batch(part, total).valid(formula)
    return out
