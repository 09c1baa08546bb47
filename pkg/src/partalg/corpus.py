"""Seeded random algebras for property tests and the acceptance suite."""

from __future__ import annotations

import random

from .algebra import PartialAlgebra
from .sets import close_family, set_algebra


def names(n: int) -> list[str]:
    return [f"e{i}" for i in range(n)]


def random_join_table(rng: random.Random, n: int, density: float = 0.4, symmetric: bool = False):
    c = names(n)
    table = {}
    for i in range(n):
        for j in range(i if symmetric else 0, n):
            if rng.random() < density:
                k = rng.randrange(n)
                table[(c[i], c[j])] = c[k]
                if symmetric:
                    table[(c[j], c[i])] = c[k]
    return c, table


def random_table_algebra(rng: random.Random, n: int, symbols=("join",), symmetric: bool = False) -> PartialAlgebra:
    c, join = random_join_table(rng, n, rng.choice((0.2, 0.4, 0.6)), symmetric)
    tables = {}
    if "join" in symbols:
        tables["join"] = join
    if "minus" in symbols:
        tables["minus"] = random_join_table(rng, n, rng.choice((0.2, 0.4)))[1]
    return PartialAlgebra.make(c, symbols, **tables)


def random_family(rng: random.Random, points: int, size: int) -> list[frozenset]:
    return [frozenset(x for x in range(points) if rng.random() < 0.5) for _ in range(size)]


def random_set_algebra(rng: random.Random, max_size: int, symbols=("join",), ops=("join",)) -> PartialAlgebra:
    """Close a random family under ``ops`` (retrying until small enough), then trim at random."""
    while True:
        points = rng.randint(1, 3)
        fam = close_family(random_family(rng, points, rng.randint(1, 3)), ops)
        if len(fam) <= max_size:
            break
    if "zero" in symbols and frozenset() not in fam:
        fam = [frozenset()] + fam
        if len(fam) > max_size:
            fam = fam[:max_size]
    return set_algebra(fam, symbols)


def join_corpus(seed: int, count: int, max_size: int) -> list[PartialAlgebra]:
    """Mixed join-only algebras: set algebras, subfamilies, random and symmetric tables."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        kind = rng.randrange(4)
        n = rng.randint(1, max_size)
        if kind == 0:
            fam = random_family(rng, rng.randint(1, 3), n)
            alg = set_algebra(fam, ("join",))
        elif kind == 1:
            alg = random_set_algebra(rng, max_size)
        elif kind == 2:
            alg = random_table_algebra(rng, n)
        else:
            alg = random_table_algebra(rng, n, symmetric=True)
        if 1 <= len(alg) <= max_size:
            out.append(alg)
    return out


def mixed_corpus(seed: int, count: int, max_size: int) -> list[PartialAlgebra]:
    """Algebras over several signatures (join, minus, both, with or without zero)."""
    rng = random.Random(seed)
    sigs = [("join",), ("minus",), ("join", "minus"), ("join", "zero"), ("minus", "zero"),
            ("join", "minus", "zero")]
    out = []
    while len(out) < count:
        symbols = rng.choice(sigs)
        ops = tuple(s for s in symbols if s != "zero")
        if rng.random() < 0.5:
            alg = random_set_algebra(rng, max_size, symbols, ops)
        elif "zero" in symbols:
            n = rng.randint(1, max_size)
            base = random_table_algebra(rng, n, ops)
            alg = PartialAlgebra.make(base.carrier, symbols, join=base.join, minus=base.minus, zero=base.carrier[0])
        else:
            alg = random_table_algebra(rng, rng.randint(1, max_size), ops)
        if 1 <= len(alg) <= max_size:
            out.append(alg)
    return out
