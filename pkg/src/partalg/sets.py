"""Concrete algebras of sets and the worked examples built from them."""

from __future__ import annotations

import itertools
from typing import Iterable

from .algebra import AlgebraError, PartialAlgebra, Signature

SetFamily = Iterable[frozenset]


def set_name(s: frozenset) -> str:
    return "{" + ",".join(str(x) for x in sorted(s)) + "}"


def _sort_key(s: frozenset):
    return (len(s), tuple(sorted(s)))


def set_algebra(family: SetFamily, symbols: Iterable[str] | Signature) -> PartialAlgebra:
    """The algebra of sets induced on ``family`` by the chosen operations.

    join is disjoint union, minus is difference of a subset, meet is
    intersection; each is defined only when its result stays in the family.
    """
    sig = symbols if isinstance(symbols, Signature) else Signature.from_symbols(symbols)
    sets = sorted({frozenset(s) for s in family}, key=_sort_key)
    member = set(sets)
    name = {s: set_name(s) for s in sets}
    join, minus, meet, comp = [], [], [], []
    for a in sets:
        for b in sets:
            if sig.has_join and not (a & b) and (a | b) in member:
                join.append((name[a], name[b], name[a | b]))
            if sig.has_minus and b <= a and (a - b) in member:
                minus.append((name[a], name[b], name[a - b]))
            if sig.has_meet:
                if (a & b) not in member:
                    raise AlgebraError(f"family not closed under intersection at {name[a]}, {name[b]}")
                meet.append((name[a], name[b], name[a & b]))
    zero = None
    if sig.has_zero:
        if frozenset() not in member:
            raise AlgebraError("zero requires the empty set in the family")
        zero = name[frozenset()]
    if sig.has_comp:
        comp = [(name[a], name[b], zero) for a in sets for b in sets]
    return PartialAlgebra.make(
        [name[s] for s in sets], sig, join=join, minus=minus, meet=meet, comp=comp, zero=zero,
    )


def power_set(points: Iterable) -> list[frozenset]:
    pts = sorted(points)
    return [frozenset(c) for r in range(len(pts) + 1) for c in itertools.combinations(pts, r)]


def power_set_algebra(points: Iterable, symbols: Iterable[str] = ("join",)) -> PartialAlgebra:
    return set_algebra(power_set(points), symbols)


def close_family(family: SetFamily, ops: Iterable[str] = ("join", "minus")) -> list[frozenset]:
    """Smallest superset of ``family`` closed under the listed set operations where defined."""
    ops = set(ops)
    out = {frozenset(s) for s in family}
    changed = True
    while changed:
        changed = False
        current = list(out)
        for a in current:
            for b in current:
                new = []
                if "join" in ops and not (a & b):
                    new.append(a | b)
                if "minus" in ops and b <= a:
                    new.append(a - b)
                if "meet" in ops:
                    new.append(a & b)
                for s in new:
                    if s not in out:
                        out.add(s)
                        changed = True
    return sorted(out, key=_sort_key)


def example_three() -> PartialAlgebra:
    """Power set of {1,2,3} without the top, under disjoint union (7 elements)."""
    return set_algebra([s for s in power_set({1, 2, 3}) if len(s) < 3], ("join",))


def example_three_full() -> PartialAlgebra:
    return power_set_algebra({1, 2, 3}, ("join",))


def example_five_join() -> PartialAlgebra:
    """Power set of {1,2,3} without {3}; join is disjoint union, minus comes from it."""
    from .counterexamples import expand_minus_via_abc

    base = set_algebra([s for s in power_set({1, 2, 3}) if s != frozenset({3})], ("join", "zero"))
    return expand_minus_via_abc(base)


def example_five_minus() -> PartialAlgebra:
    """Power set of {1,2,3} without the top; minus is set difference, join comes from it."""
    from .counterexamples import expand_join_via_abc

    base = set_algebra([s for s in power_set({1, 2, 3}) if len(s) < 3], ("minus", "zero"))
    return expand_join_via_abc(base)


def single_point(symbols: Iterable[str] = ("join",)) -> PartialAlgebra:
    return PartialAlgebra.make(["a"], symbols)
