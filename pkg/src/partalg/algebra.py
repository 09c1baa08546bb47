"""Finite partial algebras over the disjoint-union family of signatures.

An algebra stores each binary operation relationally, as a set of
``(a, b, c)`` triples meaning ``op(a, b) = c``.  Keeping the graph rather
than a dict lets :func:`validate` report tables that are not single-valued
instead of silently dropping entries.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Mapping

SYMBOLS = ("join", "minus", "meet", "comp", "zero")
OPERATIONS = ("join", "minus", "meet", "comp")
TOTAL_OPERATIONS = ("meet", "comp")

Triple = tuple[str, str, str]


class AlgebraError(ValueError):
    """Raised when an algebra or a derived structure is malformed."""


@dataclass(frozen=True)
class Signature:
    has_join: bool = False
    has_minus: bool = False
    has_meet: bool = False
    has_comp: bool = False
    has_zero: bool = False

    @classmethod
    def from_symbols(cls, symbols: Iterable[str]) -> Signature:
        symbols = list(symbols)
        unknown = [s for s in symbols if s not in SYMBOLS]
        if unknown:
            raise AlgebraError(f"unknown signature symbol {unknown[0]!r}")
        return cls(**{f"has_{s}": True for s in symbols})

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(s for s in SYMBOLS if getattr(self, f"has_{s}"))

    @property
    def operations(self) -> tuple[str, ...]:
        return tuple(s for s in OPERATIONS if getattr(self, f"has_{s}"))

    def has(self, symbol: str) -> bool:
        return getattr(self, f"has_{symbol}")

    @property
    def is_degenerate(self) -> bool:
        return not (self.has_join or self.has_minus or self.has_meet)

    def without(self, *symbols: str) -> Signature:
        return replace(self, **{f"has_{s}": False for s in symbols})

    def with_symbols(self, *symbols: str) -> Signature:
        return replace(self, **{f"has_{s}": True for s in symbols})

    def __str__(self) -> str:
        return "(" + ", ".join(self.symbols) + ")"


def _as_triples(table) -> frozenset[Triple]:
    if table is None:
        return frozenset()
    if isinstance(table, Mapping):
        return frozenset((a, b, c) for (a, b), c in table.items())
    return frozenset(tuple(t) for t in table)


@dataclass(frozen=True)
class Indexed:
    """Integer-indexed copy of an algebra's tables; ``-1`` marks undefined."""

    n: int
    index: Mapping[str, int]
    tables: Mapping[str, list[list[int]]]
    zero: int

    def op(self, name: str) -> list[list[int]] | None:
        return self.tables.get(name)


@dataclass(frozen=True)
class PartialAlgebra:
    carrier: tuple[str, ...]
    signature: Signature
    join: frozenset[Triple] = frozenset()
    minus: frozenset[Triple] = frozenset()
    meet: frozenset[Triple] = frozenset()
    comp: frozenset[Triple] = frozenset()
    zero: str | None = None

    @classmethod
    def make(
        cls,
        carrier: Iterable[str],
        symbols: Iterable[str] | Signature,
        *,
        join=None,
        minus=None,
        meet=None,
        comp=None,
        zero: str | None = None,
    ) -> PartialAlgebra:
        """Build an algebra from dicts ``{(a, b): c}`` or iterables of triples."""
        sig = symbols if isinstance(symbols, Signature) else Signature.from_symbols(symbols)
        return cls(
            carrier=tuple(carrier),
            signature=sig,
            join=_as_triples(join),
            minus=_as_triples(minus),
            meet=_as_triples(meet),
            comp=_as_triples(comp),
            zero=zero,
        )

    def __len__(self) -> int:
        return len(self.carrier)

    def triples(self, name: str) -> frozenset[Triple]:
        return getattr(self, name)

    @cached_property
    def _maps(self) -> dict[str, dict[tuple[str, str], str]]:
        maps = {}
        for name in OPERATIONS:
            m: dict[tuple[str, str], str] = {}
            for a, b, c in sorted(self.triples(name)):
                m.setdefault((a, b), c)
            maps[name] = m
        return maps

    def table(self, name: str) -> dict[tuple[str, str], str]:
        return self._maps[name]

    def op(self, name: str, a: str, b: str) -> str | None:
        """Value of ``a name b``, or None where undefined."""
        return self._maps[name].get((a, b))

    @cached_property
    def index(self) -> dict[str, int]:
        return {x: i for i, x in enumerate(self.carrier)}

    @cached_property
    def indexed(self) -> Indexed:
        idx = self.index
        n = len(self.carrier)
        tables = {}
        for name in self.signature.operations:
            t = [[-1] * n for _ in range(n)]
            for (a, b), c in self._maps[name].items():
                if a in idx and b in idx and c in idx:
                    t[idx[a]][idx[b]] = idx[c]
            tables[name] = t
        zero = idx.get(self.zero, -1) if self.zero is not None else -1
        return Indexed(n, idx, tables, zero)

    def reduct(self, *symbols: str) -> PartialAlgebra:
        """Forget every symbol not listed."""
        keep = set(symbols)
        sig = Signature.from_symbols(s for s in self.signature.symbols if s in keep)
        return PartialAlgebra(
            self.carrier,
            sig,
            self.join if sig.has_join else frozenset(),
            self.minus if sig.has_minus else frozenset(),
            self.meet if sig.has_meet else frozenset(),
            self.comp if sig.has_comp else frozenset(),
            self.zero if sig.has_zero else None,
        )

    def restrict(self, subset: Iterable[str]) -> PartialAlgebra:
        """Induced substructure on ``subset`` (kept in carrier order)."""
        keep = set(subset)
        carrier = tuple(x for x in self.carrier if x in keep)

        def cut(ts):
            return frozenset(t for t in ts if t[0] in keep and t[1] in keep and t[2] in keep)

        zero = self.zero if self.zero in keep else None
        return PartialAlgebra(
            carrier, self.signature, cut(self.join), cut(self.minus),
            cut(self.meet), cut(self.comp), zero,
        )

    def is_closed(self, subset: Iterable[str]) -> bool:
        """True if ``subset`` is closed under every defined operation (and holds zero)."""
        keep = set(subset)
        if self.signature.has_zero and self.zero not in keep:
            return False
        for name in self.signature.operations:
            for a, b, c in self.triples(name):
                if a in keep and b in keep and c not in keep:
                    return False
        return True

    def relabel(self, mapping: Mapping[str, str]) -> PartialAlgebra:
        def ren(ts):
            return frozenset((mapping[a], mapping[b], mapping[c]) for a, b, c in ts)

        return PartialAlgebra(
            tuple(mapping[x] for x in self.carrier),
            self.signature,
            ren(self.join), ren(self.minus), ren(self.meet), ren(self.comp),
            mapping[self.zero] if self.zero is not None else None,
        )

    def with_carrier_order(self, carrier: Iterable[str]) -> PartialAlgebra:
        carrier = tuple(carrier)
        if sorted(carrier) != sorted(self.carrier):
            raise AlgebraError("new carrier order is not a permutation of the carrier")
        return replace(self, carrier=carrier)


@dataclass(frozen=True)
class Violation:
    table: str
    args: tuple[str, ...]
    message: str

    def __str__(self) -> str:
        where = f" at ({','.join(self.args)})" if self.args else ""
        return f"{self.message}{where}"


def validate(alg: PartialAlgebra, allow_degenerate: bool = False) -> list[Violation]:
    """Check every structural invariant; an empty list means the algebra is sound."""
    out: list[Violation] = []
    sig = alg.signature
    seen: set[str] = set()
    for x in alg.carrier:
        if x in seen:
            out.append(Violation("carrier", (x,), "duplicate element id"))
        seen.add(x)
    if sig.is_degenerate and not allow_degenerate:
        out.append(Violation("signature", (), "degenerate signature (no join, minus or meet)"))
    if sig.has_comp and not sig.has_zero:
        out.append(Violation("signature", (), "comp requires zero"))

    for name in OPERATIONS:
        triples = sorted(alg.triples(name))
        if not sig.has(name):
            if triples:
                out.append(Violation(name, (), f"{name} table present but {name} not in signature"))
            continue
        values: dict[tuple[str, str], str] = {}
        for a, b, c in triples:
            for x in (a, b, c):
                if x not in seen:
                    out.append(Violation(name, (a, b, c), f"dangling element {x!r} in {name}"))
            if (a, b) in values and values[(a, b)] != c:
                out.append(Violation(name, (a, b), f"{name} not single-valued"))
            values.setdefault((a, b), c)
        if name in TOTAL_OPERATIONS:
            for a in alg.carrier:
                for b in alg.carrier:
                    if (a, b) not in values:
                        out.append(Violation(name, (a, b), f"{name} not total"))

    if sig.has_zero:
        if alg.zero is None or alg.zero not in seen:
            out.append(Violation("zero", (), "zero missing from carrier"))
        elif sig.has_comp:
            for (a, b), c in alg.table("comp").items():
                if c != alg.zero:
                    out.append(Violation("comp", (a, b), "comp is not the constant zero map"))
    elif alg.zero is not None:
        out.append(Violation("zero", (), "zero given but not in signature"))
    return out


def check_valid(alg: PartialAlgebra, allow_degenerate: bool = False) -> None:
    problems = validate(alg, allow_degenerate)
    if problems:
        raise AlgebraError(f"invalid algebra: {problems[0]}")


# -- congruences ------------------------------------------------------------


@dataclass(frozen=True)
class Congruence:
    partition: tuple[tuple[str, ...], ...]

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[str]]) -> Congruence:
        return cls(tuple(tuple(b) for b in blocks))

    @cached_property
    def block_of(self) -> dict[str, int]:
        return {x: i for i, block in enumerate(self.partition) for x in block}

    def __len__(self) -> int:
        return len(self.partition)


def identity_congruence(alg: PartialAlgebra) -> Congruence:
    return Congruence(tuple((x,) for x in alg.carrier))


def check_congruence(alg: PartialAlgebra, cong: Congruence) -> list[Violation]:
    """Exhaustively test blockwise definedness and compatibility of every operation."""
    out: list[Violation] = []
    count: dict[str, int] = {}
    for block in cong.partition:
        if not block:
            out.append(Violation("partition", (), "empty block"))
        for x in block:
            count[x] = count.get(x, 0) + 1
    for x in alg.carrier:
        if count.get(x, 0) != 1:
            out.append(Violation("partition", (x,), "element not covered exactly once"))
    extra = set(count) - set(alg.carrier)
    for x in sorted(extra):
        out.append(Violation("partition", (x,), "element not in carrier"))
    if out:
        return out

    blk = cong.block_of
    for name in alg.signature.operations:
        tab = alg.table(name)
        for b1 in cong.partition:
            for b2 in cong.partition:
                first = None
                for a, b in itertools.product(b1, b2):
                    c = tab.get((a, b))
                    got = None if c is None else blk[c]
                    if first is None:
                        first = (a, b, got)
                        continue
                    if (got is None) != (first[2] is None):
                        out.append(Violation(
                            name, (first[0], first[1], a, b),
                            f"{name} definedness disagrees within blocks",
                        ))
                        break
                    if got != first[2]:
                        out.append(Violation(
                            name, (first[0], first[1], a, b),
                            f"{name} results fall in different blocks",
                        ))
                        break
    return out


def quotient(alg: PartialAlgebra, cong: Congruence) -> PartialAlgebra:
    """Quotient algebra; each block is named by its first member in carrier order."""
    problems = check_congruence(alg, cong)
    if problems:
        raise AlgebraError(f"not a partial-algebra congruence: {problems[0]}")
    order = alg.index
    blocks = sorted((sorted(b, key=order.__getitem__) for b in cong.partition), key=lambda b: order[b[0]])
    name_of = {x: b[0] for b in blocks for x in b}

    def image(ts):
        return frozenset((name_of[a], name_of[b], name_of[c]) for a, b, c in ts)

    return PartialAlgebra(
        tuple(b[0] for b in blocks),
        alg.signature,
        image(alg.join), image(alg.minus), image(alg.meet), image(alg.comp),
        name_of[alg.zero] if alg.zero is not None else None,
    )


# -- derived order ----------------------------------------------------------


@dataclass(frozen=True)
class Order:
    pairs: frozenset[tuple[str, str]]
    reflexive: bool
    antisymmetric: bool
    transitive: bool

    def le(self, a: str, b: str) -> bool:
        return (a, b) in self.pairs

    @property
    def is_partial_order(self) -> bool:
        return self.reflexive and self.antisymmetric and self.transitive


def lesssim(alg: PartialAlgebra, kind: str = "join") -> Order:
    """The order a <= b iff a = b or a join c = b for some c.

    With ``kind="minus"`` the variant a <= b iff a = b or b minus a is defined.
    """
    pairs = {(a, a) for a in alg.carrier}
    if kind == "join":
        if not alg.signature.has_join:
            raise AlgebraError("lesssim needs join in the signature")
        pairs |= {(a, c) for a, _, c in alg.join}
    elif kind == "minus":
        if not alg.signature.has_minus:
            raise AlgebraError("minus-order needs minus in the signature")
        pairs |= {(b, a) for a, b, _ in alg.minus}
    else:
        raise AlgebraError(f"unknown order kind {kind!r}")
    pairs = frozenset(pairs)
    antisym = all(a == b or (b, a) not in pairs for a, b in pairs)
    succ: dict[str, set[str]] = {}
    for a, b in pairs:
        succ.setdefault(a, set()).add(b)
    trans = all((a, c) in pairs for a, b in pairs for c in succ.get(b, ()))
    return Order(pairs, True, antisym, trans)


# -- totalisation -----------------------------------------------------------


@dataclass(frozen=True)
class TotalAlgebra:
    """Totalisation: every undefined entry and every entry touching ``inf`` is ``inf``."""

    carrier: tuple[str, ...]
    inf: str
    signature: Signature
    tables: tuple[tuple[str, frozenset[Triple]], ...] = field(default=())
    zero: str | None = None

    @cached_property
    def _maps(self) -> dict[str, dict[tuple[str, str], str]]:
        return {name: {(a, b): c for a, b, c in ts} for name, ts in self.tables}

    def table(self, name: str) -> dict[tuple[str, str], str]:
        return self._maps[name]

    def op(self, name: str, a: str, b: str) -> str:
        return self._maps[name][(a, b)]


def fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    name = base
    while name in taken:
        name += "'"
    return name


def totalise(alg: PartialAlgebra) -> TotalAlgebra:
    inf = fresh_name("inf", alg.carrier)
    full = alg.carrier + (inf,)
    tables = []
    for name in alg.signature.operations:
        tab = alg.table(name)
        triples = frozenset(
            (a, b, tab.get((a, b), inf) if a != inf and b != inf else inf)
            for a in full for b in full
        )
        tables.append((name, triples))
    return TotalAlgebra(full, inf, alg.signature, tuple(tables), alg.zero)


def detotalise(talg: TotalAlgebra) -> PartialAlgebra:
    inf = talg.inf
    if inf not in talg.carrier:
        raise AlgebraError("inf is not in the carrier")
    carrier = tuple(x for x in talg.carrier if x != inf)
    ops: dict[str, frozenset[Triple]] = {}
    for name, _ in talg.tables:
        tab = talg.table(name)
        for a in talg.carrier:
            for b in talg.carrier:
                if (a, b) not in tab:
                    raise AlgebraError(f"total table {name} has no entry at ({a},{b})")
                if (a == inf or b == inf) and tab[(a, b)] != inf:
                    raise AlgebraError(f"{name} does not absorb inf at ({a},{b})")
        triples = frozenset(
            (a, b, c) for (a, b), c in tab.items() if a != inf and b != inf and c != inf
        )
        if name in TOTAL_OPERATIONS and len(triples) != len(carrier) ** 2:
            raise AlgebraError(f"{name} must stay total off inf")
        ops[name] = triples
    return PartialAlgebra(
        carrier,
        talg.signature,
        ops.get("join", frozenset()),
        ops.get("minus", frozenset()),
        ops.get("meet", frozenset()),
        ops.get("comp", frozenset()),
        talg.zero,
    )


def partial_subalgebras(alg: PartialAlgebra, max_count: int | None = None):
    """Yield every partial-subalgebra (closed subset) in subset-bitmask order."""
    n = len(alg.carrier)
    produced = 0
    for mask in range(1 << n):
        subset = [alg.carrier[i] for i in range(n) if mask >> i & 1]
        if alg.is_closed(subset):
            yield alg.restrict(subset)
            produced += 1
            if max_count is not None and produced >= max_count:
                return
