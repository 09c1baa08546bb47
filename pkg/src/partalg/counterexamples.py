"""Axial-set algebras X(m,n), their quotients A(m,n), and related expansions."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .algebra import AlgebraError, Congruence, PartialAlgebra, quotient, validate
from .io import SetRepresentation
from .repsearch import RepCertificate, verify_representation

PERM_CAP = 6


@dataclass(frozen=True, order=True)
class AxialSet:
    """{line} x cross (vertical) or cross x {line} (horizontal), in canonical form.

    The empty set is the vertical set with line 0 and empty cross; a
    singleton is always stored vertically.
    """

    axis: str
    line: int
    cross: frozenset[int]

    @classmethod
    def make(cls, axis: str, line: int, cross) -> AxialSet:
        cross = frozenset(cross)
        if not cross:
            return cls("v", 0, frozenset())
        if axis == "h" and len(cross) == 1:
            (i,) = cross
            return cls("v", i, frozenset({line}))
        return cls(axis, line, cross)

    @property
    def cells(self) -> frozenset[tuple[int, int]]:
        if self.axis == "v":
            return frozenset((self.line, j) for j in self.cross)
        return frozenset((i, self.line) for i in self.cross)

    @property
    def name(self) -> str:
        if not self.cross:
            return "0"
        inner = "".join(str(x) for x in sorted(self.cross))
        return f"v{self.line}:{inner}" if self.axis == "v" else f"h{self.line}:{inner}"


def axial_sets(m: int, n: int) -> list[AxialSet]:
    out = {AxialSet.make("v", 0, ())}
    for i in range(m):
        for r in range(1, n + 1):
            for J in itertools.combinations(range(n), r):
                out.add(AxialSet.make("v", i, J))
    for j in range(n):
        for r in range(2, m + 1):
            for I in itertools.combinations(range(m), r):
                out.add(AxialSet.make("h", j, I))
    return sorted(out, key=lambda s: (s.axis != "v", len(s.cross), s.line, sorted(s.cross)))


def _from_cells(cells: frozenset[tuple[int, int]]) -> AxialSet | None:
    if not cells:
        return AxialSet.make("v", 0, ())
    rows = {i for i, _ in cells}
    cols = {j for _, j in cells}
    if len(rows) == 1:
        return AxialSet.make("v", next(iter(rows)), cols)
    if len(cols) == 1:
        return AxialSet.make("h", next(iter(cols)), rows)
    return None


def _need_size(m: int, n: int) -> None:
    if m < 3 or n < 3:
        raise AlgebraError("the axial-set construction needs m, n >= 3")


def gen_X(m: int, n: int) -> PartialAlgebra:
    """Axial subsets of m x n under union of disjoint sets whose union is axial."""
    _need_size(m, n)
    sets = axial_sets(m, n)
    join = []
    for s in sets:
        for t in sets:
            if s.cells & t.cells:
                continue
            u = _from_cells(s.cells | t.cells)
            if u is not None:
                join.append((s.name, t.name, u.name))
    return PartialAlgebra.make([s.name for s in sets], ("join", "zero"), join=join, zero="0")


def gen_sim(m: int, n: int) -> Congruence:
    """Glue all full lines together, and {i} x (n-{j}) with (m-{i}) x {j}."""
    _need_size(m, n)
    sets = axial_sets(m, n)
    names = [s.name for s in sets]
    parent = {x: x for x in names}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx

    rows, cols = range(m), range(n)
    full = AxialSet.make("v", 0, cols).name
    for i in rows:
        union(full, AxialSet.make("v", i, cols).name)
    for j in cols:
        union(full, AxialSet.make("h", j, rows).name)
    for i in rows:
        for j in cols:
            union(
                AxialSet.make("v", i, set(cols) - {j}).name,
                AxialSet.make("h", j, set(rows) - {i}).name,
            )
    blocks: dict[str, list[str]] = {}
    for x in names:
        blocks.setdefault(find(x), []).append(x)
    return Congruence(tuple(tuple(b) for b in sorted(blocks.values(), key=lambda b: names.index(b[0]))))


def gen_A(m: int, n: int) -> PartialAlgebra:
    return quotient(gen_X(m, n), gen_sim(m, n))


def x_certificate(m: int, n: int) -> RepCertificate:
    """Point types of X(m,n) made from pairs of cells: sets containing either cell.

    The two cells are equal or share neither a row nor a column; otherwise
    two disjoint sets on their common line would have a defined join.
    """
    alg = gen_X(m, n)
    sets = axial_sets(m, n)
    cells = [(i, j) for i in range(m) for j in range(n)]
    points = []
    for p, q in itertools.combinations_with_replacement(cells, 2):
        if p != q and (p[0] == q[0] or p[1] == q[1]):
            continue
        members = frozenset(s.name for s in sets if p in s.cells or q in s.cells)
        if members not in points:
            points.append(members)
    seps, joins = {}, {}
    for a, b in itertools.combinations(alg.carrier, 2):
        for k, u in enumerate(points):
            if (a in u) != (b in u):
                seps[(a, b)] = k
                break
    table = alg.table("join")
    for a, b in itertools.combinations_with_replacement(alg.carrier, 2):
        if (a, b) in table and (b, a) in table:
            continue
        for k, u in enumerate(points):
            if a in u and b in u:
                joins[(a, b)] = k
                break
    return RepCertificate(tuple(points), seps, joins, {})


def expand_minus_via_abc(alg: PartialAlgebra) -> PartialAlgebra:
    """Add minus by a - b = c iff b + c = a; c must be unique."""
    if not alg.signature.has_join:
        raise AlgebraError("expanding by minus needs join")
    found: dict[tuple[str, str], str] = {}
    for (b, c), a in sorted(alg.table("join").items(), key=lambda t: (alg.index[t[0][0]], alg.index[t[0][1]])):
        if (a, b) in found and found[(a, b)] != c:
            raise AlgebraError(
                f"minus not single-valued: {a}-{b} could be {found[(a, b)]} or {c}"
            )
        found[(a, b)] = c
    return PartialAlgebra.make(
        alg.carrier, alg.signature.with_symbols("minus"),
        join=alg.join, minus=[(a, b, c) for (a, b), c in found.items()],
        meet=alg.meet, comp=alg.comp, zero=alg.zero,
    )


def expand_join_via_abc(alg: PartialAlgebra) -> PartialAlgebra:
    """Add join by b + c = a iff a - b = c; the sum must be unique."""
    if not alg.signature.has_minus:
        raise AlgebraError("expanding by join needs minus")
    found: dict[tuple[str, str], str] = {}
    for (a, b), c in alg.table("minus").items():
        if (b, c) in found and found[(b, c)] != a:
            raise AlgebraError(f"join not single-valued: {b}+{c} could be {found[(b, c)]} or {a}")
        found[(b, c)] = a
    return PartialAlgebra.make(
        alg.carrier, alg.signature.with_symbols("join"),
        join=[(b, c, a) for (b, c), a in found.items()], minus=alg.minus,
        meet=alg.meet, comp=alg.comp, zero=alg.zero,
    )


def expand_comp_zero(alg: PartialAlgebra) -> PartialAlgebra:
    if not alg.signature.has_zero:
        raise AlgebraError("constant-zero composition needs zero in the signature")
    comp = [(a, b, alg.zero) for a in alg.carrier for b in alg.carrier]
    return PartialAlgebra.make(
        alg.carrier, alg.signature.with_symbols("comp"),
        join=alg.join, minus=alg.minus, meet=alg.meet, comp=comp, zero=alg.zero,
    )


def gen_A_minus(m: int, n: int) -> PartialAlgebra:
    return expand_minus_via_abc(gen_A(m, n))


def gen_B(m: int, n: int) -> PartialAlgebra:
    return expand_comp_zero(gen_A(m, n))


def perm_representation(n: int, cap: int = PERM_CAP) -> SetRepresentation:
    """Represent A(n,n) over the n! permutations of n.

    {i} x J goes to the permutations sending i into J; I x {j} to those
    sending some member of I to j.
    """
    if n < 3:
        raise AlgebraError("perm_representation needs n >= 3")
    if n > cap:
        raise AlgebraError(f"n = {n} gives {math.factorial(n)} base points; raise the cap to allow it")
    sim = gen_sim(n, n)
    perms = list(itertools.permutations(range(n)))
    base = tuple("s" + "".join(str(x) for x in p) for p in perms)
    by_name = {s.name: s for s in axial_sets(n, n)}
    assignment = {}
    for block in sim.partition:
        s = by_name[block[0]]
        if s.axis == "v":
            image = {base[k] for k, p in enumerate(perms) if p[s.line] in s.cross}
        else:
            image = {base[k] for k, p in enumerate(perms) if p.index(s.line) in s.cross}
        assignment[block[0]] = frozenset(image)
    return SetRepresentation(base, assignment)


# -- complemented algebras --------------------------------------------------------


def abc_violations(alg: PartialAlgebra) -> list[tuple[str, str, str]]:
    """Triples where a - b = c and b + c = a disagree."""
    minus = alg.minus
    join_as_minus = {(a, b, c) for b, c, a in alg.join}
    return sorted(minus ^ join_as_minus)


def is_complemented(alg: PartialAlgebra) -> str | None:
    """The unique top 1 with 1 - a always defined, or None."""
    sig = alg.signature
    if not (sig.has_join and sig.has_minus):
        raise AlgebraError("complementation needs both join and minus")
    bad = abc_violations(alg)
    if bad:
        a, b, c = bad[0]
        raise AlgebraError(f"a-b=c iff b+c=a fails at ({a},{b},{c})")
    minus = alg.table("minus")
    tops = [t for t in alg.carrier if all((t, a) in minus for a in alg.carrier)]
    return tops[0] if len(tops) == 1 else None


@dataclass(frozen=True)
class CounterpartReport:
    top: str | None
    join_problems: tuple[str, ...]
    minus_problems: tuple[str, ...]

    @property
    def join_ok(self) -> bool:
        return not self.join_problems

    @property
    def minus_ok(self) -> bool:
        return not self.minus_problems

    @property
    def agree(self) -> bool:
        return self.join_ok == self.minus_ok


def derive_counterpart_checks(alg: PartialAlgebra, rep: SetRepresentation) -> CounterpartReport:
    """Verify ``rep`` for the join reduct and for the minus reduct separately."""
    top = is_complemented(alg)
    if top is None:
        raise AlgebraError("algebra is not complemented")
    keep = [s for s in alg.signature.symbols if s not in ("minus", "comp")]
    join_side = alg.reduct(*keep)
    keep = [s for s in alg.signature.symbols if s not in ("join", "comp")]
    minus_side = alg.reduct(*keep)
    return CounterpartReport(
        top,
        tuple(verify_representation(join_side, rep)),
        tuple(verify_representation(minus_side, rep)),
    )


def check_generated(alg: PartialAlgebra) -> None:
    problems = validate(alg)
    if problems:
        raise AlgebraError(f"generator produced an invalid algebra: {problems[0]}")
