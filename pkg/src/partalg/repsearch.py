"""Deciding representability by sets through a search for point types.

A point type is a subset U of the carrier that could be the set of
elements containing some fixed base point.  Each operation contributes
clauses (at most three literals) that U must satisfy; the algebra is
representable exactly when enough point types exist to separate every pair
of elements and to witness every undefined operation instance.  Each
witness is found by a deterministic DPLL search over those clauses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

from .algebra import AlgebraError, PartialAlgebra, check_valid, lesssim
from .io import PFRepresentation, SetRepresentation

DEFAULT_CAP = 10**8

# A literal is (element index, polarity).  Clauses keep a label for reporting.
Literal = tuple[int, bool]


@dataclass(frozen=True)
class Clause:
    literals: tuple[Literal, ...]
    label: str


def point_clauses(alg: PartialAlgebra) -> list[Clause]:
    """All clauses a point type must satisfy, in reporting order."""
    idx = alg.index
    order = lambda item: (idx[item[0][0]], idx[item[0][1]])  # noqa: E731
    out: list[Clause] = []
    sig = alg.signature
    if sig.has_join:
        for (a, b), c in sorted(alg.table("join").items(), key=order):
            i, j, k = idx[a], idx[b], idx[c]
            out.append(Clause(((k, False), (i, True), (j, True)), f"join-prime: {a}+{b}={c}"))
            out.append(Clause(((i, False), (k, True)), f"bi-closed: {a}+{b}={c}"))
            out.append(Clause(((j, False), (k, True)), f"bi-closed: {a}+{b}={c}"))
            neg = ((i, False),) if i == j else ((i, False), (j, False))
            out.append(Clause(neg, f"pairwise incombinable: {a}+{b} defined"))
    if sig.has_minus:
        for (a, b), c in sorted(alg.table("minus").items(), key=order):
            i, j, k = idx[a], idx[b], idx[c]
            label = f"minus: {a}-{b}={c}"
            out.append(Clause(((i, False), (j, True), (k, True)), label))
            out.append(Clause(((j, False), (i, True)), label))
            out.append(Clause(((k, False), (i, True)), label))
            out.append(Clause(((j, False),) if j == k else ((j, False), (k, False)), label))
    if sig.has_meet:
        for (a, b), c in sorted(alg.table("meet").items(), key=order):
            i, j, k = idx[a], idx[b], idx[c]
            label = f"meet: {a}.{b}={c}"
            out.append(Clause(((k, False), (i, True)), label))
            out.append(Clause(((k, False), (j, True)), label))
            out.append(Clause(((i, False), (j, False), (k, True)), label))
    if sig.has_zero:
        out.append(Clause(((idx[alg.zero], False),), f"zero {alg.zero} excluded"))
    return out


@dataclass(frozen=True)
class PointCheck:
    ok: bool
    violated: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_point_type(alg: PartialAlgebra, members: Iterable[str]) -> PointCheck:
    members = set(members)
    stray = members - set(alg.carrier)
    if stray:
        raise AlgebraError(f"point type mentions {sorted(stray)[0]!r}, not in the carrier")
    inside = [x in members for x in alg.carrier]
    for clause in point_clauses(alg):
        if not any(inside[v] == pol for v, pol in clause.literals):
            return PointCheck(False, clause.label)
    return PointCheck(True)


# -- requirements -------------------------------------------------------------


@dataclass(frozen=True)
class Requirement:
    """A pair of elements and what a witnessing point type must do with them."""

    kind: str  # "separate", "join-undefined" or "minus-undefined"
    a: str
    b: str
    assumptions: tuple[tuple[Literal, ...], ...]

    def describe(self) -> str:
        if self.kind == "separate":
            return f"separate {self.a} and {self.b}"
        if self.kind == "join-undefined":
            return f"witness {self.a}+{self.b} undefined"
        return f"witness {self.a}-{self.b} undefined"


def requirements(alg: PartialAlgebra) -> list[Requirement]:
    idx = alg.index
    c = alg.carrier
    out = []
    for i, j in itertools.combinations(range(len(c)), 2):
        out.append(Requirement("separate", c[i], c[j], (((i, True), (j, False)), ((j, True), (i, False)))))
    if alg.signature.has_join:
        join = alg.table("join")
        for i, j in itertools.combinations_with_replacement(range(len(c)), 2):
            if (c[i], c[j]) not in join or (c[j], c[i]) not in join:
                out.append(Requirement("join-undefined", c[i], c[j], (((i, True), (j, True)),)))
    if alg.signature.has_minus:
        minus = alg.table("minus")
        for a in c:
            for b in c:
                if (a, b) not in minus:
                    out.append(Requirement(
                        "minus-undefined", a, b, (((idx[b], True), (idx[a], False)),),
                    ))
    return out


def _satisfies(point: frozenset[int], assumption: tuple[Literal, ...]) -> bool:
    return all((v in point) == pol for v, pol in assumption)


# -- DPLL ---------------------------------------------------------------------


class _CapExceeded(Exception):
    pass


class PointSearch:
    """Backtracking search for a point type extending given assumptions.

    Variables are decided in carrier order, "in" before "out".  Each
    decision counts as one node against a shared budget.
    """

    def __init__(self, n: int, clauses: list[Clause], cap: int):
        self.n = n
        self.clauses = [c.literals for c in clauses]
        self.occurs: list[list[int]] = [[] for _ in range(n)]
        for ci, lits in enumerate(self.clauses):
            for v in {v for v, _ in lits}:
                self.occurs[v].append(ci)
        self.cap = cap
        self.nodes = 0

    def _assign(self, val, trail, v, pol) -> bool:
        """Set v := pol and propagate; return False on conflict."""
        queue = [(v, pol)]
        while queue:
            v, pol = queue.pop()
            cur = val[v]
            if cur is not None:
                if cur != pol:
                    return False
                continue
            val[v] = pol
            trail.append(v)
            for ci in self.occurs[v]:
                free = None
                nfree = 0
                sat = False
                for u, p in self.clauses[ci]:
                    x = val[u]
                    if x is None:
                        if free != (u, p):
                            nfree += 1
                            free = (u, p)
                    elif x == p:
                        sat = True
                        break
                if sat:
                    continue
                if nfree == 0:
                    return False
                if nfree == 1:
                    queue.append(free)
        return True

    def _undo(self, val, trail, mark):
        while len(trail) > mark:
            val[trail.pop()] = None

    def find(self, assumption: tuple[Literal, ...]) -> frozenset[int] | None:
        val: list[bool | None] = [None] * self.n
        trail: list[int] = []
        for lits in self.clauses:
            if len(lits) == 1 and not self._assign(val, trail, *lits[0]):
                return None
        for v, pol in assumption:
            if not self._assign(val, trail, v, pol):
                return None
        # a clause whose variables are all already fixed still needs checking
        for lits in self.clauses:
            if all(val[u] is not None for u, _ in lits) and not any(val[u] == p for u, p in lits):
                return None
        return self._search(val, trail, 0)

    def _search(self, val, trail, start) -> frozenset[int] | None:
        v = start
        while v < self.n and val[v] is not None:
            v += 1
        if v == self.n:
            return frozenset(u for u in range(self.n) if val[u])
        for pol in (True, False):
            self.nodes += 1
            if self.nodes > self.cap:
                raise _CapExceeded
            mark = len(trail)
            if self._assign(val, trail, v, pol):
                found = self._search(val, trail, v + 1)
                if found is not None:
                    return found
            self._undo(val, trail, mark)
        return None


# -- results ------------------------------------------------------------------


@dataclass(frozen=True)
class RepCertificate:
    point_types: tuple[frozenset[str], ...]
    separators: dict[tuple[str, str], int] = field(default_factory=dict)
    join_witnesses: dict[tuple[str, str], int] = field(default_factory=dict)
    minus_witnesses: dict[tuple[str, str], int] = field(default_factory=dict)
    nodes: int = 0

    @property
    def representable(self) -> bool:
        return True


@dataclass(frozen=True)
class Refutation:
    requirement: str
    nodes: int
    reason: str = "point-type search exhausted"

    @property
    def representable(self) -> bool:
        return False


@dataclass(frozen=True)
class Inconclusive:
    requirement: str
    nodes: int
    cap: int

    representable = None


def decide_representable(
    alg: PartialAlgebra,
    cap: int = DEFAULT_CAP,
    allow_degenerate: bool = False,
    via_zero: bool = False,
) -> RepCertificate | Refutation | Inconclusive:
    """Search for a certificate of representability by sets.

    ``via_zero`` routes zero signatures through the zero-law reduction
    (strip zero, decide the rest, then check 0+0=0 or 0-0=0).
    """
    check_valid(alg, allow_degenerate)
    if via_zero and alg.signature.has_zero:
        return add_zero_reduction(alg, cap=cap)
    n = len(alg.carrier)
    search = PointSearch(n, point_clauses(alg), cap)
    points: list[frozenset[int]] = []
    witness = {"separate": {}, "join-undefined": {}, "minus-undefined": {}}
    c = alg.carrier
    for req in requirements(alg):
        chosen = None
        for pi, p in enumerate(points):
            if any(_satisfies(p, a) for a in req.assumptions):
                chosen = pi
                break
        if chosen is None:
            try:
                for assumption in req.assumptions:
                    found = search.find(assumption)
                    if found is not None:
                        points.append(found)
                        chosen = len(points) - 1
                        break
            except _CapExceeded:
                return Inconclusive(req.describe(), search.nodes, cap)
        if chosen is None:
            return Refutation(req.describe(), search.nodes)
        witness[req.kind][(req.a, req.b)] = chosen
    return RepCertificate(
        tuple(frozenset(c[i] for i in p) for p in points),
        witness["separate"],
        witness["join-undefined"],
        witness["minus-undefined"],
        search.nodes,
    )


def check_certificate(alg: PartialAlgebra, cert: RepCertificate) -> list[str]:
    """Independently re-check every point type and every witness."""
    problems = []
    for i, p in enumerate(cert.point_types):
        try:
            res = check_point_type(alg, p)
        except AlgebraError as exc:
            problems.append(f"point type {i}: {exc}")
            continue
        if not res:
            problems.append(f"point type {i} violates {res.violated}")
    if problems:
        return problems
    table = {
        "separate": cert.separators,
        "join-undefined": cert.join_witnesses,
        "minus-undefined": cert.minus_witnesses,
    }
    idx = alg.index
    for req in requirements(alg):
        pi = table[req.kind].get((req.a, req.b))
        if pi is None or not 0 <= pi < len(cert.point_types):
            problems.append(f"missing witness: {req.describe()}")
            continue
        p = frozenset(idx[x] for x in cert.point_types[pi])
        if not any(_satisfies(p, a) for a in req.assumptions):
            problems.append(f"point type {pi} does not {req.describe()}")
    n = len(alg.carrier)
    if len(cert.point_types) > 2 * n * n:
        problems.append(f"{len(cert.point_types)} point types exceed 2|A|^2 = {2 * n * n}")
    return problems


def build_representation(alg: PartialAlgebra, cert: RepCertificate) -> SetRepresentation:
    problems = check_certificate(alg, cert)
    if problems:
        raise AlgebraError(f"invalid certificate: {problems[0]}")
    base = tuple(f"p{i}" for i in range(len(cert.point_types)))
    assignment = {
        a: frozenset(base[i] for i, p in enumerate(cert.point_types) if a in p)
        for a in alg.carrier
    }
    return SetRepresentation(base, assignment)


# -- verification ---------------------------------------------------------------


def _check_assignment(alg: PartialAlgebra, base, assignment) -> list[str]:
    problems = []
    missing = [a for a in alg.carrier if a not in assignment]
    if missing:
        problems.append(f"no image for {missing[0]}")
    extra = [a for a in assignment if a not in alg.index]
    if extra:
        problems.append(f"image given for {extra[0]}, not in the carrier")
    return problems


def verify_representation(alg: PartialAlgebra, rep: SetRepresentation) -> list[str]:
    """Exhaustive check that ``rep`` is a representation by sets; empty means it is."""
    problems = _check_assignment(alg, rep.base, rep.assignment)
    if problems:
        return problems
    img = rep.assignment
    base = set(rep.base)
    for a in alg.carrier:
        if not img[a] <= base:
            problems.append(f"image of {a} leaves the base")
    seen: dict[frozenset, str] = {}
    for a in alg.carrier:
        if img[a] in seen:
            problems.append(f"not faithful: {seen[img[a]]} and {a} share an image")
        seen.setdefault(img[a], a)
    sig = alg.signature
    for a in alg.carrier:
        for b in alg.carrier:
            x, y = img[a], img[b]
            if sig.has_join:
                c = alg.op("join", a, b)
                if (c is not None) != (not (x & y)):
                    what = "defined" if c is not None else "undefined"
                    problems.append(f"join {a}+{b} is {what} but images {'meet' if x & y else 'are disjoint'}")
                elif c is not None and img[c] != x | y:
                    problems.append(f"join {a}+{b}={c} not sent to the union")
            if sig.has_minus:
                c = alg.op("minus", a, b)
                if (c is not None) != (y <= x):
                    what = "defined" if c is not None else "undefined"
                    problems.append(f"minus {a}-{b} is {what} but inclusion {'holds' if y <= x else 'fails'}")
                elif c is not None and img[c] != x - y:
                    problems.append(f"minus {a}-{b}={c} not sent to the difference")
            if sig.has_meet:
                c = alg.op("meet", a, b)
                if img[c] != x & y:
                    problems.append(f"meet {a}.{b}={c} not sent to the intersection")
    if sig.has_zero and img[alg.zero]:
        problems.append(f"zero {alg.zero} not sent to the empty set")
    return problems


def to_pf_representation(alg: PartialAlgebra, rep: SetRepresentation) -> PFRepresentation:
    """Sets to partial functions: identity pieces, or graphs into a fresh copy when comp is present."""
    if alg.signature.has_comp:
        for (a, b), c in alg.table("comp").items():
            if c != alg.zero:
                raise AlgebraError(f"comp {a};{b}={c} is not the constant zero")
        taken = set(rep.base)
        copy = {}
        for p in rep.base:
            q = p + "'"
            while q in taken:
                q += "'"
            taken.add(q)
            copy[p] = q
        base = rep.base + tuple(copy[p] for p in rep.base)
        assignment = {a: frozenset((x, copy[x]) for x in v) for a, v in rep.assignment.items()}
        return PFRepresentation(base, assignment)
    assignment = {a: frozenset((x, x) for x in v) for a, v in rep.assignment.items()}
    return PFRepresentation(rep.base, assignment)


def _compose(f: frozenset, g: frozenset) -> frozenset:
    """Diagrammatic composition: first f, then g."""
    gmap: dict = {}
    for x, y in g:
        gmap.setdefault(x, []).append(y)
    return frozenset((x, z) for x, y in f for z in gmap.get(y, ()))


def verify_pf_representation(alg: PartialAlgebra, rep: PFRepresentation) -> list[str]:
    problems = _check_assignment(alg, rep.base, rep.assignment)
    if problems:
        return problems
    img = rep.assignment
    base = set(rep.base)
    dom = {}
    for a in alg.carrier:
        f = img[a]
        if {x for pair in f for x in pair} - base:
            problems.append(f"image of {a} leaves the base")
        ds = [x for x, _ in f]
        if len(ds) != len(set(ds)):
            problems.append(f"image of {a} is not a function")
        dom[a] = frozenset(ds)
    seen: dict[frozenset, str] = {}
    for a in alg.carrier:
        if img[a] in seen:
            problems.append(f"not faithful: {seen[img[a]]} and {a} share an image")
        seen.setdefault(img[a], a)
    sig = alg.signature
    for a in alg.carrier:
        for b in alg.carrier:
            f, g = img[a], img[b]
            if sig.has_join:
                c = alg.op("join", a, b)
                if (c is not None) != (not (dom[a] & dom[b])):
                    problems.append(f"join {a}+{b}: definedness does not match domain disjointness")
                elif c is not None and img[c] != f | g:
                    problems.append(f"join {a}+{b}={c} not sent to the union")
            if sig.has_minus:
                c = alg.op("minus", a, b)
                if (c is not None) != (g <= f):
                    problems.append(f"minus {a}-{b}: definedness does not match inclusion")
                elif c is not None and img[c] != f - g:
                    problems.append(f"minus {a}-{b}={c} not sent to the difference")
            if sig.has_meet and img[alg.op("meet", a, b)] != f & g:
                problems.append(f"meet {a}.{b} not sent to the intersection")
            if sig.has_comp and img[alg.op("comp", a, b)] != _compose(f, g):
                problems.append(f"comp {a};{b} not sent to the composite")
    if sig.has_zero and img[alg.zero]:
        problems.append(f"zero {alg.zero} not sent to the empty function")
    return problems


def verify_lesssim_complete(
    alg: PartialAlgebra, rep: SetRepresentation, cap: int = 6, kind: str = "join"
) -> list[str]:
    """Check that suprema of small pairwise-combinable sets go to unions."""
    if cap < 2:
        raise AlgebraError("subset-size cap must be at least 2")
    order = lesssim(alg, kind)
    c = alg.carrier
    n = len(c)
    if kind == "join":
        join = alg.table("join")
        combinable = lambda s, t: (s, t) in join and (t, s) in join  # noqa: E731
    else:
        minus_results = {(b, r) for (_, b), r in alg.table("minus").items()}
        combinable = lambda s, t: (s, t) in minus_results and (t, s) in minus_results  # noqa: E731
    nbr = [{j for j in range(n) if j != i and combinable(c[i], c[j])} for i in range(n)]
    up = [{j for j in range(n) if order.le(c[i], c[j])} for i in range(n)]
    problems = []

    def check(members: list[int]):
        bounds = set.intersection(*(up[i] for i in members))
        sups = [u for u in bounds if all(order.le(c[u], c[b]) for b in bounds)]
        union = frozenset().union(*(rep.assignment[c[i]] for i in members))
        for u in sups:
            if rep.assignment[c[u]] != union:
                names = ",".join(c[i] for i in members)
                problems.append(f"supremum {c[u]} of {{{names}}} not sent to the union")

    def grow(members: list[int], cands: set[int]):
        check(members)
        if len(members) == cap:
            return
        for j in sorted(cands):
            if j > members[-1]:
                grow(members + [j], cands & nbr[j])

    for i in range(n):
        grow([i], nbr[i])
    return problems


# -- zero reduction -------------------------------------------------------------


def strip_zero(alg: PartialAlgebra) -> tuple[PartialAlgebra, bool]:
    """Drop zero from the signature; report whether the zero law holds."""
    if not alg.signature.has_zero:
        raise AlgebraError("strip_zero needs zero in the signature")
    if alg.signature.has_comp:
        raise AlgebraError("cannot strip zero while comp depends on it")
    z = alg.zero
    law = True
    if alg.signature.has_join:
        law = law and alg.op("join", z, z) == z
    if alg.signature.has_minus:
        law = law and alg.op("minus", z, z) == z
    keep = [s for s in alg.signature.symbols if s != "zero"]
    return alg.reduct(*keep), law


def add_zero_reduction(alg: PartialAlgebra, cap: int = DEFAULT_CAP):
    """Decide a zero signature through its zero-free reduct.

    Only meaningful when join or minus is present: then the zero law forces
    the image of zero to be empty.
    """
    sig = alg.signature
    if not (sig.has_join or sig.has_minus):
        raise AlgebraError("zero reduction needs join or minus in the signature")
    reduct, law = strip_zero(alg)
    if not law:
        return Refutation("zero law", 0, "zero law 0+0=0 (or 0-0=0) fails")
    result = decide_representable(reduct, cap=cap)
    if not isinstance(result, RepCertificate):
        return result
    # with the zero law in force, no point type of the reduct contains zero,
    # so the reduct certificate already certifies the full algebra
    assert not any(alg.zero in p for p in result.point_types)
    return result
