"""Finite axiom suites for signatures with intersection, prime filters and the filter representation.

A filter is a nonempty set F of elements with a.b in F iff a in F and b in F.
Elements are represented by the proper prime filters containing them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .algebra import AlgebraError, PartialAlgebra, Signature, check_valid
from .games.formula import Evaluator, Forall, Formula, as_structure, parse_formula
from .io import SetRepresentation

FILTER_CAP = 20

# (name, formula) per axiom; formulas are closed
_SEMILATTICE = (
    ("meet is commutative", "forall a,b. (a . b = b . a)"),
    ("meet is associative", "forall a,b,c. ((a . b) . c = a . (b . c))"),
    ("meet is idempotent", "forall a. (a . a = a)"),
)
_JOIN_CORE = (
    ("join is single valued", "forall a,b,c,d. (J(a,b,c) & J(a,b,d) -> c = d)"),
    ("join is commutative", "forall a,b,c. (J(a,b,c) -> J(b,a,c))"),
) + _SEMILATTICE + (
    ("meet distributes over join", "forall a,b,c,d. (J(b,c,d) -> J(a . b, a . c, a . d))"),
)
_JOIN_ZERO = (
    ("zero is identity for join", "forall a. J(a,0,a)"),
    ("domain of join", "forall a,b. ((exists c. J(a,b,c)) <-> a . b = 0)"),
)
_JOIN_NO_ZERO = (
    ("zero-like element or join nowhere defined",
     "(exists z. ((forall a. J(a,z,a)) & (forall a,b. (a . b = z <-> (exists c. J(a,b,c))))))"
     " | (forall a,b,c. ~J(a,b,c))"),
)
_MINUS_CORE = (
    ("minus is single valued", "forall a,b,c,d. (K(a,b,c) & K(a,b,d) -> c = d)"),
    ("minus is left injective", "forall a,b,c,d. (K(a,b,c) & K(d,b,c) -> a = d)"),
    ("minus is subtractive", "forall a,b,c. (K(a,b,c) <-> K(a,c,b))"),
) + _SEMILATTICE + (
    ("meet distributes over minus", "forall a,b,c,d. (K(b,c,d) -> K(a . b, a . c, a . d))"),
)
_MINUS_ZERO = (
    ("zero is identity for minus", "forall a. K(a,0,a)"),
)
_MINUS_DOMAIN = (
    ("domain of minus", "forall a,b. ((exists c. K(a,b,c)) <-> a . b = b)"),
)
_MINUS_NO_ZERO = (
    ("empty or zero-like element", "(~(exists a. T)) | (exists z. (forall a. K(a,z,a)))"),
)
_JK_LINK = (
    ("minus defined below", "forall a,b. (a . b = b -> (exists c. K(a,b,c)))"),
    ("minus inverts join", "forall a,b,c. (K(a,b,c) <-> J(b,c,a))"),
)

_SUITES = {
    "AxJMeetZero": (("join", "meet", "zero"), "join", _JOIN_CORE + _JOIN_ZERO),
    "AxJMeet": (("join", "meet"), "join", _JOIN_CORE + _JOIN_NO_ZERO),
    "AxKMeetZero": (("minus", "meet", "zero"), "minus", _MINUS_CORE + _MINUS_ZERO + _MINUS_DOMAIN),
    "AxKMeet": (("minus", "meet"), "minus", _MINUS_CORE + _MINUS_NO_ZERO + _MINUS_DOMAIN),
    "AxJKMeetZero": (("join", "minus", "meet", "zero"), "join", _JOIN_CORE + _JOIN_ZERO + _JK_LINK),
    "AxJKMeet": (("join", "minus", "meet"), "join", _JOIN_CORE + _JOIN_NO_ZERO + _JK_LINK),
}

SUITE_IDS = tuple(_SUITES)


@dataclass(frozen=True)
class Axiom:
    name: str
    formula: Formula


@dataclass(frozen=True)
class AxiomSuite:
    id: str
    signature: Signature
    kind: str  # which primeness the filter construction uses: "join" or "minus"
    axioms: tuple[Axiom, ...]


def axiom_suite(suite_id: str) -> AxiomSuite:
    if suite_id not in _SUITES:
        raise AlgebraError(f"unknown axiom suite {suite_id!r}; expected one of {', '.join(SUITE_IDS)}")
    symbols, kind, axioms = _SUITES[suite_id]
    return AxiomSuite(
        suite_id,
        Signature.from_symbols(symbols),
        kind,
        tuple(Axiom(name, parse_formula(text)) for name, text in axioms),
    )


def suite_for(signature: Signature) -> str:
    """The suite whose signature is exactly ``signature``."""
    for sid, (symbols, _, _) in _SUITES.items():
        if set(symbols) == set(signature.symbols):
            return sid
    raise AlgebraError(f"no axiom suite for signature ({', '.join(signature.symbols)})")


@dataclass(frozen=True)
class AxiomViolation:
    suite: str
    axiom: str
    assignment: dict[str, str]

    def describe(self) -> str:
        if not self.assignment:
            return f"{self.suite}: {self.axiom} fails"
        where = ", ".join(f"{v}={x}" for v, x in sorted(self.assignment.items()))
        return f"{self.suite}: {self.axiom} fails at {where}"


def _resolve(suite) -> AxiomSuite:
    return suite if isinstance(suite, AxiomSuite) else axiom_suite(suite)


def check_axioms(alg: PartialAlgebra, suite) -> list[AxiomViolation]:
    """Every failing axiom, with the first falsifying assignment of its outer universal variables."""
    suite = _resolve(suite)
    check_valid(alg)
    if set(alg.signature.symbols) != set(suite.signature.symbols):
        raise AlgebraError(
            f"suite {suite.id} is for ({', '.join(suite.signature.symbols)}), "
            f"the algebra has ({', '.join(alg.signature.symbols)})"
        )
    ev = Evaluator(as_structure(alg))
    names = alg.carrier
    out = []
    for ax in suite.axioms:
        f = ax.formula
        if not isinstance(f, Forall):
            if not ev.eval(f, {}):
                out.append(AxiomViolation(suite.id, ax.name, {}))
            continue
        for values in itertools.product(range(len(names)), repeat=len(f.vars)):
            if not ev.eval(f.body, dict(zip(f.vars, values))):
                out.append(AxiomViolation(suite.id, ax.name, {v: names[x] for v, x in zip(f.vars, values)}))
                break
    return out


# -- filters --------------------------------------------------------------------


@dataclass(frozen=True)
class Filter:
    members: frozenset[str]
    proper: bool
    join_prime: bool
    minus_prime: bool

    def __contains__(self, x) -> bool:
        return x in self.members


def meet_leq(alg: PartialAlgebra, a: str, b: str) -> bool:
    """a <= b in the meet order, that is a.b = a."""
    return alg.op("meet", a, b) == a


def is_filter(alg: PartialAlgebra, members) -> bool:
    F = set(members)
    if not F:
        return False
    for (a, b), c in alg.table("meet").items():
        if (c in F) != (a in F and b in F):
            return False
    return True


def _join_prime(alg: PartialAlgebra, F) -> bool:
    return all(a in F or b in F for (a, b), c in alg.table("join").items() if c in F)


def _minus_prime(alg: PartialAlgebra, F) -> bool:
    return all(b in F or c in F for (a, b), c in alg.table("minus").items() if a in F)


def make_filter(alg: PartialAlgebra, members) -> Filter:
    F = frozenset(members)
    if not is_filter(alg, F):
        raise AlgebraError(f"{{{','.join(sorted(F))}}} is not a filter")
    return Filter(F, len(F) < len(alg.carrier), _join_prime(alg, F), _minus_prime(alg, F))


def _is_semilattice(alg: PartialAlgebra) -> bool:
    m = alg.indexed.tables["meet"]
    n = len(alg.carrier)
    rng = range(n)
    if any(m[a][b] < 0 or m[a][b] != m[b][a] for a in rng for b in rng):
        return False
    if any(m[a][a] != a for a in rng):
        return False
    return all(m[m[a][b]][c] == m[a][m[b][c]] for a in rng for b in rng for c in rng)


def enumerate_filters(alg: PartialAlgebra, cap: int = FILTER_CAP) -> list[Filter]:
    """All filters, ordered by their sorted member indices.

    In a finite semilattice every filter is the up-set of its least member,
    so only principal up-sets are tested; otherwise every subset is tested.
    """
    if not alg.signature.has_meet:
        raise AlgebraError("filters need meet in the signature")
    n = len(alg.carrier)
    if n > cap:
        raise AlgebraError(f"carrier of {n} elements exceeds the filter cap of {cap}")
    c = alg.carrier
    if _is_semilattice(alg):
        candidates = {frozenset(x for x in c if meet_leq(alg, m, x)) for m in c}
    else:
        candidates = {
            frozenset(c[i] for i in range(n) if bits >> i & 1) for bits in range(1, 1 << n)
        }
    idx = alg.index
    found = [make_filter(alg, F) for F in candidates if is_filter(alg, F)]
    return sorted(found, key=lambda f: sorted(idx[x] for x in f.members))


def enumerate_prime_filters(alg: PartialAlgebra, kind: str = "join", cap: int = FILTER_CAP) -> list[Filter]:
    """Proper filters that are prime for ``kind`` ("join" or "minus")."""
    if kind not in ("join", "minus"):
        raise AlgebraError("kind must be 'join' or 'minus'")
    if kind == "join" and not alg.signature.has_join:
        return [f for f in enumerate_filters(alg, cap) if f.proper]
    key = "join_prime" if kind == "join" else "minus_prime"
    return [f for f in enumerate_filters(alg, cap) if f.proper and getattr(f, key)]


def _generated(alg: PartialAlgebra, base: str) -> frozenset[str]:
    return frozenset(x for x in alg.carrier if meet_leq(alg, base, x))


def maximal_separating_filter(alg: PartialAlgebra, a: str, b: str, kind: str = "join") -> Filter:
    """A filter containing a but not b, maximal under inclusion.

    Grown from the up-set of a by trying each element once in carrier order:
    an element rejected early would also be rejected later, since the filter
    only grows.  The result is checked to be proper and prime for ``kind``.
    """
    check_valid(alg)
    if not _is_semilattice(alg):
        raise AlgebraError("meet is not a semilattice operation")
    if meet_leq(alg, a, b):
        raise AlgebraError(f"{a} <= {b}, so no filter separates them")
    least = a
    for x in alg.carrier:
        if x in _generated(alg, least):
            continue
        trial = alg.op("meet", least, x)
        if b not in _generated(alg, trial):
            least = trial
    f = make_filter(alg, _generated(alg, least))
    if not f.proper:
        raise AlgebraError("separating filter is not proper")
    if kind == "join" and alg.signature.has_join and not f.join_prime:
        raise AlgebraError("maximal separating filter is not join-prime; check the axioms")
    if kind == "minus" and not f.minus_prime:
        raise AlgebraError("maximal separating filter is not minus-prime; check the axioms")
    return f


# -- the representation ------------------------------------------------------------


def _zero_like(alg: PartialAlgebra, kind: str) -> str | None:
    """An element z acting as zero, as the zero-free suites ask for."""
    for z in alg.carrier:
        if kind == "join":
            ok = all(alg.op("join", a, z) == a for a in alg.carrier) and all(
                (alg.op("meet", a, b) == z) == (alg.op("join", a, b) is not None)
                for a in alg.carrier for b in alg.carrier
            )
        else:
            ok = all(alg.op("minus", a, z) == a for a in alg.carrier)
        if ok:
            return z
    return None


def _filter_representation(alg: PartialAlgebra, kind: str, cap: int) -> SetRepresentation:
    phi = enumerate_prime_filters(alg, kind, cap)
    base = tuple(f"F{i}" for i in range(len(phi)))
    assignment = {a: frozenset(base[i] for i, f in enumerate(phi) if a in f) for a in alg.carrier}
    return SetRepresentation(base, assignment)


def birkhoff_representation(alg: PartialAlgebra, suite=None, cap: int = FILTER_CAP) -> SetRepresentation:
    """Representation by proper prime filters (or down-sets when join is nowhere defined)."""
    suite = _resolve(suite if suite is not None else suite_for(alg.signature))
    violations = check_axioms(alg, suite)
    if violations:
        raise AlgebraError(f"axioms fail, see check_axioms: {violations[0].describe()}")
    if not alg.carrier:
        return SetRepresentation((), {})
    work = alg
    if not alg.signature.has_zero:
        z = _zero_like(alg, suite.kind)
        if z is None:
            # join is nowhere defined: send each element to its down-set
            base = alg.carrier
            assignment = {a: frozenset(b for b in base if meet_leq(alg, b, a)) for a in base}
            return SetRepresentation(base, assignment)
        work = PartialAlgebra(
            alg.carrier, alg.signature.with_symbols("zero"),
            alg.join, alg.minus, alg.meet, alg.comp, z,
        )
    return _filter_representation(work, suite.kind, cap)
