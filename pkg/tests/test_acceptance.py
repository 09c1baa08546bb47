"""Acceptance checks.  Each check returns (passed, detail) and prints one line.

Run under pytest, or directly with ``python tests/test_acceptance.py``.
"""

import itertools
import os
import random
import sys
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from partalg.corpus import join_corpus, mixed_corpus  # noqa: E402
from partalg.counterexamples import (  # noqa: E402
    derive_counterpart_checks, gen_A, gen_A_minus, gen_B, gen_X, is_complemented, perm_representation,
)
from partalg.equations import (  # noqa: E402
    Equation, Join, Variable, Zero, decide_validity, find_countermodel, parse_equation, random_equation,
)
from partalg.games import Game, decide_game, eval_formula, gen_mu, gen_rho, holds, translate_to_relational  # noqa: E402
from partalg.games.batch import all_join_tables, batch_valid, iso_classes  # noqa: E402
from partalg.games.formula import Evaluator, as_structure  # noqa: E402
from partalg.io import SetRepresentation  # noqa: E402
from partalg.meet import birkhoff_representation, check_axioms  # noqa: E402
from partalg.repsearch import (  # noqa: E402
    Inconclusive, RepCertificate, Refutation, build_representation, decide_representable,
    verify_lesssim_complete, verify_representation,
)
from partalg.sets import (  # noqa: E402
    close_family, example_five_join, example_five_minus, example_three, example_three_full,
    set_algebra,
)

from families import meet_corpus, qf_family, random_meet_semilattice  # noqa: E402

RESULTS: dict[int, tuple[bool, str]] = {}


def record(n, ok, detail):
    RESULTS[n] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
    return ok, detail


def timed(fn, *args, **kw):
    start = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - start


# -- the checks --------------------------------------------------------------------------


def check_1():
    res7, t7 = timed(decide_representable, example_three())
    full = example_three_full()
    res8, t8 = timed(decide_representable, full)
    ok = isinstance(res7, Refutation) and isinstance(res8, RepCertificate)
    ok = ok and verify_representation(full, build_representation(full, res8)) == []
    ok = ok and t7 < 1 and t8 < 1
    return record(1, ok, f"7-element refuted in {t7:.3f}s, 8-element certified and verified in {t8:.3f}s")


def check_2():
    parts, ok = [], True
    for m, n in itertools.product((3, 4), repeat=2):
        res, t = timed(decide_representable, gen_A(m, n))
        want = RepCertificate if m == n else Refutation
        ok = ok and isinstance(res, want) and not isinstance(res, Inconclusive) and t < 60
        parts.append(f"A({m},{n}) {'certified' if isinstance(res, RepCertificate) else type(res).__name__.lower()} {t:.2f}s")
    return record(2, ok, "; ".join(parts))


def check_3():
    ok, parts = True, []
    for n, size in ((3, 6), (4, 24)):
        rep = perm_representation(n)
        A = gen_A(n, n)
        good = (len(rep.base) == size and verify_representation(A, rep) == []
                and verify_lesssim_complete(A, rep, cap=6) == [])
        ok = ok and good
        parts.append(f"n={n} base {len(rep.base)} {'verified' if good else 'FAILED'}")
    return record(3, ok, "; ".join(parts))


def worked_examples():
    five_j, five_m = example_five_join(), example_five_minus()
    return [
        example_three(), example_three_full(),
        five_j.reduct("join", "zero"), five_j.reduct("minus", "zero"),
        five_m.reduct("join", "zero"), five_m.reduct("minus", "zero"),
        gen_X(3, 3), gen_X(3, 4), gen_A(3, 3), gen_A(3, 4), gen_A_minus(3, 3), gen_B(3, 3),
    ]


def check_4():
    corpus = worked_examples() + mixed_corpus(404, 200, 5)
    built, worst = 0, 0.0
    for alg in corpus:
        cert = decide_representable(alg)
        if isinstance(cert, RepCertificate):
            rep = build_representation(alg, cert)
            bound = 2 * len(alg) ** 2
            if len(rep.base) > bound or verify_representation(alg, rep):
                return record(4, False, f"base {len(rep.base)} > {bound} or unverified on {alg.carrier}")
            built += 1
            worst = max(worst, len(rep.base) / bound)
    return record(4, True, f"{built} representations over {len(corpus)} algebras, largest base/bound {worst:.2f}")


def check_5():
    algs = join_corpus(2024, 100, 4)
    rhos = [gen_rho(n) for n in range(6)]
    V, W = ("p", "q"), ("r",)
    mus = {(n, nv, nw): gen_mu(n, V[:nv], W[:nw]) for n in range(4) for nv in (1, 2) for nw in (0, 1)}
    bad = checks = 0
    for alg in algs:
        ev = Evaluator(as_structure(alg))
        game = Game(alg)
        for (n, nv, nw), f in mus.items():
            for values in itertools.product(alg.carrier, repeat=nv + nw):
                env = dict(zip(V[:nv] + W[:nw], values))
                checks += 1
                bad += eval_formula(alg, f, env, evaluator=ev) != game.exists_wins(
                    game.mask(values[:nv]), game.mask(values[nv:]), n)
        rep = isinstance(decide_representable(alg), RepCertificate)
        omega = decide_game(alg, strategy=False).exists_wins
        rho = all(holds(alg, rhos[n], ev) for n in range(len(alg) + 2))
        bad += (omega != rep) + (rho != rep)
        checks += 2
    return record(5, bad == 0, f"{len(algs)} algebras of size <= 4, {checks} comparisons, {bad} disagreements")


def check_6():
    formulas = qf_family(0, 60)
    tables = [iso_classes(all_join_tables(n)) for n in (1, 2, 3)]
    bad = 0
    for f in formulas:
        g = translate_to_relational(f)
        for T in tables:
            bad += int((batch_valid(T, f, total=True) != batch_valid(T, g, total=False)).sum())
    count = sum(len(T) for T in tables)
    return record(6, bad == 0, f"{len(formulas)} formulas x {count} algebras (sizes 1-3 up to isomorphism), {bad} disagreements")


def check_7():
    out = []
    for alg, good, bad in ((example_five_join(), "join", "minus"), (example_five_minus(), "minus", "join")):
        yes = decide_representable(alg.reduct(good, "zero"))
        no = decide_representable(alg.reduct(bad, "zero"))
        verified = isinstance(yes, RepCertificate) and verify_representation(
            alg.reduct(good, "zero"), build_representation(alg.reduct(good, "zero"), yes)) == []
        out.append(verified and isinstance(no, Refutation))
    return record(7, all(out), f"without {{3}}: join certified, minus refuted = {out[0]}; "
                               f"without top: minus certified, join refuted = {out[1]}")


def complemented_algebras(seed, count):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        points = rng.randint(1, 3)
        top = frozenset(range(points))
        fam = [top] + [frozenset(x for x in range(points) if rng.random() < 0.5) for _ in range(rng.randint(1, 3))]
        fam = close_family(fam, ("join", "minus"))
        if len(fam) <= 8:
            out.append(set_algebra(fam, ("join", "minus", "zero")))
    return out


def check_8():
    rng = random.Random(8)
    exceptions = reps = 0
    for alg in complemented_algebras(808, 50):
        assert is_complemented(alg) is not None
        candidates = []
        for side in ("join", "minus"):
            red = alg.reduct(side, "zero")
            candidates.append(build_representation(red, decide_representable(red)))
        rep = candidates[0]
        for _ in range(3):
            x = rng.choice(alg.carrier)
            bad = dict(rep.assignment)
            bad[x] = bad[x] ^ {rng.choice(rep.base)}
            candidates.append(SetRepresentation(rep.base, bad))
        for r in candidates:
            report = derive_counterpart_checks(alg, r)
            reps += 1
            exceptions += not report.agree
    return record(8, exceptions == 0, f"50 complemented algebras, {reps} representations, {exceptions} exceptions")


def check_9():
    corpus = [(sid, alg) for sid, alg, _ in meet_corpus(909, 200)]
    rng = random.Random(9)
    corpus += [("AxJMeet", random_meet_semilattice(rng)) for _ in range(40)]
    genuine = [(sid, alg) for sid, alg, g in meet_corpus(909, 200) if g]
    models = disagree = 0
    for sid, alg in corpus:
        searched = isinstance(decide_representable(alg), RepCertificate)
        if check_axioms(alg, sid):
            disagree += searched
            continue
        models += 1
        rep = birkhoff_representation(alg, sid)
        if verify_representation(alg, rep) or not searched:
            disagree += 1
    sound = all(not check_axioms(alg, sid) for sid, alg in genuine)
    ok = sound and disagree == 0
    return record(9, ok, f"{len(corpus)} algebras, {models} models all verified, "
                         f"{len(genuine)} set algebras pass the axioms = {sound}, {disagree} disagreements")


def comb(n):
    t = Variable("a")
    for i in range(n):
        t = Join(t, Variable("bcd"[i % 3]) if i % 4 else Zero())
    return t


def check_10():
    rng = random.Random(1010)
    eqs = [random_equation(rng) for _ in range(500)]
    bad = sum(decide_validity(e) != (find_countermodel(e, 3) is None) for e in eqs)
    fixed = {"a + b = b + a": True, "(a + b) + c = a + (b + c)": True, "a + 0 = a": True, "a + a = a": False}
    fixed_ok = all(decide_validity(parse_equation(s)) is v for s, v in fixed.items())

    def best(n):
        e = Equation(comb(n), comb(n))
        return min(timed(decide_validity, e)[1] for _ in range(5))

    small, large = best(20000), best(200000)
    ratio = large / small
    ok = bad == 0 and fixed_ok and ratio <= 15
    valid = sum(decide_validity(e) for e in eqs)
    return record(10, ok, f"500 equations ({valid} valid), {bad} oracle disagreements, examples ok = {fixed_ok}, "
                          f"10x length took {ratio:.1f}x time")


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, check_9, check_10]


@pytest.mark.parametrize("check", CHECKS, ids=[f"criterion_{i}" for i in range(1, 11)])
def test_criterion(check):
    ok, detail = check()
    assert ok, detail


if __name__ == "__main__":
    failed = [c for c in CHECKS if not c()[0]]
    sys.exit(1 if failed else 0)
