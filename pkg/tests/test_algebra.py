import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from partalg.algebra import (
    AlgebraError, Congruence, PartialAlgebra, Signature, TotalAlgebra, check_congruence,
    detotalise, identity_congruence, lesssim, partial_subalgebras, quotient, totalise, validate,
)
from partalg.corpus import mixed_corpus, random_table_algebra
from partalg.counterexamples import gen_A, gen_sim, gen_X
from partalg.io import ParseError, parse_algebra, serialize_algebra
from partalg.sets import close_family, example_three, power_set_algebra, set_algebra

from oracles import sim_class_count


def test_power_set_validates():
    assert validate(power_set_algebra({1, 2, 3})) == []


def test_not_single_valued():
    alg = PartialAlgebra.make("abcd", ("join",), join=[("a", "b", "c"), ("a", "b", "d")])
    msgs = [str(v) for v in validate(alg)]
    assert "join not single-valued at (a,b)" in msgs


def test_dangling_element():
    alg = PartialAlgebra.make("ab", ("join",), join=[("a", "b", "z")])
    assert any("dangling element" in str(v) for v in validate(alg))


def test_degenerate_signature_needs_flag():
    alg = PartialAlgebra.make("a", ("zero",), zero="a")
    assert validate(alg)
    assert validate(alg, allow_degenerate=True) == []


def test_comp_requires_zero_and_constant_map():
    bad = PartialAlgebra(("a",), Signature.from_symbols(("join", "comp")), comp=frozenset({("a", "a", "a")}))
    assert any("comp requires zero" in str(v) for v in validate(bad))
    alg = PartialAlgebra.make("ab", ("join", "comp", "zero"), zero="a",
                              comp={(x, y): "b" for x in "ab" for y in "ab"})
    assert any("constant zero" in str(v) for v in validate(alg))


def test_meet_must_be_total():
    alg = PartialAlgebra.make("ab", ("meet",), meet={("a", "a"): "a"})
    assert any("not total" in str(v) for v in validate(alg))


def test_empty_algebra_is_valid():
    assert validate(PartialAlgebra.make([], ("join",))) == []


# -- parsing -------------------------------------------------------------------------


def test_minimal_document():
    alg = parse_algebra('{"carrier": ["a"], "signature": ["join"], "join": []}')
    assert alg.carrier == ("a",) and not alg.join


def test_parse_dangling():
    with pytest.raises(ParseError, match="dangling element"):
        parse_algebra('{"carrier": ["a"], "signature": ["join"], "join": [["a", "a", "b"]]}')


@pytest.mark.parametrize("text, where", [
    ('{"carrier": ["a"], "signature": ["join"], "colour": 1}', "colour"),
    ('{"carrier": ["a"], "signature": ["plus"]}', "signature"),
    ('{"carrier": ["a", "a"], "signature": ["join"]}', "duplicate"),
    ('{"carrier": "a"', None),
])
def test_parse_errors(text, where):
    with pytest.raises(ParseError) as exc:
        parse_algebra(text)
    if where:
        assert where in str(exc.value)


def test_round_trip_gen_A():
    alg = gen_A(3, 3)
    assert parse_algebra(serialize_algebra(alg)) == alg


def test_round_trip_corpus():
    for alg in mixed_corpus(3, 40, 5):
        assert parse_algebra(serialize_algebra(alg)) == alg


# -- congruences --------------------------------------------------------------------


def test_identity_quotient_is_isomorphic():
    alg = power_set_algebra({1, 2})
    q = quotient(alg, identity_congruence(alg))
    assert q == alg


def test_bad_partition_merging_point_and_pair():
    alg = power_set_algebra({1, 2})
    blocks = [["{1}", "{1,2}"], ["{}"], ["{2}"]]
    assert check_congruence(alg, Congruence.from_blocks(blocks))
    with pytest.raises(AlgebraError):
        quotient(alg, Congruence.from_blocks(blocks))


def test_sim_on_X34_passes_and_counts_classes():
    cong = gen_sim(3, 4)
    assert check_congruence(gen_X(3, 4), cong) == []
    assert len(quotient(gen_X(3, 4), cong)) == sim_class_count(3, 4)


def test_quotient_map_preserves_definedness():
    X, cong = gen_X(3, 3), gen_sim(3, 3)
    A = quotient(X, cong)
    block = cong.block_of
    rep = {i: b[0] for i, b in enumerate(cong.partition)}
    for a, b in itertools.product(X.carrier, repeat=2):
        c = X.op("join", a, b)
        qa, qb = rep[block[a]], rep[block[b]]
        qc = A.op("join", qa, qb)
        assert (c is None) == (qc is None)
        if c is not None:
            assert qc == rep[block[c]]


# -- the derived order ------------------------------------------------------------------


def test_lesssim_is_inclusion_on_power_set():
    alg = power_set_algebra({1, 2})
    order = lesssim(alg)
    sets = {x: set(x.strip("{}").split(",")) - {""} for x in alg.carrier}
    for a, b in itertools.product(alg.carrier, repeat=2):
        assert order.le(a, b) == (sets[a] <= sets[b])


def test_lesssim_one_element():
    order = lesssim(PartialAlgebra.make("a", ("join",)))
    assert order.pairs == {("a", "a")}


def test_lesssim_flags_on_example_three():
    assert lesssim(example_three()).is_partial_order


# -- totalisation ---------------------------------------------------------------------


def test_totalise_empty():
    t = totalise(PartialAlgebra.make([], ("join",)))
    assert t.carrier == (t.inf,)


def test_totalise_one_element():
    t = totalise(PartialAlgebra.make("a", ("join",)))
    assert len(t.carrier) == 2
    assert set(t.table("join").values()) == {t.inf}


def test_totalise_round_trip_random():
    rng = random.Random(11)
    for _ in range(50):
        alg = random_table_algebra(rng, 4, ("join", "minus"))
        t = totalise(alg)
        assert detotalise(t) == alg
        assert totalise(detotalise(t)) == t


def test_detotalise_rejects_missing_entry():
    t = totalise(PartialAlgebra.make("a", ("join",)))
    broken = TotalAlgebra(t.carrier, t.inf, t.signature,
                          (("join", frozenset(x for x in t.tables[0][1] if x[:2] != ("a", "a"))),))
    with pytest.raises(AlgebraError):
        detotalise(broken)


def test_partial_subalgebras_are_closed():
    alg = power_set_algebra({1, 2})
    subs = list(partial_subalgebras(alg))
    assert all(alg.is_closed(s.carrier) for s in subs)
    assert any(len(s) == 0 for s in subs) and any(s == alg for s in subs)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 5))
def test_set_algebras_validate(seed, size):
    rng = random.Random(seed)
    fam = [frozenset(x for x in range(3) if rng.random() < 0.5) for _ in range(size)]
    fam = close_family(fam, ("meet",))
    assert validate(set_algebra(fam, ("join", "minus", "meet"))) == []
