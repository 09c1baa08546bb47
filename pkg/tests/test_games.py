import io
import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from partalg.algebra import PartialAlgebra, totalise
from partalg.corpus import join_corpus, mixed_corpus
from partalg.games import (
    FormulaError, Game, decide_game, dump_strategy, eval_formula, first_losing_round, gen_mu,
    gen_rho, holds, parse_formula, play_interactive, show, subgame_winner, translate_to_relational,
)
from partalg.games.batch import all_join_tables, batch_valid, iso_classes, totalised
from partalg.games.formula import (
    TOP, Evaluator, Not, as_structure,
    counterexample, is_quantifier_free,
)
from partalg.games.formulas import atom_count
from partalg.repsearch import RepCertificate, decide_representable
from partalg.sets import example_three, example_three_full, power_set_algebra

import oracles
from families import qf_family


def small_join_algebras(seed=3, count=60, max_size=4):
    return [a for a in mixed_corpus(seed, count, max_size) if a.signature.has_join]


# -- syntax ---------------------------------------------------------------------------


@pytest.mark.parametrize("text", [
    "forall a,b. J(a, b, c) -> exists d. J(b, a, d)",
    "~(x = y) | (x . y) = 0",
    "x != y & T",
    "(x + y) = inf <-> ~(exists c. J(x, y, c))",
])
def test_parse_show_round_trip(text):
    f = parse_formula(text)
    assert parse_formula(show(f)) == f


def test_parse_error_has_position():
    with pytest.raises(FormulaError, match="expected ',', found end of input"):
        parse_formula("forall a. J(a, b")


def test_hash_consing_equal_formulas():
    assert parse_formula("x = y & y = x") == parse_formula("(x = y) & (y = x)")


# -- mu and rho ------------------------------------------------------------------------


def test_mu0_shape():
    f = gen_mu(0, ["y"], ["n"])
    assert f.free == frozenset({"y", "n"})
    assert is_quantifier_free(Not(f)) is False  # the no-join clause quantifies c


def test_mu_rejects_overlap_and_clashes():
    with pytest.raises(ValueError):
        gen_mu(1, ["a"], ["a"])
    with pytest.raises(ValueError):
        gen_mu(1, ["a_0"], [])


def test_rho0_is_top():
    assert gen_rho(0) == TOP


def test_rho_grows_but_stays_shared():
    sizes = [atom_count(gen_rho(n)) for n in range(1, 5)]
    assert sizes == sorted(sizes) and sizes[-1] > sizes[0]


def test_mu_agrees_with_oracle_game():
    V, W = ("p", "q"), ("r",)
    for alg in small_join_algebras(count=30, max_size=3):
        ev = Evaluator(as_structure(alg))
        for n in range(3):
            for nv, nw in ((1, 0), (2, 0), (1, 1), (2, 1)):
                f = gen_mu(n, V[:nv], W[:nw])
                for values in itertools.product(alg.carrier, repeat=nv + nw):
                    env = dict(zip(V[:nv] + W[:nw], values))
                    Y, N = frozenset(values[:nv]), frozenset(values[nv:])
                    expect = oracles.game_exists_wins(alg, Y, N, n)
                    assert eval_formula(alg, f, env, evaluator=ev) == expect


def test_subgame_winner_matches_oracle():
    for alg in small_join_algebras(count=40):
        game = Game(alg)
        for Y in oracles.subsets(alg.carrier):
            if len(Y) > 2:
                continue
            for k in range(3):
                assert subgame_winner(alg, Y, (), k, game) == oracles.game_exists_wins(alg, Y, frozenset(), k)


def test_rho_agrees_with_bounded_game():
    for alg in small_join_algebras(count=40, max_size=3):
        for n in range(4):
            assert holds(alg, gen_rho(n)) == decide_game(alg, n, strategy=False).exists_wins


def test_omega_game_agrees_with_search():
    for alg in small_join_algebras(count=80):
        rep = isinstance(decide_representable(alg.reduct("join")), RepCertificate)
        assert decide_game(alg, strategy=False).exists_wins == rep


# -- the solver ------------------------------------------------------------------------


def test_game_on_examples():
    assert decide_game(example_three_full()).exists_wins
    res = decide_game(example_three())
    assert not res.exists_wins and res.refuting_move is not None


def test_first_losing_round():
    assert first_losing_round(example_three_full()) is None
    n = first_losing_round(example_three())
    assert n is not None and not decide_game(example_three(), n).exists_wins
    assert decide_game(example_three(), n - 1).exists_wins


def test_zero_rounds_exists_wins():
    assert decide_game(example_three(), 0).exists_wins


def test_strategy_dump_mentions_positions():
    res = decide_game(power_set_algebra({1, 2}))
    text = dump_strategy(res)
    assert text.startswith("rounds: omega\nwinner: exists")
    assert "->" in text


def test_strategy_responses_stay_winning():
    alg = power_set_algebra({1, 2})
    res = decide_game(alg)
    game = Game(alg)
    for (pos, move), resp in res.strategy.items():
        assert not game.forall_wins(game.mask(resp.Y), game.mask(resp.N))


def test_game_needs_join():
    with pytest.raises(Exception):
        decide_game(PartialAlgebra.make("ab", ("minus",)))


# -- play ------------------------------------------------------------------------------


def test_play_as_forall_on_power_set_loses():
    alg = power_set_algebra({1, 2})
    t = play_interactive(alg, "forall", ["init {1} {2}", "ext {1} {2}", "split {1} {2}"], rounds=3)
    assert t.winner == "E"


def test_play_as_exists_on_example_three_loses():
    alg = example_three()
    moves = ["pick {1}", "pick {2}", "pick {3}"] * 5
    t = play_interactive(alg, "exists", moves)
    assert t.winner == "A"
    assert t.lines[1].startswith("forall plays")


def test_play_retries_illegal_input():
    buf = io.StringIO()
    t = play_interactive(power_set_algebra({1, 2}), "forall", ["bogus", "init {1} {1}", "init {1} {2}"],
                         out=buf, rounds=1)
    assert t.lines.count("illegal opening, try again") == 2
    assert t.winner == "E" and "exists wins" in buf.getvalue()


def test_play_truncated():
    t = play_interactive(power_set_algebra({1, 2}), "forall", [])
    assert t.status == "truncated" and t.winner is None


# -- evaluator ---------------------------------------------------------------------------


def test_compiled_matches_naive_on_relational_formulas():
    formulas = [
        parse_formula("forall a,b. (exists c. J(a, b, c)) -> (exists c. J(b, a, c))"),
        parse_formula("forall a. ~J(a, a, a)"),
        parse_formula("exists a. forall b. ~(exists c. J(a, b, c))"),
        gen_rho(2),
        gen_mu(1, ["x"], ["y"]),
    ]
    for alg in small_join_algebras(count=40):
        for f in formulas:
            assert holds(alg, f) == oracles.naive_valid(alg, f)


def test_compiled_matches_naive_on_totalisation():
    algs = join_corpus(5, 25, 3)
    for f in qf_family(1, 30):
        for alg in algs:
            t = totalise(alg)
            assert holds(t, f) == oracles.naive_valid(alg, f, total=t)


def test_evaluator_reuse_across_formulas():
    alg = power_set_algebra({1, 2})
    ev = Evaluator(as_structure(alg))
    assert holds(alg, gen_rho(2), ev)
    assert holds(alg, parse_formula("forall a. exists b. a = b"), ev)
    assert not holds(alg, parse_formula("forall a, b. a = b"), ev)


def test_counterexample_first_in_carrier_order():
    alg = power_set_algebra({1})
    assert counterexample(alg, parse_formula("x = y")) == {"x": "{}", "y": "{1}"}


def test_partial_join_is_not_a_term():
    with pytest.raises(FormulaError):
        holds(power_set_algebra({1}), parse_formula("x + y = x"))


def test_unassigned_variable():
    with pytest.raises(FormulaError, match="unassigned"):
        eval_formula(power_set_algebra({1}), parse_formula("x = y"), {"x": "{}"})


SHADOWED = [
    "exists x. (J(x, y, z) & forall x. ~J(x, y, x))",
    "forall x. (J(x, x, y) -> exists y. J(y, x, x))",
    "exists x, x. J(x, x, x)",
    "forall y. exists x. (J(x, y, z) | forall z. ~J(z, z, x))",
]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(SHADOWED))
def test_shadowed_quantifiers(seed, text):
    alg = join_corpus(seed, 1, 3)[0]
    f = parse_formula(text)
    assert holds(alg, f) == oracles.naive_valid(alg, f)


# -- translation -------------------------------------------------------------------------


def test_translation_is_relational():
    f = parse_formula("x + y = y + x")
    g = translate_to_relational(f)
    assert is_quantifier_free(f)
    assert "+" not in show(g)


def test_translation_needs_quantifier_free():
    with pytest.raises(FormulaError):
        translate_to_relational(parse_formula("forall x. x = x"))


def test_translation_commutativity():
    f = parse_formula("x + y = y + x")
    g = translate_to_relational(f)
    for alg in join_corpus(9, 40, 3):
        assert holds(totalise(alg), f) == holds(alg, g)


def test_translation_small_family():
    algs = join_corpus(10, 20, 3)
    for f in qf_family(2, 25):
        g = translate_to_relational(f)
        for alg in algs:
            assert holds(totalise(alg), f) == holds(alg, g), show(f)


# -- batch ---------------------------------------------------------------------------------


def test_all_join_tables_count():
    assert all_join_tables(2).shape == (81, 2, 2)
    assert len(iso_classes(all_join_tables(2))) < 81


def test_batch_matches_evaluator():
    tables = iso_classes(all_join_tables(2))
    algs = [
        PartialAlgebra.make(["0", "1"], ("join",), join=[(str(a), str(b), str(t[a, b]))
                                                         for a in range(2) for b in range(2) if t[a, b] >= 0])
        for t in tables
    ]
    for f in qf_family(3, 20):
        g = translate_to_relational(f)
        total = batch_valid(tables, f, total=True)
        rel = batch_valid(tables, g, total=False)
        assert list(total) == [holds(totalise(a), f) for a in algs]
        assert list(rel) == [holds(a, g) for a in algs]


def test_totalised_tables_absorb():
    t = totalised(np.array([[[-1]]], dtype=np.int8))
    assert t.tolist() == [[[1, 1], [1, 1]]]
