from .formula import (
    App, Const, Eq, Exists, Forall, Formula, FormulaError, Not, Rel, Var,
    eval_formula, holds, parse_formula, show,
)
from .formulas import gen_mu, gen_rho
from .play import Transcript, play_interactive
from .solver import (
    Game, GameMove, GamePosition, GameResult, decide_game, dump_strategy, first_losing_round,
    subgame_winner,
)
from .translate import translate_to_relational

__all__ = [
    "App", "Const", "Eq", "Exists", "Forall", "Formula", "FormulaError", "Not", "Rel", "Var",
    "eval_formula", "holds", "parse_formula", "show", "gen_mu", "gen_rho", "Transcript",
    "play_interactive", "Game", "GameMove", "GamePosition", "GameResult", "decide_game",
    "dump_strategy", "first_losing_round", "subgame_winner", "translate_to_relational",
]
