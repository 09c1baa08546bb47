"""A line-oriented game session between a human and the solver.

Human commands::

    init a b     opening move: a and b are distinct
    initu a b    opening move: a + b is undefined
    split a b    a + b is defined and lies in Y
    ext a b      a or b lies in Y and a + b is defined
    pick x       existential choice: put x into Y

Lines starting with '#' and blank lines are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Iterable

from ..algebra import AlgebraError, PartialAlgebra
from .solver import Game, GameMove


@dataclass
class Transcript:
    lines: list[str] = field(default_factory=list)
    winner: str | None = None  # "E", "A" or None when cut short
    status: str = "finished"

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


class _Input:
    def __init__(self, source: Iterable[str]):
        self.it = iter(source)

    def next(self) -> list[str] | None:
        for raw in self.it:
            line = raw.strip()
            if line and not line.startswith("#"):
                return line.split()
        return None


def play_interactive(
    alg: PartialAlgebra,
    human_role: str,
    source: Iterable[str],
    out: IO[str] | None = None,
    rounds: int | None = None,
) -> Transcript:
    """Play one game; the engine takes the other side using exact game values."""
    if human_role not in ("forall", "exists"):
        raise AlgebraError("human_role must be 'forall' or 'exists'")
    game = Game(alg)
    limit = len(alg) + 1 if rounds is None else rounds
    t = Transcript()
    inp = _Input(source)

    def say(msg: str):
        t.lines.append(msg)
        if out is not None:
            print(msg, file=out, flush=True)

    def read(prompt: str) -> list[str] | None:
        if out is not None:
            print(prompt, file=out, flush=True)
        words = inp.next()
        if words is not None:
            t.lines.append(f"> {' '.join(words)}")
        return words

    def elem(word: str) -> int | None:
        return game.idx.get(word)

    def finish(winner: str, why: str) -> Transcript:
        t.winner = winner
        say(f"{why}; {'exists' if winner == 'E' else 'forall'} wins")
        return t

    def cut() -> Transcript:
        t.status = "truncated"
        say("input closed; game abandoned")
        return t

    say(f"game with {limit} rounds; you play {human_role}")
    if limit == 0:
        return finish("E", "no rounds to play")
    names = game.names
    openings = game.initial_moves()

    # -- opening round --
    if human_role == "forall":
        while True:
            words = read("your opening (init a b | initu a b):")
            if words is None:
                return cut()
            chosen = None
            if len(words) == 3 and words[0] in ("init", "initu"):
                a, b = elem(words[1]), elem(words[2])
                if a is not None and b is not None:
                    if words[0] == "init" and a != b:
                        lo, hi = min(a, b), max(a, b)
                        chosen = next(o for m, o in openings if m.kind == "init" and (m.a, m.b) == (names[lo], names[hi]))
                    elif words[0] == "initu" and game.join[a][b] < 0:
                        chosen = (((1 << a) | (1 << b), 0),)
            if chosen is not None:
                break
            say("illegal opening, try again")
        pick = next((o for o in chosen if game.exists_wins(o[0], o[1], limit - 1)), chosen[0])
        Y, N = pick
    else:
        move, opts = next(
            ((m, o) for k in range(limit) for m, o in openings
             if not any(game.exists_wins(Y, N, k) for Y, N in o)),
            openings[0] if openings else (None, None),
        )
        if move is None:
            return finish("E", "forall has no opening move")
        say(f"forall plays {move.command()}")
        if len(opts) == 1:
            Y, N = opts[0]
        else:
            while True:
                words = read(f"choose which goes into Y (pick {move.a} | pick {move.b}):")
                if words is None:
                    return cut()
                if len(words) == 2 and words[0] == "pick" and words[1] in (move.a, move.b):
                    Y, N = opts[0] if words[1] == move.a else opts[1]
                    break
                say("illegal choice, try again")
    say(f"position {game.position(Y, N).show()}")
    if game.forall_wins(Y, N):
        return finish("A", "position is a win for forall")

    # -- later rounds --
    for rnd in range(1, limit):
        left = limit - rnd - 1
        moves = game.moves(Y)
        if not moves:
            return finish("E", "forall has no legal move")
        if human_role == "forall":
            while True:
                words = read("your move (split a b | ext a b):")
                if words is None:
                    return cut()
                found = _match(moves, words, game)
                if found is not None:
                    break
                say("illegal move, try again")
            move, opts = found
            choice = next((r for r in opts if game.exists_wins(r, N, left)), opts[0])
            say(f"exists answers with {game.position(choice, N).show()}")
        else:
            move, opts = _engine_forall(game, moves, Y, N, left)
            say(f"forall plays {move.command()}")
            if len(set(opts)) == 1:
                choice = opts[0]
            else:
                while True:
                    words = read(f"choose (pick {move.a} | pick {move.b}):")
                    if words is None:
                        return cut()
                    if len(words) == 2 and words[0] == "pick" and words[1] in (move.a, move.b):
                        first = names[min(game.idx[move.a], game.idx[move.b])]
                        choice = opts[0] if words[1] == first else opts[1]
                        break
                    say("illegal choice, try again")
        Y = choice
        say(f"position {game.position(Y, N).show()}")
        if game.forall_wins(Y, N):
            return finish("A", "position is a win for forall")
    return finish("E", f"exists survived {limit} rounds")


def _match(moves, words, game: Game):
    if len(words) != 3 or words[0] not in ("split", "ext"):
        return None
    a, b = words[1], words[2]
    kinds = ("split",) if words[0] == "split" else ("ext-right", "ext-left")
    for move, opts in moves:
        if move.kind in kinds and move.a == a and move.b == b:
            return move, opts
    return None


def _engine_forall(game: Game, moves, Y: int, N: int, left: int) -> tuple[GameMove, tuple[int, ...]]:
    # a winning move that wins fastest, so the opponent cannot stall by repeating Y
    for k in range(left + 1):
        for move, opts in moves:
            if not any(game.exists_wins(r, N, k) for r in opts):
                return move, opts
    for move, opts in moves:
        if any(r != Y for r in opts):
            return move, opts
    return moves[0]
