"""The representation game and its exact solution by backward induction.

Positions are pairs (Y, N) of element sets, stored as bitmasks.  Y only
grows, so a game of k rounds is solved by recursion on k with memoisation;
the unbounded game is the greatest fixpoint of the same recurrence over
the reachable positions.

Convention for a universal player with no legal move: the play stops and
the existential player wins.  This is what the formulas mu_k say for k > 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..algebra import AlgebraError, PartialAlgebra, check_valid


@dataclass(frozen=True)
class GamePosition:
    Y: frozenset[str]
    N: frozenset[str]

    def show(self) -> str:
        return "({" + ",".join(sorted(self.Y)) + "}, {" + ",".join(sorted(self.N)) + "})"


@dataclass(frozen=True)
class GameMove:
    kind: str  # init, initu, split, ext-right, ext-left
    a: str
    b: str

    def command(self) -> str:
        return {"init": "init", "initu": "initu", "split": "split"}.get(self.kind, "ext") + f" {self.a} {self.b}"


class Game:
    """Move generation and solving for one algebra."""

    def __init__(self, alg: PartialAlgebra):
        check_valid(alg)
        if not alg.signature.has_join:
            raise AlgebraError("the game needs join in the signature")
        self.alg = alg
        self.names = alg.carrier
        self.n = len(alg.carrier)
        self.idx = alg.index
        join = alg.indexed.tables["join"]
        self.join = join
        self.defined = [(a, b, join[a][b]) for a in range(self.n) for b in range(self.n) if join[a][b] >= 0]
        self.memo: dict = {}

    # -- encoding -------------------------------------------------------------

    def mask(self, elems) -> int:
        m = 0
        for x in elems:
            m |= 1 << self.idx[x]
        return m

    def unmask(self, m: int) -> frozenset[str]:
        return frozenset(self.names[i] for i in range(self.n) if m >> i & 1)

    def position(self, Y: int, N: int) -> GamePosition:
        return GamePosition(self.unmask(Y), self.unmask(N))

    # -- rules ----------------------------------------------------------------

    def forall_wins(self, Y: int, N: int) -> bool:
        if Y & N:
            return True
        return any(Y >> a & 1 and Y >> b & 1 for a, b, _ in self.defined)

    def initial_moves(self) -> list[tuple[GameMove, tuple[tuple[int, int], ...]]]:
        out = []
        for a in range(self.n):
            for b in range(a + 1, self.n):
                move = GameMove("init", self.names[a], self.names[b])
                out.append((move, ((1 << a, 1 << b), (1 << b, 1 << a))))
        for a in range(self.n):
            for b in range(self.n):
                if self.join[a][b] < 0:
                    move = GameMove("initu", self.names[a], self.names[b])
                    out.append((move, (((1 << a) | (1 << b), 0),)))
        return out

    def moves(self, Y: int) -> list[tuple[GameMove, tuple[int, ...]]]:
        """Universal moves from Y, each with the existential responses (new Y values)."""
        out = []
        nm = self.names
        for a, b, c in self.defined:
            if Y >> c & 1:
                first, second = (a, b) if a <= b else (b, a)
                out.append((GameMove("split", nm[a], nm[b]), (Y | 1 << first, Y | 1 << second)))
        for a, b, c in self.defined:
            if Y >> a & 1:
                out.append((GameMove("ext-right", nm[a], nm[b]), (Y | 1 << c,)))
        for a, b, c in self.defined:
            if Y >> b & 1:
                out.append((GameMove("ext-left", nm[a], nm[b]), (Y | 1 << c,)))
        return out

    def _option_sets(self, Y: int) -> frozenset[tuple[int, ...]]:
        return frozenset(tuple(dict.fromkeys(r)) for _, r in self.moves(Y))

    # -- bounded game -----------------------------------------------------------

    def exists_wins(self, Y: int, N: int, k: int) -> bool:
        """Existential player wins the k-round game started at (Y, N)."""
        key = (Y, N, k)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if k == 0:
            res = not self.forall_wins(Y, N)
        else:
            res = all(
                any(self.exists_wins(r, N, k - 1) for r in options)
                for options in self._option_sets(Y)
            )
        self.memo[key] = res
        return res

    # -- unbounded game ---------------------------------------------------------

    def omega_values(self, starts) -> dict[tuple[int, int], bool]:
        """Greatest fixpoint of the existential winning region over positions reachable from ``starts``."""
        reach: dict[tuple[int, int], frozenset] = {}
        stack = list(starts)
        while stack:
            Y, N = stack.pop()
            if (Y, N) in reach:
                continue
            opts = self._option_sets(Y)
            reach[(Y, N)] = opts
            for options in opts:
                for r in options:
                    if (r, N) not in reach:
                        stack.append((r, N))
        value = {p: True for p in reach}
        changed = True
        while changed:
            changed = False
            for (Y, N), opts in reach.items():
                if not value[(Y, N)]:
                    continue
                if opts:
                    ok = not self.forall_wins(Y, N) and all(
                        any(value[(r, N)] for r in options) for options in opts
                    )
                else:
                    ok = True
                if not ok:
                    value[(Y, N)] = False
                    changed = True
        return value


@dataclass(frozen=True)
class GameResult:
    rounds: int | str
    winner: str  # "E" or "A"
    refuting_move: GameMove | None
    strategy: dict[tuple[GamePosition, GameMove], GamePosition] = field(default_factory=dict)

    @property
    def exists_wins(self) -> bool:
        return self.winner == "E"


def _pick(options, good) -> int:
    for i, r in enumerate(options):
        if good(r):
            return i
    return 0


def decide_game(alg: PartialAlgebra, rounds: int | str = "omega", strategy: bool = True) -> GameResult:
    """Winner of the game with ``rounds`` rounds (an int, or "omega")."""
    game = Game(alg)
    if rounds == "omega":
        starts = [r for _, opts in game.initial_moves() for r in opts]
        value = game.omega_values(starts)
        wins = lambda Y, N, k: value[(Y, N)]  # noqa: E731
        k0 = None
    else:
        if not isinstance(rounds, int) or rounds < 0:
            raise AlgebraError("rounds must be a non-negative integer or 'omega'")
        if rounds == 0:
            return GameResult(0, "E", None, {})
        wins = game.exists_wins
        k0 = rounds - 1

    refuting = None
    table: dict = {}
    frontier = []
    for move, opts in game.initial_moves():
        i = _pick(opts, lambda r: wins(r[0], r[1], k0))
        if not wins(opts[i][0], opts[i][1], k0):
            refuting = move
            break
        frontier.append((opts[i][0], opts[i][1], k0))
        if strategy:
            table[(GamePosition(frozenset(), frozenset()), move)] = game.position(*opts[i])
    if refuting is not None:
        return GameResult(rounds, "A", refuting, {})
    if strategy:
        seen = set()
        while frontier:
            Y, N, k = frontier.pop()
            if (Y, N, k) in seen or k == 0:
                continue
            seen.add((Y, N, k))
            nk = None if k is None else k - 1
            for move, opts in game.moves(Y):
                i = _pick(opts, lambda r: wins(r, N, nk))
                table[(game.position(Y, N), move)] = game.position(opts[i], N)
                if wins(opts[i], N, nk):
                    frontier.append((opts[i], N, nk))
    return GameResult(rounds, "E", None, table)


def subgame_winner(alg: PartialAlgebra, Y, N, k: int, game: Game | None = None) -> bool:
    """True iff the existential player wins the k-round game from (Y, N)."""
    game = game or Game(alg)
    return game.exists_wins(game.mask(Y), game.mask(N), k)


def first_losing_round(alg: PartialAlgebra, limit: int | None = None) -> int | None:
    """Least n with the universal player winning the n-round game, if any up to ``limit``."""
    game = Game(alg)
    limit = len(alg) + 1 if limit is None else limit
    for n in range(1, limit + 1):
        for _, opts in game.initial_moves():
            if not any(game.exists_wins(Y, N, n - 1) for Y, N in opts):
                return n
    return None


def dump_strategy(result: GameResult) -> str:
    lines = [f"rounds: {result.rounds}", f"winner: {'exists' if result.exists_wins else 'forall'}"]
    if result.refuting_move is not None:
        lines.append(f"forall opens with: {result.refuting_move.command()}")
    for (pos, move), resp in sorted(result.strategy.items(), key=lambda kv: (len(kv[0][0].Y), kv[0][0].show(), kv[0][1].command())):
        lines.append(f"{pos.show()} {move.command()} -> {resp.show()}")
    return "\n".join(lines) + "\n"
