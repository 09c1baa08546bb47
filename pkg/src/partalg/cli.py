"""Command-line entry point.

Exit codes: 0 positive verdict or success, 1 negative verdict, 2 usage or
input error, 3 inconclusive (a resource cap was hit).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import counterexamples as cx
from .algebra import AlgebraError, PartialAlgebra, totalise, validate
from .equations import decide_validity, find_countermodel, parse_equation
from .games import (
    decide_game, dump_strategy, gen_mu, gen_rho, holds, parse_formula, play_interactive, show,
    translate_to_relational,
)
from .io import (
    PFRepresentation, ParseError, algebra_from_obj, algebra_to_obj, document_kind,
    parse_representation, representation_to_obj, serialize_algebra, serialize_representation,
)
from .meet import FILTER_CAP, SUITE_IDS, birkhoff_representation, check_axioms, suite_for
from .repsearch import (
    DEFAULT_CAP, Inconclusive, RepCertificate, build_representation, decide_representable,
    to_pf_representation, verify_lesssim_complete, verify_pf_representation, verify_representation,
)

OK, NEGATIVE, USAGE, INCONCLUSIVE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(USAGE)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_algebra(path: str, check: bool = True, allow_degenerate: bool = False) -> PartialAlgebra:
    text = _read(path)
    kind = document_kind(text)
    if kind != "algebra":
        raise ParseError(f"expected an algebra document, got {kind}", path)
    doc = json.loads(text)
    doc.pop("kind", None)
    return algebra_from_obj(doc, allow_degenerate=allow_degenerate, check=check)


def _emit(args, text: str, obj=None):
    if args.format == "json" and obj is not None:
        text = json.dumps(obj, indent=2) + "\n"
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands ------------------------------------------------------------------


def cmd_validate(args) -> int:
    alg = _load_algebra(args.file, check=False)
    problems = validate(alg, allow_degenerate=args.allow_degenerate)
    lines = [str(v) for v in problems]
    text = "valid\n" if not problems else "invalid\n" + "".join(f"  {x}\n" for x in lines)
    _emit(args, text, {"valid": not problems, "violations": lines})
    return OK if not problems else NEGATIVE


def _decide(args, alg):
    return decide_representable(alg, cap=args.cap, allow_degenerate=args.allow_degenerate,
                                via_zero=args.via_zero)


def cmd_repcheck(args) -> int:
    alg = _load_algebra(args.file, allow_degenerate=args.allow_degenerate)
    res = _decide(args, alg)
    if isinstance(res, RepCertificate):
        text = f"representable: {len(res.point_types)} point types, {res.nodes} search nodes\n"
        text += "".join(f"  p{i}: {{{','.join(sorted(p, key=alg.index.get))}}}\n" for i, p in enumerate(res.point_types))
        obj = {"verdict": "representable", "nodes": res.nodes,
               "point_types": [sorted(p, key=alg.index.get) for p in res.point_types]}
        _emit(args, text, obj)
        return OK
    if isinstance(res, Inconclusive):
        text = f"inconclusive: node cap {res.cap} reached while trying to {res.requirement}\n"
        _emit(args, text, {"verdict": "inconclusive", "nodes": res.nodes, "requirement": res.requirement})
        return INCONCLUSIVE
    text = f"not representable: no point type can {res.requirement} ({res.reason})\n"
    _emit(args, text, {"verdict": "not representable", "nodes": res.nodes,
                       "requirement": res.requirement, "reason": res.reason})
    return NEGATIVE


def cmd_represent(args) -> int:
    alg = _load_algebra(args.file, allow_degenerate=args.allow_degenerate)
    res = _decide(args, alg)
    if isinstance(res, Inconclusive):
        print(f"inconclusive: node cap {res.cap} reached", file=sys.stderr)
        return INCONCLUSIVE
    if not isinstance(res, RepCertificate):
        print(f"not representable: no point type can {res.requirement}", file=sys.stderr)
        return NEGATIVE
    rep = build_representation(alg, res)
    if args.pf:
        rep = to_pf_representation(alg, rep)
    _emit(args, serialize_representation(rep), representation_to_obj(rep))
    return OK


def cmd_verify(args) -> int:
    text = _read(args.file)
    kind = document_kind(text)
    if not kind.endswith("representation"):
        raise ParseError(f"expected a representation document, got {kind}", args.file)
    rep = parse_representation(text)
    alg = _load_algebra(args.against, allow_degenerate=True)
    if isinstance(rep, PFRepresentation):
        problems = verify_pf_representation(alg, rep)
    else:
        problems = verify_representation(alg, rep)
        if not problems and args.lesssim_cap:
            problems = verify_lesssim_complete(alg, rep, cap=args.lesssim_cap)
    text = "verified\n" if not problems else "not a representation\n" + "".join(f"  {p}\n" for p in problems)
    _emit(args, text, {"verified": not problems, "problems": problems})
    return OK if not problems else NEGATIVE


def cmd_game(args) -> int:
    alg = _load_algebra(args.file)
    rounds = "omega" if args.rounds is None else args.rounds
    res = decide_game(alg, rounds, strategy=args.strategy)
    who = "exists" if res.exists_wins else "forall"
    if args.strategy:
        text = dump_strategy(res)
    else:
        text = f"{who} wins the {rounds}-round game\n"
        if res.refuting_move is not None:
            text += f"forall opens with: {res.refuting_move.command()}\n"
    obj = {"rounds": rounds, "winner": who,
           "refuting_move": res.refuting_move.command() if res.refuting_move else None}
    _emit(args, text, obj)
    return OK if res.exists_wins else NEGATIVE


def cmd_play(args) -> int:
    alg = _load_algebra(args.file)
    if args.moves is not None:
        source = _read(args.moves).splitlines()
        out = sys.stdout
    elif sys.stdin.isatty():
        source = sys.stdin
        out = sys.stdout
    else:
        print("play: stdin is not a terminal; supply a move script with --moves", file=sys.stderr)
        return USAGE
    t = play_interactive(alg, args.role, source, out=out, rounds=args.rounds)
    if t.status != "finished":
        return USAGE
    return OK if t.winner == "E" else NEGATIVE


def cmd_rho(args) -> int:
    if args.mu is not None:
        V, W = (part.split(",") if part else [] for part in args.mu)
        f = gen_mu(args.n, V, W)
    else:
        f = gen_rho(args.n)
    if args.check is None:
        _emit(args, show(f) + "\n", {"formula": show(f)})
        return OK
    alg = _load_algebra(args.check)
    ok = holds(alg, f)
    _emit(args, f"{'holds' if ok else 'fails'}\n", {"holds": ok})
    return OK if ok else NEGATIVE


def cmd_translate(args) -> int:
    psi = parse_formula(args.formula)
    tr = translate_to_relational(psi, with_info=True)
    if args.check is None:
        _emit(args, show(tr.formula) + "\n", {"formula": show(tr.formula), "grounded_sets": len(tr.grounded)})
        return OK
    alg = _load_algebra(args.check)
    total = holds(totalise(alg), psi)
    relational = holds(alg, tr.formula)
    text = f"totalised: {'holds' if total else 'fails'}; relational: {'holds' if relational else 'fails'}\n"
    _emit(args, text, {"totalised": total, "relational": relational})
    if total != relational:
        return NEGATIVE
    return OK if relational else NEGATIVE


def cmd_axioms(args) -> int:
    alg = _load_algebra(args.file)
    suite = args.suite or suite_for(alg.signature)
    found = check_axioms(alg, suite)
    text = f"{suite}: all axioms hold\n" if not found else "".join(v.describe() + "\n" for v in found)
    obj = {"suite": suite, "violations": [{"axiom": v.axiom, "assignment": v.assignment} for v in found]}
    _emit(args, text, obj)
    return OK if not found else NEGATIVE


def cmd_birkhoff(args) -> int:
    alg = _load_algebra(args.file)
    suite = args.suite or suite_for(alg.signature)
    found = check_axioms(alg, suite)
    if found:
        for v in found:
            print(v.describe(), file=sys.stderr)
        return NEGATIVE
    rep = birkhoff_representation(alg, suite, cap=args.filter_cap)
    _emit(args, serialize_representation(rep), representation_to_obj(rep))
    return OK


GENERATORS = {"X": cx.gen_X, "A": cx.gen_A, "Aminus": cx.gen_A_minus, "B": cx.gen_B}


def cmd_gen(args) -> int:
    if args.family == "perm":
        if args.m != args.n:
            raise AlgebraError("the permutation representation needs m = n")
        rep = cx.perm_representation(args.m, cap=args.perm_cap)
        _emit(args, serialize_representation(rep), representation_to_obj(rep))
        return OK
    alg = GENERATORS[args.family](args.m, args.n)
    _emit(args, serialize_algebra(alg), algebra_to_obj(alg))
    return OK


def cmd_equation(args) -> int:
    eq = parse_equation(args.equation)
    valid = decide_validity(eq)
    text = f"{eq}: {'valid' if valid else 'invalid'}\n"
    obj = {"equation": str(eq), "valid": valid}
    if not valid:
        cm = find_countermodel(eq, args.bound)
        if cm is not None:
            text += f"countermodel: {cm.describe()}\n"
            obj["countermodel"] = cm.assignment
    _emit(args, text, obj)
    return OK if valid else NEGATIVE


def cmd_countermodel(args) -> int:
    eq = parse_equation(args.equation)
    cm = find_countermodel(eq, args.bound)
    if cm is None:
        _emit(args, f"no countermodel over a base of {args.bound} points\n", {"countermodel": None})
        return OK
    obj = {"countermodel": cm.assignment, "lhs": cm.lhs, "rhs": cm.rhs, "base": args.bound}
    _emit(args, f"countermodel: {cm.describe()}\n", obj)
    return NEGATIVE


# -- argument parsing -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("-o", "--output", help="write the result here instead of stdout")

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--cap", type=int, default=DEFAULT_CAP, help="backtracking node cap")
    search.add_argument("--via-zero", action="store_true", help="decide zero signatures through the zero-free reduct")
    search.add_argument("--allow-degenerate", action="store_true", help="accept algebras with no operations")

    p = _Parser(prog="partalg", description="Workbench for finite partial algebras of sets.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", parents=[common], help="check an algebra file")
    s.add_argument("file")
    s.add_argument("--allow-degenerate", action="store_true")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("repcheck", parents=[common, search], help="decide representability by sets")
    s.add_argument("file")
    s.set_defaults(func=cmd_repcheck)

    s = sub.add_parser("represent", parents=[common, search], help="build a representation")
    s.add_argument("file")
    s.add_argument("--pf", action="store_true", help="emit a partial-function representation")
    s.set_defaults(func=cmd_represent)

    s = sub.add_parser("verify", parents=[common], help="check a representation against an algebra")
    s.add_argument("file")
    s.add_argument("--against", required=True, metavar="ALGEBRA")
    s.add_argument("--lesssim-cap", type=int, default=0, metavar="K",
                   help="also check completeness for the derived order on subsets up to size K")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("game", parents=[common], help="solve the representation game")
    s.add_argument("file")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--rounds", type=int)
    g.add_argument("--omega", action="store_true", help="the unbounded game (default)")
    s.add_argument("--strategy", action="store_true", help="dump the winning strategy table")
    s.set_defaults(func=cmd_game)

    s = sub.add_parser("play", parents=[common], help="play the game against the solver")
    s.add_argument("file")
    s.add_argument("--as", dest="role", choices=("forall", "exists"), default="forall")
    s.add_argument("--moves", metavar="SCRIPT", help="read moves from this file instead of the terminal")
    s.add_argument("--rounds", type=int)
    s.set_defaults(func=cmd_play)

    s = sub.add_parser("rho", parents=[common], help="print rho_n (or mu_n) or check it on an algebra")
    s.add_argument("n", type=int)
    s.add_argument("--mu", nargs=2, metavar=("V", "W"), help="comma-separated variable lists")
    s.add_argument("--check", metavar="ALGEBRA")
    s.set_defaults(func=cmd_rho)

    s = sub.add_parser("translate", parents=[common], help="relational translation of a formula")
    s.add_argument("formula")
    s.add_argument("--check", metavar="ALGEBRA")
    s.set_defaults(func=cmd_translate)

    s = sub.add_parser("axioms", parents=[common], help="check an axiom suite")
    s.add_argument("file")
    s.add_argument("--suite", choices=SUITE_IDS)
    s.set_defaults(func=cmd_axioms)

    s = sub.add_parser("birkhoff", parents=[common], help="filter representation for meet signatures")
    s.add_argument("file")
    s.add_argument("--suite", choices=SUITE_IDS)
    s.add_argument("--filter-cap", type=int, default=FILTER_CAP)
    s.set_defaults(func=cmd_birkhoff)

    s = sub.add_parser("gen", parents=[common], help="generate a counterexample algebra")
    s.add_argument("family", choices=(*GENERATORS, "perm"))
    s.add_argument("m", type=int)
    s.add_argument("n", type=int)
    s.add_argument("--perm-cap", type=int, default=cx.PERM_CAP)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("equation", parents=[common], help="decide validity of a (+, 0) equation")
    s.add_argument("equation")
    s.add_argument("--bound", type=int, default=3, help="base size for the countermodel shown")
    s.set_defaults(func=cmd_equation)

    s = sub.add_parser("countermodel", parents=[common], help="search power-set countermodels")
    s.add_argument("equation")
    s.add_argument("--bound", type=int, default=3)
    s.set_defaults(func=cmd_countermodel)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (AlgebraError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
