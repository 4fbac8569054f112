"""Batch command-line frontend.

Exit codes: 0 ok, 1 usage error, 2 parse or validation error, 3 semantic
precondition violated, 4 internal error (a produced witness failed its
replay check).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import analysis, core, fileformat, gadgets, patterns, threshold, translate
from .core import UltimatelyPeriodicWord, format_rational, word
from .errors import (
    AutomatonError,
    ParseError,
    PreconditionError,
    ValidationError,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_INTERNAL = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we want exit 1
        raise UsageError(message)


def _rational_arg(text: str) -> Fraction:
    try:
        return core.parse_rational(text)
    except ValidationError as e:
        raise UsageError(str(e)) from None


def _symbols(text: str) -> tuple[str, ...]:
    return tuple(tok for tok in text.split(",") if tok)


def _word_from(args) -> UltimatelyPeriodicWord:
    prefix = _symbols(args.prefix) if args.prefix else ()
    period = _symbols(args.period)
    if not period:
        raise UsageError("--period must name at least one symbol")
    return word(prefix, period)


def build_parser() -> _Parser:
    parser = _Parser(prog="probuchi", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("classify", help="patterns, ambiguity class and flags")
    p.add_argument("input")

    p = sub.add_parser("translate", help="apply a construction and write the result")
    p.add_argument(
        "--mode",
        required=True,
        choices=[
            "pos2nba",
            "as2dba-all",
            "as2dba-flat",
            "th2gnba",
            "degen",
            "pca2pwa",
            "parity2ldba",
            "ldba2pba",
            "dba2pba",
            "pos2th",
            "complement-pwa",
            "pfa2pwa-value1",
        ],
    )
    p.add_argument("--lambda", dest="lam", metavar="N/D")
    p.add_argument("--k", type=int)
    p.add_argument(
        "--allow-ida",
        action="store_true",
        help="run th2gnba despite an IDA pattern (desk-scale experiments)",
    )
    p.add_argument("input")
    p.add_argument("output")

    for verb, help_text in (
        ("prob", "exact acceptance probability of u v^omega"),
        ("member", "lasso membership for a classical automaton"),
    ):
        p = sub.add_parser(verb, help=help_text)
        p.add_argument("input")
        p.add_argument("--prefix", default="", metavar="a,b")
        p.add_argument("--period", required=True, metavar="c,d")

    p = sub.add_parser("check", help="emptiness / almost-sure non-universality")
    p.add_argument("what", choices=["empty", "nonuniversal-as"])
    p.add_argument("input")
    p.add_argument("--mode", choices=["all", "flat"], default="all")

    p = sub.add_parser("supports", help="Myhill-Nerode support family")
    p.add_argument("input")

    p = sub.add_parser("epsilon", help="value sets and the epsilon ladder")
    p.add_argument("input")
    p.add_argument("--lambda", dest="lam", required=True, metavar="N/D")
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("sample", help="Monte-Carlo estimate (approximate)")
    p.add_argument("input")
    p.add_argument("--prefix", default="", metavar="a,b")
    p.add_argument("--period", required=True, metavar="c,d")
    p.add_argument("--runs", type=int, required=True)
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)

    p = sub.add_parser("gadget", help="write one of the example automata")
    p.add_argument("which", choices=["fig-a", "p-lambda", "p-tilde-lambda"])
    p.add_argument("--lambda", dest="lam", metavar="N/D", default="1/2")
    p.add_argument("output")
    return parser


def _yesno(flag: bool) -> str:
    return "yes" if flag else "no"


def _cmd_classify(args) -> int:
    aut = fileformat.load_automaton(args.input)
    result = patterns.classify(aut)
    for label, wit in (
        ("IDA", result.ida),
        ("IDA_F", result.ida_f),
        ("EDA", result.eda),
        ("EDA_F", result.eda_f),
    ):
        if wit is None:
            print(f"{label}: no")
        else:
            states = f"p={wit.p}" + (f", q={wit.q}" if wit.q is not None else "")
            print(f"{label}: yes ({states}, v={','.join(wit.v)})")
    print(f"class: {result.degree}")
    print(f"flat: {_yesno(result.flat)}")
    print(f"hpba: {'n/a' if result.hpba is None else _yesno(result.hpba)}")
    print(f"spba: {'n/a' if result.spba is None else _yesno(result.spba)}")
    print(f"weak: {_yesno(result.weak)}")
    print(f"unambiguous: {_yesno(result.unambiguous)}")
    return EXIT_OK


def _require_prob(aut, what: str) -> core.ProbAutomaton:
    if not isinstance(aut, core.ProbAutomaton):
        raise PreconditionError(f"{what} expects a probabilistic automaton")
    return aut


def _require_nondet(aut, what: str) -> core.NondetAutomaton:
    if not isinstance(aut, core.NondetAutomaton):
        raise PreconditionError(f"{what} expects a classical automaton")
    return aut


def _need_lambda(args) -> Fraction:
    if args.lam is None:
        raise UsageError(f"--lambda is required for mode {args.mode}")
    return _rational_arg(args.lam)


def _cmd_translate(args) -> int:
    aut = fileformat.load_automaton(args.input)
    mode = args.mode
    if mode == "pos2nba":
        out = translate.positive_to_nba(_require_prob(aut, mode))
    elif mode == "as2dba-all":
        out = translate.almost_sure_to_dba(_require_prob(aut, mode), analysis.MODE_ALL_RUNS)
    elif mode == "as2dba-flat":
        out = translate.almost_sure_to_dba(_require_prob(aut, mode), analysis.MODE_FLAT)
    elif mode == "th2gnba":
        if args.k is None:
            raise UsageError("--k is required for mode th2gnba")
        out = threshold.threshold_to_gnba(
            _require_prob(aut, mode), _need_lambda(args), args.k, allow_ida=args.allow_ida
        )
    elif mode == "degen":
        out = core.degeneralize(_require_nondet(aut, mode))
    elif mode == "pca2pwa":
        out = translate.pca_to_pwa(_require_prob(aut, mode))
    elif mode == "parity2ldba":
        out = translate.parity_to_unambiguous_ldba(_require_nondet(aut, mode))
    elif mode == "ldba2pba":
        out = translate.ldba_to_pba(_require_nondet(aut, mode))
    elif mode == "dba2pba":
        out = translate.dba_to_pba(_require_nondet(aut, mode))
    elif mode == "pos2th":
        out = translate.positive_to_threshold(_require_prob(aut, mode), _need_lambda(args))
    elif mode == "complement-pwa":
        out = translate.complement_pwa(_require_prob(aut, mode))
    else:  # pfa2pwa-value1
        out = translate.pfa_to_pwa_value1(_require_prob(aut, mode))
    fileformat.save_automaton(out, args.output)
    return EXIT_OK


def _cmd_prob(args) -> int:
    aut = _require_prob(fileformat.load_automaton(args.input), "prob")
    w = _word_from(args)
    if aut.kind == core.PK_FINITE:
        # finite-word automata read prefix.period once as a finite word
        value = analysis.pfa_acceptance(aut, w.prefix + w.period)
    else:
        value = analysis.acceptance_probability(core.trim(aut), w)
    print(format_rational(value))
    return EXIT_OK


def _cmd_member(args) -> int:
    aut = _require_nondet(fileformat.load_automaton(args.input), "member")
    print("true" if analysis.member_nondet(aut, _word_from(args)) else "false")
    return EXIT_OK


def _cmd_check(args) -> int:
    aut = fileformat.load_automaton(args.input)
    if args.what == "empty":
        nba = _require_nondet(aut, "check empty")
        witness = analysis.is_empty_nba(nba)
        if witness is None:
            print("empty")
        else:
            if not analysis.member_nondet(nba, witness):
                print("internal error: emptiness witness failed replay", file=sys.stderr)
                return EXIT_INTERNAL
            print("nonempty")
            print(f"witness: {witness}")
        return EXIT_OK
    pba = _require_prob(aut, "check nonuniversal-as")
    mode = analysis.MODE_FLAT if args.mode == "flat" else analysis.MODE_ALL_RUNS
    witness = analysis.non_universal_witness_almost_sure(pba, mode)
    if witness is None:
        print("universal")
    else:
        value = analysis.acceptance_probability(core.trim(pba), witness)
        if value >= 1:
            print("internal error: non-universality witness failed replay", file=sys.stderr)
            return EXIT_INTERNAL
        print("non-universal")
        print(f"witness: {witness}")
    return EXIT_OK


def _cmd_supports(args) -> int:
    pba = core.trim(_require_prob(fileformat.load_automaton(args.input), "supports"))
    family = analysis.myhill_nerode_supports(pba)
    idx = pba.state_index
    for s in family.supports:
        print("support: {" + ",".join(sorted(s, key=idx.__getitem__)) + "}")
    print(f"count: {len(family)}")
    return EXIT_OK


def _cmd_epsilon(args) -> int:
    pba = _require_prob(fileformat.load_automaton(args.input), "epsilon")
    pba = core.trim(pba)
    lam = _rational_arg(args.lam)
    ladder = threshold.compute_epsilon(pba, lam, args.k)
    base = sorted(pba.edge_probabilities())
    v_lam = threshold.compute_value_set(base, lam)
    print(f"lambda: {format_rational(lam)}")
    print("V>=lambda: " + " ".join(format_rational(v) for v in v_lam.values))
    for j, eps in enumerate(ladder.eps, start=1):
        print(f"epsilon_{j}: {format_rational(eps)}")
        v_eps = threshold.compute_value_set(base, eps)
        print(
            f"V>=epsilon_{j}: " + " ".join(format_rational(v) for v in v_eps.values)
        )
    return EXIT_OK


def _cmd_sample(args) -> int:
    pba = _require_prob(fileformat.load_automaton(args.input), "sample")
    result = analysis.monte_carlo(
        core.trim(pba), _word_from(args), args.runs, args.horizon, args.seed
    )
    print(f"estimate: {result.estimate:.6g} (approx)")
    print(f"stderr: {result.stderr:.6g} (approx)")
    print(f"fork_tail_stat: {result.fork_tail_stat:.6g} (approx)")
    return EXIT_OK


def _cmd_gadget(args) -> int:
    lam = _rational_arg(args.lam)
    if args.which == "fig-a":
        aut = gadgets.gadget_fig_a()
    elif args.which == "p-lambda":
        aut = gadgets.gadget_p_lambda(lam)
    else:
        aut = gadgets.gadget_p_tilde_lambda(lam)
    fileformat.save_automaton(aut, args.output)
    return EXIT_OK


_COMMANDS = {
    "classify": _cmd_classify,
    "translate": _cmd_translate,
    "prob": _cmd_prob,
    "member": _cmd_member,
    "check": _cmd_check,
    "supports": _cmd_supports,
    "epsilon": _cmd_epsilon,
    "sample": _cmd_sample,
    "gadget": _cmd_gadget,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.verb](args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, ValidationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except AutomatonError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
