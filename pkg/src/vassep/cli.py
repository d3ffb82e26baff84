"""Command-line front end.

Exit codes: 0 separable (or a passing check), 1 not separable (or a failing
check), 2 unknown, 3 malformed input.  Results are printed as JSON with
sorted keys so that output is byte-for-byte reproducible.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from . import automata as au
from . import decide as dc
from . import jsonio
from . import vass as vs
from .errors import BudgetExceeded, InputError, VassepError
from .limits import DEFAULT, Limits, from_env
from .separators import build_separator
from .words import drop, format_word, mu, parse_word, phi, word_dim

EXIT_SEPARABLE, EXIT_NOT_SEPARABLE, EXIT_UNKNOWN, EXIT_INPUT = 0, 1, 2, 3

TARGET_OF = {"z": "Z", "d1": "D", "cn": "C"}


def _emit(doc, out=None) -> None:
    (out or sys.stdout).write(jsonio.dumps(doc) + "\n")


def _limits(args) -> Limits:
    try:
        base = from_env(DEFAULT)
    except ValueError as exc:
        raise InputError(f"bad {exc}") from None
    return base.with_(max_states=getattr(args, "budget_states", None),
                      max_steps=getattr(args, "budget_steps", None),
                      max_k=getattr(args, "max_k", None))


def _parse_word_arg(text: str):
    try:
        return parse_word(text)
    except ValueError as exc:
        raise InputError(f"bad word {text!r}: {exc}") from None


def _outcome_doc(res, limits: Limits) -> tuple[dict, int]:
    if isinstance(res, dc.Separable):
        doc = {"result": "separable"}
        if res.certificate is not None:
            doc["certificate"] = res.certificate.to_json()
        return doc, EXIT_SEPARABLE
    if isinstance(res, dc.NotSeparable):
        doc = {"result": "not_separable", "verified": res.verified}
        if res.witness is not None:
            doc["witness"] = list(res.witness)
            doc["witness_text"] = format_word(res.witness)
        return doc, EXIT_NOT_SEPARABLE
    return {"result": "unknown", "reason": res.reason,
            "budget": {"max_states": limits.max_states, "max_steps": limits.max_steps,
                       "max_k": limits.max_k}}, EXIT_UNKNOWN


# -- subcommands -----------------------------------------------------------------


def cmd_decide(args) -> int:
    limits = _limits(args)
    doc = jsonio.load_text(args.input)
    if args.via_generator:
        v = jsonio.from_document(doc, "vass")
        regular = jsonio.from_document(jsonio.load_text(args.regular), "nfa") \
            if args.regular else au.universal(v.dim_alphabet)
        a, target = dc.reduce_vass_query(regular, v, limits)
        if target.kind != TARGET_OF[args.target]:
            raise InputError(f"a {v.mode.value}-mode VASS reduces to target {target.kind}, "
                             f"not {TARGET_OF[args.target]}")
        a = au.trim(a)
    else:
        a = jsonio.from_document(doc, "nfa")
    if args.target == "z":
        res = dc.decide_regular_vs_Z(a, limits=limits)
    elif args.target == "d1":
        if a.dim != 1:
            raise InputError("target d1 needs a one-dimensional automaton")
        res = dc.decide_regular_vs_D1(a, limits=limits, use_lcm=args.lcm_modulus)
    else:
        res = dc.decide_regular_vs_Cn(a, limits=limits)
    if isinstance(res, dc.NotSeparable) and res.witness is not None \
            and args.witness_max_len is not None and len(res.witness) > args.witness_max_len:
        target = {"z": dc.Zn(a.dim), "d1": dc.D1, "cn": dc.Cn(a.dim)}[args.target]
        shorter = dc.bounded_target_intersection(a, target, args.witness_max_len, limits)
        if shorter is not None:
            res = dc.NotSeparable(shorter)
    out, code = _outcome_doc(res, limits)
    if args.emit_cert and isinstance(res, dc.Separable) and res.certificate is not None:
        Path(args.emit_cert).write_text(jsonio.dumps(res.certificate.to_json()) + "\n")
    _emit(out)
    return code


def cmd_build(args) -> int:
    spec = jsonio.separator_from_json(jsonio.load_text(args.spec))
    _emit(jsonio.nfa_to_json(au.minimize(build_separator(spec)) if args.minimize
                             else build_separator(spec)))
    return 0


def cmd_verify(args) -> int:
    limits = _limits(args)
    a = jsonio.from_document(jsonio.load_text(args.nfa), "nfa")
    cert = jsonio.from_document(jsonio.load_text(args.certificate), "certificate")
    ok, diag = dc.verify_certificate(a, cert, max_len=args.max_len, limits=limits)
    _emit({"ok": ok, "diagnostics": diag})
    return 0 if ok else 1


def cmd_vass(args) -> int:
    limits = _limits(args)
    v = jsonio.from_document(jsonio.load_text(args.input), "vass")
    if args.action == "enumerate":
        words = vs.language_upto(v, args.max_len, args.counter_cap, limits=limits)
        _emit({"words": [list(w) for w in sorted(words, key=lambda w: (len(w), w))]})
    elif args.action == "km":
        tree = vs.karp_miller(v, limits)
        nonempty, w = vs.cover_nonempty(v, limits)
        doc = {"nodes": len(tree.nodes), "coverable": nonempty,
               "target_markings": [_marking(m) for m in sorted(set(tree.markings_at(v.target)))]}
        if w is not None:
            doc["witness"] = list(w)
        if v.dim_alphabet and all(t.label is None or t.label > 0 for t in v.transitions):
            doc["sup"] = vs.sup_coverability(v, limits)
        _emit(doc)
    elif args.action == "hat-bounded":
        _emit(jsonio.vass_to_json(vs.hat_bounded(v)))
    elif args.action == "hat-sup":
        _emit(jsonio.vass_to_json(vs.hat_sup(v)))
    elif args.action == "tilde":
        _emit(jsonio.vass_to_json(vs.sup_tilde(v)))
    else:
        _emit(jsonio.transducer_to_json(vs.to_generator(v)))
    return 0


def _marking(m) -> list:
    return ["omega" if x == float("inf") else int(x) for x in m]


def cmd_words(args) -> int:
    w = _parse_word_arg(args.word)
    if args.op == "phi":
        n = args.n if args.n is not None else word_dim(w)
        _emit(list(phi(w, n)))
    elif args.op in ("drop", "mu", "sigma") and word_dim(w) > 1:
        raise InputError(f"{args.op} is defined for one-dimensional words")
    elif args.op == "drop":
        _emit(drop(w))
    elif args.op == "mu":
        _emit(mu(w))
    else:
        _emit(list(dc.sigma(w).as_tuple()))
    return 0


def cmd_oracle(args) -> int:
    limits = _limits(args)
    a = jsonio.from_document(jsonio.load_text(args.input), "nfa")
    if args.target == "d1" and a.dim != 1:
        raise InputError("target d1 needs a one-dimensional automaton")
    target = {"z": dc.Zn(a.dim), "d1": dc.D1, "cn": dc.Cn(a.dim)}[args.target]
    w = dc.bounded_target_intersection(a, target, args.max_len, limits)
    if w is None:
        _emit({"found": False, "max_len": args.max_len})
        return 0
    _emit({"found": True, "witness": list(w), "witness_text": format_word(w)})
    return 1


# -- parser ----------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors use the input-error exit code
    (argparse's own code 2 would read as "unknown")."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="vassep", description=(
        "Regular separability of walk languages: deciders, separator "
        "automata, VASS constructions and certificate checking."))
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    budget = _Parser(add_help=False)
    budget.add_argument("--budget-states", type=int, help="cap on explored automaton states")
    budget.add_argument("--budget-steps", type=int, help="cap on VASS search steps")

    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decide", parents=[budget], help="decide separability from a target")
    d.add_argument("target", choices=sorted(TARGET_OF))
    d.add_argument("input", help="NFA document (or VASS with --via-generator)")
    d.add_argument("--max-k", type=int, help="cap for the orthant cover search")
    d.add_argument("--lcm-modulus", action="store_true",
                   help="use lcm(1..n) instead of n! as the modulus for d1")
    d.add_argument("--emit-cert", metavar="FILE", help="write the certificate here")
    d.add_argument("--witness-max-len", type=int,
                   help="look for a witness of at most this length to report instead")
    d.add_argument("--via-generator", action="store_true",
                   help="input is a VASS; decide the regular language given by --regular "
                        "(default: all words) against it")
    d.add_argument("--regular", help="NFA document used with --via-generator")
    d.set_defaults(func=cmd_decide)

    b = sub.add_parser("build", help="automaton for a separator spec")
    b.add_argument("spec", help="separator spec as inline JSON or a file")
    b.add_argument("--minimize", action="store_true")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", parents=[budget], help="check a certificate against an NFA")
    v.add_argument("nfa")
    v.add_argument("certificate")
    v.add_argument("--max-len", type=int, default=10,
                   help="length bound for the target-disjointness check")
    v.set_defaults(func=cmd_verify)

    x = sub.add_parser("vass", parents=[budget], help="VASS constructions")
    x.add_argument("action", choices=["enumerate", "km", "hat-bounded", "hat-sup", "tilde",
                                      "to-generator"])
    x.add_argument("input")
    x.add_argument("--max-len", type=int, default=6)
    x.add_argument("--counter-cap", type=int, default=8)
    x.set_defaults(func=cmd_vass)

    w = sub.add_parser("words", help="word functions")
    w.add_argument("op", choices=["phi", "drop", "mu", "sigma"])
    w.add_argument("word", help='signed letters, e.g. "1 -1 2"')
    w.add_argument("--n", type=int, help="dimension for phi")
    w.set_defaults(func=cmd_words)

    o = sub.add_parser("oracle", parents=[budget], help="bounded search for a word in the target")
    o.add_argument("target", choices=sorted(TARGET_OF))
    o.add_argument("input")
    o.add_argument("--max-len", type=int, default=12)
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        _emit({"result": "unknown", "reason": str(exc)})
        return EXIT_UNKNOWN
    except (ValueError, VassepError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
