"""Command line front end.

Every subcommand writes exact rationals as ``p/q`` strings.  Validation
failures print ``{"error": code, "message": ...}`` to stderr and exit with
status 2; a missing filling inside the truncation exits with 3.
"""

from __future__ import annotations

import argparse
import json
import sys

from .averaging import FOLNER_KINDS, FolnerSequence, average
from .chains import chain_from_json, chain_to_json, l1_norm
from .errors import CycleError, MalformedInput
from .estimate import estimate_bound, split_and_decompose
from .groups import parse_extension, parse_group
from .pipeline import (_load_json, convergence_experiment, efficient_cycle, load_config,
                       rows_to_csv, rows_to_json)
from .seminorm import Truncation, seminorm_upper_bound


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise MalformedInput(f"{self.prog}: {message}")


def _emit(obj):
    sys.stdout.write(json.dumps(obj, indent=1) + "\n")


def _read_chain(path, group=None, module=None):
    return chain_from_json(_load_json(path), group, module)


def _module(args, gamma):
    if not getattr(args, "module", None):
        return None
    from .twisted import NormedModule
    return NormedModule.from_json(_load_json(args.module), gamma)


def _setting(args):
    """(ext, chain, folner) from --config or from --group/--normal/--chain."""
    if args.config:
        cfg = load_config(args.config)
        ext, c = cfg.inp.ext, cfg.inp.c
        folner = cfg.inp.folner
        if args.folner:
            folner = FolnerSequence(ext, args.folner)
        return ext, c, folner
    if not (args.group and args.normal and args.chain):
        raise MalformedInput("give --config or all of --group, --normal and --chain")
    ext = parse_extension(args.group, args.normal, args.quotient)
    c = _read_chain(args.chain, ext.gamma, _module(args, ext.gamma))
    folner = FolnerSequence(ext, args.folner) if args.folner else None
    return ext, c, folner


def _need_folner(folner):
    if folner is None:
        raise MalformedInput("a Følner sequence is required (--folner)")
    return folner


def cmd_norm(args):
    data = _load_json(args.chain)
    group = parse_group(args.group) if args.group else None
    c = chain_from_json(data, group)
    print(l1_norm(c))


def cmd_average(args):
    ext, c, folner = _setting(args)
    out = average(c, _need_folner(folner)(args.k), ext, args.method)
    _emit(chain_to_json(out) | {"norm": str(l1_norm(out))})


def cmd_estimate(args):
    ext, c, folner = _setting(args)
    decomp = split_and_decompose(ext, c, args.epsilon)
    cert = estimate_bound(decomp, _need_folner(folner)(args.k))
    _emit(cert.to_json() | {"k": args.k})


def cmd_seminorm(args):
    group = parse_group(args.group) if args.group else None
    c = _read_chain(args.chain, group)
    t = Truncation.standard(c.group, args.radius)
    _emit(seminorm_upper_bound(c, t).to_json())


def cmd_converge(args):
    cfg = load_config(args.config)
    kmax = args.kmax or cfg.kmax
    if not kmax:
        raise MalformedInput("--kmax is required")
    exp = convergence_experiment(cfg.inp, int(kmax), m=args.m, epsilon=args.epsilon,
                                 adaptive=args.adaptive or cfg.adaptive, constant=args.constant,
                                 workers=args.workers)
    if args.format == "csv":
        sys.stdout.write(rows_to_csv(exp.rows))
    else:
        _emit({"K": str(exp.constant), "S": [list(s.coords) for s in sorted(exp.decomposition.S)],
               "epsilon": str(exp.decomposition.epsilon), "rows": rows_to_json(exp.rows)})


def cmd_recipe(args):
    cfg = load_config(args.config)
    out = efficient_cycle(cfg.inp, args.k, args.m)
    _emit(chain_to_json(out) | {"k": args.k, "m": args.m, "norm": str(l1_norm(out))})


def build_parser():
    p = _Parser(prog="folner-cycles", description="Følner averaging of group-homology cycles.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("norm", help="l1 norm of a chain")
    s.add_argument("chain")
    s.add_argument("--group")
    s.set_defaults(func=cmd_norm)

    def setting(s):
        s.add_argument("--config")
        s.add_argument("--group")
        s.add_argument("--normal")
        s.add_argument("--quotient")
        s.add_argument("--chain")
        s.add_argument("--module")
        s.add_argument("--folner", choices=[k for k in FOLNER_KINDS if k != "adaptive"])
        s.add_argument("--k", type=int, required=True)

    s = sub.add_parser("average", help="average a chain over F_k")
    setting(s)
    s.add_argument("--method", default="auto", choices=["auto", "brute", "convolution"])
    s.set_defaults(func=cmd_average)

    s = sub.add_parser("estimate", help="push-forward estimate certificate")
    setting(s)
    s.add_argument("--epsilon", type=_rational)
    s.set_defaults(func=cmd_estimate)

    s = sub.add_parser("seminorm", help="l1-seminorm upper bound in a truncation")
    s.add_argument("--chain", required=True)
    s.add_argument("--group")
    s.add_argument("--radius", type=int, default=1)
    s.set_defaults(func=cmd_seminorm)

    s = sub.add_parser("converge", help="convergence table for the recipe")
    s.add_argument("--config", required=True)
    s.add_argument("--kmax", type=int)
    s.add_argument("--m", type=int, default=0)
    s.add_argument("--epsilon", type=_rational)
    s.add_argument("--adaptive", action="store_true")
    s.add_argument("--constant", choices=["max", "sum"], default="max")
    s.add_argument("--format", choices=["csv", "json"], default="csv")
    s.add_argument("--workers", type=int, default=1, help="processes used for the rows")
    s.set_defaults(func=cmd_converge)

    s = sub.add_parser("recipe", help="the efficient cycle c_{k,m}")
    s.add_argument("--config", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--m", type=int, default=0)
    s.set_defaults(func=cmd_recipe)
    return p


def _rational(text):
    from fractions import Fraction
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad rational {text!r}") from exc


def run_cli(argv=None):
    try:
        args = build_parser().parse_args(argv)
        args.func(args)
    except CycleError as exc:
        sys.stderr.write(json.dumps(exc.to_json()) + "\n")
        return exc.exit_status
    return 0


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
