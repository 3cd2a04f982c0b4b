"""Command line: ``hecm factor``, ``hecm curve`` and ``hecm stats``."""

import argparse
import json
import sys

from hecm.curvegen import (MULTIPLES, T_PARAM, ConditionViolation, CurveParams,
                           build_curve_system, certificate, nth_curve, rational_str)
from hecm.driver import NotComposite, RunConfig, hecm_run, hecm_stage1
from hecm.modring import FactorSignal, Ring
from hecm.multiplier import lcm_multiplier
from hecm.weierstrass import CubicCurveXZ, to_short_weierstrass

EXIT_FACTOR, EXIT_USAGE, EXIT_EXHAUSTED = 0, 1, 2
STRATEGIES = {"multiples": MULTIPLES, "t": T_PARAM}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _params(text):
    try:
        return CurveParams.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser():
    parser = _Parser(prog="hecm", description="Factor integers with genus-2 Kummer surfaces.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("factor", help="look for a factor of n")
    f.add_argument("n", type=int)
    f.add_argument("--b1", type=_positive_int, required=True)
    f.add_argument("--b2", type=int, default=0, help="stage-2 bound, 0 disables stage 2")
    f.add_argument("--curves", type=_positive_int, default=100)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--params", type=_params, help="explicit s,u,v such as 1/2,2,9")
    f.add_argument("--strategy", choices=sorted(STRATEGIES), default="multiples")
    f.add_argument("--single-word", action="store_true")
    f.add_argument("--threads", type=_positive_int, default=1)
    f.add_argument("--json", action="store_true")
    f.add_argument("--dump-handoff", metavar="PATH",
                   help="write short Weierstrass data for both curves after stage 1")
    f.add_argument("--verbose", action="store_true", help="one log line per trial on stderr")

    c = sub.add_parser("curve", help="print a curve certificate")
    c.add_argument("--params", type=_params)
    c.add_argument("--seed", type=int)
    c.add_argument("--index", type=int, default=0)
    c.add_argument("--strategy", choices=sorted(STRATEGIES), default="multiples")
    c.add_argument("--n", type=int, help="modulus for the stage-2 handoff block")
    c.add_argument("--b1", type=_positive_int, help="map [k]P instead of P in the handoff block")

    s = sub.add_parser("stats", help="2-adic valuation of elliptic group orders")
    s.add_argument("--samples", type=_positive_int, default=500)
    s.add_argument("--prime-bits", type=int, default=17)
    s.add_argument("--pmin", type=int, help="overrides --prime-bits")
    s.add_argument("--pmax", type=int, help="overrides --prime-bits")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--alt-param", action="store_true", help="use the t-parametrization")
    return parser


def _dump(obj):
    return json.dumps(obj, indent=2)


def handoff_block(cs, n, B1=None):
    """Short Weierstrass data for the images of P (or of [k]P) on both curves, mod n."""
    out = {}
    k = lcm_multiplier(B1) if B1 else 1
    res = hecm_stage1(n, k, cs)
    if isinstance(res, FactorSignal):
        return {"factor_signal": {"g": str(res.g), "kind": res.kind}}
    ring = Ring(n)
    for name, P, model in zip(("E1", "E2"), res, (cs.e1, cs.e2)):
        try:
            sw = to_short_weierstrass(P, CubicCurveXZ.from_model(model, ring))
        except FactorSignal as sig:
            out[name] = {"factor_signal": {"g": str(sig.g), "kind": sig.kind}}
        else:
            out[name] = sw.as_dict()
    return out


def cmd_factor(args, out=sys.stdout, err=sys.stderr):
    try:
        cfg = RunConfig(n=args.n, B1=args.b1, B2=args.b2, max_curves=args.curves,
                        seed=args.seed, strategy=STRATEGIES[args.strategy],
                        single_word=args.single_word, threads=args.threads, params=args.params)
    except ValueError as exc:
        raise UsageError(str(exc))
    log = None
    if args.verbose:
        def log(rep):
            print(f"trial {rep.index} ({','.join(rep.curve)}): {rep.outcome}"
                  + (f" stage={rep.stage}" if rep.stage else ""), file=err)
    try:
        result = hecm_run(cfg, log=log)
    except NotComposite as exc:
        raise UsageError(str(exc))
    except ConditionViolation as exc:
        raise UsageError(str(exc))
    if args.dump_handoff and result.trials:
        cs = build_curve_system(args.params) if args.params else None
        if cs is None:
            cs = nth_curve(args.seed, result.trials[-1].index, strategy=STRATEGIES[args.strategy])
        with open(args.dump_handoff, "w") as fh:
            for name, block in handoff_block(cs, args.n, args.b1).items():
                fh.write(f"# {name}\n")
                for key, value in block.items():
                    fh.write(f"{key}={value}\n")
    if args.json:
        record = output_record(result, cfg)
        print(_dump(record), file=out)
    elif result.factor is not None:
        print(f"factor: {result.factor}", file=out)
        print(f"cofactor: {result.cofactor}", file=out)
    else:
        print("no factor found", file=out)
    return EXIT_FACTOR if result.factor is not None else EXIT_EXHAUSTED


def output_record(result, cfg):
    return {
        "schema": 1,
        "n": str(result.n),
        "factor": None if result.factor is None else str(result.factor),
        "cofactor": None if result.factor is None else str(result.cofactor),
        "method": result.method,
        "trials": len(result.trials),
        "reports": [t.as_dict() for t in result.trials],
        "ops": result.total_ops().as_dict(),
        "config": cfg.as_dict(),
    }


def cmd_curve(args, out=sys.stdout, err=sys.stderr):
    if args.params is None and args.seed is None:
        raise UsageError("curve needs --params or --seed")
    if args.params is not None:
        cs = build_curve_system(args.params)
    else:
        cs = nth_curve(args.seed, args.index, strategy=STRATEGIES[args.strategy])
    data = certificate(cs)
    data["handoff"] = {
        name: {"a4": rational_str(e.a4 - e.a2 ** 2 / 3),
               "a6": rational_str(e.a6 - e.a2 * e.a4 / 3 + 2 * e.a2 ** 3 / 27)}
        for name, e in (("E1", cs.e1), ("E2", cs.e2))
    }
    if args.n is not None:
        data["handoff"]["modular"] = handoff_block(cs, args.n, args.b1)
    print(_dump(data), file=out)
    return 0


def cmd_stats(args, out=sys.stdout, err=sys.stderr):
    from hecm.oracle import torsion_statistics

    pmin = args.pmin if args.pmin is not None else 2 ** (args.prime_bits - 1)
    pmax = args.pmax if args.pmax is not None else 2 ** args.prime_bits - 1
    if not 5 <= pmin <= pmax:
        raise UsageError("prime range must satisfy 5 <= pmin <= pmax")
    stats = torsion_statistics(args.samples, pmin, pmax, args.seed,
                               T_PARAM if args.alt_param else MULTIPLES)
    print(_dump(stats.as_dict()), file=out)
    return 0


COMMANDS = {"factor": cmd_factor, "curve": cmd_curve, "stats": cmd_stats}


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out, err)
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except ConditionViolation as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
