"""``povminfo`` command line: entropy, condent, mutinfo and verify.

Exit codes: 0 success, 1 usage or parse error, 2 validation error,
3 verification failures.
"""

import argparse
import math
import sys

from .exceptions import ConfigError, DimensionError, ValidationError, ZeroProbabilityError
from .io import ParseError, read_povm, read_state, write_povm, write_povm_pair
from .measure import conditional_entropy_given
from .optimize import OptimizerConfig, maximize_mutual_information, minimize_conditional_entropy
from .qstate import marginals, von_neumann_entropy
from .verify import SweepConfig, SweepSummary, format_value, run_structured_suite, run_sweep

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_VERIFY_FAILED = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


_fmt = format_value


def _unit(args):
    return "nats" if getattr(args, "nats", False) else "bits"


def _scale(args, bits):
    return bits * math.log(2) if getattr(args, "nats", False) else bits


def _optimizer_config(args, **defaults):
    kw = dict(defaults)
    for name in ("restarts", "outcomes_a", "outcomes_b", "max_evals", "tol"):
        value = getattr(args, name)
        if value is not None:
            kw[name] = value
    kw["base_seed"] = args.seed
    return OptimizerConfig(**kw)


def cmd_entropy(args, out):
    rho = read_state(args.state)
    rho_a, rho_b = marginals(rho)
    u = _unit(args)
    print(f"H(A,B) = {_fmt(_scale(args, von_neumann_entropy(rho)))} {u}", file=out)
    print(f"H(A) = {_fmt(_scale(args, von_neumann_entropy(rho_a)))} {u}", file=out)
    print(f"H(B) = {_fmt(_scale(args, von_neumann_entropy(rho_b)))} {u}", file=out)
    return EXIT_OK


def _restart_lines(res, args, out):
    vals = res.per_restart_values
    print(f"restarts = {res.restarts_run}", file=out)
    print(f"warm start value = {_fmt(_scale(args, res.warm_start_value))}", file=out)
    print(f"restart min = {_fmt(_scale(args, vals.min()))}", file=out)
    print(f"restart max = {_fmt(_scale(args, vals.max()))}", file=out)


def cmd_condent(args, out):
    rho = read_state(args.state)
    u = _unit(args)
    if args.povm:
        povm = read_povm(args.povm)
        if povm.dim != rho.split[1]:
            raise DimensionError(f"{args.povm}: POVM dimension {povm.dim} does not match d_B = {rho.split[1]}")
        print(f"H(A|beta) = {_fmt(_scale(args, conditional_entropy_given(rho, povm)))} {u}", file=out)
        return EXIT_OK
    res = minimize_conditional_entropy(rho, _optimizer_config(args))
    print(f"H(A|B) <= {_fmt(_scale(args, res.value))} {u} ({res.bound_kind})", file=out)
    print(f"outcomes = {res.best_povm_b.n_outcomes}", file=out)
    _restart_lines(res, args, out)
    if args.povm_out:
        write_povm(args.povm_out, res.best_povm_b)
    return EXIT_OK


def cmd_mutinfo(args, out):
    rho = read_state(args.state)
    u = _unit(args)
    res = maximize_mutual_information(rho, _optimizer_config(args))
    rho_a, _ = marginals(rho)
    cap = von_neumann_entropy(rho_a) - conditional_entropy_given(rho, res.best_povm_b)
    print(f"I(A;B) >= {_fmt(_scale(args, res.value))} {u} ({res.bound_kind})", file=out)
    print(f"H(A) - H(A|beta_best) = {_fmt(_scale(args, cap))} {u}", file=out)
    _restart_lines(res, args, out)
    if args.povm_out:
        write_povm_pair(args.povm_out, res.best_povm_a, res.best_povm_b)
    return EXIT_OK


def _parse_dims(text):
    try:
        pairs = tuple(tuple(int(x) for x in item.split("x")) for item in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dims {text!r}; expected e.g. 2x2,2x3") from None
    if any(len(p) != 2 for p in pairs):
        raise argparse.ArgumentTypeError(f"bad dims {text!r}; expected e.g. 2x2,2x3")
    return pairs


def cmd_verify(args, out):
    opt = _optimizer_config(args, restarts=1, max_evals=300, random_bases=1)
    cfg = SweepConfig(count=args.count, dims=args.dims, seed=args.seed,
                      tolerance=args.tolerance, optimizer=opt)
    summary = run_sweep(cfg)
    if args.structured:
        structured_opt = _optimizer_config(args, restarts=2, max_evals=2000)
        summary = SweepSummary(summary.reports + run_structured_suite(
            SweepConfig(count=0, seed=args.seed, tolerance=args.tolerance, optimizer=structured_opt)
        ).reports)
    lines = summary.lines()
    if args.report:
        with open(args.report, "w") as fh:
            fh.write("".join(line + "\n" for line in lines))
    print(summary.table(), file=out)
    return EXIT_OK if summary.n_failed == 0 else EXIT_VERIFY_FAILED


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=42, help="base random seed (default 42)")

    optim = _Parser(add_help=False)
    optim.add_argument("--restarts", type=int, help="random restarts (default 20)")
    optim.add_argument("--outcomes-a", type=int, help="POVM outcomes on A (default d_A^2)")
    optim.add_argument("--outcomes-b", type=int, help="POVM outcomes on B (default d_B^2)")
    optim.add_argument("--max-evals", type=int, help="objective evaluations per local search (default 5000)")
    optim.add_argument("--tol", type=float, help="local-search convergence tolerance (default 1e-9)")

    units = _Parser(add_help=False)
    units.add_argument("--nats", action="store_true", help="report natural-log units instead of bits")

    parser = _Parser(prog="povminfo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("entropy", parents=[common, units], help="H(A,B), H(A), H(B)")
    p.add_argument("state")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("condent", parents=[common, optim, units],
                       help="H(A|beta) for a given POVM, or an upper bound on H(A|B)")
    p.add_argument("state")
    p.add_argument("povm", nargs="?", help="POVM file on B (omit to optimize)")
    p.add_argument("--povm-out", help="write the best POVM found to this file")
    p.set_defaults(func=cmd_condent)

    p = sub.add_parser("mutinfo", parents=[common, optim, units], help="lower bound on I(A;B)")
    p.add_argument("state")
    p.add_argument("--povm-out", help="write the best POVM pair found to this file")
    p.set_defaults(func=cmd_mutinfo)

    p = sub.add_parser("verify", parents=[common, optim], help="run the verification sweep")
    p.add_argument("--count", type=int, default=200, help="number of random states (default 200)")
    p.add_argument("--dims", type=_parse_dims, default=((2, 2), (2, 3)),
                   help="comma-separated d_Axd_B list (default 2x2,2x3)")
    p.add_argument("--tolerance", type=float, help="override every check tolerance")
    p.add_argument("--structured", action="store_true",
                   help="also run the Bell/product/classical/rank-deficient suite")
    p.add_argument("--report", help="write the line-oriented report to this file")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, out)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        parser.print_usage(sys.stderr)
        print(f"povminfo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, OSError) as exc:
        print(f"povminfo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, DimensionError, ZeroProbabilityError) as exc:
        print(f"povminfo: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
