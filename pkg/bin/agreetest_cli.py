#!/usr/bin/env python

import argparse
import sys

from cdislogging import get_logger

from agreetest import configure_logging, load_config
from agreetest.config import config
from agreetest.errors import (
    ExactInfeasibleError,
    ParameterError,
    ParseError,
    PropertyFailure,
    StructuralError,
)
from agreetest.scripting.experiments import (
    ExperimentConfig,
    agree_action,
    corrupt_action,
    decode_action,
    gen_action,
    prune_action,
    sweep_action,
    verify_action,
)

logger = get_logger("agreetest")


class ArgumentParser(argparse.ArgumentParser):
    """
    Usage errors exit with 1 like every other bad input.
    """

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, "{}: error: {}\n".format(self.prog, message))


def common_arguments():
    common = ArgumentParser(add_help=False)
    common.add_argument(
        "--config", default=None, help="path to an agreetest yaml configuration"
    )
    common.add_argument("--seed", type=int, default=None, help="master seed")
    common.add_argument(
        "--samples", type=int, default=None, help="Monte Carlo samples per estimate"
    )
    common.add_argument(
        "--out", default=None, help="write the result here instead of stdout"
    )
    common.add_argument(
        "--exact",
        dest="exact",
        action="store_const",
        const=True,
        default=None,
        help="force exact evaluation",
    )
    common.add_argument(
        "--mc",
        dest="exact",
        action="store_const",
        const=False,
        help="force Monte Carlo evaluation",
    )
    common.add_argument(
        "--quiet", action="store_true", default=False, help="only log warnings"
    )
    return common


def parse_arguments(argv=None):
    parser = ArgumentParser(prog="agreetest")
    common = common_arguments()

    subparsers = parser.add_subparsers(title="action", dest="action")
    subparsers.required = True

    subparsers.add_parser(
        "gen", parents=[common], help="generate a (corrupted) ensemble"
    )

    corrupt = subparsers.add_parser(
        "corrupt", parents=[common], help="append a corruption layer to an ensemble"
    )
    corrupt.add_argument("ensemble", help="ensemble JSON file")

    agree = subparsers.add_parser(
        "agree", parents=[common], help="estimate the agreement test failure rate"
    )
    agree.add_argument("ensemble", help="ensemble JSON file")
    agree.add_argument(
        "--t",
        type=int,
        default=None,
        help="intersection size of the test pairs, defaults to the ensemble's",
    )

    decode = subparsers.add_parser(
        "decode", parents=[common], help="plurality and restricted decoding"
    )
    decode.add_argument("ensemble", help="ensemble JSON file")
    decode.add_argument(
        "--tie-seed",
        type=int,
        default=None,
        help="break plurality ties by a keyed choice instead of the smallest symbol",
    )

    prune = subparsers.add_parser(
        "prune", parents=[common], help="prune a hypergraph and report"
    )
    prune.add_argument("hypergraph", help="hypergraph text file")
    prune.add_argument(
        "--hypergraph-out", default=None, help="write the pruned hypergraph here"
    )

    verify = subparsers.add_parser(
        "verify", parents=[common], help="unique-hit check of a pruned hypergraph"
    )
    verify.add_argument("hypergraph", help="hypergraph text file")

    sweep = subparsers.add_parser(
        "sweep", parents=[common], help="corruption rate sweep, CSV output"
    )
    sweep.add_argument(
        "--workers", type=int, default=None, help="trials run at once"
    )

    return parser.parse_args(argv)


def main(argv=None):
    args = parse_arguments(argv)
    # route log lines to stderr before gen3config starts reading files
    configure_logging(quiet=args.quiet)

    try:
        load_config(config_path=args.config, search=args.config is None)
    except OSError as exc:
        logger.error("cannot read configuration {}: {}".format(args.config, exc))
        sys.exit(1)
    configure_logging(debug=config["DEBUG"], quiet=args.quiet)

    try:
        exp = ExperimentConfig.from_config(
            seed=args.seed, samples=args.samples, out=args.out, exact=args.exact
        )
        if args.action == "gen":
            gen_action(exp)
        elif args.action == "corrupt":
            corrupt_action(args.ensemble, exp)
        elif args.action == "agree":
            agree_action(args.ensemble, exp, t=args.t)
        elif args.action == "decode":
            decode_action(args.ensemble, exp, tie_seed=args.tie_seed)
        elif args.action == "prune":
            prune_action(args.hypergraph, exp, text_out=args.hypergraph_out)
        elif args.action == "verify":
            verify_action(args.hypergraph, exp)
        elif args.action == "sweep":
            sweep_action(exp, workers=args.workers)
    except PropertyFailure as exc:
        logger.error(exc.message)
        sys.exit(2)
    except (ParameterError, ParseError, ExactInfeasibleError, StructuralError) as exc:
        logger.error(exc.message)
        sys.exit(1)
    except OSError as exc:
        logger.error("{}: {}".format(exc.filename or "", exc.strerror or exc))
        sys.exit(1)


if __name__ == "__main__":
    main()
