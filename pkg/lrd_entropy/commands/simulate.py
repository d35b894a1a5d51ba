import logging

from lrd_entropy.commands.common import (
    add_innovation_argument,
    add_process_arguments,
    add_seed_argument,
    coefficient_spec,
    innovation_factory,
)
from lrd_entropy.experiment_io import output_stream, write_column
from lrd_entropy.linproc import ProcessConfig, simulate_path


def simulate_subparser(subparsers, parent_parser):
    parser_simulate = subparsers.add_parser(
        "simulate", help="Simulate one path of the linear process as CSV", parents=[parent_parser]
    )
    add_process_arguments(parser_simulate)
    add_innovation_argument(parser_simulate)
    add_seed_argument(parser_simulate)
    parser_simulate.add_argument("--n", type=int, required=True, help="Path length")
    parser_simulate.add_argument(
        "--method",
        choices=["auto", "direct", "fft"],
        default="auto",
        help="Moving-average evaluation",
    )
    parser_simulate.add_argument("--output", help="Path CSV to write (default: stdout)")


def run_simulate(args) -> int:
    config = ProcessConfig(
        innovation_factory(args.innovation, args.alpha),
        coefficient_spec(args),
        args.n,
        args.seed,
    )
    logging.info(f"Simulating n={args.n} with alpha={args.alpha}, beta={args.beta}")
    path = simulate_path(config, method=args.method)
    with output_stream(args.output) as stream:
        write_column(stream, "x", path)
    return 0
