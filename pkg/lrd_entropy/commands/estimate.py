import logging

from lrd_entropy.commands.common import add_estimator_arguments, estimator_config
from lrd_entropy.estimator import bandwidth, estimate_qf, renyi_entropy
from lrd_entropy.exceptions import NonPositiveEstimateError
from lrd_entropy.experiment_io import PathReader, output_stream, write_json


def estimate_subparser(subparsers, parent_parser):
    parser_estimate = subparsers.add_parser(
        "estimate",
        help="Estimate the quadratic functional and Renyi entropy of a path CSV",
        parents=[parent_parser],
    )
    parser_estimate.add_argument("--path", required=True, help="Path CSV, one value per line")
    add_estimator_arguments(parser_estimate)
    parser_estimate.add_argument("--output", help="JSON file to write (default: stdout)")


def run_estimate(args) -> int:
    config = estimator_config(args)
    if config.kernel.signed():
        logging.warning("Kernel takes negative values; T_n may be non-positive")
    path = PathReader(args.path).data
    t_n = estimate_qf(path, config, workers=args.workers)
    try:
        renyi = renyi_entropy(t_n)
    except NonPositiveEstimateError as e:
        logging.warning(str(e))
        renyi = None
    result = {"t_n": t_n, "renyi": renyi, "n": int(path.size), "h_n": bandwidth(config, path.size)}
    with output_stream(args.output) as stream:
        write_json(stream, result)
    return 0
