import logging

from lrd_entropy.commands.common import add_process_arguments, bandwidth_factory, coefficient_spec
from lrd_entropy.exceptions import NotCoveredError, UnsupportedBandwidthRuleError
from lrd_entropy.experiment_io import output_stream, write_json
from lrd_entropy.linproc import alpha_norm_sum, regime, truncated_norm_sum
from lrd_entropy.truth import (
    BandwidthPurpose,
    classify_limit,
    true_qf_closed,
    true_renyi,
    validate_bandwidth,
)


def truth_subparser(subparsers, parent_parser):
    parser_truth = subparsers.add_parser(
        "truth",
        help="True quadratic functional for standard SaS innovations",
        parents=[parent_parser],
    )
    add_process_arguments(parser_truth)
    parser_truth.add_argument(
        "--bandwidth",
        default="paper",
        help="Bandwidth rule checked against the asymptotic conditions: paper | power:<c> | fixed:<h>",
    )
    parser_truth.add_argument("--output", help="JSON file to write (default: stdout)")


def _bandwidth_checks(alpha: float, beta: float, rule_text: str):
    rule = bandwidth_factory(rule_text)
    try:
        return {
            purpose.value: validate_bandwidth(alpha, beta, rule, purpose).to_dict()
            for purpose in BandwidthPurpose
        }
    except (NotCoveredError, UnsupportedBandwidthRuleError) as e:
        logging.info(f"Bandwidth conditions not reported: {e}")
        return None


def run_truth(args) -> int:
    coeffs = coefficient_spec(args)
    memory = regime(args.alpha, args.beta)
    s_inf = alpha_norm_sum(coeffs, args.alpha)
    s_trunc = truncated_norm_sum(coeffs, args.alpha)
    result = {
        "alpha": args.alpha,
        "beta": args.beta,
        "c0": args.c0,
        "truncation_m": args.truncation_m,
        "regime": memory.value,
        "alpha_norm_sum": s_inf,
        "truncated_norm_sum": s_trunc,
        "qf_infinite": true_qf_closed(args.alpha, s_inf),
        "qf_truncated": true_qf_closed(args.alpha, s_trunc),
        "renyi_infinite": true_renyi(args.alpha, s_inf),
        "renyi_truncated": true_renyi(args.alpha, s_trunc),
        "case": None,
        "rate_exponent": None,
        "limit_index": None,
    }
    try:
        case = classify_limit(args.alpha, args.beta)
        result.update(
            {"case": case.case_id.value, "rate_exponent": case.rate_exponent, "limit_index": case.limit_index}
        )
    except NotCoveredError as e:
        logging.info(str(e))
    result["bandwidth_checks"] = _bandwidth_checks(args.alpha, args.beta, args.bandwidth)
    with output_stream(args.output) as stream:
        write_json(stream, result)
    return 0
