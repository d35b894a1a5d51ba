import logging

from lrd_entropy.commands.common import (
    add_estimator_arguments,
    add_innovation_argument,
    add_process_arguments,
    add_seed_argument,
    estimator_config,
    innovation_factory,
)
from lrd_entropy.exceptions import TooFewSamplesError
from lrd_entropy.experiment_io import output_stream, write_column, write_json
from lrd_entropy.linproc import alpha_norm_sum
from lrd_entropy.montecarlo import (
    TAIL_INDEX_MIN_SAMPLES,
    ExperimentEngine,
    ExperimentSpec,
    scaled_deviations,
    tail_index,
)
from lrd_entropy.truth import classify_limit, limit_theorem_report


def limit_check_subparser(subparsers, parent_parser):
    parser_limit = subparsers.add_parser(
        "limit-check",
        help="Scaled deviations of T_n and their stable tail index",
        parents=[parent_parser],
    )
    add_process_arguments(parser_limit)
    add_innovation_argument(parser_limit)
    add_estimator_arguments(parser_limit)
    add_seed_argument(parser_limit)
    parser_limit.add_argument("--n", type=int, default=2000, help="Path length")
    parser_limit.add_argument("--reps", type=int, default=2000, help="Replications (>= 500 for the tail index)")
    parser_limit.add_argument("--output", help="JSON file to write (default: stdout)")
    parser_limit.add_argument("--deviations-out", help="CSV file for the scaled deviations")


def run_limit_check(args) -> int:
    # the case region is checked before any path is simulated
    case = classify_limit(args.alpha, args.beta)
    if args.reps < TAIL_INDEX_MIN_SAMPLES:
        raise TooFewSamplesError(f"limit-check needs --reps >= {TAIL_INDEX_MIN_SAMPLES}, got {args.reps}")
    spec = ExperimentSpec(
        alpha=args.alpha,
        beta=args.beta,
        n_list=[args.n],
        replications=args.reps,
        c0=args.c0,
        base_seed=args.seed,
        estimator=estimator_config(args),
        innovation=innovation_factory(args.innovation, args.alpha),
        truncation_m=args.truncation_m,
    )
    engine = ExperimentEngine(spec, args.workers)
    engine.pre_run()
    summary = engine.run()[0]
    deviations = scaled_deviations(summary, case)
    estimate = tail_index(deviations)
    logging.info(f"Tail index {estimate:.3f} against limit index {case.limit_index:.3f}")

    if spec.innovation.stable_params() is not None:
        result = limit_theorem_report(args.alpha, args.beta, alpha_norm_sum(spec.coeffs, args.alpha), args.c0)
    else:
        result = {"case": case.case_id.value, "rate_exponent": case.rate_exponent, "limit_index": case.limit_index}
    result.update(
        {
            "n": summary.n,
            "replications": summary.replications,
            "h_n": summary.h_n,
            "mean": summary.mean,
            "tail_index": estimate,
        }
    )
    with output_stream(args.output) as stream:
        write_json(stream, result)
    if args.deviations_out:
        with output_stream(args.deviations_out) as stream:
            write_column(stream, "scaled_deviation", deviations)
    return 0
