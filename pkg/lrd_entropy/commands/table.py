import logging

from lrd_entropy.commands.common import (
    add_estimator_arguments,
    add_innovation_argument,
    add_seed_argument,
    estimator_config,
    innovation_factory,
)
from lrd_entropy.exceptions import ValidationError
from lrd_entropy.experiment_io import (
    PresetReader,
    SummaryStorage,
    output_stream,
    write_json,
)
from lrd_entropy.linproc import DEFAULT_TRUNCATION
from lrd_entropy.montecarlo import (
    ExperimentEngine,
    ExperimentSpec,
    bias_rate_report,
    representation_residuals,
)

DEFAULT_N_LIST = [1000, 2000, 5000]
DEFAULT_REPLICATIONS = 1000


def table_subparser(subparsers, parent_parser):
    parser_table = subparsers.add_parser(
        "table",
        help="Monte Carlo Mean/Var/Mse table of T_n over replicated paths",
        parents=[parent_parser],
    )
    parser_table.add_argument(
        "--preset",
        help=f"Published experiment plan ({', '.join(PresetReader.available())}); flags override it",
    )
    parser_table.add_argument("--alpha", type=float, help="Stability index of the innovations")
    parser_table.add_argument("--beta", type=float, nargs="+", help="One or more coefficient decays")
    parser_table.add_argument("--c0", type=float, help="Coefficient scale c0 (default 1)")
    parser_table.add_argument("--truncation-m", type=int, default=DEFAULT_TRUNCATION, help="Moving-average lags kept")
    parser_table.add_argument("--n", type=int, nargs="+", help="Path lengths (default 1000 2000 5000)")
    parser_table.add_argument("--reps", type=int, help="Replications per path length (default 1000)")
    add_innovation_argument(parser_table)
    add_estimator_arguments(parser_table)
    add_seed_argument(parser_table)
    parser_table.add_argument("--output", help="CSV file to write (default: stdout)")
    parser_table.add_argument("--bias-report", help="JSON file for the bias-rate fit per beta")
    parser_table.add_argument("--residuals-out", help="JSON file for mean representation residuals per beta and n")


def _pick(flag_value, preset: dict, key: str, fallback=None):
    if flag_value is not None:
        return flag_value
    return preset.get(key, fallback)


def build_specs(args):
    reader = PresetReader(args.preset) if args.preset else None
    preset = reader.data if reader else {}
    alpha = _pick(args.alpha, preset, "alpha")
    betas = _pick(args.beta, preset, "betas")
    if alpha is None or not betas:
        raise ValidationError("table needs --alpha and --beta, or a --preset")
    estimator = estimator_config(args)
    specs = [
        ExperimentSpec(
            alpha=alpha,
            beta=beta,
            n_list=_pick(args.n, preset, "n_list", DEFAULT_N_LIST),
            replications=_pick(args.reps, preset, "replications", DEFAULT_REPLICATIONS),
            c0=_pick(args.c0, preset, "c0", 1.0),
            base_seed=args.seed,
            estimator=estimator,
            innovation=innovation_factory(args.innovation, alpha),
            truncation_m=args.truncation_m,
        )
        for beta in betas
    ]
    return specs, reader


def _log_published_deviation(reader: PresetReader, spec: ExperimentSpec, summaries) -> None:
    for summary in summaries:
        row = reader.published(spec.beta, summary.n)
        if row is None:
            continue
        logging.info(
            f"beta={spec.beta}, n={summary.n}: mean {summary.mean:.4f} vs published "
            f"{row['mean']:.4f} (deviation {summary.mean - row['mean']:+.4f}), "
            f"var {summary.var:.3e} vs {row['var']:.3e}"
        )


def run_table(args) -> int:
    specs, reader = build_specs(args)
    if args.bias_report and len(specs[0].n_list) < 3:
        raise ValidationError("--bias-report needs at least 3 path lengths")
    storage = SummaryStorage()
    bias_reports, residuals = [], []
    for spec in specs:
        engine = ExperimentEngine(spec, args.workers)
        engine.pre_run()
        summaries = engine.run()
        storage.add_summaries(spec.alpha, spec.beta, spec.c0, summaries)
        if reader is not None:
            _log_published_deviation(reader, spec, summaries)
        if args.bias_report:
            report = bias_rate_report(summaries, spec.alpha, spec.beta, spec.estimator.bandwidth_rule)
            bias_reports.append({"alpha": spec.alpha, "beta": spec.beta, **report})
        if args.residuals_out:
            per_n = representation_residuals(spec, summaries, args.workers)
            residuals.append(
                {"alpha": spec.alpha, "beta": spec.beta, "mean_abs_residual": {str(n): v for n, v in per_n.items()}}
            )

    with output_stream(args.output) as stream:
        storage.write_csv(stream)
    if args.bias_report:
        with output_stream(args.bias_report) as stream:
            write_json(stream, {"reports": bias_reports})
    if args.residuals_out:
        with output_stream(args.residuals_out) as stream:
            write_json(stream, {"residuals": residuals})
    return 0
