from lrd_entropy.commands.common import add_innovation_argument, add_seed_argument, innovation_factory
from lrd_entropy.experiment_io import output_stream, write_lemma_report
from lrd_entropy.montecarlo import LEMMA_ETA, lemma1_check


def lemma_check_subparser(subparsers, parent_parser):
    parser_lemma = subparsers.add_parser(
        "lemma-check",
        help="Second moment of exp(i lambda eps) - phi(lambda) on a lambda grid",
        parents=[parent_parser],
    )
    parser_lemma.add_argument("--alpha", type=float, required=True, help="Stability index of the innovations")
    add_innovation_argument(parser_lemma)
    add_seed_argument(parser_lemma)
    parser_lemma.add_argument(
        "--lambdas", type=float, nargs="+", default=[0.25, 1.0, 4.0], help="Frequencies to check"
    )
    parser_lemma.add_argument("--samples", type=int, default=10**6, help="Innovation draws")
    parser_lemma.add_argument("--eta", type=float, default=LEMMA_ETA, help="Bound exponent slack, 0 < eta < alpha")
    parser_lemma.add_argument("--output", help="CSV file to write (default: stdout)")


def run_lemma_check(args) -> int:
    innovation = innovation_factory(args.innovation, args.alpha)
    report = lemma1_check(innovation, args.lambdas, args.samples, args.seed, args.eta)
    with output_stream(args.output) as stream:
        write_lemma_report(stream, report)
    return 0
