"""
Options shared by several subcommands and the factories turning their
string spellings into configuration objects.
"""
import argparse
import logging
import os

from lrd_entropy.estimator import (
    BandwidthRule,
    BoxcarKernel,
    EstimatorConfig,
    FixedRule,
    GaussianKernel,
    KernelSpec,
    PaperDefault,
    PowerRule,
    TableKernel,
)
from lrd_entropy.exceptions import ValidationError
from lrd_entropy.experiment_io import KernelTableReader
from lrd_entropy.linproc import DEFAULT_TRUNCATION, CoefficientSpec
from lrd_entropy.stable_core import InnovationSpec, StandardSymmetricStable, TwoSidedPareto

WORKERS_ENV = "LRD_ENTROPY_WORKERS"


def _float_field(text: str, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ValidationError(f"{what} must be a number, got '{text}'")


def innovation_factory(text: str, alpha: float) -> InnovationSpec:
    """`sas` | `pareto` | `pareto:<p_plus>` | `pareto:<p_plus>:<x_m>`"""
    name, *params = text.split(":")
    if name == "sas" and not params:
        return StandardSymmetricStable(alpha)
    if name == "pareto" and len(params) <= 2:
        values = [_float_field(p, "pareto parameter") for p in params]
        return TwoSidedPareto(alpha, *values)
    raise ValidationError(f"Invalid innovation: {text}")


def kernel_factory(text: str) -> KernelSpec:
    """`gaussian` | `boxcar:<half_width>` | `table:<csv path>`"""
    name, _, param = text.partition(":")
    if name == "gaussian" and not param:
        return GaussianKernel()
    if name == "boxcar":
        return BoxcarKernel(_float_field(param, "boxcar half width")) if param else BoxcarKernel()
    if name == "table" and param:
        reader = KernelTableReader(param)
        kernel = TableKernel.from_points(reader.grid, reader.values)
        logging.info(f"Kernel table {param} renormalised (raw integral {kernel.raw_integral:.10g})")
        return kernel
    raise ValidationError(f"Invalid kernel: {text}")


def bandwidth_factory(text: str) -> BandwidthRule:
    """`paper` | `power:<c>` | `fixed:<h>`"""
    name, _, param = text.partition(":")
    if name == "paper" and not param:
        return PaperDefault()
    if name == "power" and param:
        return PowerRule(_float_field(param, "bandwidth exponent"))
    if name == "fixed" and param:
        return FixedRule(_float_field(param, "bandwidth"))
    raise ValidationError(f"Invalid bandwidth rule: {text}")


def estimator_config(args) -> EstimatorConfig:
    return EstimatorConfig(kernel_factory(args.kernel), bandwidth_factory(args.bandwidth))


def coefficient_spec(args) -> CoefficientSpec:
    return CoefficientSpec(args.beta, args.c0, args.truncation_m)


def default_workers() -> int:
    text = os.environ.get(WORKERS_ENV, "1")
    try:
        workers = int(text)
    except ValueError:
        raise ValidationError(f"{WORKERS_ENV} must be a positive integer, got '{text}'")
    if workers < 1:
        raise ValidationError(f"{WORKERS_ENV} must be a positive integer, got '{text}'")
    return workers


def add_process_arguments(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument("--alpha", type=float, required=required, help="Stability index of the innovations, 0 < alpha < 2")
    parser.add_argument("--beta", type=float, required=required, help="Coefficient decay a_i = c0 i^-beta")
    parser.add_argument("--c0", type=float, default=1.0, help="Coefficient scale c0")
    parser.add_argument(
        "--truncation-m",
        type=int,
        default=DEFAULT_TRUNCATION,
        help="Number of moving-average lags kept in simulation",
    )


def add_innovation_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--innovation",
        default="sas",
        help="Innovation law: sas | pareto[:p_plus[:x_m]]",
    )


def add_estimator_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--kernel", default="gaussian", help="gaussian | boxcar:<w> | table:<csv>")
    parser.add_argument("--bandwidth", default="paper", help="paper | power:<c> | fixed:<h>")


def add_seed_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="Base seed of the random streams")
