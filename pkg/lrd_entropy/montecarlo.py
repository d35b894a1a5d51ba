"""
Monte Carlo experiments on top of the simulator and the estimator: replicate
summaries for the published tables, limit-law tail diagnostics, the
characteristic-function second-moment check and bias-rate fits.
"""
from dataclasses import dataclass, field, replace
import logging
import math
from multiprocessing import Pool
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from lrd_entropy.estimator import (
    EstimatorConfig,
    PowerRule,
    bandwidth,
    centered_representation,
    estimate_qf,
)
from lrd_entropy.exceptions import NotCoveredError, TooFewSamplesError, ValidationError
from lrd_entropy.linproc import (
    DEFAULT_TRUNCATION,
    CoefficientSpec,
    ProcessConfig,
    Regime,
    alpha_norm_sum,
    simulate_path,
    truncated_norm_sum,
)
from lrd_entropy.stable_core import (
    InnovationSpec,
    StableParams,
    StandardSymmetricStable,
    stable_cf,
)
from lrd_entropy.truth import LimitCase, classify_limit, true_qf_closed
from lrd_entropy.util.streams import make_stream

TAIL_INDEX_MIN_SAMPLES = 500
TRUNCATION_WARN_RELATIVE = 0.01
BIAS_RESOLUTION_SE = 3.0
LEMMA_ETA = 0.1

# McCulloch's quantile-ratio table, symmetric column; alpha runs 2.0 down to 0.5
MCCULLOCH_NU = np.array(
    [
        2.4388, 2.5120, 2.6080, 2.7369, 2.9115, 3.1480, 3.4635, 3.8824,
        4.4468, 5.2172, 6.3140, 7.9098, 10.4480, 14.8378, 23.4831, 44.2813,
    ]
)
MCCULLOCH_ALPHA = np.round(np.linspace(2.0, 0.5, MCCULLOCH_NU.size), 10)


@dataclass(frozen=True)
class ExperimentSpec:
    alpha: float
    beta: float
    n_list: Tuple[int, ...]
    replications: int
    c0: float = 1.0
    base_seed: int = 0
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    innovation: Optional[InnovationSpec] = None
    truncation_m: int = DEFAULT_TRUNCATION

    def __post_init__(self) -> None:
        object.__setattr__(self, "n_list", tuple(int(n) for n in self.n_list))
        if self.innovation is None:
            object.__setattr__(self, "innovation", StandardSymmetricStable(self.alpha))
        elif self.innovation.alpha != self.alpha:
            raise ValidationError(
                f"innovation alpha {self.innovation.alpha} differs from experiment alpha {self.alpha}"
            )
        if not self.n_list:
            raise ValidationError("n_list must not be empty")
        if int(self.replications) != self.replications or self.replications < 2:
            raise ValidationError(f"replications must be an integer >= 2, got {self.replications}")
        # ProcessConfig validates every n, the seed and the divergence condition
        configs = [self.process_config(n) for n in self.n_list]
        if configs[0].memory_regime is Regime.SHORT_MEMORY:
            logging.warning(
                f"alpha*beta = {self.alpha * self.beta} >= 2: short-memory regime, "
                "outside the long-memory tables"
            )

    @property
    def coeffs(self) -> CoefficientSpec:
        return CoefficientSpec(self.beta, self.c0, self.truncation_m)

    def process_config(self, n: int) -> ProcessConfig:
        return ProcessConfig(self.innovation, self.coeffs, n, self.base_seed)


@dataclass(frozen=True)
class ReplicationSummary:
    n: int
    h_n: float
    replications: int
    mean: float
    var: float
    mse: float
    truth_infinite: float
    truth_truncated: float
    values: Tuple[float, ...] = field(repr=False)
    tail_index_scaled: Optional[float] = None


def summarize(
    n: int,
    h_n: float,
    values: Sequence[float],
    truth_infinite: float,
    truth_truncated: float,
    tail_index_scaled: Optional[float] = None,
) -> ReplicationSummary:
    """Mean, sample variance (divisor N-1) and MSE (divisor N) against the infinite truth."""
    values = tuple(float(v) for v in values)
    count = len(values)
    if count < 2:
        raise TooFewSamplesError(f"summary needs at least 2 replicates, got {count}")
    mean = math.fsum(values) / count
    var = math.fsum((v - mean) ** 2 for v in values) / (count - 1)
    mse = math.fsum((v - truth_infinite) ** 2 for v in values) / count
    return ReplicationSummary(
        n, h_n, count, mean, var, mse, truth_infinite, truth_truncated, values, tail_index_scaled
    )


def _replicate_qf(task) -> float:
    spec, n, rep = task
    path = simulate_path(spec.process_config(n), make_stream(spec.base_seed, n, rep))
    value = estimate_qf(path, spec.estimator)
    logging.debug(f"Replicate {rep} at n={n}: T_n={value}")
    return value


def _map_replicates(function, tasks: list, workers: int) -> list:
    if workers > 1 and len(tasks) > 1:
        with Pool(processes=min(workers, len(tasks))) as pool:
            return pool.map(function, tasks)
    return [function(task) for task in tasks]


class ExperimentEngine:
    """Runs one ExperimentSpec: truths first, then N replicates per path length."""

    def __init__(self, spec: ExperimentSpec, workers: int = 1) -> None:
        self.spec = spec
        self.workers = max(1, int(workers))
        self.truth_infinite = math.nan
        self.truth_truncated = math.nan
        self.limit_case: Optional[LimitCase] = None
        self.summaries: List[ReplicationSummary] = []

    def pre_run(self) -> None:
        spec = self.spec
        logging.info(f"Preparing experiment alpha={spec.alpha}, beta={spec.beta}, n={list(spec.n_list)}")
        c_minus, c_plus = spec.innovation.tail_constants()
        logging.debug(f"Innovation tail constants c- = {c_minus}, c+ = {c_plus}")
        if spec.innovation.stable_params() is not None:
            self.truth_infinite = true_qf_closed(spec.alpha, alpha_norm_sum(spec.coeffs, spec.alpha))
            self.truth_truncated = true_qf_closed(spec.alpha, truncated_norm_sum(spec.coeffs, spec.alpha))
            gap = abs(self.truth_truncated - self.truth_infinite) / self.truth_infinite
            if gap > TRUNCATION_WARN_RELATIVE:
                logging.warning(
                    f"Truncation at M={spec.truncation_m} moves the truth by {gap:.2%} "
                    f"({self.truth_truncated} vs {self.truth_infinite})"
                )
        else:
            logging.info("No closed-form truth for non-stable innovations; reporting NaN")
        try:
            self.limit_case = classify_limit(spec.alpha, spec.beta)
        except NotCoveredError:
            logging.info("Parameters outside every limit-theorem case; no scaled tail index")

    def run_n(self, n: int) -> ReplicationSummary:
        spec = self.spec
        logging.info(f"Running {spec.replications} replicates at n={n}")
        tasks = [(spec, n, rep) for rep in range(spec.replications)]
        values = _map_replicates(_replicate_qf, tasks, self.workers)
        summary = summarize(
            n, bandwidth(spec.estimator, n), values, self.truth_infinite, self.truth_truncated
        )
        tail = None
        if self.limit_case is not None and summary.replications >= TAIL_INDEX_MIN_SAMPLES:
            tail = tail_index(scaled_deviations(summary, self.limit_case))
        summary = replace(summary, tail_index_scaled=tail)
        logging.info(f"Finished n={n}: mean={summary.mean:.6g}, var={summary.var:.6g}")
        return summary

    def run(self) -> List[ReplicationSummary]:
        self.summaries = [self.run_n(n) for n in self.spec.n_list]
        return self.summaries


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> List[ReplicationSummary]:
    engine = ExperimentEngine(spec, workers)
    engine.pre_run()
    return engine.run()


def scaled_deviations(summary: ReplicationSummary, case: LimitCase) -> np.ndarray:
    """n^{rate} (T - replicate mean) for every replicate."""
    values = np.asarray(summary.values, dtype=float)
    return float(summary.n) ** case.rate_exponent * (values - summary.mean)


def tail_index(samples) -> float:
    """
    Symmetric quantile estimate of the stable index from
    nu = (q95 - q05) / (q75 - q25), interpolated in McCulloch's table and
    clamped to [0.5, 2].
    """
    x = np.asarray(samples, dtype=float)
    if x.size < TAIL_INDEX_MIN_SAMPLES:
        raise TooFewSamplesError(
            f"tail index needs at least {TAIL_INDEX_MIN_SAMPLES} samples, got {x.size}"
        )
    q05, q25, q75, q95 = np.percentile(x, [5, 25, 75, 95])
    if not q75 > q25:
        raise ValidationError("tail index is undefined for a sample with zero interquartile range")
    nu = (q95 - q05) / (q75 - q25)
    return float(np.interp(nu, MCCULLOCH_NU, MCCULLOCH_ALPHA))


def lemma1_check(
    innovation: InnovationSpec,
    lambda_grid: Sequence[float],
    n_samples: int = 10**6,
    base_seed: int = 0,
    eta: float = LEMMA_ETA,
) -> List[Dict[str, Optional[float]]]:
    """
    Empirical E|exp(i lambda eps) - phi(lambda)|^2 against 1 - |phi(lambda)|^2.

    Innovations without a stable law get no analytic value; their report
    carries empirical / min(|lambda|^{alpha-eta}, 1) instead.
    """
    grid = [float(lam) for lam in lambda_grid]
    if not grid:
        raise ValidationError("lambda grid must not be empty")
    if n_samples < 2:
        raise TooFewSamplesError(f"lemma check needs at least 2 samples, got {n_samples}")
    if not 0.0 < eta < innovation.alpha:
        raise ValidationError(f"eta must lie in (0, alpha), got {eta}")
    eps = np.asarray(innovation.sample(make_stream(base_seed), n_samples), dtype=float)
    params = innovation.stable_params()

    report = []
    for lam in grid:
        waves = np.exp(1j * lam * eps)
        cf_hat = waves.mean()
        spread = np.abs(waves - cf_hat) ** 2
        row = {
            "lambda": lam,
            "empirical": float(spread.mean()),
            "analytic": None,
            "mc_se": float(spread.std(ddof=1) / math.sqrt(n_samples)),
            "bound_ratio": None,
        }
        if params is not None:
            row["analytic"] = float(1.0 - abs(stable_cf(params, lam)) ** 2)
        elif lam != 0.0:
            row["bound_ratio"] = row["empirical"] / min(abs(lam) ** (innovation.alpha - eta), 1.0)
        logging.debug(f"lemma check lambda={lam}: {row}")
        report.append(row)
    return report


def bias_rate_report(
    summaries: Sequence[ReplicationSummary],
    alpha: float,
    beta: float,
    rule=None,
) -> dict:
    """
    Least-squares slope of log|mean - truth| against log n over the points
    whose bias exceeds three Monte Carlo standard errors.
    """
    if len(summaries) < 3:
        raise ValidationError(f"bias rate fit needs at least 3 path lengths, got {len(summaries)}")
    if rule is None:
        rule = EstimatorConfig().bandwidth_rule
    bias_exponent = 1.0 - alpha * beta
    bandwidth_exponent = -2.0 * rule.exponent if isinstance(rule, PowerRule) else None
    theoretical = (
        bias_exponent if bandwidth_exponent is None else max(bias_exponent, bandwidth_exponent)
    )

    used, dropped = [], []
    for summary in summaries:
        bias = summary.mean - summary.truth_infinite
        se = math.sqrt(summary.var / summary.replications)
        if math.isfinite(bias) and abs(bias) > BIAS_RESOLUTION_SE * se:
            used.append(summary)
        else:
            dropped.append(summary.n)

    report = {
        "theoretical_exponent": theoretical,
        "bias_exponent": bias_exponent,
        "bandwidth_exponent": bandwidth_exponent,
        "points_used": [s.n for s in used],
        "points_dropped": dropped,
        "slope": None,
        "conclusive": False,
    }
    if len(used) < 2:
        logging.warning("Bias rate fit inconclusive: fewer than 2 resolvable points")
        return report
    log_n = np.log([float(s.n) for s in used])
    log_bias = np.log([abs(s.mean - s.truth_infinite) for s in used])
    slope, _ = np.polyfit(log_n, log_bias, 1)
    report["slope"] = float(slope)
    report["conclusive"] = True
    return report


def _replicate_residual(task) -> float:
    spec, n, rep, model, truth, replicate_mean, t_n = task
    path = simulate_path(spec.process_config(n), make_stream(spec.base_seed, n, rep))
    return centered_representation(path, spec.estimator, model, truth, replicate_mean, t_n)


def representation_residuals(
    spec: ExperimentSpec,
    summaries: Sequence[ReplicationSummary],
    workers: int = 1,
) -> Dict[int, float]:
    """
    Mean |(T_n - E T_n) - (1/n) sum Y_i| per path length, replaying the
    replicate streams behind `summaries` and using the truncated marginal law.
    """
    if spec.innovation.stable_params() is None:
        raise ValidationError("representation residuals need symmetric stable innovations")
    scale = truncated_norm_sum(spec.coeffs, spec.alpha) ** (1.0 / spec.alpha)
    model = StableParams(spec.alpha, scale)
    residuals = {}
    for summary in summaries:
        tasks = [
            (spec, summary.n, rep, model, summary.truth_truncated, summary.mean, t_n)
            for rep, t_n in enumerate(summary.values)
        ]
        values = _map_replicates(_replicate_residual, tasks, workers)
        residuals[summary.n] = math.fsum(abs(v) for v in values) / len(values)
        logging.info(f"Mean representation residual at n={summary.n}: {residuals[summary.n]:.6g}")
    return residuals
