"""
Ground truth for the quadratic functional of a linear process with standard
SaS innovations, the limit-theorem case regions and their constants, and the
asymptotic bandwidth conditions.

With S = sum |a_i|^alpha the marginal law is SaS with scale S^{1/alpha} and

    int f^2 = (1/2pi) int |phi|^2 = Gamma(1/alpha) / (pi alpha (2S)^{1/alpha}).
"""
from dataclasses import asdict, dataclass
from enum import Enum
import logging
import math
from typing import Optional, Tuple

from scipy import integrate, special

from lrd_entropy.estimator import BandwidthRule, PowerRule
from lrd_entropy.exceptions import (
    NotCoveredError,
    UnsupportedBandwidthRuleError,
    ValidationError,
)
from lrd_entropy.stable_core import (
    DENSITY_TABLE_EDGE,
    PDF_CUTOFF,
    StableDensity,
    StableParams,
    stable_pdf,
)


FAR_LOG_CUTOFF = 60.0


class CaseId(Enum):
    CASE1 = "Case1"
    CASE2 = "Case2"
    CASE3 = "Case3"


@dataclass(frozen=True)
class LimitCase:
    case_id: CaseId
    rate_exponent: float
    limit_index: float


class BandwidthPurpose(Enum):
    LIMIT_THEOREM = "limit_theorem"
    CENTERING_REPLACEMENT = "centering_replacement"


@dataclass(frozen=True)
class BandwidthCheck:
    ok: bool
    condition: str
    exponent: float
    required_exponent: float
    general_condition: str
    general_exponent: float
    general_ok: bool
    warning: Optional[str] = None

    def to_dict(self) -> dict:
        return asdict(self)


# sufficient for every limit case; (condition, exponent, boundary included)
GENERAL_BANDWIDTH_CONDITIONS = {
    BandwidthPurpose.LIMIT_THEOREM: ("n^{1/20} h_n -> 0", 1.0 / 20.0, False),
    BandwidthPurpose.CENTERING_REPLACEMENT: ("h_n = O(n^{-1/4})", 0.25, True),
}


def _check_qf_args(alpha: float, S: float) -> None:
    if not 0.0 < alpha <= 2.0:
        raise ValidationError(f"alpha must lie in (0, 2], got {alpha}")
    if not S >= 1.0:
        raise ValidationError(f"alpha-norm sum must be >= 1, got {S}")


def true_qf_closed(alpha: float, S: float) -> float:
    _check_qf_args(alpha, S)
    return special.gamma(1.0 / alpha) / (math.pi * alpha * (2.0 * S) ** (1.0 / alpha))


def true_qf_quadrature(alpha: float, S: float) -> float:
    """(1/2pi) int |phi(lambda)|^2 dlambda, split at the scale point."""
    _check_qf_args(alpha, S)

    def squared_cf(lam):
        return math.exp(-2.0 * S * lam**alpha)

    knee = (1.0 / (2.0 * S)) ** (1.0 / alpha)
    head, _ = integrate.quad(squared_cf, 0.0, knee, epsabs=1e-14, epsrel=1e-12, limit=200)
    tail, _ = integrate.quad(squared_cf, knee, math.inf, epsabs=1e-14, epsrel=1e-12, limit=200)
    return (head + tail) / math.pi


def true_renyi(alpha: float, S: float) -> float:
    return -math.log(true_qf_closed(alpha, S))


def classify_limit(alpha: float, beta: float) -> LimitCase:
    s = alpha * beta
    if 1.0 < alpha < 2.0 and 1.0 / alpha < beta < 1.0:
        return LimitCase(CaseId.CASE1, beta - 1.0 / alpha, alpha)
    if 1.0 < alpha < 2.0 and 1.0 < beta < 2.0 / alpha:
        return LimitCase(CaseId.CASE2, 1.0 - 1.0 / s, s)
    if 0.0 < alpha < 1.0 and 1.0 < s < 2.0:
        return LimitCase(CaseId.CASE3, 1.0 - 1.0 / s, s)
    raise NotCoveredError(
        f"(alpha={alpha}, beta={beta}) lies outside every limit-theorem case region"
    )


def sigma_tilde(alpha: float, beta: float, c0: float = 1.0) -> float:
    s = alpha * beta
    if not 1.0 < s < 2.0:
        raise ValidationError(f"sigma_tilde needs 1 < alpha*beta < 2, got {s}")
    if not c0 > 0.0:
        raise ValidationError(f"c0 must be positive, got {c0}")
    inner = (c0**alpha * (s - 1.0)) / (
        special.gamma(2.0 - s) * abs(math.cos(math.pi * s / 2.0)) * beta**s
    )
    return inner ** (1.0 / s)


def _difference_scale(alpha: float, S: float) -> float:
    # X - X' for independent copies is SaS with scale (2S)^{1/alpha}
    return (2.0 * S) ** (1.0 / alpha)


def _check_skewed_cases(alpha: float, beta: float, S: float) -> LimitCase:
    case = classify_limit(alpha, beta)
    if case.case_id is CaseId.CASE1:
        raise NotCoveredError("c_f constants are defined for Case2 and Case3 only")
    if not S >= 1.0:
        raise ValidationError(f"alpha-norm sum must be >= 1, got {S}")
    return case


def _density_drop(alpha: float, tau: float, u: float) -> float:
    """f_inf(u) - f_inf(0) without cancellation for small u."""
    upper = (-math.log(PDF_CUTOFF)) ** (1.0 / alpha) / tau

    def integrand(lam):
        return math.sin(0.5 * lam * u) ** 2 * math.exp(-((tau * lam) ** alpha))

    value, _ = integrate.quad(integrand, 0.0, upper, epsabs=0.0, epsrel=1e-10, limit=500)
    return -2.0 * value / math.pi


def c_f_constants(alpha: float, beta: float, S: float, c0: float = 1.0) -> Tuple[float, float]:
    """
    c_f^+ = c_f^- = 2 sigma_tilde int_0^inf (f_inf(u) - f_inf(0)) u^{-(1+1/beta)} du
    for symmetric innovations, where f_inf is the density of X - X'.
    """
    _check_skewed_cases(alpha, beta, S)
    gamma_ = 1.0 / beta
    tau = _difference_scale(alpha, S)
    model = StableParams(alpha, tau)
    tail = StableDensity(model)
    f_zero = special.gamma(1.0 / alpha) / (math.pi * alpha * tau)
    edge = DENSITY_TABLE_EDGE * tau

    def density(u):
        # Fourier inversion inside the table range, tail series beyond it
        return stable_pdf(model, u) if u <= edge else tail(u)

    near, _ = integrate.quad(
        lambda u: _density_drop(alpha, tau, u) * u ** (-1.0 - gamma_),
        0.0,
        1.0,
        epsabs=1e-12,
        epsrel=1e-9,
        limit=200,
    )
    # u = e^v on (1, inf); the integrand decays like e^{-(1+alpha+1/beta) v}
    far, _ = integrate.quad(
        lambda v: density(math.exp(v)) * math.exp(-gamma_ * v),
        0.0,
        FAR_LOG_CUTOFF,
        points=[math.log(edge)] if 0.0 < math.log(edge) < FAR_LOG_CUTOFF else None,
        epsabs=1e-12,
        epsrel=1e-9,
        limit=200,
    )
    integral = near + far - f_zero / gamma_
    value = 2.0 * sigma_tilde(alpha, beta, c0) * integral
    logging.debug(f"c_f constants for alpha={alpha}, beta={beta}, S={S}: {value}")
    return value, value


def c_f_closed(alpha: float, beta: float, S: float, c0: float = 1.0) -> float:
    """Closed form of the c_f integral through the Fourier representation of f_inf."""
    _check_skewed_cases(alpha, beta, S)
    gamma_ = 1.0 / beta
    tau = _difference_scale(alpha, S)
    cosine_moment = special.gamma(1.0 - gamma_) * math.cos(math.pi * gamma_ / 2.0) / gamma_
    radial = special.gamma((1.0 + gamma_) / alpha) / (alpha * tau ** (1.0 + gamma_))
    return -2.0 * sigma_tilde(alpha, beta, c0) * cosine_moment * radial / math.pi


def validate_bandwidth(alpha: float, beta: float, rule: BandwidthRule, purpose) -> BandwidthCheck:
    """
    Asymptotic conditions on h_n = n^{-c}: n h_n -> inf needs c < 1, and
    n^{e} h_n -> 0 needs c > e for the case-specific exponent e. The
    case-free sufficient condition of the purpose is reported next to it.
    """
    if not isinstance(rule, PowerRule):
        raise UnsupportedBandwidthRuleError(
            "bandwidth conditions are decidable for power rules h_n = n^{-c} only"
        )
    purpose = BandwidthPurpose(purpose)
    c = rule.exponent
    case = classify_limit(alpha, beta)
    s = alpha * beta
    general_condition, general_exponent, closed = GENERAL_BANDWIDTH_CONDITIONS[purpose]
    general = (general_condition, general_exponent, c >= general_exponent if closed else c > general_exponent)

    if c >= 1.0:
        return BandwidthCheck(False, "n*h_n -> infinity (c < 1)", c, 1.0, *general)

    warning = None
    if purpose is BandwidthPurpose.LIMIT_THEOREM:
        if case.case_id is CaseId.CASE1:
            required = (s - 1.0) * (2.0 - alpha) / (4.0 * alpha)
            condition = "n^{(ab-1)(2-a)/(4a) + eta*b/4} h_n -> 0 (eta -> 0 boundary)"
            warning = "Case1 condition reported at eta -> 0; any admissible eta > 0 strengthens it"
            logging.warning(warning)
        else:
            required = (s - 1.0) * (2.0 - s) / (4.0 * s)
            condition = "n^{(ab-1)(2-ab)/(4ab)} h_n -> 0"
    else:
        if case.case_id is CaseId.CASE1:
            required = (s - 1.0) / (2.0 * alpha)
            condition = "n^{(ab-1)/(2a)} h_n -> 0"
        else:
            required = (s - 1.0) / (2.0 * s)
            condition = "n^{(ab-1)/(2ab)} h_n -> 0"

    return BandwidthCheck(c > required, condition, c, required, *general, warning)


def limit_theorem_report(alpha: float, beta: float, S: float, c0: float = 1.0) -> dict:
    case = classify_limit(alpha, beta)
    report = {
        "case": case.case_id.value,
        "rate_exponent": case.rate_exponent,
        "limit_index": case.limit_index,
    }
    if case.case_id is not CaseId.CASE1:
        c_plus, c_minus = c_f_constants(alpha, beta, S, c0)
        report.update(
            {
                "sigma_tilde": sigma_tilde(alpha, beta, c0),
                "c_f_plus": c_plus,
                "c_f_minus": c_minus,
            }
        )
    return report
