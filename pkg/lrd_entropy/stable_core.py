"""
Alpha-stable laws and the innovation families driving the linear process.

Parameterisation follows the characteristic function

    phi(lambda) = exp(i*lambda*mu - sigma^alpha |lambda|^alpha
                      (1 - i*eta*sign(lambda)*omega(lambda, alpha)))

with omega = tan(pi*alpha/2) for alpha != 1 and (2/pi) log|lambda| for
alpha == 1.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import lru_cache
import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy import integrate, interpolate, special

from lrd_entropy.exceptions import ValidationError

PDF_CUTOFF = 1e-14
PDF_EPSABS = 1e-11
PDF_EPSREL = 1e-10

# standardized density table: asinh-spaced nodes on [0, DENSITY_TABLE_EDGE]
DENSITY_TABLE_EDGE = 100.0
DENSITY_TABLE_NODES = 1201
TAIL_SERIES_TERMS = 10


@dataclass(frozen=True)
class StableParams:
    alpha: float
    sigma: float = 1.0
    eta: float = 0.0
    mu: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha <= 2.0:
            raise ValidationError(f"alpha must lie in (0, 2], got {self.alpha}")
        if not self.sigma > 0.0:
            raise ValidationError(f"sigma must be positive, got {self.sigma}")
        if not -1.0 <= self.eta <= 1.0:
            raise ValidationError(f"eta must lie in [-1, 1], got {self.eta}")
        if not math.isfinite(self.mu):
            raise ValidationError(f"mu must be finite, got {self.mu}")

    def symmetric(self) -> bool:
        return self.eta == 0.0 and self.mu == 0.0

    def standard(self) -> bool:
        return self.sigma == 1.0


class InnovationSpec(ABC):
    """Innovation law in the domain of attraction of an alpha-stable law."""

    alpha: float

    @abstractmethod
    def sample(self, rng: np.random.Generator, size=None):
        pass

    @abstractmethod
    def tail_constants(self) -> Tuple[float, float]:
        """(c_minus, c_plus) with x^alpha P(eps > x) -> c_plus."""
        pass

    def stable_params(self) -> Optional[StableParams]:
        """Stable law of the innovation itself, if it has one."""
        return None

    def _check_alpha(self) -> None:
        if not 0.0 < self.alpha < 2.0:
            raise ValidationError(
                f"innovation alpha must lie in (0, 2), got {self.alpha}"
            )


@dataclass(frozen=True)
class StandardSymmetricStable(InnovationSpec):
    alpha: float

    def __post_init__(self) -> None:
        self._check_alpha()

    def sample(self, rng: np.random.Generator, size=None):
        return sample_stable(self.stable_params(), rng, size)

    def tail_constants(self) -> Tuple[float, float]:
        c = sas_tail_constant(self.alpha)
        return c, c

    def stable_params(self) -> StableParams:
        return StableParams(self.alpha)


@dataclass(frozen=True)
class TwoSidedPareto(InnovationSpec):
    alpha: float
    p_plus: float = 0.5
    x_m: float = 1.0

    def __post_init__(self) -> None:
        self._check_alpha()
        # the one-sided endpoints are accepted on purpose: p_plus=1 gives a
        # classical Pareto law, still inside the domain of attraction
        if not 0.0 <= self.p_plus <= 1.0:
            raise ValidationError(f"p_plus must lie in [0, 1], got {self.p_plus}")
        if not self.x_m > 0.0:
            raise ValidationError(f"x_m must be positive, got {self.x_m}")

    def sample(self, rng: np.random.Generator, size=None):
        signs = np.where(rng.random(size) < self.p_plus, 1.0, -1.0)
        u = 1.0 - rng.random(size)
        values = signs * self.x_m * u ** (-1.0 / self.alpha)
        return float(values) if size is None else values

    def tail_constants(self) -> Tuple[float, float]:
        scale = self.x_m ** self.alpha
        return (1.0 - self.p_plus) * scale, self.p_plus * scale


def stable_cf(params: StableParams, lam):
    """Characteristic function; scalar in, complex out, arrays elementwise."""
    lam_arr = np.asarray(lam, dtype=float)
    alpha = params.alpha
    abs_lam = np.abs(lam_arr)
    with np.errstate(divide="ignore", invalid="ignore"):
        if alpha == 1.0:
            omega = np.where(abs_lam > 0.0, (2.0 / np.pi) * np.log(abs_lam), 0.0)
        else:
            omega = np.tan(np.pi * alpha / 2.0)
        exponent = 1j * lam_arr * params.mu - (params.sigma * abs_lam) ** alpha * (
            1.0 - 1j * params.eta * np.sign(lam_arr) * omega
        )
        value = np.where(lam_arr == 0.0, 1.0 + 0.0j, np.exp(exponent))
    if value.ndim == 0:
        return complex(value)
    return value


def sample_stable(params: StableParams, rng: np.random.Generator, size=None):
    """
    Chambers-Mallows-Stuck draw from S_alpha(sigma, eta, mu).

    All uniform angles of a call are drawn before its exponentials.
    """
    alpha, eta, sigma, mu = params.alpha, params.eta, params.sigma, params.mu
    v = np.pi * (rng.random(size) - 0.5)
    w = rng.standard_exponential(size)

    if alpha == 2.0:
        x = 2.0 * np.sqrt(w) * np.sin(v)
        out = sigma * x + mu
    elif alpha == 1.0:
        # the CMS angle formula at alpha = 1 is written for the conjugate
        # of stable_cf, so the skewness enters with its sign flipped
        skew = -eta
        half_pi = np.pi / 2.0
        bv = half_pi + skew * v
        x = (2.0 / np.pi) * (
            bv * np.tan(v) - skew * np.log(half_pi * w * np.cos(v) / bv)
        )
        out = sigma * x + (2.0 / np.pi) * skew * sigma * np.log(sigma) + mu
    else:
        zeta = eta * np.tan(np.pi * alpha / 2.0)
        b = np.arctan(zeta) / alpha
        s = (1.0 + zeta**2) ** (1.0 / (2.0 * alpha))
        x = (
            s
            * np.sin(alpha * (v + b))
            / np.cos(v) ** (1.0 / alpha)
            * (np.cos(v - alpha * (v + b)) / w) ** ((1.0 - alpha) / alpha)
        )
        out = sigma * x + mu
    return float(out) if size is None else out


def sample_innovation(spec: InnovationSpec, rng: np.random.Generator, size=None):
    return spec.sample(rng, size)


def _require_symmetric(params: StableParams) -> None:
    if params.eta != 0.0:
        raise ValidationError(
            "stable_pdf supports eta = 0 only (asymmetric inversion is not implemented)"
        )


def _pdf_quadrature(alpha: float, sigma: float, d: float) -> float:
    # symmetric law: the cosine transform only sees |d|
    d = abs(d)
    upper = (-math.log(PDF_CUTOFF)) ** (1.0 / alpha) / sigma

    def damping(lam):
        return math.exp(-((sigma * lam) ** alpha))

    if d == 0.0:
        value, _ = integrate.quad(
            damping, 0.0, upper, epsabs=PDF_EPSABS, epsrel=PDF_EPSREL, limit=500
        )
    else:
        value, _ = integrate.quad(
            damping,
            0.0,
            upper,
            weight="cos",
            wvar=d,
            epsabs=PDF_EPSABS,
            epsrel=PDF_EPSREL,
            limit=500,
        )
    return max(value / math.pi, 0.0)


def stable_pdf(params: StableParams, x):
    """Density of a symmetric stable law by Fourier inversion of its CF."""
    _require_symmetric(params)
    x_arr = np.asarray(x, dtype=float)
    if x_arr.ndim == 0:
        return _pdf_quadrature(params.alpha, params.sigma, float(x_arr) - params.mu)
    flat = [
        _pdf_quadrature(params.alpha, params.sigma, float(v) - params.mu)
        for v in x_arr.ravel()
    ]
    return np.asarray(flat).reshape(x_arr.shape)


def sas_tail_constant(alpha: float) -> float:
    """c_+ = c_- of a standard SaS law: x^alpha P(eps > x) -> c_+."""
    if not 0.0 < alpha < 2.0:
        raise ValidationError(f"alpha must lie in (0, 2), got {alpha}")
    if alpha == 1.0:
        raise ValidationError("tail constant formula is singular at alpha = 1")
    return 0.5 * (1.0 - alpha) / (special.gamma(2.0 - alpha) * math.cos(math.pi * alpha / 2.0))


def _standard_tail_series(alpha: float, z: np.ndarray) -> np.ndarray:
    # large-|z| expansion of the standard SaS density
    k = np.arange(1, TAIL_SERIES_TERMS + 1, dtype=float)
    coeffs = (
        (-1.0) ** (k + 1)
        * special.gamma(k * alpha + 1.0)
        / special.gamma(k + 1.0)
        * np.sin(k * np.pi * alpha / 2.0)
        / np.pi
    )
    powers = np.abs(z)[..., None] ** (-(k * alpha + 1.0))
    return (coeffs * powers).sum(axis=-1)


@lru_cache(maxsize=16)
def _standard_density_spline(alpha: float) -> interpolate.CubicSpline:
    logging.debug(f"Tabulating standard SaS density for alpha={alpha}")
    nodes = np.sinh(np.linspace(0.0, np.arcsinh(DENSITY_TABLE_EDGE), DENSITY_TABLE_NODES))
    values = np.array([_pdf_quadrature(alpha, 1.0, float(z)) for z in nodes])
    return interpolate.CubicSpline(nodes, values, bc_type=((1, 0.0), "not-a-knot"))


class StableDensity:
    """
    Fast symmetric stable density for evaluation at many points.

    The standardized density is tabulated once per alpha (cubic spline on
    |z| <= 100, large-|z| series beyond); alpha = 1 and alpha = 2 use the
    Cauchy and Gaussian closed forms.
    """

    def __init__(self, params: StableParams) -> None:
        _require_symmetric(params)
        self.params = params

    def _standard(self, z: np.ndarray) -> np.ndarray:
        alpha = self.params.alpha
        if alpha == 2.0:
            return np.exp(-(z**2) / 4.0) / (2.0 * math.sqrt(math.pi))
        if alpha == 1.0:
            return 1.0 / (math.pi * (1.0 + z**2))
        abs_z = np.abs(z)
        inside = abs_z <= DENSITY_TABLE_EDGE
        out = np.empty_like(abs_z)
        if np.any(inside):
            out[inside] = _standard_density_spline(alpha)(abs_z[inside])
        if np.any(~inside):
            out[~inside] = _standard_tail_series(alpha, abs_z[~inside])
        return np.maximum(out, 0.0)

    def __call__(self, x):
        x_arr = np.asarray(x, dtype=float)
        z = (x_arr - self.params.mu) / self.params.sigma
        values = self._standard(np.atleast_1d(z)) / self.params.sigma
        if x_arr.ndim == 0:
            return float(values[0])
        return values.reshape(x_arr.shape)
