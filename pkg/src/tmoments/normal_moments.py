"""Moments of the normal and gamma building blocks.

These are the two ingredients of the scale-mixture representation of the
Student's t family: a normal kernel whose absolute and raw moments are
confluent-hypergeometric expressions, and gamma-distribution power moments
(including negative real powers) used to integrate mixture coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, UndefinedMomentError
from .specfun import hyp1f1, log_gamma

_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class NormalParams:
    """Mean/variance parameterization of a univariate normal."""

    mean: float
    variance: float

    def __post_init__(self):
        if not self.variance > 0:
            raise DomainError(f"NormalParams: variance must be positive, got {self.variance!r}")


@dataclass(frozen=True)
class GammaParams:
    """Shape/rate parameterization of a gamma distribution."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError(f"GammaParams: shape alpha must be positive, got {self.alpha!r}")
        if not self.beta > 0:
            raise DomainError(f"GammaParams: rate beta must be positive, got {self.beta!r}")


def _check_order(k) -> int:
    if isinstance(k, bool) or not float(k).is_integer() or k < 0:
        raise DomainError(f"moment order must be a nonnegative integer, got {k!r}")
    return int(k)


def normal_central_moment(p: NormalParams, m) -> float:
    """E((X - mean)^m): zero for odd m, variance^(m/2) m!/(2^(m/2) (m/2)!) for even m."""
    m = _check_order(m)
    if m % 2 == 1:
        return 0.0
    half = m // 2
    return p.variance ** half * math.factorial(m) / (2.0 ** half * math.factorial(half))


def normal_abs_moment(p: NormalParams, k) -> float:
    """E(|X|^k) via the confluent-hypergeometric closed form.

    Accepts any real k > -1, although the moment formulas only need
    nonnegative integers.
    """
    if not k > -1:
        raise DomainError(f"normal_abs_moment: requires k > -1, got {k!r}")
    v = p.variance
    arg = -p.mean * p.mean / (2.0 * v)
    h = hyp1f1(-k / 2.0, 0.5, arg)
    return (2.0 * v) ** (k / 2.0) * math.gamma((k + 1.0) / 2.0) / _SQRT_PI * h.value


def normal_raw_moment(p: NormalParams, k) -> float:
    """E(X^k) for nonnegative integer k.

    Even orders coincide with the absolute moment; odd orders carry a factor
    of the mean and use the companion confluent-hypergeometric form.
    """
    k = _check_order(k)
    if k % 2 == 0:
        return normal_abs_moment(p, k)
    v = p.variance
    arg = -p.mean * p.mean / (2.0 * v)
    h = hyp1f1((1.0 - k) / 2.0, 1.5, arg)
    return (p.mean * (2.0 * v) ** ((k - 1) / 2.0)
            * 2.0 * math.gamma(k / 2.0 + 1.0) / _SQRT_PI * h.value)


def gamma_moment(p: GammaParams, k: float) -> float:
    """E(X^k) = beta^(-k) Gamma(k + alpha) / Gamma(alpha), for real k > -alpha."""
    if not k > -p.alpha:
        raise UndefinedMomentError(
            f"gamma_moment: E(X^{k}) undefined for shape alpha = {p.alpha} (needs k > -alpha)")
    return math.exp(-k * math.log(p.beta)
                    + log_gamma(k + p.alpha, name="k + alpha")
                    - log_gamma(p.alpha, name="alpha"))
