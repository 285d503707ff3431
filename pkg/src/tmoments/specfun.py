"""Special-function kernel used by the moment formulas.

Provides log-gamma, gamma ratios, rising factorials and the two hypergeometric
series 1F1 and 2F1, restricted to the argument ranges the moment formulas
produce: real parameters, real argument with z <= 0 or |z| < 1. Terminating
series are summed exactly (compensated summation); non-terminating series are
first mapped to positive-term series (Kummer transform for 1F1, Pfaff transform
for 2F1) so no cancellation occurs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, NonConvergenceError

#: Hard cap on series length; reaching it raises NonConvergenceError.
MAX_SERIES_TERMS = 10_000

_STOP_EPS = 2.0 ** -53


@dataclass(frozen=True)
class HypergeomEval:
    """Value of a hypergeometric series together with evaluation diagnostics.

    Attributes
    ----------
    value : float
        The series value.
    a, c, z : float
        Parameters as passed in. ``b`` is None for 1F1 evaluations.
    terminating : bool
        True iff the series terminates exactly (a, or b for 2F1, is a
        nonpositive integer), independent of the evaluation path taken.
    terms_used : int
        Number of series terms actually summed.
    est_error : float
        Absolute error bound: 0 for exactly terminated sums, otherwise the
        magnitude of the first neglected term (propagated through any
        prefactor).
    """

    value: float
    a: float
    c: float
    z: float
    b: float | None = None
    terminating: bool = False
    terms_used: int = 0
    est_error: float = 0.0


def _is_nonpositive_int(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def log_gamma(x: float, *, name: str = "x") -> float:
    """Natural log of the gamma function for x > 0.

    ``name`` identifies the offending formula argument in error messages.
    """
    if not x > 0:
        raise DomainError(f"log_gamma: argument {name} must be positive, got {x!r}")
    return math.lgamma(x)


def gamma_ratio(num: float, den: float) -> float:
    """Gamma(num)/Gamma(den) for num, den > 0, evaluated in log space."""
    return math.exp(log_gamma(num, name="num") - log_gamma(den, name="den"))


def rising_factorial(a: float, n: int) -> float:
    """Rising factorial a^(n) = a (a+1) ... (a+n-1); empty product is 1.

    The product is evaluated directly, so a nonpositive integer base with
    n > -a yields exactly 0.
    """
    if n < 0 or not float(n).is_integer():
        raise DomainError(f"rising_factorial: count must be a nonnegative integer, got {n!r}")
    out = 1.0
    for i in range(int(n)):
        out *= a + i
    return out


def _pole_before_termination(c: float, n_last: int) -> bool:
    # Denominator factors are c, c+1, ..., c+n_last-1 for the term of order
    # n_last; a nonpositive integer c inside that range is a pole.
    return _is_nonpositive_int(c) and -c <= n_last - 1


def _sum_terminating(terms_iter) -> tuple[float, int]:
    terms = list(terms_iter)
    return math.fsum(terms), len(terms)


def _terminating_terms_1f1(a: float, c: float, z: float, n_last: int):
    term = 1.0
    yield term
    for n in range(n_last):
        term *= (a + n) / (c + n) * z / (n + 1)
        yield term


def _terminating_terms_2f1(a: float, b: float, c: float, z: float, n_last: int):
    term = 1.0
    yield term
    for n in range(n_last):
        term *= (a + n) * (b + n) / (c + n) * z / (n + 1)
        yield term


def _series_1f1(a: float, c: float, z: float, max_terms: int) -> tuple[float, int, float]:
    """Direct Taylor sum of 1F1; returns (value, terms_used, est_error)."""
    terms = [1.0]
    term = 1.0
    running = 1.0
    for n in range(max_terms):
        term *= (a + n) / (c + n) * z / (n + 1)
        if term == 0.0:
            return math.fsum(terms), len(terms), 0.0
        if abs(term) <= _STOP_EPS * abs(running):
            return math.fsum(terms), len(terms), abs(term)
        terms.append(term)
        running += term
    raise NonConvergenceError(
        f"1F1({a}, {c}; {z}) did not converge within {max_terms} terms",
        value=math.fsum(terms), est_error=abs(term), iterations=max_terms)


def _series_2f1(a: float, b: float, c: float, z: float, max_terms: int) -> tuple[float, int, float]:
    """Direct Taylor sum of 2F1 for |z| < 1; returns (value, terms_used, est_error)."""
    terms = [1.0]
    term = 1.0
    running = 1.0
    for n in range(max_terms):
        term *= (a + n) * (b + n) / (c + n) * z / (n + 1)
        if term == 0.0:
            return math.fsum(terms), len(terms), 0.0
        if abs(term) <= _STOP_EPS * abs(running):
            return math.fsum(terms), len(terms), abs(term)
        terms.append(term)
        running += term
    raise NonConvergenceError(
        f"2F1({a}, {b}; {c}; {z}) did not converge within {max_terms} terms",
        value=math.fsum(terms), est_error=abs(term), iterations=max_terms)


def hyp1f1(a: float, c: float, z: float, *, max_terms: int = MAX_SERIES_TERMS) -> HypergeomEval:
    """Confluent hypergeometric function 1F1(a; c; z).

    Terminates exactly when a is a nonpositive integer. Otherwise, negative
    arguments are evaluated through the Kummer transform
    exp(z) * 1F1(c-a; c; -z), whose series has no sign changes.
    """
    if _is_nonpositive_int(a):
        n_last = int(-a)
        if _pole_before_termination(c, n_last):
            raise DomainError(
                f"hyp1f1: parameter c = {c!r} is a nonpositive integer reached before termination")
        value, used = _sum_terminating(_terminating_terms_1f1(a, c, z, n_last))
        return HypergeomEval(value=value, a=a, c=c, z=z, terminating=True,
                             terms_used=used, est_error=0.0)
    if _is_nonpositive_int(c):
        raise DomainError(f"hyp1f1: parameter c = {c!r} is a nonpositive integer (series pole)")
    if z < 0:
        inner, used, err = _series_1f1(c - a, c, -z, max_terms)
        scale = math.exp(z)
        return HypergeomEval(value=scale * inner, a=a, c=c, z=z, terminating=False,
                             terms_used=used, est_error=scale * err)
    value, used, err = _series_1f1(a, c, z, max_terms)
    return HypergeomEval(value=value, a=a, c=c, z=z, terminating=False,
                         terms_used=used, est_error=err)


def hyp2f1(a: float, b: float, c: float, z: float, *,
           max_terms: int = MAX_SERIES_TERMS) -> HypergeomEval:
    """Gauss hypergeometric function 2F1(a, b; c; z) for z <= 0 or |z| < 1.

    Terminates exactly when a or b is a nonpositive integer. Otherwise z < 0
    is mapped into (0, 1) by the Pfaff transform
    (1-z)^(-a) * 2F1(a, c-b; c; z/(z-1)), avoiding alternating-sign terms.
    """
    if not (z <= 0 or abs(z) < 1):
        raise DomainError(f"hyp2f1: argument z = {z!r} outside supported range (z <= 0 or |z| < 1)")
    if _is_nonpositive_int(a) or _is_nonpositive_int(b):
        candidates = [int(-p) for p in (a, b) if _is_nonpositive_int(p)]
        n_last = min(candidates)
        if _pole_before_termination(c, n_last):
            raise DomainError(
                f"hyp2f1: parameter c = {c!r} is a nonpositive integer reached before termination")
        value, used = _sum_terminating(_terminating_terms_2f1(a, b, c, z, n_last))
        return HypergeomEval(value=value, a=a, c=c, z=z, b=b, terminating=True,
                             terms_used=used, est_error=0.0)
    if _is_nonpositive_int(c):
        raise DomainError(f"hyp2f1: parameter c = {c!r} is a nonpositive integer (series pole)")
    if z == 0:
        return HypergeomEval(value=1.0, a=a, c=c, z=z, b=b, terminating=False,
                             terms_used=1, est_error=0.0)
    if z < 0:
        w = z / (z - 1.0)
        inner, used, err = _series_2f1(a, c - b, c, w, max_terms)
        scale = (1.0 - z) ** (-a)
        return HypergeomEval(value=scale * inner, a=a, c=c, z=z, b=b, terminating=False,
                             terms_used=used, est_error=scale * err)
    value, used, err = _series_2f1(a, b, c, z, max_terms)
    return HypergeomEval(value=value, a=a, c=c, z=z, b=b, terminating=False,
                         terms_used=used, est_error=err)
