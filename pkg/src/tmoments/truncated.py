"""Truncated moments over axis-aligned rectangles.

F_k(a, b) = integral over the rectangle of t^k times the density, left
unnormalized (divide by the order-0 value to condition on the rectangle).

The normal building block is the classic one-step recursion that trades one
order of the moment for boundary terms: differentiating the density moves one
coordinate's exponent down and spawns (n-1)-dimensional moments on the two
faces of that coordinate, with conditional mean and covariance given by the
Schur complement. The Student-t moments are then the gamma-mixture average of
the normal ones, integrated adaptively over the mixing variable (``corrected``
mode). The ``literal`` mode instead runs the same recursion directly at the
t level with the averaged coefficient nu/(nu-2) and a t-free boundary density;
it is exact only where no averaging is involved and is kept for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular

from .errors import DomainError
from .normal_moments import GammaParams
from .oracle import DEFAULT_SEED, _run_quad, gamma_pdf, normal_pdf, tensor_quad
from .t1d import MomentResult, _undefined
from .tnd import MultiIndex, TParamsND

_CLIP_SIGMAS = 9.5


@dataclass(frozen=True, eq=False)
class Rectangle:
    """Axis-aligned rectangle with elementwise lower < upper; infinities allowed."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.array(self.lower, dtype=float)
        upper = np.array(self.upper, dtype=float)
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise DomainError("Rectangle: lower and upper must be equal-length vectors")
        if not np.all(lower < upper):
            raise DomainError("Rectangle: needs lower < upper elementwise")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def full_space(cls, n: int) -> "Rectangle":
        return cls(np.full(n, -math.inf), np.full(n, math.inf))

    @property
    def dim(self) -> int:
        return self.lower.size

    def dropped(self, j: int) -> "Rectangle":
        keep = [i for i in range(self.dim) if i != j]
        return Rectangle(self.lower[keep], self.upper[keep])


def _check_spd(mat, name: str) -> np.ndarray:
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DomainError(f"{name}: expected a square matrix, got shape {mat.shape}")
    scale = max(np.abs(mat).max(), 1.0)
    if np.abs(mat - mat.T).max() > 1e-12 * scale:
        raise DomainError(f"{name}: matrix is not symmetric")
    mat = 0.5 * (mat + mat.T)
    eigs = np.linalg.eigvalsh(mat)
    if eigs[0] <= 0:
        raise DomainError(f"{name}: matrix is not positive definite "
                          f"(smallest eigenvalue {eigs[0]:.3e})")
    return mat


def _std_normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def _rect_prob_cov(a: np.ndarray, b: np.ndarray, mean: np.ndarray, cov: np.ndarray,
                   tol: float) -> float:
    """Normal rectangle probability, covariance parameterization."""
    n = mean.size
    if np.all(np.isneginf(a)) and np.all(np.isposinf(b)):
        return 1.0
    if n == 1:
        s = math.sqrt(cov[0, 0])
        hi = 1.0 if math.isinf(b[0]) else _std_normal_cdf((b[0] - mean[0]) / s)
        lo = 0.0 if math.isinf(a[0]) else _std_normal_cdf((a[0] - mean[0]) / s)
        return max(hi - lo, 0.0)
    sd = np.sqrt(np.diag(cov))
    lo = np.maximum(a, mean - _CLIP_SIGMAS * sd)
    hi = np.minimum(b, mean + _CLIP_SIGMAS * sd)
    if not np.all(lo < hi):
        return 0.0
    factor = cho_factor(cov, lower=True)
    prec = cho_solve(factor, np.eye(n))
    logdet = 2.0 * math.fsum(math.log(d) for d in np.diag(factor[0]))
    log_norm = -0.5 * (n * math.log(2.0 * math.pi) + logdet)

    def density(pts: np.ndarray) -> np.ndarray:
        d = pts - mean
        q = np.einsum("ij,jk,ik->i", d, prec, d)
        return np.exp(log_norm - 0.5 * q)

    return tensor_quad(density, lo, hi, tol=tol).value


class _TruncNormal:
    """Recursion state for unnormalized truncated moments of one N(mean, cov)."""

    def __init__(self, a: np.ndarray, b: np.ndarray, mean: np.ndarray, cov: np.ndarray,
                 prob_tol: float = 1e-10):
        self.a = a
        self.b = b
        self.mean = mean
        self.cov = cov
        self.var = np.diag(cov)
        self.n = mean.size
        self.prob_tol = prob_tol
        self._memo: dict[tuple[int, ...], float] = {}
        self._faces: dict[tuple[int, int], _TruncNormal] = {}
        self._prob: float | None = None

    def prob(self) -> float:
        if self._prob is None:
            self._prob = _rect_prob_cov(self.a, self.b, self.mean, self.cov, self.prob_tol)
        return self._prob

    def moment(self, k: tuple[int, ...]) -> float:
        if not any(k):
            return self.prob()
        val = self._memo.get(k)
        if val is not None:
            return val
        i = next(pos for pos, ki in enumerate(k) if ki)
        base = k[:i] + (k[i] - 1,) + k[i + 1:]
        val = self.mean[i] * self.moment(base)
        for j in range(self.n):
            cij = self.cov[i, j]
            if cij != 0.0:
                val += cij * self._corner(base, j)
        self._memo[k] = val
        return val

    def _corner(self, base: tuple[int, ...], j: int) -> float:
        # The three-term boundary coefficient: the exponent-decrement term
        # vanishes for exponent 0, the face terms vanish at infinite bounds.
        out = 0.0
        if base[j]:
            out += base[j] * self.moment(base[:j] + (base[j] - 1,) + base[j + 1:])
        reduced = base[:j] + base[j + 1:]
        aj = self.a[j]
        if not math.isinf(aj):
            out += (aj ** base[j] * normal_pdf(aj, self.mean[j], self.var[j])
                    * self._face_moment(j, 0, reduced))
        bj = self.b[j]
        if not math.isinf(bj):
            out -= (bj ** base[j] * normal_pdf(bj, self.mean[j], self.var[j])
                    * self._face_moment(j, 1, reduced))
        return out

    def _face_moment(self, j: int, side: int, reduced: tuple[int, ...]) -> float:
        # A face of a 1-D problem is zero-dimensional: the empty product is 1.
        if self.n == 1:
            return 1.0
        return self._face(j, side).moment(reduced)

    def _face(self, j: int, side: int) -> "_TruncNormal":
        face = self._faces.get((j, side))
        if face is None:
            x = self.b[j] if side else self.a[j]
            keep = [i for i in range(self.n) if i != j]
            cj = self.cov[keep, j]
            mean_hat = self.mean[keep] + cj * (x - self.mean[j]) / self.var[j]
            cov_hat = self.cov[np.ix_(keep, keep)] - np.outer(cj, cj) / self.var[j]
            face = _TruncNormal(self.a[keep], self.b[keep], mean_hat, cov_hat, self.prob_tol)
            self._faces[(j, side)] = face
        return face


def rectangle_probability(r: Rectangle, mean, precision_scaled, *, tol: float = 1e-8,
                          method: str = "auto", n_samples: int = 1_000_000,
                          seed: int = DEFAULT_SEED) -> float:
    """P(a <= X <= b) for X ~ N(mean, precision_scaled^(-1)).

    Dimensions 1-3 use exact/erf and tensor Gauss-Legendre quadrature (error
    at most ``tol``); higher dimensions require ``method="mc"``.
    """
    mean = np.asarray(mean, dtype=float)
    if r.dim != mean.size:
        raise DomainError(f"rectangle_probability: rectangle dimension {r.dim} "
                          f"does not match mean dimension {mean.size}")
    prec = _check_spd(precision_scaled, "rectangle_probability")
    if method not in ("auto", "quad", "mc"):
        raise DomainError(f"rectangle_probability: unknown method {method!r}")
    if method == "mc" or (method == "auto" and mean.size > 3):
        if method == "auto":
            raise DomainError(
                "rectangle_probability: quadrature supports n <= 3; pass method='mc'")
        rng = np.random.default_rng(seed)
        chol = np.linalg.cholesky(prec)
        z = rng.standard_normal((n_samples, mean.size))
        x = mean + solve_triangular(chol, z.T, lower=True, trans="T").T
        inside = np.all((x >= r.lower) & (x <= r.upper), axis=1)
        return float(inside.mean())
    cov = cho_solve(cho_factor(prec, lower=True), np.eye(mean.size))
    return _rect_prob_cov(r.lower, r.upper, mean, cov, tol)


def trunc_normal_moment(k, r: Rectangle, mean, precision_scaled) -> float:
    """Unnormalized truncated normal moment E(1_rect prod X_i^(k_i)).

    ``precision_scaled`` is the precision (inverse covariance) matrix of the
    normal; it is inverted once and the recursion runs in covariance form.
    """
    k = MultiIndex.of(k)
    mean = np.asarray(mean, dtype=float)
    if not (k.dim == r.dim == mean.size):
        raise DomainError("trunc_normal_moment: dimensions of k, rectangle and mean disagree")
    prec = _check_spd(precision_scaled, "trunc_normal_moment")
    cov = cho_solve(cho_factor(prec, lower=True), np.eye(mean.size))
    return _TruncNormal(r.lower, r.upper, mean, cov).moment(k.k)


def trunc_t_moment(k, r: Rectangle, p: TParamsND, *, tol: float = 1e-9) -> MomentResult:
    """Unnormalized truncated t moment by gamma-mixture quadrature.

    For each mixing value t the conditional normal problem N(mu, (t Sigma)^(-1))
    is solved by the moment recursion; the results are integrated against
    Gamma(t | nu/2, nu/2), with (0, inf) mapped to (0, 1) by t = u/(1-u).
    """
    k = MultiIndex.of(k)
    if not (k.dim == r.dim == p.dim):
        raise DomainError("trunc_t_moment: dimensions of k, rectangle and parameters disagree")
    if k.total >= p.nu:
        return _undefined("trunc-mixture", "corrected")
    prec_inv = p.precision_inverse()
    mixing = GammaParams(p.nu / 2.0, p.nu / 2.0)
    prob_tol = max(tol * 1e-2, 1e-11)

    def mixed(u: float) -> float:
        t = u / (1.0 - u)
        problem = _TruncNormal(r.lower, r.upper, p.mu, prec_inv / t, prob_tol)
        return problem.moment(k.k) * gamma_pdf(t, mixing) / (1.0 - u) ** 2

    quad_res = _run_quad(mixed, 0.0, 1.0, tol)
    return MomentResult(quad_res.value, formula="trunc-mixture", mode="corrected",
                        diagnostics={"quad_abs_error": quad_res.est_abs_error,
                                     "quad_evaluations": quad_res.evaluations})


class _TruncTLiteral:
    """The printed one-step recursion applied directly at the t level.

    Coefficient matrix Sigma^(-1) with the averaged factor nu/(nu-2), boundary
    densities with t-free variance diag(Sigma^(-1)), base case handled by the
    corrected mixture integral (exact at order zero).
    """

    def __init__(self, rect: Rectangle, p: TParamsND, tol: float):
        self.rect = rect
        self.p = p
        self.tol = tol
        self.lam = p.precision_inverse()
        self.var = np.diag(self.lam)
        self.factor = p.nu / (p.nu - 2.0)
        self._memo: dict[tuple[int, ...], float] = {}
        self._faces: dict[tuple[int, int], _TruncTLiteral] = {}
        self._prob: float | None = None

    def moment(self, k: tuple[int, ...]) -> float:
        if not any(k):
            if self._prob is None:
                zero = MultiIndex(tuple([0] * self.p.dim))
                self._prob = trunc_t_moment(zero, self.rect, self.p, tol=self.tol).value
            return self._prob
        val = self._memo.get(k)
        if val is not None:
            return val
        i = next(pos for pos, ki in enumerate(k) if ki)
        base = k[:i] + (k[i] - 1,) + k[i + 1:]
        val = self.p.mu[i] * self.moment(base)
        for j in range(self.p.dim):
            lij = self.lam[i, j]
            if lij != 0.0:
                val += self.factor * lij * self._corner(base, j)
        self._memo[k] = val
        return val

    def _corner(self, base: tuple[int, ...], j: int) -> float:
        out = 0.0
        if base[j]:
            out += base[j] * self.moment(base[:j] + (base[j] - 1,) + base[j + 1:])
        reduced = base[:j] + base[j + 1:]
        aj = self.rect.lower[j]
        if not math.isinf(aj):
            out += (aj ** base[j] * normal_pdf(aj, self.p.mu[j], self.var[j])
                    * self._face_moment(j, 0, reduced))
        bj = self.rect.upper[j]
        if not math.isinf(bj):
            out -= (bj ** base[j] * normal_pdf(bj, self.p.mu[j], self.var[j])
                    * self._face_moment(j, 1, reduced))
        return out

    def _face_moment(self, j: int, side: int, reduced: tuple[int, ...]) -> float:
        if self.p.dim == 1:
            return 1.0
        face = self._faces.get((j, side))
        if face is None:
            x = self.rect.upper[j] if side else self.rect.lower[j]
            keep = [i for i in range(self.p.dim) if i != j]
            lj = self.lam[keep, j]
            mean_hat = self.p.mu[keep] + lj * (x - self.p.mu[j]) / self.var[j]
            lam_hat = self.lam[np.ix_(keep, keep)] - np.outer(lj, lj) / self.var[j]
            sigma_hat = np.linalg.inv(lam_hat)
            face = _TruncTLiteral(self.rect.dropped(j),
                                  TParamsND(mean_hat, sigma_hat, self.p.nu), self.tol)
            self._faces[(j, side)] = face
        return face.moment(reduced)


def trunc_t_moment_literal(k, r: Rectangle, p: TParamsND, *, tol: float = 1e-9) -> MomentResult:
    """Truncated t moment by the averaged-coefficient recursion (comparison mode).

    Requires nu > 2. Exact for order zero and for full-space order-1 steps;
    beyond that it deviates from :func:`trunc_t_moment` because the boundary
    density and the 1/t coefficient are averaged separately.
    """
    k = MultiIndex.of(k)
    if not (k.dim == r.dim == p.dim):
        raise DomainError("trunc_t_moment_literal: dimensions of k, rectangle and "
                          "parameters disagree")
    if not p.nu > 2:
        raise DomainError(f"trunc_t_moment_literal: requires nu > 2, got {p.nu!r}")
    if k.total >= p.nu:
        return _undefined("trunc-literal", "literal")
    value = _TruncTLiteral(r, p, tol).moment(k.k)
    return MomentResult(value, formula="trunc-literal", mode="literal")
