"""Ground-truth values of the asymmetry measure, used as test oracles.

For a centered Gaussian with covariance Sigma the measure has a closed form:
one exact determinant term plus two integrals over the orthogonal group under
Haar measure, which are estimated here by Monte Carlo.  For a covariance that
is a scalar multiple of the identity, every rotation fixes the law and the
measure is exactly zero; that case short-circuits.

A generic large-sample Monte Carlo estimate (``mc_zeta``) is also provided,
exploiting unbiasedness of the pairwise statistic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .augment import augment
from .core import Sample, build_gram, zeta_hat
from .rng import RngStream

_HAAR_CHUNK = 20_000


@dataclass(frozen=True)
class CovSpec:
    """A d x d symmetric positive-semidefinite covariance matrix."""

    sigma: np.ndarray

    def __post_init__(self):
        sigma = np.asarray(self.sigma, dtype=float)
        if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1]:
            raise ValueError(f"covariance must be square, got shape {sigma.shape}")
        if not np.allclose(sigma, sigma.T, atol=1e-12, rtol=0):
            raise ValueError("covariance must be symmetric")
        if np.linalg.eigvalsh(sigma).min() < -1e-10:
            raise ValueError("covariance must be positive semi-definite")
        object.__setattr__(self, "sigma", sigma)

    @property
    def d(self) -> int:
        return self.sigma.shape[0]


@dataclass(frozen=True)
class HaarConfig:
    """Monte Carlo budget for the orthogonal-group integrals."""

    m: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")


def gaussian_pair_term(sigma1: CovSpec, sigma2: CovSpec, d: int) -> float:
    """E exp(-||X1 - X2||^2 / (2d)) for independent centered Gaussians.

    Equals det((Sigma1 + Sigma2)/d + I)^(-1/2), computed through the
    log-determinant of the symmetric matrix for stability in large d.
    """
    if sigma1.d != d or sigma2.d != d:
        raise ValueError("covariance dimensions do not match d")
    m = (sigma1.sigma + sigma2.sigma) / d + np.eye(d)
    sign, logdet = np.linalg.slogdet(m)
    if sign <= 0:
        raise ValueError("determinant not positive; inputs not PSD?")
    return float(np.exp(-0.5 * logdet))


def sample_haar_orthogonal(d: int, rng: RngStream) -> np.ndarray:
    """One Haar-distributed orthogonal matrix (QR with sign correction)."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    return _haar_batch(d, 1, rng.generator())[0]


def _haar_batch(d: int, m: int, gen: np.random.Generator) -> np.ndarray:
    a = gen.standard_normal((m, d, d))
    q, r = np.linalg.qr(a)
    signs = np.sign(np.einsum("mii->mi", r))
    signs[signs == 0] = 1.0
    return q * signs[:, None, :]


def _conjugate(h: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    return np.einsum("mij,jk,mlk->mil", h, sigma, h)


def _batch_pair_values(s1: np.ndarray, s2: np.ndarray, d: int) -> np.ndarray:
    m = (s1 + s2) / d + np.eye(d)
    _, logdet = np.linalg.slogdet(m)
    return np.exp(-0.5 * logdet)


def is_scalar_identity(sigma: CovSpec, tol: float = 1e-12) -> bool:
    c = np.trace(sigma.sigma) / sigma.d
    return float(np.linalg.norm(sigma.sigma - c * np.eye(sigma.d))) < tol


def gaussian_zeta(sigma: CovSpec, d: int, haar: HaarConfig = HaarConfig()) -> tuple[float, float]:
    """Closed-form-plus-Haar-MC value of the measure for N(0, Sigma).

    Returns (estimate, std_error).  Exact (0, 0) when Sigma is a scalar
    multiple of the identity.
    """
    if sigma.d != d:
        raise ValueError("covariance dimension does not match d")
    if is_scalar_identity(sigma):
        return 0.0, 0.0

    term1 = gaussian_pair_term(sigma, sigma, d)

    gen = RngStream(haar.seed, (0,)).generator()
    # double integral: independent (H1, H2) pairs
    sum_d = 0.0
    sumsq_d = 0.0
    remaining = haar.m
    while remaining > 0:
        m = min(remaining, _HAAR_CHUNK)
        h1 = _haar_batch(d, m, gen)
        h2 = _haar_batch(d, m, gen)
        vals = _batch_pair_values(_conjugate(h1, sigma.sigma), _conjugate(h2, sigma.sigma), d)
        sum_d += vals.sum()
        sumsq_d += (vals**2).sum()
        remaining -= m
    mean_d = sum_d / haar.m
    var_d = max(sumsq_d / haar.m - mean_d**2, 0.0)

    # single integral: fresh draws, independent of the double-integral draws
    sum_s = 0.0
    sumsq_s = 0.0
    remaining = haar.m
    while remaining > 0:
        m = min(remaining, _HAAR_CHUNK)
        h = _haar_batch(d, m, gen)
        vals = _batch_pair_values(np.broadcast_to(sigma.sigma, (m, d, d)), _conjugate(h, sigma.sigma), d)
        sum_s += vals.sum()
        sumsq_s += (vals**2).sum()
        remaining -= m
    mean_s = sum_s / haar.m
    var_s = max(sumsq_s / haar.m - mean_s**2, 0.0)

    estimate = term1 + mean_d - 2.0 * mean_s
    std_error = float(np.sqrt(var_d / haar.m + 4.0 * var_s / haar.m))
    return float(estimate), std_error


def mc_zeta(spec, n_big: int = 200, reps: int = 200, rng: RngStream = RngStream(0)) -> tuple[float, float]:
    """Mean and standard error of the pairwise statistic over fresh samples.

    ``spec`` is a DistributionSpec from :mod:`spheresym.distributions`.
    """
    from .distributions import sample as sample_dist

    values = np.empty(reps)
    for r in range(reps):
        s = sample_dist(spec, n_big, rng.child(r, 0))
        aug = augment(s, rng.child(r, 1))
        cache = build_gram(aug)
        values[r] = zeta_hat(aug, cache).value
    return float(values.mean()), float(values.std(ddof=1) / np.sqrt(reps))
