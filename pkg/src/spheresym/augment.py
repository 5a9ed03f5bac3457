"""Data augmentation: sphere sampling, paired variants, optional centering.

Each observation X_i is paired with X'_i = ||X_i|| U_i, where the U_i are
independent uniform draws from the unit sphere.  Centering (for an unknown
center of symmetry) subtracts the spatial median; it is off by default.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import AugmentedSample, Sample
from .rng import RngStream

# A Gaussian draw with norm below this is redrawn; the event has negligible
# probability but must not produce NaN after normalization.
_MIN_NORM = 1e-300


def sample_unit_sphere(d: int, rng: RngStream) -> np.ndarray:
    """One uniform draw from the surface of the unit sphere in R^d."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    gen = rng.generator()
    while True:
        z = gen.standard_normal(d)
        norm = np.linalg.norm(z)
        if norm > _MIN_NORM:
            return z / norm


def _unit_rows(n: int, d: int, gen: np.random.Generator) -> np.ndarray:
    """n independent uniform sphere points, one per row."""
    z = gen.standard_normal((n, d))
    norms = np.linalg.norm(z, axis=1)
    bad = norms <= _MIN_NORM
    while bad.any():
        z[bad] = gen.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(z, axis=1)
        bad = norms <= _MIN_NORM
    return z / norms[:, None]


def augment(sample: Sample, rng: RngStream) -> AugmentedSample:
    """Pair every row with a uniformly re-oriented copy of the same norm."""
    gen = rng.generator()
    u = _unit_rows(sample.n, sample.d, gen)
    norms = np.linalg.norm(sample.data, axis=1)
    variant = norms[:, None] * u
    return AugmentedSample(original=sample, variant=variant)


@dataclass(frozen=True)
class SpatialMedianResult:
    point: np.ndarray
    converged: bool
    n_iter: int
    objective: tuple[float, ...]  # objective value after each iterate


def spatial_median(sample: Sample, tol: float = 1e-8, max_iter: int = 10_000) -> SpatialMedianResult:
    """Minimize sum_i ||X_i - theta|| by Weiszfeld iteration.

    Uses the Vardi-Zhang modified step when the iterate lands on a data
    point, so the iteration never divides by zero.  Stops when the (sub)
    gradient norm falls below ``tol``; otherwise returns the best iterate
    after ``max_iter`` steps with ``converged=False``.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    x = sample.data
    n = x.shape[0]
    if n == 1:
        return SpatialMedianResult(x[0].copy(), True, 0, (0.0,))

    theta = x.mean(axis=0)
    anchor_eps = 1e-12 * max(1.0, float(np.abs(x).max()))
    objective = []
    for it in range(1, max_iter + 1):
        diff = x - theta
        dist = np.linalg.norm(diff, axis=1)
        at_anchor = dist < anchor_eps
        eta = int(at_anchor.sum())
        away = ~at_anchor

        if eta == n:
            # all points coincide with the iterate
            objective.append(float(dist.sum()))
            return SpatialMedianResult(theta, True, it, tuple(objective))

        w = 1.0 / dist[away]
        r_vec = (diff[away] * w[:, None]).sum(axis=0)
        r = float(np.linalg.norm(r_vec))
        t_map = (x[away] * w[:, None]).sum(axis=0) / w.sum()

        if eta == 0:
            new_theta = t_map
        else:
            if r <= eta:
                # the anchor point is the minimizer
                objective.append(float(dist.sum()))
                return SpatialMedianResult(theta, True, it, tuple(objective))
            lam = eta / r
            new_theta = (1.0 - lam) * t_map + lam * theta

        theta = new_theta
        dist_new = np.linalg.norm(x - theta, axis=1)
        objective.append(float(dist_new.sum()))
        grad = -(x - theta) / np.maximum(dist_new, anchor_eps)[:, None]
        if np.linalg.norm(grad.sum(axis=0)) <= tol:
            return SpatialMedianResult(theta, True, it, tuple(objective))

    return SpatialMedianResult(theta, False, max_iter, tuple(objective))


def center(sample: Sample, mode: str = "none", tol: float = 1e-8, max_iter: int = 10_000) -> Sample:
    """Return the sample unchanged or shifted by its spatial median."""
    if mode == "none":
        return sample
    if mode == "spatial-median":
        med = spatial_median(sample, tol=tol, max_iter=max_iter)
        return Sample(sample.data - med.point)
    raise ValueError(f"unknown centering mode: {mode!r}")
