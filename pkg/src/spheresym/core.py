"""Kernel evaluation, Gram caching and the pairwise asymmetry statistic.

The statistic is the average, over all pairs of augmented observations
(X_i, X'_i), (X_j, X'_j), of the four-term Gaussian-kernel combination

    g = K(X_i, X_j) + K(X'_i, X'_j) - K(X_i, X'_j) - K(X_j, X'_i)

with K(x, y) = exp(-||x - y||^2 / (2 d)).  The bandwidth is always the data
dimension d; there is no user-tunable bandwidth.

All kernel values over the 2n concatenated rows (X_1..X_n, X'_1..X'_n) are
computed once into a dense :class:`GramCache`, so that resampling (see
``calibrate``) never re-evaluates an exponential.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist


@dataclass(frozen=True)
class Sample:
    """An n x d matrix of observations, rows = observations.

    Entries must be finite.  A single-row sample is accepted (the Gram cache
    is well defined for n = 1); the statistic itself requires n >= 2.
    """

    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 2:
            raise ValueError(f"sample must be a 2-d array, got shape {data.shape}")
        if data.shape[0] < 1 or data.shape[1] < 1:
            raise ValueError(f"sample needs n >= 1 rows and d >= 1 columns, got {data.shape}")
        if not np.isfinite(data).all():
            raise ValueError("sample contains NaN or Inf")
        object.__setattr__(self, "data", data)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class AugmentedSample:
    """Pairs (X_i, X'_i) where X'_i = ||X_i|| U_i lies on the same sphere shell.

    Row norms of ``variant`` match those of ``original`` (zero rows map to
    zero rows).  Construction lives in :func:`spheresym.augment.augment`.
    """

    original: Sample
    variant: np.ndarray

    def __post_init__(self):
        variant = np.asarray(self.variant, dtype=float)
        if variant.shape != self.original.data.shape:
            raise ValueError(
                f"variant shape {variant.shape} != original shape {self.original.data.shape}"
            )
        norm_o = np.linalg.norm(self.original.data, axis=1)
        norm_v = np.linalg.norm(variant, axis=1)
        if not np.allclose(norm_v, norm_o, rtol=1e-9, atol=1e-300):
            raise ValueError("variant row norms do not match original row norms")
        object.__setattr__(self, "variant", variant)

    @property
    def n(self) -> int:
        return self.original.n

    @property
    def d(self) -> int:
        return self.original.d


def kernel(x: np.ndarray, y: np.ndarray, d: int) -> float:
    """Gaussian kernel exp(-||x - y||^2 / (2 d)) with bandwidth = dimension."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if x.shape != (d,) or y.shape != (d,):
        raise ValueError(f"expected two vectors of length {d}, got {x.shape} and {y.shape}")
    diff = x - y
    return float(np.exp(-np.dot(diff, diff) / (2.0 * d)))


def symmetrized_kernel(p1, p2, d: int) -> float:
    """Four-term kernel g((x, x'), (y, y')); antisymmetric in each pair swap."""
    x, xp = p1
    y, yp = p2
    return kernel(x, y, d) + kernel(xp, yp, d) - kernel(x, yp, d) - kernel(y, xp, d)


@dataclass(frozen=True)
class GramCache:
    """Dense 2n x 2n kernel matrix over the rows (X_1..X_n, X'_1..X'_n).

    Exactly symmetric (upper triangle mirrored), unit diagonal, entries in
    (0, 1].  Memory is 4 n^2 floats, acceptable for n up to a few thousand.
    """

    k: np.ndarray
    n: int
    d: int
    _g: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        # n x n matrix of pairwise g values, zero diagonal; every resampled
        # statistic is a signed quadratic form in this matrix.
        n = self.n
        k = self.k
        cross = k[:n, n:]
        g = k[:n, :n] + k[n:, n:] - cross - cross.T
        np.fill_diagonal(g, 0.0)
        object.__setattr__(self, "_g", g)

    def g_matrix(self) -> np.ndarray:
        """Pairwise g values g_ij (i != j), zero diagonal. Read-only view."""
        return self._g


def build_gram(aug: AugmentedSample) -> GramCache:
    """Evaluate the kernel over all pairs of the 2n concatenated rows."""
    z = np.vstack([aug.original.data, aug.variant])
    # Direct squared differences (not the norm-expansion identity): exact
    # cancellation for identical rows matters for the g = 0 identities.
    sq = cdist(z, z, "sqeuclidean")
    k = np.exp(-sq / (2.0 * aug.d))
    # Mirror the upper triangle so symmetry holds bit-for-bit.
    iu = np.triu_indices(2 * aug.n, k=1)
    k[(iu[1], iu[0])] = k[iu]
    np.fill_diagonal(k, 1.0)
    return GramCache(k=k, n=aug.n, d=aug.d)


@dataclass(frozen=True)
class ZetaEstimate:
    """Value of the pairwise statistic; always within [-2, 2]."""

    value: float

    def __post_init__(self):
        if not abs(self.value) <= 2.0 + 1e-12:
            raise ValueError(f"statistic out of range [-2, 2]: {self.value}")


def zeta_hat(aug: AugmentedSample, cache: GramCache) -> ZetaEstimate:
    """U-statistic average of g over all pairs i < j, read from the cache."""
    n = aug.n
    if n < 2:
        raise ValueError("statistic needs at least two observations")
    if cache.n != n or cache.d != aug.d:
        raise ValueError("cache does not match the augmented sample")
    g = cache.g_matrix()
    # g has zero diagonal and is symmetric: sum over all entries = 2 * sum_{i<j}.
    value = float(g.sum()) / (n * (n - 1))
    return ZetaEstimate(value=value)
