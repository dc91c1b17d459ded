"""Non-local means fusion of matched source colors.

Every output pixel ``p`` (lying in target superpixel ``i``) is a weighted mean
of the matched source average colors of all target superpixels ``j``::

    d_j   = (p - Abar_j)^T Q_i^{-1} (p - Abar_j)
    w_j   = exp(-(d_j - min_j d_j))
    out   = sum_j w_j * Cbar[match[j]] / sum_j w_j

with ``p`` and ``Abar_j`` the 5-d ``[position, color]`` features and ``Q_i`` the
block-diagonal matrix of scaled spatial/color covariances of superpixel ``i``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .image_core import ConfigurationError, RasterImage, feature_planes
from .matching import Assignment
from .superpixel import SuperpixelDecomposition, SuperpixelStats


@dataclass(frozen=True)
class FusionParams:
    delta_s: float = 10.0
    delta_c: float = 0.1
    ridge: float = 1e-8
    contributor_limit: int | None = None  # None or 0: every target superpixel contributes

    def __post_init__(self):
        if not (self.delta_s > 0 and self.delta_c > 0 and self.ridge > 0):
            raise ConfigurationError("delta_s, delta_c and ridge must be positive")
        if self.contributor_limit is not None and self.contributor_limit < 0:
            raise ConfigurationError("contributor_limit must be >= 0")

    @property
    def limit(self) -> int:
        return self.contributor_limit or 0


def q_matrix(stats: SuperpixelStats, params: FusionParams) -> np.ndarray:
    """5x5 block-diagonal ``diag(ds^2 Cov(X) + r I, dc^2 Cov(C) + r I)``."""
    q = np.zeros((5, 5))
    q[:2, :2] = params.delta_s ** 2 * np.asarray(stats.spatial_cov) + params.ridge * np.eye(2)
    q[2:, 2:] = params.delta_c ** 2 * np.asarray(stats.color_cov) + params.ridge * np.eye(3)
    return q


def q_inverses(decomp: SuperpixelDecomposition, params: FusionParams) -> np.ndarray:
    """Stacked ``(K, 5, 5)`` inverses, inverting each block separately."""
    k = len(decomp)
    out = np.zeros((k, 5, 5))
    out[:, :2, :2] = np.linalg.inv(params.delta_s ** 2 * decomp.spatial_cov + params.ridge * np.eye(2))
    out[:, 2:, 2:] = np.linalg.inv(params.delta_c ** 2 * decomp.color_cov + params.ridge * np.eye(3))
    return out


def _as_vector(p) -> np.ndarray:
    if hasattr(p, "position") and hasattr(p, "color"):
        return np.concatenate([np.asarray(p.position, float), np.asarray(p.color, float)])
    v = np.asarray(p, dtype=np.float64)
    if v.shape != (5,):
        raise ValueError("pixel feature must be a PixelFeature or a 5-vector")
    return v


def quadratic_forms(p, qinv: np.ndarray, decomp_a: SuperpixelDecomposition) -> np.ndarray:
    """``d_j`` for every target superpixel ``j``."""
    diff = _as_vector(p)[None, :] - decomp_a.mean_features
    return np.einsum("ja,ab,jb->j", diff, qinv, diff)


def weight(p, j: int, qinv_i: np.ndarray, sigma_p: float, decomp_a: SuperpixelDecomposition) -> float:
    """``exp(-(d_j - sigma_p))`` for the contributor ``j``."""
    diff = _as_vector(p) - decomp_a.mean_features[j]
    return float(np.exp(-(diff @ qinv_i @ diff - sigma_p)))


@numba.njit(cache=True)
def _contributor_mask(d, limit, mask):
    k = d.shape[0]
    if limit <= 0 or limit >= k:
        mask[:] = True
        return
    thresh = np.partition(d, limit - 1)[limit - 1]
    taken = 0
    for j in range(k):
        mask[j] = d[j] < thresh
        if mask[j]:
            taken += 1
    for j in range(k):
        if taken >= limit:
            break
        if d[j] == thresh:
            mask[j] = True
            taken += 1


@numba.njit(cache=True)
def _fuse_kernel(feats, owner, qinv, centers, colors, limit, out):
    n = feats.shape[0]
    k = centers.shape[0]
    d = np.empty(k)
    mask = np.empty(k, dtype=np.bool_)
    diff = np.empty(5)
    for p in range(n):
        q = qinv[owner[p]]
        for j in range(k):
            for a in range(5):
                diff[a] = feats[p, a] - centers[j, a]
            # q is block-diagonal: no position/color cross terms
            s = (q[0, 0] * diff[0] * diff[0] + 2.0 * q[0, 1] * diff[0] * diff[1]
                 + q[1, 1] * diff[1] * diff[1])
            for a in range(2, 5):
                s += q[a, a] * diff[a] * diff[a]
                for b in range(a + 1, 5):
                    s += 2.0 * q[a, b] * diff[a] * diff[b]
            d[j] = s
        _contributor_mask(d, limit, mask)
        sigma = np.inf
        for j in range(k):
            if mask[j] and d[j] < sigma:
                sigma = d[j]
        wsum = 0.0
        acc0 = 0.0
        acc1 = 0.0
        acc2 = 0.0
        for j in range(k):
            if not mask[j]:
                continue
            x = d[j] - sigma
            if x > 745.0:  # exp underflows to exactly 0
                continue
            w = np.exp(-x)
            wsum += w
            acc0 += w * colors[j, 0]
            acc1 += w * colors[j, 1]
            acc2 += w * colors[j, 2]
        out[p, 0] = acc0 / wsum
        out[p, 1] = acc1 / wsum
        out[p, 2] = acc2 / wsum


def _matched_colors(decomp_b: SuperpixelDecomposition, assignment: Assignment) -> np.ndarray:
    return np.ascontiguousarray(decomp_b.mean_color[assignment.match])


def fuse_pixels(feats: np.ndarray, owners: np.ndarray, assignment: Assignment,
                decomp_a: SuperpixelDecomposition, decomp_b: SuperpixelDecomposition,
                params: FusionParams, qinv: np.ndarray | None = None) -> np.ndarray:
    """Fused colors in [0, 1] for ``(N, 5)`` pixel features with owning superpixels ``owners``."""
    if len(assignment.match) != len(decomp_a):
        raise ValueError("assignment does not cover the target decomposition")
    if qinv is None:
        qinv = q_inverses(decomp_a, params)
    feats = np.ascontiguousarray(feats, dtype=np.float64).reshape(-1, 5)
    owners = np.ascontiguousarray(owners, dtype=np.int64).ravel()
    out = np.empty((len(feats), 3))
    _fuse_kernel(feats, owners, qinv, np.ascontiguousarray(decomp_a.mean_features),
                 _matched_colors(decomp_b, assignment), params.limit, out)
    return out


def fuse_pixel(p, owner: int, assignment: Assignment, decomp_a: SuperpixelDecomposition,
               decomp_b: SuperpixelDecomposition, params: FusionParams) -> np.ndarray:
    return fuse_pixels(_as_vector(p)[None, :], np.array([owner]), assignment, decomp_a, decomp_b, params)[0]


def transfer_float(image_a: RasterImage, decomp_a: SuperpixelDecomposition,
                   decomp_b: SuperpixelDecomposition, assignment: Assignment,
                   params: FusionParams | None = None) -> np.ndarray:
    """Fused ``(height, width, 3)`` colors before quantization."""
    params = params or FusionParams()
    if decomp_a.labels.shape != image_a.shape:
        raise ValueError(f"decomposition {decomp_a.labels.shape} does not match image {image_a.shape}")
    out = fuse_pixels(feature_planes(image_a), decomp_a.labels, assignment, decomp_a, decomp_b, params)
    return out.reshape(image_a.height, image_a.width, 3)


def transfer(image_a: RasterImage, decomp_a: SuperpixelDecomposition, decomp_b: SuperpixelDecomposition,
             assignment: Assignment, params: FusionParams | None = None) -> RasterImage:
    return RasterImage.from_float(transfer_float(image_a, decomp_a, decomp_b, assignment, params))


def matched_color_render(decomp_a: SuperpixelDecomposition, decomp_b: SuperpixelDecomposition,
                         assignment: Assignment) -> RasterImage:
    """Each target pixel painted with the mean color of its superpixel's match."""
    return RasterImage.from_float(_matched_colors(decomp_b, assignment)[decomp_a.labels])
