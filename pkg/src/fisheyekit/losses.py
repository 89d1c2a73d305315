"""Scalar photometric, geometric, and regularization losses as pure functions.

Images are (h, w) or (h, w, c) arrays in [0, 1]; masks are broadcastable
binary maps. Reductions are means over valid pixels unless stated otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import ndimage
from scipy.integrate import quad
from scipy.interpolate import CubicSpline

from .pose import Pose
from .view_synthesis import warp_distance


@dataclass(frozen=True)
class RobustLossParams:
    """Shape rho and scale c of the adaptive robust penalty."""

    rho: float
    c: float = 1.0

    def __post_init__(self):
        if not (self.c > 0 and math.isfinite(self.c)):
            raise ValueError("scale c must be positive and finite")
        if not math.isfinite(self.rho):
            raise ValueError("rho must be finite")


@dataclass(frozen=True)
class PhotometricConfig:
    """Weights and window settings for the photometric loss."""

    alpha: float = 0.85
    clip_percentile: float = 95.0
    ssim_window: int = 3
    ssim_c1: float = 0.01**2
    ssim_c2: float = 0.03**2

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if not 0.0 < self.clip_percentile <= 100.0:
            raise ValueError("clip percentile must lie in (0, 100]")
        if self.ssim_window < 1 or self.ssim_window % 2 == 0:
            raise ValueError("ssim window must be a positive odd size")


def robust_loss(residual, rho: float, c: float = 1.0):
    """General robust penalty, smooth and monotone in |residual|.

    rho = 2 is the quadratic limit 0.5 (x/c)^2, rho = 0 the log limit
    log(0.5 (x/c)^2 + 1); other values use
    (|rho-2|/rho) * (((x/c)^2 / |rho-2| + 1)^(rho/2) - 1).
    """
    if c <= 0:
        raise ValueError("scale c must be positive")
    x = np.asarray(residual, dtype=np.float64)
    q = (x / c) ** 2
    if rho == 2.0:
        out = 0.5 * q
    elif rho == 0.0:
        out = np.log1p(0.5 * q)
    else:
        b = abs(rho - 2.0)
        out = (b / rho) * ((q / b + 1.0) ** (rho / 2.0) - 1.0)
    return float(out) if np.isscalar(residual) else out


def robust_loss_grad(residual, rho: float, c: float = 1.0):
    """Analytic derivative of robust_loss with respect to the residual."""
    if c <= 0:
        raise ValueError("scale c must be positive")
    x = np.asarray(residual, dtype=np.float64)
    if rho == 2.0:
        out = x / c**2
    elif rho == 0.0:
        out = (x / c**2) / (0.5 * (x / c) ** 2 + 1.0)
    else:
        b = abs(rho - 2.0)
        out = (x / c**2) * ((x / c) ** 2 / b + 1.0) ** (rho / 2.0 - 1.0)
    return float(out) if np.isscalar(residual) else out


@lru_cache(maxsize=8)
def _log_partition_spline(c: float):
    """Cubic spline of log Z(rho) over rho in [0, 4], Z by numeric quadrature."""
    rhos = np.linspace(0.0, 4.0, 81)
    logz = []
    for rho in rhos:
        val, _ = quad(lambda z: math.exp(-robust_loss(z, rho, 1.0)), -60.0, 60.0, limit=400)
        logz.append(math.log(c * val))
    return CubicSpline(rhos, np.array(logz))


def robust_nll(residual, rho: float, c: float = 1.0):
    """Negative log-likelihood form: robust_loss plus the log partition.

    Only defined for rho >= 0 (the partition integral diverges otherwise).
    Evaluation-only; log Z uses a spline over quadrature samples.
    """
    if rho < 0:
        raise ValueError("the NLL form needs rho >= 0")
    if rho > 4.0:
        raise ValueError("log partition tabulated for rho in [0, 4]")
    spline = _log_partition_spline(float(c))
    return robust_loss(residual, rho, c) + float(spline(rho))


def _box_mean(img: np.ndarray, window: int, mask: np.ndarray | None):
    """Windowed mean; masked pixels are excluded from the window statistics."""
    size = (window, window) + (1,) * (img.ndim - 2)
    if mask is None:
        return ndimage.uniform_filter(img, size=size, mode="nearest")
    m = np.broadcast_to(np.asarray(mask, dtype=np.float64).reshape(mask.shape + (1,) * (img.ndim - 2)), img.shape)
    num = ndimage.uniform_filter(img * m, size=size, mode="nearest")
    den = ndimage.uniform_filter(m, size=size, mode="nearest")
    return np.where(den > 1e-12, num / np.maximum(den, 1e-12), 0.0)


def ssim(a, b, mask=None, window: int = 3, c1: float = 0.01**2, c2: float = 0.03**2):
    """Per-pixel structural similarity in [-1, 1] over a square window."""
    x = np.asarray(a, dtype=np.float64)
    y = np.asarray(b, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError("images must share a shape")
    mu_x = _box_mean(x, window, mask)
    mu_y = _box_mean(y, window, mask)
    sigma_x = _box_mean(x * x, window, mask) - mu_x**2
    sigma_y = _box_mean(y * y, window, mask) - mu_y**2
    sigma_xy = _box_mean(x * y, window, mask) - mu_x * mu_y
    num = (2 * mu_x * mu_y + c1) * (2 * sigma_xy + c2)
    den = (mu_x**2 + mu_y**2 + c1) * (sigma_x + sigma_y + c2)
    out = num / den
    if out.ndim == 3:
        out = out.mean(axis=2)
    return np.clip(out, -1.0, 1.0)


def _channel_mean_abs(diff: np.ndarray) -> np.ndarray:
    return np.abs(diff).mean(axis=2) if diff.ndim == 3 else np.abs(diff)


def photometric_loss(
    target,
    reconstructions,
    masks=None,
    cfg: PhotometricConfig = PhotometricConfig(),
    robust: RobustLossParams | None = None,
):
    """Per-pixel photometric error and its scalar mean.

    Each reconstruction contributes alpha * (1 - SSIM)/2 plus (1 - alpha)
    times the absolute difference (or the robust penalty of it); the map is
    the per-pixel minimum over reconstructions, with values above the clip
    percentile zeroed. Returns (map, scalar); the scalar averages valid
    pixels (union of the per-reconstruction masks).
    """
    if len(reconstructions) == 0:
        raise ValueError("need at least one reconstruction")
    tgt = np.asarray(target, dtype=np.float64)
    if masks is None:
        masks = [None] * len(reconstructions)
    if len(masks) != len(reconstructions):
        raise ValueError("one mask per reconstruction (or None)")
    per_recon = []
    any_valid = np.zeros(tgt.shape[:2], dtype=bool)
    for recon, mask in zip(reconstructions, masks):
        rec = np.asarray(recon, dtype=np.float64)
        if rec.shape != tgt.shape:
            raise ValueError("reconstruction shape differs from target")
        structural = (1.0 - ssim(tgt, rec, mask, cfg.ssim_window, cfg.ssim_c1, cfg.ssim_c2)) / 2.0
        diff = tgt - rec
        if robust is None:
            pixel = _channel_mean_abs(diff)
        else:
            pixel = robust_loss(np.abs(diff), robust.rho, robust.c)
            if pixel.ndim == 3:
                pixel = pixel.mean(axis=2)
        err = cfg.alpha * structural + (1.0 - cfg.alpha) * pixel
        if mask is not None:
            m = np.asarray(mask, dtype=bool)
            err = np.where(m, err, np.inf)
            any_valid |= m
        else:
            any_valid |= True
        per_recon.append(err)
    combined = np.min(per_recon, axis=0)
    combined = np.where(any_valid, combined, 0.0)
    valid_vals = combined[any_valid]
    if valid_vals.size and cfg.clip_percentile < 100.0:
        cut = np.percentile(valid_vals, cfg.clip_percentile)
        combined = np.where(combined > cut, 0.0, combined)
    scalar = float(combined[any_valid].mean()) if np.any(any_valid) else 0.0
    return combined, scalar


def smoothness_loss(distance, image) -> float:
    """Edge-aware first-order smoothness on mean-normalized inverse distance.

    Forward differences; the image gradient magnitude (channel mean) damps
    the distance gradient exponentially.
    """
    d = np.asarray(distance, dtype=np.float64)
    img = np.asarray(image, dtype=np.float64)
    if np.any(d <= 0):
        raise ValueError("distance must be positive")
    if d.shape != img.shape[:2]:
        raise ValueError("distance and image shapes differ")
    inv = 1.0 / d
    dstar = inv / inv.mean()
    du_d = np.abs(np.diff(dstar, axis=1))
    dv_d = np.abs(np.diff(dstar, axis=0))

    def grad_mag(diff):
        return np.abs(diff).mean(axis=2) if diff.ndim == 3 else np.abs(diff)

    du_i = grad_mag(np.diff(img, axis=1))
    dv_i = grad_mag(np.diff(img, axis=0))
    term_u = float((du_d * np.exp(-du_i)).mean()) if du_d.size else 0.0
    term_v = float((dv_d * np.exp(-dv_i)).mean()) if dv_d.size else 0.0
    return term_u + term_v


def csdc_loss(distances, poses, model, masks=None) -> float:
    """Cross-frame distance consistency over every ordered frame pair.

    distances: per-frame maps; poses: per-frame camera-to-reference rigid
    transforms (pair transforms are derived as inv(pose[j]) o pose[i]).
    Both time directions contribute the masked mean absolute gap between the
    interpolated and the transformed distance.
    """
    n = len(distances)
    if n < 2:
        raise ValueError("need at least two frames")
    if len(poses) != n:
        raise ValueError("one pose per frame")
    if masks is None:
        masks = [None] * n
    shape = np.asarray(distances[0]).shape
    for d in distances:
        if np.asarray(d).shape != shape:
            raise ValueError("distance maps must share a shape")
    total = 0.0
    for i in range(n - 1):
        for j in range(i + 1, n):
            for src, dst in ((i, j), (j, i)):
                rel = poses[dst].inverse().compose(poses[src])
                sampled, transformed, mask = warp_distance(
                    distances[src], distances[dst], rel, model
                )
                if masks[src] is not None:
                    mask = mask & np.asarray(masks[src], dtype=bool)
                if np.any(mask):
                    total += float(np.abs(sampled - transformed)[mask].mean())
    return total


def feature_regularizers(features, image):
    """First-order discriminative and second-order convergence penalties.

    nabla1 = d/dx + d/dy (forward differences), nabla2 = dxx + 2 dxy + dyy.
    Returns (L_dis, L_cvt): L_dis is the negative image-damped mean of
    |nabla1 features| (large slopes rewarded), L_cvt the mean |nabla2|.
    """
    f = np.asarray(features, dtype=np.float64)
    img = np.asarray(image, dtype=np.float64)
    if f.shape[:2] != img.shape[:2]:
        raise ValueError("feature and image grids differ")
    if f.shape[0] < 3 or f.shape[1] < 3:
        raise ValueError("need at least a 3x3 grid")

    def l1_channels(arr):
        return np.abs(arr).sum(axis=2) if arr.ndim == 3 else np.abs(arr)

    def nabla1(arr):
        dx = np.diff(arr, axis=1)[:-1, :]
        dy = np.diff(arr, axis=0)[:, :-1]
        return dx + dy

    g1_f = l1_channels(nabla1(f))
    g1_i = l1_channels(nabla1(img))
    l_dis = -float((np.exp(-g1_i) * g1_f).mean())

    dxx = f[:, 2:] - 2 * f[:, 1:-1] + f[:, :-2]
    dyy = f[2:, :] - 2 * f[1:-1, :] + f[:-2, :]
    dxy = (f[1:, 1:] - f[1:, :-1]) - (f[:-1, 1:] - f[:-1, :-1])
    g2 = dxx[1:-1, :] + 2 * dxy[:-1, :-1] + dyy[:, 1:-1]
    l_cvt = float(l1_channels(g2).mean())
    return l_dis, l_cvt


@dataclass(frozen=True)
class ScaleLosses:
    """Per-scale components entering the total objective."""

    photometric_forward: float = 0.0
    photometric_backward: float = 0.0
    distance_consistency: float = 0.0
    smoothness: float = 0.0
    feature_reconstruction: float = 0.0
    discriminative: float = 0.0
    convergent: float = 0.0


@dataclass(frozen=True)
class LossWeights:
    smoothness: float = 1e-3
    distance_consistency: float = 1e-3
    discriminative: float = 1e-3
    convergent: float = 1e-3


def total_objective(scale_losses, weights: LossWeights = LossWeights()) -> float:
    """Combine up to four per-scale losses with the 1/2^(n-1) scale decay."""
    if not 1 <= len(scale_losses) <= 4:
        raise ValueError("expected 1 to 4 scales")
    total = 0.0
    for n, s in enumerate(scale_losses, start=1):
        level = (
            s.photometric_forward
            + s.photometric_backward
            + weights.distance_consistency * s.distance_consistency
            + weights.smoothness * s.smoothness
            + s.feature_reconstruction
            + weights.discriminative * s.discriminative
            + weights.convergent * s.convergent
        )
        total += level / 2 ** (n - 1)
    return float(total)
