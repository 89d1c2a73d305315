"""Geometric image reconstruction between frames.

Images are (h, w) or (h, w, c) float arrays in [0, 1], distance maps are
(h, w) positive Euclidean distances (meters), label maps are (h, w) integer
class ids. Warps are backward: for every target pixel the source coordinate
is computed through unproject -> rigid transform -> project, then sampled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cameras import CameraModel
from .pose import Pose


@dataclass(frozen=True)
class WarpResult:
    """Reconstruction plus the ego mask and the raw source coordinates.

    mask is 0 exactly where the source coordinate left the source image or
    the camera domain (no valid mapping).
    """

    image: np.ndarray
    mask: np.ndarray
    coords: np.ndarray


def scale_pose(pose: Pose, speed_t: float, speed_t2: float, dt: float) -> Pose:
    """Rescale the translation to the odometry displacement magnitude.

    The displacement is the mean of the two instantaneous speeds times dt;
    rotation is untouched.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    delta_x = 0.5 * (abs(speed_t) + abs(speed_t2)) * dt
    if delta_x <= 0:
        raise ValueError("displacement must be positive")
    return pose.with_translation_norm(delta_x)


def _source_coords(distance: np.ndarray, pose: Pose, model: CameraModel):
    """Continuous source coordinates for each target pixel, with validity."""
    h, w = distance.shape
    us, vs = np.meshgrid(np.arange(w, dtype=np.float64), np.arange(h, dtype=np.float64))
    pixels = np.stack([us, vs], axis=-1)
    points, in_fov = model.unproject_masked(pixels, distance)
    moved = pose.apply(np.where(in_fov[..., None], points, 1.0).reshape(-1, 3)).reshape(h, w, 3)
    coords, valid = model.project_masked(moved)
    coords = np.where((valid & in_fov)[..., None], coords, np.nan)
    return coords, valid & in_fov


def _bilinear_sample(image: np.ndarray, coords: np.ndarray):
    """Sample image at continuous (u, v); returns (values, inside_mask).

    Neighborhoods are clamped at the border, so exact integer coordinates
    reproduce pixels exactly; coordinates outside [0, w-1] x [0, h-1] are
    flagged outside.
    """
    h, w = image.shape[:2]
    u = coords[..., 0]
    v = coords[..., 1]
    finite = np.isfinite(u) & np.isfinite(v)
    inside = finite & (u >= 0) & (u <= w - 1) & (v >= 0) & (v <= h - 1)
    uc = np.where(inside, u, 0.0)
    vc = np.where(inside, v, 0.0)
    x0 = np.floor(uc).astype(np.int64)
    y0 = np.floor(vc).astype(np.int64)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    wx = uc - x0
    wy = vc - y0
    if image.ndim == 3:
        wx = wx[..., None]
        wy = wy[..., None]
    top = image[y0, x0] * (1 - wx) + image[y0, x1] * wx
    bot = image[y1, x0] * (1 - wx) + image[y1, x1] * wx
    return top * (1 - wy) + bot * wy, inside


def _nearest_sample(labels: np.ndarray, coords: np.ndarray):
    """Nearest-neighbor variant with half-up rounding."""
    h, w = labels.shape[:2]
    u = coords[..., 0]
    v = coords[..., 1]
    finite = np.isfinite(u) & np.isfinite(v)
    inside = finite & (u >= -0.5) & (u < w - 0.5) & (v >= -0.5) & (v < h - 0.5)
    x = np.clip(np.floor(np.where(inside, u, 0.0) + 0.5).astype(np.int64), 0, w - 1)
    y = np.clip(np.floor(np.where(inside, v, 0.0) + 0.5).astype(np.int64), 0, h - 1)
    return labels[y, x], inside


def _check_shapes(source: np.ndarray, distance: np.ndarray, model: CameraModel) -> None:
    if source.shape[:2] != distance.shape:
        raise ValueError("source and distance map shapes differ")
    if model.width > 0 and (model.width, model.height) != (distance.shape[1], distance.shape[0]):
        raise ValueError("map shape does not match the camera sensor size")


def warp_image(source: np.ndarray, distance: np.ndarray, pose: Pose, model: CameraModel) -> WarpResult:
    """Reconstruct the target frame by bilinear backward warping of source.

    distance holds the target frame's per-pixel Euclidean distances; pose is
    the target-to-source rigid transform. The identity pose reproduces the
    source exactly.
    """
    src = np.asarray(source, dtype=np.float64)
    dist = np.asarray(distance, dtype=np.float64)
    _check_shapes(src, dist, model)
    if np.any(dist <= 0):
        raise ValueError("distance map must be positive")
    h, w = dist.shape
    if pose.is_identity():
        us, vs = np.meshgrid(np.arange(w, dtype=np.float64), np.arange(h, dtype=np.float64))
        coords = np.stack([us, vs], axis=-1)
        return WarpResult(image=src.copy(), mask=np.ones((h, w), dtype=bool), coords=coords)
    coords, valid = _source_coords(dist, pose, model)
    values, inside = _bilinear_sample(src, coords)
    mask = valid & inside
    out = np.where(mask[..., None] if src.ndim == 3 else mask, values, 0.0)
    return WarpResult(image=out, mask=mask, coords=coords)


def warp_labels(source: np.ndarray, distance: np.ndarray, pose: Pose, model: CameraModel):
    """Nearest-neighbor label warp; returns (labels, mask)."""
    labels = np.asarray(source)
    if not np.issubdtype(labels.dtype, np.integer):
        raise ValueError("label maps must be integer-typed")
    dist = np.asarray(distance, dtype=np.float64)
    _check_shapes(labels, dist, model)
    if np.any(dist <= 0):
        raise ValueError("distance map must be positive")
    if pose.is_identity():
        return labels.copy(), np.ones(labels.shape, dtype=bool)
    coords, valid = _source_coords(dist, pose, model)
    values, inside = _nearest_sample(labels, coords)
    mask = valid & inside
    return np.where(mask, values, 0), mask


def auto_mask(target, reconstructions, sources, pe) -> np.ndarray:
    """Static-pixel gate: 1 where the best reconstruction beats the best
    unwarped source under the per-pixel error pe, strict inequality."""
    if len(reconstructions) == 0 or len(sources) == 0:
        raise ValueError("need at least one reconstruction and one source")
    tgt = np.asarray(target, dtype=np.float64)
    recon_err = np.min([np.asarray(pe(tgt, np.asarray(r, dtype=np.float64))) for r in reconstructions], axis=0)
    source_err = np.min([np.asarray(pe(tgt, np.asarray(s, dtype=np.float64))) for s in sources], axis=0)
    return (recon_err < source_err).astype(np.uint8)


def dynamic_object_mask(
    labels_t: np.ndarray,
    labels_warped: np.ndarray,
    dynamic_classes,
    consistency_eps: float = 0.5,
) -> np.ndarray:
    """Mask of pixels safe for photometric supervision.

    0 where either the current frame or the warped previous-frame labels show
    a dynamic class. The mask only applies when the dynamic content is judged
    moving: if fewer than consistency_eps of the dynamic pixels disagree
    between the two maps, an all-ones mask is returned.
    """
    a = np.asarray(labels_t)
    b = np.asarray(labels_warped)
    if a.shape != b.shape:
        raise ValueError("label maps must share a shape")
    dyn = np.array(sorted(dynamic_classes), dtype=a.dtype) if len(dynamic_classes) else np.array([], dtype=a.dtype)
    in_a = np.isin(a, dyn)
    in_b = np.isin(b, dyn)
    union = in_a | in_b
    if not np.any(union):
        return np.ones(a.shape, dtype=np.uint8)
    inconsistent = np.count_nonzero(in_a ^ in_b) / np.count_nonzero(union)
    if inconsistent < consistency_eps:
        return np.ones(a.shape, dtype=np.uint8)
    return (~union).astype(np.uint8)


def warp_distance(distance_t: np.ndarray, distance_t2: np.ndarray, pose: Pose, model: CameraModel):
    """Cross-frame distances: (sampled from the other frame, transformed norm, mask).

    The first output bilinearly samples distance_t2 at the projected
    coordinates; the second is the norm of the transformed target point
    cloud. For exact geometry the two agree away from occlusions.
    """
    d_t = np.asarray(distance_t, dtype=np.float64)
    d_s = np.asarray(distance_t2, dtype=np.float64)
    if d_t.shape != d_s.shape:
        raise ValueError("distance maps must share a shape")
    if np.any(d_t <= 0) or np.any(d_s <= 0):
        raise ValueError("distance maps must be positive")
    h, w = d_t.shape
    us, vs = np.meshgrid(np.arange(w, dtype=np.float64), np.arange(h, dtype=np.float64))
    points, in_fov = model.unproject_masked(np.stack([us, vs], axis=-1), d_t)
    moved = pose.apply(np.where(in_fov[..., None], points, 1.0).reshape(-1, 3)).reshape(h, w, 3)
    transformed = np.linalg.norm(moved, axis=-1)
    coords, valid = model.project_masked(moved)
    sampled, inside = _bilinear_sample(d_s, coords)
    mask = valid & inside & in_fov
    return np.where(mask, sampled, 0.0), np.where(mask, transformed, 0.0), mask


def sigmoid_to_distance(sigma, mode: str = "fisheye", lo: float = 0.1, hi: float = 100.0):
    """Map a [0, 1] activation to a bounded distance.

    fisheye uses the increasing affine map lo + (hi - lo) * sigma; pinhole
    uses the decreasing reciprocal map 1 / (m * sigma + n) with the same
    bounds (sigma = 0 -> hi, sigma = 1 -> lo).
    """
    s = np.asarray(sigma, dtype=np.float64)
    if np.any(s < 0) or np.any(s > 1):
        raise ValueError("sigma must lie in [0, 1]")
    if not 0 < lo < hi:
        raise ValueError("need 0 < lo < hi")
    if mode == "fisheye":
        out = lo + (hi - lo) * s
    elif mode == "pinhole":
        n = 1.0 / hi
        m = 1.0 / lo - n
        out = 1.0 / (m * s + n)
    else:
        raise ValueError("mode must be 'fisheye' or 'pinhole'")
    return float(out) if np.isscalar(sigma) else out
