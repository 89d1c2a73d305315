"""Synthetic lenses, scenes, and shape corpora used by tests and demos."""

from __future__ import annotations

import math

import numpy as np

from .cameras import CameraModel, Equidistant, Polynomial4
from .pose import Pose
from .representations import Contour, polygon_fill


def representative_fisheye_lens() -> Polynomial4:
    """Quartic lens standing in for an unpublished 190-degree calibration.

    The curve tracks a realistic surround-view fisheye (roughly 330 px/rad on
    axis, ~500 px radius at the 95-degree field edge).
    """
    return Polynomial4(k1=333.19, k2=-16.81, k3=-36.17, k4=20.53, fov_limit=1.67)


def default_scene_camera(size: int = 64) -> Equidistant:
    """Small equidistant camera fully covered by the plane scene."""
    return Equidistant(f=size, cx=(size - 1) / 2, cy=(size - 1) / 2,
                       width=size, height=size)


def plane_texture(x, y):
    """Smooth low-frequency texture in [0.1, 0.9] over plane coordinates."""
    return 0.5 + 0.2 * np.sin(1.3 * x + 0.7) + 0.2 * np.sin(1.1 * y - 0.4)


class PlaneScene:
    """Fronto-parallel textured plane observed by two cameras.

    The world frame is the target camera frame; the plane is z = depth. pose
    maps target-frame points into the source camera frame. Images and
    distance maps are exact evaluations, so warping the source with the
    target's distance map reconstructs the target up to interpolation error.
    """

    def __init__(self, model: CameraModel, pose: Pose, depth: float = 5.0, texture=plane_texture):
        if depth <= 0:
            raise ValueError("plane depth must be positive")
        self.model = model
        self.pose = pose
        self.depth = depth
        self.texture = texture

    def _grid(self):
        w, h = self.model.width, self.model.height
        us, vs = np.meshgrid(np.arange(w, dtype=np.float64), np.arange(h, dtype=np.float64))
        return np.stack([us, vs], axis=-1)

    def target_image(self) -> np.ndarray:
        rays = self.model.unproject(self._grid())
        t = self.depth / rays[..., 2]
        pts = rays * t[..., None]
        return self.texture(pts[..., 0], pts[..., 1])

    def target_distance(self) -> np.ndarray:
        rays = self.model.unproject(self._grid())
        return self.depth / rays[..., 2]

    def source_image(self) -> np.ndarray:
        inv = self.pose.inverse()
        origin = np.asarray(inv.translation)
        rays_src = self.model.unproject(self._grid())
        dirs = rays_src @ inv.rotation_matrix.T
        t = (self.depth - origin[2]) / dirs[..., 2]
        pts = origin + dirs * t[..., None]
        return self.texture(pts[..., 0], pts[..., 1])

    def source_distance(self) -> np.ndarray:
        inv = self.pose.inverse()
        origin = np.asarray(inv.translation)
        rays_src = self.model.unproject(self._grid())
        dirs = rays_src @ inv.rotation_matrix.T
        t = (self.depth - origin[2]) / dirs[..., 2]
        return t


def superellipse_contour(cx, cy, a, b, power, rotation, n=512) -> Contour:
    """Smooth convex superellipse boundary (power >= 2)."""
    t = np.linspace(0, 2 * math.pi, n, endpoint=False)
    ct, st = np.cos(t), np.sin(t)
    x = a * np.sign(ct) * np.abs(ct) ** (2.0 / power)
    y = b * np.sign(st) * np.abs(st) ** (2.0 / power)
    c, s = math.cos(rotation), math.sin(rotation)
    xr = cx + c * x - s * y
    yr = cy + s * x + c * y
    return Contour(np.stack([xr, yr], axis=1))


def convex_shape_corpus(count: int = 50, size: int = 128, seed: int = 7):
    """Random smooth convex masks with their contours.

    Returns a list of (contour, mask) pairs on a size x size canvas.
    """
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        a = rng.uniform(18, 42)
        b = rng.uniform(14, a)
        power = rng.uniform(2.0, 3.5)
        rot = rng.uniform(0, math.pi)
        margin = max(a, b) + 4
        cx = rng.uniform(margin, size - margin)
        cy = rng.uniform(margin, size - margin)
        contour = superellipse_contour(cx, cy, a, b, power, rot)
        mask = polygon_fill(contour.vertices, (size, size))
        out.append((contour, mask))
    return out


def rounded_rectangle_contour(cx, cy, w, h, radius, n=400) -> Contour:
    """Rectangle with quarter-circle corners, traced counterclockwise."""
    r = min(radius, w / 2, h / 2)
    hw, hh = w / 2 - r, h / 2 - r
    per_piece = max(n // 8, 4)
    arc_centers = [(hw, hh, 0.0), (-hw, hh, math.pi / 2), (-hw, -hh, math.pi), (hw, -hh, 1.5 * math.pi)]
    pieces = []
    for px, py, start in arc_centers:
        t = np.linspace(start - math.pi / 2, start, per_piece)
        pieces.append(np.stack([cx + px + r * np.cos(t), cy + py + r * np.sin(t)], axis=1))
    pts = []
    for i, arc in enumerate(pieces):
        pts.extend(arc)
        nxt_start = pieces[(i + 1) % 4][0]
        for t in np.linspace(0, 1, per_piece, endpoint=False)[1:]:
            pts.append(arc[-1] + t * (nxt_start - arc[-1]))
    return Contour(np.array(pts))


def project_plane_rectangle(model: CameraModel, center_xy, half_w, half_h, depth,
                            n_per_side: int = 80) -> Contour:
    """Contour of a fronto-parallel 3D rectangle seen through the model.

    Straight scene edges bend under fisheye projection, so the returned
    contour is a densely sampled curved quadrilateral in pixel space.
    """
    cx, cy = center_xy
    xs = np.linspace(cx - half_w, cx + half_w, n_per_side)
    ys = np.linspace(cy - half_h, cy + half_h, n_per_side)
    top = np.stack([xs, np.full_like(xs, cy - half_h)], axis=1)
    right = np.stack([np.full_like(ys, cx + half_w), ys], axis=1)
    bottom = np.stack([xs[::-1], np.full_like(xs, cy + half_h)], axis=1)
    left = np.stack([np.full_like(ys, cx - half_w), ys[::-1]], axis=1)
    ring = np.concatenate([top[:-1], right[:-1], bottom[:-1], left[:-1]])
    pts3 = np.concatenate([ring, np.full((len(ring), 1), depth)], axis=1)
    pix = model.project(pts3)
    return Contour(pix)
