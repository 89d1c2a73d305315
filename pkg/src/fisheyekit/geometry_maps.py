"""Per-pixel camera geometry channels: centered coordinates, incidence angles,
normalized coordinates, and their six-channel stack.

All maps are (h, w) arrays indexed [row v, column u]; the horizontal channels
vary along the second axis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cameras import CameraModel, InverseLUT

CHANNEL_ORDER = ("cc_x", "cc_y", "a_x", "a_y", "nc_x", "nc_y")


def centered_coord_maps(w: int, h: int, cx: float, cy: float):
    """Pixel-index maps centered on the principal point.

    cc_x[v, u] = u - cx, cc_y[v, u] = v - cy.
    """
    if w < 1 or h < 1:
        raise ValueError("map size must be at least 1x1")
    cc_x = np.broadcast_to(np.arange(w, dtype=np.float64) - cx, (h, w)).copy()
    cc_y = np.broadcast_to((np.arange(h, dtype=np.float64) - cy)[:, None], (h, w)).copy()
    return cc_x, cc_y


def incidence_angle_maps(model: CameraModel, w: int, h: int, lut: InverseLUT | None = None):
    """Signed per-axis incidence angles.

    a_x inverts the radial function along the row through the principal
    point (x = cc_x, y = 0) and a_y along the column (x = 0, y = cc_y); the
    sign follows the centered coordinate. Pixels whose radius exceeds the
    model's usable range become NaN.
    """
    cc_x, cc_y = centered_coord_maps(w, h, model.cx, model.cy)
    inverse = lut if lut is not None else model.radial_inverse
    limit = lut.radii[-1] if lut is not None else model.r_max

    def signed_angles(cc: np.ndarray, aspect: float) -> np.ndarray:
        radii = np.abs(cc) / aspect
        ok = radii <= limit * (1 + 1e-9)
        safe = np.where(ok, np.minimum(radii, limit), 0.0)
        theta = np.asarray(inverse(safe))
        return np.where(ok, np.sign(cc) * theta, np.nan)

    return signed_angles(cc_x, model.ax), signed_angles(cc_y, model.ay)


def normalized_coord_maps(w: int, h: int):
    """Linear ramps from -1 at the first pixel to +1 at the last, per axis."""
    if w < 2 or h < 2:
        raise ValueError("normalized maps need at least 2 pixels per axis")
    nc_x = np.broadcast_to(np.linspace(-1.0, 1.0, w), (h, w)).copy()
    nc_y = np.broadcast_to(np.linspace(-1.0, 1.0, h)[:, None], (h, w)).copy()
    return nc_x, nc_y


@dataclass(frozen=True)
class CGTensor:
    """Six-channel (6, h, w) stack: cc_x, cc_y, a_x, a_y, nc_x, nc_y."""

    channels: np.ndarray
    model_tag: str

    def __post_init__(self):
        arr = np.asarray(self.channels, dtype=np.float64)
        if arr.ndim != 3 or arr.shape[0] != 6:
            raise ValueError("channels must have shape (6, h, w)")
        object.__setattr__(self, "channels", arr)

    @property
    def shape(self):
        return self.channels.shape

    def channel(self, name: str) -> np.ndarray:
        return self.channels[CHANNEL_ORDER.index(name)]

    def resized(self, h: int, w: int) -> "CGTensor":
        out = np.stack([resize_bilinear(c, h, w) for c in self.channels])
        return CGTensor(out, self.model_tag)


def resize_bilinear(img: np.ndarray, h: int, w: int) -> np.ndarray:
    """Corner-aligned bilinear resize of a 2-D map.

    Corners map to corners exactly, so ramps that span [-1, 1] keep their
    endpoint values at any resolution.
    """
    src = np.asarray(img, dtype=np.float64)
    sh, sw = src.shape
    if h < 1 or w < 1:
        raise ValueError("target size must be positive")
    ys = np.linspace(0, sh - 1, h) if h > 1 else np.array([(sh - 1) / 2.0])
    xs = np.linspace(0, sw - 1, w) if w > 1 else np.array([(sw - 1) / 2.0])
    y0 = np.clip(np.floor(ys).astype(int), 0, sh - 1)
    x0 = np.clip(np.floor(xs).astype(int), 0, sw - 1)
    y1 = np.minimum(y0 + 1, sh - 1)
    x1 = np.minimum(x0 + 1, sw - 1)
    wy = (ys - y0)[:, None]
    wx = (xs - x0)[None, :]
    top = src[np.ix_(y0, x0)] * (1 - wx) + src[np.ix_(y0, x1)] * wx
    bot = src[np.ix_(y1, x0)] * (1 - wx) + src[np.ix_(y1, x1)] * wx
    return top * (1 - wy) + bot * wy


def assemble_cgt(
    model: CameraModel,
    w: int | None = None,
    h: int | None = None,
    out_size: tuple[int, int] | None = None,
    lut: InverseLUT | None = None,
) -> CGTensor:
    """Stack the six geometry channels at sensor resolution.

    out_size = (h, w) optionally resizes the stack with corner-aligned
    bilinear interpolation, preserving the +-1 normalized-coordinate corners.
    """
    w = model.width if w is None else w
    h = model.height if h is None else h
    if w < 2 or h < 2:
        raise ValueError("need a sensor size of at least 2x2")
    cc_x, cc_y = centered_coord_maps(w, h, model.cx, model.cy)
    a_x, a_y = incidence_angle_maps(model, w, h, lut=lut)
    nc_x, nc_y = normalized_coord_maps(w, h)
    cgt = CGTensor(np.stack([cc_x, cc_y, a_x, a_y, nc_x, nc_y]), model.tag)
    if out_size is not None:
        cgt = cgt.resized(*out_size)
    return cgt
