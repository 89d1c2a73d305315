"""Object shape representations fit from instance contours, plus rasterized IoU.

Contours are ordered (n, 2) pixel-coordinate vertex arrays, implicitly closed.
Masks are (h, w) boolean arrays; rasterization samples pixel centers with the
even-odd rule.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np


class DegenerateContourError(ValueError):
    """Contour cannot support the requested fit."""


@dataclass(frozen=True)
class Contour:
    """Closed vertex chain; consecutive duplicates are dropped at build time."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.float64)
        if v.ndim != 2 or v.shape[1] != 2:
            raise ValueError("contour vertices must have shape (n, 2)")
        if not np.all(np.isfinite(v)):
            raise ValueError("contour vertices must be finite")
        keep = np.ones(len(v), dtype=bool)
        keep[1:] = np.any(np.abs(np.diff(v, axis=0)) > 1e-12, axis=1)
        v = v[keep]
        if len(v) > 1 and np.all(np.abs(v[0] - v[-1]) < 1e-12):
            v = v[:-1]
        if len(v) < 3:
            raise DegenerateContourError("contour needs at least 3 distinct vertices")
        object.__setattr__(self, "vertices", v)

    def __len__(self):
        return len(self.vertices)

    @property
    def signed_area(self) -> float:
        v = self.vertices
        x, y = v[:, 0], v[:, 1]
        return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

    @property
    def area(self) -> float:
        return abs(self.signed_area)

    @property
    def perimeter(self) -> float:
        v = self.vertices
        return float(np.sum(np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1)))

    @property
    def centroid(self) -> np.ndarray:
        v = self.vertices
        a = self.signed_area
        if abs(a) < 1e-12:
            return v.mean(axis=0)
        x, y = v[:, 0], v[:, 1]
        xn, yn = np.roll(x, -1), np.roll(y, -1)
        cross = x * yn - xn * y
        cx = np.sum((x + xn) * cross) / (6.0 * a)
        cy = np.sum((y + yn) * cross) / (6.0 * a)
        return np.array([cx, cy])


@dataclass(frozen=True)
class StandardBox:
    """Axis-aligned box: center, width, height (px)."""

    cx: float
    cy: float
    w: float
    h: float

    kind = "standard_box"

    @property
    def is_degenerate(self) -> bool:
        return self.w <= 0 or self.h <= 0

    def contains(self, x, y):
        # half-open on the upper side so integer-sized boxes rasterize to
        # exactly w * h pixel centers
        dx = np.asarray(x) - self.cx
        dy = np.asarray(y) - self.cy
        return (dx >= -self.w / 2) & (dx < self.w / 2) & (dy >= -self.h / 2) & (dy < self.h / 2)


@dataclass(frozen=True)
class OrientedBox:
    """Rotated box; theta in (-pi/2, pi/2] is the w-axis angle to the x-axis."""

    cx: float
    cy: float
    w: float
    h: float
    theta: float

    kind = "oriented_box"

    def corners(self) -> np.ndarray:
        c, s = math.cos(self.theta), math.sin(self.theta)
        axis_w = np.array([c, s])
        axis_h = np.array([-s, c])
        ctr = np.array([self.cx, self.cy])
        half = [
            -axis_w * self.w / 2 - axis_h * self.h / 2,
            axis_w * self.w / 2 - axis_h * self.h / 2,
            axis_w * self.w / 2 + axis_h * self.h / 2,
            -axis_w * self.w / 2 + axis_h * self.h / 2,
        ]
        return ctr + np.array(half)

    @property
    def area(self) -> float:
        return self.w * self.h

    def contains(self, x, y):
        c, s = math.cos(self.theta), math.sin(self.theta)
        dx, dy = np.asarray(x) - self.cx, np.asarray(y) - self.cy
        u = dx * c + dy * s
        v = -dx * s + dy * c
        return (u >= -self.w / 2) & (u < self.w / 2) & (v >= -self.h / 2) & (v < self.h / 2)


@dataclass(frozen=True)
class Ellipse:
    """Oriented ellipse with semi-axes a >= b."""

    cx: float
    cy: float
    a: float
    b: float
    theta: float

    kind = "ellipse"

    @property
    def area(self) -> float:
        return math.pi * self.a * self.b

    def contains(self, x, y):
        c, s = math.cos(self.theta), math.sin(self.theta)
        dx, dy = x - self.cx, y - self.cy
        u = dx * c + dy * s
        v = -dx * s + dy * c
        return (u / self.a) ** 2 + (v / self.b) ** 2 <= 1.0


@dataclass(frozen=True)
class CurvedBox:
    """Annular sector: two concentric arcs cut by two radial segments.

    (c1, c2) is the circle center, r1 < r2 the radii, theta1 < theta2 the
    angles of the radial sides against the x-axis.
    """

    c1: float
    c2: float
    r1: float
    r2: float
    theta1: float
    theta2: float

    kind = "curved_box"

    def __post_init__(self):
        if not 0 <= self.r1 < self.r2:
            raise ValueError("need 0 <= r1 < r2")
        if not 0 < self.theta2 - self.theta1 < 2 * math.pi:
            raise ValueError("need 0 < theta2 - theta1 < 2*pi")

    def contains(self, x, y):
        # half-open on the outer arc and the theta2 side, mirroring the box
        # conventions so the at-infinity limit rasterizes like a rectangle
        dx, dy = np.asarray(x) - self.c1, np.asarray(y) - self.c2
        d = np.hypot(dx, dy)
        ang = np.mod(np.arctan2(dy, dx) - self.theta1, 2 * math.pi)
        return (d >= self.r1) & (d < self.r2) & (ang < self.theta2 - self.theta1)


@dataclass(frozen=True)
class PolygonRep:
    """Polygon in angular (center + radii) or vertex (centroid + offsets) form."""

    mode: str
    center: np.ndarray
    radii: np.ndarray | None = None
    offsets: np.ndarray | None = None
    flagged: bool = False

    kind = "polygon"

    def __post_init__(self):
        if self.mode not in ("uniform-angular", "uniform-perimeter", "adaptive"):
            raise ValueError(f"unknown polygon mode {self.mode!r}")
        object.__setattr__(self, "center", np.asarray(self.center, dtype=np.float64))
        if self.mode == "uniform-angular":
            r = np.asarray(self.radii, dtype=np.float64)
            if r.ndim != 1 or len(r) < 3 or np.any(r < 0):
                raise ValueError("angular form needs >= 3 non-negative radii")
            object.__setattr__(self, "radii", r)
        else:
            off = np.asarray(self.offsets, dtype=np.float64)
            if off.ndim != 2 or off.shape[1] != 2 or len(off) < 3:
                raise ValueError("vertex form needs >= 3 offsets")
            object.__setattr__(self, "offsets", off)

    @property
    def n(self) -> int:
        return len(self.radii) if self.radii is not None else len(self.offsets)

    def vertices(self) -> np.ndarray:
        if self.mode == "uniform-angular":
            k = np.arange(self.n)
            ang = 2 * math.pi * k / self.n
            return self.center + self.radii[:, None] * np.stack([np.cos(ang), np.sin(ang)], axis=1)
        return self.center + self.offsets


Representation = StandardBox | OrientedBox | Ellipse | CurvedBox | PolygonRep


# -- fits ----------------------------------------------------------------------

def fit_standard_box(contour: Contour) -> StandardBox:
    """Tight axis-aligned bounding box of the contour vertices."""
    v = contour.vertices
    lo = v.min(axis=0)
    hi = v.max(axis=0)
    return StandardBox(
        cx=float((lo[0] + hi[0]) / 2), cy=float((lo[1] + hi[1]) / 2),
        w=float(hi[0] - lo[0]), h=float(hi[1] - lo[1]),
    )


def _convex_hull(points: np.ndarray) -> np.ndarray:
    """Andrew monotone chain; returns counter-clockwise hull vertices."""
    pts = np.unique(points, axis=0)
    if len(pts) < 3:
        raise DegenerateContourError("hull needs at least 3 distinct points")
    pts = pts[np.lexsort((pts[:, 1], pts[:, 0]))]

    def build(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and np.cross(out[-1] - out[-2], p - out[-2]) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = build(pts)
    upper = build(pts[::-1])
    hull = np.array(lower[:-1] + upper[:-1])
    if len(hull) < 3:
        raise DegenerateContourError("contour is collinear")
    return hull


def fit_oriented_box(contour: Contour) -> OrientedBox:
    """Minimum-area enclosing rectangle via rotating the hull edge directions."""
    hull = _convex_hull(contour.vertices)
    edges = np.roll(hull, -1, axis=0) - hull
    angles = np.arctan2(edges[:, 1], edges[:, 0])
    best = None
    for ang in angles:
        c, s = math.cos(ang), math.sin(ang)
        rot = hull @ np.array([[c, -s], [s, c]])
        lo = rot.min(axis=0)
        hi = rot.max(axis=0)
        area = float((hi[0] - lo[0]) * (hi[1] - lo[1]))
        if best is None or area < best[0] - 1e-12:
            best = (area, ang, lo, hi)
    _, ang, lo, hi = best
    ctr_rot = (lo + hi) / 2
    c, s = math.cos(ang), math.sin(ang)
    ctr = ctr_rot @ np.array([[c, s], [-s, c]])
    w = float(hi[0] - lo[0])
    h = float(hi[1] - lo[1])
    if w < h:  # canonical form: w is the long side, theta its direction
        w, h = h, w
        ang += math.pi / 2
    theta = ang % math.pi
    if theta > math.pi / 2:
        theta -= math.pi  # fold to (-pi/2, pi/2]
    return OrientedBox(cx=float(ctr[0]), cy=float(ctr[1]), w=w, h=h, theta=float(theta))


def fit_ellipse(contour: Contour, tol: float = 1e-9, max_iter: int = 10000) -> Ellipse:
    """Minimum-area enclosing ellipse by Khachiyan's iteration."""
    pts = contour.vertices
    if len(pts) < 5:
        raise DegenerateContourError("ellipse fit needs at least 5 vertices")
    n = len(pts)
    q = np.column_stack([pts, np.ones(n)]).T  # (3, n)
    u = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        x_mat = q @ np.diag(u) @ q.T
        try:
            m = np.einsum("in,ij,jn->n", q, np.linalg.inv(x_mat), q)
        except np.linalg.LinAlgError:
            raise DegenerateContourError("collinear contour, no enclosing ellipse") from None
        j = int(np.argmax(m))
        step = (m[j] - 3.0) / (3.0 * (m[j] - 1.0))
        new_u = (1 - step) * u
        new_u[j] += step
        if np.linalg.norm(new_u - u) < tol:
            u = new_u
            break
        u = new_u
    center = pts.T @ u
    cov = (pts.T @ np.diag(u) @ pts - np.outer(center, center))
    try:
        a_mat = np.linalg.inv(cov) / 2.0
    except np.linalg.LinAlgError:
        raise DegenerateContourError("collinear contour, no enclosing ellipse") from None
    evals, evecs = np.linalg.eigh(a_mat)
    if np.any(evals <= 0):
        raise DegenerateContourError("collinear contour, no enclosing ellipse")
    axes = 1.0 / np.sqrt(evals)  # descending axis = ascending eigenvalue
    major, minor = float(axes[0]), float(axes[1])
    vec = evecs[:, 0]
    theta = math.atan2(vec[1], vec[0])
    theta = (theta + math.pi / 2) % math.pi - math.pi / 2
    return Ellipse(cx=float(center[0]), cy=float(center[1]), a=major, b=minor, theta=theta)


def fit_curved_box(mask: np.ndarray, contour: Contour,
                   candidates: int = 64, span: float = 8.0) -> CurvedBox:
    """Best IoU annular sector with its center on an oriented box axis line.

    Centers are sampled along both axis lines of the oriented box (span
    measured in box diagonals) plus a far candidate standing in for the
    at-infinity rectangle limit. For each center the sector passes through
    the contour's radial and angular extremes, which reduces to the oriented
    box corners in the undistorted rectangle limit; ties prefer the larger
    center distance, i.e. the less curved shape.
    """
    m = np.asarray(mask, dtype=bool)
    if not np.any(m):
        raise ValueError("mask is empty")
    obox = fit_oriented_box(contour)
    diag = math.hypot(obox.w, obox.h)
    ctr = np.array([obox.cx, obox.cy])
    axes = [
        np.array([math.cos(obox.theta), math.sin(obox.theta)]),
        np.array([-math.sin(obox.theta), math.cos(obox.theta)]),
    ]
    offsets = list(np.linspace(-span * diag, span * diag, candidates))
    offsets.append(1e4 * diag)  # stands in for the at-infinity rectangle limit
    grid_x, grid_y = np.meshgrid(
        np.arange(m.shape[1], dtype=np.float64), np.arange(m.shape[0], dtype=np.float64)
    )
    best = None
    for axis in axes:
        for s in offsets:
            center = ctr + s * axis
            box = _sector_through_points(center, contour.vertices)
            if box is None:
                continue
            filled = box.contains(grid_x, grid_y)
            union = np.count_nonzero(filled | m)
            iou = np.count_nonzero(filled & m) / union if union else 0.0
            key = (iou, abs(s))
            if best is None or key > best[0]:
                best = (key, box)
    if best is None:
        raise ValueError("no valid sector candidate found")
    return best[1]


def _sector_through_points(center: np.ndarray, points: np.ndarray) -> CurvedBox | None:
    """Tightest annular sector around the points for a fixed center."""
    rel = points - center
    d = np.hypot(rel[:, 0], rel[:, 1])
    ang = np.arctan2(rel[:, 1], rel[:, 0])
    ref = float(np.arctan2(np.sin(ang).mean(), np.cos(ang).mean()))
    ang = ref + np.angle(np.exp(1j * (ang - ref)))
    lo, hi = float(ang.min()), float(ang.max())
    if not 0 < hi - lo < math.pi:
        return None
    r1, r2 = float(d.min()), float(d.max())
    if not r1 < r2:
        return None
    return CurvedBox(c1=float(center[0]), c2=float(center[1]),
                     r1=r1, r2=r2, theta1=lo, theta2=hi)


# -- polygon sampling ------------------------------------------------------------

def _arc_positions(contour: Contour):
    v = contour.vertices
    seg = np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1)
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    return v, cum  # cum[-1] is the perimeter


def _point_at_arclength(v: np.ndarray, cum: np.ndarray, s: float) -> np.ndarray:
    total = cum[-1]
    s = s % total
    i = int(np.searchsorted(cum, s, side="right") - 1)
    i = min(i, len(v) - 1)
    seg_len = cum[i + 1] - cum[i]
    t = (s - cum[i]) / seg_len if seg_len > 0 else 0.0
    nxt = v[(i + 1) % len(v)]
    return v[i] + t * (nxt - v[i])


def _ray_crossings(center: np.ndarray, direction: np.ndarray, contour: Contour) -> list[float]:
    """Positive ray parameters where the ray meets contour edges."""
    v = contour.vertices
    e = np.roll(v, -1, axis=0) - v
    d = direction
    denom = d[0] * (-e[:, 1]) - d[1] * (-e[:, 0])
    rhs = v - center
    ok = np.abs(denom) > 1e-12
    t = (rhs[ok, 0] * (-e[ok, 1]) - rhs[ok, 1] * (-e[ok, 0])) / denom[ok]
    u = (d[0] * rhs[ok, 1] - d[1] * rhs[ok, 0]) / denom[ok]
    good = (t > 1e-9) & (u >= -1e-12) & (u <= 1 + 1e-12)
    return sorted(float(x) for x in t[good])


def sample_polygon(contour: Contour, mode: str, n: int) -> PolygonRep:
    """Resample a contour into an n-vertex polygon.

    uniform-angular intersects n equally spaced rays from the centroid with
    the contour (farthest crossing kept and the polygon flagged when the
    shape is not star-shaped there); uniform-perimeter places vertices at
    equal arclength starting from the first contour vertex; adaptive seeds
    curvature maxima and inserts the farthest remaining contour points.
    """
    if n < 3:
        raise ValueError("polygons need at least 3 vertices")
    if mode == "uniform-angular":
        center = contour.centroid
        radii = np.zeros(n)
        flagged = False
        for k in range(n):
            ang = 2 * math.pi * k / n
            direction = np.array([math.cos(ang), math.sin(ang)])
            ts = _ray_crossings(center, direction, contour)
            if not ts:
                flagged = True
                radii[k] = 0.0
            else:
                if len(ts) > 1 and (ts[-1] - ts[0]) > 1e-9 * max(1.0, ts[-1]):
                    flagged = True
                radii[k] = ts[-1]
        return PolygonRep(mode=mode, center=center, radii=radii, flagged=flagged)

    if mode == "uniform-perimeter":
        v, cum = _arc_positions(contour)
        total = cum[-1]
        verts = np.array([_point_at_arclength(v, cum, k * total / n) for k in range(n)])
        center = contour.centroid
        return PolygonRep(mode=mode, center=center, offsets=verts - center)

    if mode == "adaptive":
        verts = _adaptive_vertices(contour, n)
        center = contour.centroid
        return PolygonRep(mode=mode, center=center, offsets=verts - center)

    raise ValueError(f"unknown polygon mode {mode!r}")


def _k_cosine_curvature(v: np.ndarray, k: int = 7) -> np.ndarray:
    """Turning measure per vertex: 1 + cos of the angle spanned by the
    k-step neighbors; near 2 at sharp turns, near 0 on straight runs."""
    n = len(v)
    k = max(1, min(k, (n - 1) // 2))
    fwd = v[(np.arange(n) + k) % n] - v
    bwd = v[(np.arange(n) - k) % n] - v
    dot = np.sum(fwd * bwd, axis=1)
    norms = np.linalg.norm(fwd, axis=1) * np.linalg.norm(bwd, axis=1)
    return 1.0 + dot / np.maximum(norms, 1e-12)


def _dominant_indices(v: np.ndarray, k: int = 7) -> np.ndarray:
    curv = _k_cosine_curvature(v, k)
    n = len(v)
    keep = []
    for i in range(n):
        window = curv[(np.arange(i - k, i + k + 1)) % n]
        if curv[i] >= window.max() - 1e-12 and curv[i] > 1e-6:
            keep.append(i)
    return np.array(keep, dtype=int) if keep else np.array([int(np.argmax(curv))])


def _point_segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ab = b - a
    denom = float(ab @ ab)
    if denom < 1e-18:
        return np.linalg.norm(p - a, axis=-1)
    t = np.clip(((p - a) @ ab) / denom, 0.0, 1.0)
    proj = a + t[..., None] * ab
    return np.linalg.norm(p - proj, axis=-1)


def _greedy_insert(v: np.ndarray, selected: list[int], pool: set[int], n: int) -> list[int]:
    """Insert pool points with the largest chord deviation until n vertices."""
    selected = sorted(set(selected))
    while len(selected) < n and pool:
        best_idx, best_dist = None, -1.0
        for gap_pos in range(len(selected)):
            a = selected[gap_pos]
            b = selected[(gap_pos + 1) % len(selected)]
            inner = [i for i in _cyclic_between(a, b, len(v)) if i in pool]
            if not inner:
                continue
            dists = _point_segment_distance(v[inner], v[a], v[b])
            j = int(np.argmax(dists))
            if dists[j] > best_dist:
                best_dist = float(dists[j])
                best_idx = inner[j]
        if best_idx is None:
            break
        selected.append(best_idx)
        pool.discard(best_idx)
        selected = sorted(set(selected))
    return selected


def _adaptive_vertices(contour: Contour, n: int) -> np.ndarray:
    """Dominant curvature points simplified (or augmented) to exactly n."""
    v = contour.vertices
    if len(v) <= n:
        v2, cum = _arc_positions(contour)
        return np.array([_point_at_arclength(v2, cum, k * cum[-1] / n) for k in range(n)])
    dom = _dominant_indices(v)
    order = dom[np.argsort(-_k_cosine_curvature(v)[dom])]
    seed = [int(order[0]), (int(order[0]) + len(v) // 2) % len(v)]
    # simplify within the dominant set first, then fill from the full contour
    selected = _greedy_insert(v, seed, set(int(i) for i in dom) - set(seed), n)
    if len(selected) < n:
        selected = _greedy_insert(v, selected, set(range(len(v))) - set(selected), n)
    return v[sorted(selected)]


def _cyclic_between(a: int, b: int, n: int) -> list[int]:
    if a < b:
        return list(range(a + 1, b))
    return list(range(a + 1, n)) + list(range(0, b))


# -- rasterization and IoU --------------------------------------------------------

def polygon_fill(vertices: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    """Even-odd fill of a closed polygon sampled at pixel centers."""
    h, w = shape
    v = np.asarray(vertices, dtype=np.float64)
    out = np.zeros((h, w), dtype=bool)
    if len(v) < 3:
        return out
    x1 = v[:, 0]
    y1 = v[:, 1]
    x2 = np.roll(x1, -1)
    y2 = np.roll(y1, -1)
    rows = np.arange(h, dtype=np.float64)[:, None]  # (h, 1)
    spans = (y1[None, :] <= rows) != (y2[None, :] <= rows)  # half-open crossing rule
    with np.errstate(divide="ignore", invalid="ignore"):
        xint = x1 + (rows - y1) * (x2 - x1) / (y2 - y1)
    for r in range(h):
        xs = np.sort(xint[r][spans[r]])
        for i in range(0, len(xs) - 1, 2):
            lo = int(math.ceil(xs[i]))
            hi = int(math.floor(xs[i + 1]))
            if xs[i + 1] == hi and hi > lo - 1:
                hi -= 1  # right edge exclusive at exact pixel centers
            if hi >= lo:
                out[r, max(lo, 0):min(hi, w - 1) + 1] = True
    return out


def rasterize(rep: Representation, shape: tuple[int, int]) -> np.ndarray:
    """Binary mask of the representation at the given (h, w) resolution."""
    h, w = shape
    if isinstance(rep, PolygonRep):
        return polygon_fill(rep.vertices(), shape)
    xs = np.arange(w, dtype=np.float64)
    ys = np.arange(h, dtype=np.float64)
    gx, gy = np.meshgrid(xs, ys)
    return np.asarray(rep.contains(gx, gy), dtype=bool)


def mask_iou(a: np.ndarray, b: np.ndarray) -> float:
    """Intersection over union of two binary masks; empty union gives 0."""
    am = np.asarray(a, dtype=bool)
    bm = np.asarray(b, dtype=bool)
    if am.shape != bm.shape:
        raise ValueError("masks must share a shape")
    union = np.count_nonzero(am | bm)
    if union == 0:
        warnings.warn("IoU of two empty masks, defining it as 0", stacklevel=2)
        return 0.0
    return np.count_nonzero(am & bm) / union


def rep_iou(rep: Representation, mask: np.ndarray) -> float:
    """IoU between a rasterized representation and a binary mask."""
    return mask_iou(rasterize(rep, np.asarray(mask).shape), mask)


# -- JSON records -------------------------------------------------------------------

def rep_to_dict(rep: Representation) -> dict:
    if isinstance(rep, StandardBox):
        return {"kind": rep.kind, "center": [rep.cx, rep.cy], "size": [rep.w, rep.h]}
    if isinstance(rep, OrientedBox):
        return {"kind": rep.kind, "center": [rep.cx, rep.cy], "size": [rep.w, rep.h],
                "theta": rep.theta}
    if isinstance(rep, Ellipse):
        return {"kind": rep.kind, "center": [rep.cx, rep.cy], "axes": [rep.a, rep.b],
                "theta": rep.theta}
    if isinstance(rep, CurvedBox):
        return {"kind": rep.kind, "center": [rep.c1, rep.c2], "radii": [rep.r1, rep.r2],
                "angles": [rep.theta1, rep.theta2]}
    if isinstance(rep, PolygonRep):
        out = {"kind": rep.kind, "mode": rep.mode, "center": rep.center.tolist(),
               "flagged": rep.flagged}
        if rep.mode == "uniform-angular":
            out["radii"] = rep.radii.tolist()
        else:
            out["offsets"] = rep.offsets.tolist()
        return out
    raise TypeError(f"not a representation: {type(rep)!r}")


def rep_from_dict(data: dict) -> Representation:
    kind = data.get("kind")
    if kind == "standard_box":
        return StandardBox(cx=data["center"][0], cy=data["center"][1],
                           w=data["size"][0], h=data["size"][1])
    if kind == "oriented_box":
        return OrientedBox(cx=data["center"][0], cy=data["center"][1],
                           w=data["size"][0], h=data["size"][1], theta=data["theta"])
    if kind == "ellipse":
        return Ellipse(cx=data["center"][0], cy=data["center"][1],
                       a=data["axes"][0], b=data["axes"][1], theta=data["theta"])
    if kind == "curved_box":
        return CurvedBox(c1=data["center"][0], c2=data["center"][1],
                         r1=data["radii"][0], r2=data["radii"][1],
                         theta1=data["angles"][0], theta2=data["angles"][1])
    if kind == "polygon":
        if data["mode"] == "uniform-angular":
            return PolygonRep(mode=data["mode"], center=data["center"],
                              radii=data["radii"], flagged=data.get("flagged", False))
        return PolygonRep(mode=data["mode"], center=data["center"],
                          offsets=data["offsets"], flagged=data.get("flagged", False))
    raise ValueError(f"unknown representation kind {kind!r}")
