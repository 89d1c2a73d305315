"""Camera projection models.

Every model maps a field angle theta (angle between an incident ray and the
optical axis, radians) to an image-plane radius r (pixels) through a radial
function. Projection of a 3D point follows the shared five-step scheme:
normalize to the unit sphere, compute the field angle, evaluate the radial
function, and place the pixel along the azimuth direction scaled by the
per-axis aspect around the principal point.

All array-taking functions are vectorized over leading dimensions: points are
(..., 3), pixels are (..., 2). Scalars in give scalars out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

import numpy as np

_EPS = 1e-15


class DomainError(ValueError):
    """Input outside a camera model's valid domain (field angle or radius)."""


class CalibrationError(ValueError):
    """Calibration dictionary malformed or describing an invalid model."""


def _arr(x) -> np.ndarray:
    return np.asarray(x, dtype=np.float64)


@dataclass(frozen=True, kw_only=True)
class CameraModel:
    """Shared intrinsics: principal point, per-axis aspect, sensor size.

    ``width``/``height`` of 0 means "unbounded sensor": pixel-bound checks
    are skipped and radius limits fall back to the model's own domain.
    """

    cx: float = 0.0
    cy: float = 0.0
    ax: float = 1.0
    ay: float = 1.0
    width: int = 0
    height: int = 0

    tag = "base"

    def __post_init__(self):
        if self.ax <= 0 or self.ay <= 0:
            raise CalibrationError("aspect factors must be positive")
        if self.width < 0 or self.height < 0:
            raise CalibrationError("sensor size must be non-negative")

    # -- per-model interface -------------------------------------------------

    @property
    def theta_max(self) -> float:
        """Upper end of the valid field-angle domain [0, theta_max)."""
        raise NotImplementedError

    def _radial(self, theta: np.ndarray) -> np.ndarray:
        """Radial function r(theta) without domain checks."""
        raise NotImplementedError

    def _radial_inverse_analytic(self, r: np.ndarray) -> np.ndarray | None:
        """Closed-form inverse where one exists, else None."""
        return None

    # -- radial forward / inverse --------------------------------------------

    def radial_forward(self, theta):
        """Image radius (px) for field angle theta (rad).

        Raises DomainError outside [0, theta_max).
        """
        th = _arr(theta)
        if np.any(th < 0) or np.any(th >= self.theta_max) or not np.all(np.isfinite(th)):
            raise DomainError(
                f"field angle outside [0, {self.theta_max:.6g}) for {self.tag}"
            )
        r = self._radial(th)
        return float(r) if np.isscalar(theta) else r

    @property
    def r_max(self) -> float:
        """Largest usable image radius (px).

        The sensor corner radius when a size is set, otherwise the radius
        just inside the field-angle domain.
        """
        r_domain = float(self._radial(np.float64(self.theta_max * (1 - 1e-9))))
        if self.width > 0 and self.height > 0:
            corners_u = np.array([0.0, self.width - 1.0])
            corners_v = np.array([0.0, self.height - 1.0])
            uu, vv = np.meshgrid(corners_u, corners_v)
            rr = np.hypot((uu - self.cx) / self.ax, (vv - self.cy) / self.ay)
            return min(r_domain, float(rr.max()))
        return r_domain

    def radial_inverse(self, r):
        """Field angle (rad) whose radius is r (px), to 1e-9 px or better."""
        rr = _arr(r)
        lim = self.r_max
        if np.any(rr < 0) or np.any(rr > lim * (1 + 1e-9)) or not np.all(np.isfinite(rr)):
            raise DomainError(f"radius outside [0, {lim:.6g}] for {self.tag}")
        theta = self._radial_inverse_analytic(rr)
        if theta is None:
            theta = self._radial_inverse_numeric(rr)
        theta = np.clip(theta, 0.0, None)
        return float(theta) if np.isscalar(r) else theta

    def _radial_inverse_numeric(self, r: np.ndarray) -> np.ndarray:
        """Bracketed bisection on the monotone radial function, Newton polish."""
        hi_theta = self.theta_max * (1 - 1e-12)
        lo = np.zeros_like(r)
        hi = np.full_like(r, hi_theta)
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            below = self._radial(mid) < r
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        theta = 0.5 * (lo + hi)
        for _ in range(3):
            deriv = self._radial_derivative(theta)
            step = np.where(deriv > _EPS, (self._radial(theta) - r) / np.maximum(deriv, _EPS), 0.0)
            theta = np.clip(theta - step, 0.0, hi_theta)
        return theta

    def _radial_derivative(self, theta: np.ndarray) -> np.ndarray:
        h = 1e-7
        lo = np.clip(theta - h, 0.0, None)
        hi = np.clip(theta + h, None, self.theta_max * (1 - 1e-12))
        return (self._radial(hi) - self._radial(lo)) / np.maximum(hi - lo, _EPS)

    # -- projection / unprojection ---------------------------------------------

    def project(self, points):
        """Project 3D camera-frame points (..., 3) to pixels (..., 2).

        Raises DomainError for zero-norm points or rays outside the field
        angle domain; use project_masked for non-throwing behavior.
        """
        pix, valid = self.project_masked(points)
        if not np.all(valid):
            raise DomainError(f"point outside the projection domain of {self.tag}")
        return pix

    def project_masked(self, points):
        """Like project but flags invalid inputs instead of raising.

        Returns (pixels, valid); pixels are NaN where invalid.
        """
        pts = _arr(points)
        if pts.shape[-1] != 3:
            raise ValueError("points must have shape (..., 3)")
        x, y, z = pts[..., 0], pts[..., 1], pts[..., 2]
        rho = np.hypot(x, y)
        norm = np.hypot(rho, z)
        theta = np.arctan2(rho, z)
        valid = (norm > _EPS) & (theta < self.theta_max) & np.isfinite(theta)
        th_safe = np.where(valid, theta, 0.0)
        r = self._radial(th_safe)
        with np.errstate(invalid="ignore", divide="ignore"):
            cos_phi = np.where(rho > _EPS, x / np.where(rho > _EPS, rho, 1.0), 0.0)
            sin_phi = np.where(rho > _EPS, y / np.where(rho > _EPS, rho, 1.0), 0.0)
        u = r * cos_phi * self.ax + self.cx
        v = r * sin_phi * self.ay + self.cy
        pix = np.stack([u, v], axis=-1)
        pix = np.where(valid[..., None], pix, np.nan)
        return pix, valid

    def unproject(self, pixels, distance=None):
        """Back-project pixels (..., 2) to 3D points at Euclidean distance.

        ``distance`` is the Euclidean norm of the returned point (meters),
        broadcastable against the pixel batch; omitted, unit rays on the
        viewing sphere are returned.
        """
        pix = _arr(pixels)
        if pix.shape[-1] != 2:
            raise ValueError("pixels must have shape (..., 2)")
        self._check_pixel_bounds(pix)
        xi = (pix[..., 0] - self.cx) / self.ax
        yi = (pix[..., 1] - self.cy) / self.ay
        r = np.hypot(xi, yi)
        theta = self.radial_inverse(r)
        phi = np.arctan2(yi, xi)
        sin_t = np.sin(theta)
        ray = np.stack([sin_t * np.cos(phi), sin_t * np.sin(phi), np.cos(theta)], axis=-1)
        if distance is None:
            return ray
        d = _arr(distance)
        if np.any(d <= 0):
            raise ValueError("distance must be positive")
        return ray * d[..., None]

    def unproject_masked(self, pixels, distance=None):
        """Like unproject but flags pixels beyond the usable radius.

        Returns (points, valid); points are NaN where invalid.
        """
        pix = _arr(pixels)
        if pix.shape[-1] != 2:
            raise ValueError("pixels must have shape (..., 2)")
        xi = (pix[..., 0] - self.cx) / self.ax
        yi = (pix[..., 1] - self.cy) / self.ay
        r = np.hypot(xi, yi)
        valid = np.isfinite(r) & (r <= self.r_max * (1 + 1e-9))
        safe = np.where(valid, np.minimum(r, self.r_max), 0.0)
        theta = np.asarray(self.radial_inverse(safe))
        phi = np.arctan2(yi, xi)
        sin_t = np.sin(theta)
        ray = np.stack([sin_t * np.cos(phi), sin_t * np.sin(phi), np.cos(theta)], axis=-1)
        ray = np.where(valid[..., None], ray, np.nan)
        if distance is None:
            return ray, valid
        d = _arr(distance)
        if np.any(d <= 0):
            raise ValueError("distance must be positive")
        return ray * d[..., None], valid

    def _check_pixel_bounds(self, pix: np.ndarray, tol: float = 0.5) -> None:
        if self.width > 0 and self.height > 0:
            u, v = pix[..., 0], pix[..., 1]
            if (
                np.any(u < -tol)
                or np.any(u > self.width - 1 + tol)
                or np.any(v < -tol)
                or np.any(v > self.height - 1 + tol)
            ):
                raise DomainError("pixel outside sensor bounds")

    # -- serialization ---------------------------------------------------------

    _param_names: tuple = ()

    def to_dict(self) -> dict:
        params = {name: getattr(self, attr) for name, attr in self._param_names}
        out = {
            "model": self.tag,
            "params": params,
            "principal_point": [self.cx, self.cy],
            "aspect": [self.ax, self.ay],
            "size": [self.width, self.height],
        }
        if "fov_limit" in {f.name for f in fields(self)}:
            out["theta_max"] = getattr(self, "fov_limit")
        return out


def _check_positive(name: str, value: float) -> None:
    if not (value > 0 and math.isfinite(value)):
        raise CalibrationError(f"{name} must be positive and finite, got {value}")


def _check_monotone(model: CameraModel, n: int = 2048) -> None:
    """Reject models whose radial function is not strictly increasing."""
    thetas = np.linspace(0.0, model.theta_max * (1 - 1e-9), n)
    r = model._radial(thetas)
    if not np.all(np.isfinite(r)) or np.any(np.diff(r) <= 0):
        raise CalibrationError(
            f"radial function of {model.tag} not strictly increasing on "
            f"[0, {model.theta_max:.4g})"
        )


@dataclass(frozen=True, kw_only=True)
class Pinhole(CameraModel):
    """Rectilinear model with polynomial radial and tangential distortion.

    r(theta) = fx * tan(theta) for the undistorted case; k1..k3 apply the
    radial polynomial and p1/p2 the tangential terms on normalized image
    coordinates, OpenCV-style.
    """

    fx: float
    fy: float
    k1: float = 0.0
    k2: float = 0.0
    k3: float = 0.0
    p1: float = 0.0
    p2: float = 0.0
    fov_limit: float = math.pi / 2 - 1e-6

    tag = "pinhole"
    _param_names = (
        ("fx", "fx"), ("fy", "fy"), ("k1", "k1"), ("k2", "k2"), ("k3", "k3"),
        ("p1", "p1"), ("p2", "p2"),
    )

    def __post_init__(self):
        super().__post_init__()
        _check_positive("fx", self.fx)
        _check_positive("fy", self.fy)
        if not 0 < self.fov_limit <= math.pi / 2 - 1e-9:
            raise CalibrationError("pinhole fov_limit must lie in (0, pi/2)")
        if any((self.k1, self.k2, self.k3)):
            _check_monotone(self)

    @property
    def theta_max(self) -> float:
        return self.fov_limit

    def _radial(self, theta):
        t = np.tan(theta)
        t2 = t * t
        return self.fx * t * (1 + self.k1 * t2 + self.k2 * t2**2 + self.k3 * t2**3)

    def _radial_inverse_analytic(self, r):
        if self.k1 == self.k2 == self.k3 == 0.0:
            return np.arctan(r / self.fx)
        return None

    def _distort(self, x, y):
        r2 = x * x + y * y
        radial = 1 + self.k1 * r2 + self.k2 * r2**2 + self.k3 * r2**3
        xd = x * radial + 2 * self.p1 * x * y + self.p2 * (r2 + 2 * x * x)
        yd = y * radial + self.p1 * (r2 + 2 * y * y) + 2 * self.p2 * x * y
        return xd, yd

    def project_masked(self, points):
        pts = _arr(points)
        if pts.shape[-1] != 3:
            raise ValueError("points must have shape (..., 3)")
        x, y, z = pts[..., 0], pts[..., 1], pts[..., 2]
        norm = np.sqrt(x * x + y * y + z * z)
        theta = np.arctan2(np.hypot(x, y), z)
        valid = (norm > _EPS) & (theta < self.theta_max)
        z_safe = np.where(valid, z, 1.0)
        xd, yd = self._distort(x / z_safe, y / z_safe)
        pix = np.stack([self.fx * xd + self.cx, self.fy * yd + self.cy], axis=-1)
        pix = np.where(valid[..., None], pix, np.nan)
        return pix, valid

    def unproject(self, pixels, distance=None):
        pix = _arr(pixels)
        if pix.shape[-1] != 2:
            raise ValueError("pixels must have shape (..., 2)")
        self._check_pixel_bounds(pix)
        xd = (pix[..., 0] - self.cx) / self.fx
        yd = (pix[..., 1] - self.cy) / self.fy
        x, y = xd, yd
        if any((self.k1, self.k2, self.k3, self.p1, self.p2)):
            for _ in range(40):
                r2 = x * x + y * y
                radial = 1 + self.k1 * r2 + self.k2 * r2**2 + self.k3 * r2**3
                x = (xd - (2 * self.p1 * x * y + self.p2 * (r2 + 2 * x * x))) / radial
                y = (yd - (self.p1 * (r2 + 2 * y * y) + 2 * self.p2 * x * y)) / radial
        norm = np.sqrt(x * x + y * y + 1.0)
        ray = np.stack([x / norm, y / norm, 1.0 / norm], axis=-1)
        if distance is None:
            return ray
        d = _arr(distance)
        if np.any(d <= 0):
            raise ValueError("distance must be positive")
        return ray * d[..., None]

    def unproject_masked(self, pixels, distance=None):
        pix = _arr(pixels)
        if pix.shape[-1] != 2:
            raise ValueError("pixels must have shape (..., 2)")
        xd = (pix[..., 0] - self.cx) / self.fx
        yd = (pix[..., 1] - self.cy) / self.fy
        lim = float(self._radial(np.float64(self.fov_limit * (1 - 1e-9)))) / self.fx
        valid = np.isfinite(xd) & np.isfinite(yd) & (np.hypot(xd, yd) <= lim * (1 + 1e-9))
        safe = np.where(valid[..., None], pix, [self.cx, self.cy])
        x = (safe[..., 0] - self.cx) / self.fx
        y = (safe[..., 1] - self.cy) / self.fy
        xd_s, yd_s = x, y
        if any((self.k1, self.k2, self.k3, self.p1, self.p2)):
            for _ in range(40):
                r2 = x * x + y * y
                radial = 1 + self.k1 * r2 + self.k2 * r2**2 + self.k3 * r2**3
                x = (xd_s - (2 * self.p1 * x * y + self.p2 * (r2 + 2 * x * x))) / radial
                y = (yd_s - (self.p1 * (r2 + 2 * y * y) + 2 * self.p2 * x * y)) / radial
        norm = np.sqrt(x * x + y * y + 1.0)
        ray = np.stack([x / norm, y / norm, 1.0 / norm], axis=-1)
        ray = np.where(valid[..., None], ray, np.nan)
        if distance is None:
            return ray, valid
        d = _arr(distance)
        if np.any(d <= 0):
            raise ValueError("distance must be positive")
        return ray * d[..., None], valid


@dataclass(frozen=True, kw_only=True)
class Equidistant(CameraModel):
    """r(theta) = f * theta."""

    f: float

    tag = "equidistant"
    _param_names = (("f", "f"),)

    def __post_init__(self):
        super().__post_init__()
        _check_positive("f", self.f)

    @property
    def theta_max(self) -> float:
        return math.pi

    def _radial(self, theta):
        return self.f * theta

    def _radial_inverse_analytic(self, r):
        return r / self.f


@dataclass(frozen=True, kw_only=True)
class Stereographic(CameraModel):
    """r(theta) = 2 f tan(theta / 2)."""

    f: float

    tag = "stereographic"
    _param_names = (("f", "f"),)

    def __post_init__(self):
        super().__post_init__()
        _check_positive("f", self.f)

    @property
    def theta_max(self) -> float:
        return math.pi

    def _radial(self, theta):
        return 2.0 * self.f * np.tan(theta / 2.0)

    def _radial_inverse_analytic(self, r):
        return 2.0 * np.arctan(r / (2.0 * self.f))


@dataclass(frozen=True, kw_only=True)
class Orthographic(CameraModel):
    """r(theta) = f sin(theta); monotone only up to a quarter turn."""

    f: float

    tag = "orthographic"
    _param_names = (("f", "f"),)

    def __post_init__(self):
        super().__post_init__()
        _check_positive("f", self.f)

    @property
    def theta_max(self) -> float:
        return math.pi / 2

    def _radial(self, theta):
        return self.f * np.sin(theta)

    def _radial_inverse_analytic(self, r):
        return np.arcsin(np.clip(r / self.f, -1.0, 1.0))


@dataclass(frozen=True, kw_only=True)
class ExtendedOrthographic(Orthographic):
    """Orthographic projection with the undistortion plane offset by lam.

    The 3D-to-2D radial function is identical to the plain orthographic
    model; lam only shifts the paired undistorted (rectilinear) image plane,
    exposed via undistorted_radius.
    """

    lam: float = 0.0

    tag = "extended_orthographic"
    _param_names = (("f", "f"), ("lambda", "lam"))

    def undistorted_radius(self, theta):
        """Radius on the offset rectilinear plane for the same incident ray."""
        return (self.f + self.lam) * np.tan(_arr(theta))


@dataclass(frozen=True, kw_only=True)
class Polynomial4(CameraModel):
    """Quartic field-angle polynomial r(theta) = k1 t + k2 t^2 + k3 t^3 + k4 t^4.

    fov_limit declares the calibrated half field-of-view; strict monotonicity
    on [0, fov_limit) is verified at construction by sampling.
    """

    k1: float
    k2: float = 0.0
    k3: float = 0.0
    k4: float = 0.0
    fov_limit: float = 1.92

    tag = "polynomial4"
    _param_names = (("k1", "k1"), ("k2", "k2"), ("k3", "k3"), ("k4", "k4"))

    def __post_init__(self):
        super().__post_init__()
        if not 0 < self.fov_limit <= math.pi:
            raise CalibrationError("polynomial fov_limit must lie in (0, pi]")
        _check_monotone(self)

    @property
    def theta_max(self) -> float:
        return self.fov_limit

    def _radial(self, theta):
        return theta * (self.k1 + theta * (self.k2 + theta * (self.k3 + theta * self.k4)))

    def _radial_derivative(self, theta):
        return self.k1 + theta * (2 * self.k2 + theta * (3 * self.k3 + theta * 4 * self.k4))

    def to_dict(self) -> dict:
        out = super().to_dict()
        out["theta_max"] = self.fov_limit
        return out


@dataclass(frozen=True, kw_only=True)
class Division(CameraModel):
    """Single-parameter division model behind a rectilinear projection.

    The undistorted radius r_u = f tan(theta) is mapped to the distorted
    radius r_d as the exact inverse of r_u = r_d / (1 - a r_d^2). Below a
    quarter turn that is r_d = 2 r_u / (1 + sqrt(1 + 4 a r_u^2)); past it the
    same relation continues through negative r_u (a ray behind the
    rectilinear plane), so the model covers hemispheres beyond 180 degrees
    like the stereographic model it reduces to when a = 1/(4 f^2). Straight
    3D lines project to exact circles for any parameter choice.
    """

    a: float
    f: float

    tag = "division"
    _param_names = (("a", "a"), ("f", "f"))

    def __post_init__(self):
        super().__post_init__()
        _check_positive("f", self.f)
        if not (self.a >= 0 and math.isfinite(self.a)):
            raise CalibrationError("division parameter a must be non-negative")

    @property
    def theta_max(self) -> float:
        return math.pi if self.a > 0 else math.pi / 2

    def _radial(self, theta):
        return _division_radial(np.asarray(theta, dtype=np.float64), self.a, self.f)

    def _radial_inverse_analytic(self, r):
        pole = 1.0 / math.sqrt(self.a) if self.a > 0 else math.inf
        with np.errstate(divide="ignore"):
            ru = np.where(r == pole, math.inf, r / (1.0 - self.a * r * r))
        theta = np.arctan(ru / self.f)
        return np.where(ru < 0, math.pi + theta, np.where(np.isinf(ru), math.pi / 2, theta))


def _division_radial(theta: np.ndarray, a: float, f: float) -> np.ndarray:
    """Distorted radius of the division model, valid on [0, pi)."""
    near_quarter = np.abs(np.cos(theta)) < 1e-12
    with np.errstate(all="ignore"):
        ru = f * np.tan(np.where(near_quarter, 0.0, theta))
        root = np.sqrt(1.0 + 4.0 * a * ru * ru)
        r = np.where(ru >= 0,
                     2.0 * ru / (1.0 + root),
                     (1.0 + root) / (2.0 * a * np.abs(np.where(ru < 0, ru, -1.0))))
    if a > 0:
        return np.where(near_quarter, 1.0 / math.sqrt(a), r)
    return r


@dataclass(frozen=True, kw_only=True)
class FieldOfView(CameraModel):
    """FoV model: r(theta) = f * atan2(2 sin(theta) tan(omega/2), cos(theta)) / omega."""

    omega: float
    f: float = 1.0

    tag = "fov"
    _param_names = (("omega", "omega"), ("f", "f"))

    def __post_init__(self):
        super().__post_init__()
        _check_positive("f", self.f)
        if not 0 < self.omega < math.pi:
            raise CalibrationError("omega must lie in (0, pi)")

    @property
    def theta_max(self) -> float:
        return math.pi

    def _radial(self, theta):
        return self.f * np.arctan2(2.0 * np.sin(theta) * math.tan(self.omega / 2.0), np.cos(theta)) / self.omega

    def _radial_inverse_analytic(self, r):
        alpha = r * self.omega / self.f
        return np.arctan2(np.sin(alpha), 2.0 * math.tan(self.omega / 2.0) * np.cos(alpha))


@dataclass(frozen=True, kw_only=True)
class UnifiedCamera(CameraModel):
    """Sphere-then-pinhole model: r(theta) = gamma sin(theta) / (cos(theta) + xi).

    xi = 0 degenerates to the pinhole model; xi = 1 with gamma = 2 f equals
    the stereographic model with focal scale f.
    """

    gamma: float
    xi: float

    tag = "ucm"
    _param_names = (("gamma", "gamma"), ("xi", "xi"))

    def __post_init__(self):
        super().__post_init__()
        _check_positive("gamma", self.gamma)
        if not (self.xi >= 0 and math.isfinite(self.xi)):
            raise CalibrationError("xi must be non-negative")

    @property
    def theta_max(self) -> float:
        if self.xi <= 1.0:
            return math.acos(-self.xi)
        return math.acos(-1.0 / self.xi)

    def _radial(self, theta):
        # Half-angle form avoids the cos(theta) + xi cancellation near the
        # pole and makes the xi = 1 stereographic special case exact.
        s, c = np.sin(theta / 2.0), np.cos(theta / 2.0)
        den = (1.0 + self.xi) * c * c - (1.0 - self.xi) * s * s
        return self.gamma * 2.0 * s * c / den

    def _radial_inverse_analytic(self, r):
        s = r / self.gamma
        scale = np.sqrt(1.0 + s * s)
        return np.arcsin(np.clip(s * self.xi / scale, -1.0, 1.0)) + np.arctan(s)


def _numeric_theta_max(model: CameraModel, grid: int = 8192) -> float:
    """Largest field angle keeping the radial function finite and increasing."""
    thetas = np.linspace(0.0, math.pi, grid)
    with np.errstate(all="ignore"):
        r = model._radial(thetas)
    ok = np.isfinite(r) & (r >= 0)
    inc = np.concatenate([[True], np.diff(r) > 0])
    good = ok & inc
    bad = np.nonzero(~good)[0]
    if bad.size == 0:
        return math.pi
    hi = thetas[bad[0]]
    lo = thetas[max(bad[0] - 1, 0)]
    for _ in range(48):
        mid = 0.5 * (lo + hi)
        with np.errstate(all="ignore"):
            rm = model._radial(np.float64(mid))
            rl = model._radial(np.float64(lo))
        if np.isfinite(rm) and rm > rl:
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True, kw_only=True)
class EnhancedUnified(CameraModel):
    """Ellipsoid-then-pinhole model.

    r(theta) = f sin(theta) / ((1 - alpha) cos(theta)
               + alpha sqrt(beta sin(theta)^2 + cos(theta)^2)).
    """

    f: float
    alpha: float
    beta: float
    _theta_max: float = field(default=0.0, init=False, repr=False, compare=False)

    tag = "eucm"
    _param_names = (("f", "f"), ("alpha", "alpha"), ("beta", "beta"))

    def __post_init__(self):
        super().__post_init__()
        _check_positive("f", self.f)
        _check_positive("beta", self.beta)
        if not 0.0 <= self.alpha <= 1.0:
            raise CalibrationError("alpha must lie in [0, 1]")
        object.__setattr__(self, "_theta_max", _numeric_theta_max(self))

    @property
    def theta_max(self) -> float:
        return self._theta_max

    def _radial(self, theta):
        s, c = np.sin(theta), np.cos(theta)
        den = (1.0 - self.alpha) * c + self.alpha * np.sqrt(self.beta * s * s + c * c)
        return self.f * s / den


@dataclass(frozen=True, kw_only=True)
class DoubleSphere(CameraModel):
    """Two-sphere model.

    r(theta) = f sin(theta) / (alpha sqrt(sin^2 + (xi + cos)^2)
               + (1 - alpha)(xi + cos(theta))).
    """

    f: float
    xi: float
    alpha: float
    _theta_max: float = field(default=0.0, init=False, repr=False, compare=False)

    tag = "double_sphere"
    _param_names = (("f", "f"), ("xi", "xi"), ("alpha", "alpha"))

    def __post_init__(self):
        super().__post_init__()
        _check_positive("f", self.f)
        if not 0.0 <= self.alpha <= 1.0:
            raise CalibrationError("alpha must lie in [0, 1]")
        if not math.isfinite(self.xi):
            raise CalibrationError("xi must be finite")
        object.__setattr__(self, "_theta_max", _numeric_theta_max(self))

    @property
    def theta_max(self) -> float:
        return self._theta_max

    def _radial(self, theta):
        s, c = np.sin(theta), np.cos(theta)
        zc = self.xi + c
        den = self.alpha * np.sqrt(s * s + zc * zc) + (1.0 - self.alpha) * zc
        return self.f * s / den


MODEL_CLASSES = {
    cls.tag: cls
    for cls in (
        Pinhole, Equidistant, Stereographic, Orthographic, ExtendedOrthographic,
        Polynomial4, Division, FieldOfView, UnifiedCamera, EnhancedUnified,
        DoubleSphere,
    )
}


def camera_from_dict(data: dict) -> CameraModel:
    """Build a CameraModel from a calibration dictionary.

    Schema: model (tag), params (per-variant numeric map), principal_point
    [cx, cy], aspect [ax, ay], size [w, h], optional theta_max. Unknown
    fields anywhere are rejected.
    """
    if not isinstance(data, dict):
        raise CalibrationError("calibration must be a JSON object")
    allowed = {"model", "params", "principal_point", "aspect", "size", "theta_max"}
    unknown = set(data) - allowed
    if unknown:
        raise CalibrationError(f"unknown calibration fields: {sorted(unknown)}")
    tag = data.get("model")
    if tag not in MODEL_CLASSES:
        raise CalibrationError(f"unknown model tag {tag!r}")
    cls = MODEL_CLASSES[tag]
    params = data.get("params", {})
    if not isinstance(params, dict):
        raise CalibrationError("params must be an object")
    name_map = dict(cls._param_names)
    unknown = set(params) - set(name_map)
    if unknown:
        raise CalibrationError(f"unknown params for {tag}: {sorted(unknown)}")
    required = {"pinhole": {"fx", "fy"}, "polynomial4": {"k1"}}.get(tag, set(name_map))
    missing = sorted(required - set(params))
    if missing:
        raise CalibrationError(f"missing params for {tag}: {missing}")
    kwargs = {attr: float(params[name]) for name, attr in name_map.items() if name in params}
    pp = data.get("principal_point", [0.0, 0.0])
    asp = data.get("aspect", [1.0, 1.0])
    size = data.get("size", [0, 0])
    try:
        kwargs.update(cx=float(pp[0]), cy=float(pp[1]), ax=float(asp[0]), ay=float(asp[1]),
                      width=int(size[0]), height=int(size[1]))
    except (TypeError, IndexError) as exc:
        raise CalibrationError(f"malformed calibration field: {exc}") from None
    if "theta_max" in data:
        if tag in ("polynomial4", "pinhole"):
            kwargs["fov_limit"] = float(data["theta_max"])
        else:
            raise CalibrationError(f"theta_max not supported for {tag}")
    return cls(**kwargs)


@dataclass(frozen=True)
class InverseLUT:
    """Sampled radius-to-angle table with Newton refinement on lookup.

    Entries are refined at build time so |r(theta_i) - r_i| < 1e-9 px; lookups
    interpolate linearly and re-refine, matching radial_inverse to 1e-9.
    """

    model: CameraModel
    radii: np.ndarray
    thetas: np.ndarray

    def __call__(self, r):
        rr = _arr(r)
        if np.any(rr < 0) or np.any(rr > self.radii[-1] * (1 + 1e-9)):
            raise DomainError("radius outside the LUT range")
        theta = np.interp(rr, self.radii, self.thetas)
        theta = _refine_theta(self.model, theta, rr)
        return float(theta) if np.isscalar(r) else theta


def _refine_theta(model: CameraModel, theta: np.ndarray, r: np.ndarray, iters: int = 6) -> np.ndarray:
    hi = model.theta_max * (1 - 1e-12)
    for _ in range(iters):
        deriv = np.maximum(model._radial_derivative(theta), _EPS)
        theta = np.clip(theta - (model._radial(theta) - r) / deriv, 0.0, hi)
    return theta


def build_inverse_lut(model: CameraModel, samples: int, r_max: float | None = None) -> InverseLUT:
    """Precompute radius -> field angle samples over [0, r_max].

    samples must be >= 2; non-monotone models are rejected at their own
    construction time, so any constructed model is accepted here.
    """
    if samples < 2:
        raise ValueError("samples must be at least 2")
    if r_max is None:
        r_max = model.r_max
    if not 0 < r_max <= model.r_max * (1 + 1e-9):
        raise ValueError(f"r_max must lie in (0, {model.r_max:.6g}]")
    radii = np.linspace(0.0, r_max, samples)
    thetas = _arr(model.radial_inverse(radii))
    thetas = _refine_theta(model, thetas, radii)
    err = np.abs(model._radial(thetas) - radii)
    if np.any(err >= 1e-9):
        raise RuntimeError("LUT refinement failed to reach 1e-9 px")
    if np.any(np.diff(thetas) < 0):
        raise RuntimeError("LUT table not monotone")
    return InverseLUT(model=model, radii=radii, thetas=thetas)


def cylindrical_rectify_map(model: CameraModel, f_out: float, out_size: tuple[int, int]):
    """Source-pixel map for reprojecting onto a central cylinder.

    The output column maps azimuth linearly (x = f * theta'') and the output
    row maps elevation perspectively (y = f * tan(theta')). Returns
    (coords, valid): coords is (h, w, 2) source pixel positions, NaN and
    valid=False where the cylinder ray leaves the source camera's domain.
    """
    w, h = out_size
    if w < 1 or h < 1 or f_out <= 0:
        raise ValueError("output size and focal scale must be positive")
    cx_out, cy_out = (w - 1) / 2.0, (h - 1) / 2.0
    us = (np.arange(w) - cx_out) / f_out
    vs = (np.arange(h) - cy_out) / f_out
    azimuth = us[None, :]
    elevation = np.arctan(vs)[:, None]
    y = np.broadcast_to(np.sin(elevation), (h, w))
    horiz = np.cos(elevation)
    x = horiz * np.sin(azimuth)
    z = horiz * np.cos(azimuth)
    rays = np.stack([x, y, np.broadcast_to(z, (h, w))], axis=-1)
    coords, valid = model.project_masked(rays)
    if model.width > 0 and model.height > 0:
        inside = (
            (coords[..., 0] >= 0) & (coords[..., 0] <= model.width - 1)
            & (coords[..., 1] >= 0) & (coords[..., 1] <= model.height - 1)
        )
        valid = valid & np.where(np.isfinite(coords[..., 0]), inside, False)
        coords = np.where(valid[..., None], coords, np.nan)
    return coords, valid
