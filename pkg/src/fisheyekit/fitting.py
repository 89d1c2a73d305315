"""Least-squares fitting between radial models and the analytic equivalences."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .cameras import (
    CameraModel,
    Division,
    DoubleSphere,
    EnhancedUnified,
    Equidistant,
    FieldOfView,
    Orthographic,
    Pinhole,
    Polynomial4,
    Stereographic,
    UnifiedCamera,
    _division_radial,
)


class FitError(RuntimeError):
    """Least-squares fit did not converge or the system was singular."""


@dataclass(frozen=True)
class RadialSamples:
    """Field-angle / radius pairs, theta strictly increasing."""

    thetas: np.ndarray
    radii: np.ndarray
    source: str = ""

    def __post_init__(self):
        th = np.asarray(self.thetas, dtype=np.float64)
        r = np.asarray(self.radii, dtype=np.float64)
        if th.ndim != 1 or th.shape != r.shape:
            raise ValueError("thetas and radii must be 1-D arrays of equal length")
        if np.any(np.diff(th) <= 0):
            raise ValueError("thetas must be strictly increasing")
        if np.any(r < 0) or np.any(th < 0):
            raise ValueError("radii and thetas must be non-negative")
        object.__setattr__(self, "thetas", th)
        object.__setattr__(self, "radii", r)

    @classmethod
    def from_model(cls, model: CameraModel, count: int = 256, frac: float = 0.99) -> "RadialSamples":
        thetas = np.linspace(0.0, model.theta_max * frac, count)
        return cls(thetas, model._radial(thetas), source=model.tag)


@dataclass(frozen=True)
class FitReport:
    model: CameraModel
    residuals: np.ndarray
    max_residual: float = field(init=False)
    rms_residual: float = field(init=False)

    def __post_init__(self):
        res = np.asarray(self.residuals, dtype=np.float64)
        object.__setattr__(self, "residuals", res)
        object.__setattr__(self, "max_residual", float(np.max(np.abs(res))) if res.size else 0.0)
        object.__setattr__(self, "rms_residual", float(np.sqrt(np.mean(res**2))) if res.size else 0.0)


# Each family maps an unconstrained raw vector to parameters, evaluates the
# radial closed form, and builds the final CameraModel. Square/sine transforms
# keep positivity and range constraints away from the LM solver.

def _sq(x):
    return x * x


_FAMILIES: dict = {}


def _family(tag):
    def wrap(cls):
        _FAMILIES[tag] = cls()
        return cls
    return wrap


class _Family:
    n_params = 1

    def init(self, slope: float) -> np.ndarray:
        raise NotImplementedError

    def radial(self, raw: np.ndarray, theta: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def build(self, raw: np.ndarray, theta_hi: float) -> CameraModel:
        raise NotImplementedError


@_family("equidistant")
class _EquidistantFamily(_Family):
    def init(self, slope):
        return np.array([math.sqrt(slope)])

    def radial(self, raw, theta):
        return _sq(raw[0]) * theta

    def build(self, raw, theta_hi):
        return Equidistant(f=_sq(raw[0]))


@_family("stereographic")
class _StereographicFamily(_Family):
    def init(self, slope):
        return np.array([math.sqrt(slope)])

    def radial(self, raw, theta):
        return 2.0 * _sq(raw[0]) * np.tan(theta / 2.0)

    def build(self, raw, theta_hi):
        return Stereographic(f=_sq(raw[0]))


@_family("orthographic")
class _OrthographicFamily(_Family):
    def init(self, slope):
        return np.array([math.sqrt(slope)])

    def radial(self, raw, theta):
        return _sq(raw[0]) * np.sin(theta)

    def build(self, raw, theta_hi):
        return Orthographic(f=_sq(raw[0]))


@_family("pinhole")
class _PinholeFamily(_Family):
    def init(self, slope):
        return np.array([math.sqrt(slope)])

    def radial(self, raw, theta):
        return _sq(raw[0]) * np.tan(theta)

    def build(self, raw, theta_hi):
        f = _sq(raw[0])
        return Pinhole(fx=f, fy=f)


@_family("division")
class _DivisionFamily(_Family):
    n_params = 2

    def init(self, slope):
        return np.array([0.5 / slope, math.sqrt(slope)])

    def radial(self, raw, theta):
        return _division_radial(theta, _sq(raw[0]), _sq(raw[1]))

    def build(self, raw, theta_hi):
        return Division(a=_sq(raw[0]), f=_sq(raw[1]))


@_family("fov")
class _FovFamily(_Family):
    n_params = 2

    def init(self, slope):
        omega0 = 1.0
        return np.array([0.0, math.sqrt(slope * omega0 / (2.0 * math.tan(omega0 / 2.0)))])

    @staticmethod
    def _omega(raw0):
        return math.pi / (1.0 + math.exp(-raw0))

    def radial(self, raw, theta):
        omega, f = self._omega(raw[0]), _sq(raw[1])
        return f * np.arctan2(2.0 * np.sin(theta) * math.tan(omega / 2.0), np.cos(theta)) / omega

    def build(self, raw, theta_hi):
        return FieldOfView(omega=self._omega(raw[0]), f=_sq(raw[1]))


@_family("ucm")
class _UcmFamily(_Family):
    n_params = 2

    def init(self, slope):
        return np.array([math.sqrt(2.0 * slope), 1.0])

    def radial(self, raw, theta):
        gamma, xi = _sq(raw[0]), _sq(raw[1])
        s, c = np.sin(theta / 2.0), np.cos(theta / 2.0)
        return gamma * 2.0 * s * c / ((1.0 + xi) * c * c - (1.0 - xi) * s * s)

    def build(self, raw, theta_hi):
        return UnifiedCamera(gamma=_sq(raw[0]), xi=_sq(raw[1]))


@_family("eucm")
class _EucmFamily(_Family):
    n_params = 3

    def init(self, slope):
        return np.array([math.sqrt(slope), math.asin(math.sqrt(0.5)), 1.0])

    @staticmethod
    def _params(raw):
        return _sq(raw[0]), math.sin(raw[1]) ** 2, _sq(raw[2])

    def radial(self, raw, theta):
        f, alpha, beta = self._params(raw)
        s, c = np.sin(theta), np.cos(theta)
        return f * s / ((1.0 - alpha) * c + alpha * np.sqrt(beta * s * s + c * c))

    def build(self, raw, theta_hi):
        f, alpha, beta = self._params(raw)
        return EnhancedUnified(f=f, alpha=alpha, beta=beta)


@_family("double_sphere")
class _DoubleSphereFamily(_Family):
    n_params = 3

    def init(self, slope):
        return np.array([math.sqrt(slope), 0.0, math.asin(math.sqrt(0.5))])

    @staticmethod
    def _params(raw):
        return _sq(raw[0]), raw[1], math.sin(raw[2]) ** 2

    def radial(self, raw, theta):
        f, xi, alpha = self._params(raw)
        s, c = np.sin(theta), np.cos(theta)
        zc = xi + c
        return f * s / (alpha * np.sqrt(s * s + zc * zc) + (1.0 - alpha) * zc)

    def build(self, raw, theta_hi):
        f, xi, alpha = self._params(raw)
        return DoubleSphere(f=f, xi=xi, alpha=alpha)


def _slope(samples: RadialSamples) -> float:
    th, r = samples.thetas, samples.radii
    keep = th > 1e-6
    if not np.any(keep):
        raise FitError("all sample angles are zero")
    return float(np.median(r[keep] / th[keep]))


def fit_radial(samples: RadialSamples, family: str) -> FitReport:
    """Least-squares fit of one radial family to (theta, r) samples.

    polynomial4 is solved by linear least squares; the nonlinear families use
    Levenberg-Marquardt with numeric Jacobians, initialized from the small
    angle slope. Deterministic for fixed inputs.
    """
    th, r = samples.thetas, samples.radii
    if family == "polynomial4":
        if th.size < 4:
            raise FitError("polynomial4 needs at least 4 samples")
        vander = np.stack([th, th**2, th**3, th**4], axis=1)
        coeffs, _, rank, _ = np.linalg.lstsq(vander, r, rcond=None)
        if rank < 4:
            raise FitError("singular normal equations for polynomial4")
        model = Polynomial4(
            k1=coeffs[0], k2=coeffs[1], k3=coeffs[2], k4=coeffs[3],
            fov_limit=float(th[-1]) if th[-1] > 0 else 1.92,
        )
        return FitReport(model, vander @ coeffs - r)

    if family not in _FAMILIES:
        raise ValueError(f"unknown fit family {family!r}")
    fam = _FAMILIES[family]
    if th.size < fam.n_params:
        raise FitError(f"{family} needs at least {fam.n_params} samples")

    def residual(raw):
        with np.errstate(all="ignore"):
            pred = fam.radial(raw, th)
        return np.where(np.isfinite(pred) & (pred >= 0), pred - r, 1e9)

    result = least_squares(residual, fam.init(_slope(samples)), method="lm",
                           xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=4000)
    if result.status <= 0:
        raise FitError(f"fit for {family} did not converge: {result.message}")
    model = fam.build(result.x, float(th[-1]))
    return FitReport(model, fam.radial(result.x, th) - r)


def equidistant_fov_params(omega: float) -> tuple[float, float]:
    """Focal scales (f_p, f_e) making the FoV undistortion equal pinhole-of-equidistant."""
    if not 0.0 < omega < math.pi:
        raise ValueError("omega must lie in (0, pi)")
    return 1.0 / (2.0 * math.tan(omega / 2.0)), 1.0 / omega


def equidistant_fov_check(omega: float, samples: int = 512) -> float:
    """Max pointwise gap between the FoV undistortion curve and its
    pinhole-of-equidistant rewrite; analytic identity, expected < 1e-12."""
    f_p, f_e = equidistant_fov_params(omega)
    r_d = np.linspace(0.0, 0.99 * (math.pi / 2.0) / omega, samples)
    fov_curve = np.tan(r_d * omega) / (2.0 * math.tan(omega / 2.0))
    composed = f_p * np.tan(r_d / f_e)
    return float(np.max(np.abs(fov_curve - composed)))


def stereographic_division_check(f_s: float, f_p: float, samples: int = 512) -> float:
    """Max gap between pinhole-after-inverse-stereographic and the scaled
    division undistortion with a = 1/(4 f_s^2); expected < 1e-12.

    The grid stays below the r_d = 2 f_s pole, i.e. field angles under a
    quarter turn where the pinhole composition is defined.
    """
    if f_s <= 0 or f_p <= 0:
        raise ValueError("focal scales must be positive")
    theta = np.linspace(0.0, 0.99 * math.pi / 2.0, samples)
    r_d = 2.0 * f_s * np.tan(theta / 2.0)
    composed = f_p * np.tan(2.0 * np.arctan(r_d / (2.0 * f_s)))
    division = (f_p / f_s) * r_d / (1.0 - r_d**2 / (4.0 * f_s**2))
    return float(np.max(np.abs(composed - division)))


@dataclass(frozen=True)
class LineProjectionFit:
    """Circle fit to a projected 3D line; is_line marks the infinite-radius case."""

    residual: float
    is_line: bool
    center: tuple | None
    radius: float


def fit_circle(points: np.ndarray) -> tuple[np.ndarray, float]:
    """Algebraic (Kasa) circle fit refined by one geometric Gauss-Newton step."""
    pts = np.asarray(points, dtype=np.float64)
    x, y = pts[:, 0], pts[:, 1]
    a = np.stack([x, y, np.ones_like(x)], axis=1)
    b = x * x + y * y
    sol, _, rank, _ = np.linalg.lstsq(a, b, rcond=None)
    if rank < 3:
        raise ValueError("degenerate circle fit")
    center = sol[:2] / 2.0
    radius = math.sqrt(max(sol[2] + center @ center, 0.0))
    # one Gauss-Newton step on the geometric distances
    diff = pts - center
    dist = np.linalg.norm(diff, axis=1)
    safe = np.maximum(dist, 1e-12)
    jac = np.concatenate([-diff / safe[:, None], -np.ones((len(pts), 1))], axis=1)
    res = dist - radius
    step, *_ = np.linalg.lstsq(jac, -res, rcond=None)
    center = center + step[:2]
    radius = radius + step[2]
    return center, radius


def project_line_circle_fit(
    point, direction, model: CameraModel, count: int = 200, span: float = 20.0,
) -> LineProjectionFit:
    """Project the 3D line point + t*direction and fit a circle to the curve.

    Under a single-parameter division model the projected curve is an exact
    circle (or a straight segment for lines coplanar with the optical axis,
    reported with is_line=True). Other models report the residual only.
    """
    q = np.asarray(point, dtype=np.float64)
    d = np.asarray(direction, dtype=np.float64)
    if np.linalg.norm(d) < 1e-12:
        raise ValueError("direction must be nonzero")
    d = d / np.linalg.norm(d)
    if np.linalg.norm(np.cross(q, d)) < 1e-9:
        raise ValueError("line passes through the projection center")
    ts = np.linspace(-span, span, count)
    pts3 = q[None, :] + ts[:, None] * d[None, :]
    # stay clearly inside the field-angle domain so the curve is finite
    theta = np.arctan2(np.hypot(pts3[:, 0], pts3[:, 1]), pts3[:, 2])
    keep = theta < 0.9 * model.theta_max
    if np.count_nonzero(keep) < 8:
        raise ValueError("line barely intersects the camera domain")
    pix, valid = model.project_masked(pts3[keep])
    pix = pix[valid]
    if len(pix) < 8:
        raise ValueError("line barely intersects the camera domain")

    normal = np.cross(d, q)
    if abs(normal[2]) < 1e-12 * np.linalg.norm(normal):
        # plane through the line and the optical axis: projects to a radial line
        centered = pix - pix.mean(axis=0)
        _, _, vt = np.linalg.svd(centered, full_matrices=False)
        residual = float(np.max(np.abs(centered @ vt[1])))
        return LineProjectionFit(residual=residual, is_line=True, center=None, radius=math.inf)

    center, radius = fit_circle(pix)
    residual = float(np.max(np.abs(np.linalg.norm(pix - center, axis=1) - radius)))
    return LineProjectionFit(residual=residual, is_line=False,
                             center=(float(center[0]), float(center[1])), radius=float(radius))
