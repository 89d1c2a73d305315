"""Rigid SE(3) transforms stored as unit quaternion plus translation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _quat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    w1, x1, y1, z1 = a
    w2, x2, y2, z2 = b
    return np.array([
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
        w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
    ])


@dataclass(frozen=True)
class Pose:
    """Rotation (unit quaternion, w-first) followed by translation in meters.

    apply(X) = R X + t. Construction normalizes the quaternion and rejects
    near-zero ones.
    """

    quaternion: tuple = (1.0, 0.0, 0.0, 0.0)
    translation: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        q = np.asarray(self.quaternion, dtype=np.float64)
        t = np.asarray(self.translation, dtype=np.float64)
        if q.shape != (4,) or t.shape != (3,):
            raise ValueError("quaternion must have 4 entries, translation 3")
        n = float(np.linalg.norm(q))
        if n < 1e-9:
            raise ValueError("quaternion norm too small")
        object.__setattr__(self, "quaternion", tuple(q / n))
        object.__setattr__(self, "translation", tuple(t))

    @classmethod
    def identity(cls) -> "Pose":
        return cls()

    @classmethod
    def from_euler_xyz(cls, angles, translation=(0.0, 0.0, 0.0)) -> "Pose":
        """Pose from intrinsic XYZ Euler angles (radians)."""
        half = np.asarray(angles, dtype=np.float64) / 2.0
        cx, cy, cz = np.cos(half)
        sx, sy, sz = np.sin(half)
        qx = np.array([cx, sx, 0.0, 0.0])
        qy = np.array([cy, 0.0, sy, 0.0])
        qz = np.array([cz, 0.0, 0.0, sz])
        return cls(tuple(_quat_mul(_quat_mul(qx, qy), qz)), tuple(translation))

    @property
    def rotation_matrix(self) -> np.ndarray:
        w, x, y, z = self.quaternion
        return np.array([
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ])

    def apply(self, points) -> np.ndarray:
        """Transform points (..., 3)."""
        pts = np.asarray(points, dtype=np.float64)
        return pts @ self.rotation_matrix.T + np.asarray(self.translation)

    def compose(self, other: "Pose") -> "Pose":
        """self after other: (self @ other).apply(x) == self.apply(other.apply(x))."""
        q = _quat_mul(np.asarray(self.quaternion), np.asarray(other.quaternion))
        t = self.apply(np.asarray(other.translation))
        return Pose(tuple(q), tuple(t))

    def inverse(self) -> "Pose":
        w, x, y, z = self.quaternion
        q_inv = (w, -x, -y, -z)
        r_inv = self.rotation_matrix.T
        t_inv = -r_inv @ np.asarray(self.translation)
        return Pose(q_inv, tuple(t_inv))

    def is_identity(self) -> bool:
        w = abs(self.quaternion[0])
        return w == 1.0 and self.translation == (0.0, 0.0, 0.0)

    def with_translation_norm(self, norm: float) -> "Pose":
        """Same rotation, translation rescaled to the given norm."""
        t = np.asarray(self.translation)
        cur = float(np.linalg.norm(t))
        if cur < 1e-12:
            raise ValueError("cannot rescale a zero translation")
        if norm <= 0:
            raise ValueError("target norm must be positive")
        return Pose(self.quaternion, tuple(t * (norm / cur)))
