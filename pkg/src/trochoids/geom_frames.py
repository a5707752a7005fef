"""Angle helpers and the inertial / wind-aligned frame transforms.

All headings are kept in [0, 2*pi).  The wind frame is the inertial frame
rotated so that the wind blows along +x; positions are rotated about the
inertial origin and headings are shifted by the wind angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from trochoids.errors import DegeneratePoints

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi


def wrap_2pi(angle: float) -> float:
    """Normalize ``angle`` to [0, 2*pi)."""
    a = math.fmod(angle, TWO_PI)
    if a < 0.0:
        a += TWO_PI
    # fmod of a tiny negative number can round up to exactly 2*pi
    if a >= TWO_PI:
        a -= TWO_PI
    return a


@dataclass(frozen=True)
class Pose:
    x: float
    y: float
    psi: float
    z: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "psi", wrap_2pi(float(self.psi)))

    @property
    def xy(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class Wind:
    wx: float
    wy: float

    @property
    def speed(self) -> float:
        return math.hypot(self.wx, self.wy)

    @property
    def angle(self) -> float:
        return wind_angle(self.wx, self.wy)

    @classmethod
    def from_polar(cls, speed: float, angle: float) -> "Wind":
        return cls(speed * math.cos(angle), speed * math.sin(angle))


@dataclass(frozen=True)
class VehicleLimits:
    """Airspeed ``va`` [m/s] and maximum turn rate ``omega`` [rad/s]."""

    va: float
    omega: float
    radius: float = field(init=False)
    t_2pi: float = field(init=False)

    def __post_init__(self):
        if not (self.va > 0.0 and self.omega > 0.0):
            raise ValueError(f"airspeed and turn rate must be positive, got va={self.va}, omega={self.omega}")
        object.__setattr__(self, "radius", self.va / self.omega)
        object.__setattr__(self, "t_2pi", TWO_PI / self.omega)

    @classmethod
    def from_radius(cls, va: float, radius: float) -> "VehicleLimits":
        return cls(va, va / radius)


def wind_angle(wx: float, wy: float) -> float:
    """Direction the wind blows towards, in [0, 2*pi); 0 for calm air."""
    if wx == 0.0 and wy == 0.0:
        return 0.0
    return wrap_2pi(math.atan2(wy, wx))


def _rotate(x: float, y: float, angle: float) -> tuple[float, float]:
    c, s = math.cos(angle), math.sin(angle)
    return c * x - s * y, s * x + c * y


def to_wind_frame(p: Pose, w: Wind) -> Pose:
    psi_w = w.angle
    # R_i^w = [[c, s], [-s, c]] is a rotation by -psi_w
    x, y = _rotate(p.x, p.y, -psi_w)
    return Pose(x, y, p.psi - psi_w, p.z)


def from_wind_frame(p: Pose, w: Wind) -> Pose:
    psi_w = w.angle
    x, y = _rotate(p.x, p.y, psi_w)
    return Pose(x, y, p.psi + psi_w, p.z)


def quadrant_of(angle: float) -> int:
    """Quadrant index 1..4 of ``angle`` using half-open [lo, hi) boundaries."""
    q = int(wrap_2pi(angle) // HALF_PI) + 1
    # guards the float edge where wrap_2pi returns a value a hair below 2*pi
    return min(q, 4)


def bearing(start: Pose | tuple[float, float], to_xy: tuple[float, float]) -> float:
    """Direction of ``to_xy`` as seen from ``start``, in [0, 2*pi)."""
    sx, sy = start.xy if isinstance(start, Pose) else start
    dx, dy = to_xy[0] - sx, to_xy[1] - sy
    if math.hypot(dx, dy) <= 1e-9:
        raise DegeneratePoints(f"points coincide at ({sx}, {sy})")
    return wrap_2pi(math.atan2(dy, dx))


def angle_diff(a: float, b: float) -> float:
    """Smallest signed difference ``a - b`` in (-pi, pi]."""
    d = wrap_2pi(a - b)
    return d - TWO_PI if d > math.pi else d
