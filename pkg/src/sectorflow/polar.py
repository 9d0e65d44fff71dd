"""Velocity frame attached to the ray at angle theta, and the flow angle.

At a given theta the frame splits the velocity into N (normal to the ray,
positive when the gas crosses rays toward decreasing theta) and L (along
the ray, positive outward):

    N = u sin(theta) - v cos(theta)
    L = u cos(theta) + v sin(theta)

The transform is a rotation, so it preserves speed and inverts exactly.
"""

from dataclasses import dataclass
from math import atan2, cos, pi, sin

TWO_PI = 2.0 * pi

__all__ = [
    "TWO_PI",
    "wrap_angle",
    "wrap_signed",
    "to_polar",
    "from_polar",
    "flow_angle",
    "PolarState",
]


def wrap_angle(theta):
    """Reduce an angle to the canonical circle [0, 2*pi)."""
    t = theta % TWO_PI
    # % can return the modulus itself through rounding when theta is a
    # tiny negative number
    if t >= TWO_PI:
        t -= TWO_PI
    return t


def wrap_signed(theta):
    """Reduce an angle to (-pi, pi]."""
    t = theta % TWO_PI
    if t > pi:
        t -= TWO_PI
    return t


def to_polar(u, v, theta):
    """Cartesian velocity to (N, L) at the ray angle theta."""
    st, ct = sin(theta), cos(theta)
    return u * st - v * ct, u * ct + v * st


def from_polar(N, L, theta):
    """(N, L) at the ray angle theta back to Cartesian velocity."""
    st, ct = sin(theta), cos(theta)
    return N * st + L * ct, -N * ct + L * st


def flow_angle(N, L, theta):
    """Direction of the velocity vector, in (-pi, pi].

    Reconstructs (u, v) from the frame values and takes the two-argument
    arctangent, which stays finite where the L-ratio form of the same
    angle has its spurious singularity.
    """
    if N == 0.0 and L == 0.0:
        raise ValueError("flow angle undefined for zero velocity")
    u, v = from_polar(N, L, theta)
    phi = atan2(v, u)
    if phi == -pi:
        phi = pi
    return phi


@dataclass(frozen=True)
class PolarState:
    """A thermodynamic state carried in the ray frame at angle theta."""

    theta: float
    N: float
    L: float
    rho: float
    p: float

    def velocity(self):
        return from_polar(self.N, self.L, self.theta)

    def sound_speed(self, gas):
        from math import sqrt

        return sqrt(gas.gamma * self.p / self.rho)

    def flow_angle(self):
        return flow_angle(self.N, self.L, self.theta)

    def to_primitive(self):
        from .gas import PrimitiveState

        u, v = self.velocity()
        return PrimitiveState(rho=self.rho, u=u, v=v, p=self.p)
