"""Polytropic gas thermodynamics, state representations and physical fluxes.

Everything here is nondimensional. A state is admissible when it sits inside
the phase-space box carried by the gas model (density, pressure, speed and
internal-energy bounds), and the toolkit additionally excludes stagnation
points (zero velocity) throughout.
"""

from dataclasses import dataclass
from math import sqrt

__all__ = [
    "PhaseBounds",
    "GasModel",
    "PrimitiveState",
    "ConservedState",
    "PhaseReport",
    "make_gas",
    "primitive_to_conserved",
    "conserved_to_primitive",
    "physical_fluxes",
    "in_phase_space",
]


@dataclass(frozen=True)
class PhaseBounds:
    """Box in phase space: density, pressure, speed and energy bounds."""

    rho_min: float
    rho_max: float
    p_min: float
    p_max: float
    speed_max: float
    e_min: float

    def __post_init__(self):
        if not (0.0 < self.rho_min <= self.rho_max):
            raise ValueError("density bounds must satisfy 0 < rho_min <= rho_max")
        if not (0.0 < self.p_min <= self.p_max):
            raise ValueError("pressure bounds must satisfy 0 < p_min <= p_max")
        if not self.speed_max > 0.0:
            raise ValueError("speed_max must be positive")
        if not self.e_min > 0.0:
            raise ValueError("e_min must be positive")


@dataclass(frozen=True)
class GasModel:
    """Ratio of specific heats plus phase-space bounds.

    c_min is the smallest sound speed attainable in the box and z_max the
    largest shock strength (relative pressure jump) the box can hold. Both
    are precomputed by make_gas.
    """

    gamma: float
    bounds: PhaseBounds
    c_min: float
    z_max: float


def make_gas(gamma, bounds):
    """Build a GasModel, rejecting gamma <= 1 and inconsistent bounds."""
    if not gamma > 1.0:
        raise ValueError("gamma must exceed 1")
    c_min = sqrt(gamma * bounds.p_min / bounds.rho_max)
    z_max = (bounds.p_max - bounds.p_min) / bounds.p_min
    return GasModel(gamma=gamma, bounds=bounds, c_min=c_min, z_max=z_max)


@dataclass(frozen=True)
class PrimitiveState:
    """Primitive variables (rho, u, v, p) with derived thermodynamics."""

    rho: float
    u: float
    v: float
    p: float

    def __post_init__(self):
        if not self.rho > 0.0:
            raise ValueError("nonpositive density")
        if not self.p > 0.0:
            raise ValueError("nonpositive pressure")

    @property
    def tau(self):
        """Specific volume 1/rho."""
        return 1.0 / self.rho

    @property
    def speed(self):
        return sqrt(self.u * self.u + self.v * self.v)

    def internal_energy(self, gas):
        """Specific internal energy e = p / ((gamma - 1) rho)."""
        return self.p / ((gas.gamma - 1.0) * self.rho)

    def sound_speed(self, gas):
        return sqrt(gas.gamma * self.p / self.rho)

    def enthalpy(self, gas):
        """Total specific enthalpy h = gamma p / ((gamma-1) rho) + |u|^2 / 2."""
        g = gas.gamma
        return g * self.p / ((g - 1.0) * self.rho) + 0.5 * (self.u ** 2 + self.v ** 2)

    def total_energy(self, gas):
        """Total energy per unit volume, p/(gamma-1) + rho |u|^2 / 2."""
        return self.p / (gas.gamma - 1.0) + 0.5 * self.rho * (self.u ** 2 + self.v ** 2)

    def entropy_indicator(self, gas):
        """Entropy surrogate s = p / rho^gamma.

        Physical specific entropy is a monotone function of this quantity,
        so every inequality check on entropy uses it directly.
        """
        return self.p / self.rho ** gas.gamma


@dataclass(frozen=True)
class ConservedState:
    """Conserved variables (rho, rho u, rho v, total energy per volume)."""

    rho: float
    mom_x: float
    mom_y: float
    energy: float

    def as_tuple(self):
        return (self.rho, self.mom_x, self.mom_y, self.energy)


def primitive_to_conserved(s, gas):
    """Map (rho, u, v, p) to (rho, rho u, rho v, E)."""
    return ConservedState(
        rho=s.rho,
        mom_x=s.rho * s.u,
        mom_y=s.rho * s.v,
        energy=s.total_energy(gas),
    )


def conserved_to_primitive(c, gas):
    """Invert primitive_to_conserved, rejecting nonphysical inputs."""
    if not c.rho > 0.0:
        raise ValueError("nonpositive density")
    u = c.mom_x / c.rho
    v = c.mom_y / c.rho
    p = (gas.gamma - 1.0) * (c.energy - 0.5 * c.rho * (u * u + v * v))
    if not p > 0.0:
        raise ValueError("nonpositive pressure")
    return PrimitiveState(rho=c.rho, u=u, v=v, p=p)


def physical_fluxes(s, gas):
    """Euler fluxes f^x and f^y of the state, as two 4-tuples.

    f^x = (rho u, rho u^2 + p, rho u v, u (E + p))
    f^y = (rho v, rho u v, rho v^2 + p, v (E + p))
    """
    rho, u, v, p = s.rho, s.u, s.v, s.p
    E = s.total_energy(gas)
    fx = (rho * u, rho * u * u + p, rho * u * v, u * (E + p))
    fy = (rho * v, rho * u * v, rho * v * v + p, v * (E + p))
    return fx, fy


@dataclass(frozen=True)
class PhaseReport:
    """Outcome of a phase-space membership check."""

    ok: bool
    violations: tuple

    def __bool__(self):
        return self.ok


def in_phase_space(s, gas):
    """Check a state against the model's box, reporting each violation.

    The no-stagnation assumption is enforced here as well: a state with
    zero velocity is rejected even if its thermodynamics are in bounds.
    """
    b = gas.bounds
    bad = []
    if s.rho < b.rho_min:
        bad.append("density below floor")
    if s.rho > b.rho_max:
        bad.append("density above ceiling")
    if s.p < b.p_min:
        bad.append("pressure below floor")
    if s.p > b.p_max:
        bad.append("pressure above ceiling")
    if s.internal_energy(gas) < b.e_min:
        bad.append("internal energy below floor")
    q = s.speed
    if q > b.speed_max:
        bad.append("speed above ceiling")
    if q == 0.0:
        bad.append("stagnation point")
    return PhaseReport(ok=not bad, violations=tuple(bad))
