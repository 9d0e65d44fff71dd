"""Shock algebra: jump conditions, strength parameterization, admissibility.

Shock sides are labeled by the gas path. The front (upstream) side is the
one the gas arrives from, the back (downstream) side the one it leaves to.
For a forward shock (N > 0 on both sides) the gas crosses rays toward
decreasing theta, so the front side is the right limit in theta and the
back side the left limit. A backward shock mirrors this.

Shock strength is z = (p_back - p_front) / p_front > 0. With
    rp = 1 + z (gamma+1) / (2 gamma)
    rm = 1 + z (gamma-1) / (2 gamma)
the closed forms used throughout are, for a forward shock,

    |N_front| = c_front sqrt(rp)
    rho_back  = rho_front rp / rm
    p_back    = p_front (1 + z)
    |N_back|  = c_front^2 rm / |N_front|
    c_back^2  = c_front^2 (1 + z) rm / rp

and identical with all normal velocities negated for a backward shock.
"""

import enum
from dataclasses import dataclass
from math import atan, cos, sin, sqrt, tan, asin, pi

from scipy.optimize import brentq, minimize_scalar

from .gas import PrimitiveState, in_phase_space, physical_fluxes
from .polar import PolarState, to_polar

__all__ = [
    "Orientation",
    "ShockSolution",
    "DiscontinuityKind",
    "Classification",
    "AdmissibilityReport",
    "hugoniot_value",
    "shock_from_strength",
    "strength_from_normal_mach",
    "downstream_normal_mach",
    "classify_discontinuity",
    "rh_residual",
    "check_admissibility",
    "deflection_angle",
    "solve_shock_angle",
    "max_deflection",
    "max_deflection_limit",
    "lax_neighborhood_bound",
    "normal_floor",
]


class Orientation(enum.Enum):
    FORWARD = "forward"
    BACKWARD = "backward"

    @property
    def sign(self):
        """Sign of N on both sides of a shock with this orientation."""
        return 1.0 if self is Orientation.FORWARD else -1.0


@dataclass(frozen=True)
class ShockSolution:
    """A resolved shock: both polar states, strength and mass flux.

    upstream is the front side, downstream the back side. mass_flux is the
    signed rho*N, equal on the two sides.
    """

    theta: float
    orientation: "Orientation"
    upstream: PolarState
    downstream: PolarState
    z: float
    mass_flux: float

    def left_state(self):
        """State on the lower-theta side of the jump."""
        if self.orientation is Orientation.FORWARD:
            return self.downstream
        return self.upstream

    def right_state(self):
        """State on the higher-theta side of the jump."""
        if self.orientation is Orientation.FORWARD:
            return self.upstream
        return self.downstream


def hugoniot_value(tau, p, tau_ref, p_ref, gas):
    """Hugoniot function H of a trial state against a reference state.

    H = e(tau, p) - e(tau_ref, p_ref) + (tau - tau_ref)(p + p_ref)/2,
    zero exactly when the pair satisfies the shock energy condition.
    """
    gm1 = gas.gamma - 1.0
    e = p * tau / gm1
    e_ref = p_ref * tau_ref / gm1
    return e - e_ref + 0.5 * (tau - tau_ref) * (p + p_ref)


def downstream_normal_mach(z, gamma):
    """|N_back| / c_back as a function of shock strength.

    Strictly decreasing in z, from 1 at z = 0 down to sqrt((gamma-1)/(2 gamma)).
    """
    rm = 1.0 + z * (gamma - 1.0) / (2.0 * gamma)
    return sqrt(rm / (1.0 + z))


def strength_from_normal_mach(mach_n, gamma, side):
    """Invert the normal-Mach/strength relations.

    side "front": mach_n = |N_front|/c_front > 1, solved from
    mach_n^2 = 1 + z (gamma+1)/(2 gamma).
    side "back": mach_n = |N_back|/c_back < 1, solved from
    mach_n^2 = rm / (1+z).
    Raises if the given Mach number is on the wrong side of 1.
    """
    if side == "front":
        if not mach_n > 1.0:
            raise ValueError("front side of a shock must be supersonic normal")
        return (mach_n * mach_n - 1.0) * 2.0 * gamma / (gamma + 1.0)
    if side == "back":
        mu = mach_n * mach_n
        lo = (gamma - 1.0) / (2.0 * gamma)
        if not (lo < mu < 1.0):
            raise ValueError("back side of a shock must be subsonic normal")
        return (1.0 - mu) / (mu - lo)
    raise ValueError("side must be 'front' or 'back'")


def shock_from_strength(upstream, z, orient, gas):
    """Construct the shock of strength z standing on the given upstream state.

    upstream supplies the angle, thermodynamics and tangential velocity; its
    normal component is replaced by the unique value a shock of strength z
    admits, c_front sqrt(1 + z (gamma+1)/(2 gamma)) with the orientation sign.
    """
    if not z > 0.0:
        raise ValueError("no jump: shock strength must be positive")
    if z > gas.z_max:
        raise ValueError("shock strength exceeds z_max for the phase space")
    g = gas.gamma
    rp = 1.0 + z * (g + 1.0) / (2.0 * g)
    rm = 1.0 + z * (g - 1.0) / (2.0 * g)
    c_f = sqrt(g * upstream.p / upstream.rho)
    n_front = orient.sign * c_f * sqrt(rp)
    front = PolarState(
        theta=upstream.theta, N=n_front, L=upstream.L, rho=upstream.rho, p=upstream.p
    )
    rho_b = upstream.rho * rp / rm
    p_b = upstream.p * (1.0 + z)
    n_back = upstream.rho * n_front / rho_b
    back = PolarState(theta=upstream.theta, N=n_back, L=upstream.L, rho=rho_b, p=p_b)

    rep = in_phase_space(front.to_primitive(), gas)
    if not rep.ok:
        raise ValueError("upstream state leaves phase space: " + "; ".join(rep.violations))
    rep = in_phase_space(back.to_primitive(), gas)
    if not rep.ok:
        raise ValueError("downstream state leaves phase space: " + "; ".join(rep.violations))

    return ShockSolution(
        theta=upstream.theta,
        orientation=orient,
        upstream=front,
        downstream=back,
        z=z,
        mass_flux=upstream.rho * n_front,
    )


def rh_residual(left, right, theta, gas):
    """Jump of the rotated flux, sin(theta) [f^x] - cos(theta) [f^y].

    The jump is right state minus left state. All four components vanish
    exactly when the jump conditions hold at theta.
    """
    fxl, fyl = physical_fluxes(left, gas)
    fxr, fyr = physical_fluxes(right, gas)
    st, ct = sin(theta), cos(theta)
    return tuple(st * (fxr[i] - fxl[i]) - ct * (fyr[i] - fyl[i]) for i in range(4))


class DiscontinuityKind(enum.Enum):
    FORWARD_SHOCK = "forward_shock"
    BACKWARD_SHOCK = "backward_shock"
    CONTACT = "contact"
    NOT_A_JUMP = "not_a_jump"
    INADMISSIBLE = "inadmissible"


@dataclass(frozen=True)
class Classification:
    kind: DiscontinuityKind
    shock: ShockSolution | None = None
    reason: str | None = None


def _relative_gap(left, right):
    parts = []
    for a, b in ((left.rho, right.rho), (left.u, right.u), (left.v, right.v), (left.p, right.p)):
        scale = max(abs(a), abs(b), 1.0)
        parts.append(abs(a - b) / scale)
    return max(parts)


def classify_discontinuity(left, right, theta, gas):
    """Decide what kind of jump, if any, the two states form at theta.

    States within relative distance 1e-9 are not a jump. A contact needs
    both normal velocities at the zero threshold and equal pressures. A
    shock needs all four jump conditions, a consistent N sign, and the
    entropy condition; anything else is inadmissible with the first
    violated condition named.
    """
    if _relative_gap(left, right) <= 1e-9:
        return Classification(DiscontinuityKind.NOT_A_JUMP)

    n_zero = 1e-9 * gas.bounds.speed_max
    Nl, Ll = to_polar(left.u, left.v, theta)
    Nr, Lr = to_polar(right.u, right.v, theta)
    p_scale = max(left.p, right.p)

    if abs(Nl) <= n_zero and abs(Nr) <= n_zero:
        if abs(left.p - right.p) <= 1e-9 * p_scale:
            return Classification(DiscontinuityKind.CONTACT)
        return Classification(
            DiscontinuityKind.INADMISSIBLE, reason="pressure jumps across a contact"
        )

    res = rh_residual(left, right, theta, gas)
    fxl, fyl = physical_fluxes(left, gas)
    fxr, fyr = physical_fluxes(right, gas)
    for i in range(4):
        scale = max(abs(fxl[i]), abs(fxr[i]), abs(fyl[i]), abs(fyr[i]), 1.0)
        if abs(res[i]) > 1e-8 * scale:
            names = ("mass", "x-momentum", "y-momentum", "energy")
            return Classification(
                DiscontinuityKind.INADMISSIBLE,
                reason="%s flux jumps across the discontinuity" % names[i],
            )

    if Nl > n_zero and Nr > n_zero:
        orient = Orientation.FORWARD
        front, back = right, left
        n_front, n_back, l_front = Nr, Nl, Lr
    elif Nl < -n_zero and Nr < -n_zero:
        orient = Orientation.BACKWARD
        front, back = left, right
        n_front, n_back, l_front = Nl, Nr, Ll
    else:
        return Classification(
            DiscontinuityKind.INADMISSIBLE, reason="normal velocity changes sign"
        )

    z = (back.p - front.p) / front.p
    if not z > 0.0:
        return Classification(
            DiscontinuityKind.INADMISSIBLE, reason="entropy decreases across the jump"
        )
    sol = ShockSolution(
        theta=theta,
        orientation=orient,
        upstream=PolarState(theta=theta, N=n_front, L=l_front, rho=front.rho, p=front.p),
        downstream=PolarState(theta=theta, N=n_back, L=l_front, rho=back.rho, p=back.p),
        z=z,
        mass_flux=front.rho * n_front,
    )
    report = check_admissibility(sol, gas)
    if not report.ok:
        return Classification(
            DiscontinuityKind.INADMISSIBLE, shock=sol, reason=report.first_failure()
        )
    kind = (
        DiscontinuityKind.FORWARD_SHOCK
        if orient is Orientation.FORWARD
        else DiscontinuityKind.BACKWARD_SHOCK
    )
    return Classification(kind, shock=sol)


@dataclass(frozen=True)
class AdmissibilityReport:
    """Named admissibility conditions with their measured margins.

    Each entry is (name, passed, margin) where the margin is the amount by
    which the inequality holds (positive means satisfied strictly).
    """

    checks: tuple

    @property
    def ok(self):
        return all(passed for _, passed, _ in self.checks)

    def first_failure(self):
        for name, passed, _ in self.checks:
            if not passed:
                return name
        return None

    def margin(self, name):
        for n, _, m in self.checks:
            if n == name:
                return m
        raise KeyError(name)


def normal_floor(gas):
    """Lower bound on |N| at any entropy-admissible shock."""
    return gas.c_min * gas.bounds.rho_min / gas.bounds.rho_max


def check_admissibility(sol, gas):
    """Evaluate every admissibility condition of a shock with margins.

    Checks: compressivity (back denser than front), entropy rise through
    the gas path, strict Lax inequalities on both sides, the normal-velocity
    floor, and the strength window (0, z_max].
    """
    up, dn = sol.upstream, sol.downstream
    c_f = up.sound_speed(gas)
    c_b = dn.sound_speed(gas)
    floor = normal_floor(gas)
    s_f = up.p / up.rho ** gas.gamma
    s_b = dn.p / dn.rho ** gas.gamma
    # mass_flux * (entropy jump in theta) must be <= 0; the jump taken
    # right minus left regardless of orientation
    if sol.orientation is Orientation.FORWARD:
        ds_theta = s_f - s_b
    else:
        ds_theta = s_b - s_f
    checks = (
        ("compressive", dn.rho > up.rho, 1.0 / up.rho - 1.0 / dn.rho),
        ("entropy rises", s_b > s_f, s_b - s_f),
        ("entropy flux sign", sol.mass_flux * ds_theta <= 0.0, -sol.mass_flux * ds_theta),
        ("lax upstream", abs(up.N) > c_f, abs(up.N) - c_f),
        ("lax downstream", 0.0 < abs(dn.N) < c_b, c_b - abs(dn.N)),
        ("normal velocity floor upstream", abs(up.N) >= floor, abs(up.N) - floor),
        ("normal velocity floor downstream", abs(dn.N) >= floor, abs(dn.N) - floor),
        ("strength window", 0.0 < sol.z <= gas.z_max, gas.z_max - sol.z),
        ("same normal sign", up.N * dn.N > 0.0, up.N * dn.N),
    )
    return AdmissibilityReport(checks=checks)


def deflection_angle(mach, shock_angle, gas):
    """Flow turning angle of an oblique shock at the given shock angle.

    alpha = arctan( 2 cot(theta_s) (M^2 sin^2 theta_s - 1)
                    / (M^2 (gamma + cos 2 theta_s) + 2) )
    Zero at the Mach angle asin(1/M) and at the normal shock pi/2.
    """
    if not mach > 1.0:
        raise ValueError("upstream Mach number must exceed 1")
    mach_angle = asin(1.0 / mach)
    if shock_angle < mach_angle - 1e-14 or shock_angle > 0.5 * pi + 1e-14:
        raise ValueError("shock angle outside [asin(1/M), pi/2]")
    m2 = mach * mach
    s = sin(shock_angle)
    num = 2.0 * (m2 * s * s - 1.0) / tan(shock_angle)
    den = m2 * (gas.gamma + cos(2.0 * shock_angle)) + 2.0
    a = atan(num / den)
    return max(a, 0.0)


def max_deflection(mach, gas):
    """Largest deflection an attached shock can produce at this Mach number."""
    lo = asin(1.0 / mach)
    hi = 0.5 * pi
    res = minimize_scalar(
        lambda t: -deflection_angle(mach, t, gas),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-13},
    )
    return -res.fun


def _peak_shock_angle(mach, gas):
    lo = asin(1.0 / mach)
    hi = 0.5 * pi
    res = minimize_scalar(
        lambda t: -deflection_angle(mach, t, gas),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-13},
    )
    return res.x


def max_deflection_limit(gas):
    """Limiting value of the maximum deflection as the Mach number grows."""
    return asin(1.0 / gas.gamma)


def solve_shock_angle(mach, alpha, branch, gas):
    """Invert the deflection relation on the requested branch.

    branch "weak" returns the smaller shock angle, "strong" the larger.
    Rejects deflections beyond max_deflection(mach), the detached regime.
    """
    if not mach > 1.0:
        raise ValueError("upstream Mach number must exceed 1")
    if alpha < 0.0:
        raise ValueError("deflection must be nonnegative")
    branch = branch.lower()
    if branch not in ("weak", "strong"):
        raise ValueError("branch must be 'weak' or 'strong'")
    lo = asin(1.0 / mach)
    hi = 0.5 * pi
    if alpha == 0.0:
        return lo if branch == "weak" else hi
    peak = _peak_shock_angle(mach, gas)
    alpha_peak = deflection_angle(mach, peak, gas)
    if alpha > alpha_peak:
        raise ValueError("detached shock regime: deflection exceeds the maximum")

    def f(t):
        return deflection_angle(mach, t, gas) - alpha

    a, b = (lo, peak) if branch == "weak" else (peak, hi)
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        # alpha equals the peak value up to rounding
        return peak
    return brentq(f, a, b, xtol=1e-14, rtol=8.9e-16)


def lax_neighborhood_bound(gas):
    """Uniform constant delta_L controlling constant-neighborhood widths.

    Built as the minimum of the two concavity constants of the Lax margins
    and a floor constant divided by the largest possible jump size:

      d1 = c_min (sqrt(1 + z_max (gamma+1)/(2 gamma)) - 1) / (z_max speed_max)
      d2 = c_min sqrt((gamma-1)/(gamma+1))
           * (sqrt(1 + z_max) - sqrt(1 + z_max (gamma-1)/(2 gamma)))
           / (z_max speed_max)
      d3 = c_min sqrt((gamma-1)/(2 gamma)) / speed_max / J_max

    J_max bounds the Euclidean norm of any conserved-variable jump inside
    the phase-space box.
    """
    g = gas.gamma
    b = gas.bounds
    zm = gas.z_max
    sm = b.speed_max
    cm = gas.c_min
    d1 = cm * (sqrt(1.0 + zm * (g + 1.0) / (2.0 * g)) - 1.0) / (zm * sm)
    d2 = (
        cm
        * sqrt((g - 1.0) / (g + 1.0))
        * (sqrt(1.0 + zm) - sqrt(1.0 + zm * (g - 1.0) / (2.0 * g)))
        / (zm * sm)
    )
    d_rho = b.rho_max - b.rho_min
    d_mom = 2.0 * b.rho_max * sm
    d_en = (b.p_max - b.p_min) / (g - 1.0) + 0.5 * b.rho_max * sm * sm
    j_max = sqrt(d_rho * d_rho + 2.0 * d_mom * d_mom + d_en * d_en)
    d3 = cm * sqrt((g - 1.0) / (2.0 * g)) / sm / j_max
    return min(d1, d2, d3)
