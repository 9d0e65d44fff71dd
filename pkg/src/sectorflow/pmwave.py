"""Sonic-branch smooth waves: N = +-c with the state sliding on one isentrope.

The wave is governed by the reduced two-equation system in (rho, L),

    forward  (N = +c):  rho' = 2 rho L / ((gamma+1) c),   L' = -c
    backward (N = -c):  rho' = -2 rho L / ((gamma+1) c),  L' = +c

with c = c(rho) on the isentrope through the starting state. N never
appears as an unknown: it is slaved to +-c(rho), which keeps the sonic
and isentropic invariants exact at every sample by construction.

Integration is fixed-step RK4 with cubic Hermite dense output (the rhs is
cheap, so sample derivatives are stored alongside the samples).
"""

import enum
from bisect import bisect_right
from dataclasses import dataclass, replace
from math import ceil, sqrt

from .gas import PrimitiveState, in_phase_space
from .polar import PolarState, from_polar

__all__ = [
    "WaveKind",
    "PMWave",
    "pm_rhs",
    "integrate_pm",
    "classify_pm",
    "pm_wave_state",
    "pm_state_derivative",
]

SONIC_TOL = 1e-6


class WaveKind(enum.Enum):
    EXPANSION = "expansion"
    COMPRESSION = "compression"


def _sound_speed_isentrope(rho, s_ref, gamma):
    return sqrt(gamma * s_ref * rho ** (gamma - 1.0))


def pm_rhs(state, orient, gas):
    """(d rho / d theta, d L / d theta) at a sonic state.

    Raises when the state is not sonic for the requested orientation.
    """
    c = state.sound_speed(gas)
    sign = orient.sign
    if abs(state.N - sign * c) > SONIC_TOL * c:
        raise ValueError("state is not sonic for this orientation")
    drho = sign * 2.0 * state.rho * state.L / ((gas.gamma + 1.0) * c)
    dL = -sign * c
    return drho, dL


@dataclass(frozen=True)
class PMWave:
    """A sampled sonic wave on [theta_start, theta_end].

    thetas/rhos/Ls hold the RK4 samples, drhos/dLs the rhs values there
    (for Hermite evaluation). s_ref is the isentrope constant p / rho^gamma,
    identical at all samples.
    """

    orientation: object
    theta_start: float
    theta_end: float
    thetas: tuple
    rhos: tuple
    Ls: tuple
    drhos: tuple
    dLs: tuple
    s_ref: float
    gamma: float
    kind: WaveKind | None = None

    @property
    def samples(self):
        """Ordered (theta, PrimitiveState) pairs at the integration nodes."""
        return tuple(
            (t, pm_wave_state(self, t, exact_index=i)) for i, t in enumerate(self.thetas)
        )

    def end_state(self):
        return pm_wave_state(self, self.thetas[-1], exact_index=len(self.thetas) - 1)

    def reduced_at(self, theta):
        """Hermite-interpolated (rho, L) at an interior angle."""
        ts = self.thetas
        if len(ts) == 1:
            return self.rhos[0], self.Ls[0]
        ascending = ts[-1] >= ts[0]
        lo_t, hi_t = (ts[0], ts[-1]) if ascending else (ts[-1], ts[0])
        if not (lo_t - 1e-12 <= theta <= hi_t + 1e-12):
            raise ValueError("angle outside the wave interval")
        if ascending:
            i = bisect_right(ts, theta) - 1
        else:
            i = len(ts) - 1 - bisect_right(ts[::-1], theta)
        i = min(max(i, 0), len(ts) - 2)
        h = ts[i + 1] - ts[i]
        x = (theta - ts[i]) / h
        out = []
        for ys, ds in ((self.rhos, self.drhos), (self.Ls, self.dLs)):
            y0, y1, d0, d1 = ys[i], ys[i + 1], ds[i] * h, ds[i + 1] * h
            h00 = (1.0 + 2.0 * x) * (1.0 - x) ** 2
            h10 = x * (1.0 - x) ** 2
            h01 = x * x * (3.0 - 2.0 * x)
            h11 = x * x * (x - 1.0)
            out.append(h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1)
        return out[0], out[1]


def pm_wave_state(wave, theta, exact_index=None):
    """Primitive state of the wave at an angle (exact at sample nodes)."""
    if exact_index is not None:
        rho, L = wave.rhos[exact_index], wave.Ls[exact_index]
    else:
        rho, L = wave.reduced_at(theta)
    c = _sound_speed_isentrope(rho, wave.s_ref, wave.gamma)
    N = wave.orientation.sign * c
    u, v = from_polar(N, L, theta)
    return PrimitiveState(rho=rho, u=u, v=v, p=wave.s_ref * rho ** wave.gamma)


def integrate_pm(start, theta_start, theta_end, orient, gas, steps=None, stop_at_L_zero=False):
    """Integrate a sonic wave from a starting state to a target angle.

    start must be sonic at theta_start for the orientation. steps defaults
    to 64 per radian of span. With stop_at_L_zero the wave is cut where L
    crosses zero (located by bisection on the dense output); otherwise an
    interior sign change is an error, since a wave of one kind cannot
    continue through the tangential-velocity zero.
    """
    from .polar import to_polar

    gamma = gas.gamma
    s_ref = start.p / start.rho ** gamma
    N0, L0 = to_polar(start.u, start.v, theta_start)
    c0 = start.sound_speed(gas)
    if abs(N0 - orient.sign * c0) > SONIC_TOL * c0:
        raise ValueError("starting state is not sonic for this orientation")
    rep = in_phase_space(start, gas)
    if not rep.ok:
        raise ValueError("starting state leaves phase space: " + "; ".join(rep.violations))

    span = theta_end - theta_start
    sign = orient.sign

    def rhs(y):
        rho, L = y
        c = _sound_speed_isentrope(rho, s_ref, gamma)
        return sign * 2.0 * rho * L / ((gamma + 1.0) * c), -sign * c

    if span == 0.0:
        d0 = rhs((start.rho, L0))
        return PMWave(
            orientation=orient,
            theta_start=theta_start,
            theta_end=theta_end,
            thetas=(theta_start,),
            rhos=(start.rho,),
            Ls=(L0,),
            drhos=(d0[0],),
            dLs=(d0[1],),
            s_ref=s_ref,
            gamma=gamma,
        )

    if steps is None:
        steps = max(4, ceil(64.0 * abs(span)))
    h = span / steps

    thetas = [theta_start]
    rhos = [start.rho]
    Ls = [L0]
    d = rhs((start.rho, L0))
    drhos, dLs = [d[0]], [d[1]]

    y = (start.rho, L0)
    t = theta_start
    for k in range(steps):
        k1 = rhs(y)
        k2 = rhs((y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]))
        k3 = rhs((y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]))
        k4 = rhs((y[0] + h * k3[0], y[1] + h * k3[1]))
        y = (
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        )
        t = theta_start + (k + 1) * h
        thetas.append(t)
        rhos.append(y[0])
        Ls.append(y[1])
        d = rhs(y)
        drhos.append(d[0])
        dLs.append(d[1])

    wave = PMWave(
        orientation=orient,
        theta_start=theta_start,
        theta_end=theta_end,
        thetas=tuple(thetas),
        rhos=tuple(rhos),
        Ls=tuple(Ls),
        drhos=tuple(drhos),
        dLs=tuple(dLs),
        s_ref=s_ref,
        gamma=gamma,
    )

    # locate any zero of L on the dense output
    crossing = None
    for i in range(len(thetas) - 1):
        if Ls[i] == 0.0 and i > 0:
            crossing = thetas[i]
            break
        if Ls[i] * Ls[i + 1] < 0.0:
            a, b = thetas[i], thetas[i + 1]
            fa = Ls[i]
            for _ in range(60):
                m = 0.5 * (a + b)
                fm = wave.reduced_at(m)[1]
                if fa * fm <= 0.0:
                    b = m
                else:
                    a, fa = m, fm
            crossing = 0.5 * (a + b)
            break

    if crossing is not None:
        at_end = abs(crossing - thetas[-1]) <= 1e-9 * (1.0 + abs(span))
        if stop_at_L_zero:
            if not at_end:
                wave = _truncate(wave, crossing)
        elif not at_end:
            raise ValueError("tangential velocity changes sign inside the wave")

    n = len(wave.thetas)
    for i in (0, n // 2, n - 1):
        rep = in_phase_space(pm_wave_state(wave, wave.thetas[i], exact_index=i), gas)
        if not rep.ok:
            raise ValueError("wave leaves phase space: " + "; ".join(rep.violations))
    return wave


def _truncate(wave, theta_cut):
    """Rebuild a wave cut at an interior angle (last sample interpolated)."""
    keep_t, keep_r, keep_L, keep_dr, keep_dL = [], [], [], [], []
    ascending = wave.theta_end >= wave.theta_start
    for i, t in enumerate(wave.thetas):
        inside = t < theta_cut if ascending else t > theta_cut
        if inside:
            keep_t.append(t)
            keep_r.append(wave.rhos[i])
            keep_L.append(wave.Ls[i])
            keep_dr.append(wave.drhos[i])
            keep_dL.append(wave.dLs[i])
    rho, L = wave.reduced_at(theta_cut)
    c = _sound_speed_isentrope(rho, wave.s_ref, wave.gamma)
    sign = wave.orientation.sign
    keep_t.append(theta_cut)
    keep_r.append(rho)
    keep_L.append(L)
    keep_dr.append(sign * 2.0 * rho * L / ((wave.gamma + 1.0) * c))
    keep_dL.append(-sign * c)
    return replace(
        wave,
        theta_end=theta_cut,
        thetas=tuple(keep_t),
        rhos=tuple(keep_r),
        Ls=tuple(keep_L),
        drhos=tuple(keep_dr),
        dLs=tuple(keep_dL),
    )


def classify_pm(wave, theta_bar, tol=1e-9):
    """Expansion or compression, judged by interval position and L sign.

    Forward: expansion sits at or below the tangential zero with L >= 0,
    compression at or above it with L <= 0. Backward waves mirror this.
    A wave straddling theta_bar with both L signs present is rejected.
    """
    lo = min(wave.theta_start, wave.theta_end)
    hi = max(wave.theta_start, wave.theta_end)
    scale = max(1.0, max(abs(x) for x in wave.Ls))
    has_pos = any(L > tol * scale for L in wave.Ls)
    has_neg = any(L < -tol * scale for L in wave.Ls)
    if has_pos and has_neg:
        raise ValueError("wave straddles the tangential-velocity zero")
    forward = wave.orientation.sign > 0
    if not has_neg and (hi <= theta_bar + tol if forward else lo >= theta_bar - tol):
        return WaveKind.EXPANSION
    if not has_pos and (lo >= theta_bar - tol if forward else hi <= theta_bar + tol):
        return WaveKind.COMPRESSION
    raise ValueError("wave position and tangential sign are inconsistent")


def pm_state_derivative(wave, theta, gas):
    """Conserved state and its exact theta-derivative on the wave.

    Used to confirm that U_theta lies in the kernel of the frame Jacobian.
    Returns (U, dU/dtheta) as 4-tuples.
    """
    from math import cos, sin

    rho, L = wave.reduced_at(theta)
    gamma = wave.gamma
    c = _sound_speed_isentrope(rho, wave.s_ref, gamma)
    sign = wave.orientation.sign
    N = sign * c
    drho = sign * 2.0 * rho * L / ((gamma + 1.0) * c)
    dL = -sign * c
    dc = 0.5 * (gamma - 1.0) * c / rho * drho
    dN = sign * dc

    st, ct = sin(theta), cos(theta)
    u = N * st + L * ct
    v = -N * ct + L * st
    du = dN * st + N * ct + dL * ct - L * st
    dv = -dN * ct + N * st + dL * st + L * ct

    p = wave.s_ref * rho ** gamma
    dp = c * c * drho
    E = p / (gamma - 1.0) + 0.5 * rho * (u * u + v * v)
    dE = dp / (gamma - 1.0) + 0.5 * drho * (u * u + v * v) + rho * (u * du + v * dv)

    U = (rho, rho * u, rho * v, E)
    dU = (drho, drho * u + rho * du, drho * v + rho * dv, dE)
    return U, dU
