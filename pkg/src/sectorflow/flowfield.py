"""Composition of wave pieces into a closed flow on the circle of directions.

A flow is described by one anchored constant state plus a circular list of
events (shocks, contacts, smooth waves). The builder marches upward in
angle from the anchor, resolving each event from the state it arrives
with:

  * a shock is placed either at a declared angle (its strength follows
    from the normal Mach number there), at the angle where a declared
    strength fits, or at the angle where the strength balances the
    pressure back to the anchor value ("balance" mode, which must be the
    last pressure-changing event);
  * a contact sits at the next zero of N and declares the density and
    tangential velocity on its far side, carrying pressure across;
  * a smooth wave starts where the incoming constant meets the sonic
    condition N = +-c and runs to a declared end angle.

Closure around the circle is generally met by shooting on one declared
scalar (an angle or a strength) against the flow-angle mismatch at the
seam. The built flow is immutable; evaluation is right-continuous.
"""

import enum
from bisect import bisect_right
from dataclasses import dataclass, replace
from functools import cached_property
from math import asin, atan2, ceil, cos, hypot, pi, sin, sqrt

from .gas import PrimitiveState, in_phase_space, primitive_to_conserved
from .polar import PolarState, TWO_PI, from_polar, to_polar, wrap_angle, wrap_signed
from .pmwave import PMWave, WaveKind, classify_pm, integrate_pm, pm_wave_state
from .shock import (
    Orientation,
    ShockSolution,
    check_admissibility,
    shock_from_strength,
    strength_from_normal_mach,
    lax_neighborhood_bound,
)

__all__ = [
    "ClosureError",
    "ConstantPiece",
    "ShockPoint",
    "ContactPoint",
    "PMPiece",
    "FlowField",
    "ShockEvent",
    "ContactEvent",
    "PMEvent",
    "Shooting",
    "FlowDescription",
    "SectorDirection",
    "Sector",
    "StructureReport",
    "SBVDecomposition",
    "build_flow",
    "evaluate",
    "sector_decompose",
    "validate_structure",
    "bv_decompose",
    "shock_separation_floor",
]

_MATCH_TOL = 1e-9


class ClosureError(Exception):
    """The marched state fails to meet the anchor after a full turn."""


# --------------------------------------------------------------- pieces


@dataclass(frozen=True)
class ConstantPiece:
    theta_start: float
    theta_end: float
    state: PrimitiveState

    def __post_init__(self):
        if not self.theta_end > self.theta_start:
            raise ValueError("constant piece needs a nonempty interval")


@dataclass(frozen=True)
class ShockPoint:
    theta: float
    solution: ShockSolution


@dataclass(frozen=True)
class ContactPoint:
    theta: float
    left: PrimitiveState
    right: PrimitiveState


@dataclass(frozen=True)
class PMPiece:
    wave: PMWave

    @property
    def theta_start(self):
        return self.wave.theta_start

    @property
    def theta_end(self):
        return self.wave.theta_end


def _piece_angle(piece):
    if isinstance(piece, (ShockPoint, ContactPoint)):
        return piece.theta
    return piece.theta_start


def _left_state(piece, theta):
    """State of an interval piece at an angle, approaching from inside."""
    if isinstance(piece, ConstantPiece):
        return piece.state
    return pm_wave_state(piece.wave, theta)


@dataclass(frozen=True)
class FlowField:
    """Immutable piecewise flow covering one full turn from the anchor.

    pieces holds interval pieces (constants, waves) interleaved with the
    point pieces (shocks, contacts) sitting at their shared boundaries,
    ordered by angle over [anchor_theta, anchor_theta + 2 pi].
    """

    gas: object
    anchor_theta: float
    pieces: tuple

    @cached_property
    def interval_pieces(self):
        return tuple(
            p for p in self.pieces if isinstance(p, (ConstantPiece, PMPiece))
        )

    @cached_property
    def _starts(self):
        return tuple(p.theta_start for p in self.interval_pieces)

    @cached_property
    def jump_points(self):
        return tuple(
            p for p in self.pieces if isinstance(p, (ShockPoint, ContactPoint))
        )

    @cached_property
    def shock_points(self):
        return tuple(p for p in self.pieces if isinstance(p, ShockPoint))

    @cached_property
    def contact_points(self):
        return tuple(p for p in self.pieces if isinstance(p, ContactPoint))

    def local_angle(self, theta):
        """Map any angle into [anchor_theta, anchor_theta + 2 pi)."""
        return self.anchor_theta + wrap_angle(theta - self.anchor_theta)


def evaluate(flow, theta):
    """Primitive state at an angle, right-continuous at every jump."""
    t = flow.local_angle(theta)
    idx = bisect_right(flow._starts, t) - 1
    if idx < 0:
        idx = 0
    piece = flow.interval_pieces[idx]
    if isinstance(piece, ConstantPiece):
        return piece.state
    return pm_wave_state(piece.wave, min(t, piece.theta_end))


def _polar_of(state, theta):
    return to_polar(state.u, state.v, theta)


def _flow_angle_of(state):
    return atan2(state.v, state.u)


def _rel_state_gap(a, b):
    out = 0.0
    for x, y in ((a.rho, b.rho), (a.u, b.u), (a.v, b.v), (a.p, b.p)):
        out = max(out, abs(x - y) / max(1.0, abs(x), abs(y)))
    return out


# ------------------------------------------------------ flow description


@dataclass(frozen=True)
class ShockEvent:
    """One shock, located by exactly one of: angle, strength, or balance.

    With `theta` the strength follows from the marching state's normal
    Mach number there. With `z` the angle is solved for. With
    balance=True the strength is chosen so the pressure returns to the
    anchor value and the angle is solved for that strength. When the
    angle is solved for, L_sign picks which side of the sector turn the
    shock sits on (default: the nearest crossing).
    """

    orientation: Orientation
    theta: float | None = None
    z: float | None = None
    balance: bool = False
    L_sign: float | None = None

    def __post_init__(self):
        modes = (self.theta is not None) + (self.z is not None) + bool(self.balance)
        if modes != 1:
            raise ValueError("shock event needs exactly one of theta, z, balance")


@dataclass(frozen=True)
class ContactEvent:
    rho: float
    L: float


@dataclass(frozen=True)
class PMEvent:
    orientation: Orientation
    theta_end: float
    theta_start: float | None = None
    steps: int | None = None


@dataclass(frozen=True)
class Shooting:
    """One scalar degree of freedom adjusted to close the flow.

    event_index/field name the declared value being varied (a shock
    angle or strength, or a wave end angle); bracket bounds the search.
    """

    event_index: int
    field: str
    bracket: tuple


@dataclass(frozen=True)
class FlowDescription:
    anchor_theta: float
    anchor_state: PrimitiveState
    events: tuple
    shooting: Shooting | None = None


# -------------------------------------------------------------- marching


def _next_angle_with_normal(state, target_N, above, label, L_sign=None):
    """Smallest angle > above where the constant state's N equals target.

    Per turn a constant crosses any reachable N twice, once with L >= 0
    and once with L <= 0; L_sign = +-1 restricts to one branch.
    """
    q = hypot(state.u, state.v)
    phi = atan2(state.v, state.u)
    if abs(target_N) > q:
        raise ValueError(
            "%s: constant state (speed %.6g) never reaches the required "
            "normal velocity %.6g" % (label, q, target_N)
        )
    s = asin(max(-1.0, min(1.0, target_N / q)))
    bases = []
    if L_sign is None or L_sign > 0:
        bases.append(phi + s)
    if L_sign is None or L_sign < 0:
        bases.append(phi + pi - s)
    best = None
    for base in bases:
        cand = base + TWO_PI * ceil((above + 1e-12 - base) / TWO_PI)
        if best is None or cand < best:
            best = cand
    return best


def _march(gas, desc):
    """Resolve all pieces from the anchor; no closure check here."""
    theta0 = desc.anchor_theta
    state = desc.anchor_state
    pieces = []
    cur_start = theta0
    horizon = theta0 + TWO_PI

    def err(idx, msg):
        return ValueError("piece %d: %s" % (idx, msg))

    def check_phase(idx, s, what):
        rep = in_phase_space(s, gas)
        if not rep.ok:
            raise err(idx, what + " leaves phase space: " + "; ".join(rep.violations))

    check_phase(-1, state, "anchor state")

    for idx, ev in enumerate(desc.events):
        if isinstance(ev, ShockEvent):
            c_cur = state.sound_speed(gas)
            sign = ev.orientation.sign
            g = gas.gamma
            if ev.theta is not None:
                theta_s = ev.theta
                if not theta_s > cur_start:
                    raise err(idx, "event angle does not advance the march")
                N_cur, L_cur = _polar_of(state, theta_s)
                mach = sign * N_cur / c_cur
                try:
                    if ev.orientation is Orientation.FORWARD:
                        # marching side is the back of a forward shock
                        z = strength_from_normal_mach(mach, g, "back")
                    else:
                        z = strength_from_normal_mach(mach, g, "front")
                except ValueError as e:
                    raise err(idx, str(e))
            else:
                if ev.balance:
                    if ev.orientation is Orientation.FORWARD:
                        z = state.p / desc.anchor_state.p - 1.0
                    else:
                        z = desc.anchor_state.p / state.p - 1.0
                    if not z > 0.0:
                        raise err(
                            idx,
                            "balance shock would need nonpositive strength %.6g" % z,
                        )
                else:
                    z = ev.z
                    if not z > 0.0:
                        raise err(idx, "declared shock strength must be positive")
                rp = 1.0 + z * (g + 1.0) / (2.0 * g)
                if ev.orientation is Orientation.FORWARD:
                    # marching state is the back side: |N| = c sqrt(rm/(1+z))
                    rm = 1.0 + z * (g - 1.0) / (2.0 * g)
                    target = c_cur * sqrt(rm / (1.0 + z))
                else:
                    # marching state is the front side: N = -c sqrt(rp)
                    target = -c_cur * sqrt(rp)
                theta_s = _next_angle_with_normal(
                    state, target, cur_start, "piece %d" % idx, L_sign=ev.L_sign
                )
                N_cur, L_cur = _polar_of(state, theta_s)

            if theta_s >= horizon - 1e-12:
                raise err(idx, "event angle passes the closure seam")

            if ev.orientation is Orientation.FORWARD:
                # current state is the downstream (back) side; rebuild the
                # front from the closed forms and let the constructor verify
                rp = 1.0 + z * (g + 1.0) / (2.0 * g)
                rm = 1.0 + z * (g - 1.0) / (2.0 * g)
                rho_f = state.rho * rm / rp
                p_f = state.p / (1.0 + z)
                upstream_seed = PolarState(
                    theta=theta_s, N=0.0, L=L_cur, rho=rho_f, p=p_f
                )
                try:
                    sol = shock_from_strength(upstream_seed, z, ev.orientation, gas)
                except ValueError as e:
                    raise err(idx, str(e))
                got_back = sol.downstream.to_primitive()
                if _rel_state_gap(got_back, state) > 1e-8:
                    raise err(idx, "shock does not match the marching state")
                new_state = sol.upstream.to_primitive()
            else:
                upstream_seed = PolarState(
                    theta=theta_s, N=0.0, L=L_cur, rho=state.rho, p=state.p
                )
                try:
                    sol = shock_from_strength(upstream_seed, z, ev.orientation, gas)
                except ValueError as e:
                    raise err(idx, str(e))
                if abs(sol.upstream.N - N_cur) > 1e-8 * max(1.0, abs(N_cur)):
                    raise err(idx, "shock does not match the marching state")
                new_state = sol.downstream.to_primitive()

            pieces.append(ConstantPiece(cur_start, theta_s, state))
            pieces.append(ShockPoint(theta_s, sol))
            check_phase(idx, new_state, "post-shock state")
            state = new_state
            cur_start = theta_s

        elif isinstance(ev, ContactEvent):
            theta_c = _next_angle_with_normal(state, 0.0, cur_start, "piece %d" % idx)
            if theta_c >= horizon - 1e-12:
                raise err(idx, "contact angle passes the closure seam")
            _, L_left = _polar_of(state, theta_c)
            if abs(ev.L) <= 0.0 or not ev.rho > 0.0:
                raise err(idx, "contact needs positive density and moving gas")
            jump = max(
                abs(ev.rho - state.rho) / max(1.0, state.rho, ev.rho),
                abs(ev.L - L_left) / max(1.0, abs(L_left), abs(ev.L)),
            )
            if jump <= 1e-9:
                raise err(
                    idx,
                    "a trivial contact must jump in density or tangential velocity",
                )
            u_new, v_new = from_polar(0.0, ev.L, theta_c)
            new_state = PrimitiveState(rho=ev.rho, u=u_new, v=v_new, p=state.p)
            check_phase(idx, new_state, "post-contact state")
            pieces.append(ConstantPiece(cur_start, theta_c, state))
            pieces.append(ContactPoint(theta_c, state, new_state))
            state = new_state
            cur_start = theta_c

        elif isinstance(ev, PMEvent):
            sign = ev.orientation.sign
            c_cur = state.sound_speed(gas)
            if ev.theta_start is not None:
                a = ev.theta_start
                if a < cur_start - 1e-12:
                    raise err(idx, "wave start angle precedes the march")
            else:
                N_now, _ = _polar_of(state, cur_start)
                if abs(N_now - sign * c_cur) <= 1e-9 * c_cur:
                    a = cur_start
                else:
                    a = _next_angle_with_normal(
                        state, sign * c_cur, cur_start, "piece %d" % idx
                    )
            if not ev.theta_end > a:
                raise err(idx, "wave needs a nonempty interval")
            if ev.theta_end >= horizon - 1e-12:
                raise err(idx, "wave end passes the closure seam")
            try:
                wave = integrate_pm(
                    state, a, ev.theta_end, ev.orientation, gas, steps=ev.steps
                )
            except ValueError as e:
                raise err(idx, str(e))
            if a > cur_start + 1e-12:
                pieces.append(ConstantPiece(cur_start, a, state))
            pieces.append(PMPiece(wave))
            state = wave.end_state()
            check_phase(idx, state, "wave end state")
            cur_start = ev.theta_end

        else:
            raise err(idx, "unknown event type %r" % (ev,))

    if cur_start >= horizon - 1e-12:
        raise ValueError("events fill the whole circle, leaving no closure seam")
    pieces.append(ConstantPiece(cur_start, horizon, state))
    return pieces, state


def _closure_gap(desc, final_state):
    return _rel_state_gap(final_state, desc.anchor_state)


def _angle_mismatch(desc, final_state):
    return wrap_signed(_flow_angle_of(final_state) - _flow_angle_of(desc.anchor_state))


def _with_param(desc, value):
    sh = desc.shooting
    ev = desc.events[sh.event_index]
    events = list(desc.events)
    events[sh.event_index] = replace(ev, **{sh.field: value})
    return replace(desc, events=tuple(events), shooting=None)


def build_flow(gas, desc):
    """Build a closed flow from a description, shooting if one is declared.

    The shooting variable is adjusted by scalar root finding on the
    flow-angle mismatch at the seam (the remaining closure components are
    matched structurally by the description: a balance shock for pressure
    and the final contact data for density and tangential velocity).
    """
    if desc.shooting is None:
        pieces, final = _march(gas, desc)
        gap = _closure_gap(desc, final)
        if gap > _MATCH_TOL:
            raise ClosureError(
                "flow does not close up around the circle (residual %.3e)" % gap
            )
        return _assemble(gas, desc, pieces)

    lo, hi = desc.shooting.bracket

    def mismatch(x):
        _, final = _march(gas, _with_param(desc, x))
        return _angle_mismatch(desc, final)

    # bracket scan: the mismatch may be undefined on parts of the interval
    n_scan = 65
    xs = [lo + (hi - lo) * k / (n_scan - 1) for k in range(n_scan)]
    vals = []
    for x in xs:
        try:
            vals.append(mismatch(x))
        except (ValueError, ClosureError):
            vals.append(None)

    root = None
    for x, fx in zip(xs, vals):
        if fx is not None and fx == 0.0:
            root = x
            break
    if root is None:
        from scipy.optimize import brentq

        for k in range(n_scan - 1):
            fa, fb = vals[k], vals[k + 1]
            if fa is None or fb is None or fa * fb > 0.0:
                continue
            root = brentq(mismatch, xs[k], xs[k + 1], xtol=1e-13, rtol=8.9e-16)
            break
    if root is None:
        raise ClosureError(
            "flow does not close up around the circle "
            "(no sign change of the seam mismatch inside the shooting bracket)"
        )

    resolved = _with_param(desc, root)
    pieces, final = _march(gas, resolved)
    gap = _closure_gap(resolved, final)
    if gap > _MATCH_TOL:
        raise ClosureError(
            "flow does not close up around the circle (residual %.3e after shooting)"
            % gap
        )
    return _assemble(gas, resolved, pieces)


def _assemble(gas, desc, pieces):
    flow = FlowField(gas=gas, anchor_theta=desc.anchor_theta, pieces=tuple(pieces))
    _validate_flow(flow)
    return flow


def _validate_flow(flow):
    """Tiling, endpoint matching and periodicity of a finished flow."""
    intervals = flow.interval_pieces
    if not intervals:
        raise ValueError("flow has no interval pieces")
    t = flow.anchor_theta
    for p in intervals:
        if abs(p.theta_start - t) > 1e-12:
            raise ValueError("pieces do not tile the circle")
        t = p.theta_end
    if abs(t - (flow.anchor_theta + TWO_PI)) > 1e-12:
        raise ValueError("pieces do not tile the circle")

    jump_angles = {p.theta for p in flow.jump_points}
    for a, b in zip(intervals, intervals[1:]):
        boundary = a.theta_end
        la = _left_state(a, boundary)
        rb = _left_state(b, boundary) if isinstance(b, PMPiece) else b.state
        if boundary in jump_angles:
            continue
        if _rel_state_gap(la, rb) > 1e-8:
            raise ValueError(
                "adjacent pieces disagree at their shared angle %.12g" % boundary
            )

    first = intervals[0]
    last = intervals[-1]
    start_state = (
        first.state
        if isinstance(first, ConstantPiece)
        else _left_state(first, first.theta_start)
    )
    end_state = _left_state(last, last.theta_end)
    seam_jump = any(
        abs(p.theta - flow.anchor_theta) < 1e-11
        or abs(p.theta - (flow.anchor_theta + TWO_PI)) < 1e-11
        for p in flow.jump_points
    )
    if not seam_jump and _rel_state_gap(start_state, end_state) > _MATCH_TOL:
        raise ValueError("flow is not periodic at the seam")


# --------------------------------------------------------------- sectors


class SectorDirection(enum.Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


@dataclass(frozen=True)
class Sector:
    """Interval between consecutive contacts, with its tangential turn."""

    theta_start: float
    theta_end: float
    direction: SectorDirection
    theta_bar: float


def _L_at(flow, theta):
    s = evaluate(flow, theta)
    return to_polar(s.u, s.v, theta)[1]


def _N_at(flow, theta):
    s = evaluate(flow, theta)
    return to_polar(s.u, s.v, theta)[0]


def sector_decompose(flow, samples=720):
    """Split the circle at contacts and classify each sector.

    Also enforces the structural facts the decomposition relies on: a
    consistent normal sign inside each sector, the entry and exit signs
    of L, and the hard cap of three sectors.
    """
    contacts = flow.contact_points
    if contacts:
        boundaries = sorted(p.theta for p in contacts)
    else:
        if len(flow.interval_pieces) > 1 or not isinstance(
            flow.interval_pieces[0], ConstantPiece
        ):
            raise ValueError("flow without contacts must be a single constant")
        s = flow.interval_pieces[0].state
        phi = atan2(s.v, s.u)
        base = flow.anchor_theta
        b1 = base + wrap_angle(phi - base)
        b2 = base + wrap_angle(phi + pi - base)
        boundaries = sorted((b1, b2))

    if len(boundaries) > 3:
        raise ValueError(
            "%d contacts violates maximum-sector theorem" % len(boundaries)
        )

    eps = 1e-7
    sectors = []
    for k, a in enumerate(boundaries):
        b = boundaries[(k + 1) % len(boundaries)]
        if b <= a:
            b += TWO_PI
        n_probe = max(16, int(samples * (b - a) / TWO_PI))
        sign = None
        for j in range(1, n_probe):
            t = a + (b - a) * j / n_probe
            N = _N_at(flow, t)
            if abs(N) <= 1e-12:
                continue
            if sign is None:
                sign = 1.0 if N > 0.0 else -1.0
            elif N * sign < 0.0:
                raise ValueError("sector with sign-inconsistent N")
        if sign is None:
            raise ValueError("sector with vanishing N throughout")
        direction = SectorDirection.FORWARD if sign > 0 else SectorDirection.BACKWARD

        L_in = _L_at(flow, a + eps)
        L_out = _L_at(flow, b - eps)
        if direction is SectorDirection.FORWARD:
            if not (L_in > 0.0 > L_out):
                raise ValueError("forward sector tangential signs are wrong")
        else:
            if not (L_in < 0.0 < L_out):
                raise ValueError("backward sector tangential signs are wrong")

        # L is monotone and continuous inside the sector: bisect its zero
        lo_t, hi_t = a + eps, b - eps
        flo = L_in
        for _ in range(200):
            if hi_t - lo_t <= 1e-13:
                break
            mid = 0.5 * (lo_t + hi_t)
            fm = _L_at(flow, mid)
            if fm == 0.0:
                lo_t = hi_t = mid
                break
            if (fm > 0.0) == (flo > 0.0):
                lo_t, flo = mid, fm
            else:
                hi_t = mid
        theta_bar = 0.5 * (lo_t + hi_t)
        sectors.append(
            Sector(theta_start=a, theta_end=b, direction=direction, theta_bar=theta_bar)
        )
    return sectors


def shock_separation_floor(gas):
    """Least angular distance between forward and backward shocks.

    N transitions through zero between opposite-facing shocks, and the
    distance from any N-zero to a shock is at least
    c_min rho_min / (2 rho_max speed_max); the pair bound is twice that.
    """
    b = gas.bounds
    return gas.c_min * b.rho_min / (b.rho_max * b.speed_max)


# ------------------------------------------------------------- structure


@dataclass(frozen=True)
class StructureReport:
    checks: tuple

    @property
    def ok(self):
        return all(passed for _, passed, _ in self.checks)

    def named(self, name):
        for n, passed, detail in self.checks:
            if n == name:
                return passed, detail
        raise KeyError(name)


def _pieces_in(flow, a, b):
    """Pieces intersecting the unwrapped interval [a, b].

    b may exceed anchor_theta + 2 pi; pieces reached through the seam come
    back with the matching shift. Entries are (sort angle, piece, shift).
    """
    out = []
    for shift in (0.0, TWO_PI):
        for p in flow.pieces:
            if isinstance(p, (ShockPoint, ContactPoint)):
                t = _piece_angle(p) + shift
                if a + 1e-12 < t < b - 1e-12:
                    out.append((t, p, shift))
            else:
                s, e = p.theta_start + shift, p.theta_end + shift
                if e > a + 1e-12 and s < b - 1e-12:
                    out.append((max(s, a), p, shift))
    out.sort(key=lambda q: q[0])
    return out


def _conserved_jump(flow, point):
    if isinstance(point, ShockPoint):
        left = point.solution.left_state().to_primitive()
        right = point.solution.right_state().to_primitive()
    else:
        left, right = point.left, point.right
    ul = primitive_to_conserved(left, flow.gas).as_tuple()
    ur = primitive_to_conserved(right, flow.gas).as_tuple()
    return tuple(r - l for l, r in zip(ul, ur))


def _jump_norm(flow, point):
    return sqrt(sum(d * d for d in _conserved_jump(flow, point)))


def _constant_width_around(flow, theta, side):
    """Width of the constant piece touching theta from one side.

    A constant that straddles the closure seam is stored as two pieces;
    the builder never places a jump at the seam, so their widths merge.
    """
    intervals = flow.interval_pieces
    t = flow.local_angle(theta)

    def seam_extension(direction):
        edge = intervals[0] if direction == "down" else intervals[-1]
        other = intervals[-1] if direction == "down" else intervals[0]
        if (
            isinstance(edge, ConstantPiece)
            and isinstance(other, ConstantPiece)
            and _rel_state_gap(edge.state, other.state) <= 1e-9
        ):
            return other.theta_end - other.theta_start
        return 0.0

    if side == "right":
        for p in intervals:
            if abs(p.theta_start - t) < 1e-11:
                if not isinstance(p, ConstantPiece):
                    return 0.0
                width = p.theta_end - p.theta_start
                if p is intervals[-1]:
                    width += seam_extension("up")
                return width
        return 0.0
    for p in intervals:
        if abs(p.theta_end - t) < 1e-11:
            if not isinstance(p, ConstantPiece):
                return 0.0
            width = p.theta_end - p.theta_start
            if p is intervals[0]:
                width += seam_extension("down")
            return width
    return 0.0


def _piece_turning(flow, a, b):
    """Signed flow-angle change accumulated from a to b along theta.

    Constants contribute nothing, jumps their deflection, smooth waves the
    flow-angle difference between their clipped endpoints.
    """
    total = 0.0
    for _, p, shift in _pieces_in(flow, a, b):
        if isinstance(p, (ShockPoint, ContactPoint)):
            if isinstance(p, ShockPoint):
                left = p.solution.left_state().to_primitive()
                right = p.solution.right_state().to_primitive()
            else:
                left, right = p.left, p.right
            total += wrap_signed(_flow_angle_of(right) - _flow_angle_of(left))
        elif isinstance(p, PMPiece):
            w = p.wave
            lo = max(w.theta_start, a - shift)
            hi = min(w.theta_end, b - shift)
            s_lo = pm_wave_state(w, lo)
            s_hi = pm_wave_state(w, hi)
            total += wrap_signed(_flow_angle_of(s_hi) - _flow_angle_of(s_lo))
    return total


def validate_structure(flow):
    """Report-valued checks of the structural theorems on a built flow."""
    gas = flow.gas
    checks = []

    # (1) constant neighborhoods around every shock, width >= delta_L * J
    delta_L = lax_neighborhood_bound(gas)
    worst = None
    ok1 = True
    for sp in flow.shock_points:
        J = _jump_norm(flow, sp)
        need = delta_L * J
        wl = _constant_width_around(flow, sp.theta, "left")
        wr = _constant_width_around(flow, sp.theta, "right")
        margin = min(wl, wr) - need
        if worst is None or margin < worst:
            worst = margin
        if margin < 0.0:
            ok1 = False
    checks.append(("shock neighborhoods", ok1, worst if worst is not None else 0.0))

    sectors = sector_decompose(flow)

    # split each sector at theta_bar into its L>0 and L<0 parts
    def region(sec, positive):
        if sec.direction is SectorDirection.FORWARD:
            return (sec.theta_start, sec.theta_bar) if positive else (
                sec.theta_bar, sec.theta_end
            )
        return (sec.theta_bar, sec.theta_end) if positive else (
            sec.theta_start, sec.theta_bar
        )

    # (2) no two compression waves without a shock between (L<0 side)
    ok2 = True
    detail2 = ""
    for sec in sectors:
        a, b = region(sec, positive=False)
        seen_wave = False
        for _, p, shift in _pieces_in(flow, a, b):
            if isinstance(p, ShockPoint):
                seen_wave = False
            elif isinstance(p, PMPiece):
                try:
                    kind = classify_pm(p.wave, sec.theta_bar - shift, tol=1e-6)
                except ValueError as e:
                    ok2 = False
                    detail2 = str(e)
                    continue
                if kind is WaveKind.COMPRESSION:
                    if seen_wave:
                        ok2 = False
                        detail2 = "two compression waves share a continuous stretch"
                    seen_wave = True
    checks.append(("single compression per stretch", ok2, detail2))

    # (3) the L>0 part realizes one of the five admitted shapes
    ok3 = True
    detail3 = ""
    for sec in sectors:
        a, b = region(sec, positive=True)
        feats = [
            (t, p, shift)
            for t, p, shift in _pieces_in(flow, a, b)
            if isinstance(p, (ShockPoint, PMPiece))
        ]
        label = None
        if not feats:
            label = "constant"
        elif len(feats) == 1:
            t, p, shift = feats[0]
            if isinstance(p, ShockPoint):
                if abs(p.solution.upstream.L) <= 1e-6 and abs(t - sec.theta_bar) <= 1e-6:
                    label = "normal shock at the turn"
                else:
                    label = "one shock"
            else:
                try:
                    kind = classify_pm(p.wave, sec.theta_bar - shift, tol=1e-6)
                except ValueError:
                    kind = None
                if kind is WaveKind.EXPANSION:
                    if sec.direction is SectorDirection.FORWARD:
                        edge = abs(p.theta_end + shift - sec.theta_bar) <= 1e-6
                    else:
                        edge = abs(p.theta_start + shift - sec.theta_bar) <= 1e-6
                    label = "expansion to the turn" if edge else "one expansion"
        if label is None:
            ok3 = False
            detail3 = "inflow region fails the five-case classification"
    checks.append(("inflow region shape", ok3, detail3))

    # (4) forward/backward shock separation
    floor = shock_separation_floor(gas)
    fwd = [p.theta for p in flow.shock_points if p.solution.orientation is Orientation.FORWARD]
    bwd = [p.theta for p in flow.shock_points if p.solution.orientation is Orientation.BACKWARD]
    sep_margin = None
    ok4 = True
    for tf in fwd:
        for tb in bwd:
            d = abs(wrap_signed(tf - tb))
            m = d - floor
            if sep_margin is None or m < sep_margin:
                sep_margin = m
            if m < 0.0:
                ok4 = False
    checks.append(("opposite shock separation", ok4, sep_margin if sep_margin is not None else float("inf")))

    # (5) admissibility at every shock
    ok5 = True
    detail5 = ""
    for sp in flow.shock_points:
        rep = check_admissibility(sp.solution, gas)
        if not rep.ok:
            ok5 = False
            detail5 = "shock at %.6g fails: %s" % (sp.theta, rep.first_failure())
    checks.append(("shock admissibility", ok5, detail5))

    # (6) turning bookkeeping per sector
    ok6 = True
    worst6 = 0.0
    for sec in sectors:
        T = _piece_turning(flow, sec.theta_start, sec.theta_end)
        expect = (sec.theta_end - sec.theta_start) - pi
        gap = abs(T - expect)
        worst6 = max(worst6, gap)
        if gap > 1e-6:
            ok6 = False
    checks.append(("sector turning", ok6, worst6))

    return StructureReport(checks=tuple(checks))


# ------------------------------------------------------------------- SBV


@dataclass(frozen=True)
class SBVDecomposition:
    """Split of the flow into a saltus part and a Lipschitz remainder."""

    jump_part: tuple
    lipschitz_part: tuple
    total_variation: float
    tv_lipschitz: float
    lipschitz_constant: float


def bv_decompose(flow, samples=720):
    """Cumulative-jump decomposition U = U_L + U_S sampled on the circle."""
    jumps = sorted(
        ((flow.local_angle(p.theta), _conserved_jump(flow, p)) for p in flow.jump_points),
        key=lambda q: q[0],
    )
    tv_jump = sum(sqrt(sum(d * d for d in dU)) for _, dU in jumps)

    def saltus(theta):
        out = [0.0, 0.0, 0.0, 0.0]
        for a, dU in jumps:
            if a <= theta:
                for i in range(4):
                    out[i] += dU[i]
        return out

    base = flow.anchor_theta
    ts = [base + TWO_PI * k / samples for k in range(samples + 1)]
    lipschitz = []
    for t in ts:
        U = primitive_to_conserved(evaluate(flow, t), flow.gas).as_tuple()
        S = saltus(t if t < base + TWO_PI else base + TWO_PI)
        lipschitz.append((t, tuple(U[i] - S[i] for i in range(4))))

    tv_l = 0.0
    lip = 0.0
    for (t0, a), (t1, b) in zip(lipschitz, lipschitz[1:]):
        step = sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))
        tv_l += step
        if t1 > t0:
            lip = max(lip, step / (t1 - t0))

    return SBVDecomposition(
        jump_part=tuple(jumps),
        lipschitz_part=tuple(lipschitz),
        total_variation=tv_jump,
        tv_lipschitz=tv_l,
        lipschitz_constant=lip,
    )
