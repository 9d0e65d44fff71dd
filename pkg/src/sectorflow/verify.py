"""Quadrature checks of the integrated balance laws on a built flow.

Everything here rests on one identity: along the circle of directions the
normal flux G(theta) = sin(theta) f^x(U) - cos(theta) f^y(U) is an exact
antiderivative of the tangential flux H(theta) = cos(theta) f^x + sin(theta)
f^y, in the distributional sense. Smooth pieces satisfy it pointwise, jumps
satisfy it through flux continuity, so the boundary-minus-integral residual

    G(theta2) - G(theta1) - integral of H

vanishes on every subinterval of a genuine flow. The entropy analogue
replaces the fluxes by the pair (rho N s, rho L s) built on the surrogate
s = p / rho^gamma; there the residual need not vanish, but its sign is
constrained: shocks produce entropy, so the production integral must be
nonnegative.

Quadrature is composite Gauss-Legendre. Panels are split at every piece
boundary and at every stored wave sample, so each panel's integrand is
analytic and discontinuities only ever sit on panel edges, never inside.
"""

from dataclasses import dataclass
from math import ceil, cos, sin, sqrt

import numpy as np

from .flowfield import (
    ConstantPiece,
    PMPiece,
    evaluate,
    sector_decompose,
    validate_structure,
)
from .gas import physical_fluxes
from .polar import TWO_PI, to_polar, wrap_angle
from .shock import check_admissibility

_WEAK_TOL = 1e-10
_ENTROPY_TOL = 1e-10
_SMOOTH_TOL = 1e-6


def _eval_periodic(flow, theta):
    return evaluate(flow, flow.anchor_theta + wrap_angle(theta - flow.anchor_theta))


def _normal_flux(flow, theta):
    s = _eval_periodic(flow, theta)
    fx, fy = physical_fluxes(s, flow.gas)
    st, ct = sin(theta), cos(theta)
    return tuple(st * x - ct * y for x, y in zip(fx, fy))


def _tangential_flux(flow, theta):
    s = _eval_periodic(flow, theta)
    fx, fy = physical_fluxes(s, flow.gas)
    st, ct = sin(theta), cos(theta)
    return tuple(ct * x + st * y for x, y in zip(fx, fy))


def _entropy_normal(flow, theta):
    s = _eval_periodic(flow, theta)
    N, _ = to_polar(s.u, s.v, theta)
    return s.rho * N * s.entropy_indicator(flow.gas)


def _entropy_tangential(flow, theta):
    s = _eval_periodic(flow, theta)
    _, L = to_polar(s.u, s.v, theta)
    return s.rho * L * s.entropy_indicator(flow.gas)


def _split_points(flow, t1, t2):
    """All internal panel edges in (t1, t2): piece boundaries, wave samples."""
    pts = []
    for shift in (-TWO_PI, 0.0, TWO_PI):
        for p in flow.interval_pieces:
            for t in (p.theta_start, p.theta_end):
                t += shift
                if t1 + 1e-13 < t < t2 - 1e-13:
                    pts.append(t)
            if isinstance(p, PMPiece):
                for t in p.wave.thetas:
                    t += shift
                    if t1 + 1e-13 < t < t2 - 1e-13:
                        pts.append(t)
    pts.sort()
    dedup = []
    for t in pts:
        if not dedup or t - dedup[-1] > 1e-13:
            dedup.append(t)
    return dedup


_MAX_PANEL = 0.25


def _panels(flow, t1, t2, subdiv):
    edges = [t1] + _split_points(flow, t1, t2) + [t2]
    out = []
    for a, b in zip(edges, edges[1:]):
        n = max(1, int(ceil((b - a) / _MAX_PANEL))) * max(1, subdiv)
        for k in range(n):
            out.append((a + (b - a) * k / n, a + (b - a) * (k + 1) / n))
    return out


def _quadrature(flow, t1, t2, integrand, quad_points, subdiv):
    nodes, weights = np.polynomial.legendre.leggauss(quad_points)
    total = None
    scale = 0.0
    for a, b in _panels(flow, t1, t2, subdiv):
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        for x, w in zip(nodes, weights):
            val = integrand(flow, mid + half * x)
            if isinstance(val, tuple):
                if total is None:
                    total = [0.0, 0.0, 0.0, 0.0]
                for i in range(4):
                    total[i] += half * w * val[i]
                scale = max(scale, max(abs(v) for v in val))
            else:
                if total is None:
                    total = 0.0
                total += half * w * val
                scale = max(scale, abs(val))
    return total, scale


def weak_residual(flow, theta1, theta2, quad_points=8, subdiv=1):
    """Boundary term minus quadrature of the integrated balance identity.

    Returns the raw componentwise residual (rho, momentum x, momentum y,
    energy). subdiv multiplies the panel count; the default panels are
    already split so that every integrand is analytic, which makes the
    returned value quadrature-floor small for valid flows.
    """
    t1 = flow.local_angle(theta1)
    t2 = t1 + (theta2 - theta1)
    if not theta2 > theta1:
        raise ValueError("weak residual needs an increasing interval")
    g1 = _normal_flux(flow, t1)
    g2 = _normal_flux(flow, t2)
    integral, _ = _quadrature(flow, t1, t2, _tangential_flux, quad_points, subdiv)
    return tuple(b - a - q for a, b, q in zip(g1, g2, integral))


def _weak_scaled(flow, t1, t2, quad_points):
    g1 = _normal_flux(flow, t1)
    g2 = _normal_flux(flow, t2)
    integral, hscale = _quadrature(flow, t1, t2, _tangential_flux, quad_points, 1)
    res = tuple(b - a - q for a, b, q in zip(g1, g2, integral))
    scale = max(1.0, hscale, max(abs(x) for x in g1), max(abs(x) for x in g2))
    return tuple(abs(r) / scale for r in res)


def entropy_residual(flow, theta1, theta2, quad_points=8, subdiv=1):
    """Entropy production over the interval; nonnegative on admissible flows.

    Production is the integral of the tangential entropy flux minus the
    change in the normal one, which vanishes on smooth pieces and across
    contacts and equals |mass flux| (s_back - s_front) > 0 at every
    admissible shock.
    """
    t1 = flow.local_angle(theta1)
    t2 = t1 + (theta2 - theta1)
    if not theta2 > theta1:
        raise ValueError("entropy residual needs an increasing interval")
    g1 = _entropy_normal(flow, t1)
    g2 = _entropy_normal(flow, t2)
    integral, _ = _quadrature(flow, t1, t2, _entropy_tangential, quad_points, subdiv)
    return integral - (g2 - g1)


def _entropy_scaled(flow, t1, t2, quad_points):
    g1 = _entropy_normal(flow, t1)
    g2 = _entropy_normal(flow, t2)
    integral, hscale = _quadrature(flow, t1, t2, _entropy_tangential, quad_points, 1)
    scale = max(1.0, hscale, abs(g1), abs(g2))
    return (integral - (g2 - g1)) / scale


def _polar_flux_vector(flow, theta):
    s = _eval_periodic(flow, theta)
    N, L = to_polar(s.u, s.v, theta)
    E = s.total_energy(flow.gas)
    return (
        s.rho * N,
        s.rho * N * N + s.p,
        s.rho * L * N,
        N * (E + s.p),
    ), (
        s.rho * L,
        2.0 * s.rho * N * L,
        s.rho * (L * L - N * N),
        L * (E + s.p),
    )


def smooth_residual(flow, samples=720, h=1e-5):
    """Scaled central-difference residual of the polar system on smooth pieces.

    Samples sit strictly inside constant and wave pieces (never within 2h
    of an edge), so no difference stencil ever crosses a discontinuity.
    Each equation is scaled by the larger of 1 and its own terms.
    """
    worst = [0.0, 0.0, 0.0, 0.0]
    for piece in flow.interval_pieces:
        if not isinstance(piece, (ConstantPiece, PMPiece)):
            continue
        lo, hi = piece.theta_start, piece.theta_end
        width = hi - lo
        if width <= 6.0 * h:
            continue
        n = max(3, int(samples * width / TWO_PI))
        for k in range(n):
            t = lo + 2.0 * h + (width - 4.0 * h) * (k + 0.5) / n
            gp, _ = _polar_flux_vector(flow, t + h)
            gm, _ = _polar_flux_vector(flow, t - h)
            _, rhs = _polar_flux_vector(flow, t)
            for i in range(4):
                fd = (gp[i] - gm[i]) / (2.0 * h)
                scale = max(1.0, abs(fd), abs(rhs[i]))
                worst[i] = max(worst[i], abs(fd - rhs[i]) / scale)
    return tuple(worst)


@dataclass(frozen=True)
class AuditReport:
    """Aggregated verification results for one flow.

    Residual maxima are scale-normalized (per interval, per component), so
    the tolerances mean the same thing for flows of any magnitude.
    """

    weak_residual_max: tuple
    entropy_min: float
    entropy_violations: tuple
    smooth_residual_max: tuple
    admissibility: tuple
    structure: object
    sector_count: int

    @property
    def ok(self):
        return (
            max(self.weak_residual_max) <= _WEAK_TOL
            and not self.entropy_violations
            and max(self.smooth_residual_max) <= _SMOOTH_TOL
            and all(ok for _, _, ok, _ in self.admissibility)
            and self.structure.ok
            and self.sector_count <= 3
        )

    @property
    def verdict(self):
        return "pass" if self.ok else "fail"


def _audit_intervals(flow):
    """Covering family: piece interiors plus midpoint-to-midpoint spans.

    Consecutive midpoints straddle exactly one piece boundary each, so
    every jump gets an interval that crosses it and nothing else; the
    wrap-around pair crosses the seam.
    """
    pieces = flow.interval_pieces
    mids = [0.5 * (p.theta_start + p.theta_end) for p in pieces]
    intervals = []
    for p in pieces:
        w = p.theta_end - p.theta_start
        intervals.append((p.theta_start + 0.05 * w, p.theta_end - 0.05 * w))
    for a, b in zip(mids, mids[1:]):
        intervals.append((a, b))
    intervals.append((mids[-1], mids[0] + TWO_PI))
    intervals.append((flow.anchor_theta, flow.anchor_theta + TWO_PI))
    return intervals


def full_audit(flow, quad_points=8, samples=720):
    """Run every check on the flow and aggregate a verdict."""
    weak_max = [0.0, 0.0, 0.0, 0.0]
    entropy_min = float("inf")
    violations = []
    for t1, t2 in _audit_intervals(flow):
        res = _weak_scaled(flow, t1, t2, quad_points)
        for i in range(4):
            weak_max[i] = max(weak_max[i], res[i])
        prod = _entropy_scaled(flow, t1, t2, quad_points)
        entropy_min = min(entropy_min, prod)
        if prod < -_ENTROPY_TOL:
            violations.append(((t1, t2), prod))

    smooth = smooth_residual(flow, samples=samples)

    admissibility = []
    for sp in flow.shock_points:
        rep = check_admissibility(sp.solution, flow.gas)
        detail = "" if rep.ok else rep.first_failure()
        admissibility.append((sp.theta, "shock", rep.ok, detail))
    for cp in flow.contact_points:
        Nl, _ = to_polar(cp.left.u, cp.left.v, cp.theta)
        Nr, _ = to_polar(cp.right.u, cp.right.v, cp.theta)
        cscale = max(
            sqrt(cp.left.u ** 2 + cp.left.v ** 2), cp.left.sound_speed(flow.gas)
        )
        good = (
            abs(Nl) <= 1e-9 * cscale
            and abs(Nr) <= 1e-9 * cscale
            and abs(cp.right.p - cp.left.p) <= 1e-12 * max(1.0, cp.left.p)
        )
        detail = "" if good else "contact jumps pressure or normal velocity"
        admissibility.append((cp.theta, "contact", good, detail))

    structure = validate_structure(flow)
    sector_count = len(sector_decompose(flow))

    return AuditReport(
        weak_residual_max=tuple(weak_max),
        entropy_min=entropy_min,
        entropy_violations=tuple(violations),
        smooth_residual_max=smooth,
        admissibility=tuple(admissibility),
        structure=structure,
        sector_count=sector_count,
    )
