"""Command-line front end: configs in, flows and audit artifacts out.

One JSON document describes a flow (gas, anchor state, ordered pieces,
optional shooting block); the subcommands build it, audit it, decompose
it, or export it. Solver utilities (oblique-shock inversion, wave
tracing, turning limits) run from plain flags without a config.

Exit codes are a contract: 0 success, 1 a built flow failed its audit
or a solver hit the detached regime, 2 the flow could not be
constructed or closed, 3 the config or flags were malformed.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass
from math import asin, atan2, cos, degrees, pi, radians, sin

from .flowfield import (
    ClosureError,
    ConstantPiece,
    ContactEvent,
    FlowDescription,
    PMEvent,
    PMPiece,
    ShockEvent,
    Shooting,
    bv_decompose,
    build_flow,
    evaluate,
    sector_decompose,
)
from .gas import PhaseBounds, PrimitiveState, make_gas
from .pmwave import integrate_pm, pm_wave_state
from .polar import TWO_PI, flow_angle, to_polar
from .shock import (
    Orientation,
    max_deflection,
    max_deflection_limit,
    solve_shock_angle,
)
from .verify import full_audit

DEFAULT_SAMPLES = 720
DEFAULT_PM_STEPS_PER_RADIAN = 64
DEFAULT_QUAD_POINTS = 8
KNOWN_FORMATS = ("csv", "json", "svg")

CSV_COLUMNS = "theta,rho,u,v,p,N,L,c,mach_n,s,phi"


class ConfigError(Exception):
    """Schema or flag violation; the message starts with the bad key's path."""

    def __init__(self, path, message):
        self.path = path
        super().__init__("%s: %s" % (path, message) if path else message)


class BuildError(Exception):
    """The description was well-formed but no flow could be marched from it."""


# --------------------------------------------------------------- parsing


def _mapping(value, path):
    if not isinstance(value, dict):
        raise ConfigError(path, "expected an object")
    return value


def _check_keys(doc, path, required, optional=()):
    for key in doc:
        if key not in required and key not in optional:
            raise ConfigError(_join(path, key), "unknown key")
    for key in required:
        if key not in doc:
            raise ConfigError(_join(path, key), "missing required key")


def _join(path, key):
    return "%s.%s" % (path, key) if path else key


def _number(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, "expected a number")
    return float(value)


def _angle(value, path):
    """Radians, or a string like "45deg"; normalized into [0, 2pi)."""
    if isinstance(value, str):
        text = value.strip()
        if not text.endswith("deg"):
            raise ConfigError(
                path, "angles are numbers (radians) or strings with a 'deg' suffix"
            )
        try:
            rad = radians(float(text[:-3]))
        except ValueError:
            raise ConfigError(path, "cannot parse %r as an angle" % value)
    else:
        rad = _number(value, path)
    return rad % TWO_PI


def _positive(value, path):
    x = _number(value, path)
    if not x > 0.0:
        raise ConfigError(path, "must be positive")
    return x


def _count(value, path, minimum):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(path, "expected an integer")
    if value < minimum:
        raise ConfigError(path, "must be at least %d" % minimum)
    return value


def _orientation(value, path):
    if value == "forward":
        return Orientation.FORWARD
    if value == "backward":
        return Orientation.BACKWARD
    raise ConfigError(path, "orientation must be 'forward' or 'backward'")


def _parse_gas(doc, path):
    doc = _mapping(doc, path)
    _check_keys(doc, path, required=("gamma", "bounds"))
    gamma = _number(doc["gamma"], _join(path, "gamma"))
    if not gamma > 1.0:
        raise ConfigError(_join(path, "gamma"), "must exceed 1")
    bpath = _join(path, "bounds")
    b = _mapping(doc["bounds"], bpath)
    fields = ("rho_min", "rho_max", "p_min", "p_max", "speed_max", "e_min")
    _check_keys(b, bpath, required=fields)
    vals = {f: _positive(b[f], _join(bpath, f)) for f in fields}
    try:
        bounds = PhaseBounds(**vals)
        return make_gas(gamma, bounds)
    except ValueError as exc:
        raise ConfigError(bpath, str(exc))


def _parse_anchor(doc, path):
    doc = _mapping(doc, path)
    _check_keys(doc, path, required=("theta", "rho", "u", "v", "p"))
    theta = _angle(doc["theta"], _join(path, "theta"))
    try:
        state = PrimitiveState(
            rho=_number(doc["rho"], _join(path, "rho")),
            u=_number(doc["u"], _join(path, "u")),
            v=_number(doc["v"], _join(path, "v")),
            p=_number(doc["p"], _join(path, "p")),
        )
    except ValueError as exc:
        raise ConfigError(path, str(exc))
    return theta, state


def _parse_piece(doc, path):
    doc = _mapping(doc, path)
    kind = doc.get("kind")
    if kind == "shock":
        _check_keys(
            doc,
            path,
            required=("kind", "orientation"),
            optional=("theta", "z", "balance", "L_sign"),
        )
        theta = _angle(doc["theta"], _join(path, "theta")) if "theta" in doc else None
        z = _positive(doc["z"], _join(path, "z")) if "z" in doc else None
        balance = doc.get("balance", False)
        if not isinstance(balance, bool):
            raise ConfigError(_join(path, "balance"), "expected true or false")
        if (theta is not None) + (z is not None) + balance != 1:
            raise ConfigError(path, "needs exactly one of theta, z, balance")
        L_sign = None
        if "L_sign" in doc:
            L_sign = _number(doc["L_sign"], _join(path, "L_sign"))
            if L_sign not in (1.0, -1.0):
                raise ConfigError(_join(path, "L_sign"), "must be 1 or -1")
        return ShockEvent(
            orientation=_orientation(doc["orientation"], _join(path, "orientation")),
            theta=theta,
            z=z,
            balance=balance,
            L_sign=L_sign,
        )
    if kind == "contact":
        _check_keys(doc, path, required=("kind", "rho", "L"))
        return ContactEvent(
            rho=_positive(doc["rho"], _join(path, "rho")),
            L=_number(doc["L"], _join(path, "L")),
        )
    if kind == "wave":
        _check_keys(
            doc,
            path,
            required=("kind", "orientation", "theta_end"),
            optional=("theta_start", "steps"),
        )
        return PMEvent(
            orientation=_orientation(doc["orientation"], _join(path, "orientation")),
            theta_end=_angle(doc["theta_end"], _join(path, "theta_end")),
            theta_start=_angle(doc["theta_start"], _join(path, "theta_start"))
            if "theta_start" in doc
            else None,
            steps=_count(doc["steps"], _join(path, "steps"), 1)
            if "steps" in doc
            else None,
        )
    raise ConfigError(
        _join(path, "kind"), "unknown piece kind %r" % kind
    )


_SHOOT_FIELDS = {
    "theta": ShockEvent,
    "z": ShockEvent,
    "theta_end": PMEvent,
}


def _parse_solver(doc, path, events):
    doc = _mapping(doc, path)
    _check_keys(doc, path, required=("shoot",))
    spath = _join(path, "shoot")
    s = _mapping(doc["shoot"], spath)
    _check_keys(s, spath, required=("piece", "field", "bracket"))
    idx = _count(s["piece"], _join(spath, "piece"), 0)
    if idx >= len(events):
        raise ConfigError(_join(spath, "piece"), "no piece with index %d" % idx)
    field = s["field"]
    if field not in _SHOOT_FIELDS:
        raise ConfigError(
            _join(spath, "field"),
            "must be one of %s" % ", ".join(sorted(_SHOOT_FIELDS)),
        )
    if not isinstance(events[idx], _SHOOT_FIELDS[field]):
        raise ConfigError(
            _join(spath, "field"),
            "piece %d has no adjustable %r" % (idx, field),
        )
    bracket = s["bracket"]
    if not isinstance(bracket, list) or len(bracket) != 2:
        raise ConfigError(_join(spath, "bracket"), "expected [low, high]")
    lo = _number(bracket[0], _join(spath, "bracket"))
    hi = _number(bracket[1], _join(spath, "bracket"))
    if not lo < hi:
        raise ConfigError(_join(spath, "bracket"), "low bound must be below high")
    return Shooting(event_index=idx, field=field, bracket=(lo, hi))


def _parse_output(doc, path):
    doc = _mapping(doc, path)
    _check_keys(doc, path, required=(), optional=("samples", "formats"))
    samples = _count(doc.get("samples", DEFAULT_SAMPLES), _join(path, "samples"), 2)
    formats = doc.get("formats", ["json"])
    if not isinstance(formats, list):
        raise ConfigError(_join(path, "formats"), "expected a list")
    for f in formats:
        if f not in KNOWN_FORMATS:
            raise ConfigError(
                _join(path, "formats"),
                "unknown format %r (known: %s)" % (f, ", ".join(KNOWN_FORMATS)),
            )
    return samples, tuple(formats)


@dataclass(frozen=True)
class FlowConfig:
    gas: object
    description: FlowDescription
    samples: int
    formats: tuple


def parse_config(text):
    """Strict parse of a JSON flow config; unknown keys are errors."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("", "not valid JSON: %s" % exc)
    doc = _mapping(doc, "")
    _check_keys(
        doc, "", required=("gas", "anchor", "pieces"), optional=("solver", "output")
    )
    gas = _parse_gas(doc["gas"], "gas")
    anchor_theta, anchor_state = _parse_anchor(doc["anchor"], "anchor")
    if not isinstance(doc["pieces"], list):
        raise ConfigError("pieces", "expected a list")
    events = tuple(
        _parse_piece(p, "pieces[%d]" % i) for i, p in enumerate(doc["pieces"])
    )
    shooting = None
    if "solver" in doc:
        shooting = _parse_solver(doc["solver"], "solver", events)
    samples, formats = DEFAULT_SAMPLES, ("json",)
    if "output" in doc:
        samples, formats = _parse_output(doc["output"], "output")
    return FlowConfig(
        gas=gas,
        description=FlowDescription(anchor_theta, anchor_state, events, shooting),
        samples=samples,
        formats=formats,
    )


def _load_config(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(str(path), "cannot read config: %s" % exc.strerror)
    return parse_config(text)


def _build(cfg):
    try:
        return build_flow(cfg.gas, cfg.description)
    except ClosureError:
        raise
    except ValueError as exc:
        raise BuildError(str(exc))


# --------------------------------------------------------------- exports


def _write_atomic(path, text):
    tmp = "%s.tmp" % path
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        _write_atomic(out, text)


def _csv_row(gas, theta, state):
    N, L = to_polar(state.u, state.v, theta)
    c = state.sound_speed(gas)
    cells = (
        theta,
        state.rho,
        state.u,
        state.v,
        state.p,
        N,
        L,
        c,
        N / c,
        state.entropy_indicator(gas),
        flow_angle(N, L, theta),
    )
    return ",".join(repr(x) for x in cells)


def export_csv(flow, samples=DEFAULT_SAMPLES):
    """Right-continuous ring sampling; one row per sample plus the header."""
    lines = [CSV_COLUMNS]
    for j in range(samples):
        theta = flow.anchor_theta + TWO_PI * j / samples
        lines.append(_csv_row(flow.gas, theta, evaluate(flow, theta)))
    return "\n".join(lines) + "\n"


def audit_to_document(report):
    """AuditReport as plain data, ready for json.dumps."""
    return {
        "verdict": report.verdict,
        "weak_residual_max": list(report.weak_residual_max),
        "entropy_min": report.entropy_min,
        "entropy_violations": [
            {"interval": [a, b], "production": v}
            for (a, b), v in report.entropy_violations
        ],
        "smooth_residual_max": list(report.smooth_residual_max),
        "admissibility": [
            {"theta": t, "kind": k, "ok": ok, "detail": str(detail or "")}
            for t, k, ok, detail in report.admissibility
        ],
        "structure": {
            "ok": report.structure.ok,
            "checks": [
                {"name": name, "ok": ok, "detail": str(detail or "")}
                for name, ok, detail in report.structure.checks
            ],
        },
        "sector_count": report.sector_count,
        "tolerances": {"weak": 1e-10, "entropy": 1e-10, "smooth": 1e-6},
    }


def export_json(report):
    return json.dumps(audit_to_document(report), indent=2, sort_keys=True) + "\n"


def _svg_point(theta, r):
    return "%.2f,%.2f" % (r * cos(theta), -r * sin(theta))


def export_svg(flow):
    """800x800 polar figure: shock rays, contact rays, shaded wave fans.

    Directions use the mathematical convention (angles increase
    counterclockwise); arrows show the velocity direction of each piece
    at its midpoint. Pure shapes and text, nothing external.
    """
    R = 330.0
    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="800" height="800" '
        'viewBox="-400 -400 800 800">',
        "<desc>Piecewise self-similar flow over the circle of directions</desc>",
        '<defs><marker id="ah" viewBox="0 0 10 10" refX="9" refY="5" '
        'markerWidth="7" markerHeight="7" orient="auto-start-reverse">'
        '<path d="M 0 0 L 10 5 L 0 10 z" fill="#1a6"/></marker></defs>',
        '<rect x="-400" y="-400" width="800" height="800" fill="#ffffff"/>',
        '<circle cx="0" cy="0" r="%.2f" fill="none" stroke="#bbb" '
        'stroke-width="1"/>' % R,
        '<circle cx="0" cy="0" r="3" fill="#333"/>',
    ]

    for piece in flow.interval_pieces:
        if not isinstance(piece, PMPiece):
            continue
        a, b = piece.theta_start, piece.theta_end
        large = 1 if (b - a) > pi else 0
        parts.append(
            '<path d="M 0,0 L %s A %.2f %.2f 0 %d 0 %s Z" fill="#cfe2ff" '
            'stroke="none"/>' % (_svg_point(a, R), R, R, large, _svg_point(b, R))
        )

    for sp in flow.shock_points:
        parts.append(
            '<line x1="0" y1="0" x2="%s" y2="%s" stroke="#c0392b" '
            'stroke-width="2.5"/>'
            % tuple(_svg_point(sp.theta, R).split(","))
        )
    for cp in flow.contact_points:
        parts.append(
            '<line x1="0" y1="0" x2="%s" y2="%s" stroke="#555" '
            'stroke-width="1.5" stroke-dasharray="7 5"/>'
            % tuple(_svg_point(cp.theta, R).split(","))
        )

    for piece in flow.interval_pieces:
        mid = 0.5 * (piece.theta_start + piece.theta_end)
        state = evaluate(flow, mid)
        phi = atan2(state.v, state.u)
        cxp, cyp = 0.72 * R * cos(mid), -0.72 * R * sin(mid)
        dx, dy = 22.0 * cos(phi), -22.0 * sin(phi)
        parts.append(
            '<line x1="%.2f" y1="%.2f" x2="%.2f" y2="%.2f" stroke="#1a6" '
            'stroke-width="2" marker-end="url(#ah)"/>'
            % (cxp - dx, cyp - dy, cxp + dx, cyp + dy)
        )

    legend = (
        ("#c0392b", "shock", "solid"),
        ("#555", "contact", "dashed"),
        ("#cfe2ff", "wave fan", "fill"),
        ("#1a6", "flow direction", "arrow"),
    )
    y = -372
    for color, label, style in legend:
        if style == "fill":
            parts.append(
                '<rect x="-388" y="%d" width="26" height="10" fill="%s"/>'
                % (y - 9, color)
            )
        else:
            dash = ' stroke-dasharray="7 5"' if style == "dashed" else ""
            marker = ' marker-end="url(#ah)"' if style == "arrow" else ""
            parts.append(
                '<line x1="-388" y1="%d" x2="-362" y2="%d" stroke="%s" '
                'stroke-width="2.5"%s%s/>' % (y - 4, y - 4, color, dash, marker)
            )
        parts.append(
            '<text x="-354" y="%d" font-family="sans-serif" font-size="14" '
            'fill="#222">%s</text>' % (y, label)
        )
        y += 22

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def analyze_to_document(flow, samples=DEFAULT_SAMPLES):
    sectors = sector_decompose(flow)
    sbv = bv_decompose(flow, samples=samples)
    return {
        "sectors": [
            {
                "theta_start": s.theta_start,
                "theta_end": s.theta_end,
                "direction": s.direction.value,
                "theta_bar": s.theta_bar,
                "turn": (s.theta_end - s.theta_start) - pi,
            }
            for s in sectors
        ],
        "shocks": [sp.theta for sp in flow.shock_points],
        "contacts": [cp.theta for cp in flow.contact_points],
        "total_variation": sbv.total_variation,
        "tv_lipschitz": sbv.tv_lipschitz,
        "lipschitz_constant": sbv.lipschitz_constant,
    }


# -------------------------------------------------------------- commands


def _summarize(flow):
    waves = sum(1 for p in flow.interval_pieces if isinstance(p, PMPiece))
    consts = sum(1 for p in flow.interval_pieces if isinstance(p, ConstantPiece))
    sectors = sector_decompose(flow)
    return (
        "built flow: %d constant pieces, %d waves, %d shocks, %d contacts, "
        "%d sectors" % (
            consts, waves, len(flow.shock_points), len(flow.contact_points),
            len(sectors),
        )
    )


def _artifact_path(out_dir, config_path, fmt):
    stem = os.path.splitext(os.path.basename(config_path))[0]
    return os.path.join(out_dir, "%s.%s" % (stem, fmt))


def _render(flow, fmt, samples):
    if fmt == "csv":
        return export_csv(flow, samples)
    if fmt == "svg":
        return export_svg(flow)
    return export_json(full_audit(flow))


def _cmd_build(ns):
    cfg = _load_config(ns.config)
    flow = _build(cfg)
    print(_summarize(flow))
    if ns.out is not None:
        os.makedirs(ns.out, exist_ok=True)
        for fmt in cfg.formats:
            path = _artifact_path(ns.out, ns.config, fmt)
            _write_atomic(path, _render(flow, fmt, cfg.samples))
            print("wrote %s" % path)
    return 0


def _cmd_verify(ns):
    cfg = _load_config(ns.config)
    flow = _build(cfg)
    report = full_audit(flow)
    _emit(export_json(report), ns.out)
    if ns.out is not None:
        print("wrote %s" % ns.out)
    return 0 if report.ok else 1


def _cmd_analyze(ns):
    cfg = _load_config(ns.config)
    flow = _build(cfg)
    doc = analyze_to_document(flow, cfg.samples)
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", ns.out)
    return 0


def _cmd_export(ns):
    cfg = _load_config(ns.config)
    flow = _build(cfg)
    samples = ns.samples if ns.samples is not None else cfg.samples
    out = ns.out
    if out is None:
        out = _artifact_path(".", ns.config, ns.format)
    _write_atomic(out, _render(flow, ns.format, samples))
    print("wrote %s" % out)
    return 0


_SOLVER_BOUNDS = PhaseBounds(
    rho_min=1e-6, rho_max=1e6, p_min=1e-6, p_max=1e6, speed_max=1e6, e_min=1e-12
)


def _solver_gas(gamma):
    if not gamma > 1.0:
        raise ConfigError("--gamma", "must exceed 1")
    return make_gas(gamma, _SOLVER_BOUNDS)


def _flag_angle(text, flag):
    t = text.strip()
    try:
        if t.endswith("deg"):
            return radians(float(t[:-3]))
        return float(t)
    except ValueError:
        raise ConfigError(flag, "cannot parse %r as an angle" % text)


def _cmd_shock_solve(ns):
    gas = _solver_gas(ns.gamma)
    alpha = _flag_angle(ns.deflection, "--deflection")
    try:
        theta_s = solve_shock_angle(ns.mach, alpha, ns.branch, gas)
    except ValueError as exc:
        if "detached" in str(exc):
            print("no attached shock: %s" % exc, file=sys.stderr)
            return 1
        raise ConfigError("shock-solve", str(exc))
    print(
        "shock angle: %.9f rad = %.4f deg (%s branch)"
        % (theta_s, degrees(theta_s), ns.branch)
    )
    print(
        "deflection %.4f deg at M = %.4f, gamma = %.4f"
        % (degrees(alpha), ns.mach, ns.gamma)
    )
    return 0


def _cmd_max_turn(ns):
    gas = _solver_gas(ns.gamma)
    if ns.mach is not None:
        if not ns.mach > 1.0:
            raise ConfigError("--mach", "must exceed 1")
        alpha = max_deflection(ns.mach, gas)
        print(
            "max turning angle at M = %.4f: %.4f deg (%.9f rad)"
            % (ns.mach, degrees(alpha), alpha)
        )
    else:
        alpha = max_deflection_limit(gas)
        print(
            "max turning angle: %.4f deg (%.9f rad), the high-Mach limit "
            "asin(1/gamma)" % (degrees(alpha), alpha)
        )
    print(
        "detachment criterion: a shock asked to turn the flow past this "
        "cannot stay attached"
    )
    return 0


def _cmd_pm_trace(ns):
    gas = _solver_gas(ns.gamma)
    if not ns.mach > 1.0:
        raise ConfigError("--mach", "must exceed 1 (the wave edge is sonic)")
    try:
        start = PrimitiveState(rho=ns.rho, u=0.0, v=0.0, p=ns.p)
    except ValueError as exc:
        raise ConfigError("pm-trace", str(exc))
    c = start.sound_speed(gas)
    orient = Orientation.FORWARD if ns.orientation == "forward" else Orientation.BACKWARD
    # sonic entry: speed M c along the x axis, angle placed so N = +-c
    theta0 = asin(1.0 / ns.mach) * (1.0 if orient is Orientation.FORWARD else -1.0)
    theta0 %= TWO_PI
    start = PrimitiveState(rho=ns.rho, u=ns.mach * c, v=0.0, p=ns.p)
    span = _flag_angle(ns.span, "--span")
    if not span > 0.0:
        raise ConfigError("--span", "must be positive")
    try:
        wave = integrate_pm(
            start, theta0, theta0 + span, orient, gas, steps=ns.steps
        )
    except ValueError as exc:
        raise BuildError(str(exc))
    lines = [CSV_COLUMNS]
    for i, t in enumerate(wave.thetas):
        lines.append(_csv_row(gas, t, pm_wave_state(wave, t, exact_index=i)))
    _emit("\n".join(lines) + "\n", ns.out)
    return 0


# ------------------------------------------------------------ entry point


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags, which this tool reserves
    # for closure failures; route flag problems through the config path
    def error(self, message):
        raise ConfigError("arguments", message)


def _make_parser():
    parser = _Parser(prog="sectorflow", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct a flow and print a summary")
    p.add_argument("config")
    p.add_argument("--out", help="directory for the config's output formats")
    p.set_defaults(fn=_cmd_build)

    p = sub.add_parser("verify", help="build and run the full audit")
    p.add_argument("config")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("analyze", help="sector decomposition and variation split")
    p.add_argument("config")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("export", help="emit csv, svg, or json for a flow")
    p.add_argument("config")
    p.add_argument("--format", required=True, choices=KNOWN_FORMATS)
    p.add_argument("--out")
    p.add_argument("--samples", type=int)
    p.set_defaults(fn=_cmd_export)

    p = sub.add_parser("shock-solve", help="invert the deflection relation")
    p.add_argument("--mach", type=float, required=True)
    p.add_argument("--deflection", required=True, help="radians or e.g. 10deg")
    p.add_argument("--branch", choices=("weak", "strong"), default="weak")
    p.add_argument("--gamma", type=float, required=True)
    p.set_defaults(fn=_cmd_shock_solve)

    p = sub.add_parser("pm-trace", help="integrate a sonic wave from flag data")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--mach", type=float, required=True)
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument(
        "--orientation", choices=("forward", "backward"), default="forward"
    )
    p.add_argument("--span", default="0.35", help="angular width, radians or deg")
    p.add_argument("--steps", type=int)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_pm_trace)

    p = sub.add_parser("max-turn", help="largest deflection a shock can produce")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--mach", type=float)
    p.set_defaults(fn=_cmd_max_turn)

    return parser


def main(argv=None):
    parser = _make_parser()
    try:
        ns = parser.parse_args(argv)
        return ns.fn(ns)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 3
    except ClosureError as exc:
        print("closure failure: %s" % exc, file=sys.stderr)
        return 2
    except BuildError as exc:
        print("construction failure: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
