import math
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from sectorflow.gas import PhaseBounds, PrimitiveState, make_gas, primitive_to_conserved
from sectorflow.polar import TWO_PI, from_polar, to_polar
from sectorflow.pmwave import integrate_pm
from sectorflow.shock import Orientation
from sectorflow.flowfield import (
    ClosureError,
    ConstantPiece,
    ContactEvent,
    ContactPoint,
    FlowDescription,
    FlowField,
    PMEvent,
    PMPiece,
    SectorDirection,
    ShockEvent,
    ShockPoint,
    Shooting,
    build_flow,
    bv_decompose,
    evaluate,
    sector_decompose,
    shock_separation_floor,
    validate_structure,
)

# ----------------------------------------------------------- golden flows
#
# Two-sector flow, gamma = 1.4 (the conftest box). Anchored just past the
# forward sector's exit contact; seven events around the circle, closure
# shot on the backward wave's end angle. All the numbers below were
# produced by this build and frozen; they pin the construction against
# regressions, not against an outside reference.
TWO_SECTOR_THETA2 = 6.0
TWO_SECTOR_SHOT_END = 0.505661201964
TWO_SECTOR_BALANCE_Z = 0.307284938873
TWO_SECTOR_SHOCKS = (
    (Orientation.BACKWARD, 1.949075531814, 0.6),
    (Orientation.FORWARD, 3.836574559128, 0.2),
    (Orientation.FORWARD, 5.167044772500, TWO_SECTOR_BALANCE_Z),
)
TWO_SECTOR_CONTACTS = (2.752780885458, 6.0)
TWO_SECTOR_WAVE_B = (0.389061149854, 0.505661201964)
TWO_SECTOR_WAVE_F = (4.849357381270, 5.052640204563)
TWO_SECTOR_BARS = {"forward": 4.2718039649, "backward": 7.6274664191}
TWO_SECTOR_TV_JUMP = 5.189935890709
TWO_SECTOR_TV_LIP = 1.128286341964

# Three-sector flow, gamma = 1.12 < 2/sqrt(3): three shocks (one per
# sector, each in the L>0 region where the turn is negative), three
# contacts, no smooth waves. Pressure walks P0 -> P0/(1+z1) -> back up
# across the backward shock -> P0 via the balance shock; closure is shot
# on the backward strength.
THREE_SECTOR_BOUNDS = PhaseBounds(
    rho_min=0.01, rho_max=40.0, p_min=0.001, p_max=300.0, speed_max=30.0, e_min=1e-5
)
THREE_SECTOR_SHOT_ZB = 32096.288585656
THREE_SECTOR_BALANCE_Z = 158.688002914
THREE_SECTOR_SHOCKS = (
    (Orientation.FORWARD, 0.060237074592, 200.0),
    (Orientation.BACKWARD, 3.927256305264, THREE_SECTOR_SHOT_ZB),
    (Orientation.FORWARD, 4.253832408982, THREE_SECTOR_BALANCE_Z),
)
THREE_SECTOR_CONTACTS = (1.874020648870, 4.034978190062, 6.1)
THREE_SECTOR_TV_JUMP = 3496.518326026


def two_sector_description():
    u0, v0 = from_polar(0.0, -1.9, TWO_SECTOR_THETA2)
    anchor = PrimitiveState(rho=1.0, u=u0, v=v0, p=1.0)
    events = (
        PMEvent(orientation=Orientation.BACKWARD, theta_end=0.5),
        ShockEvent(orientation=Orientation.BACKWARD, z=0.6, L_sign=1.0),
        ContactEvent(rho=0.8, L=1.9),
        ShockEvent(orientation=Orientation.FORWARD, z=0.2),
        PMEvent(orientation=Orientation.FORWARD, theta_end=5.0526402045633389),
        ShockEvent(orientation=Orientation.FORWARD, balance=True),
        ContactEvent(rho=1.0, L=-1.9),
    )
    shooting = Shooting(event_index=0, field="theta_end", bracket=(0.41, 0.57))
    return FlowDescription(0.0, anchor, events, shooting)


def three_sector_description():
    u0, v0 = from_polar(0.0, 1.060, 6.1)
    anchor = PrimitiveState(rho=1.0, u=u0, v=v0, p=1.0)
    events = (
        ShockEvent(orientation=Orientation.FORWARD, z=200.0),
        ContactEvent(rho=0.5, L=-20.77),
        ShockEvent(orientation=Orientation.BACKWARD, z=34000.0, L_sign=1.0),
        ContactEvent(rho=25.0, L=3.005),
        ShockEvent(orientation=Orientation.FORWARD, balance=True),
        ContactEvent(rho=1.0, L=1.060),
    )
    shooting = Shooting(event_index=2, field="z", bracket=(28000.0, 45000.0))
    return FlowDescription(0.0, anchor, events, shooting)


@pytest.fixture(scope="module")
def gas14():
    bounds = PhaseBounds(
        rho_min=0.05, rho_max=20.0, p_min=0.05, p_max=20.0, speed_max=15.0, e_min=1e-3
    )
    return make_gas(1.4, bounds)


@pytest.fixture(scope="module")
def gas112():
    return make_gas(1.12, THREE_SECTOR_BOUNDS)


@pytest.fixture(scope="module")
def two_sector(gas14):
    return build_flow(gas14, two_sector_description())


@pytest.fixture(scope="module")
def three_sector(gas112):
    return build_flow(gas112, three_sector_description())


def uniform_flow(gas, rho=1.0, speed=2.0, phi=1.1, p=1.0):
    anchor = PrimitiveState(
        rho=rho, u=speed * math.cos(phi), v=speed * math.sin(phi), p=p
    )
    return build_flow(gas, FlowDescription(0.0, anchor, ()))


def conserved_at(flow, theta):
    return primitive_to_conserved(evaluate(flow, theta), flow.gas).as_tuple()


def jump_sides(point):
    if isinstance(point, ShockPoint):
        return (
            point.solution.left_state().to_primitive(),
            point.solution.right_state().to_primitive(),
        )
    return point.left, point.right


# ----------------------------------------------------------- uniform flow


def test_uniform_flow_builds_and_decomposes(gas14):
    flow = uniform_flow(gas14)
    assert len(flow.interval_pieces) == 1
    secs = sector_decompose(flow)
    assert len(secs) == 2
    # boundaries sit at the two zeros of N, the flow angle and its antipode
    angles = sorted(s.theta_start % TWO_PI for s in secs)
    assert angles[0] == pytest.approx(1.1, abs=1e-12)
    assert angles[1] == pytest.approx(1.1 + math.pi, abs=1e-12)
    assert {s.direction for s in secs} == {
        SectorDirection.FORWARD,
        SectorDirection.BACKWARD,
    }
    assert validate_structure(flow).ok


def test_uniform_flow_has_no_jump_part(gas14):
    bv = bv_decompose(uniform_flow(gas14), samples=64)
    assert bv.total_variation == 0.0
    assert bv.tv_lipschitz == pytest.approx(0.0, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(
    phi=st.floats(0.0, TWO_PI),
    speed=st.floats(0.5, 10.0),
    rho=st.floats(0.2, 5.0),
)
def test_uniform_flow_sectors_property(phi, speed, rho):
    bounds = PhaseBounds(
        rho_min=0.05, rho_max=20.0, p_min=0.05, p_max=20.0, speed_max=15.0, e_min=1e-3
    )
    gas = make_gas(1.4, bounds)
    flow = uniform_flow(gas, rho=rho, speed=speed, phi=phi)
    secs = sector_decompose(flow)
    assert len(secs) == 2
    for s in secs:
        # theta_bar is where L vanishes: a quarter turn past the N zero
        width = s.theta_end - s.theta_start
        assert width == pytest.approx(math.pi, abs=1e-9)
        assert s.theta_bar - s.theta_start == pytest.approx(math.pi / 2, abs=1e-6)


# ------------------------------------------------------ description errors


def test_constant_piece_rejects_empty_interval(gas14):
    state = PrimitiveState(rho=1.0, u=1.0, v=0.0, p=1.0)
    with pytest.raises(ValueError, match="nonempty interval"):
        ConstantPiece(theta_start=1.0, theta_end=1.0, state=state)


def test_shock_event_needs_one_mode():
    with pytest.raises(ValueError, match="exactly one of theta, z, balance"):
        ShockEvent(orientation=Orientation.FORWARD, theta=1.0, z=0.5)
    with pytest.raises(ValueError, match="exactly one of theta, z, balance"):
        ShockEvent(orientation=Orientation.FORWARD)


def test_trivial_contact_rejected(gas14):
    # the first N zero above the anchor is the one where L comes back
    # positive; declaring the same rho and L jumps nothing
    u0, v0 = from_polar(0.0, -1.9, TWO_SECTOR_THETA2)
    anchor = PrimitiveState(rho=1.0, u=u0, v=v0, p=1.0)
    desc = FlowDescription(0.0, anchor, (ContactEvent(rho=1.0, L=1.9),))
    with pytest.raises(ValueError, match="trivial contact"):
        build_flow(gas14, desc)


def test_unclosed_description_raises(gas14):
    # drop the shooting and leave the backward wave too short: the state
    # that comes back around no longer matches the anchor
    desc = two_sector_description()
    events = list(desc.events)
    events[0] = replace(events[0], theta_end=0.45)
    bad = FlowDescription(0.0, desc.anchor_state, tuple(events))
    with pytest.raises(ClosureError, match="does not close up around the circle"):
        build_flow(gas14, bad)


def test_shooting_without_sign_change_raises(gas14):
    desc = two_sector_description()
    narrow = replace(desc, shooting=Shooting(0, "theta_end", (0.41, 0.43)))
    with pytest.raises(ClosureError, match="no sign change"):
        build_flow(gas14, narrow)


# -------------------------------------------------------- two-sector flow


def test_two_sector_shot_parameter(two_sector):
    wave_b = next(
        p.wave
        for p in two_sector.interval_pieces
        if isinstance(p, PMPiece) and p.wave.orientation is Orientation.BACKWARD
    )
    assert wave_b.theta_end == pytest.approx(TWO_SECTOR_SHOT_END, abs=5e-10)
    assert wave_b.theta_start == pytest.approx(TWO_SECTOR_WAVE_B[0], abs=5e-9)


def test_two_sector_shock_inventory(two_sector):
    got = [
        (p.solution.orientation, p.theta, p.solution.z)
        for p in two_sector.shock_points
    ]
    assert len(got) == 3
    for (orient, theta, z), (eo, et, ez) in zip(got, TWO_SECTOR_SHOCKS):
        assert orient is eo
        assert theta == pytest.approx(et, abs=1e-8)
        assert z == pytest.approx(ez, rel=1e-7)


def test_two_sector_contacts_and_forward_wave(two_sector):
    assert [p.theta for p in two_sector.contact_points] == pytest.approx(
        list(TWO_SECTOR_CONTACTS), abs=1e-8
    )
    wave_f = next(
        p.wave
        for p in two_sector.interval_pieces
        if isinstance(p, PMPiece) and p.wave.orientation is Orientation.FORWARD
    )
    assert (wave_f.theta_start, wave_f.theta_end) == pytest.approx(
        TWO_SECTOR_WAVE_F, abs=1e-9
    )


def test_two_sector_sectors(two_sector):
    secs = sector_decompose(two_sector)
    assert [s.direction.value for s in secs] == ["forward", "backward"]
    fwd, bwd = secs
    assert (fwd.theta_start, fwd.theta_end) == pytest.approx(
        (TWO_SECTOR_CONTACTS[0], 6.0), abs=1e-8
    )
    assert bwd.theta_end - bwd.theta_start == pytest.approx(
        TWO_PI - (6.0 - TWO_SECTOR_CONTACTS[0]), abs=1e-8
    )
    assert fwd.theta_bar == pytest.approx(TWO_SECTOR_BARS["forward"], abs=1e-7)
    assert bwd.theta_bar == pytest.approx(TWO_SECTOR_BARS["backward"], abs=1e-7)


def test_two_sector_structure_checks(two_sector):
    rep = validate_structure(two_sector)
    assert rep.ok
    names = [name for name, _, _ in rep.checks]
    assert names == [
        "shock neighborhoods",
        "single compression per stretch",
        "inflow region shape",
        "opposite shock separation",
        "shock admissibility",
        "sector turning",
    ]
    _, _, margin1 = rep.checks[0]
    assert margin1 == pytest.approx(0.11440408349060721, rel=1e-6)
    _, _, margin4 = rep.checks[3]
    assert margin4 == pytest.approx(1.8874891671805014, rel=1e-6)
    _, _, gap6 = rep.checks[5]
    assert gap6 < 1e-12


def test_two_sector_turning_matches_widths(two_sector):
    # per-sector turning is width - pi, so k sectors sum to 2 pi - k pi:
    # zero net turn for two sectors
    secs = sector_decompose(two_sector)
    total = sum((s.theta_end - s.theta_start) - math.pi for s in secs)
    assert total == pytest.approx(0.0, abs=1e-12)


def test_two_sector_periodicity(two_sector):
    a = conserved_at(two_sector, 0.0)
    b = conserved_at(two_sector, TWO_PI - 1e-12)
    for x, y in zip(a, b):
        assert y == pytest.approx(x, rel=1e-9, abs=1e-9)


def test_two_sector_contact_invariants(two_sector):
    for cp in two_sector.contact_points:
        left, right = cp.left, cp.right
        assert right.p == pytest.approx(left.p, rel=1e-14)
        Nl, _ = to_polar(left.u, left.v, cp.theta)
        Nr, _ = to_polar(right.u, right.v, cp.theta)
        assert abs(Nl) < 1e-10 and abs(Nr) < 1e-10


def test_evaluate_right_continuous_at_jumps(two_sector):
    for sp in two_sector.shock_points:
        _, right = jump_sides(sp)
        at = evaluate(two_sector, sp.theta)
        assert at.rho == pytest.approx(right.rho, rel=1e-12)
        assert at.p == pytest.approx(right.p, rel=1e-12)
        just_after = evaluate(two_sector, sp.theta + 1e-11)
        assert just_after.rho == pytest.approx(right.rho, rel=1e-9)


def test_constant_pieces_rotate_exactly(two_sector):
    # dN/dtheta = L and dL/dtheta = -N on constants, by the frame rotation
    h = 1e-5
    for piece in two_sector.interval_pieces:
        if not isinstance(piece, ConstantPiece):
            continue
        mid = 0.5 * (piece.theta_start + piece.theta_end)
        if piece.theta_end - piece.theta_start < 4 * h:
            continue
        s = piece.state
        Nm, Lm = to_polar(s.u, s.v, mid)
        Np, _ = to_polar(s.u, s.v, mid + h)
        Nn, _ = to_polar(s.u, s.v, mid - h)
        _, Lp = to_polar(s.u, s.v, mid + h)
        _, Ln = to_polar(s.u, s.v, mid - h)
        assert (Np - Nn) / (2 * h) == pytest.approx(Lm, abs=1e-8)
        assert (Lp - Ln) / (2 * h) == pytest.approx(-Nm, abs=1e-8)


def test_wave_samples_obey_tangential_ode(two_sector):
    # |dL/dtheta + N| small across every stored wave, sampled by finite
    # differences of the evaluated flow
    h = 1e-6
    for piece in two_sector.interval_pieces:
        if not isinstance(piece, PMPiece):
            continue
        w = piece.wave
        lo, hi = w.theta_start, w.theta_end
        for k in range(1, 8):
            t = lo + (hi - lo) * k / 8
            sm = evaluate(two_sector, t)
            Nm, _ = to_polar(sm.u, sm.v, t)
            sp_, sn_ = evaluate(two_sector, t + h), evaluate(two_sector, t - h)
            _, Lp = to_polar(sp_.u, sp_.v, t + h)
            _, Ln = to_polar(sn_.u, sn_.v, t - h)
            assert (Lp - Ln) / (2 * h) + Nm == pytest.approx(0.0, abs=1e-6)


# ------------------------------------------------------------------- SBV


def test_bv_oracles(two_sector):
    bv = bv_decompose(two_sector)
    assert bv.total_variation == pytest.approx(TWO_SECTOR_TV_JUMP, rel=1e-8)
    assert bv.tv_lipschitz == pytest.approx(TWO_SECTOR_TV_LIP, rel=1e-4)
    assert bv.lipschitz_constant < 5.0


def test_bv_jump_part_sums_the_jumps(two_sector):
    bv = bv_decompose(two_sector)
    total = 0.0
    for point in two_sector.jump_points:
        left, right = jump_sides(point)
        ul = primitive_to_conserved(left, two_sector.gas).as_tuple()
        ur = primitive_to_conserved(right, two_sector.gas).as_tuple()
        total += math.sqrt(sum((b - a) ** 2 for a, b in zip(ul, ur)))
    assert bv.total_variation == pytest.approx(total, rel=1e-12)


def test_lipschitz_part_continuous_across_jumps(two_sector):
    # U minus the saltus part has matching limits at every jump angle
    eps = 1e-9
    for point in two_sector.jump_points:
        theta = two_sector.local_angle(point.theta)
        left, right = jump_sides(point)
        ul = primitive_to_conserved(left, two_sector.gas).as_tuple()
        ur = primitive_to_conserved(right, two_sector.gas).as_tuple()
        below = conserved_at(two_sector, theta - eps)
        above = conserved_at(two_sector, theta + eps)
        for i in range(4):
            jump_of_U = above[i] - below[i]
            declared = ur[i] - ul[i]
            assert jump_of_U == pytest.approx(declared, rel=1e-6, abs=1e-7)


def test_pointwise_split_reconstructs_the_flow(two_sector):
    bv = bv_decompose(two_sector, samples=360)
    jumps = []
    for point in two_sector.jump_points:
        left, right = jump_sides(point)
        ul = primitive_to_conserved(left, two_sector.gas).as_tuple()
        ur = primitive_to_conserved(right, two_sector.gas).as_tuple()
        jumps.append(
            (two_sector.local_angle(point.theta), tuple(r - l for l, r in zip(ul, ur)))
        )
    for t, ul_part in bv.lipschitz_part:
        U = conserved_at(two_sector, min(t, TWO_PI - 1e-13))
        S = [0.0, 0.0, 0.0, 0.0]
        for a, dU in jumps:
            if a <= t:
                for i in range(4):
                    S[i] += dU[i]
        for i in range(4):
            assert ul_part[i] + S[i] == pytest.approx(U[i], rel=1e-9, abs=1e-9)


# ------------------------------------------------------ three-sector flow


def test_three_sector_builds_with_shot_strength(three_sector):
    zb = three_sector.shock_points[1].solution.z
    assert zb == pytest.approx(THREE_SECTOR_SHOT_ZB, rel=1e-6)


def test_three_sector_inventory(three_sector):
    got = [
        (p.solution.orientation, p.theta, p.solution.z)
        for p in three_sector.shock_points
    ]
    for (orient, theta, z), (eo, et, ez) in zip(got, THREE_SECTOR_SHOCKS):
        assert orient is eo
        assert theta == pytest.approx(et, abs=1e-6)
        assert z == pytest.approx(ez, rel=1e-6)
    assert [p.theta for p in three_sector.contact_points] == pytest.approx(
        list(THREE_SECTOR_CONTACTS), abs=1e-6
    )


def test_three_sector_sector_turns(three_sector):
    secs = sector_decompose(three_sector)
    assert len(secs) == 3
    dirs = [s.direction.value for s in secs]
    assert sorted(dirs) == ["backward", "forward", "forward"]
    turns = [math.degrees((s.theta_end - s.theta_start) - math.pi) for s in secs]
    # every sector turns the flow by roughly -60 degrees and the three
    # turns sum to a half turn; no single shock could do this at gamma=1.4
    for t in turns:
        assert -63.3 < t < -55.0
    assert sum(turns) == pytest.approx(-180.0, abs=1e-9)


def test_three_sector_structure(three_sector):
    rep = validate_structure(three_sector)
    assert rep.ok
    passed, margin = rep.named("shock neighborhoods")
    assert passed and margin == pytest.approx(0.1077186636572082, rel=1e-5)
    passed, gap = rep.named("sector turning")
    assert passed and gap < 1e-12


def test_three_sector_is_pure_saltus(three_sector):
    # no smooth waves anywhere: the Lipschitz part is a constant
    bv = bv_decompose(three_sector)
    assert bv.total_variation == pytest.approx(THREE_SECTOR_TV_JUMP, rel=1e-6)
    assert bv.tv_lipschitz == pytest.approx(0.0, abs=1e-6)
    assert bv.lipschitz_constant == pytest.approx(0.0, abs=1e-6)


def test_three_sector_needs_small_gamma(gas112):
    bounds = THREE_SECTOR_BOUNDS
    gas = make_gas(1.4, bounds)
    with pytest.raises(ClosureError, match="no sign change"):
        build_flow(gas, three_sector_description())


# --------------------------------------------------------------- mutants


def _piece_index(flow, predicate):
    for k, p in enumerate(flow.pieces):
        if predicate(p):
            return k
    raise AssertionError("piece not found")


def _with_pieces(flow, pieces):
    return FlowField(gas=flow.gas, anchor_theta=flow.anchor_theta, pieces=tuple(pieces))


def four_contacts_mutant(flow):
    state = evaluate(flow, 0.0)
    fakes = tuple(
        ContactPoint(theta=t, left=state, right=state) for t in (0.3, 1.7, 3.1, 4.5)
    )
    return _with_pieces(flow, flow.pieces + fakes)


def _splice_backward_wave(flow, gas, L_seed):
    """Insert a second backward wave into the first post-shot constant.

    With L_seed None the seed keeps the constant's own tangential velocity
    (a second compression in the same stretch); with an explicit positive
    L_seed the wave sits in the L < 0 region with the wrong sign.
    """
    k = _piece_index(
        flow,
        lambda p: isinstance(p, ConstantPiece)
        and abs(p.theta_start - TWO_SECTOR_SHOT_END) < 1e-6,
    )
    const = flow.pieces[k]
    s = const.state
    c = s.sound_speed(gas)
    lo, hi = 0.9, 1.05
    if L_seed is None:
        _, L_seed = to_polar(s.u, s.v, lo)
    u2, v2 = from_polar(-c, L_seed, lo)
    seed = PrimitiveState(rho=s.rho, u=u2, v=v2, p=s.p)
    wave2 = integrate_pm(seed, lo, hi, Orientation.BACKWARD, gas)
    pieces = list(flow.pieces)
    pieces[k : k + 1] = [
        ConstantPiece(const.theta_start, lo, s),
        PMPiece(wave2),
        ConstantPiece(hi, const.theta_end, s),
    ]
    return _with_pieces(flow, pieces)


def adjacent_compressions_mutant(flow, gas):
    return _splice_backward_wave(flow, gas, None)


def misplaced_wave_mutant(flow, gas):
    return _splice_backward_wave(flow, gas, 1.4)


def swapped_shock_mutant(flow):
    k = _piece_index(flow, lambda p: isinstance(p, ShockPoint))
    sp = flow.pieces[k]
    sol = sp.solution
    swapped = replace(
        sol,
        upstream=sol.downstream,
        downstream=sol.upstream,
        mass_flux=-sol.mass_flux,
    )
    pieces = list(flow.pieces)
    pieces[k] = ShockPoint(theta=sp.theta, solution=swapped)
    return _with_pieces(flow, pieces)


def test_four_contacts_rejected(gas14):
    broken = four_contacts_mutant(uniform_flow(gas14))
    with pytest.raises(ValueError, match="violates maximum-sector theorem"):
        sector_decompose(broken)


def test_adjacent_compressions_fail_named_check(two_sector, gas14):
    # a second backward compression in the stretch behind the existing
    # one, with no shock in between
    mutant = adjacent_compressions_mutant(two_sector, gas14)
    rep = validate_structure(mutant)
    passed, detail = rep.named("single compression per stretch")
    assert not passed
    assert "two compression waves" in detail


def test_expansion_in_inflow_region_fails_classification(two_sector, gas14):
    # a backward wave with L > 0 inside the backward sector's L < 0
    # region: its position contradicts its tangential sign
    mutant = misplaced_wave_mutant(two_sector, gas14)
    rep = validate_structure(mutant)
    passed, detail = rep.named("single compression per stretch")
    assert not passed
    assert "inconsistent" in detail


def test_swapped_shock_fails_admissibility(two_sector):
    mutant = swapped_shock_mutant(two_sector)
    rep = validate_structure(mutant)
    passed, detail = rep.named("shock admissibility")
    assert not passed
    assert "fails" in detail
