import numpy as np
import pytest

from ionblimp.dynamics import (
    AirshipParams,
    BodyState,
    ConstraintViolation,
    SingularInertia,
    ThrusterCommand,
    aero_wrench,
    full_derivatives,
    gravity_buoyancy_wrench,
    planar_derivatives,
    thruster_wrench,
)
from ionblimp.frames import AttitudeAngles, ground_to_body

PARAMS = AirshipParams(lift_slope=0.2, moment_slope=0.05)


def random_planar_state(rng):
    return BodyState(
        u=rng.uniform(-1, 1), v=rng.uniform(-1, 1), w=rng.uniform(-1, 1),
        r=rng.uniform(-1, 1), x=rng.uniform(-5, 5), y=rng.uniform(-5, 5),
        h=rng.uniform(0, 3), attitude=AttitudeAngles(psi=rng.uniform(-3, 3)),
    )


# --- aero wrench -----------------------------------------------------------

def test_aero_zero_at_rest():
    wr = aero_wrench(PARAMS, [0.0, 0.0, 0.0])
    assert np.allclose(wr.force, 0.0) and np.allclose(wr.moment, 0.0)


def test_aero_pure_drag_straight_flight():
    v = 1.3
    wr = aero_wrench(PARAMS, [v, 0.0, 0.0])
    drag = 0.5 * PARAMS.air_density * v**2 * PARAMS.drag_coeff
    assert np.allclose(wr.force, [-drag, 0.0, 0.0], atol=1e-15)
    assert np.allclose(wr.moment, 0.0, atol=1e-15)


def test_aero_generic_point_scalar_oracle():
    # Hand-rolled closure + rotation for v = (1, 0, 0.1): beta = 0, so
    # F = (-D ca - L sa, 0, D sa - L ca) and M = (0, M, 0).
    vel = np.array([1.0, 0.0, 0.1])
    speed_sq = 1.01
    alpha = np.arctan2(0.1, 1.0)
    q_dyn = 0.5 * PARAMS.air_density * speed_sq
    drag = q_dyn * PARAMS.drag_coeff
    lift = q_dyn * PARAMS.lift_slope * alpha
    pitch_m = q_dyn * PARAMS.ref_chord * PARAMS.moment_slope * alpha
    ca, sa = np.cos(alpha), np.sin(alpha)
    wr = aero_wrench(PARAMS, vel)
    assert np.allclose(wr.force, [-drag * ca - lift * sa, 0.0, drag * sa - lift * ca], atol=1e-14)
    assert np.allclose(wr.moment, [0.0, pitch_m, 0.0], atol=1e-14)


# --- thruster wrench -------------------------------------------------------

def test_thruster_wrench_zero_deflection_cross_product():
    cmd = ThrusterCommand(thrust=0.04)
    wr = thruster_wrench(PARAMS, cmd)
    arm_z = PARAMS.mount_z + PARAMS.link_length
    assert np.allclose(wr.force, [0.04, 0.0, 0.0], atol=1e-15)
    assert np.allclose(wr.moment, [0.0, arm_z * 0.04, 0.0], atol=1e-15)


def test_thruster_wrench_zero_thrust():
    wr = thruster_wrench(PARAMS, ThrusterCommand(thrust=0.0, yaw_deflection=0.4))
    assert np.allclose(wr.force, 0.0) and np.allclose(wr.moment, 0.0)


def test_thruster_wrench_full_pitch_deflection():
    t = 0.03
    wr = thruster_wrench(PARAMS, ThrusterCommand(thrust=t, pitch_deflection=np.pi / 2))
    assert np.allclose(wr.force, [0.0, 0.0, -t], atol=1e-15)
    # arm is (s_x + l, 0, s_z), force (0, 0, -T): moment = (0, (s_x + l) T, 0)
    expected_my = (PARAMS.mount_x + PARAMS.link_length) * t
    assert np.allclose(wr.moment, [0.0, expected_my, 0.0], atol=1e-15)


def test_thruster_force_norm_equals_thrust():
    rng = np.random.default_rng(7)
    for _ in range(100):
        cmd = ThrusterCommand(
            thrust=rng.uniform(0, 0.06),
            yaw_deflection=rng.uniform(-np.pi / 2, np.pi / 2),
            pitch_deflection=rng.uniform(-np.pi / 2, np.pi / 2),
        )
        wr = thruster_wrench(PARAMS, cmd)
        assert np.linalg.norm(wr.force) == pytest.approx(cmd.thrust, abs=1e-14)


# --- full 6-DOF model ------------------------------------------------------

def test_full_hover_equilibrium():
    # Neutral buoyancy, at rest, level, no thrust: exact equilibrium.
    d = full_derivatives(PARAMS, BodyState(), ThrusterCommand())
    assert np.allclose(d, 0.0, atol=1e-15)


def test_full_not_equilibrium_when_heavy():
    heavy = AirshipParams(net_lift=-0.05)
    d = full_derivatives(heavy, BodyState(), ThrusterCommand())
    assert d[2] == pytest.approx(0.05 / heavy.mass)  # sinks: positive w (body z down)


def test_full_pure_yaw_torque():
    p = AirshipParams(inertia_xz=0.0)
    cmd = ThrusterCommand(thrust=0.03, yaw_deflection=0.2)
    d = full_derivatives(p, BodyState(), cmd)
    expected_rdot = p.mount_x * 0.03 * np.sin(0.2) / p.inertia_z
    assert d[5] == pytest.approx(expected_rdot, rel=1e-12)


def test_full_position_rates_are_rotated_velocity():
    rng = np.random.default_rng(8)
    for _ in range(50):
        st = BodyState(
            u=rng.uniform(-1, 1), v=rng.uniform(-1, 1), w=rng.uniform(-1, 1),
            p=rng.uniform(-1, 1), q=rng.uniform(-1, 1), r=rng.uniform(-1, 1),
            attitude=AttitudeAngles(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-3, 3)),
        )
        d = full_derivatives(PARAMS, st, ThrusterCommand())
        ground_vel = ground_to_body(st.attitude).T @ st.velocity()
        assert np.allclose(d[6:8], ground_vel[0:2], atol=1e-13)
        assert d[8] == pytest.approx(-ground_vel[2], abs=1e-13)


def test_full_position_rate_finite_difference_consistency():
    # d/dt of position from a tiny explicit-Euler step matches the derivative.
    st = BodyState(u=0.5, v=0.1, w=-0.2, attitude=AttitudeAngles(0.1, -0.2, 0.8))
    d = full_derivatives(PARAMS, st, ThrusterCommand())
    dt = 1e-7
    moved = st.as_array() + dt * d
    fd = (moved[6:9] - st.as_array()[6:9]) / dt
    assert np.allclose(fd, d[6:9], rtol=1e-9)


def test_singular_inertia_reported():
    bad = object.__new__(AirshipParams)
    for name, value in (("mass", 0.3), ("inertia_x", 1.0), ("inertia_y", 1.0),
                        ("inertia_z", 1.0), ("inertia_xz", 1.0), ("cb_offset", 0.1),
                        ("mount_x", 0.3), ("mount_z", 0.4), ("link_length", 0.1),
                        ("yaw_damping", 0.0), ("drag_coeff", 0.01), ("lift_slope", 0.0),
                        ("moment_slope", 0.0), ("ref_chord", 1.0), ("air_density", 1.2),
                        ("net_lift", 0.0), ("gravity", 9.80665)):
        object.__setattr__(bad, name, value)
    with pytest.raises(SingularInertia):
        full_derivatives(bad, BodyState(), ThrusterCommand())


def test_airship_params_validation():
    with pytest.raises(ValueError):
        AirshipParams(mass=0.0)
    with pytest.raises(ValueError):
        AirshipParams(inertia_xz=1.0)  # breaks positive definiteness
    with pytest.raises(ValueError):
        AirshipParams(yaw_damping=-0.1)


# --- planar model ----------------------------------------------------------

def test_planar_straight_cruise_no_yaw_rate():
    st = BodyState(u=0.8)
    d = planar_derivatives(PARAMS, st, ThrusterCommand(thrust=0.01))
    assert d[5] == pytest.approx(0.0, abs=1e-15)


def test_planar_kinematics_heading_east():
    st = BodyState(u=1.0, attitude=AttitudeAngles(psi=np.pi / 2))
    d = planar_derivatives(PARAMS, st, ThrusterCommand())
    assert d[6] == pytest.approx(0.0, abs=1e-12)
    assert d[7] == pytest.approx(1.0, rel=1e-12)


def test_planar_rejects_off_manifold_state():
    with pytest.raises(ConstraintViolation):
        planar_derivatives(PARAMS, BodyState(attitude=AttitudeAngles(theta=1e-6)), ThrusterCommand())
    with pytest.raises(ConstraintViolation):
        planar_derivatives(PARAMS, BodyState(q=1e-6), ThrusterCommand())


def test_planar_yaw_damping_decays_rate():
    p = AirshipParams(yaw_damping=0.01)
    st = BodyState(r=0.5)
    d = planar_derivatives(p, st, ThrusterCommand())
    assert d[5] == pytest.approx(-0.01 * 0.5 / p.inertia_z, rel=1e-12)
    # integrate: r decays monotonically toward zero
    r = 0.5
    dt = 0.01
    values = [r]
    for _ in range(2000):
        k = planar_derivatives(p, BodyState(r=r), ThrusterCommand())[5]
        r = r + dt * k
        values.append(r)
    assert all(b <= a for a, b in zip(values, values[1:]))
    assert values[-1] < 0.05


def test_planar_equilibrium_at_rest():
    d = planar_derivatives(PARAMS, BodyState(), ThrusterCommand())
    assert np.allclose(d, 0.0, atol=1e-15)


def test_full_matches_planar_on_manifold():
    # On phi = theta = p = q = 0 with Ixz = 0 the two models must agree on
    # every component the planar model carries. The full model's p_dot and
    # q_dot are the off-manifold accelerations that the pitch/roll stability
    # assumption suppresses, so they are the only components excluded here.
    p = AirshipParams(lift_slope=0.2, moment_slope=0.05, inertia_xz=0.0)
    rng = np.random.default_rng(42)
    compare = [0, 1, 2, 5, 6, 7, 8, 9, 10, 11]
    for _ in range(100):
        st = random_planar_state(rng)
        cmd = ThrusterCommand(
            thrust=rng.uniform(0, 0.05), yaw_deflection=rng.uniform(-1.5, 1.5)
        )
        df = full_derivatives(p, st, cmd)
        dp = planar_derivatives(p, st, cmd)
        assert np.allclose(df[compare], dp[compare], atol=1e-9)
        assert dp[3] == dp[4] == 0.0


def test_full_matches_planar_all_components_with_null_coupling():
    # Zero pitch-moment slope and a thruster link ending at CM height make
    # the full model's pitch/roll moments vanish on the manifold, so all 12
    # components agree.
    p = AirshipParams(
        lift_slope=0.2, moment_slope=0.0, inertia_xz=0.0,
        mount_z=-0.1, link_length=0.1,
    )
    rng = np.random.default_rng(43)
    for _ in range(100):
        st = random_planar_state(rng)
        cmd = ThrusterCommand(thrust=rng.uniform(0, 0.05), yaw_deflection=rng.uniform(-1.5, 1.5))
        assert np.allclose(
            full_derivatives(p, st, cmd), planar_derivatives(p, st, cmd), atol=1e-9
        )


# --- shared pieces ---------------------------------------------------------

def test_gravity_buoyancy_wrench_level():
    p = AirshipParams(net_lift=0.12)
    wr = gravity_buoyancy_wrench(p, AttitudeAngles())
    assert np.allclose(wr.force, [0.0, 0.0, -0.12], atol=1e-15)
    assert np.allclose(wr.moment, 0.0, atol=1e-15)


def test_gravity_buoyancy_restoring_moment_scales_with_weight():
    p = AirshipParams(net_lift=0.0)
    wr = gravity_buoyancy_wrench(p, AttitudeAngles(theta=0.1))
    expected = -p.cb_offset * p.mass * p.gravity * np.sin(0.1)
    assert wr.moment[1] == pytest.approx(expected, rel=1e-12)


def test_body_state_array_round_trip():
    st = BodyState(u=1, v=2, w=3, p=4e-3, q=5e-3, r=6e-3, x=7, y=8, h=9,
                   attitude=AttitudeAngles(0.1, 0.2, 0.3))
    again = BodyState.from_array(st.as_array())
    assert np.allclose(again.as_array(), st.as_array())


def test_thruster_command_validation():
    with pytest.raises(ValueError):
        ThrusterCommand(thrust=-0.01)
    with pytest.raises(ValueError):
        ThrusterCommand(thrust=0.01, yaw_deflection=2.0)
    with pytest.raises(ValueError):
        ThrusterCommand(thrust=0.01, pitch_deflection=-2.0)
