"""Rigid-body force assembly and equations of motion for the blimp.

Two derivative fields over the same 12-component state:

* ``full_derivatives`` - 6-DOF translational/rotational dynamics with the
  product-of-inertia coupling Ixz, pendulum buoyancy moment, aero closure
  and vectored thrust.
* ``planar_derivatives`` - the level-attitude simplification (phi = theta =
  p = q = 0) where only surge/sway/heave, yaw and the ground track evolve.

State layout used by ``BodyState.as_array``/``from_array`` (and by every
derivative function):

    [u, v, w, p, q, r, x, y, h, phi, theta, psi]

u, v, w are body-frame velocities (m/s); p, q, r body rates (rad/s); x, y
ground-plane position (m); h altitude, positive up (m).

Both derivative fields include a net vertical lift force (buoyancy minus
weight, a single configurable number) and a linear yaw-damping moment
-C2*r. These appear in both models so that they agree exactly on the shared
planar manifold.
"""

from dataclasses import dataclass, field

import numpy as np

from .constants import STANDARD_GRAVITY
from .frames import (
    AttitudeAngles,
    StagnantFlow,
    Wrench,
    airflow_to_body,
    euler_rates_from_body_rates,
    flow_angles_from_velocity,
    ground_to_body,
)

# Tolerance for the planar-manifold constraint phi = theta = p = q = 0.
PLANAR_TOL = 1e-9

# Gimbal deflections are limited to +-90 deg from the forward direction
# (the servos sweep 0-180 deg around a 90 deg center).
GIMBAL_LIMIT = np.pi / 2


class SingularInertia(np.linalg.LinAlgError):
    """The coupled (p, r) inertia system cannot be inverted."""


class ConstraintViolation(ValueError):
    """State handed to the planar model leaves the level-attitude manifold."""


@dataclass(frozen=True)
class AirshipParams:
    """Physical constants of the vehicle (SI units).

    Aero coefficients use the folded convention: the reference area is
    absorbed into drag_coeff / lift_slope / moment_slope, so e.g. drag is
    0.5 * rho * V^2 * drag_coeff directly.
    """

    mass: float = 0.2978  # kg, all-up
    inertia_x: float = 0.0077  # kg m^2
    inertia_y: float = 0.0620  # kg m^2
    inertia_z: float = 0.0620  # kg m^2
    inertia_xz: float = 0.0  # kg m^2, roll/yaw product of inertia
    cb_offset: float = 0.20  # m, center of buoyancy above CM along body -z
    mount_x: float = 0.30  # m, thruster pivot forward of CM
    mount_z: float = 0.45  # m, thruster pivot below CM
    link_length: float = 0.10  # m, pivot-to-thruster link
    yaw_damping: float = 0.005  # N m s, linear yaw damping coefficient C2
    drag_coeff: float = 0.0071  # folded drag coefficient
    lift_slope: float = 0.0  # folded lift-curve slope, 1/rad
    moment_slope: float = 0.0  # folded pitch-moment slope, 1/rad
    ref_chord: float = 1.97  # m, moment reference length
    air_density: float = 1.205  # kg/m^3
    net_lift: float = 0.0  # N, buoyant lift minus weight (+ = rises)
    gravity: float = STANDARD_GRAVITY  # m/s^2

    def __post_init__(self):
        if self.mass <= 0.0:
            raise ValueError("mass must be positive")
        if min(self.inertia_x, self.inertia_y, self.inertia_z) <= 0.0:
            raise ValueError("principal inertias must be positive")
        if self.yaw_damping < 0.0:
            raise ValueError("yaw_damping must be non-negative")
        if self.air_density <= 0.0:
            raise ValueError("air_density must be positive")
        if np.min(np.linalg.eigvalsh(self.inertia_matrix())) <= 0.0:
            raise ValueError("inertia tensor (with Ixz coupling) must be positive definite")

    def inertia_matrix(self) -> np.ndarray:
        return np.array(
            [
                [self.inertia_x, 0.0, -self.inertia_xz],
                [0.0, self.inertia_y, 0.0],
                [-self.inertia_xz, 0.0, self.inertia_z],
            ]
        )


@dataclass(frozen=True)
class BodyState:
    """12-component rigid-body state."""

    u: float = 0.0
    v: float = 0.0
    w: float = 0.0
    p: float = 0.0
    q: float = 0.0
    r: float = 0.0
    x: float = 0.0
    y: float = 0.0
    h: float = 0.0
    attitude: AttitudeAngles = field(default_factory=AttitudeAngles)

    def as_array(self) -> np.ndarray:
        a = self.attitude
        return np.array(
            [self.u, self.v, self.w, self.p, self.q, self.r,
             self.x, self.y, self.h, a.phi, a.theta, a.psi]
        )

    @classmethod
    def from_array(cls, vec) -> "BodyState":
        vec = np.asarray(vec, dtype=float)
        if vec.shape != (12,):
            raise ValueError(f"state vector must have 12 components, got shape {vec.shape}")
        return cls(
            u=vec[0], v=vec[1], w=vec[2], p=vec[3], q=vec[4], r=vec[5],
            x=vec[6], y=vec[7], h=vec[8],
            attitude=AttitudeAngles(phi=vec[9], theta=vec[10], psi=vec[11]),
        )

    def velocity(self) -> np.ndarray:
        return np.array([self.u, self.v, self.w])

    def rates(self) -> np.ndarray:
        return np.array([self.p, self.q, self.r])


@dataclass(frozen=True)
class ThrusterCommand:
    """Thrust magnitude (N) and gimbal deflections from forward (rad)."""

    thrust: float = 0.0
    yaw_deflection: float = 0.0
    pitch_deflection: float = 0.0

    def __post_init__(self):
        if self.thrust < 0.0:
            raise ValueError("thrust must be non-negative")
        if abs(self.yaw_deflection) > GIMBAL_LIMIT + 1e-12:
            raise ValueError(f"|yaw_deflection| exceeds the {GIMBAL_LIMIT} rad servo limit")
        if abs(self.pitch_deflection) > GIMBAL_LIMIT + 1e-12:
            raise ValueError(f"|pitch_deflection| exceeds the {GIMBAL_LIMIT} rad servo limit")


def aero_wrench(params: AirshipParams, v_body) -> Wrench:
    """Aerodynamic force/moment in the body frame.

    Airflow-frame closures: drag D = q C_D, lift L = q C_La * alpha and
    pitch moment M = q c0 C_ma * alpha with q = 0.5 rho V^2 (reference area
    folded into the coefficients), assembled as force (-D, 0, -L) and
    moment (0, M, 0), then rotated to the body frame. Returns a zero wrench
    for stagnant flow.
    """
    v_body = np.asarray(v_body, dtype=float).reshape(3)
    try:
        flow = flow_angles_from_velocity(v_body)
    except StagnantFlow:
        return Wrench(force=np.zeros(3), moment=np.zeros(3), frame="body")
    speed_sq = float(v_body @ v_body)
    q_dyn = 0.5 * params.air_density * speed_sq
    drag = q_dyn * params.drag_coeff
    lift = q_dyn * params.lift_slope * flow.alpha
    pitch_moment = q_dyn * params.ref_chord * params.moment_slope * flow.alpha
    l_ba = airflow_to_body(flow)
    force = l_ba @ np.array([-drag, 0.0, -lift])
    moment = l_ba @ np.array([0.0, pitch_moment, 0.0])
    return Wrench(force=force, moment=moment, frame="body")


def thruster_wrench(params: AirshipParams, cmd: ThrusterCommand) -> Wrench:
    """Vectored-thrust force and moment in the body frame.

    The thrust line is tilted by the yaw/pitch gimbal angles; the moment
    arm is the mount position (mount_x, 0, mount_z) plus the deflected
    link. zero deflection puts the full thrust along +x_b.
    """
    t = cmd.thrust
    cy, sy = np.cos(cmd.yaw_deflection), np.sin(cmd.yaw_deflection)
    cp, sp = np.cos(cmd.pitch_deflection), np.sin(cmd.pitch_deflection)
    force = t * np.array([cy * cp, sy * cp, -sp])
    arm = np.array([params.mount_x, 0.0, params.mount_z]) + params.link_length * np.array(
        [cy * sp, sy * sp, cp]
    )
    return Wrench(force=force, moment=np.cross(arm, force), frame="body")


def gravity_buoyancy_wrench(params: AirshipParams, att: AttitudeAngles) -> Wrench:
    """Net vertical force plus the pendulum restoring moment, body frame.

    The translational effect of buoyancy and weight is their difference
    (params.net_lift, a single configurable number); the restoring moment
    is driven by the full weight acting against the CB offset, which is
    what sets the pendulum stiffness near neutral buoyancy.
    """
    l_bg = ground_to_body(att)
    force = l_bg @ np.array([0.0, 0.0, -params.net_lift])
    weight = params.mass * params.gravity
    moment = np.cross(
        np.array([0.0, 0.0, -params.cb_offset]),
        l_bg @ np.array([0.0, 0.0, -weight]),
    )
    return Wrench(force=force, moment=moment, frame="body")


def _total_wrench(params: AirshipParams, state: BodyState, cmd: ThrusterCommand):
    aero = aero_wrench(params, state.velocity())
    thrust = thruster_wrench(params, cmd)
    static = gravity_buoyancy_wrench(params, state.attitude)
    force = aero.force + thrust.force + static.force
    moment = aero.moment + thrust.moment + static.moment
    # Linear yaw damping; present in both the planar and the full model so
    # the two derivative fields agree on the shared manifold.
    moment = moment + np.array([0.0, 0.0, -params.yaw_damping * state.r])
    return force, moment


def full_derivatives(params: AirshipParams, state: BodyState, cmd: ThrusterCommand) -> np.ndarray:
    """Time derivative of the 12-component state for the 6-DOF model."""
    u, v, w = state.u, state.v, state.w
    p, q, r = state.p, state.q, state.r
    force, moment = _total_wrench(params, state, cmd)

    coriolis = np.array([v * r - w * q, -u * r + w * p, u * q - v * p])
    vel_dot = coriolis + force / params.mass

    ix, iy, iz, ixz = params.inertia_x, params.inertia_y, params.inertia_z, params.inertia_xz
    rhs = np.array(
        [
            moment[0] - q * r * (iz - iy) + p * q * ixz,
            moment[1] - p * r * (ix - iz) - (p * p - r * r) * ixz,
            moment[2] - p * q * (iy - ix) - q * r * ixz,
        ]
    )
    try:
        rate_dot = np.linalg.solve(params.inertia_matrix(), rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularInertia(f"inertia system not invertible: {exc}") from exc

    euler_dot = euler_rates_from_body_rates(state.attitude, state.rates())
    ground_vel = ground_to_body(state.attitude).T @ state.velocity()

    out = np.empty(12)
    out[0:3] = vel_dot
    out[3:6] = rate_dot
    out[6] = ground_vel[0]
    out[7] = ground_vel[1]
    out[8] = -ground_vel[2]  # ground z points down, h is measured up
    out[9:12] = euler_dot
    return out


def planar_derivatives(params: AirshipParams, state: BodyState, cmd: ThrusterCommand) -> np.ndarray:
    """Time derivative of the state for the level-attitude planar model.

    Raises ConstraintViolation if phi, theta, p or q exceed PLANAR_TOL:
    this model assumes the pendulum stability of the hull pins pitch and
    roll at zero, so those components must arrive (and stay) zero.
    """
    att = state.attitude
    off_manifold = max(abs(att.phi), abs(att.theta), abs(state.p), abs(state.q))
    if off_manifold > PLANAR_TOL:
        raise ConstraintViolation(
            f"planar model requires phi=theta=p=q=0, worst violation {off_manifold:.3e}"
        )

    u, v, w, r = state.u, state.v, state.w, state.r
    force, moment = _total_wrench(params, state, cmd)

    vel_dot = np.array([v * r, -u * r, 0.0]) + force / params.mass
    r_dot = moment[2] / params.inertia_z

    cpsi, spsi = np.cos(att.psi), np.sin(att.psi)
    out = np.zeros(12)
    out[0:3] = vel_dot
    out[5] = r_dot
    out[6] = u * cpsi - v * spsi
    out[7] = u * spsi + v * cpsi
    out[8] = -w
    out[11] = r
    return out
