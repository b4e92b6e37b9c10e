"""Attitude representations and frame rotations for the blimp simulator.

Conventions
-----------
* Ground frame: x north-ish, y east-ish, z DOWN. Altitude h is measured up,
  so the ground z coordinate is -h.
* Body frame: x forward along the hull axis, y starboard, z down.
* Airflow frame: x_a along the freestream (flight velocity), z_a in the
  x_b/x_a plane.
* All angles are radians everywhere inside the library. Degrees exist only
  at the config/CLI boundary.
* Rotation matrices map COMPONENTS into the body frame, e.g.
  ``v_body = ground_to_body(att) @ v_ground``.

All functions are pure and safe to call from any thread.
"""

from dataclasses import dataclass

import numpy as np

# Below this speed the flow direction is undefined and aero forces are zeroed.
V_EPS = 1e-6

# Flow angles saturate just inside +-pi/2 so the aero closures stay finite.
_FLOW_ANGLE_LIMIT = np.pi / 2 - 1e-9


class StagnantFlow(ValueError):
    """Airspeed below V_EPS: aero angles undefined, forces must be zeroed."""


def wrap_angle(angle: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    wrapped = (angle + np.pi) % (2.0 * np.pi) - np.pi
    if wrapped == -np.pi:
        wrapped = np.pi
    return float(wrapped)


def angle_difference(a: float, b: float) -> float:
    """Shortest-path difference a - b, wrapped to (-pi, pi]."""
    return wrap_angle(a - b)


@dataclass(frozen=True)
class AttitudeAngles:
    """Roll, pitch, yaw (rad), each wrapped to (-pi, pi] on construction."""

    phi: float = 0.0
    theta: float = 0.0
    psi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "phi", wrap_angle(self.phi))
        object.__setattr__(self, "theta", wrap_angle(self.theta))
        object.__setattr__(self, "psi", wrap_angle(self.psi))


@dataclass(frozen=True)
class FlowAngles:
    """Angle of attack and sideslip (rad), both strictly inside (-pi/2, pi/2)."""

    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if not (abs(self.alpha) < np.pi / 2 and abs(self.beta) < np.pi / 2):
            raise ValueError(
                f"flow angles must lie in (-pi/2, pi/2), got alpha={self.alpha}, beta={self.beta}"
            )


@dataclass(frozen=True)
class Wrench:
    """Force/moment pair tagged with the frame its components live in."""

    force: np.ndarray
    moment: np.ndarray
    frame: str = "body"

    _FRAMES = ("body", "airflow", "ground")

    def __post_init__(self):
        object.__setattr__(self, "force", np.asarray(self.force, dtype=float).reshape(3))
        object.__setattr__(self, "moment", np.asarray(self.moment, dtype=float).reshape(3))
        if self.frame not in self._FRAMES:
            raise ValueError(f"unknown frame tag {self.frame!r}, expected one of {self._FRAMES}")


def ground_to_body(att: AttitudeAngles) -> np.ndarray:
    """Rotation taking ground-frame components to body-frame components.

    Built as roll(x) @ pitch(y) @ yaw(z), the classic Z-Y-X sequence.
    """
    cphi, sphi = np.cos(att.phi), np.sin(att.phi)
    cth, sth = np.cos(att.theta), np.sin(att.theta)
    cpsi, spsi = np.cos(att.psi), np.sin(att.psi)
    roll = np.array([[1.0, 0.0, 0.0], [0.0, cphi, sphi], [0.0, -sphi, cphi]])
    pitch = np.array([[cth, 0.0, -sth], [0.0, 1.0, 0.0], [sth, 0.0, cth]])
    yaw = np.array([[cpsi, spsi, 0.0], [-spsi, cpsi, 0.0], [0.0, 0.0, 1.0]])
    return roll @ pitch @ yaw


def airflow_to_body(flow: FlowAngles) -> np.ndarray:
    """Rotation taking airflow-frame components to body-frame components.

    Product of the sideslip roll factor and the attack pitch factor.
    """
    ca, sa = np.cos(flow.alpha), np.sin(flow.alpha)
    cb, sb = np.cos(flow.beta), np.sin(flow.beta)
    roll_beta = np.array([[1.0, 0.0, 0.0], [0.0, cb, -sb], [0.0, sb, cb]])
    pitch_alpha = np.array([[ca, 0.0, sa], [0.0, 1.0, 0.0], [-sa, 0.0, ca]])
    return roll_beta @ pitch_alpha


def body_rates_from_euler_rates(att: AttitudeAngles, euler_rates) -> np.ndarray:
    """Map attitude-angle rates (phi_dot, theta_dot, psi_dot) to body rates (p, q, r)."""
    phid, thd, psid = np.asarray(euler_rates, dtype=float)
    cphi, sphi = np.cos(att.phi), np.sin(att.phi)
    cth, sth = np.cos(att.theta), np.sin(att.theta)
    return np.array(
        [
            phid - psid * sth,
            thd * cphi + psid * cth * sphi,
            -thd * sphi + psid * cth * cphi,
        ]
    )


def euler_rates_from_body_rates(att: AttitudeAngles, body_rates) -> np.ndarray:
    """Invert the attitude-rate kinematics: (p, q, r) -> (phi_dot, theta_dot, psi_dot).

    Singular at theta = +-pi/2 (cos(theta) = 0), like every Euler-angle chart.
    """
    p, q, r = np.asarray(body_rates, dtype=float)
    cphi, sphi = np.cos(att.phi), np.sin(att.phi)
    cth = np.cos(att.theta)
    if abs(cth) < 1e-12:
        raise ZeroDivisionError("attitude-rate kinematics singular at theta = +-pi/2")
    tth = np.tan(att.theta)
    return np.array(
        [
            p + (q * sphi + r * cphi) * tth,
            q * cphi - r * sphi,
            (q * sphi + r * cphi) / cth,
        ]
    )


def flow_angles_from_velocity(v_body) -> FlowAngles:
    """Extract attack/sideslip angles from the body-frame velocity.

    alpha = atan2(w, u), beta = asin(v / |v|). Raises StagnantFlow when the
    airspeed is below V_EPS; callers must zero aero forces in that case.
    Angles saturate just inside +-pi/2 (the aero closures are only meaningful
    well away from that boundary).
    """
    u, v, w = np.asarray(v_body, dtype=float)
    speed = float(np.sqrt(u * u + v * v + w * w))
    if speed <= V_EPS:
        raise StagnantFlow(f"airspeed {speed} m/s is below V_EPS={V_EPS}")
    alpha = np.clip(np.arctan2(w, u), -_FLOW_ANGLE_LIMIT, _FLOW_ANGLE_LIMIT)
    beta = np.clip(np.arcsin(np.clip(v / speed, -1.0, 1.0)), -_FLOW_ANGLE_LIMIT, _FLOW_ANGLE_LIMIT)
    return FlowAngles(alpha=float(alpha), beta=float(beta))


def velocity_from_flow_angles(speed: float, flow: FlowAngles) -> np.ndarray:
    """Rebuild the body-frame velocity from airspeed and flow angles."""
    ca, sa = np.cos(flow.alpha), np.sin(flow.alpha)
    cb, sb = np.cos(flow.beta), np.sin(flow.beta)
    return speed * np.array([ca * cb, sb, sa * cb])


def is_rotation_matrix(mat: np.ndarray, tol: float = 1e-12) -> bool:
    """True when mat is orthonormal with determinant +1 within tol."""
    mat = np.asarray(mat, dtype=float)
    if mat.shape != (3, 3):
        return False
    ortho = np.max(np.abs(mat.T @ mat - np.eye(3)))
    return bool(ortho <= tol and abs(np.linalg.det(mat) - 1.0) <= tol)
