"""Sliding-mode trajectory tracking over the lateral-planar model.

The tracked pose is eta = (x, y, psi) in the ground frame; the body-frame
state is X = (u, v, r) = C_bg(psi) @ eta_dot. The plant model is

    M_s @ X_dot = A_s @ X + B_s @ U

with M_s the generalized mass (rigid mass plus added mass, with CG offset
coupling), A_s the aero-derivative matrix and B_s an input map (identity by
default). The controller drives the sliding variable s = c1*e + c2*e_dot to
zero along the exponential reaching law s_dot = -eps*sgn(s) - k*s.

The control law is the inverse-dynamics expression obtained from
X = C eta_dot, X_dot = C_dot eta_dot + C eta_ddot:

    U = B_s^-1 @ (M_s C_dot eta_dot - A_s C eta_dot + M_s C eta_ddot_req)
    eta_ddot_req = -(1/c2) * (eps*sgn(s) + k*s + c1*e_dot)

Substituted back into the plant this yields s_dot equal to the reaching
law exactly (the reference acceleration is treated as zero, so references
should be piecewise-linear in time).

The controller is a pure function of its arguments; the simulation harness
owns all state.
"""

from dataclasses import dataclass, field

import numpy as np

from .dynamics import GIMBAL_LIMIT, ThrusterCommand
from .frames import angle_difference


class SingularTransform(np.linalg.LinAlgError):
    """Pose transform not invertible; the control law cannot be evaluated."""


@dataclass(frozen=True)
class SmcModel:
    """Lateral-plane plant matrices for controller synthesis."""

    mass_matrix: np.ndarray
    aero_matrix: np.ndarray
    input_matrix: np.ndarray = field(default_factory=lambda: np.eye(3))

    def __post_init__(self):
        object.__setattr__(self, "mass_matrix", np.asarray(self.mass_matrix, dtype=float).reshape(3, 3))
        object.__setattr__(self, "aero_matrix", np.asarray(self.aero_matrix, dtype=float).reshape(3, 3))
        object.__setattr__(self, "input_matrix", np.asarray(self.input_matrix, dtype=float).reshape(3, 3))
        if abs(np.linalg.det(self.mass_matrix)) < 1e-15:
            raise ValueError("mass_matrix is singular")
        if abs(np.linalg.det(self.input_matrix)) < 1e-15:
            raise ValueError("input_matrix is singular")

    @classmethod
    def from_components(
        cls,
        mass: float,
        inertia_z: float,
        added_mass_x: float = 0.0,
        added_mass_y: float = 0.0,
        added_inertia_z: float = 0.0,
        cg_x: float = 0.0,
        cg_y: float = 0.0,
        aero_matrix=None,
        printed_mass_matrix: bool = False,
    ) -> "SmcModel":
        """Assemble the generalized mass matrix from physical components.

        The default is the standard symmetric form

            [[m + m11,      0,     -m*y_G],
             [0,        m + m22,    m*x_G],
             [-m*y_G,    m*x_G,  Iz + m66]]

        ``printed_mass_matrix=True`` selects a legacy variant whose second
        row reads (m + m22, 0, m*x_G); that matrix is singular whenever
        x_G = 0, in which case construction fails fast rather than letting
        a later inversion blow up.
        """
        m11, m22, m66 = added_mass_x, added_mass_y, added_inertia_z
        if printed_mass_matrix:
            mass_matrix = np.array(
                [
                    [mass + m11, 0.0, -mass * cg_y],
                    [mass + m22, 0.0, mass * cg_x],
                    [-mass * cg_y, mass * cg_x, inertia_z + m66],
                ]
            )
        else:
            mass_matrix = np.array(
                [
                    [mass + m11, 0.0, -mass * cg_y],
                    [0.0, mass + m22, mass * cg_x],
                    [-mass * cg_y, mass * cg_x, inertia_z + m66],
                ]
            )
        if aero_matrix is None:
            aero_matrix = np.zeros((3, 3))
        return cls(mass_matrix=mass_matrix, aero_matrix=aero_matrix)


@dataclass(frozen=True)
class SmcGains:
    """Sliding-surface weights, reaching gains and optional sgn smoothing.

    boundary_layer > 0 replaces sgn(s) with s/(|s|+boundary_layer); the
    default 0 keeps the exact sign function with sgn(0) = 0.
    """

    c1: float
    c2: float
    epsilon: float
    k: float
    boundary_layer: float = 0.0

    def __post_init__(self):
        if self.c2 == 0.0:
            raise ValueError("c2 must be nonzero")
        if self.epsilon < 0.0:
            raise ValueError("epsilon must be non-negative")
        if self.k <= 0.0:
            raise ValueError("k must be positive")
        if self.boundary_layer < 0.0:
            raise ValueError("boundary_layer must be non-negative")


@dataclass(frozen=True)
class TrackingError:
    """Pose tracking error and its rate; the yaw component is wrapped."""

    error: np.ndarray
    error_rate: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "error", np.asarray(self.error, dtype=float).reshape(3))
        object.__setattr__(self, "error_rate", np.asarray(self.error_rate, dtype=float).reshape(3))

    @classmethod
    def from_pose(cls, pose, pose_rate, ref_pose, ref_rate) -> "TrackingError":
        pose = np.asarray(pose, dtype=float)
        ref_pose = np.asarray(ref_pose, dtype=float)
        err = pose - ref_pose
        err[2] = angle_difference(pose[2], ref_pose[2])
        return cls(error=err, error_rate=np.asarray(pose_rate, dtype=float) - np.asarray(ref_rate, dtype=float))


def _sgn(s: np.ndarray, boundary_layer: float) -> np.ndarray:
    if boundary_layer > 0.0:
        return s / (np.abs(s) + boundary_layer)
    return np.sign(s)


def sliding_surface(gains: SmcGains, err: TrackingError) -> np.ndarray:
    """s = c1*e + c2*e_dot, componentwise over (x, y, psi)."""
    return gains.c1 * err.error + gains.c2 * err.error_rate


def reaching_law(gains: SmcGains, s) -> np.ndarray:
    """Target sliding-variable rate: -eps*sgn(s) - k*s, with sgn(0) = 0."""
    s = np.asarray(s, dtype=float)
    return -gains.epsilon * _sgn(s, gains.boundary_layer) - gains.k * s


def lyapunov_monitor(gains: SmcGains, s):
    """Per-channel Lyapunov value V = s^2/2 and its rate -eps|s| - k s^2."""
    s = np.asarray(s, dtype=float)
    v = 0.5 * s * s
    v_dot = -gains.epsilon * np.abs(s) - gains.k * s * s
    return v, v_dot


def reaching_time_bound(gains: SmcGains, s0: float) -> float:
    """Analytic upper bound on the time to reach s = 0 from |s0|.

    For s_dot = -eps*sgn(s) - k*s the exact arrival time is
    (1/k) * ln(1 + k|s0|/eps); with eps = 0 the surface is only approached
    asymptotically and the bound is infinite.
    """
    if gains.epsilon == 0.0:
        return np.inf
    return float(np.log1p(gains.k * abs(s0) / gains.epsilon) / gains.k)


def smc_control(
    model: SmcModel,
    gains: SmcGains,
    eta,
    eta_dot,
    err: TrackingError,
    c_bg: np.ndarray,
    c_bg_dot: np.ndarray,
) -> np.ndarray:
    """Generalized force demand U = (F_x, F_y, N_z) for the lateral plant.

    Inverse dynamics through X = C_bg @ eta_dot with the reaching law as
    the demanded error acceleration. The ``eta`` argument is accepted for
    interface completeness (the law itself depends on pose only through
    the supplied error and transforms).
    """
    del eta  # pose enters via err and the transforms
    eta_dot = np.asarray(eta_dot, dtype=float).reshape(3)
    c_bg = np.asarray(c_bg, dtype=float).reshape(3, 3)
    c_bg_dot = np.asarray(c_bg_dot, dtype=float).reshape(3, 3)
    if abs(np.linalg.det(c_bg)) < 1e-12:
        raise SingularTransform("pose transform c_bg is singular")

    s = sliding_surface(gains, err)
    eta_ddot_req = -(1.0 / gains.c2) * (
        gains.epsilon * _sgn(s, gains.boundary_layer)
        + gains.k * s
        + gains.c1 * err.error_rate
    )
    demand = (
        model.mass_matrix @ (c_bg_dot @ eta_dot)
        - model.aero_matrix @ (c_bg @ eta_dot)
        + model.mass_matrix @ (c_bg @ eta_ddot_req)
    )
    return np.linalg.solve(model.input_matrix, demand)


def pose_acceleration(model: SmcModel, u_forces, eta_dot, c_bg, c_bg_dot) -> np.ndarray:
    """Pose acceleration of the lateral plant under generalized forces.

    eta_ddot = C^-1 (M^-1 (A C eta_dot + B U) - C_dot eta_dot); the same
    kinematic identity the control law inverts, so controller and plant
    share one definition of the dynamics.
    """
    u_forces = np.asarray(u_forces, dtype=float).reshape(3)
    eta_dot = np.asarray(eta_dot, dtype=float).reshape(3)
    c_bg = np.asarray(c_bg, dtype=float).reshape(3, 3)
    c_bg_dot = np.asarray(c_bg_dot, dtype=float).reshape(3, 3)
    x_dot = np.linalg.solve(
        model.mass_matrix,
        model.aero_matrix @ (c_bg @ eta_dot) + model.input_matrix @ u_forces,
    )
    return np.linalg.solve(c_bg, x_dot - c_bg_dot @ eta_dot)


def allocate_actuation(
    u_forces,
    t_max: float,
    yaw_limit: float = GIMBAL_LIMIT,
    mount_arm_x: float = 0.0,
):
    """Map generalized forces (F_x, F_y, N_z) onto the single vectored thruster.

    T = min(|F_xy|, t_max) and delta_y = atan2(F_y, F_x) clamped to the
    gimbal limit; the pitch gimbal stays at zero (no vertical channel in
    the lateral plant). The residual reports the unmet generalized force:
    force components are requested-minus-realized exactly, and the moment
    component is N_z minus the moment the mount arm produces
    (mount_arm_x * T * sin(delta_y)). Saturation is never hidden: it shows
    up in the residual.
    """
    if t_max <= 0.0:
        raise ValueError("t_max must be positive")
    fx, fy, nz = np.asarray(u_forces, dtype=float).reshape(3)
    requested = float(np.hypot(fx, fy))
    thrust = min(requested, t_max)
    delta_y = float(np.arctan2(fy, fx)) if requested > 0.0 else 0.0
    delta_y = float(np.clip(delta_y, -yaw_limit, yaw_limit))
    realized_x = thrust * np.cos(delta_y)
    realized_y = thrust * np.sin(delta_y)
    residual = np.array(
        [fx - realized_x, fy - realized_y, nz - mount_arm_x * realized_y]
    )
    cmd = ThrusterCommand(thrust=thrust, yaw_deflection=delta_y, pitch_deflection=0.0)
    return cmd, residual


@dataclass(frozen=True)
class ReferenceTrajectory:
    """Sampled (t, x, y, psi) reference with linear interpolation.

    The yaw column is unwrapped on construction so interpolation never
    jumps across the +-pi seam; sampled rates are the segment slopes.
    """

    times: np.ndarray
    poses: np.ndarray  # shape (n, 3): x, y, psi (unwrapped)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        poses = np.asarray(self.poses, dtype=float)
        if times.ndim != 1 or poses.shape != (times.size, 3):
            raise ValueError("times must be (n,) and poses (n, 3)")
        if times.size < 2 or np.any(np.diff(times) <= 0.0):
            raise ValueError("need at least two strictly increasing sample times")
        poses = poses.copy()
        poses[:, 2] = np.unwrap(poses[:, 2])
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "poses", poses)

    @classmethod
    def from_file(cls, path) -> "ReferenceTrajectory":
        data = np.loadtxt(path, comments="#", ndmin=2)
        if data.shape[1] != 4:
            raise ValueError(f"expected four columns (t, x, y, psi) in {path}")
        return cls(times=data[:, 0], poses=data[:, 1:4])

    def sample(self, t: float):
        """Pose and pose rate at time t; constant beyond the table ends."""
        t = float(np.clip(t, self.times[0], self.times[-1]))
        idx = int(np.searchsorted(self.times, t, side="right") - 1)
        idx = min(max(idx, 0), self.times.size - 2)
        t0, t1 = self.times[idx], self.times[idx + 1]
        p0, p1 = self.poses[idx], self.poses[idx + 1]
        frac = (t - t0) / (t1 - t0)
        pose = p0 + frac * (p1 - p0)
        rate = (p1 - p0) / (t1 - t0)
        if t >= self.times[-1]:
            rate = np.zeros(3)
        return pose, rate
