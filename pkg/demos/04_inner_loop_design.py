"""Inner-loop design walkthrough: linear model, gains, certificate, step.

Follows the full synthesis path. The surge channel gets a unity-DC-gain
proportional gain; the heave channel a lower bound; the coupled sway/yaw
pair is grid-searched and certified through the 2x2 Lyapunov equation.
"""

import numpy as np

from ionblimp import (
    AirshipParams,
    closed_loop_vr,
    design_ku_unity_dc,
    kw_lower_bound,
    linearize,
    lyapunov_certify,
    search_stabilizing_gains,
    step_response,
)
from ionblimp.inner_loop import U_CHANNEL_GAIN, U_CHANNEL_POLE, close_u_loop

params = AirshipParams(lift_slope=0.2, moment_slope=0.05)
speed, thrust = 1.0, 0.05

# ---------------------------------------------------------------------------
# Linear model about low-speed level flight.
# ---------------------------------------------------------------------------
model = linearize(params, speed, thrust)
print("A =")
print(np.array_str(model.a, precision=4, suppress_small=True))
print("B =")
print(np.array_str(model.b, precision=4, suppress_small=True))
print()
print("surge pole from the drag entry:  %.4f 1/s" % -model.a[0, 0])
print("surge pole of the fitted plant:  %.4f 1/s (used below)" % U_CHANNEL_POLE)
print()

# ---------------------------------------------------------------------------
# Surge gain: place the closed-loop DC gain at exactly one.
# ---------------------------------------------------------------------------
k_u = design_ku_unity_dc(U_CHANNEL_GAIN, U_CHANNEL_POLE)
tf = close_u_loop(k_u)
print("k_u = %.4f   closed pole %.4f 1/s   tau %.4f s   DC gain %.6f"
      % (k_u, tf.pole, tf.time_constant, tf.dc_gain))

t, y = step_response(tf, duration=2.0, dt=0.001)
for mark in (0.25, 0.5, 1.0, 2.0):
    print("  step response at t = %.2f s:  %.4f" % (mark, y[int(mark / 0.001)]))
print()

# ---------------------------------------------------------------------------
# Heave gain bound and the certified sway/yaw pair.
# ---------------------------------------------------------------------------
print("k_w lower bound: %.4f" % kw_lower_bound(params, speed, thrust))

found = search_stabilizing_gains(model, np.linspace(0, 5, 11), np.linspace(0, 5, 11))
k1, k2, cert = found
a_cl = closed_loop_vr(model, k1, k2)
print("first certified pair on the grid: k1 = %.1f, k2 = %.1f" % (k1, k2))
print("closed-loop eigenvalues:", np.round(np.linalg.eigvals(a_cl), 4))
print("Lyapunov matrix M =")
print(np.array_str(cert.m, precision=4))
print("residual |A'M + MA + I| = %.2e   min eig = %.4f   valid = %s"
      % (cert.residual, cert.min_eigenvalue, cert.is_valid))

# and a pair that cannot be certified
bad = lyapunov_certify(np.diag([1.0, -2.0]))
print()
print("counterexample diag(1, -2): min eig %.2f -> valid = %s"
      % (bad.min_eigenvalue, bad.is_valid))
