"""Physical constants shared across modules (SI units)."""

BOLTZMANN = 1.380649e-23  # J/K
STANDARD_GRAVITY = 9.80665  # m/s^2, used for gram-force <-> newton conversion
