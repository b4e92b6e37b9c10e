"""Ionic-wind thruster physics and measured thrust maps.

Two complementary views of the same device live here:

* Kinetic closed forms for the ion/neutral momentum exchange in the drift
  region (collision force density, mobility, diffusivity, and the
  gap-current thrust law), together with a seeded Monte-Carlo evaluator of
  the underlying double-Maxwellian collision integral. The Monte-Carlo
  routine is deliberately independent of the closed form so each can check
  the other.
* Empirical thrust maps measured on the bench: thrust vs throttle for the
  quad-ring build and thrust vs electrode spacing for the dual-ring build.
  The two data sets come from different hardware generations and must not
  be mixed in one map.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .constants import BOLTZMANN, STANDARD_GRAVITY

# Typical positive air-ion mobility, m^2/(V s). Used wherever a numeric
# mobility is needed; the kinetic formula needs a cross-section value the
# bench work never pinned down.
DEFAULT_ION_MOBILITY = 2.0e-4

# Electrode gaps at or below this distance arc through the collector foil.
PUNCTURE_SPACING = 0.025


class OutOfRange(ValueError):
    """Input outside the validity range of a thrust map."""


class PunctureFault(RuntimeError):
    """Electrode gap small enough to burn through the collector foil."""


class ExtrapolatedThrustWarning(UserWarning):
    """Thrust was extrapolated outside the measured sample range."""


@dataclass(frozen=True)
class GasIonParams:
    """Kinetic parameters of the ion and neutral populations (SI units)."""

    ion_mass: float  # kg
    neutral_mass: float  # kg
    temperature: float  # K
    ion_charge: float  # C
    cross_section: float  # m^2, momentum-transfer collision cross section
    ion_density: float  # 1/m^3
    neutral_density: float  # 1/m^3

    def __post_init__(self):
        for name in ("ion_mass", "neutral_mass", "temperature", "ion_charge",
                     "cross_section", "ion_density", "neutral_density"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be strictly positive")

    @property
    def reduced_mass(self) -> float:
        return self.ion_mass * self.neutral_mass / (self.ion_mass + self.neutral_mass)


@dataclass(frozen=True)
class ThrusterGeometry:
    """Ring-thruster build geometry and dry mass."""

    electrode_gap: float  # m, emitter wire to collector foil
    ring_count: int
    ring_spacing: float  # m, between adjacent rings
    wire_diameter: float  # m, emitter copper wire
    foil_width: float  # m, collector aluminum foil
    dry_mass: float  # kg

    def __post_init__(self):
        if self.electrode_gap <= 0.0:
            raise ValueError("electrode_gap must be positive")
        if self.ring_count not in (1, 2, 4):
            raise ValueError("ring_count must be 1, 2 or 4 (bench-matching presets)")


# Final quad-ring flight build: 3.0 cm gap (the 2.5 cm gap of the data sheet
# punctures; the flight configuration settled on 3.0 cm).
QUAD_RING = ThrusterGeometry(
    electrode_gap=0.030,
    ring_count=4,
    ring_spacing=0.00944,
    wire_diameter=0.0001,
    foil_width=0.040,
    dry_mass=0.01964,
)

# Dual-ring spacing-sweep build; nominal 25 mm gap, swept 2.5-5.0 cm on the bench.
DUAL_RING = ThrusterGeometry(
    electrode_gap=0.025,
    ring_count=2,
    ring_spacing=0.00944,
    wire_diameter=0.0001,
    foil_width=0.040,
    dry_mass=0.01600,
)


def collision_force_density(p: GasIonParams, slip_velocity) -> np.ndarray:
    """Closed-form momentum exchange rate between ions and neutrals, N/m^3.

    f = (64/9) * Omega_D * sqrt(kT / 2pi) * sqrt(m M / (m + M))
        * n_ion * n_air * u

    where u is the mean slip velocity between the two populations. The
    result is exactly linear in u; it is the small-drift limit of the full
    collision integral (see collision_force_density_mc), accurate to about
    (|u| / thermal speed)^2 / 10 in relative terms.
    """
    u = np.asarray(slip_velocity, dtype=float).reshape(3)
    coeff = (
        64.0 / 9.0
        * p.cross_section
        * np.sqrt(BOLTZMANN * p.temperature / (2.0 * np.pi))
        * np.sqrt(p.reduced_mass)
        * p.ion_density
        * p.neutral_density
    )
    return coeff * u


def collision_force_density_mc(
    p: GasIonParams,
    slip_velocity,
    n_samples: int = 10_000_000,
    seed: int = 0,
    chunk: int = 1_000_000,
) -> np.ndarray:
    """Monte-Carlo evaluation of the hard-sphere collision integral, N/m^3.

    Samples neutral velocities from a Maxwellian drifting at the slip
    velocity and ion velocities from a zero-mean Maxwellian, then averages

        Omega_D * |g| * (4/3) * (m M / (m + M)) * g,   g = v_air - v_ion,

    scaled by the two number densities. Deterministic for a fixed seed and
    sample count. This is the independent oracle for
    collision_force_density and is kept free of that closed form.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    u = np.asarray(slip_velocity, dtype=float).reshape(3)
    rng = np.random.default_rng(seed)
    sigma_air = np.sqrt(BOLTZMANN * p.temperature / p.neutral_mass)
    sigma_ion = np.sqrt(BOLTZMANN * p.temperature / p.ion_mass)
    total = np.zeros(3)
    done = 0
    while done < n_samples:
        n = min(chunk, n_samples - done)
        v_air = rng.normal(0.0, sigma_air, (n, 3)) + u
        v_ion = rng.normal(0.0, sigma_ion, (n, 3))
        g = v_air - v_ion
        speed = np.linalg.norm(g, axis=1)
        total += (speed[:, None] * g).sum(axis=0)
        done += n
    mean = total / n_samples
    return p.cross_section * (4.0 / 3.0) * p.reduced_mass * p.ion_density * p.neutral_density * mean


def ion_mobility(p: GasIonParams, override: float | None = None) -> float:
    """Ion mobility, m^2/(V s).

    Implements the kinetic definition verbatim:

        mu_i = (9/64) * (q / n_air) * sqrt(2 pi / kT)
               * sqrt(1/m + 1/M) * Omega_D

    As written the cross section multiplies the mobility; dimensional
    analysis (more collisions should mean lower mobility) suggests it
    should divide instead, see mobility_from_force_balance. Both are
    exposed rather than silently reconciled, and a numeric override is
    available for when a measured mobility is known (pass e.g.
    DEFAULT_ION_MOBILITY).
    """
    if override is not None:
        return float(override)
    return (
        9.0 / 64.0
        * (p.ion_charge / p.neutral_density)
        * np.sqrt(2.0 * np.pi / (BOLTZMANN * p.temperature))
        * np.sqrt(1.0 / p.ion_mass + 1.0 / p.neutral_mass)
        * p.cross_section
    )


def mobility_from_force_balance(p: GasIonParams) -> float:
    """Mobility implied by balancing the electric force against collisions.

    Setting E * n_ion * q equal to the closed-form collision force and
    solving for u = mu * E gives

        mu = (9/64) * (q / n_air) * sqrt(2 pi / kT)
             * sqrt(1/m + 1/M) / Omega_D

    i.e. the verbatim kinetic definition with the cross section moved to
    the denominator. This form round-trips exactly against
    collision_force_density.
    """
    return (
        9.0 / 64.0
        * (p.ion_charge / p.neutral_density)
        * np.sqrt(2.0 * np.pi / (BOLTZMANN * p.temperature))
        * np.sqrt(1.0 / p.ion_mass + 1.0 / p.neutral_mass)
        / p.cross_section
    )


def einstein_diffusivity(mobility: float, temperature: float, charge: float) -> float:
    """Ion diffusivity from the Einstein relation: D = mu * kT / q, m^2/s."""
    if mobility < 0.0 or temperature <= 0.0 or charge <= 0.0:
        raise ValueError("mobility must be >= 0, temperature and charge > 0")
    return mobility * BOLTZMANN * temperature / charge


def thrust_from_current(
    gap: float,
    current: float,
    mobility: float,
    axis_pos_to_neg=(1.0, 0.0, 0.0),
) -> np.ndarray:
    """Drift-region thrust vector for a given gap and corona current, N.

    |T| = gap * current / mobility, directed from the negative electrode
    toward the positive electrode (opposite to axis_pos_to_neg). Linear in
    both gap and current.
    """
    if gap <= 0.0:
        raise ValueError("gap must be positive")
    if current < 0.0:
        raise ValueError("current must be non-negative")
    if mobility <= 0.0:
        raise ValueError("mobility must be positive")
    axis = np.asarray(axis_pos_to_neg, dtype=float).reshape(3)
    norm = np.linalg.norm(axis)
    if norm == 0.0:
        raise ValueError("axis_pos_to_neg must be a nonzero vector")
    return -(gap * current / mobility) * (axis / norm)


@dataclass(frozen=True)
class ThrustMap:
    """Measured (input, thrust-grams) samples with linear interpolation.

    Inputs must be strictly increasing; thrust readings are grams-force as
    read off the bench scale. valid_range brackets the inputs the map may
    be queried at without extrapolating.
    """

    inputs: tuple
    thrust_grams: tuple
    valid_range: tuple
    interpolation: str = "linear"

    def __post_init__(self):
        if len(self.inputs) != len(self.thrust_grams) or len(self.inputs) < 2:
            raise ValueError("need at least two (input, thrust) samples")
        if any(b <= a for a, b in zip(self.inputs, self.inputs[1:])):
            raise ValueError("inputs must be strictly increasing")
        if any(g < 0.0 for g in self.thrust_grams):
            raise ValueError("thrust samples must be non-negative")
        if self.interpolation != "linear":
            raise ValueError("only linear interpolation is supported")


# Quad-ring thrust vs throttle fraction. Below 20% throttle the corona has
# not struck and the thrust is zero.
THROTTLE_MAP = ThrustMap(
    inputs=(0.20, 0.30, 0.40, 0.50, 0.60, 0.70, 0.80, 0.90, 1.00),
    thrust_grams=(0.00, 0.06, 0.12, 0.31, 0.45, 0.58, 0.70, 1.16, 1.20),
    valid_range=(0.0, 1.0),
)

# Dual-ring thrust vs electrode spacing (m). 2.5 cm punctured the foil.
SPACING_MAP_DUAL_RING = ThrustMap(
    inputs=(0.030, 0.035, 0.040, 0.045, 0.050),
    thrust_grams=(1.16, 1.10, 0.99, 0.90, 0.80),
    valid_range=(0.030, 0.050),
)


def grams_force_to_newtons(grams: float) -> float:
    return grams * 1e-3 * STANDARD_GRAVITY


def throttle_to_thrust(tmap: ThrustMap, throttle: float) -> float:
    """Thrust in newtons for a throttle fraction in [0, 1].

    Piecewise-linear between samples; throttle below the first sample
    clamps to zero thrust (corona-onset threshold). Raises OutOfRange
    outside [0, 1].
    """
    lo, hi = tmap.valid_range
    if not (lo <= throttle <= hi):
        raise OutOfRange(f"throttle {throttle} outside [{lo}, {hi}]")
    if throttle <= tmap.inputs[0]:
        grams = tmap.thrust_grams[0]
    else:
        grams = float(np.interp(throttle, tmap.inputs, tmap.thrust_grams))
    return grams_force_to_newtons(grams)


def spacing_to_thrust(tmap: ThrustMap, spacing: float) -> float:
    """Thrust in newtons for an electrode spacing in meters.

    Raises PunctureFault at or below 2.5 cm (tip discharge burns the foil).
    Between the puncture limit and the first measured sample the nearest
    segment is extended linearly and an ExtrapolatedThrustWarning is
    issued; beyond the last sample the value clamps to the final reading.
    """
    if spacing <= 0.0:
        raise ValueError("spacing must be positive")
    if spacing <= PUNCTURE_SPACING:
        raise PunctureFault(
            f"spacing {spacing:.4f} m <= {PUNCTURE_SPACING} m: foil puncture"
        )
    if spacing < tmap.inputs[0]:
        x0, x1 = tmap.inputs[0], tmap.inputs[1]
        g0, g1 = tmap.thrust_grams[0], tmap.thrust_grams[1]
        grams = g0 + (spacing - x0) * (g1 - g0) / (x1 - x0)
        warnings.warn(
            f"spacing {spacing:.4f} m below measured range, thrust extrapolated",
            ExtrapolatedThrustWarning,
            stacklevel=2,
        )
    else:
        grams = float(np.interp(spacing, tmap.inputs, tmap.thrust_grams))
    return grams_force_to_newtons(max(grams, 0.0))


def thrust_to_weight(thrust: float, dry_mass: float) -> float:
    """Thrust-to-weight figure of merit in N/kg."""
    if dry_mass <= 0.0:
        raise ValueError("dry_mass must be positive")
    return thrust / dry_mass


def load_thrust_map(path, valid_range=None) -> ThrustMap:
    """Read a two-column (input, thrust-grams) text file into a ThrustMap.

    Lines starting with '#' are comments. The validity range defaults to
    the span of the inputs.
    """
    data = np.loadtxt(path, comments="#", ndmin=2)
    if data.shape[1] != 2:
        raise ValueError(f"expected two numeric columns in {path}, got {data.shape[1]}")
    inputs = tuple(float(x) for x in data[:, 0])
    grams = tuple(float(g) for g in data[:, 1])
    if valid_range is None:
        valid_range = (inputs[0], inputs[-1])
    return ThrustMap(inputs=inputs, thrust_grams=grams, valid_range=tuple(valid_range))


def dump_thrust_map(tmap: ThrustMap) -> str:
    """Serialize a ThrustMap to the two-column text form load_thrust_map reads."""
    lines = ["# input  thrust_grams"]
    for x, g in zip(tmap.inputs, tmap.thrust_grams):
        lines.append(f"{x!r}  {g!r}")
    return "\n".join(lines) + "\n"
