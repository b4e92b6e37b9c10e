import numpy as np
import pytest

from ionblimp.constants import STANDARD_GRAVITY
from ionblimp.thruster import (
    DEFAULT_ION_MOBILITY,
    DUAL_RING,
    ExtrapolatedThrustWarning,
    GasIonParams,
    OutOfRange,
    PunctureFault,
    QUAD_RING,
    SPACING_MAP_DUAL_RING,
    THROTTLE_MAP,
    ThrustMap,
    collision_force_density,
    collision_force_density_mc,
    dump_thrust_map,
    einstein_diffusivity,
    grams_force_to_newtons,
    ion_mobility,
    load_thrust_map,
    mobility_from_force_balance,
    spacing_to_thrust,
    throttle_to_thrust,
    thrust_from_current,
    thrust_to_weight,
)

NITROGEN_LIKE = GasIonParams(
    ion_mass=4.65e-26,
    neutral_mass=4.65e-26,
    temperature=300.0,
    ion_charge=1.602176634e-19,
    cross_section=1e-19,
    ion_density=1e15,
    neutral_density=2.5e25,
)


def test_collision_force_zero_slip():
    assert np.allclose(collision_force_density(NITROGEN_LIKE, [0.0, 0.0, 0.0]), 0.0)


def test_collision_force_linearity():
    u = np.array([37.0, -12.0, 4.0])
    f1 = collision_force_density(NITROGEN_LIKE, u)
    f2 = collision_force_density(NITROGEN_LIKE, 2.0 * u)
    assert np.allclose(f2, 2.0 * f1, rtol=1e-14)
    assert np.allclose(np.cross(f1, u), 0.0, atol=1e-12)  # parallel to u


def test_collision_force_frozen_value():
    f = collision_force_density(NITROGEN_LIKE, [100.0, 0.0, 0.0])
    assert f[0] == pytest.approx(6.959872542266579, rel=1e-12)
    assert f[1] == f[2] == 0.0


def test_collision_force_matches_monte_carlo():
    # Small fast check; the acceptance suite runs the full-size comparison.
    closed = collision_force_density(NITROGEN_LIKE, [100.0, 0.0, 0.0])
    mc = collision_force_density_mc(NITROGEN_LIKE, [100.0, 0.0, 0.0], n_samples=1_000_000, seed=11)
    assert np.linalg.norm(mc - closed) / np.linalg.norm(closed) < 0.02


def test_monte_carlo_reproducible_for_fixed_seed():
    a = collision_force_density_mc(NITROGEN_LIKE, [50.0, 0.0, 0.0], n_samples=200_000, seed=3)
    b = collision_force_density_mc(NITROGEN_LIKE, [50.0, 0.0, 0.0], n_samples=200_000, seed=3)
    assert np.array_equal(a, b)


def test_ion_mobility_verbatim_and_override():
    mu = ion_mobility(NITROGEN_LIKE)
    assert mu == pytest.approx(2.30202007906057e-41, rel=1e-12)
    assert ion_mobility(NITROGEN_LIKE, override=2.0e-4) == 2.0e-4
    # the cross-section placement makes the verbatim form differ from the
    # force-balance form by exactly cross_section^2
    assert mu == pytest.approx(
        mobility_from_force_balance(NITROGEN_LIKE) * NITROGEN_LIKE.cross_section**2, rel=1e-12
    )


def test_ion_mobility_halves_when_air_density_doubles():
    denser = GasIonParams(
        ion_mass=4.65e-26,
        neutral_mass=4.65e-26,
        temperature=300.0,
        ion_charge=1.602176634e-19,
        cross_section=1e-19,
        ion_density=1e15,
        neutral_density=5.0e25,
    )
    assert ion_mobility(denser) == pytest.approx(ion_mobility(NITROGEN_LIKE) / 2.0, rel=1e-12)


def test_force_balance_mobility_round_trip():
    # u = mu * E must balance the electric force against the collision drag.
    mu = mobility_from_force_balance(NITROGEN_LIKE)
    e_field = np.array([0.0, 0.0, 1.0e4])
    drift = mu * e_field
    electric = e_field * NITROGEN_LIKE.ion_density * NITROGEN_LIKE.ion_charge
    assert np.allclose(collision_force_density(NITROGEN_LIKE, drift), electric, rtol=1e-12)


def test_einstein_diffusivity():
    d = einstein_diffusivity(2.0e-4, 300.0, 1.602176634e-19)
    assert d == pytest.approx(5.170399957287107e-06, rel=1e-12)
    assert einstein_diffusivity(0.0, 300.0, 1.6e-19) == 0.0
    assert einstein_diffusivity(2.0e-4, 600.0, 1.602176634e-19) == pytest.approx(2.0 * d, rel=1e-12)


def test_thrust_from_current_basics():
    assert np.allclose(thrust_from_current(0.03, 0.0, 2.0e-4), 0.0)
    t1 = thrust_from_current(0.03, 1.0e-4, 2.0e-4)
    assert np.allclose(thrust_from_current(0.06, 1.0e-4, 2.0e-4), 2.0 * t1, rtol=1e-14)
    assert np.allclose(thrust_from_current(0.03, 2.0e-4, 2.0e-4), 2.0 * t1, rtol=1e-14)


def test_thrust_from_current_direction_and_magnitude():
    t = thrust_from_current(0.03, 3.4e-4, DEFAULT_ION_MOBILITY, axis_pos_to_neg=(1, 0, 0))
    # points from negative toward positive electrode, i.e. along -axis
    assert t[0] < 0.0
    assert np.linalg.norm(t) == pytest.approx(0.051, rel=1e-12)
    flipped = thrust_from_current(0.03, 3.4e-4, DEFAULT_ION_MOBILITY, axis_pos_to_neg=(-1, 0, 0))
    assert np.allclose(flipped, -t, rtol=1e-14)
    assert np.linalg.norm(flipped) == pytest.approx(np.linalg.norm(t), rel=1e-14)


def test_throttle_map_sample_points_exact():
    for frac, grams in zip(THROTTLE_MAP.inputs, THROTTLE_MAP.thrust_grams):
        assert throttle_to_thrust(THROTTLE_MAP, frac) == grams_force_to_newtons(grams)
    assert throttle_to_thrust(THROTTLE_MAP, 1.0) == pytest.approx(1.20e-3 * STANDARD_GRAVITY)


def test_throttle_interpolation_midpoint():
    # halfway between the 90% (1.16 g) and 100% (1.20 g) samples
    assert throttle_to_thrust(THROTTLE_MAP, 0.95) == pytest.approx(
        grams_force_to_newtons(1.18), rel=1e-12
    )


def test_throttle_below_corona_onset_clamps_to_zero():
    assert throttle_to_thrust(THROTTLE_MAP, 0.10) == 0.0
    assert throttle_to_thrust(THROTTLE_MAP, 0.0) == 0.0


def test_throttle_out_of_range():
    with pytest.raises(OutOfRange):
        throttle_to_thrust(THROTTLE_MAP, -0.01)
    with pytest.raises(OutOfRange):
        throttle_to_thrust(THROTTLE_MAP, 1.01)


def test_throttle_map_monotone_non_decreasing():
    grid = np.linspace(0.0, 1.0, 301)
    vals = [throttle_to_thrust(THROTTLE_MAP, x) for x in grid]
    assert all(b >= a - 1e-15 for a, b in zip(vals, vals[1:]))


def test_spacing_map_sample_points_exact():
    for spacing, grams in zip(SPACING_MAP_DUAL_RING.inputs, SPACING_MAP_DUAL_RING.thrust_grams):
        assert spacing_to_thrust(SPACING_MAP_DUAL_RING, spacing) == grams_force_to_newtons(grams)


def test_spacing_puncture_fault():
    with pytest.raises(PunctureFault):
        spacing_to_thrust(SPACING_MAP_DUAL_RING, 0.025)
    with pytest.raises(PunctureFault):
        spacing_to_thrust(SPACING_MAP_DUAL_RING, 0.020)


def test_spacing_extrapolation_below_samples_is_flagged():
    with pytest.warns(ExtrapolatedThrustWarning):
        val = spacing_to_thrust(SPACING_MAP_DUAL_RING, 0.028)
    # nearest-segment slope extended: 1.16 g + (-0.002 m)(-12 g/m) = 1.184 g
    assert val == pytest.approx(grams_force_to_newtons(1.184), rel=1e-10)


def test_spacing_monotone_non_increasing():
    grid = np.linspace(0.030, 0.055, 101)
    vals = [spacing_to_thrust(SPACING_MAP_DUAL_RING, x) for x in grid]
    assert all(b <= a + 1e-15 for a, b in zip(vals, vals[1:]))


def test_thrust_to_weight_cases():
    assert thrust_to_weight(0.051, QUAD_RING.dry_mass) == pytest.approx(2.597, rel=1e-3)
    assert thrust_to_weight(0.011368, DUAL_RING.dry_mass) == pytest.approx(0.7105, rel=1e-3)
    assert thrust_to_weight(0.0, 0.02) == 0.0
    with pytest.raises(ValueError):
        thrust_to_weight(0.05, 0.0)


def test_thrust_map_file_round_trip(tmp_path):
    path = tmp_path / "map.txt"
    path.write_text(dump_thrust_map(THROTTLE_MAP), encoding="utf-8")
    loaded = load_thrust_map(path, valid_range=(0.0, 1.0))
    assert loaded.inputs == THROTTLE_MAP.inputs
    assert loaded.thrust_grams == THROTTLE_MAP.thrust_grams
    assert throttle_to_thrust(loaded, 0.95) == throttle_to_thrust(THROTTLE_MAP, 0.95)


def test_thrust_map_validation():
    with pytest.raises(ValueError):
        ThrustMap(inputs=(0.2, 0.1), thrust_grams=(0.0, 1.0), valid_range=(0, 1))
    with pytest.raises(ValueError):
        ThrustMap(inputs=(0.1, 0.2), thrust_grams=(0.0, -1.0), valid_range=(0, 1))
    with pytest.raises(ValueError):
        ThrustMap(inputs=(0.1,), thrust_grams=(0.0,), valid_range=(0, 1))


def test_gas_params_validation():
    with pytest.raises(ValueError):
        GasIonParams(
            ion_mass=0.0, neutral_mass=4.65e-26, temperature=300.0,
            ion_charge=1.6e-19, cross_section=1e-19, ion_density=1e15, neutral_density=2.5e25,
        )


def test_geometry_presets():
    assert QUAD_RING.ring_count == 4
    assert DUAL_RING.ring_count == 2
    assert QUAD_RING.dry_mass == pytest.approx(0.01964)
    with pytest.raises(ValueError):
        type(QUAD_RING)(
            electrode_gap=0.03, ring_count=3, ring_spacing=0.01,
            wire_diameter=1e-4, foil_width=0.04, dry_mass=0.02,
        )
