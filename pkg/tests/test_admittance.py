import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from balance_region import ValidationError, admittance_gain, com_velocity_reference
from balance_region.admittance import DERIVED, PRINTED, moment_residual

M, G = 39.0, 9.81
finite = st.floats(-2.0, 2.0, allow_nan=False)
vec3 = st.tuples(finite, finite, finite).map(np.array)


def balanced_instance(rng):
    """Random (r, f, c) satisfying the horizontal moment balance."""
    r = rng.uniform(-1, 1, 3)
    f = rng.uniform(-100, 100, 3)
    m = np.cross(r, f)
    # m_x - m g c_y = 0 and m_y + m g c_x = 0
    c = np.array([-m[1] / (M * G), m[0] / (M * G), rng.uniform(0.3, 1.2)])
    return r, f, c


def test_restoration_identity(rng):
    worst = 0.0
    for _ in range(1000):
        r, f, c = balanced_instance(rng)
        df = rng.uniform(-50, 50, 3)
        gain = admittance_gain(r, M, G, k_ad=rng.uniform(0.1, 10))
        dc = gain.displacement(df)
        res = moment_residual(r, f + df, c + dc, M, G)
        scale = np.linalg.norm(r) * np.linalg.norm(f + df) + M * G * np.linalg.norm(c + dc)
        worst = max(worst, np.max(np.abs(res)) / scale)
    assert worst <= 1e-12


def test_printed_ordering_breaks_restoration(rng):
    r, f, c = balanced_instance(rng)
    r[0], r[1] = 0.4, -0.3
    gain = admittance_gain(r, M, G, ordering=PRINTED)
    dc = gain.displacement([0, 0, 10.0])
    assert np.max(np.abs(moment_residual(r, f + [0, 0, 10.0], c + dc, M, G))) > 1.0
    # with x == y the two orderings coincide
    r2 = np.array([0.25, 0.25, 0.6])
    np.testing.assert_array_equal(admittance_gain(r2, M, G).K, admittance_gain(r2, M, G, ordering=PRINTED).K)


@given(vec3, vec3, vec3, st.floats(-3, 3), st.floats(-3, 3))
def test_linearity(r, d1, d2, a, b):
    gain = admittance_gain(r, M, G)
    lhs = com_velocity_reference(gain, a * d1 + b * d2, np.zeros(3))
    rhs = a * com_velocity_reference(gain, d1, np.zeros(3)) + b * com_velocity_reference(gain, d2, np.zeros(3))
    np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-12)
    assert lhs[2] == 0.0


@given(st.lists(st.integers(-64, 64), min_size=9, max_size=9), st.integers(-3, 3))
def test_linearity_exact_on_dyadic_data(ints, e):
    # m g = 32 and dyadic r, k_ad, df keep every intermediate representable
    r = np.array(ints[:3]) / 64.0
    a, b = np.array(ints[3:6], dtype=float), np.array(ints[6:], dtype=float)
    gain = admittance_gain(r, 4.0, 8.0, k_ad=2.0**e)
    assert np.array_equal(gain.K @ (a + b), gain.K @ a + gain.K @ b)
    assert np.array_equal(gain.K @ (4 * a), 4 * (gain.K @ a))


@given(vec3, st.floats(0.1, 100), st.floats(0.1, 20))
def test_zero_z_row(r, mass, k_ad):
    K = admittance_gain(r, mass, G, k_ad).K
    assert np.array_equal(K[2], np.zeros(3))


def test_zero_error_zero_velocity():
    gain = admittance_gain([0.4, -0.3, 0.7], M, G)
    f = np.array([1.0, -2.0, 30.0])
    assert np.array_equal(com_velocity_reference(gain, f, f), np.zeros(3))


def test_ground_contact_tangential_error():
    gain = admittance_gain([0.3, 0.1, 0.0], M, G)
    np.testing.assert_array_equal(gain.K @ np.array([5.0, -3.0, 0.0]), 0.0)


def test_right_hand_example():
    dF = 12.0
    gain = admittance_gain([0.4, -0.3, 0.7], M, G)
    dc = gain.displacement([0, 0, dF])
    assert dc[0] == pytest.approx(0.4 * dF / (M * G), rel=1e-15)
    assert dc[1] == pytest.approx(-0.3 * dF / (M * G), rel=1e-15)
    printed = admittance_gain([0.4, -0.3, 0.7], M, G, ordering=PRINTED).displacement([0, 0, dF])
    assert printed[0] == pytest.approx(-0.3 * dF / (M * G))


def test_box_push_sign_pattern():
    # horizontal normal along x, pushing error along x only
    z, k = 0.85, 2.0
    gain = admittance_gain([0.4, 0.3, z], M, G, k_ad=k)
    v = com_velocity_reference(gain, [20.0, 0, 0], [15.0, 0, 0])
    assert v[1] == 0.0
    assert v[0] == pytest.approx(-k * z * 5.0 / (M * G))


def test_k_ad_scaling():
    a = admittance_gain([0.1, 0.2, 0.5], M, G, k_ad=1.0)
    b = admittance_gain([0.1, 0.2, 0.5], M, G, k_ad=3.0)
    np.testing.assert_allclose(b.K, 3 * a.K, rtol=1e-15)
    np.testing.assert_array_equal(a.displacement([1, 2, 3]), a.K @ [1, 2, 3])


@pytest.mark.parametrize(
    "args",
    [
        dict(r=[0, 0, 1], mass=0.0),
        dict(r=[0, 0, 1], mass=-3.0),
        dict(r=[0, 0, 1], mass=30.0, g=0.0),
        dict(r=[0, 1], mass=30.0),
        dict(r=[0, np.nan, 1], mass=30.0),
        dict(r=[0, 0, 1], mass=30.0, ordering="other"),
    ],
)
def test_validation(args):
    with pytest.raises(ValidationError):
        admittance_gain(**args)


def test_gain_is_read_only():
    gain = admittance_gain([0, 0, 1], M)
    with pytest.raises(ValueError):
        gain.K[0, 0] = 1.0
    assert gain.ordering == DERIVED
