import itertools

import numpy as np
import pytest

from balance_region import (
    BalanceRegion,
    RegionStatus,
    chebyshev_center,
    compute_region,
    contains,
    read_region,
    region_from_json,
    region_off,
    region_to_json,
    write_region,
)
from balance_region import fixtures as fx
from balance_region.polytope import InnerPolytope, read_off


def _region_from_points(P, status=RegionStatus.CONVERGED):
    inner = InnerPolytope(P)
    V, T = inner.triangles()
    N, b = inner.halfspaces()
    return BalanceRegion(status, V, T, N, b, N, b, V)


@pytest.fixture
def cube():
    return _region_from_points(np.array(list(itertools.product((0.0, 1.0), repeat=3))))


@pytest.fixture
def tetra():
    P = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
    return _region_from_points(P), 2 * np.sqrt(2)  # edge length


@pytest.fixture(scope="module")
def feet_region():
    region, _ = compute_region(fx.two_feet(), fx.robot(), timestamp=0.0)
    return region


def test_contains_vertices_and_centroid(feet_region):
    for v in feet_region.vertices:
        assert contains(feet_region, v, 0.0) or np.max(feet_region.normals @ v - feet_region.offsets) <= 1e-12
    assert contains(feet_region, feet_region.vertices.mean(axis=0))


def test_margin_beyond_chebyshev_radius(feet_region, rng):
    center, radius, ok = chebyshev_center(feet_region)
    assert ok
    assert contains(feet_region, center, radius - 1e-9)
    for p in rng.uniform(feet_region.vertices.min(0), feet_region.vertices.max(0), size=(200, 3)):
        assert not contains(feet_region, p, radius + 1e-9)


def test_chebyshev_cube(cube):
    center, radius, ok = chebyshev_center(cube)
    assert ok
    np.testing.assert_allclose(center, 0.5, atol=1e-9)
    assert radius == pytest.approx(0.5)


def test_chebyshev_regular_tetrahedron(tetra):
    region, a = tetra
    center, radius, ok = chebyshev_center(region)
    np.testing.assert_allclose(center, 0, atol=1e-9)
    assert radius == pytest.approx(a / np.sqrt(24))


def test_chebyshev_ball_inside(rng):
    for _ in range(10):
        region = _region_from_points(rng.normal(size=(25, 3)))
        center, radius, ok = chebyshev_center(region)
        assert ok and radius > 0
        assert contains(region, center, radius - 1e-9)
        # the ball touches at least one face
        assert np.min(region.offsets - region.normals @ center) == pytest.approx(radius, abs=1e-8)


def test_empty_contains_nothing():
    region = BalanceRegion(RegionStatus.EMPTY)
    assert not contains(region, np.zeros(3))
    assert not contains(region, np.zeros(3), -1.0)
    assert chebyshev_center(region)[1:] == (0.0, False)


def test_degenerate_region():
    V = np.array([[0, 0, 0], [0, 0, 1.0], [0, 0, 2.0]])
    region = BalanceRegion(RegionStatus.DEGENERATE, vertices=V)
    assert contains(region, [0, 0, 0.5])
    assert not contains(region, [0, 0, 0.5], 1e-6)
    assert not contains(region, [0.1, 0, 0.5])
    _, radius, ok = chebyshev_center(region)
    assert radius == 0.0 and not ok
    assert region.volume() == 0.0


def test_arrays_read_only(cube):
    with pytest.raises(ValueError):
        cube.vertices[0, 0] = 5.0


def test_json_round_trip_bitwise(feet_region, tmp_path):
    text = region_to_json(feet_region)
    back = region_from_json(text)
    assert region_to_json(back) == text
    np.testing.assert_array_equal(back.vertices, feet_region.vertices)
    np.testing.assert_array_equal(back.normals, feet_region.normals)
    write_region(feet_region, tmp_path / "r.json")
    assert region_to_json(read_region(tmp_path / "r.json")) == text


def test_json_empty_round_trip():
    region = BalanceRegion(RegionStatus.EMPTY, provenance={"label": "x"})
    back = region_from_json(region_to_json(region))
    assert back.status is RegionStatus.EMPTY
    assert back.provenance == {"label": "x"}


def test_h_and_v_consistent(feet_region):
    V, N, b = feet_region.vertices, feet_region.normals, feet_region.offsets
    assert np.all(V @ N.T <= b + 1e-9)
    for t, n, o in zip(feet_region.triangles, N, b):
        np.testing.assert_allclose(V[t] @ n, o, atol=1e-9)
    # outer contains inner
    assert np.all(V @ feet_region.outer_normals.T <= feet_region.outer_offsets + 1e-9)


def test_off_export(feet_region, tmp_path):
    for which in ("inner", "outer"):
        path = tmp_path / f"{which}.off"
        path.write_text(region_off(feet_region, which))
        V, F = read_off(path)
        assert len(V) - len({tuple(sorted((f[i], f[(i + 1) % len(f)]))) for f in F for i in range(len(f))}) \
            + len(F) == 2
    with pytest.raises(ValueError):
        region_off(feet_region, "middle")


def test_provenance(feet_region):
    prov = feet_region.provenance
    assert prov["label"] == "two_feet"
    assert prov["timestamp"] == 0.0
    assert len(prov["config_hash"]) == 16
    assert prov["iterations"] >= 0
