import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from balance_region import ComBounds, ContactPoint, ContactSet, DegenerateRegion, EmptyRegion, assemble_lp
from balance_region import fixtures as fx
from balance_region.polytope import (
    InnerPolytope,
    OuterPolytope,
    error_estimate,
    init_approximations,
    read_off,
    support_point,
    volume,
    write_off,
)

CUBE_N = np.vstack([np.eye(3), -np.eye(3)])
CUBE_B = np.array([1.0, 1, 1, 0, 0, 0])
CUBE_PTS = np.array(list(itertools.product((0.0, 1.0), repeat=3)))


def enumerate_vertices(N, b, tol=1e-9):
    """Brute-force vertex enumeration over all plane triples."""
    out = []
    for i, j, k in itertools.combinations(range(len(b)), 3):
        M = N[[i, j, k]]
        if abs(np.linalg.det(M)) < 1e-10:
            continue
        x = np.linalg.solve(M, b[[i, j, k]])
        if np.all(N @ x <= b + tol) and not any(np.linalg.norm(x - y) < 1e-7 for y in out):
            out.append(x)
    return np.array(out)


def same_points(A, B, tol=1e-7):
    A, B = np.asarray(A), np.asarray(B)
    if len(A) != len(B):
        return False
    D = np.linalg.norm(A[:, None] - B[None], axis=2)
    return bool(np.all(D.min(axis=1) <= tol) and np.all(D.min(axis=0) <= tol))


def regular_tetrahedron(a):
    P = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
    return P * a / (2 * np.sqrt(2))


def random_outer(rng, n_cuts):
    outer = OuterPolytope(CUBE_N, CUBE_B)
    for _ in range(n_cuts):
        d = rng.normal(size=3)
        d /= np.linalg.norm(d)
        off = d @ np.full(3, 0.5) + rng.uniform(0.2, 0.8)
        outer.add_halfspace(d, off)
    return outer


# -- inner ---------------------------------------------------------------------


def test_tetrahedron_plus_apex():
    P = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1.0]])
    inner = InnerPolytope(P)
    assert len(inner.faces) == 4
    apex = np.array([0.6, 0.6, 0.6])  # beyond the slanted face only
    upd = inner.add_point(apex)
    assert upd.added
    assert len(inner.faces) == 6
    assert len(ConvexHull(np.vstack([P, apex])).simplices) == 6
    inner.check()


def test_duplicate_point_noop():
    inner = InnerPolytope(CUBE_PTS)
    before = inner.face_ids()
    upd = inner.add_point(CUBE_PTS[3] + 1e-9)
    assert not upd.added
    assert inner.face_ids() == before


def test_interior_point_noop():
    inner = InnerPolytope(CUBE_PTS)
    assert not inner.add_point([0.5, 0.5, 0.5]).added


@pytest.mark.parametrize("seed", range(5))
def test_sequential_matches_batch_hull(seed):
    rng = np.random.default_rng(seed)
    P = rng.normal(size=(100, 3))
    inner = InnerPolytope(P[:4])
    for p in P[4:]:
        inner.add_point(p)
    inner.check()
    hull = ConvexHull(P)
    assert same_points(inner.vertices, P[hull.vertices])


@settings(max_examples=30)
@given(st.integers(0, 2**31 - 1), st.integers(5, 60))
def test_sphere_points_all_on_hull(seed, n):
    rng = np.random.default_rng(seed)
    P = rng.normal(size=(n, 3))
    P /= np.linalg.norm(P, axis=1)[:, None]
    inner = InnerPolytope(P)
    inner.check()
    assert len(inner.vertex_ids()) == n
    assert len(inner.faces) == 2 * n - 4


def test_seed_face_warm_start_same_result():
    rng = np.random.default_rng(7)
    P = rng.normal(size=(40, 3))
    cold = InnerPolytope(P[:4])
    warm = InnerPolytope(P[:4])
    for p in P[4:]:
        cold.add_point(p)
        N, b = warm.halfspaces()
        ids = warm.face_ids()
        seed = ids[int(np.argmax(N @ p - b))]
        warm.add_point(p, seed_face=seed)
    assert same_points(cold.vertices, warm.vertices, 0.0)


@pytest.mark.parametrize(
    "pts",
    [
        np.zeros((5, 3)),
        np.outer(np.arange(5.0), [1, 2, 3]),
        np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0.0]]),
        np.zeros((3, 3)),
    ],
)
def test_degenerate_seed(pts):
    with pytest.raises(DegenerateRegion):
        InnerPolytope(pts)


# -- outer -------------------------------------------------------------------------


def test_cube_cut_ten_vertices():
    outer = OuterPolytope(CUBE_N, CUBE_B)
    assert len(outer.vertex_ids()) == 8
    upd = outer.add_halfspace([1, 1, 0], 1.5)
    assert upd.added
    outer.check()
    assert len(outer.vertex_ids()) == 10
    N = np.vstack([CUBE_N, [[1, 1, 0]]]) / np.linalg.norm(np.vstack([CUBE_N, [[1, 1, 0]]]), axis=1)[:, None]
    b = np.append(CUBE_B, 1.5) / np.linalg.norm(np.vstack([CUBE_N, [[1, 1, 0]]]), axis=1)
    assert same_points(outer.vertices, enumerate_vertices(N, b))


def test_redundant_plane_noop():
    outer = OuterPolytope(CUBE_N, CUBE_B)
    upd = outer.add_halfspace([1, 1, 1], 3.5)
    assert not upd.added
    assert outer.n_halfspaces == 6
    assert len(outer.vertex_ids()) == 8


def test_cut_through_vertex():
    # plane touching the cube along a face diagonal
    outer = OuterPolytope(CUBE_N, CUBE_B)
    outer.add_halfspace([1, 1, 0], 1.0)
    outer.check()
    assert same_points(outer.vertices, enumerate_vertices(outer.normals, outer.offsets))


@pytest.mark.parametrize("seed", range(8))
def test_cut_sequence_matches_enumeration(seed):
    rng = np.random.default_rng(100 + seed)
    outer = OuterPolytope(CUBE_N, CUBE_B)
    for _ in range(20):
        d = rng.normal(size=3)
        d /= np.linalg.norm(d)
        off = d @ np.full(3, 0.5) + rng.uniform(0.2, 0.8)
        outer.add_halfspace(d, off, seed_vertex=outer.argmax_vertex(d))
        outer.check()
        assert same_points(outer.vertices, enumerate_vertices(outer.normals, outer.offsets))


def test_faces_are_planar_polygons():
    outer = random_outer(np.random.default_rng(3), 12)
    faces = outer.faces()
    n_edges = sum(len(p) for _, p in faces) // 2
    assert len(outer.vertex_ids()) - n_edges + len(faces) == 2
    for h, poly in faces:
        P = np.array([outer.points[v] for v in poly])
        np.testing.assert_allclose(P @ outer.normals[h], outer.offsets[h], atol=1e-9)


def test_hill_climb_matches_brute_force():
    rng = np.random.default_rng(11)
    for _ in range(20):
        outer = random_outer(rng, int(rng.integers(0, 25)))
        for _ in range(10):
            d = rng.normal(size=3)
            start = rng.choice(outer.vertex_ids())
            vid = outer.hill_climb(d, int(start))
            assert outer.points[vid] @ d == pytest.approx(np.max(outer.vertices @ d), abs=1e-12)


# -- support and error ---------------------------------------------------------------


def _inner_with_top_face():
    P = np.array([[0.2, 0.2, 0.5], [0.8, 0.2, 0.5], [0.5, 0.8, 0.5], [0.5, 0.5, 0.1]])
    inner = InnerPolytope(P)
    top = next(f for f, face in inner.faces.items() if face.normal[2] > 0.999)
    return inner, top


def test_support_cube_top():
    inner, top = _inner_with_top_face()
    outer = OuterPolytope(CUBE_N, CUBE_B)
    rec = support_point(outer, inner, top)
    assert rec.s == pytest.approx(0.5)
    assert rec.point[2] == pytest.approx(1.0)


def test_support_zero_when_faces_coincide():
    inner = InnerPolytope(CUBE_PTS)
    outer = OuterPolytope(CUBE_N, CUBE_B)
    recs = [support_point(outer, inner, f) for f in inner.face_ids()]
    assert all(abs(r.s) <= 1e-12 for r in recs)
    assert error_estimate(recs) == pytest.approx(0.0, abs=1e-12)


def test_contribution_formula():
    from balance_region.polytope import SupportRecord

    r = SupportRecord(0, 0, np.zeros(3), 0.3, 3.0)
    assert r.contribution == pytest.approx(0.3)
    assert error_estimate([r, r]) == pytest.approx(0.6)


def test_error_estimate_brute_force():
    rng = np.random.default_rng(5)
    for _ in range(10):
        outer = random_outer(rng, 15)
        V = outer.vertices
        # inner: hull of a shrunken random subset of outer vertices
        c = V.mean(axis=0)
        inner = InnerPolytope(c + 0.7 * (V - c))
        recs = [support_point(outer, inner, f) for f in inner.face_ids()]
        expect = 0.0
        for f in inner.face_ids():
            face = inner.faces[f]
            expect += np.max(V @ face.normal - face.offset) * face.area / 3
        assert error_estimate(recs) == pytest.approx(expect, rel=1e-12)


# -- volume ---------------------------------------------------------------------------


def test_volume_cube():
    assert volume(InnerPolytope(CUBE_PTS)) == pytest.approx(1.0)
    assert volume(OuterPolytope(CUBE_N, CUBE_B)) == pytest.approx(1.0)


@pytest.mark.parametrize("a", [0.5, 1.0, 3.0])
def test_volume_regular_tetrahedron(a):
    assert volume(InnerPolytope(regular_tetrahedron(a))) == pytest.approx(a**3 / (6 * np.sqrt(2)))


def test_volume_monte_carlo():
    rng = np.random.default_rng(21)
    P = rng.normal(size=(30, 3))
    inner = InnerPolytope(P)
    lo, hi = P.min(axis=0), P.max(axis=0)
    S = rng.uniform(lo, hi, size=(400_000, 3))
    N, b = inner.halfspaces()
    frac = np.mean(np.all(S @ N.T <= b, axis=1))
    est = frac * np.prod(hi - lo)
    assert volume(inner) == pytest.approx(est, rel=0.01)
    assert volume(inner) == pytest.approx(ConvexHull(P).volume, rel=1e-10)


def test_outer_volume_matches_hull():
    outer = random_outer(np.random.default_rng(9), 20)
    assert volume(outer) == pytest.approx(ConvexHull(outer.vertices).volume, rel=1e-10)


def test_volume_rejects_other_types():
    with pytest.raises(TypeError):
        volume(np.eye(3))


# -- init -------------------------------------------------------------------------------


def test_init_box_region(robot):
    cs = ContactSet(tuple(ContactPoint((x, y, 0), (0, 0, 1), 0.0) for x in (-3, 3) for y in (-3, 3)))
    box = ComBounds.box((-1, 1), (-1, 1), (0, 2))
    inner, outer, sols = init_approximations(assemble_lp(cs, robot, None, box), com_bounds=box)
    expect = np.array(list(itertools.product((-1.0, 1.0), (-1.0, 1.0), (0.0, 2.0))))
    assert same_points(outer.vertices, expect, 1e-9)
    # each seed point attains the axis maximum of the box
    for d, s in zip(np.vstack([np.eye(3), -np.eye(3)]), sols):
        assert d @ s.com == pytest.approx(np.max(expect @ d), abs=1e-9)
    inner.check()
    outer.check()


def test_init_infeasible(robot):
    cs = fx.two_feet().with_bounds([(0.0, 0.0)] * 8)
    with pytest.raises(EmptyRegion):
        init_approximations(assemble_lp(cs, robot))


def test_init_single_point_degenerate(robot):
    cs = ContactSet((ContactPoint((0.1, -0.2, 0), (0, 0, 1), 0.5),))
    with pytest.raises(DegenerateRegion) as info:
        init_approximations(assemble_lp(cs, robot))
    pts = np.asarray(info.value.points)
    # all optima lie on the vertical line through the contact
    np.testing.assert_allclose(pts[:, :2], np.tile([0.1, -0.2], (len(pts), 1)), atol=1e-9)


# -- OFF ------------------------------------------------------------------------------------


def test_off_round_trip(tmp_path):
    inner = InnerPolytope(np.random.default_rng(2).normal(size=(20, 3)))
    write_off(inner, tmp_path / "h.off")
    V, F = read_off(tmp_path / "h.off")
    P, T = inner.triangles()
    np.testing.assert_array_equal(V, P)
    assert [list(f) for f in F] == T.tolist()
