import numpy as np
import pytest
from scipy.optimize import linprog

from balance_region import FeasibilityOracle, compute_region, oracle_feasible
from balance_region import fixtures as fx
from balance_region.contact_model import ComBounds
from balance_region.oracle import grid_points, sandwich_violations


def linprog_feasible(contacts, robot, accel_vertices, c, n_sides=8):
    """Span-form feasibility with scipy: f_i = sum_j lambda_ij g_ij, lambda >= 0."""
    g = np.asarray(robot.gravity)
    for a in accel_vertices:
        w = robot.mass * (np.asarray(a) - g)
        cols = []
        for p in contacts.contacts:
            u = np.asarray(p.normal)
            k = int(np.argmin(np.abs(u)))
            e = np.eye(3)[k]
            t1 = e - (e @ u) * u
            t1 /= np.linalg.norm(t1)
            t2 = np.cross(u, t1)
            for j in range(n_sides):
                th = 2 * np.pi * j / n_sides
                ray = u + p.mu * (np.cos(th) * t1 + np.sin(th) * t2)
                cols.append(np.concatenate([ray, np.cross(np.asarray(p.position), ray)]))
        A = np.array(cols).T
        b = np.concatenate([w, np.cross(c, w)])
        res = linprog(np.zeros(A.shape[1]), A_eq=A, b_eq=b, bounds=[(0, None)] * A.shape[1], method="highs")
        if res.status != 0:
            return False
    return True


def test_above_support_centroid(robot, two_feet):
    assert oracle_feasible(two_feet, robot, None, None, [0.0, 0.0, 0.9])


def test_far_outside_bounds(robot, two_feet):
    assert not oracle_feasible(two_feet, robot, None, None, [10.0, 0.0, 0.9])


def test_outside_support_polygon(robot, two_feet):
    oracle = FeasibilityOracle(two_feet, robot)
    assert not oracle([0.2, 0.0, 0.9])
    assert not oracle([0.0, 0.3, 0.9])
    assert oracle.calls == 2


def test_agrees_with_span_form(robot, rng):
    # unbounded normal forces and no ComBounds rows in the scipy route, so
    # compare inside the default box with generous force limits
    cs = fx.multi_contact().with_bounds([(0.0, 1e6)] * 17)
    accel = fx.multi_contact_accel()
    oracle = FeasibilityOracle(cs, robot, accel)
    pts = rng.uniform([-0.3, -0.3, 0.2], [0.5, 0.3, 1.5], size=(60, 3))
    got = oracle.grid(pts)
    want = [linprog_feasible(cs, robot, accel.vertices, p) for p in pts]
    assert got.tolist() == want
    assert 0 < got.sum() < len(pts)


def test_inner_points_feasible(robot, multi_contact):
    region, _ = compute_region(multi_contact, robot)
    oracle = FeasibilityOracle(multi_contact, robot)
    pts = grid_points(region.vertices.min(0), region.vertices.max(0), 10)
    out_outer, in_inner = sandwich_violations(region, oracle, pts)
    assert out_outer == 0 and in_inner == 0


def test_grid_points_shape():
    P = grid_points([0, 0, 0], [1, 2, 3], 4)
    assert P.shape == (64, 3)
    assert P.min() > 0 and np.all(P.max(0) < [1, 2, 3])


def test_accel_shrinks_feasible_set(robot, multi_contact):
    pts = grid_points([-0.3, -0.3, 0.3], [0.5, 0.3, 1.2], 6)
    static = FeasibilityOracle(multi_contact, robot).grid(pts)
    robust = FeasibilityOracle(multi_contact, robot, fx.multi_contact_accel()).grid(pts)
    assert np.all(static[robust])
    assert robust.sum() < static.sum()


def test_custom_bounds(robot, two_feet):
    low = ComBounds.box((-5, 5), (-5, 5), (0.0, 0.5))
    assert not oracle_feasible(two_feet, robot, None, low, [0, 0, 0.9])
    assert oracle_feasible(two_feet, robot, None, low, [0, 0, 0.4])


@pytest.mark.parametrize("n_sides", [3, 4, 16])
def test_n_sides(robot, two_feet, n_sides):
    assert FeasibilityOracle(two_feet, robot, n_sides=n_sides)([0, 0, 1.0])
