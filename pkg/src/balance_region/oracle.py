"""Brute-force membership test for the balance region, used to verify projections.

A CoM position ``c`` is feasible when, for every acceleration vertex, some
contact forces satisfy the Newton and Euler equations with ``c`` held fixed,
the pyramid side rows and the normal-force bounds. This module builds those
rows on its own (face form, forces only, one small program per vertex) and
shares no assembly code with the projection LP.
"""
from __future__ import annotations

import highspy
import numpy as np
import scipy.sparse as sp

from .contact_model import AccelerationSet, ComBounds

_INF = highspy.kHighsInf


def _frame(u):
    k = int(np.argmin(np.abs(u)))
    e = np.zeros(3)
    e[k] = 1.0
    t1 = e - (e @ u) * u
    t1 /= np.linalg.norm(t1)
    return t1, np.cross(u, t1)


def _cross_matrix(r):
    x, y, z = r
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


class FeasibilityOracle:
    """Reusable oracle for one scene; call it with a CoM position."""

    def __init__(self, contacts, robot, accel=None, bounds=None, n_sides=8):
        self.robot = robot
        self.accel = AccelerationSet.static() if accel is None else accel
        self.bounds = ComBounds.default() if bounds is None else bounds
        m = robot.mass
        g = np.asarray(robot.gravity, dtype=float)
        n = len(contacts)
        nv = 3 * n

        rows = []  # cone and normal-force rows, identical for every vertex
        lo, hi = [], []
        phi = 2.0 * np.pi * np.arange(n_sides) / n_sides + np.pi / n_sides
        shrink = np.cos(np.pi / n_sides)
        for i, ct in enumerate(contacts):
            u = np.asarray(ct.normal, dtype=float)
            t1, t2 = _frame(u)
            for p in phi:
                row = np.zeros(nv)
                row[3 * i : 3 * i + 3] = np.cos(p) * t1 + np.sin(p) * t2 - ct.mu * shrink * u
                rows.append(row)
                lo.append(-np.inf)
                hi.append(0.0)
            row = np.zeros(nv)
            row[3 * i : 3 * i + 3] = u
            rows.append(row)
            lo.append(ct.fmin)
            hi.append(m * np.linalg.norm(g) if ct.fmax is None else ct.fmax)

        eq = np.zeros((6, nv))
        for i, ct in enumerate(contacts):
            eq[:3, 3 * i : 3 * i + 3] = np.eye(3)
            eq[3:, 3 * i : 3 * i + 3] = _cross_matrix(np.asarray(ct.position, dtype=float))
        A = sp.csc_matrix(np.vstack([eq, np.array(rows)]))

        self._solvers = []
        self._wrench = []  # (force rhs, moment operator acting on c)
        for a in self.accel.vertices:
            w = m * (g - a)
            # sum f = -m (g - a); sum r x f = -c x m (g - a) = w x c
            self._wrench.append((-w, _cross_matrix(w)))
            h = highspy.Highs()
            h.setOptionValue("output_flag", False)
            h.setOptionValue("threads", 1)
            h.setOptionValue("presolve", "off")
            model = highspy.HighsLp()
            model.num_col_ = nv
            model.num_row_ = A.shape[0]
            model.col_cost_ = np.zeros(nv)
            model.col_lower_ = np.full(nv, -_INF)
            model.col_upper_ = np.full(nv, _INF)
            model.row_lower_ = np.concatenate([np.zeros(6), np.where(np.isfinite(lo), lo, -_INF)])
            model.row_upper_ = np.concatenate([np.zeros(6), np.array(hi)])
            model.a_matrix_.format_ = highspy.MatrixFormat.kColwise
            model.a_matrix_.start_ = A.indptr.astype(np.int32)
            model.a_matrix_.index_ = A.indices.astype(np.int32)
            model.a_matrix_.value_ = A.data
            h.passModel(model)
            self._solvers.append(h)
        self._eq_idx = np.arange(6, dtype=np.int32)
        self.calls = 0

    def __call__(self, c):
        c = np.asarray(c, dtype=float)
        self.calls += 1
        if np.any(self.bounds.A @ c > self.bounds.b + 1e-12):
            return False
        for h, (force, M) in zip(self._solvers, self._wrench):
            rhs = np.concatenate([force, M @ c])
            h.changeRowsBounds(6, self._eq_idx, rhs, rhs)
            h.run()
            if h.getModelStatus() != highspy.HighsModelStatus.kOptimal:
                return False
        return True

    def grid(self, points):
        return np.array([self(p) for p in np.asarray(points, dtype=float)], dtype=bool)


def oracle_feasible(contacts, robot, accel, bounds, c, n_sides=8):
    """One-shot membership test; build a :class:`FeasibilityOracle` for many points."""
    return FeasibilityOracle(contacts, robot, accel, bounds, n_sides)(c)


def grid_points(lower, upper, n=20):
    """``n**3`` cell-centred samples of the box ``[lower, upper]``."""
    lower, upper = np.asarray(lower, dtype=float), np.asarray(upper, dtype=float)
    axes = [lower[k] + (np.arange(n) + 0.5) * (upper[k] - lower[k]) / n for k in range(3)]
    X, Y, Z = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([X.ravel(), Y.ravel(), Z.ravel()])


def sandwich_violations(region, oracle, points, margin=1e-3, tol=1e-6):
    """Count oracle disagreements with a region.

    Returns ``(feasible_outside_outer, infeasible_inside_inner)``: feasible
    samples outside the outer H-rep (beyond ``tol``) and infeasible samples
    strictly inside the inner polytope by ``margin``.
    """
    from .region import contains

    out_bad = in_bad = 0
    for p in np.asarray(points, dtype=float):
        inside = contains(region, p, margin)
        outside_outer = not region.outer_contains(p, tol)
        if not inside and not outside_outer:
            continue  # between the approximations, nothing to check
        feas = oracle(p)
        if feas and outside_outer:
            out_bad += 1
        if inside and not feas:
            in_bad += 1
    return out_bad, in_bad
