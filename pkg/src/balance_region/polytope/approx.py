"""Seed inner/outer approximations from the six axis-direction optima."""
from __future__ import annotations

import numpy as np

from ..errors import EmptyRegion, UnboundedProgram
from ..lp import LpSolver, LpStatus
from .inner import DEDUP_TOL, InnerPolytope
from .outer import OuterPolytope

AXES = np.vstack([np.eye(3), -np.eye(3)])


def axis_optima(lp, solver=None):
    """Solve ``max d.c`` for ``d`` in ``+x, +y, +z, -x, -y, -z``."""
    solver = LpSolver(lp) if solver is None else solver
    sols = []
    for d in AXES:
        sol = solver.solve(d)
        if sol.status is LpStatus.INFEASIBLE:
            raise EmptyRegion("equilibrium program is infeasible")
        if sol.status is LpStatus.UNBOUNDED:
            raise UnboundedProgram("directional LP unbounded: CoM bounds are missing")
        sols.append(sol)
    return sols


def init_approximations(lp, solver=None, com_bounds=None):
    """Initial ``(inner, outer, solutions)``.

    The inner polytope is the hull of the distinct axis optima; the outer one
    is the CoM bounds intersected with the six supporting planes. Raises
    :class:`EmptyRegion` or :class:`DegenerateRegion`.
    """
    sols = axis_optima(lp, solver)
    pts = []
    for s in sols:
        if not any(np.linalg.norm(s.com - p) <= DEDUP_TOL for p in pts):
            pts.append(s.com)
    pts = np.array(pts)
    inner = InnerPolytope(pts)  # raises DegenerateRegion

    if com_bounds is not None:
        N0, b0 = com_bounds.A, com_bounds.b
    else:
        # The CoM rows are the trailing block of the inequality matrix.
        com_rows = np.flatnonzero(np.any(lp.A_ineq[:, lp.com_slice] != 0, axis=1))
        N0 = lp.A_ineq[com_rows][:, lp.com_slice]
        b0 = lp.ineq_upper[com_rows]
    outer = OuterPolytope(N0, b0)
    for d, s in zip(AXES, sols):
        outer.add_halfspace(d, float(d @ s.com), outer.argmax_vertex(d))
    return inner, outer, sols


def degenerate_points(exc):
    """Distinct points carried by a :class:`DegenerateRegion`."""
    return np.asarray(exc.points if exc.points is not None else np.zeros((0, 3)))
