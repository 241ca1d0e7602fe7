"""Directional linear programs ``max d.c`` over the linearized equilibrium set.

The backend is the HiGHS simplex, single-threaded and without presolve, so
the basis left by one direction warm-starts the next one and identical inputs
give bit-identical outputs.

Two equivalent formulations are available. ``"rows"`` hands the face-form
program (pyramid side rows on free forces) to the solver as is. ``"span"``
(the default) writes each contact force as a nonnegative combination of its
pyramid edge rays, which removes the side rows and is two to three times
faster on robust problems; forces are mapped back to the face-form layout.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import highspy
import numpy as np
import scipy.sparse as sp

from .contact_model import skew
from .errors import SolverError

FEASIBILITY_TOL = 1e-8
OPTIMALITY_TOL = 1e-9

_INF = highspy.kHighsInf
_MS = highspy.HighsModelStatus


class LpStatus(enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass(frozen=True)
class LpSolution:
    status: LpStatus
    com: np.ndarray | None = None
    forces: np.ndarray | None = None
    objective: float | None = None
    direction: np.ndarray | None = None
    iterations: int = 0
    basis: object = None  # backend basis, only meaningful for the same program and form
    form: str = "span"

    @property
    def optimal(self):
        return self.status is LpStatus.OPTIMAL

    @property
    def x(self):
        return np.concatenate([self.forces, self.com])


def _bound(a, inf):
    return np.where(np.isfinite(a), a, inf)


def _model(A, col_lower, col_upper, row_lower, row_upper):
    A = sp.csc_matrix(A)
    A.eliminate_zeros()
    model = highspy.HighsLp()
    model.num_col_ = A.shape[1]
    model.num_row_ = A.shape[0]
    model.col_cost_ = np.zeros(A.shape[1])
    model.col_lower_ = _bound(col_lower, -_INF)
    model.col_upper_ = _bound(col_upper, _INF)
    model.row_lower_ = _bound(row_lower, -_INF)
    model.row_upper_ = _bound(row_upper, _INF)
    model.a_matrix_.format_ = highspy.MatrixFormat.kColwise
    model.a_matrix_.start_ = A.indptr.astype(np.int32)
    model.a_matrix_.index_ = A.indices.astype(np.int32)
    model.a_matrix_.value_ = A.data
    model.sense_ = highspy.ObjSense.kMaximize
    return model


def _rows_model(lp):
    n = lp.n_vars
    return _model(
        np.vstack([lp.A_eq, lp.A_ineq]),
        np.full(n, -np.inf),
        np.full(n, np.inf),
        np.concatenate([lp.b_eq, lp.ineq_lower]),
        np.concatenate([lp.b_eq, lp.ineq_upper]),
    )


def _span_model(lp):
    """Span form: ``f_ik = G_i^T lambda_ik`` with ``lambda >= 0``."""
    n, K, s = lp.n_contacts, lp.n_accel, lp.n_sides
    nl = n * s
    ncol = nl * K + 3
    A_eq = np.zeros((6 * K, ncol))
    b_eq = np.zeros(6 * K)
    A_n = np.zeros((n * K, ncol))
    for k, a in enumerate(lp.accel):
        for i in range(n):
            cols = slice(k * nl + i * s, k * nl + (i + 1) * s)
            G = lp.generators[i].T
            A_eq[6 * k : 6 * k + 3, cols] = G
            A_eq[6 * k + 3 : 6 * k + 6, cols] = skew(lp.positions[i]) @ G
            A_n[k * n + i, cols] = 1.0
        b_eq[6 * k : 6 * k + 3] = lp.mass * (a - lp.gravity)
        A_eq[6 * k + 3 : 6 * k + 6, -3:] = -skew(lp.mass * (lp.gravity - a))
    A_c = np.zeros((len(lp.com_b), ncol))
    A_c[:, -3:] = lp.com_A
    col_lower = np.concatenate([np.zeros(nl * K), np.full(3, -np.inf)])
    return _model(
        np.vstack([A_eq, A_n, A_c]),
        col_lower,
        np.full(ncol, np.inf),
        np.concatenate([b_eq, np.tile(lp.fmin, K), np.full(len(lp.com_b), -np.inf)]),
        np.concatenate([b_eq, np.tile(lp.fmax, K), lp.com_b]),
    )


def _configure(h):
    h.setOptionValue("output_flag", False)
    h.setOptionValue("presolve", "off")
    h.setOptionValue("solver", "simplex")
    # Cost-only changes keep the basis primal feasible, so primal simplex
    # restarts cleanly where dual simplex would need a phase 1.
    h.setOptionValue("simplex_strategy", 4)
    h.setOptionValue("threads", 1)
    h.setOptionValue("random_seed", 0)
    h.setOptionValue("primal_feasibility_tolerance", FEASIBILITY_TOL)
    h.setOptionValue("dual_feasibility_tolerance", OPTIMALITY_TOL)


class LpSolver:
    """Reusable solver bound to one :class:`LinearProgram`.

    Without a ``hint``, each solve starts from the stored basis whose
    direction is closest (largest cosine) to the new one; consecutive
    projection directions jump between faces, and the optimal basis of a
    nearby direction needs far fewer pivots than the last one used.
    """

    def __init__(self, lp, form="span"):
        if form not in ("span", "rows"):
            raise ValueError(f"form must be 'span' or 'rows', got {form!r}")
        if form == "span" and lp.generators is None:
            form = "rows"
        self.lp = lp
        self.form = form
        self._h = highspy.Highs()
        _configure(self._h)
        model = _span_model(lp) if form == "span" else _rows_model(lp)
        self._h.passModel(model)
        self._n_col = model.num_col_
        self._com_idx = np.arange(self._n_col - 3, self._n_col, dtype=np.int32)
        self._last_basis = None
        self._dirs = []
        self._bases = []
        self.total_iterations = 0

    def _forces(self, x):
        if self.form == "rows":
            return x[: self.lp.n_force_vars].copy()
        lp = self.lp
        lam = x[:-3].reshape(lp.n_accel, lp.n_contacts, lp.n_sides)
        return np.einsum("kis,isj->kij", lam, lp.generators).reshape(-1)

    def solve(self, d, hint=None):
        d = np.asarray(d, dtype=float)
        if d.shape != (3,) or not np.linalg.norm(d) > 0:
            raise ValueError(f"search direction must be a nonzero 3-vector, got {d!r}")
        h = self._h
        u = d / np.linalg.norm(d)
        basis = None
        if hint is not None and hint.basis is not None and hint.form == self.form:
            basis = hint.basis
        elif self._dirs:
            basis = self._bases[int(np.argmax(np.asarray(self._dirs) @ u))]
        if basis is not None and basis is not self._last_basis:
            h.setBasis(basis)
        h.changeColsCost(3, self._com_idx, d.copy())
        h.run()
        status = h.getModelStatus()
        iters = int(h.getInfo().simplex_iteration_count)
        self.total_iterations += iters
        if status == _MS.kOptimal:
            x = np.array(h.getSolution().col_value)
            self._last_basis = h.getBasis()
            self._dirs.append(u)
            self._bases.append(self._last_basis)
            c = x[-3:].copy()
            return LpSolution(
                LpStatus.OPTIMAL,
                com=c,
                forces=self._forces(x),
                objective=float(d @ c),
                direction=d.copy(),
                iterations=iters,
                basis=self._last_basis,
                form=self.form,
            )
        if status == _MS.kInfeasible:
            return LpSolution(LpStatus.INFEASIBLE, direction=d.copy(), iterations=iters, form=self.form)
        if status in (_MS.kUnbounded, _MS.kUnboundedOrInfeasible):
            # Disambiguate with a pure feasibility solve.
            h.changeColsCost(3, self._com_idx, np.zeros(3))
            h.run()
            feasible = h.getModelStatus() == _MS.kOptimal
            self._last_basis = None
            st = LpStatus.UNBOUNDED if feasible else LpStatus.INFEASIBLE
            return LpSolution(st, direction=d.copy(), iterations=iters, form=self.form)
        raise SolverError(f"LP backend stopped with status {h.modelStatusToString(status)}")


def solve_direction(lp, d, form="span"):
    """Cold solve of ``max d.c`` over the program's feasible set."""
    return LpSolver(lp, form).solve(d)


def solve_warm(lp, d, hint):
    """Same contract as :func:`solve_direction`, starting from ``hint``'s basis."""
    return LpSolver(lp, hint.form if hint is not None else "span").solve(d, hint=hint)
