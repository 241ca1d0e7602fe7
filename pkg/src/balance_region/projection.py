"""Iterative projection of the equilibrium set onto CoM space.

Each iteration picks the inner face with the largest measure, solves the
directional LP along its normal, adds the optimum to the inner polytope and
the supporting plane through it to the outer polytope. The default measure
is the support function of the face times its area; the volume-gap mode
reproduces the original per-face cut-off volumes for comparison.
"""
from __future__ import annotations

import enum
import hashlib
import json
import logging
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .contact_model import AccelerationSet, ComBounds, assemble_lp
from .errors import DegenerateRegion, EmptyRegion, ValidationError
from .lp import LpSolver, LpStatus
from .polytope import init_approximations, support_point, volume
from .polytope.measures import cap_volume
from .region import BalanceRegion, RegionStatus

log = logging.getLogger(__name__)


class MeasureMode(enum.Enum):
    SUPPORT = "support"
    VOLUME = "volume"


@dataclass(frozen=True)
class ProjectionConfig:
    epsilon: float = 1e-3  # m^3
    max_iterations: int = 100
    n_sides: int = 8
    measure_mode: MeasureMode = MeasureMode.SUPPORT
    track_volumes: bool = False  # per-iteration volumes in the trace; roughly doubles runtime

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValidationError(f"epsilon: must be > 0, got {self.epsilon!r}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ValidationError(f"max_iterations: must be an integer >= 1, got {self.max_iterations!r}")
        if int(self.n_sides) != self.n_sides or self.n_sides < 3:
            raise ValidationError(f"n_sides: must be an integer >= 3, got {self.n_sides!r}")
        object.__setattr__(self, "measure_mode", MeasureMode(self.measure_mode))

    def digest(self):
        d = asdict(self)
        del d["track_volumes"]  # diagnostics only, the region does not depend on it
        d["measure_mode"] = self.measure_mode.value
        d["epsilon"] = repr(float(self.epsilon))
        return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()[:16]


@dataclass
class IterationRecord:
    iteration: int
    face: int
    direction: np.ndarray
    solve_time: float
    measure_time: float
    update_time: float
    inner_volume: float
    outer_volume: float
    error: float


@dataclass
class IterationTrace:
    records: list = field(default_factory=list)
    init_time: float = 0.0
    initial_error: float = float("nan")
    initial_inner_volume: float = float("nan")
    initial_outer_volume: float = float("nan")
    final_error: float = float("nan")
    total_time: float = 0.0

    def __len__(self):
        return len(self.records)

    @property
    def iterations(self):
        return len(self.records)

    def phase_totals(self):
        """Total seconds spent in the solve, measure and update phases."""
        return {
            "solve": sum(r.solve_time for r in self.records),
            "measure": sum(r.measure_time for r in self.records),
            "update": sum(r.update_time for r in self.records),
        }

    def inner_volumes(self):
        return [self.initial_inner_volume] + [r.inner_volume for r in self.records]

    def outer_volumes(self):
        return [self.initial_outer_volume] + [r.outer_volume for r in self.records]


class Projection:
    """Stateful projection job; :func:`compute_region` drives it to completion."""

    def __init__(self, lp, config, com_bounds=None):
        self.lp = lp
        self.config = config
        self.solver = LpSolver(lp)
        self.inner, self.outer, sols = init_approximations(lp, self.solver, com_bounds)
        self.last_solution = sols[-1]
        self.records = {}
        self._caps = {}
        self._refresh(created=self.inner.face_ids(), new_vertices=(), removed_faces=())

    # -- measure -------------------------------------------------------------

    def _refresh(self, created, new_vertices, removed_faces, hint=None):
        if self.config.measure_mode is MeasureMode.SUPPORT:
            for f in removed_faces:
                self.records.pop(f, None)
            start = new_vertices[0] if new_vertices else hint
            for fid, rec in list(self.records.items()):
                if rec.support not in self.outer.points:
                    self.records[fid] = support_point(self.outer, self.inner, fid, start)
            for fid in created:
                self.records[fid] = support_point(self.outer, self.inner, fid, start)
        else:
            self._caps = {
                fid: cap_volume(self.outer, f.normal, f.offset) for fid, f in self.inner.faces.items()
            }
            self._gap = volume(self.outer) - volume(self.inner)

    def error(self):
        if self.config.measure_mode is MeasureMode.SUPPORT:
            return float(sum(r.contribution for r in self.records.values()))
        return float(self._gap)

    def select_face(self):
        """Face with the largest measure; lowest face id on ties."""
        if self.config.measure_mode is MeasureMode.SUPPORT:
            scores = {fid: r.contribution for fid, r in self.records.items()}
        else:
            scores = self._caps
        best, best_v = None, -np.inf
        for fid in sorted(scores):
            if scores[fid] > best_v:
                best, best_v = fid, scores[fid]
        return best

    # -- one iteration -----------------------------------------------------------

    def step(self):
        """Run one solve/update/measure cycle; returns ``(face, d, times)``."""
        t0 = time.perf_counter()
        fid = self.select_face()
        face = self.inner.faces[fid]
        d = face.normal.copy()
        t1 = time.perf_counter()
        sol = self.solver.solve(d)
        t2 = time.perf_counter()
        if sol.status is not LpStatus.OPTIMAL:
            raise EmptyRegion(f"directional LP became {sol.status.value} mid-projection")
        self.last_solution = sol
        c = sol.com
        support = self.records[fid].support if fid in self.records else None
        iu = self.inner.add_point(c, seed_face=fid)
        ou = self.outer.add_halfspace(d, float(d @ c), seed_vertex=support)
        t3 = time.perf_counter()
        self._refresh(iu.created, ou.created, iu.removed, hint=support)
        if not iu.added and not ou.added and fid in self.records:
            # Nothing moved: the face is tight up to tolerance.
            r = self.records[fid]
            self.records[fid] = type(r)(r.face, r.support, r.point, 0.0, r.area)
        t4 = time.perf_counter()
        return fid, d, (t2 - t1, (t1 - t0) + (t4 - t3), t3 - t2)

    def region(self, status, iterations, provenance):
        P, T = self.inner.triangles()
        N, b = self.inner.halfspaces()
        outer_faces = [[self.outer.vertex_ids().index(v) for v in poly] for _, poly in self.outer.faces()]
        return BalanceRegion(
            status=status,
            vertices=P,
            triangles=T,
            normals=N,
            offsets=b,
            outer_normals=self.outer.normals,
            outer_offsets=self.outer.offsets,
            outer_vertices=self.outer.vertices,
            outer_faces=outer_faces,
            provenance={**provenance, "iterations": iterations},
        )


def _provenance(contacts, config, timestamp):
    return {
        "label": contacts.label,
        "config_hash": config.digest(),
        "timestamp": float(time.time() if timestamp is None else timestamp),
        "n_sides": config.n_sides,
        "measure": config.measure_mode.value,
        "epsilon": config.epsilon,
    }


def compute_region(contacts, robot, accel=None, bounds=None, config=None, timestamp=None):
    """Compute the balance region of a contact set.

    Returns ``(BalanceRegion, IterationTrace)``. Infeasible inputs give an
    ``Empty`` region and flat ones a ``Degenerate`` region carrying the
    boundary points found; running out of iterations gives ``MaxIterations``
    with the best inner polytope so far. ``timestamp`` overrides the
    wall-clock time recorded in the provenance.
    """
    config = ProjectionConfig() if config is None else config
    accel = AccelerationSet.static() if accel is None else accel
    bounds = ComBounds.default() if bounds is None else bounds
    prov = _provenance(contacts, config, timestamp)
    trace = IterationTrace()
    t_start = time.perf_counter()

    lp = assemble_lp(contacts, robot, accel, bounds, config.n_sides)
    try:
        job = Projection(lp, config, bounds)
    except EmptyRegion:
        trace.total_time = time.perf_counter() - t_start
        return BalanceRegion(RegionStatus.EMPTY, provenance={**prov, "iterations": 0}), trace
    except DegenerateRegion as exc:
        trace.total_time = time.perf_counter() - t_start
        pts = np.asarray(exc.points, dtype=float).reshape(-1, 3)
        uniq = []
        for p in pts:
            if not any(np.linalg.norm(p - q) <= 1e-8 for q in uniq):
                uniq.append(p)
        log.info("degenerate balance region (%d distinct points)", len(uniq))
        region = BalanceRegion(
            RegionStatus.DEGENERATE, vertices=np.array(uniq).reshape(-1, 3), provenance={**prov, "iterations": 0}
        )
        return region, trace

    trace.init_time = time.perf_counter() - t_start
    err = job.error()
    trace.initial_error = err
    track = config.track_volumes or config.measure_mode is MeasureMode.VOLUME
    if track:
        trace.initial_inner_volume = volume(job.inner)
        trace.initial_outer_volume = volume(job.outer)

    it = 0
    while err > config.epsilon and it < config.max_iterations:
        fid, d, (t_solve, t_measure, t_update) = job.step()
        it += 1
        err = job.error()
        vi = vo = float("nan")
        if track:
            vi, vo = volume(job.inner), volume(job.outer)
        trace.records.append(IterationRecord(it, fid, d, t_solve, t_measure, t_update, vi, vo, err))

    trace.final_error = err
    trace.total_time = time.perf_counter() - t_start
    status = RegionStatus.CONVERGED if err <= config.epsilon else RegionStatus.MAX_ITERATIONS
    return job.region(status, it, prov), trace


@dataclass
class SweepResult:
    n_sides: int
    volumes: list  # inner volume after init and after each iteration
    total_time: float  # s, median over repetitions
    iterations: int
    loop_time: float = 0.0  # s in Solve + Measure + Update, median over repetitions
    region: BalanceRegion = None

    @property
    def time_per_iteration(self):
        """Loop time per iteration; excludes assembly, initialization and volume tracking."""
        return self.loop_time / max(self.iterations, 1)

    @property
    def final_volume(self):
        return self.volumes[-1]


def sweep_linearization(contacts, robot, accel=None, bounds=None, n_sides_list=(4, 8, 16, 32),
                        iterations=50, epsilon=1e-12, repetitions=3, timestamp=None):
    """Run :func:`compute_region` for each pyramid resolution with a fixed iteration budget.

    The tiny default ``epsilon`` makes every run use the full budget, so
    volumes are compared at equal iteration counts. Timings are medians over
    ``repetitions`` identical runs.
    """
    if not len(n_sides_list):
        raise ValidationError("n_sides_list: must not be empty")
    out = []
    for n in n_sides_list:
        cfg = ProjectionConfig(epsilon=epsilon, max_iterations=iterations, n_sides=int(n), track_volumes=True)
        totals, loops = [], []
        for _ in range(max(int(repetitions), 1)):
            region, trace = compute_region(contacts, robot, accel, bounds, cfg, timestamp=timestamp)
            totals.append(trace.total_time)
            loops.append(sum(trace.phase_totals().values()))
        out.append(SweepResult(int(n), trace.inner_volumes(), float(np.median(totals)), trace.iterations,
                               float(np.median(loops)), region))
    return out
