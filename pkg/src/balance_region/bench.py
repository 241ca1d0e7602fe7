"""Phase-timing benchmark: Solve / Measure / Update per measure mode.

Each fixture is projected ``repetitions`` times per mode and the median of
the per-run phase totals is reported. Fixtures run one after another unless
``parallel`` is set, in which case each fixture runs in its own process.
"""
from __future__ import annotations

import csv
import io
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import ValidationError
from .projection import MeasureMode, ProjectionConfig, compute_region

CSV_COLUMNS = (
    "fixture", "contacts", "mode", "solve_ms", "measure_ms", "update_ms", "total_ms", "iters", "vol_inner", "vol_outer",
)


@dataclass(frozen=True)
class BenchRow:
    fixture: str
    contacts: int
    mode: str
    solve_ms: float
    measure_ms: float
    update_ms: float
    total_ms: float
    iters: int
    vol_inner: float
    vol_outer: float
    # per-phase means, not part of the CSV
    means: dict = field(default_factory=dict, compare=False)
    status: str = ""


@dataclass
class BenchReport:
    rows: list
    repetitions: int
    seed: int | None = None

    def to_csv(self, path=None):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([
                r.fixture, r.contacts, r.mode,
                f"{r.solve_ms:.4f}", f"{r.measure_ms:.4f}", f"{r.update_ms:.4f}", f"{r.total_ms:.4f}",
                r.iters, f"{r.vol_inner:.9g}", f"{r.vol_outer:.9g}",
            ])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text

    def select(self, mode=None, contacts=None):
        return [r for r in self.rows if (mode is None or r.mode == mode) and (contacts is None or r.contacts == contacts)]

    def measure_ratio(self, contacts=None):
        """Median volume-mode / support-mode Measure time over fixtures run in both modes."""
        sup = {r.fixture: r.measure_ms for r in self.select("support", contacts)}
        vol = {r.fixture: r.measure_ms for r in self.select("volume", contacts)}
        ratios = [vol[k] / sup[k] for k in sup if k in vol and sup[k] > 0]
        return statistics.median(ratios) if ratios else float("nan")


def _outer_volume(region):
    if len(region.outer_vertices) < 4:
        return 0.0
    try:
        return float(ConvexHull(region.outer_vertices).volume)
    except QhullError:
        return 0.0


def run_fixture(name, contacts, robot, accel, bounds, mode, repetitions=20, config=None):
    """Time one fixture in one measure mode."""
    config = ProjectionConfig() if config is None else config
    config = replace(config, measure_mode=MeasureMode(mode), track_volumes=False)
    per = {"solve": [], "measure": [], "update": [], "total": []}
    region = trace = None
    for _ in range(repetitions):
        region, trace = compute_region(contacts, robot, accel, bounds, config, timestamp=0.0)
        ph = trace.phase_totals()
        for k in ("solve", "measure", "update"):
            per[k].append(ph[k] * 1e3)
        per["total"].append(trace.total_time * 1e3)
    med = {k: statistics.median(v) for k, v in per.items()}
    means = {k: statistics.fmean(v) for k, v in per.items()}
    return BenchRow(
        name, len(contacts), MeasureMode(mode).value,
        med["solve"], med["measure"], med["update"], med["total"],
        trace.iterations, region.volume(), _outer_volume(region), means, region.status.value,
    )


def _run_all(args):
    return [run_fixture(*a) for a in args]


def benchmark(corpus, modes=("support", "volume"), repetitions=20, config=None, parallel=False, workers=None,
              seed=None):
    """Benchmark ``(name, contacts, robot, accel, bounds)`` entries; returns a :class:`BenchReport`."""
    corpus = list(corpus)
    if not corpus:
        raise ValidationError("corpus: no fixtures to benchmark")
    if int(repetitions) != repetitions or repetitions < 1:
        raise ValidationError(f"repetitions: must be an integer >= 1, got {repetitions!r}")
    jobs = [[(name, cs, rb, acc, bd, m, repetitions, config) for m in modes] for name, cs, rb, acc, bd in corpus]
    if parallel:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = [r for chunk in ex.map(_run_all, jobs) for r in chunk]
    else:
        rows = [r for chunk in map(_run_all, jobs) for r in chunk]
    return BenchReport(rows, int(repetitions), seed)


def read_csv(text):
    """Parse a benchmark CSV back into ``BenchRow`` objects."""
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValidationError(f"benchmark CSV: expected columns {','.join(CSV_COLUMNS)}")
    casts = {f.name: f.type for f in fields(BenchRow)}
    out = []
    for row in reader:
        vals = {}
        for k in CSV_COLUMNS:
            t = casts[k]
            vals[k] = int(row[k]) if t == "int" else float(row[k]) if t == "float" else row[k]
        out.append(BenchRow(**vals))
    return out


def scaling_ratio(report, mode="support"):
    """Median total time of the largest fixtures over that of the smallest."""
    rows = report.select(mode)
    if not rows:
        return float("nan")
    sizes = sorted({r.contacts for r in rows})
    small = [r.total_ms for r in rows if r.contacts == sizes[0]]
    big = [r.total_ms for r in rows if r.contacts == sizes[-1]]
    return float(np.median(big) / np.median(small))
