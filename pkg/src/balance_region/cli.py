"""Command-line front end.

Exit codes: 0 Converged (or success), 1 invalid input, 2 usage error or
infeasible oracle query, 3 Empty, 4 Degenerate, 5 MaxIterations.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .admittance import DERIVED, PRINTED, admittance_gain, com_velocity_reference
from .bench import benchmark
from .contact_model import AccelerationSet
from .errors import BalanceRegionError
from .files import load_problem, write_corpus
from .fixtures import generate_corpus
from .oracle import oracle_feasible
from .projection import ProjectionConfig, compute_region, sweep_linearization
from .region import RegionStatus, region_off, write_region
from .transition import Profile, TransitionSchedule, region_sequence, region_sequence_from_bounds

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2
EXIT_CODES = {
    RegionStatus.CONVERGED: 0,
    RegionStatus.EMPTY: 3,
    RegionStatus.DEGENERATE: 4,
    RegionStatus.MAX_ITERATIONS: 5,
}


def _floats(text, n=None, name="value"):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{name}: expected comma-separated numbers, got {text!r}")
    if n is not None and len(vals) != n:
        raise argparse.ArgumentTypeError(f"{name}: expected {n} numbers, got {len(vals)}")
    return vals


def _vec3(text):
    return np.array(_floats(text, 3, "vector"))


def _ints(text):
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _pair(text):
    return tuple(_floats(text, 2, "bounds"))


def _bounds_list(text):
    return [_pair(p) for p in text.split(";") if p.strip()]


def _common(p):
    p.add_argument("--epsilon", type=float, default=1e-3, help="stopping threshold, m^3")
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--n-sides", type=int, default=8, help="friction pyramid sides")
    p.add_argument("--measure", choices=("support", "volume"), default="support")
    p.add_argument("--accel-box", type=lambda s: _floats(s, 3, "accel-box"), default=None,
                   metavar="AX,AY,AZ", help="half-widths of a CoM acceleration box (overrides the file)")
    p.add_argument("--out", type=Path, default=None, metavar="DIR")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mesh", action="store_true", help="also write OFF meshes")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    _common(common)
    parser = argparse.ArgumentParser(prog="balance-region", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", parents=[common], help="compute the balance region of a contact set")
    p.add_argument("input", type=Path)

    p = sub.add_parser("benchmark", parents=[common], help="time Solve/Measure/Update per measure mode")
    p.add_argument("corpus", type=Path, nargs="?", help="directory of contact-set JSON files")
    p.add_argument("--generate", type=int, default=0, metavar="N",
                   help="synthesize N scenes from --seed instead of reading a corpus")
    p.add_argument("--repetitions", type=int, default=20)
    p.add_argument("--modes", default="support,volume")
    p.add_argument("--parallel", action="store_true", help="run fixtures in separate processes")

    p = sub.add_parser("sweep", parents=[common], help="inner volume per iteration for several pyramid sizes")
    p.add_argument("input", type=Path)
    p.add_argument("--n-sides-list", type=_ints, default=[4, 8, 16, 32])
    p.add_argument("--iterations", type=int, default=50)

    p = sub.add_parser("transition", parents=[common], help="regions along a normal-force bound ramp")
    p.add_argument("input", type=Path)
    p.add_argument("--contacts", type=_ints, default=None, help="indices of the ramped contacts (default all)")
    p.add_argument("--bounds", type=_bounds_list, default=None, metavar="LO,HI;LO,HI;...",
                   help="explicit bound pair per step")
    p.add_argument("--start", type=_pair, default=None, metavar="LO,HI")
    p.add_argument("--end", type=_pair, default=None, metavar="LO,HI")
    p.add_argument("--steps", type=int, default=6)
    p.add_argument("--profile", choices=[x.value for x in Profile], default="linear")

    p = sub.add_parser("oracle", parents=[common], help="brute-force feasibility of one CoM position")
    p.add_argument("input", type=Path)
    p.add_argument("--com", type=_vec3, required=True, metavar="X,Y,Z")

    p = sub.add_parser("admittance", parents=[common], help="CoM admittance gain and velocity reference")
    p.add_argument("--position", type=_vec3, required=True, metavar="X,Y,Z")
    p.add_argument("--mass", type=float, required=True)
    p.add_argument("--g", type=float, default=9.81)
    p.add_argument("--k-ad", type=float, default=1.0)
    p.add_argument("--ordering", choices=(DERIVED, PRINTED), default=DERIVED)
    p.add_argument("--f-target", type=_vec3, default=None, metavar="FX,FY,FZ")
    p.add_argument("--f-measured", type=_vec3, default=None, metavar="FX,FY,FZ")
    return parser


def _config(args, **over):
    kw = dict(epsilon=args.epsilon, max_iterations=args.max_iter, n_sides=args.n_sides, measure_mode=args.measure)
    kw.update(over)
    return ProjectionConfig(**kw)


def _problem(args):
    contacts, robot, accel, bounds = load_problem(args.input)
    if args.accel_box is not None:
        accel = AccelerationSet.box(*args.accel_box)
    return contacts, robot, accel, bounds


def _outdir(args):
    out = args.out if args.out is not None else Path(".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write(region, out, stem, mesh):
    write_region(region, out / f"{stem}.json")
    if mesh and region.has_volume:
        (out / f"{stem}.inner.off").write_text(region_off(region, "inner"))
        (out / f"{stem}.outer.off").write_text(region_off(region, "outer"))


def cmd_compute(args):
    contacts, robot, accel, bounds = _problem(args)
    region, trace = compute_region(contacts, robot, accel, bounds, _config(args))
    out = _outdir(args)
    stem = args.input.stem + ".region"
    _write(region, out, stem, args.mesh)
    print(f"{region.status.value}: {trace.iterations} iterations, volume {region.volume():.6g} m^3, "
          f"{trace.total_time * 1e3:.1f} ms -> {out / (stem + '.json')}")
    return EXIT_CODES[region.status]


def cmd_benchmark(args):
    if args.generate:
        corpus = generate_corpus(args.seed, args.generate)
        if args.out is not None:
            write_corpus(_outdir(args) / "corpus", corpus)
    else:
        if args.corpus is None:
            raise BalanceRegionError("benchmark: give a corpus directory or --generate N")
        files = sorted(Path(args.corpus).glob("*.json"))
        corpus = []
        for f in files:
            cs, rb, acc, bd = load_problem(f)
            if args.accel_box is not None:
                acc = AccelerationSet.box(*args.accel_box)
            corpus.append((f.stem, cs, rb, acc, bd))
    modes = [m for m in args.modes.split(",") if m]
    report = benchmark(corpus, modes, args.repetitions, _config(args), parallel=args.parallel, seed=args.seed)
    text = report.to_csv()
    if args.out is not None:
        (_outdir(args) / "benchmark.csv").write_text(text)
    sys.stdout.write(text)
    if "support" in modes and "volume" in modes:
        print(f"# measure speedup (volume/support, median): {report.measure_ratio():.2f}x", file=sys.stderr)
    return EXIT_OK


def cmd_sweep(args):
    contacts, robot, accel, bounds = _problem(args)
    results = sweep_linearization(contacts, robot, accel, bounds, args.n_sides_list, args.iterations)
    out = _outdir(args)
    summary = [("n_sides", "iterations", "final_volume", "total_ms", "ms_per_iteration")]
    for r in results:
        with open(out / f"sweep_n{r.n_sides}.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("iteration", "inner_volume"))
            w.writerows((i, f"{v:.9g}") for i, v in enumerate(r.volumes))
        summary.append((r.n_sides, r.iterations, f"{r.final_volume:.9g}", f"{r.total_time * 1e3:.3f}",
                        f"{r.time_per_iteration * 1e3:.4f}"))
    with open(out / "sweep.csv", "w", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(summary)
    for row in summary:
        print(",".join(map(str, row)))
    return EXIT_OK


def cmd_transition(args):
    contacts, robot, accel, bounds = _problem(args)
    cfg = _config(args)
    if args.bounds:
        regions = region_sequence_from_bounds(contacts, args.contacts, args.bounds, robot, accel, bounds, cfg)
    else:
        if args.start is None or args.end is None:
            raise BalanceRegionError("transition: give --bounds or both --start and --end")
        sched = TransitionSchedule(args.start, args.end, 1.0, args.profile, args.contacts)
        regions = region_sequence(contacts, sched, args.steps, robot, accel, bounds, cfg)
    out = _outdir(args)
    for k, region in enumerate(regions):
        _write(region, out, f"step_{k:02d}", args.mesh)
        print(f"step {k}: {region.status.value}, volume {region.volume():.6g} m^3")
    return EXIT_CODES[regions[-1].status]


def cmd_oracle(args):
    contacts, robot, accel, bounds = _problem(args)
    ok = oracle_feasible(contacts, robot, accel, bounds, args.com, n_sides=args.n_sides)
    print("feasible" if ok else "infeasible")
    return EXIT_OK if ok else EXIT_INFEASIBLE


def cmd_admittance(args):
    gain = admittance_gain(args.position, args.mass, args.g, args.k_ad, args.ordering)
    out = {"K": gain.K.tolist(), "ordering": gain.ordering}
    if args.f_target is not None or args.f_measured is not None:
        ft = np.zeros(3) if args.f_target is None else args.f_target
        fm = np.zeros(3) if args.f_measured is None else args.f_measured
        out["com_velocity"] = com_velocity_reference(gain, ft, fm).tolist()
    print(json.dumps(out))
    return EXIT_OK


COMMANDS = {
    "compute": cmd_compute,
    "benchmark": cmd_benchmark,
    "sweep": cmd_sweep,
    "transition": cmd_transition,
    "oracle": cmd_oracle,
    "admittance": cmd_admittance,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (BalanceRegionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
