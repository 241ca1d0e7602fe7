"""Feet plus both hands, static and under a box of CoM accelerations.

Requiring balance for every acceleration in the box shrinks the region; the
Chebyshev center is a natural "safest" CoM target.
"""
import numpy as np

from balance_region import chebyshev_center, compute_region
from balance_region import fixtures as fx

robot = fx.robot()
scene = fx.multi_contact()

for name, accel in [("static", None), ("robust", fx.multi_contact_accel())]:
    region, trace = compute_region(scene, robot, accel)
    center, radius, _ = chebyshev_center(region)
    lo, hi = region.vertices.min(axis=0), region.vertices.max(axis=0)
    print(f"{name:7s} {region.status.value:10s} iters {trace.iterations:3d}  {trace.total_time * 1e3:6.1f} ms  "
          f"volume {region.volume():.4f} m^3")
    print(f"        x [{lo[0]:+.3f}, {hi[0]:+.3f}]  y [{lo[1]:+.3f}, {hi[1]:+.3f}]  z [{lo[2]:.3f}, {hi[2]:.3f}]")
    print(f"        safest CoM {np.round(center, 3)}, clearance {radius * 100:.1f} cm")
    ph = trace.phase_totals()
    print("        phases: " + ", ".join(f"{k} {v * 1e3:.1f} ms" for k, v in ph.items()))
