"""Two flat feet: the static balance region is a prism over the support polygon.

Prints the mid-height slice next to the convex hull of the foot corners and
writes both approximations as OFF meshes for a mesh viewer.
"""
from pathlib import Path

import numpy as np
from scipy.spatial import ConvexHull

from balance_region import ProjectionConfig, compute_region, region_off
from balance_region import fixtures as fx

out = Path("demo_out")
out.mkdir(exist_ok=True)

feet = fx.two_feet()
region, trace = compute_region(feet, fx.robot(), config=ProjectionConfig(epsilon=1e-4))
print(f"{region.status.value} after {trace.iterations} iterations, {trace.total_time * 1e3:.1f} ms")

xy = np.array([p.position[:2] for p in feet.contacts])
poly = ConvexHull(xy)
sl = region.cross_section(1.0)[:, :2]
print(f"support polygon area {poly.volume:.5f} m^2, region slice at z=1 m {ConvexHull(sl).volume:.5f} m^2")
print(f"region volume {region.volume():.5f} m^3 (polygon area x 2 m height = {2 * poly.volume:.5f})")

(out / "feet_inner.off").write_text(region_off(region, "inner"))
(out / "feet_outer.off").write_text(region_off(region, "outer"))
print("meshes written to", out)
