"""Adding a hand contact by ramping its normal-force bounds.

The region moves toward the hand as it is allowed (then forced) to carry
load. A background worker publishes each finished region; the control loop
only ever reads the latest one.
"""
import time

import numpy as np

from balance_region import ProjectionConfig, RegionStore, RegionWorker, region_sequence_from_bounds
from balance_region import fixtures as fx

robot = fx.robot()
scene = fx.right_hand_scene()
hand = (8, 9, 10, 11)
cfg = ProjectionConfig(epsilon=1e-4)

regions = region_sequence_from_bounds(scene, hand, fx.RIGHT_HAND_SCHEDULE, robot, config=cfg)
for (lo, hi), r in zip(fx.RIGHT_HAND_SCHEDULE, regions):
    c = r.vertices.mean(axis=0) if r.has_volume else np.full(3, np.nan)
    print(f"hand bounds [{lo:7.4f}, {hi:6.2f}] N  {r.status.value:10s} volume {r.volume():.4f}  "
          f"centroid {np.round(c, 3)}")

# the same ramp computed in the background
store = RegionStore()
steps = iter(fx.RIGHT_HAND_SCHEDULE)


def inputs():
    b = next(steps, None)
    if b is None:
        return None
    return dict(contacts=scene.with_bounds([None] * 8 + [b] * 4), robot=robot, config=cfg)


worker = RegionWorker(store, inputs)
worker.start()
version = 0
t0 = time.perf_counter()
while worker.is_alive() or store.snapshot()[0] > version:
    version, region = store.wait_for(version, timeout=0.5)
    if region is not None:
        print(f"  t={time.perf_counter() - t0:5.2f} s  control loop sees region v{version}: {region.volume():.4f} m^3")
    if not worker.is_alive() and version == worker.jobs:
        break
