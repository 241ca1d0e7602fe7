"""CoM admittance for a hand pressing on a table.

If the hand should push harder, the CoM has to lean toward it; the gain
maps the force error to a CoM velocity that restores moment balance.
"""
import numpy as np

from balance_region import admittance_gain, com_velocity_reference
from balance_region.admittance import moment_residual

m, g = 39.0, 9.81
hand = np.array([0.4, -0.3, 0.7])
gain = admittance_gain(hand, m, g, k_ad=2.0)
print("K =\n", np.round(gain.K, 5))

target, measured = np.array([0, 0, 30.0]), np.array([0, 0, 20.0])
print("CoM velocity reference:", np.round(com_velocity_reference(gain, target, measured), 5), "m/s")

# check: a balanced posture stays balanced after the displacement
f = np.array([0, 0, 20.0])
mo = np.cross(hand, f)
c = np.array([-mo[1] / (m * g), mo[0] / (m * g), 0.8])
df = target - measured
dc = gain.displacement(df)
print("moment residual before:", moment_residual(hand, f, c, m, g))
print("moment residual after :", moment_residual(hand, f + df, c + dc, m, g))
