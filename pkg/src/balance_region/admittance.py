"""CoM admittance: velocity reference from a contact-force tracking error.

For a single regulated contact at ``r = (x, y, z)`` under static balance
``r x f + c x m g = 0`` (gravity along -z), a force change ``df`` is
compensated by the CoM shift

    dc_x = (x df_z - z df_x) / (m g)
    dc_y = (y df_z - z df_y) / (m g)

and the admittance law is ``cdot = K (f_target - f_measured)`` with
``K = k_ad * d(dc)/d(df)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

DERIVED = "derived"
# The other published arrangement pairs row x with lever y and row y with
# lever x in the third column; kept for comparison only.
PRINTED = "printed"


@dataclass(frozen=True)
class AdmittanceGain:
    K: np.ndarray
    position: np.ndarray
    mass: float
    g: float
    k_ad: float
    ordering: str = DERIVED

    def __post_init__(self):
        for name in ("K", "position"):
            a = np.array(getattr(self, name), dtype=float)
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    def displacement(self, df):
        """CoM displacement ``K df / k_ad`` restoring moment balance."""
        return self.K @ np.asarray(df, dtype=float) / self.k_ad


def admittance_gain(r, mass, g=9.81, k_ad=1.0, ordering=DERIVED):
    """Gain matrix for a contact at ``r``; ``g`` is the gravity magnitude."""
    if not mass > 0:
        raise ValidationError(f"mass: must be > 0, got {mass!r}")
    if not g > 0:
        raise ValidationError(f"g: must be > 0, got {g!r}")
    if ordering not in (DERIVED, PRINTED):
        raise ValidationError(f"ordering: must be {DERIVED!r} or {PRINTED!r}, got {ordering!r}")
    r = np.asarray(r, dtype=float)
    if r.shape != (3,) or not np.all(np.isfinite(r)):
        raise ValidationError(f"r: expected a finite 3-vector, got {r!r}")
    x, y, z = r
    lx, ly = (x, y) if ordering == DERIVED else (y, x)
    K = (k_ad / (mass * g)) * np.array([[-z, 0.0, lx], [0.0, -z, ly], [0.0, 0.0, 0.0]])
    return AdmittanceGain(K, r, float(mass), float(g), float(k_ad), ordering)


def com_velocity_reference(gain, f_target, f_measured):
    """``K (f_target - f_measured)``; the z component is always zero."""
    df = np.asarray(f_target, dtype=float) - np.asarray(f_measured, dtype=float)
    return gain.K @ df


def moment_residual(r, f, c, mass, g=9.81):
    """x and y rows of ``r x f + c x m g`` with gravity ``(0, 0, -g)``."""
    r, f, c = (np.asarray(v, dtype=float) for v in (r, f, c))
    m = np.cross(r, f) + np.cross(c, np.array([0.0, 0.0, -mass * g]))
    return m[:2]
