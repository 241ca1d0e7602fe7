"""Smooth region transitions across contact changes, and the latest-region handoff.

A contact is added or removed by ramping its normal-force bounds, so the
balance region moves in small steps instead of jumping. Regions are
computed off the control thread; :class:`RegionStore` hands the newest
finished one to readers.
"""
from __future__ import annotations

import enum
import logging
import threading
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .projection import compute_region

log = logging.getLogger(__name__)


class Profile(enum.Enum):
    LINEAR = "linear"
    SMOOTHSTEP = "smoothstep"


def _pairs(a, name):
    a = np.array(a, dtype=float)
    if a.ndim == 1:
        a = a.reshape(1, 2)
    if a.ndim != 2 or a.shape[1] != 2 or not np.all(np.isfinite(a)):
        raise ValidationError(f"{name}: expected (fmin, fmax) pairs")
    if np.any(a[:, 0] < 0) or np.any(a[:, 0] > a[:, 1]):
        raise ValidationError(f"{name}: need 0 <= fmin <= fmax for every pair")
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class TransitionSchedule:
    """Bounds ramp for the contacts at ``indices`` (default: all contacts).

    ``start`` and ``end`` hold one ``(fmin, fmax)`` pair per ramped contact, or
    a single pair broadcast to all of them.
    """

    start: np.ndarray
    end: np.ndarray
    duration: float = 1.0  # s
    profile: Profile = Profile.LINEAR
    indices: tuple | None = None

    def __post_init__(self):
        start, end = _pairs(self.start, "start"), _pairs(self.end, "end")
        if len(start) != len(end):
            if len(start) == 1:
                start = _pairs(np.repeat(start, len(end), axis=0), "start")
            elif len(end) == 1:
                end = _pairs(np.repeat(end, len(start), axis=0), "end")
            else:
                raise ValidationError("start/end: pair counts differ")
        if not self.duration > 0:
            raise ValidationError(f"duration: must be > 0, got {self.duration!r}")
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "end", end)
        object.__setattr__(self, "profile", Profile(self.profile))
        if self.indices is not None:
            object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))

    def weight(self, s):
        if self.profile is Profile.LINEAR:
            return s
        return s * s * (3.0 - 2.0 * s)


def transition_bounds(schedule, t):
    """Interpolated ``(fmin, fmax)`` pairs at time ``t``; out-of-range ``t`` is clamped."""
    if not 0.0 <= t <= schedule.duration:
        warnings.warn(f"t={t} outside [0, {schedule.duration}], clamped", RuntimeWarning, stacklevel=2)
        t = min(max(t, 0.0), schedule.duration)
    s = t / schedule.duration
    if s == 0.0:
        return schedule.start.copy()
    if s == 1.0:
        return schedule.end.copy()
    w = schedule.weight(s)
    out = (1.0 - w) * schedule.start + w * schedule.end
    # Interpolating valid pairs keeps fmin <= fmax up to rounding.
    out[:, 0] = np.minimum(out[:, 0], out[:, 1])
    return out


def _apply(contacts, indices, pairs):
    idx = range(len(contacts)) if indices is None else indices
    if len(pairs) == 1 and len(idx) > 1:
        pairs = np.repeat(pairs, len(idx), axis=0)
    if len(pairs) != len(idx):
        raise ValidationError(f"bounds: expected {len(idx)} pairs, got {len(pairs)}")
    bounds = [None] * len(contacts)
    for i, (lo, hi) in zip(idx, pairs):
        if not 0 <= i < len(contacts):
            raise ValidationError(f"indices: contact {i} out of range")
        bounds[i] = (float(lo), float(hi))
    return contacts.with_bounds(bounds)


def region_sequence_from_bounds(contacts, indices, bounds_list, robot, accel=None, com_bounds=None,
                                config=None, timestamp=None):
    """Regions for an explicit list of bound steps applied to ``indices``.

    The sequence stops after the first Empty region, since later steps are
    meaningless for a controller that has already lost balance.
    """
    out = []
    for step, pairs in enumerate(bounds_list):
        cs = _apply(contacts, indices, _pairs(pairs, f"bounds_list[{step}]"))
        region, _ = compute_region(cs, robot, accel, com_bounds, config, timestamp=timestamp)
        out.append(region)
        if region.is_empty:
            log.warning("transition step %d is Empty, sequence truncated", step)
            break
    return out


def region_sequence(contacts, schedule, steps, robot, accel=None, com_bounds=None, config=None,
                    timestamp=None):
    """Regions at ``steps`` evenly spaced times over the schedule."""
    if int(steps) != steps or steps < 2:
        raise ValidationError(f"steps: must be an integer >= 2, got {steps!r}")
    times = np.linspace(0.0, schedule.duration, int(steps))
    bounds_list = [transition_bounds(schedule, float(t)) for t in times]
    return region_sequence_from_bounds(contacts, schedule.indices, bounds_list, robot, accel, com_bounds,
                                       config, timestamp)


class RegionStore:
    """Holds the latest finished region; swaps are atomic, reads never block on a job."""

    def __init__(self, region=None):
        self._lock = threading.Lock()
        self._region = region
        self._version = 0
        self._updated = threading.Condition(self._lock)

    def publish(self, region):
        with self._lock:
            self._region = region
            self._version += 1
            self._updated.notify_all()

    def latest(self):
        with self._lock:
            return self._region

    def snapshot(self):
        """``(version, region)`` read together."""
        with self._lock:
            return self._version, self._region

    def wait_for(self, version, timeout=None):
        """Block until a region newer than ``version`` is published."""
        with self._updated:
            self._updated.wait_for(lambda: self._version > version, timeout)
            return self._version, self._region


class RegionWorker(threading.Thread):
    """Background producer: computes one region after another and publishes each.

    ``inputs`` is called before every job and returns the keyword arguments of
    :func:`compute_region` (contacts, robot, accel, bounds, config), so the
    caller can move contacts or ramp bounds between jobs. Returning ``None``
    stops the worker.
    """

    def __init__(self, store, inputs, max_jobs=None):
        super().__init__(daemon=True)
        self.store = store
        self.inputs = inputs
        self.max_jobs = max_jobs
        self.jobs = 0
        self.error = None
        self._stop_evt = threading.Event()

    def stop(self):
        self._stop_evt.set()

    def run(self):
        try:
            while not self._stop_evt.is_set():
                if self.max_jobs is not None and self.jobs >= self.max_jobs:
                    break
                kwargs = self.inputs()
                if kwargs is None:
                    break
                region, _ = compute_region(**kwargs)
                self.store.publish(region)
                self.jobs += 1
        except Exception as exc:  # surfaced to the owner via .error
            self.error = exc
            log.exception("region worker stopped")
