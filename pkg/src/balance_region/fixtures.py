"""Contact scenes used by tests, demos and the benchmark corpus.

Surfaces are discretized into their boundary vertices: a foot or a hand on a
table is a 4-point rectangle, a hand on the side of a box a 5-point polygon.
Two feet give 8 points; adding both hands gives 17.
"""
from __future__ import annotations

import numpy as np

from .contact_model import AccelerationSet, ComBounds, ContactPoint, ContactSet, RobotSpec, tangent_frame

ROBOT_MASS = 39.0  # kg, a small humanoid
FOOT_SIZE = (0.22, 0.12)
HAND_SIZE = (0.06, 0.06)

# CoM acceleration bounds: +-0.4 in x, +-0.3 in y and +-0.3 around gravity in z.
MULTI_CONTACT_ACCEL = (0.4, 0.3, 0.3)


def _frame(normal, yaw):
    t1, t2 = tangent_frame(normal)
    c, s = np.cos(yaw), np.sin(yaw)
    return c * t1 + s * t2, -s * t1 + c * t2


def rectangle(center, normal, size, mu, yaw=0.0, fmin=0.0, fmax=None):
    """Four corner contacts of a ``size = (length, width)`` rectangle."""
    normal = np.asarray(normal, dtype=float)
    normal = normal / np.linalg.norm(normal)
    e1, e2 = _frame(normal, yaw)
    hl, hw = size[0] / 2.0, size[1] / 2.0
    corners = [(hl, hw), (-hl, hw), (-hl, -hw), (hl, -hw)]
    return [
        ContactPoint(np.asarray(center) + a * e1 + b * e2, normal, mu, fmin, fmax)
        for a, b in corners
    ]


def polygon(center, normal, radius, n_points, mu, yaw=0.0, fmin=0.0, fmax=None):
    """Vertices of a regular ``n_points``-gon around ``center``."""
    normal = np.asarray(normal, dtype=float)
    normal = normal / np.linalg.norm(normal)
    e1, e2 = _frame(normal, yaw)
    ang = 2 * np.pi * np.arange(n_points) / n_points
    return [
        ContactPoint(np.asarray(center) + radius * (np.cos(t) * e1 + np.sin(t) * e2), normal, mu, fmin, fmax)
        for t in ang
    ]


def feet(mu=0.7, spacing=0.2, size=FOOT_SIZE):
    left = rectangle((0.0, spacing / 2, 0.0), (0, 0, 1), size, mu)
    right = rectangle((0.0, -spacing / 2, 0.0), (0, 0, 1), size, mu)
    return left + right


def right_hand_on_table(mu=0.7, fmin=0.0, fmax=None):
    """Right hand 70 cm high, 40 cm ahead, 30 cm to the right."""
    return rectangle((0.4, -0.3, 0.7), (0, 0, 1), HAND_SIZE, mu, fmin=fmin, fmax=fmax)


def left_hand_on_box(mu=0.7):
    """Left hand pushing a box 85 cm high, 40 cm ahead, 30 cm to the left."""
    return polygon((0.4, 0.3, 0.85), (-1, 0, 0), 0.04, 5, mu)


def robot():
    return RobotSpec(ROBOT_MASS)


def two_feet(mu=0.7):
    """Two coplanar flat feet, 8 points; the static region is a prism over the support polygon."""
    return ContactSet(tuple(feet(mu)), "two_feet")


def multi_contact(mu=0.7):
    """Feet, right hand on a table and left hand on a box: 17 points."""
    pts = feet(mu) + right_hand_on_table(mu) + left_hand_on_box(mu)
    return ContactSet(tuple(pts), "multi_contact_17")


def multi_contact_accel():
    return AccelerationSet.box(*MULTI_CONTACT_ACCEL)


def right_hand_scene(hand_mu=0.7, feet_mu=0.7):
    """Feet plus right hand on a table; the hand is the last 4 contacts."""
    pts = feet(feet_mu) + right_hand_on_table(hand_mu)
    return ContactSet(tuple(pts), "right_hand")


# Normal-force bounds of the right hand while the contact is being added.
RIGHT_HAND_SCHEDULE = [
    (0.0, 0.0),
    (5e-4, 1e-2),
    (7.0, 20.5),
    (15.7, 47.2),
    (22.0, 66.5),
    (25.0, 75.0),
]


def generate_contact_set(rng, n_surfaces, label=""):
    """Random scene with 2 to 4 surfaces (8 to 17 points).

    Two jittered feet always; a third surface is a hand on a table (4 points)
    or a hand on a box (5 points); four surfaces use both hands.
    """
    if n_surfaces not in (2, 3, 4):
        raise ValueError("n_surfaces must be 2, 3 or 4")
    mu = rng.uniform(0.5, 0.9)
    spacing = rng.uniform(0.16, 0.26)
    dx = rng.uniform(-0.08, 0.08)
    pts = []
    for side in (1, -1):
        center = (rng.uniform(-0.05, 0.05) + (dx if side > 0 else -dx), side * spacing / 2, 0.0)
        pts += rectangle(center, (0, 0, 1), FOOT_SIZE, mu, yaw=rng.uniform(-0.2, 0.2))
    table = rectangle(
        (rng.uniform(0.3, 0.5), rng.uniform(-0.4, -0.2), rng.uniform(0.6, 0.8)),
        (0, 0, 1), HAND_SIZE, mu, yaw=rng.uniform(-0.5, 0.5),
    )
    box_normal = np.array([-1.0, rng.uniform(-0.2, 0.2), rng.uniform(-0.1, 0.1)])
    box = polygon(
        (rng.uniform(0.3, 0.5), rng.uniform(0.2, 0.4), rng.uniform(0.75, 0.95)),
        box_normal, 0.04, 5, mu, yaw=rng.uniform(0, np.pi),
    )
    if n_surfaces == 3:
        pts += table if rng.random() < 0.5 else box
    elif n_surfaces == 4:
        pts += table + box
    return ContactSet(tuple(pts), label)


def generate_corpus(seed, count, accel_fraction=0.5):
    """``count`` reproducible scenes as ``(name, contacts, robot, accel, bounds)`` tuples."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n_surfaces = int(rng.integers(2, 5))
        robust = rng.random() < accel_fraction
        cs = generate_contact_set(rng, n_surfaces)
        name = f"seed{seed}-{i:04d}-{len(cs)}pt-{'robust' if robust else 'static'}"
        cs = ContactSet(cs.contacts, name)
        accel = AccelerationSet.box(*MULTI_CONTACT_ACCEL) if robust else AccelerationSet.static()
        out.append((name, cs, robot(), accel, ComBounds.default()))
    return out
