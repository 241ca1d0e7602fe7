"""Support points, the surface-weighted error measure and volumes."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .inner import InnerPolytope
from .outer import OuterPolytope


@dataclass(frozen=True)
class SupportRecord:
    """Support point of the outer polytope beyond one inner face.

    ``support`` is the outer-vertex id maximizing the face normal, ``s`` its
    distance past the face plane and ``area`` the face area.
    """

    face: int
    support: int
    point: np.ndarray
    s: float
    area: float

    @property
    def contribution(self):
        """Volume of the tetrahedron-like cap ``s * area / 3``."""
        return self.s * self.area / 3.0


def support_point(outer, inner, face_id, start=None):
    """Hill-climb the outer vertex graph for the support point of an inner face."""
    f = inner.faces[face_id]
    if start is None or start not in outer.points:
        start = outer.vertex_ids()[0]
    vid = outer.hill_climb(f.normal, start)
    p = outer.points[vid]
    return SupportRecord(face_id, vid, p, float(f.normal @ p - f.offset), f.area)


def error_estimate(records):
    """Sum of ``s_i A_i / 3`` over the inner faces."""
    return float(sum(r.contribution for r in records))


def _inner_volume(inner):
    P, T = inner.triangles()
    c = P.mean(axis=0)
    a, b, d = P[T[:, 0]] - c, P[T[:, 1]] - c, P[T[:, 2]] - c
    return float(np.abs(np.einsum("ij,ij->i", a, np.cross(b, d))).sum() / 6.0)


def _outer_volume(outer):
    faces = outer.faces()
    if not faces:
        return 0.0
    c = outer.vertices.mean(axis=0)
    tris = []
    for _, poly in faces:
        p0 = outer.points[poly[0]]
        for i in range(1, len(poly) - 1):
            tris.append((p0, outer.points[poly[i]], outer.points[poly[i + 1]]))
    T = np.array(tris) - c
    return float(np.abs(np.einsum("ij,ij->i", T[:, 0], np.cross(T[:, 1], T[:, 2]))).sum() / 6.0)


def volume(polytope):
    """Volume by fan decomposition into tetrahedra from the vertex centroid.

    Exact for convex polytopes; flat polytopes give 0.
    """
    if isinstance(polytope, InnerPolytope):
        return _inner_volume(polytope)
    if isinstance(polytope, OuterPolytope):
        return _outer_volume(polytope)
    raise TypeError(f"unsupported polytope type {type(polytope).__name__}")


def cap_volume(outer, normal, offset):
    """Volume of the part of ``outer`` beyond the plane ``normal.x = offset``.

    This is the per-face measure of the original projection algorithm; it is
    only used by the volume-gap baseline.
    """
    ids = outer.vertex_ids()
    h = {v: outer.points[v] @ normal - offset for v in ids}
    above = [v for v in ids if h[v] > 0]
    if not above:
        return 0.0
    pts = [outer.points[v] for v in above]
    for v in above:
        for w in outer.adjacency[v]:
            if h[w] <= 0:
                t = h[v] / (h[v] - h[w])
                pts.append(outer.points[v] + t * (outer.points[w] - outer.points[v]))
    if len(pts) < 4:
        return 0.0
    try:
        return float(ConvexHull(np.array(pts)).volume)
    except QhullError:
        return 0.0
