"""Inner approximation: triangulated convex hull grown by beneath-beyond steps."""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateRegion

log = logging.getLogger(__name__)

DEDUP_TOL = 1e-8
VISIBLE_TOL = 1e-9
AFFINE_TOL = 1e-7


@dataclass
class Face:
    """Oriented triangle ``(a, b, c)``, counter-clockwise seen from outside.

    ``neighbors[j]`` is the face across edge ``(verts[j], verts[(j + 1) % 3])``.
    """

    verts: tuple
    normal: np.ndarray
    offset: float
    area: float
    neighbors: list


@dataclass(frozen=True)
class InnerUpdate:
    added: bool
    created: tuple = ()
    removed: tuple = ()
    vertex: int | None = None


class InnerPolytope:
    """Convex hull stored as triangles with edge adjacency.

    Face ids increase monotonically and are never reused, so "lowest face
    index" is a stable tie-breaker.
    """

    def __init__(self, points):
        pts = np.asarray(points, dtype=float)
        self._points = []
        self.faces = {}
        self._next_face = 0
        a, b, c, d = _initial_simplex(pts)
        for i in (a, b, c, d):
            self._points.append(pts[i].copy())
        self._build_tetrahedron()
        for i, p in enumerate(pts):
            if i in (a, b, c, d):
                continue
            self.add_point(p)

    # -- construction ----------------------------------------------------

    def _new_face(self, a, b, c):
        P = self._points
        cr = np.cross(P[b] - P[a], P[c] - P[a])
        nrm = np.linalg.norm(cr)
        normal = cr / nrm
        fid = self._next_face
        self._next_face += 1
        self.faces[fid] = Face((a, b, c), normal, float(normal @ P[a]), 0.5 * nrm, [None, None, None])
        return fid

    def _build_tetrahedron(self):
        P = self._points
        if np.dot(np.cross(P[1] - P[0], P[2] - P[0]), P[3] - P[0]) > 0:
            # 3 lies above (0, 1, 2): flip so that face (0, 2, 1) points away from it.
            tris = [(0, 2, 1), (0, 1, 3), (1, 2, 3), (2, 0, 3)]
        else:
            tris = [(0, 1, 2), (0, 3, 1), (1, 3, 2), (2, 3, 0)]
        ids = [self._new_face(*t) for t in tris]
        self._link(ids)

    def _link(self, ids):
        """Fill neighbor slots among ``ids`` by matching reversed edges."""
        edge_owner = {}
        for fid in ids:
            f = self.faces[fid]
            for j in range(3):
                edge_owner[(f.verts[j], f.verts[(j + 1) % 3])] = (fid, j)
        for fid in ids:
            f = self.faces[fid]
            for j in range(3):
                if f.neighbors[j] is None:
                    other = edge_owner.get((f.verts[(j + 1) % 3], f.verts[j]))
                    if other is not None:
                        f.neighbors[j] = other[0]

    # -- queries -----------------------------------------------------------

    @property
    def points(self):
        return np.array(self._points)

    def vertex_ids(self):
        return sorted({v for f in self.faces.values() for v in f.verts})

    @property
    def vertices(self):
        return np.array([self._points[i] for i in self.vertex_ids()])

    def face_ids(self):
        return sorted(self.faces)

    def halfspaces(self):
        """``(normals, offsets)`` of all faces in face-id order."""
        ids = self.face_ids()
        N = np.array([self.faces[i].normal for i in ids])
        b = np.array([self.faces[i].offset for i in ids])
        return N, b

    def triangles(self):
        """``(vertex array, triangle index array)`` with compact vertex numbering."""
        vids = self.vertex_ids()
        remap = {v: k for k, v in enumerate(vids)}
        tris = np.array([[remap[v] for v in self.faces[f].verts] for f in self.face_ids()], dtype=int)
        return np.array([self._points[i] for i in vids]), tris

    def n_edges(self):
        return 3 * len(self.faces) // 2

    def contains(self, p, tol=0.0):
        N, b = self.halfspaces()
        return bool(np.all(N @ np.asarray(p) <= b + tol))

    # -- beneath-beyond update ---------------------------------------------

    def _visible(self, fid, p):
        f = self.faces[fid]
        return f.normal @ p > f.offset + VISIBLE_TOL

    def add_point(self, p, seed_face=None):
        """Add ``p`` to the hull, starting the visibility search at ``seed_face``.

        Returns an :class:`InnerUpdate`; ``added`` is False when ``p`` is a
        duplicate vertex or lies inside the hull (no face sees it).
        """
        p = np.asarray(p, dtype=float)
        for v in self.vertex_ids():
            if np.linalg.norm(self._points[v] - p) <= DEDUP_TOL:
                log.debug("inner update: duplicate vertex, skipped")
                return InnerUpdate(False)

        if seed_face is None or seed_face not in self.faces or not self._visible(seed_face, p):
            best, best_h = None, VISIBLE_TOL
            for fid, f in self.faces.items():
                h = f.normal @ p - f.offset
                if h > best_h:
                    best, best_h = fid, h
            if best is None:
                log.debug("inner update: point not beyond any face, skipped")
                return InnerUpdate(False)
            seed_face = best

        visible = {seed_face}
        queue = deque([seed_face])
        while queue:
            fid = queue.popleft()
            for nb in self.faces[fid].neighbors:
                if nb not in visible and self._visible(nb, p):
                    visible.add(nb)
                    queue.append(nb)

        horizon = []  # (a, b, outside face)
        for fid in sorted(visible):
            f = self.faces[fid]
            for j in range(3):
                nb = f.neighbors[j]
                if nb not in visible:
                    horizon.append((f.verts[j], f.verts[(j + 1) % 3], nb))
        starts = [h[0] for h in horizon]
        if len(set(starts)) != len(starts):
            raise RuntimeError("inner update: horizon is not a simple loop")

        new_v = len(self._points)
        self._points.append(p.copy())
        for fid in visible:
            del self.faces[fid]

        created = []
        by_start = {}
        by_end = {}
        for a, b, out in horizon:
            fid = self._new_face(a, b, new_v)
            f = self.faces[fid]
            f.neighbors[0] = out
            of = self.faces[out]
            for j in range(3):
                if of.verts[j] == b and of.verts[(j + 1) % 3] == a:
                    of.neighbors[j] = fid
            by_start[a] = fid
            by_end[b] = fid
            created.append(fid)
        for fid in created:
            f = self.faces[fid]
            a, b, _ = f.verts
            f.neighbors[1] = by_start[b]  # edge (b, p) is shared with the face starting at b
            f.neighbors[2] = by_end[a]  # edge (p, a) with the face ending at a
        return InnerUpdate(True, tuple(created), tuple(sorted(visible)), new_v)

    # -- checks ----------------------------------------------------------------

    def check(self, tol=1e-7):
        """Raise ``AssertionError`` if convexity, planarity or Euler's formula fail."""
        V = self.vertex_ids()
        P = np.array(self._points)
        F = len(self.faces)
        E = self.n_edges()
        assert len(V) - E + F == 2, f"Euler characteristic {len(V) - E + F}"
        for fid, f in self.faces.items():
            assert np.all(P[V] @ f.normal <= f.offset + tol), f"face {fid} not supporting"
            assert np.all(np.abs(P[list(f.verts)] @ f.normal - f.offset) <= tol)
            for j, nb in enumerate(f.neighbors):
                assert nb in self.faces, f"face {fid} has dangling neighbor"
                g = self.faces[nb]
                a, b = f.verts[j], f.verts[(j + 1) % 3]
                assert any(g.verts[k] == b and g.verts[(k + 1) % 3] == a for k in range(3))


def _initial_simplex(pts):
    """Indices of four affinely independent points, chosen greedily by spread."""
    n = len(pts)
    if n < 4:
        raise DegenerateRegion(f"need at least 4 distinct points, got {n}", pts)
    a = 0
    b = int(np.argmax(np.linalg.norm(pts - pts[a], axis=1)))
    if np.linalg.norm(pts[b] - pts[a]) <= AFFINE_TOL:
        raise DegenerateRegion("all points coincide", pts)
    u = (pts[b] - pts[a]) / np.linalg.norm(pts[b] - pts[a])
    rel = pts - pts[a]
    line_dist = np.linalg.norm(rel - np.outer(rel @ u, u), axis=1)
    c = int(np.argmax(line_dist))
    if line_dist[c] <= AFFINE_TOL:
        raise DegenerateRegion("points are collinear", pts)
    nrm = np.cross(pts[b] - pts[a], pts[c] - pts[a])
    nrm /= np.linalg.norm(nrm)
    plane_dist = np.abs(rel @ nrm)
    d = int(np.argmax(plane_dist))
    if plane_dist[d] <= AFFINE_TOL:
        raise DegenerateRegion("points are coplanar", pts)
    return a, b, c, d
