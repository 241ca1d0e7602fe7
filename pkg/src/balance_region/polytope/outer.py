"""Outer approximation: half-space intersection with an incrementally
maintained vertex/edge graph (double description)."""
from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass

import numpy as np

log = logging.getLogger(__name__)

DEDUP_TOL = 1e-8
CUT_TOL = 1e-9
INCIDENCE_TOL = 1e-7
FACE_TOL = 1e-10


@dataclass(frozen=True)
class OuterUpdate:
    added: bool
    halfspace: int | None = None
    created: tuple = ()
    removed: tuple = ()


class OuterPolytope:
    """Bounded polytope ``{x | N x <= b}`` with its vertices.

    Vertex ids are never reused. ``incidence[v]`` is the set of half-space
    indices whose plane passes through vertex ``v``; ``adjacency[v]`` the set
    of vertices sharing an edge with ``v``.
    """

    def __init__(self, normals, offsets):
        N = np.asarray(normals, dtype=float)
        b = np.asarray(offsets, dtype=float)
        scale = np.linalg.norm(N, axis=1)
        self._normals = list(N / scale[:, None])
        self._offsets = list(b / scale)
        self.points = {}
        self.incidence = {}
        self.adjacency = {}
        self._next_vertex = 0
        self._enumerate_from_scratch()

    # -- from-scratch enumeration (used once, for the seed polyhedron) ------

    def _enumerate_from_scratch(self):
        N = np.array(self._normals)
        b = np.array(self._offsets)
        found = []
        for i, j, k in itertools.combinations(range(len(b)), 3):
            M = N[[i, j, k]]
            if abs(np.linalg.det(M)) < 1e-12:
                continue
            x = np.linalg.solve(M, b[[i, j, k]])
            if np.all(N @ x <= b + INCIDENCE_TOL) and not any(np.linalg.norm(x - y) <= DEDUP_TOL for y in found):
                found.append(x)
        if len(found) < 4:
            raise ValueError("half-spaces do not bound a full-dimensional polytope")
        for x in found:
            self._add_vertex(x, frozenset(np.flatnonzero(np.abs(N @ x - b) <= INCIDENCE_TOL).tolist()))
        ids = list(self.points)
        for u, v in itertools.combinations(ids, 2):
            common = self.incidence[u] & self.incidence[v]
            if len(common) < 2 or np.linalg.matrix_rank(N[sorted(common)], tol=1e-9) < 2:
                continue
            if any(w not in (u, v) and common <= self.incidence[w] for w in ids):
                continue
            self.adjacency[u].add(v)
            self.adjacency[v].add(u)

    def _add_vertex(self, x, incidence):
        vid = self._next_vertex
        self._next_vertex += 1
        self.points[vid] = np.asarray(x, dtype=float)
        self.incidence[vid] = frozenset(incidence)
        self.adjacency[vid] = set()
        return vid

    def _drop_vertex(self, vid):
        for w in self.adjacency.pop(vid):
            self.adjacency[w].discard(vid)
        del self.points[vid]
        del self.incidence[vid]

    # -- queries -----------------------------------------------------------

    @property
    def normals(self):
        return np.array(self._normals)

    @property
    def offsets(self):
        return np.array(self._offsets)

    @property
    def n_halfspaces(self):
        return len(self._offsets)

    def vertex_ids(self):
        return sorted(self.points)

    @property
    def vertices(self):
        return np.array([self.points[v] for v in self.vertex_ids()])

    def contains(self, p, tol=0.0):
        return bool(np.all(self.normals @ np.asarray(p) <= self.offsets + tol))

    def argmax_vertex(self, d):
        """Exhaustive maximizer of ``d.x`` over the vertices (lowest id on ties)."""
        ids = self.vertex_ids()
        vals = np.array([self.points[v] for v in ids]) @ d
        return ids[int(np.argmax(vals))]

    def hill_climb(self, d, start):
        """Maximize ``d.x`` over vertices by steepest ascent along edges.

        Convexity makes the local maximum global.
        """
        cur = start if start in self.points else self.vertex_ids()[0]
        val = self.points[cur] @ d
        while True:
            best, best_val = cur, val
            for w in self.adjacency[cur]:
                wv = self.points[w] @ d
                if wv > best_val:
                    best, best_val = w, wv
            if best == cur:
                return cur
            cur, val = best, best_val

    def faces(self):
        """Ordered vertex-id polygons, one per non-redundant half-space.

        Uses the tracked incidences plus exact-up-to-rounding plane contacts
        (``FACE_TOL``). The looser ``INCIDENCE_TOL`` would pull in vertices that
        merely lie close to a plane and fold the polygon.
        """
        ids = self.vertex_ids()
        P = np.array([self.points[v] for v in ids])
        N, b = self.normals, self.offsets
        on = np.abs(P @ N.T - b) <= FACE_TOL
        for row, v in enumerate(ids):
            on[row, sorted(self.incidence[v])] = True
        out = []
        for h in range(len(b)):
            rows = np.flatnonzero(on[:, h])
            if len(rows) < 3:
                continue
            order = _ccw_order(P[rows], N[h])
            out.append((h, [ids[rows[k]] for k in order]))
        return out

    # -- incremental cut -------------------------------------------------------

    def add_halfspace(self, normal, offset, seed_vertex=None):
        """Intersect with ``normal.x <= offset``.

        The violating vertices are collected by a breadth-first search over
        the vertex graph from ``seed_vertex`` (the support point of the cut);
        every edge leaving that set is cut at its intersection with the plane.
        Returns an :class:`OuterUpdate`; ``added`` is False when the cut
        removes nothing deeper than the vertex dedup tolerance.
        """
        normal = np.asarray(normal, dtype=float)
        scale = np.linalg.norm(normal)
        a = normal / scale
        off = float(offset) / scale

        def height(v):
            return self.points[v] @ a - off

        if seed_vertex is None or seed_vertex not in self.points:
            seed_vertex = self.argmax_vertex(a)
        if height(seed_vertex) <= CUT_TOL:
            seed_vertex = self.hill_climb(a, seed_vertex)
        if height(seed_vertex) <= DEDUP_TOL:
            log.debug("outer update: redundant plane, skipped")
            return OuterUpdate(False)

        violating, touching = set(), set()
        queue = deque([seed_vertex])
        seen = {seed_vertex}
        while queue:
            v = queue.popleft()
            h = height(v)
            if h > CUT_TOL:
                violating.add(v)
            elif h >= -CUT_TOL:
                touching.add(v)
            else:
                continue
            for w in self.adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)

        hidx = len(self._offsets)
        self._normals.append(a)
        self._offsets.append(off)

        # Cut points on edges leaving the violating set.
        pending = []  # (position, incidence, kept endpoint)
        for v in sorted(violating):
            for w in sorted(self.adjacency[v]):
                if w in violating or w in touching:
                    continue
                hv, hw = height(v), height(w)
                t = hv / (hv - hw)
                x = self.points[v] + t * (self.points[w] - self.points[v])
                inc = (self.incidence[v] & self.incidence[w]) | {hidx}
                if np.linalg.norm(x - self.points[w]) <= DEDUP_TOL:
                    touching.add(w)
                    continue
                pending.append((x, inc, w))

        for v in touching:
            self.incidence[v] = self.incidence[v] | {hidx}
        for v in violating:
            self._drop_vertex(v)

        created = []
        for x, inc, w in pending:
            dup = next((c for c in created if np.linalg.norm(self.points[c] - x) <= DEDUP_TOL), None)
            if dup is None:
                dup = next((t for t in touching if np.linalg.norm(self.points[t] - x) <= DEDUP_TOL), None)
            if dup is not None:
                self.incidence[dup] = self.incidence[dup] | inc
                target = dup
            else:
                target = self._add_vertex(x, inc)
                created.append(target)
            if w != target:
                self.adjacency[target].add(w)
                self.adjacency[w].add(target)

        # Re-link the new face: consecutive polygon vertices share an edge,
        # any other pair of face vertices does not.
        face = sorted(set(created) | touching)
        if len(face) >= 3:
            P = np.array([self.points[v] for v in face])
            order = [face[k] for k in _ccw_order(P, a)]
            ring = set()
            for i, u in enumerate(order):
                w = order[(i + 1) % len(order)]
                ring.add((min(u, w), max(u, w)))
            for u, w in itertools.combinations(face, 2):
                if (u, w) in ring:
                    self.adjacency[u].add(w)
                    self.adjacency[w].add(u)
                else:
                    self.adjacency[u].discard(w)
                    self.adjacency[w].discard(u)
        elif len(face) == 2:
            u, w = face
            self.adjacency[u].add(w)
            self.adjacency[w].add(u)
        return OuterUpdate(True, hidx, tuple(created), tuple(sorted(violating)))

    # -- checks ----------------------------------------------------------------

    def check(self, tol=1e-7):
        N, b = self.normals, self.offsets
        for v, x in self.points.items():
            assert np.all(N @ x <= b + tol), f"vertex {v} violates a half-space"
            inc = self.incidence[v]
            assert len(inc) >= 3, f"vertex {v} lies on {len(inc)} planes"
            assert np.all(np.abs(N[sorted(inc)] @ x - b[sorted(inc)]) <= tol)
            for w in self.adjacency[v]:
                assert v in self.adjacency[w]


def _ccw_order(P, normal):
    """Indices sorting coplanar points counter-clockwise around ``normal``."""
    c = P.mean(axis=0)
    e1 = P[0] - c
    if np.linalg.norm(e1) < 1e-15:
        e1 = P[1] - c
    e1 = e1 - (e1 @ normal) * normal
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(normal, e1)
    rel = P - c
    ang = np.arctan2(rel @ e2, rel @ e1)
    return list(np.argsort(ang, kind="stable"))
