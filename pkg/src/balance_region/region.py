"""Frozen balance regions: containment, Chebyshev ball and JSON/OFF export."""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import linprog

from .polytope.io import off_string


class RegionStatus(enum.Enum):
    CONVERGED = "Converged"
    MAX_ITERATIONS = "MaxIterations"
    DEGENERATE = "Degenerate"
    EMPTY = "Empty"


def _ro(a, shape_tail=None, dtype=float):
    a = np.array(a, dtype=dtype)
    if shape_tail is not None and a.size == 0:
        a = a.reshape((0,) + shape_tail)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class BalanceRegion:
    """Result of a projection.

    The consumer-facing constraint is the inner polytope's H-rep
    ``normals @ c <= offsets``. ``triangles`` index ``vertices`` and are in
    the same order as the H-rep rows. The outer H-rep includes the CoM bound
    rows.
    """

    status: RegionStatus
    vertices: np.ndarray = field(default_factory=lambda: _ro(np.zeros((0, 3))))
    triangles: np.ndarray = field(default_factory=lambda: _ro(np.zeros((0, 3)), dtype=int))
    normals: np.ndarray = field(default_factory=lambda: _ro(np.zeros((0, 3))))
    offsets: np.ndarray = field(default_factory=lambda: _ro(np.zeros(0)))
    outer_normals: np.ndarray = field(default_factory=lambda: _ro(np.zeros((0, 3))))
    outer_offsets: np.ndarray = field(default_factory=lambda: _ro(np.zeros(0)))
    outer_vertices: np.ndarray = field(default_factory=lambda: _ro(np.zeros((0, 3))))
    outer_faces: tuple = ()
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "vertices", _ro(self.vertices, (3,)))
        object.__setattr__(self, "triangles", _ro(self.triangles, (3,), dtype=int))
        object.__setattr__(self, "normals", _ro(self.normals, (3,)))
        object.__setattr__(self, "offsets", _ro(self.offsets))
        object.__setattr__(self, "outer_normals", _ro(self.outer_normals, (3,)))
        object.__setattr__(self, "outer_offsets", _ro(self.outer_offsets))
        object.__setattr__(self, "outer_vertices", _ro(self.outer_vertices, (3,)))
        object.__setattr__(self, "outer_faces", tuple(tuple(int(i) for i in f) for f in self.outer_faces))

    @property
    def is_empty(self):
        return self.status is RegionStatus.EMPTY

    @property
    def is_degenerate(self):
        return self.status is RegionStatus.DEGENERATE

    @property
    def has_volume(self):
        return self.status in (RegionStatus.CONVERGED, RegionStatus.MAX_ITERATIONS)

    def volume(self):
        if not self.has_volume:
            return 0.0
        P = self.vertices
        c = P.mean(axis=0)
        T = P[self.triangles] - c
        return float(np.abs(np.einsum("ij,ij->i", T[:, 0], np.cross(T[:, 1], T[:, 2]))).sum() / 6.0)

    def outer_contains(self, c, tol=0.0):
        return bool(np.all(self.outer_normals @ np.asarray(c) <= self.outer_offsets + tol))

    def cross_section(self, z):
        """Vertices of the horizontal slice of the inner polytope at height ``z``."""
        pts = []
        P = self.vertices
        edges = {tuple(sorted((t[i], t[(i + 1) % 3]))) for t in self.triangles for i in range(3)}
        for a, b in edges:
            za, zb = P[a, 2] - z, P[b, 2] - z
            if za == 0:
                pts.append(P[a])
            if zb == 0:
                pts.append(P[b])
            if za * zb < 0:
                t = za / (za - zb)
                pts.append(P[a] + t * (P[b] - P[a]))
        return np.array(pts).reshape(-1, 3)


def contains(region, c, margin=0.0):
    """True iff ``n_i . c <= b_i - margin`` for every inner H-rep row.

    Empty regions contain nothing. A degenerate (flat) region contains a
    point only at ``margin <= 0`` and only if it lies in the hull of its
    vertices.
    """
    c = np.asarray(c, dtype=float)
    if region.is_empty:
        return False
    if region.is_degenerate:
        if margin > 0 or len(region.vertices) == 0:
            return False
        V = region.vertices
        k = len(V)
        res = linprog(
            np.zeros(k),
            A_eq=np.vstack([V.T, np.ones((1, k))]),
            b_eq=np.concatenate([c, [1.0]]),
            bounds=[(0, None)] * k,
            method="highs",
        )
        return res.status == 0
    return bool(np.all(region.normals @ c <= region.offsets - margin))


def chebyshev_center(region):
    """Center and radius of the largest ball inside the inner polytope.

    Returns ``(center, radius, ok)``; ``ok`` is False (radius 0) for flat or
    empty regions.
    """
    if not region.has_volume:
        center = region.vertices.mean(axis=0) if len(region.vertices) else np.full(3, np.nan)
        return center, 0.0, False
    N = region.normals
    norms = np.linalg.norm(N, axis=1)
    A = np.hstack([N / norms[:, None], np.ones((len(N), 1))])
    b = region.offsets / norms
    res = linprog(
        np.array([0.0, 0.0, 0.0, -1.0]),
        A_ub=A,
        b_ub=b,
        bounds=[(None, None)] * 3 + [(0, None)],
        method="highs",
    )
    if res.status != 0 or res.x[3] <= 0:
        return region.vertices.mean(axis=0), 0.0, False
    return res.x[:3], float(res.x[3]), True


# -- JSON --------------------------------------------------------------------


def _hs(N, b):
    return [[*map(float, n), float(o)] for n, o in zip(N, b)]


def region_to_dict(region):
    out = {"status": region.status.value, "provenance": dict(region.provenance)}
    if region.is_empty:
        out["inner"] = {"vertices": [], "halfspaces": []}
        out["outer"] = {"halfspaces": []}
        return out
    out["inner"] = {
        "vertices": region.vertices.tolist(),
        "halfspaces": _hs(region.normals, region.offsets),
        "triangles": region.triangles.tolist(),
    }
    out["outer"] = {
        "halfspaces": _hs(region.outer_normals, region.outer_offsets),
        "vertices": region.outer_vertices.tolist(),
        "faces": [list(f) for f in region.outer_faces],
    }
    return out


def region_from_dict(data):
    status = RegionStatus(data["status"])
    inner = data.get("inner", {})
    outer = data.get("outer", {})
    hs = np.array(inner.get("halfspaces", []), dtype=float).reshape(-1, 4)
    ohs = np.array(outer.get("halfspaces", []), dtype=float).reshape(-1, 4)
    return BalanceRegion(
        status=status,
        vertices=np.array(inner.get("vertices", []), dtype=float).reshape(-1, 3),
        triangles=np.array(inner.get("triangles", []), dtype=int).reshape(-1, 3),
        normals=hs[:, :3],
        offsets=hs[:, 3],
        outer_normals=ohs[:, :3],
        outer_offsets=ohs[:, 3],
        outer_vertices=np.array(outer.get("vertices", []), dtype=float).reshape(-1, 3),
        outer_faces=outer.get("faces", []),
        provenance=data.get("provenance", {}),
    )


def region_to_json(region, indent=None):
    return json.dumps(region_to_dict(region), indent=indent, sort_keys=True)


def region_from_json(text):
    return region_from_dict(json.loads(text))


def write_region(region, path, indent=1):
    Path(path).write_text(region_to_json(region, indent=indent))


def read_region(path):
    return region_from_json(Path(path).read_text())


def region_off(region, which="inner"):
    """OFF mesh of the inner (triangles) or outer (polygons) polytope."""
    if which == "inner":
        return off_string(region.vertices, [list(t) for t in region.triangles])
    if which == "outer":
        return off_string(region.outer_vertices, [list(f) for f in region.outer_faces])
    raise ValueError("which must be 'inner' or 'outer'")
