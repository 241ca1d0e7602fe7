"""ASCII OFF mesh export."""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .inner import InnerPolytope
from .outer import OuterPolytope


def mesh(polytope):
    """``(vertices, faces)`` with faces as lists of compact vertex indices."""
    if isinstance(polytope, InnerPolytope):
        P, T = polytope.triangles()
        return P, [list(t) for t in T]
    if isinstance(polytope, OuterPolytope):
        ids = polytope.vertex_ids()
        remap = {v: k for k, v in enumerate(ids)}
        return polytope.vertices, [[remap[v] for v in poly] for _, poly in polytope.faces()]
    raise TypeError(f"unsupported polytope type {type(polytope).__name__}")


def off_string(vertices, faces):
    vertices = np.asarray(vertices, dtype=float)
    n_edges = len({tuple(sorted((f[i], f[(i + 1) % len(f)]))) for f in faces for i in range(len(f))})
    lines = ["OFF", f"{len(vertices)} {len(faces)} {n_edges}"]
    lines += [" ".join(repr(float(x)) for x in v) for v in vertices]
    lines += [" ".join(str(i) for i in [len(f), *f]) for f in faces]
    return "\n".join(lines) + "\n"


def to_off(polytope):
    return off_string(*mesh(polytope))


def write_off(polytope, path):
    Path(path).write_text(to_off(polytope))


def read_off(path):
    """Parse an OFF file written by :func:`write_off`."""
    tokens = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip() and not ln.startswith("#")]
    if tokens[0] != ["OFF"]:
        raise ValueError("not an OFF file")
    nv, nf = int(tokens[1][0]), int(tokens[1][1])
    V = np.array([[float(x) for x in t] for t in tokens[2 : 2 + nv]])
    F = [[int(x) for x in t[1:]] for t in tokens[2 + nv : 2 + nv + nf]]
    return V, F
