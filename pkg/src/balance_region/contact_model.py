"""Contacts, robot constants and the linearized equilibrium program.

A CoM position ``c`` is balanced when contact forces exist that satisfy the
Newton-Euler equations of the centroidal model together with (linearized)
friction cones and normal-force bounds. For a robust region the forces must
exist for every vertex of a convex set of CoM accelerations; each vertex gets
its own copy of the force variables and the CoM is shared.

Variable layout of the assembled program::

    x = (f^1, ..., f^K, c),   f^k in R^{3n},   c in R^3
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .errors import ValidationError

DEFAULT_GRAVITY = (0.0, 0.0, -9.81)
DEFAULT_N_SIDES = 8
UNIT_TOL = 1e-9
_BOX_A = np.vstack([np.eye(3), -np.eye(3)])


def _vec3(value, name):
    arr = np.array(value, dtype=float).reshape(-1)
    if arr.shape != (3,) or not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name}: expected a finite 3-vector, got {value!r}")
    arr.setflags(write=False)
    return arr


def _frozen(arr):
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


def skew(v):
    """Matrix ``S`` such that ``S @ w == np.cross(v, w)``."""
    x, y, z = v
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def tangent_frame(u):
    """Right-handed orthonormal frame ``(t1, t2, u)`` around a unit normal.

    ``t1`` is the world axis on which ``u`` has the smallest magnitude (first
    one on ties), projected onto the plane orthogonal to ``u``.
    """
    u = np.asarray(u, dtype=float)
    axis = np.zeros(3)
    axis[int(np.argmin(np.abs(u)))] = 1.0
    t1 = axis - u.dot(axis) * u
    t1 /= np.linalg.norm(t1)
    t2 = np.cross(u, t1)
    return t1, t2


@dataclass(frozen=True)
class RobotSpec:
    mass: float
    gravity: np.ndarray = field(default_factory=lambda: _vec3(DEFAULT_GRAVITY, "gravity"))

    def __post_init__(self):
        if not np.isfinite(self.mass) or self.mass <= 0:
            raise ValidationError(f"mass: must be > 0, got {self.mass!r}")
        g = _vec3(self.gravity, "gravity")
        if np.linalg.norm(g) == 0:
            raise ValidationError("gravity: must be nonzero")
        object.__setattr__(self, "mass", float(self.mass))
        object.__setattr__(self, "gravity", g)

    @property
    def weight(self):
        """Magnitude of the gravity force, ``m * |g|`` in N."""
        return self.mass * float(np.linalg.norm(self.gravity))


@dataclass(frozen=True)
class ContactPoint:
    """Unilateral point contact.

    ``fmax=None`` stands for the default bound ``m * |g|``, resolved when the
    program is assembled.
    """

    position: np.ndarray
    normal: np.ndarray
    mu: float
    fmin: float = 0.0
    fmax: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "position", _vec3(self.position, "position"))
        u = _vec3(self.normal, "normal")
        if abs(np.linalg.norm(u) - 1.0) > UNIT_TOL:
            raise ValidationError(f"normal: must have unit norm, got |u| = {np.linalg.norm(u)!r}")
        object.__setattr__(self, "normal", u)
        if not np.isfinite(self.mu) or self.mu < 0:
            raise ValidationError(f"mu: must be >= 0, got {self.mu!r}")
        if not np.isfinite(self.fmin) or self.fmin < 0:
            raise ValidationError(f"fmin: must be >= 0, got {self.fmin!r}")
        if self.fmax is not None and (not np.isfinite(self.fmax) or self.fmax < self.fmin):
            raise ValidationError(f"fmax: must be >= fmin ({self.fmin}), got {self.fmax!r}")
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "fmin", float(self.fmin))
        if self.fmax is not None:
            object.__setattr__(self, "fmax", float(self.fmax))

    def with_bounds(self, fmin, fmax):
        return ContactPoint(self.position, self.normal, self.mu, fmin, fmax)


@dataclass(frozen=True)
class ContactSet:
    contacts: tuple
    label: str = ""

    def __post_init__(self):
        contacts = tuple(self.contacts)
        if not contacts:
            raise ValidationError("contacts: at least one contact is required")
        for i, c in enumerate(contacts):
            if not isinstance(c, ContactPoint):
                raise ValidationError(f"contacts[{i}]: expected ContactPoint, got {type(c).__name__}")
        object.__setattr__(self, "contacts", contacts)

    def __len__(self):
        return len(self.contacts)

    def __iter__(self):
        return iter(self.contacts)

    def __getitem__(self, i):
        return self.contacts[i]

    def with_bounds(self, bounds, label=None):
        """Copy with per-contact ``(fmin, fmax)`` replaced; ``None`` entries keep the contact."""
        if len(bounds) != len(self.contacts):
            raise ValidationError(f"bounds: expected {len(self.contacts)} pairs, got {len(bounds)}")
        contacts = [c if b is None else c.with_bounds(*b) for c, b in zip(self.contacts, bounds)]
        return ContactSet(tuple(contacts), self.label if label is None else label)


@dataclass(frozen=True)
class AccelerationSet:
    """Vertices of the convex set of admissible CoM accelerations."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim == 1:
            v = v.reshape(1, -1)
        if v.ndim != 2 or v.shape[1] != 3 or v.shape[0] < 1 or not np.all(np.isfinite(v)):
            raise ValidationError("accel_vertices: expected a non-empty list of finite 3-vectors")
        object.__setattr__(self, "vertices", _frozen(v))

    @classmethod
    def static(cls):
        return cls(np.zeros((1, 3)))

    @classmethod
    def box(cls, ax, ay, az):
        """Axis-aligned box ``[-ax, ax] x [-ay, ay] x [-az, az]``; zero widths collapse."""
        halves = [(0.0,) if h == 0 else (-float(h), float(h)) for h in (ax, ay, az)]
        if any(h < 0 for h in (ax, ay, az)):
            raise ValidationError("accel box half-widths must be >= 0")
        return cls(np.array(list(itertools.product(*halves))))

    def __len__(self):
        return self.vertices.shape[0]

    @property
    def is_static(self):
        return len(self) == 1 and not np.any(self.vertices)


@dataclass(frozen=True)
class ComBounds:
    """Polyhedral CoM constraint ``A c <= b``; must describe a bounded set."""

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        A = np.array(self.A, dtype=float)
        b = np.array(self.b, dtype=float).reshape(-1)
        if A.ndim != 2 or A.shape[1] != 3 or A.shape[0] != b.shape[0]:
            raise ValidationError("com_bounds: A must be (m, 3) and b of length m")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ValidationError("com_bounds: non-finite entries")
        if A.shape == (6, 3) and np.array_equal(A, _BOX_A):
            if np.any(b[:3] < -b[3:]):
                raise ValidationError("com_bounds: the polyhedron A c <= b is empty")
            object.__setattr__(self, "A", _frozen(A))
            object.__setattr__(self, "b", _frozen(b))
            return
        for axis in range(3):
            for sign in (1.0, -1.0):
                d = np.zeros(3)
                d[axis] = sign
                res = linprog(-d, A_ub=A, b_ub=b, bounds=[(None, None)] * 3, method="highs")
                if res.status == 2:
                    raise ValidationError("com_bounds: the polyhedron A c <= b is empty")
                if res.status != 0:
                    raise ValidationError(
                        f"com_bounds: unbounded along {'+' if sign > 0 else '-'}{'xyz'[axis]}"
                    )
        object.__setattr__(self, "A", _frozen(A))
        object.__setattr__(self, "b", _frozen(b))

    @classmethod
    def box(cls, xlim=(-5.0, 5.0), ylim=(-5.0, 5.0), zlim=(0.0, 2.0)):
        A = _BOX_A
        b = np.array([xlim[1], ylim[1], zlim[1], -xlim[0], -ylim[0], -zlim[0]], dtype=float)
        return cls(A, b)

    @classmethod
    def default(cls):
        return cls.box()

    def __len__(self):
        return self.A.shape[0]


@dataclass(frozen=True)
class LinearizedCone:
    """Rows ``normals @ f <= 0`` of an inscribed friction pyramid.

    The first ``n_sides`` rows are the polygon sides, the last row is the
    unilaterality constraint ``-u.f <= 0``.
    """

    normals: np.ndarray
    n_sides: int

    @property
    def side_rows(self):
        return self.normals[:-1]

    def contains(self, f, tol=1e-12):
        return bool(np.all(self.normals @ np.asarray(f, dtype=float) <= tol))


def linearize_friction_cone(u, mu, n_sides=DEFAULT_N_SIDES):
    """Inscribed ``n_sides`` pyramid of the friction cone ``|f_t| <= mu u.f``.

    Side ``k`` has in-plane normal at angle ``2 pi k / n + pi / n`` and offset
    ``mu cos(pi / n)``, so the polygon vertices sit on the exact cone.
    """
    u = _vec3(u, "normal")
    if abs(np.linalg.norm(u) - 1.0) > UNIT_TOL:
        raise ValidationError(f"normal: must have unit norm, got |u| = {np.linalg.norm(u)!r}")
    if not np.isfinite(mu) or mu < 0:
        raise ValidationError(f"mu: must be >= 0, got {mu!r}")
    if int(n_sides) != n_sides or n_sides < 3:
        raise ValidationError(f"n_sides: must be an integer >= 3, got {n_sides!r}")
    n_sides = int(n_sides)
    t1, t2 = tangent_frame(u)
    phi = 2.0 * np.pi * np.arange(n_sides) / n_sides + np.pi / n_sides
    rows = (
        np.cos(phi)[:, None] * t1
        + np.sin(phi)[:, None] * t2
        - mu * np.cos(np.pi / n_sides) * u
    )
    normals = np.vstack([rows, -u])
    return LinearizedCone(_frozen(normals), n_sides)


def pyramid_rays(u, mu, n_sides=DEFAULT_N_SIDES):
    """Edge rays ``u + mu (cos t t1 + sin t t2)``, ``t = 2 pi k / n``, of the inscribed pyramid.

    They are the vertices of the polygon cut out by :func:`linearize_friction_cone`
    at unit normal force.
    """
    t1, t2 = tangent_frame(u)
    th = 2.0 * np.pi * np.arange(n_sides) / n_sides
    return np.asarray(u)[None, :] + mu * (np.cos(th)[:, None] * t1 + np.sin(th)[:, None] * t2)


@dataclass(frozen=True)
class LinearProgram:
    """Stacked equilibrium program over ``x = (f^1, ..., f^K, c)``.

    ``A_eq x = b_eq`` holds the Newton and Euler rows (six per acceleration
    vertex). ``ineq_lower <= A_ineq x <= ineq_upper`` holds, per vertex and
    per contact, the pyramid sides followed by one ranged normal-force row
    ``fmin <= u.f <= fmax`` (which also carries unilaterality), then the CoM
    bound rows.
    """

    A_eq: np.ndarray
    b_eq: np.ndarray
    A_ineq: np.ndarray
    ineq_lower: np.ndarray
    ineq_upper: np.ndarray
    n_contacts: int
    n_accel: int
    n_sides: int
    # Structural data the rows were built from. ``generators[i]`` holds the
    # ``n_sides`` edge rays of contact i's pyramid (unit normal component), so
    # the backend can solve the equivalent span form ``f_i = G_i^T lambda_i``.
    positions: np.ndarray = None
    generators: np.ndarray = None
    fmin: np.ndarray = None
    fmax: np.ndarray = None
    accel: np.ndarray = None
    mass: float = None
    gravity: np.ndarray = None
    com_A: np.ndarray = None
    com_b: np.ndarray = None

    @property
    def n_vars(self):
        return self.A_eq.shape[1]

    @property
    def n_force_vars(self):
        return 3 * self.n_contacts * self.n_accel

    @property
    def com_slice(self):
        return slice(self.n_force_vars, self.n_force_vars + 3)

    def objective(self, d):
        """Cost vector of ``max d.c``: zero weight on every force variable."""
        w = np.zeros(self.n_vars)
        w[self.com_slice] = d
        return w

    def forces(self, x):
        """Reshape a solution's force part to ``(K, n, 3)``."""
        return np.asarray(x)[: self.n_force_vars].reshape(self.n_accel, self.n_contacts, 3)

    def max_violation(self, x):
        x = np.asarray(x, dtype=float)
        eq = np.abs(self.A_eq @ x - self.b_eq).max(initial=0.0)
        ax = self.A_ineq @ x
        up = (ax - self.ineq_upper).max(initial=0.0)
        lo = (self.ineq_lower - ax).max(initial=0.0)
        return float(max(eq, up, lo))


def assemble_lp(contacts, robot, accel=None, com_bounds=None, n_sides=DEFAULT_N_SIDES):
    """Build the linearized equilibrium program.

    For each acceleration vertex ``a``::

        sum_i f_i = m (a - g)
        sum_i r_i x f_i - [m (g - a)]_x c = 0

    plus the pyramid rows and ``fmin <= u.f <= fmax`` for every contact, and
    ``A c <= b`` once.
    """
    if not isinstance(contacts, ContactSet):
        contacts = ContactSet(tuple(contacts))
    accel = AccelerationSet.static() if accel is None else accel
    com_bounds = ComBounds.default() if com_bounds is None else com_bounds
    if int(n_sides) != n_sides or n_sides < 3:
        raise ValidationError(f"n_sides: must be an integer >= 3, got {n_sides!r}")
    n_sides = int(n_sides)

    n = len(contacts)
    K = len(accel)
    m = robot.mass
    g = robot.gravity
    nf = 3 * n
    n_vars = nf * K + 3
    com = slice(nf * K, nf * K + 3)

    cones = [linearize_friction_cone(ct.normal, ct.mu, n_sides) for ct in contacts]
    fmin = np.array([ct.fmin for ct in contacts])
    fmax = np.array([robot.weight if ct.fmax is None else ct.fmax for ct in contacts])
    if np.any(fmax < fmin):
        raise ValidationError("fmin exceeds the default fmax = m |g| on some contact")

    A_eq = np.zeros((6 * K, n_vars))
    b_eq = np.zeros(6 * K)
    rows_per_contact = n_sides + 1
    n_ineq = K * n * rows_per_contact + len(com_bounds)
    A_ineq = np.zeros((n_ineq, n_vars))
    lower = np.full(n_ineq, -np.inf)
    upper = np.zeros(n_ineq)

    r = 0
    for k, a in enumerate(accel.vertices):
        base = k * nf
        eq = 6 * k
        for i, ct in enumerate(contacts):
            cols = slice(base + 3 * i, base + 3 * i + 3)
            A_eq[eq : eq + 3, cols] = np.eye(3)
            A_eq[eq + 3 : eq + 6, cols] = skew(ct.position)
            A_ineq[r : r + n_sides, cols] = cones[i].side_rows
            r += n_sides
            A_ineq[r, cols] = ct.normal
            lower[r] = fmin[i]
            upper[r] = fmax[i]
            r += 1
        b_eq[eq : eq + 3] = m * (a - g)
        A_eq[eq + 3 : eq + 6, com] = -skew(m * (g - a))
    A_ineq[r:, com] = com_bounds.A
    upper[r:] = com_bounds.b

    return LinearProgram(
        A_eq=_frozen(A_eq),
        b_eq=_frozen(b_eq),
        A_ineq=_frozen(A_ineq),
        ineq_lower=_frozen(lower),
        ineq_upper=_frozen(upper),
        n_contacts=n,
        n_accel=K,
        n_sides=n_sides,
        positions=_frozen([ct.position for ct in contacts]),
        generators=_frozen([pyramid_rays(ct.normal, ct.mu, n_sides) for ct in contacts]),
        fmin=_frozen(fmin),
        fmax=_frozen(fmax),
        accel=accel.vertices,
        mass=m,
        gravity=g,
        com_A=com_bounds.A,
        com_b=com_bounds.b,
    )


# -- contact-set JSON schema -------------------------------------------------


def _field(obj, key, path, default=...):
    if key in obj:
        return obj[key]
    if default is ...:
        raise ValidationError(f"{path}.{key}: missing required field" if path else f"{key}: missing required field")
    return default


def _as_vec(value, path):
    try:
        return _vec3(value, path)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{path}: expected a finite 3-vector, got {value!r}") from exc


def problem_from_dict(data, label=""):
    """Parse the contact-set JSON schema into ``(contacts, robot, accel, com_bounds)``.

    Contact normals are normalized on load. Errors carry the offending field
    path, e.g. ``contacts[2].mu``.
    """
    if not isinstance(data, dict):
        raise ValidationError("top level: expected a JSON object")
    try:
        mass = float(_field(data, "mass", ""))
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"mass: expected a number, got {data.get('mass')!r}") from exc
    gravity = _as_vec(data.get("gravity", DEFAULT_GRAVITY), "gravity")
    robot = RobotSpec(mass, gravity)

    raw_contacts = _field(data, "contacts", "")
    if not isinstance(raw_contacts, list) or not raw_contacts:
        raise ValidationError("contacts: expected a non-empty list")
    contacts = []
    for i, rc in enumerate(raw_contacts):
        path = f"contacts[{i}]"
        if not isinstance(rc, dict):
            raise ValidationError(f"{path}: expected an object")
        pos = _as_vec(_field(rc, "position", path), f"{path}.position")
        normal = _as_vec(_field(rc, "normal", path), f"{path}.normal")
        norm = np.linalg.norm(normal)
        if norm == 0:
            raise ValidationError(f"{path}.normal: zero vector")
        try:
            mu = float(_field(rc, "mu", path))
            fmin = float(rc.get("fmin", 0.0))
            fmax = rc.get("fmax")
            fmax = None if fmax is None else float(fmax)
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"{path}: mu/fmin/fmax must be numbers") from exc
        try:
            contacts.append(ContactPoint(pos, normal / norm, mu, fmin, fmax))
        except ValidationError as exc:
            raise ValidationError(f"{path}.{exc}") from exc

    if "accel_vertices" in data and data["accel_vertices"] is not None:
        accel = AccelerationSet(data["accel_vertices"])
    else:
        accel = AccelerationSet.static()

    cb = data.get("com_bounds")
    if cb is None:
        com_bounds = ComBounds.default()
    elif "box" in cb:
        box = np.array(cb["box"], dtype=float)
        if box.shape != (3, 2) or np.any(box[:, 0] >= box[:, 1]):
            raise ValidationError("com_bounds.box: expected [[xmin,xmax],[ymin,ymax],[zmin,zmax]] with min < max")
        com_bounds = ComBounds.box(*box)
    elif "A" in cb and "b" in cb:
        com_bounds = ComBounds(cb["A"], cb["b"])
    else:
        raise ValidationError("com_bounds: expected {'box': ...} or {'A': ..., 'b': ...}")

    return ContactSet(tuple(contacts), label or str(data.get("label", ""))), robot, accel, com_bounds


def problem_to_dict(contacts, robot, accel=None, com_bounds=None):
    """Inverse of :func:`problem_from_dict` (CoM bounds written as ``A``/``b``)."""
    accel = AccelerationSet.static() if accel is None else accel
    com_bounds = ComBounds.default() if com_bounds is None else com_bounds
    out = {
        "label": contacts.label,
        "mass": robot.mass,
        "gravity": robot.gravity.tolist(),
        "contacts": [
            {
                "position": c.position.tolist(),
                "normal": c.normal.tolist(),
                "mu": c.mu,
                "fmin": c.fmin,
                **({} if c.fmax is None else {"fmax": c.fmax}),
            }
            for c in contacts
        ],
        "accel_vertices": accel.vertices.tolist(),
    }
    A, b = com_bounds.A, com_bounds.b
    if A.shape == (6, 3) and np.array_equal(A, _BOX_A):
        out["com_bounds"] = {"box": [[-b[3], b[0]], [-b[4], b[1]], [-b[5], b[2]]]}
    else:
        out["com_bounds"] = {"A": A.tolist(), "b": b.tolist()}
    return out
