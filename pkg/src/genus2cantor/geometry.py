"""Square solid tori, double tori and the similarities that move them.

Everything is plain binary64 with explicit tolerances.  A solid is a union of
closed oriented boxes ("beams"); membership uses the union and distances use
every beam pair.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import singledispatch

import numpy as np
from scipy.optimize import linprog

# relative to the unit length R of whatever object is being tested
GEOM_TOL = 1e-9
ORTHO_TOL = 1e-12
BOUNDARY_TOL = 1e-12

SQRT2 = math.sqrt(2.0)

Vec3 = np.ndarray


class GeometryError(ValueError):
    """Raised when a geometric object violates its invariants."""


def vec3(x) -> Vec3:
    v = np.asarray(x, dtype=float).reshape(3)
    if not np.all(np.isfinite(v)):
        raise GeometryError(f"non-finite coordinates {v!r}")
    return v


def _check_rotation(m: np.ndarray, tol: float = ORTHO_TOL) -> None:
    if m.shape != (3, 3) or not np.all(np.isfinite(m)):
        raise GeometryError("rotation must be a finite 3x3 matrix")
    dev = np.max(np.abs(m.T @ m - np.eye(3)))
    if dev > tol:
        raise GeometryError(f"rotation not orthonormal (max deviation {dev:.3e})")
    if np.linalg.det(m) <= 0:
        raise GeometryError("rotation must have determinant +1")


def axis_rotation(axis, angle: float) -> np.ndarray:
    """Right-handed rotation matrix about a unit axis (Rodrigues)."""
    a = vec3(axis)
    a = a / np.linalg.norm(a)
    k = np.array([[0.0, -a[2], a[1]], [a[2], 0.0, -a[0]], [-a[1], a[0], 0.0]])
    return np.eye(3) + math.sin(angle) * k + (1.0 - math.cos(angle)) * (k @ k)


# ---------------------------------------------------------------------------
# Similarity


@dataclass(frozen=True, eq=False)
class Similarity:
    """Sense-preserving similarity ``x -> scale * rotation @ x + translation``."""

    scale: float
    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        rot = np.array(self.rotation, dtype=float)
        _check_rotation(rot)
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise GeometryError(f"scale must be positive, got {self.scale}")
        rot.setflags(write=False)
        t = vec3(self.translation).copy()
        t.setflags(write=False)
        object.__setattr__(self, "scale", float(self.scale))
        object.__setattr__(self, "rotation", rot)
        object.__setattr__(self, "translation", t)

    @classmethod
    def identity(cls) -> Similarity:
        return cls(1.0, np.eye(3), np.zeros(3))

    @classmethod
    def rotation_about_line(cls, point, axis, angle: float) -> Similarity:
        """Rigid rotation by ``angle`` (right-handed) about the line through ``point``."""
        rot = axis_rotation(axis, angle)
        p = vec3(point)
        return cls(1.0, rot, p - rot @ p)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.scale * x @ self.rotation.T + self.translation

    def inverse(self) -> Similarity:
        rt = self.rotation.T
        return Similarity(1.0 / self.scale, rt, -(rt @ self.translation) / self.scale)

    def apply_inverse(self, y):
        y = np.asarray(y, dtype=float)
        return ((y - self.translation) @ self.rotation) / self.scale

    def fixed_point(self) -> Vec3:
        a = np.eye(3) - self.scale * self.rotation
        return np.linalg.solve(a, self.translation)

    def matrix_close(self, other: Similarity, tol: float = 1e-12) -> bool:
        return (
            abs(self.scale - other.scale) <= tol * max(1.0, self.scale)
            and np.max(np.abs(self.rotation - other.rotation)) <= tol
            and np.max(np.abs(self.translation - other.translation))
            <= tol * max(1.0, float(np.max(np.abs(self.translation))))
        )

    def __repr__(self):
        return (
            f"Similarity(scale={self.scale!r}, rotation={self.rotation.tolist()!r}, "
            f"translation={self.translation.tolist()!r})"
        )


def compose(s1: Similarity, s2: Similarity) -> Similarity:
    """Return ``s1 o s2``."""
    return Similarity(
        s1.scale * s2.scale,
        s1.rotation @ s2.rotation,
        s1.scale * (s1.rotation @ s2.translation) + s1.translation,
    )


def compose_all(maps) -> Similarity:
    out = Similarity.identity()
    for m in maps:
        out = compose(out, m)
    return out


# ---------------------------------------------------------------------------
# Primitive shapes


@dataclass(frozen=True, eq=False)
class Segment:
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a, b = vec3(self.a), vec3(self.b)
        if np.array_equal(a, b):
            raise GeometryError("degenerate segment")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def direction(self) -> Vec3:
        return self.b - self.a

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.b - self.a))


@dataclass(frozen=True, eq=False)
class Beam:
    """Closed oriented box: ``center + sum(u_i * frame[i])`` with ``|u_i| <= half_extents[i]``."""

    center: np.ndarray
    frame: np.ndarray
    half_extents: np.ndarray

    def __post_init__(self):
        frame = np.array(self.frame, dtype=float).reshape(3, 3)
        if np.max(np.abs(frame @ frame.T - np.eye(3))) > 1e-11:
            raise GeometryError("beam frame is not orthonormal")
        h = np.array(self.half_extents, dtype=float).reshape(3)
        if np.any(h <= 0):
            raise GeometryError("beam half extents must be positive")
        object.__setattr__(self, "center", vec3(self.center))
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "half_extents", h)

    def vertices(self) -> np.ndarray:
        signs = _BOX_SIGNS
        return self.center + (signs * self.half_extents) @ self.frame

    def local(self, points) -> np.ndarray:
        return (np.asarray(points, dtype=float) - self.center) @ self.frame.T

    def contains(self, points, tol: float = 0.0) -> np.ndarray:
        loc = self.local(points)
        return np.all(np.abs(loc) <= self.half_extents + tol, axis=-1)

    def halfspaces(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(A, b)`` with the box equal to ``{x : A x <= b}``."""
        a = np.vstack([self.frame, -self.frame])
        c = self.frame @ self.center
        b = np.concatenate([c + self.half_extents, -c + self.half_extents])
        return a, b


_BOX_SIGNS = np.array(list(itertools.product((-1.0, 1.0), repeat=3)))
# vertex index pairs differing in exactly one sign: the 12 box edges
_BOX_EDGES = np.array(
    [(i, j) for i in range(8) for j in range(i + 1, 8) if np.sum(_BOX_SIGNS[i] != _BOX_SIGNS[j]) == 1]
)


# ---------------------------------------------------------------------------
# Square tori


@dataclass(frozen=True, eq=False)
class PolyLoop:
    """Closed polygon; the last vertex connects back to the first."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3 or len(v) < 3:
            raise GeometryError("a loop needs at least 3 vertices in R^3")
        if not np.all(np.isfinite(v)):
            raise GeometryError("non-finite loop vertex")
        steps = np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1)
        scale = max(float(np.max(np.abs(v - v.mean(axis=0)))), 1e-300)
        if np.any(steps <= GEOM_TOL * scale):
            raise GeometryError("consecutive loop vertices coincide")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        if not _loop_is_simple(v, GEOM_TOL * scale):
            raise GeometryError("loop is not simple")

    def __len__(self):
        return len(self.vertices)

    def segments(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices, np.roll(self.vertices, -1, axis=0)

    def diameter(self) -> float:
        v = self.vertices
        return float(np.max(np.linalg.norm(v[:, None] - v[None], axis=-1)))

    def reversed(self) -> PolyLoop:
        return PolyLoop(self.vertices[::-1].copy())

    def bbox(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices.min(axis=0), self.vertices.max(axis=0)


def _loop_is_simple(v: np.ndarray, tol: float) -> bool:
    n = len(v)
    a0, a1 = v, np.roll(v, -1, axis=0)
    ii, jj = np.triu_indices(n, k=2)
    keep = ~((ii == 0) & (jj == n - 1))
    ii, jj = ii[keep], jj[keep]
    if len(ii) == 0:
        return True
    d = segment_distances(a0[ii], a1[ii], a0[jj], a1[jj])
    return bool(np.all(d > tol))


@dataclass(frozen=True, eq=False)
class SquareTorusFrame:
    """Picture-frame solid torus around the square ``center +- R e1 +- R e2``."""

    center: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    R: float
    r: float

    def __post_init__(self):
        e1, e2 = vec3(self.e1), vec3(self.e2)
        if (
            abs(np.dot(e1, e1) - 1) > 1e-11
            or abs(np.dot(e2, e2) - 1) > 1e-11
            or abs(np.dot(e1, e2)) > 1e-11
        ):
            raise GeometryError("torus in-plane axes must be orthonormal")
        if not (0 < self.r < self.R):
            raise GeometryError(f"need 0 < r < R, got r={self.r}, R={self.R}")
        object.__setattr__(self, "center", vec3(self.center))
        object.__setattr__(self, "e1", e1)
        object.__setattr__(self, "e2", e2)
        object.__setattr__(self, "R", float(self.R))
        object.__setattr__(self, "r", float(self.r))

    @property
    def normal(self) -> Vec3:
        return np.cross(self.e1, self.e2)

    def corners(self) -> np.ndarray:
        """Core-square vertices, ordered (-,+), (+,+), (+,-), (-,-) in (e1, e2)."""
        c, R = self.center, self.R
        return np.array(
            [
                c - R * self.e1 + R * self.e2,
                c + R * self.e1 + R * self.e2,
                c + R * self.e1 - R * self.e2,
                c - R * self.e1 - R * self.e2,
            ]
        )

    def core(self) -> PolyLoop:
        return PolyLoop(self.corners())

    def beams(self) -> list[Beam]:
        frame = np.array([self.e1, self.e2, self.normal])
        R, r = self.R, self.r
        along_e1 = (R + r, r, r)
        along_e2 = (r, R + r, r)
        return [
            Beam(self.center + R * self.e2, frame, along_e1),
            Beam(self.center - R * self.e2, frame, along_e1),
            Beam(self.center + R * self.e1, frame, along_e2),
            Beam(self.center - R * self.e1, frame, along_e2),
        ]


@dataclass(frozen=True, eq=False)
class DoubleTorus:
    lobe1: SquareTorusFrame
    lobe2: SquareTorusFrame

    def __post_init__(self):
        l1, l2 = self.lobe1, self.lobe2
        if not (math.isclose(l1.R, l2.R, rel_tol=1e-12) and math.isclose(l1.r, l2.r, rel_tol=1e-12)):
            raise GeometryError("lobes of a double torus must have equal R and r")
        c1, c2 = l1.corners(), l2.corners()
        d = np.linalg.norm(c1[:, None] - c2[None], axis=-1)
        shared = int(np.count_nonzero(d <= GEOM_TOL * l1.R))
        if shared != 1:
            raise GeometryError(f"core squares must share exactly one vertex (found {shared})")

    @property
    def R(self) -> float:
        return self.lobe1.R

    @property
    def r(self) -> float:
        return self.lobe1.r

    def beams(self) -> list[Beam]:
        return self.lobe1.beams() + self.lobe2.beams()

    def beam_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        bs = self.beams()
        return (
            np.array([b.center for b in bs]),
            np.array([b.frame for b in bs]),
            np.array([b.half_extents for b in bs]),
        )

    def vertices(self) -> np.ndarray:
        return np.vstack([b.vertices() for b in self.beams()])

    def bbox(self) -> tuple[np.ndarray, np.ndarray]:
        v = self.vertices()
        return v.min(axis=0), v.max(axis=0)

    def diameter(self) -> float:
        v = self.vertices()
        return float(np.max(np.linalg.norm(v[:, None] - v[None], axis=-1)))


def make_canonical_double_torus(R: float = 1.0, r: float = 0.08) -> DoubleTorus:
    """The model double torus: shared corner at the origin, lobes along +-x1 in the x1x2-plane.

    The right lobe is the diamond (0,0,0), (sqrt2 R, sqrt2 R, 0), (2 sqrt2 R, 0, 0),
    (sqrt2 R, -sqrt2 R, 0); the left lobe is its image under (x1, x2) -> (-x1, -x2).
    """
    if not (R > 0 and 0 < r < R):
        raise GeometryError(f"need 0 < r < R, got R={R}, r={r}")
    e1 = np.array([1.0, 1.0, 0.0]) / SQRT2
    e2 = np.array([-1.0, 1.0, 0.0]) / SQRT2
    right = SquareTorusFrame(np.array([SQRT2 * R, 0.0, 0.0]), e1, e2, R, r)
    left = SquareTorusFrame(np.array([-SQRT2 * R, 0.0, 0.0]), -e1, -e2, R, r)
    return DoubleTorus(right, left)


def core_loops(d: DoubleTorus) -> tuple[PolyLoop, PolyLoop]:
    return d.lobe1.core(), d.lobe2.core()


# ---------------------------------------------------------------------------
# apply_similarity


@singledispatch
def _transform(obj, s: Similarity):
    raise TypeError(f"cannot apply a similarity to {type(obj).__name__}")


@_transform.register
def _(obj: np.ndarray, s: Similarity) -> np.ndarray:
    return s(obj)


@_transform.register
def _(obj: Segment, s: Similarity) -> Segment:
    return Segment(s(obj.a), s(obj.b))


@_transform.register
def _(obj: Beam, s: Similarity) -> Beam:
    return Beam(s(obj.center), obj.frame @ s.rotation.T, obj.half_extents * s.scale)


@_transform.register
def _(obj: SquareTorusFrame, s: Similarity) -> SquareTorusFrame:
    return SquareTorusFrame(
        s(obj.center), s.rotation @ obj.e1, s.rotation @ obj.e2, obj.R * s.scale, obj.r * s.scale
    )


@_transform.register
def _(obj: DoubleTorus, s: Similarity) -> DoubleTorus:
    return DoubleTorus(_transform(obj.lobe1, s), _transform(obj.lobe2, s))


@_transform.register
def _(obj: PolyLoop, s: Similarity) -> PolyLoop:
    return PolyLoop(s(obj.vertices))


@_transform.register
def _(obj: tuple, s: Similarity) -> tuple:
    return tuple(_transform(o, s) for o in obj)


@_transform.register
def _(obj: list, s: Similarity) -> list:
    return [_transform(o, s) for o in obj]


def apply_similarity(s: Similarity, obj):
    """Image of a point (or point array), segment, beam, torus, double torus or loop under ``s``."""
    return _transform(obj, s)


# ---------------------------------------------------------------------------
# Distances


def segment_distances(p0, p1, q0, q1) -> np.ndarray:
    """Closest distance between segments ``[p0,p1]`` and ``[q0,q1]``, vectorised over rows.

    Clamped closed-form minimisation of the two-parameter quadratic; handles
    parallel pairs.
    """
    p0, p1, q0, q1 = (np.asarray(a, dtype=float) for a in (p0, p1, q0, q1))
    d1 = p1 - p0
    d2 = q1 - q0
    w = p0 - q0
    a = np.einsum("...i,...i", d1, d1)
    e = np.einsum("...i,...i", d2, d2)
    b = np.einsum("...i,...i", d1, d2)
    c = np.einsum("...i,...i", d1, w)
    f = np.einsum("...i,...i", d2, w)
    denom = a * e - b * b
    tiny = 1e-14 * a * e
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(denom > tiny, np.clip((b * f - c * e) / np.where(denom > tiny, denom, 1.0), 0, 1), 0.0)
        t = (b * s + f) / e
        s = np.where(t < 0, np.clip(-c / a, 0, 1), np.where(t > 1, np.clip((b - c) / a, 0, 1), s))
        t = np.clip(t, 0, 1)
    diff = w + s[..., None] * d1 - t[..., None] * d2
    return np.sqrt(np.einsum("...i,...i", diff, diff))


def segment_distance(s1: Segment, s2: Segment) -> float:
    return float(segment_distances(s1.a, s1.b, s2.a, s2.b))


def box_distances(c1, f1, h1, c2, f2, h2) -> np.ndarray:
    """Exact distance between closed oriented boxes, vectorised over the leading axis.

    Separating-axis test (15 axes) decides overlap; for separated pairs the
    distance is attained at a vertex/box or edge/edge feature pair.
    """
    c1, f1, h1, c2, f2, h2 = (np.asarray(a, dtype=float) for a in (c1, f1, h1, c2, f2, h2))
    p = len(c1)
    if p == 0:
        return np.zeros(0)
    # candidate axes: (p, 15, 3)
    cross = np.cross(f1[:, :, None, :], f2[:, None, :, :]).reshape(p, 9, 3)
    axes = np.concatenate([f1, f2, cross], axis=1)
    norms = np.linalg.norm(axes, axis=-1)
    valid = norms > 1e-9
    axes = axes / np.where(valid, norms, 1.0)[..., None]
    ra = np.einsum("pj,pkj->pk", h1, np.abs(np.einsum("pji,pki->pkj", f1, axes)))
    rb = np.einsum("pj,pkj->pk", h2, np.abs(np.einsum("pji,pki->pkj", f2, axes)))
    gap = np.abs(np.einsum("pi,pki->pk", c2 - c1, axes)) - ra - rb
    gap = np.where(valid, gap, -np.inf)
    separated = np.max(gap, axis=1) > 0

    out = np.zeros(p)
    idx = np.nonzero(separated)[0]
    if len(idx) == 0:
        return out
    c1, f1, h1, c2, f2, h2 = c1[idx], f1[idx], h1[idx], c2[idx], f2[idx], h2[idx]
    v1 = c1[:, None, :] + np.einsum("vj,pj,pji->pvi", _BOX_SIGNS, h1, f1)
    v2 = c2[:, None, :] + np.einsum("vj,pj,pji->pvi", _BOX_SIGNS, h2, f2)

    def point_box(pts, c, f, h):
        loc = np.einsum("pvi,pji->pvj", pts - c[:, None, :], f)
        excess = np.maximum(np.abs(loc) - h[:, None, :], 0.0)
        return np.min(np.linalg.norm(excess, axis=-1), axis=1)

    dv = np.minimum(point_box(v1, c2, f2, h2), point_box(v2, c1, f1, h1))
    e = _BOX_EDGES
    a0 = v1[:, e[:, 0]][:, :, None, :]
    a1 = v1[:, e[:, 1]][:, :, None, :]
    b0 = v2[:, e[:, 0]][:, None, :, :]
    b1 = v2[:, e[:, 1]][:, None, :, :]
    shape = (len(idx), 12, 12, 3)
    de = segment_distances(
        np.broadcast_to(a0, shape), np.broadcast_to(a1, shape),
        np.broadcast_to(b0, shape), np.broadcast_to(b1, shape),
    ).reshape(len(idx), -1).min(axis=1)
    out[idx] = np.minimum(dv, de)
    return out


def beam_distance(b1: Beam, b2: Beam) -> float:
    return float(
        box_distances(
            b1.center[None], b1.frame[None], b1.half_extents[None],
            b2.center[None], b2.frame[None], b2.half_extents[None],
        )[0]
    )


def beams_distance(beams1, beams2) -> float:
    """Distance between two unions of beams."""
    c1 = np.array([b.center for b in beams1])
    f1 = np.array([b.frame for b in beams1])
    h1 = np.array([b.half_extents for b in beams1])
    c2 = np.array([b.center for b in beams2])
    f2 = np.array([b.frame for b in beams2])
    h2 = np.array([b.half_extents for b in beams2])
    n1, n2 = len(c1), len(c2)
    ii, jj = np.repeat(np.arange(n1), n2), np.tile(np.arange(n2), n1)
    return float(np.min(box_distances(c1[ii], f1[ii], h1[ii], c2[jj], f2[jj], h2[jj])))


def solid_distance(d1: DoubleTorus, d2: DoubleTorus) -> float:
    """Minimum distance between two double-torus solids (0 when they meet)."""
    return beams_distance(d1.beams(), d2.beams())


# ---------------------------------------------------------------------------
# Membership and containment


def contains_point(d: DoubleTorus, x) -> bool | np.ndarray:
    """Closed membership in the solid; accepts one point or an ``(n, 3)`` array."""
    pts = np.asarray(x, dtype=float)
    tol = BOUNDARY_TOL * d.R
    inside = np.zeros(pts.shape[:-1], dtype=bool)
    for b in d.beams():
        inside |= b.contains(pts, tol)
    return bool(inside) if inside.ndim == 0 else inside


def _beam_depths(beams: list[Beam], pts: np.ndarray) -> np.ndarray:
    """Signed inside-depth of each point in each beam, shape ``(len(beams), n)``."""
    return np.array([np.min(b.half_extents - np.abs(b.local(pts)), axis=-1) for b in beams])


def _has_interior(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    """True when ``{x : a x <= b}`` contains a ball of radius > tol (Chebyshev LP)."""
    norms = np.linalg.norm(a, axis=1)
    res = linprog(
        c=[0.0, 0.0, 0.0, -1.0],
        A_ub=np.hstack([a, norms[:, None]]),
        b_ub=b,
        bounds=[(None, None)] * 3 + [(0, None)],
        method="highs",
    )
    if res.status == 2:  # infeasible
        return False
    if res.status != 0:
        # unbounded cannot happen: every piece lies inside a bounded box
        raise RuntimeError(f"containment LP failed: {res.message}")
    return -res.fun > tol


def _box_inside_union(box: Beam, outer: list[Beam], tol: float) -> bool:
    """Exact (to ``tol``) test of ``box`` within the union of ``outer`` boxes.

    Subtract outer boxes one at a time; each difference of convex pieces is
    split into convex pieces along the removed box's faces.  A piece survives
    only if it contains a ball of radius ``tol``.
    """
    a0, b0 = box.halfspaces()
    pieces = [(a0, b0)]
    for ob in outer:
        oa, obb = ob.halfspaces()
        nxt = []
        for pa, pb in pieces:
            acc_a, acc_b = pa, pb
            for k in range(len(oa)):
                # part of the piece on the far side of face k
                na = np.vstack([acc_a, -oa[k]])
                nb = np.append(acc_b, -obb[k])
                if _has_interior(na, nb, tol):
                    nxt.append((na, nb))
                acc_a = np.vstack([acc_a, oa[k]])
                acc_b = np.append(acc_b, obb[k])
        pieces = nxt
        if not pieces:
            return True
    return not pieces


def containment_clearance(outer: DoubleTorus, inner: DoubleTorus) -> float:
    """Smallest inside-depth of any inner-beam vertex, using its best outer beam.

    Positive means every inner vertex lies strictly inside some outer beam.
    """
    pts = inner.vertices()
    return float(np.min(np.max(_beam_depths(outer.beams(), pts), axis=0)))


def contains_solid(outer: DoubleTorus, inner: DoubleTorus) -> bool:
    """True iff the inner solid lies in the closed outer solid."""
    tol = GEOM_TOL * outer.R
    outer_beams = outer.beams()
    for ib in inner.beams():
        verts = ib.vertices()
        depth = _beam_depths(outer_beams, verts)
        # every vertex must be in the union
        if np.any(np.max(depth, axis=0) < -tol):
            return False
        # whole beam inside a single convex outer beam
        if np.any(np.all(depth >= -tol, axis=1)):
            continue
        touching = [ob for ob in outer_beams if beam_distance(ib, ob) <= tol]
        if not _box_inside_union(ib, touching, tol):
            return False
    return True


def solid_vertex_array(solids) -> np.ndarray:
    """Beam vertices of many solids, shape ``(n, beams, 8, 3)``."""
    return np.array([[b.vertices() for b in s.beams()] for s in solids])


def contains_solids(outer: DoubleTorus, inners, vertices: np.ndarray | None = None) -> np.ndarray:
    """Vectorised ``contains_solid`` over many inner solids.

    Beams sitting inside a single outer beam are settled in one numpy pass;
    only the remaining solids go through the exact union test, so ``inners``
    may be a lazy sequence when ``vertices`` is supplied.
    """
    if vertices is None:
        vertices = solid_vertex_array(inners)
    if len(vertices) == 0:
        return np.zeros(0, dtype=bool)
    tol = GEOM_TOL * outer.R
    depth = _beam_depths(outer.beams(), vertices.reshape(-1, 3)).reshape(-1, *vertices.shape[:3])
    single = np.any(np.all(depth >= -tol, axis=-1), axis=0)  # (n, beams)
    stray = np.any(np.max(depth, axis=0) < -tol, axis=(-1, -2))
    out = np.all(single, axis=-1) & ~stray
    for i in np.nonzero(~out & ~stray)[0]:
        out[i] = contains_solid(outer, inners[i])
    return out
