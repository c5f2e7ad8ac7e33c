"""Linking numbers of closed polygons and piercings of planar filling disks.

Two independent routes to the linking number:

* ``gauss_linking_number`` sums, over all segment pairs, the signed area of
  the Gauss-map image (a geodesic quadrilateral on the unit sphere);
* ``crossing_linking_number`` counts signed crossings of a generic planar
  projection.

Sign convention: a right-handed Hopf link has ``lk = +1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import GEOM_TOL, GeometryError, PolyLoop, segment_distances, vec3

GAUSS_RESIDUAL_TOL = 1e-6
CROSSING_RETRIES = 16
CROSSING_SEED = 20240611


class LoopsTooCloseError(GeometryError):
    """The two loops touch (or nearly), so their linking number is undefined."""


class DegenerateDirectionError(GeometryError):
    """The projection direction is not generic for the given pair of loops."""


class NonGenericPositionError(GeometryError):
    """A loop meets a disk's plane non-transversally."""


@dataclass(frozen=True)
class LinkReport:
    lk: int
    gauss_residual: float
    method: str  # "gauss" | "crossing"
    crossings: int | None = None


@dataclass(frozen=True, eq=False)
class PlanarDisk:
    """Filled planar polygon.  ``e1 x e2`` is the normal; the boundary runs
    counterclockwise in ``(e1, e2)`` coordinates."""

    origin: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    boundary: PolyLoop

    @property
    def normal(self) -> np.ndarray:
        return np.cross(self.e1, self.e2)

    def to_plane(self, pts) -> np.ndarray:
        d = np.asarray(pts, dtype=float) - self.origin
        return np.stack([d @ self.e1, d @ self.e2], axis=-1)


@dataclass(frozen=True)
class Piercing:
    point: np.ndarray
    sign: int


def min_loop_distance(a: PolyLoop, b: PolyLoop) -> float:
    a0, a1 = a.segments()
    b0, b1 = b.segments()
    na, nb = len(a0), len(b0)
    i, j = np.repeat(np.arange(na), nb), np.tile(np.arange(nb), na)
    return float(np.min(segment_distances(a0[i], a1[i], b0[j], b1[j])))


def _check_apart(a: PolyLoop, b: PolyLoop) -> float:
    d = min_loop_distance(a, b)
    if d <= GEOM_TOL * max(a.diameter(), b.diameter()):
        raise LoopsTooCloseError(f"loops are {d:.3e} apart; linking number undefined")
    return d


def _triangle_solid_angle(u, v, w):
    """Signed solid angle of the geodesic triangle (u, v, w); rows vectorised."""
    nu = np.linalg.norm(u, axis=-1)
    nv = np.linalg.norm(v, axis=-1)
    nw = np.linalg.norm(w, axis=-1)
    num = np.einsum("...i,...i", u, np.cross(v, w))
    den = (
        nu * nv * nw
        + np.einsum("...i,...i", u, v) * nw
        + np.einsum("...i,...i", u, w) * nv
        + np.einsum("...i,...i", v, w) * nu
    )
    return 2.0 * np.arctan2(num, den)


def gauss_sum(a: PolyLoop, b: PolyLoop) -> float:
    """Raw (unrounded) Gauss double sum ``(1/4pi) sum Omega_ij``."""
    a0, a1 = a.segments()
    b0, b1 = b.segments()
    na, nb = len(a0), len(b0)
    i, j = np.repeat(np.arange(na), nb), np.tile(np.arange(nb), na)
    p, q, c, d = a0[i], a1[i], b0[j], b1[j]
    # corners of the Gauss-map quadrilateral, directions y - x
    g1, g2, g3, g4 = c - p, d - p, d - q, c - q
    omega = _triangle_solid_angle(g1, g2, g3) + _triangle_solid_angle(g1, g3, g4)
    # index-ordered reduction keeps the result bitwise reproducible
    total = math.fsum(omega.tolist())
    return -total / (4.0 * math.pi)


def gauss_linking_number(a: PolyLoop, b: PolyLoop) -> LinkReport:
    _check_apart(a, b)
    raw = gauss_sum(a, b)
    lk = round(raw)
    residual = abs(raw - lk)
    if residual >= GAUSS_RESIDUAL_TOL:
        raise LoopsTooCloseError(f"Gauss sum {raw!r} is not near an integer")
    return LinkReport(int(lk), residual, "gauss")


def _plane_basis(direction) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    w = vec3(direction)
    w = w / np.linalg.norm(w)
    helper = np.eye(3)[int(np.argmin(np.abs(w)))]
    u = np.cross(helper, w)
    u /= np.linalg.norm(u)
    v = np.cross(w, u)
    return u, v, w


def _cross2(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def crossing_linking_number(a: PolyLoop, b: PolyLoop, direction) -> LinkReport:
    """Half the signed count of crossings between the projections of ``a`` and ``b``
    onto the plane perpendicular to ``direction`` (viewed from ``+direction``)."""
    u, v, w = _plane_basis(direction)
    scale = max(a.diameter(), b.diameter())
    tol = GEOM_TOL * scale
    basis = np.array([u, v])

    def project(loop):
        p0, p1 = loop.segments()
        return p0 @ basis.T, p1 @ basis.T, p0 @ w, p1 @ w

    a0, a1, ha0, ha1 = project(a)
    b0, b1, hb0, hb1 = project(b)
    for s0, s1 in ((a0, a1), (b0, b1)):
        if np.any(np.linalg.norm(s1 - s0, axis=1) <= tol):
            raise DegenerateDirectionError("a segment is parallel to the projection direction")
    va, vb = a0, b0
    if np.min(np.linalg.norm(va[:, None] - vb[None], axis=-1)) <= tol:
        raise DegenerateDirectionError("projected vertices coincide")

    da = a1 - a0
    db = b1 - b0
    total = 0
    count = 0
    for i in range(len(a0)):
        for j in range(len(b0)):
            den = _cross2(da[i], db[j])
            r = b0[j] - a0[i]
            if abs(den) <= 1e-12 * np.linalg.norm(da[i]) * np.linalg.norm(db[j]):
                # parallel projections: degenerate only when they overlap
                if abs(_cross2(r, da[i])) <= tol * np.linalg.norm(da[i]):
                    t0 = np.dot(r, da[i]) / np.dot(da[i], da[i])
                    t1 = np.dot(r + db[j], da[i]) / np.dot(da[i], da[i])
                    if max(t0, t1) >= 0 and min(t0, t1) <= 1:
                        raise DegenerateDirectionError("collinear overlapping projections")
                continue
            s = _cross2(r, db[j]) / den
            t = _cross2(r, da[i]) / den
            la = np.linalg.norm(da[i])
            lb = np.linalg.norm(db[j])
            if s * la < -tol or (s - 1) * la > tol or t * lb < -tol or (t - 1) * lb > tol:
                continue
            if min(abs(s) * la, abs(s - 1) * la, abs(t) * lb, abs(t - 1) * lb) <= tol:
                raise DegenerateDirectionError("crossing through a projected vertex")
            h_a = ha0[i] + s * (ha1[i] - ha0[i])
            h_b = hb0[j] + t * (hb1[j] - hb0[j])
            if abs(h_a - h_b) <= tol:
                raise LoopsTooCloseError("loops meet at a crossing")
            over, under = (da[i], db[j]) if h_a > h_b else (db[j], da[i])
            total += 1 if _cross2(over, under) > 0 else -1
            count += 1
    if total % 2:
        raise DegenerateDirectionError("odd crossing sum between closed loops")
    return LinkReport(total // 2, 0.0, "crossing", crossings=count)


def crossing_linking_number_auto(a: PolyLoop, b: PolyLoop, direction=(0.0, 0.0, 1.0)) -> LinkReport:
    """Projection oracle that retries deterministic random directions on degeneracy."""
    rng = np.random.default_rng(CROSSING_SEED)
    d = np.asarray(direction, dtype=float)
    for _ in range(CROSSING_RETRIES + 1):
        try:
            return crossing_linking_number(a, b, d)
        except DegenerateDirectionError:
            d = rng.normal(size=3)
    raise DegenerateDirectionError(f"no generic direction after {CROSSING_RETRIES} retries")


def is_planar(loop: PolyLoop, tol: float = GEOM_TOL) -> bool:
    v = loop.vertices
    centred = v - v.mean(axis=0)
    # smallest singular value measures out-of-plane spread
    sv = np.linalg.svd(centred, compute_uv=False)
    return bool(sv[-1] <= tol * max(loop.diameter(), 1e-300) * math.sqrt(len(v)))


def is_hopf_pair(a: PolyLoop, b: PolyLoop) -> bool:
    """Both loops planar (hence unknotted), simple, and ``|lk| = 1``."""
    # PolyLoop construction already guarantees simplicity
    if not (is_planar(a) and is_planar(b)):
        return False
    return abs(gauss_linking_number(a, b).lk) == 1


def canonical_filling_disk(square: PolyLoop) -> PlanarDisk:
    """The flat disk spanned by a planar 4-gon."""
    v = square.vertices
    if len(v) != 4:
        raise GeometryError("canonical filling disks are defined for 4-gons")
    if not is_planar(square):
        raise GeometryError("boundary is not planar")
    origin = v.mean(axis=0)
    e1 = v[1] - v[0]
    e1 /= np.linalg.norm(e1)
    n = np.cross(v[1] - v[0], v[2] - v[1])
    n /= np.linalg.norm(n)
    e2 = np.cross(n, e1)
    return PlanarDisk(origin, e1, e2, square)


def _point_in_convex(poly2: np.ndarray, p: np.ndarray, tol: float) -> int:
    """1 inside, 0 on the boundary (within tol), -1 outside; counterclockwise polygon."""
    edges = np.roll(poly2, -1, axis=0) - poly2
    lens = np.linalg.norm(edges, axis=1)
    side = _cross2(edges, p - poly2) / lens
    if np.all(side > tol):
        return 1
    if np.any(side < -tol):
        return -1
    return 0


def _segment_meets_polygon(poly2: np.ndarray, a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    if _point_in_convex(poly2, a, tol) >= 0 or _point_in_convex(poly2, b, tol) >= 0:
        return True
    flat = np.column_stack([poly2, np.zeros(len(poly2))])
    nxt = np.roll(flat, -1, axis=0)
    a3 = np.broadcast_to(np.append(a, 0.0), flat.shape)
    b3 = np.broadcast_to(np.append(b, 0.0), flat.shape)
    return bool(np.min(segment_distances(a3, b3, flat, nxt)) <= tol)


def disk_piercings(disk: PlanarDisk, loop: PolyLoop) -> list[Piercing]:
    """Transversal intersections of ``loop`` with the closed ``disk``.

    Each piercing carries +1 when the loop crosses along the disk normal.
    A vertex lying in the plane counts as a crossing when its neighbours lie
    strictly on opposite sides.  Segments lying in the plane are ignored when
    they miss the disk and rejected when they touch it.
    """
    tol = GEOM_TOL * max(disk.boundary.diameter(), loop.diameter())
    n = disk.normal
    h = (loop.vertices - disk.origin) @ n
    side = np.where(h > tol, 1, np.where(h < -tol, -1, 0))
    poly2 = disk.to_plane(disk.boundary.vertices)
    v = loop.vertices
    count = len(v)
    hits: list[Piercing] = []

    def record(point, sign):
        where = _point_in_convex(poly2, disk.to_plane(point), tol)
        if where == 0:
            raise NonGenericPositionError("loop passes through the disk boundary")
        if where > 0:
            hits.append(Piercing(point, sign))

    for i in range(count):
        j = (i + 1) % count
        if side[i] == 0 and side[j] == 0:
            if _segment_meets_polygon(poly2, disk.to_plane(v[i]), disk.to_plane(v[j]), tol):
                raise NonGenericPositionError("a loop segment lies in the disk plane and meets the disk")
            continue
        if side[i] * side[j] < 0:
            t = h[i] / (h[i] - h[j])
            record(v[i] + t * (v[j] - v[i]), int(side[j]))
        elif side[j] == 0:
            nxt = side[(j + 1) % count]
            if side[i] * nxt < 0:
                record(v[j].copy(), int(nxt))
    return hits


def signed_piercing_count(disk: PlanarDisk, loop: PolyLoop) -> int:
    return sum(p.sign for p in disk_piercings(disk, loop))
