"""Four pairwise Hopf-linked square tori meeting at the origin.

Each torus starts as a square standing in the vertical plane through its
horizontal axis (x1 or x2), with one diagonal along that axis between the
prescribed crossing points.  It is then tilted about the axis.  A tilt of
``theta`` turns the square's upward diagonal from x3 towards the *other*
horizontal axis, i.e. it is a rotation of the (other axis, x3) plane by
``theta``; this is the reading under which the printed upper-side segment
equations hold.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    SQRT2,
    GeometryError,
    PolyLoop,
    Segment,
    SquareTorusFrame,
    Similarity,
    apply_similarity,
    beams_distance,
    segment_distance,
)
from .linking import gauss_linking_number, is_hopf_pair, min_loop_distance
from .report import VerificationReport

# (axis index, diagonal endpoints in units of sqrt2*R/4, tilt, start of the upper segment)
_LAYOUT = (
    (0, (-5, 3), -3 * math.pi / 8, 3),
    (0, (-3, 5), 3 * math.pi / 8, 5),
    (1, (-7, 1), math.pi / 8, 1),
    (1, (-1, 7), -math.pi / 8, -1),
)

PAIRS = tuple(itertools.combinations(range(4), 2))


def tilt_matrix(axis: int, angle: float) -> np.ndarray:
    """Rotation about horizontal axis ``axis`` taking x3 towards the other horizontal axis."""
    other = 1 - axis
    c, s = math.cos(angle), math.sin(angle)
    m = np.eye(3)
    # rotate in the (other, x3) plane: other -> x3 for positive angles
    m[other, other] = c
    m[2, other] = s
    m[other, 2] = -s
    m[2, 2] = c
    # axis x1: right-handed; axis x2: left-handed about x2
    return m


@dataclass(frozen=True, eq=False)
class FourWayConfig:
    R: float
    r: float
    tori: tuple[SquareTorusFrame, ...]
    cores: tuple[PolyLoop, ...]
    upper_segments: tuple[Segment, ...] = field(repr=False)


def build_fourway(R: float = 1.0, r: float = 0.08) -> FourWayConfig:
    if not (R > 0 and 0 < r < R):
        raise GeometryError(f"need 0 < r < R, got R={R}, r={r}")
    unit = SQRT2 * R / 4
    up = np.array([0.0, 0.0, 1.0])
    tori, cores, segments = [], [], []
    for axis, (lo, hi), angle, start in _LAYOUT:
        a = np.eye(3)[axis]
        center = 0.5 * (lo + hi) * unit * a
        # diagonals along a and x3, so the sides run along (a +- x3)/sqrt2
        e1 = (a + up) / SQRT2
        e2 = (-a + up) / SQRT2
        flat = SquareTorusFrame(center, e1, e2, R, r)
        tilt = Similarity(1.0, tilt_matrix(axis, angle), np.zeros(3))
        torus = apply_similarity(tilt, flat)
        tori.append(torus)
        cores.append(torus.core())
        corners = torus.corners()
        p = start * unit * a
        i = int(np.argmin(np.linalg.norm(corners - p, axis=1)))
        # the side from the start vertex to the vertex above the x1x2-plane
        nbrs = (corners[(i - 1) % 4], corners[(i + 1) % 4])
        top = max(nbrs, key=lambda q: q[2])
        segments.append(Segment(corners[i], top))
    return FourWayConfig(R, r, tuple(tori), tuple(cores), tuple(segments))


def closed_form_min_distance(R: float) -> float:
    return R / (2.0 * math.sqrt(2.5 + SQRT2))


def max_thickness(R: float) -> float:
    """Largest admissible thickness (exclusive) for the four-way configuration."""
    if R <= 0:
        raise GeometryError("R must be positive")
    return R / (4.0 * math.sqrt(5.0 + 2.0 * SQRT2))


def segment_pair_distances(cfg: FourWayConfig) -> dict[tuple[int, int], float]:
    return {(i, j): segment_distance(cfg.upper_segments[i], cfg.upper_segments[j]) for i, j in PAIRS}


def min_core_distance(cfg: FourWayConfig) -> float:
    return min(segment_pair_distances(cfg).values())


def core_pair_distances(cfg: FourWayConfig) -> dict[tuple[int, int], float]:
    """Distances between the complete core squares (all 16 side pairs)."""
    return {(i, j): min_loop_distance(cfg.cores[i], cfg.cores[j]) for i, j in PAIRS}


def verify_fourway(cfg: FourWayConfig) -> VerificationReport:
    report = VerificationReport()
    core_min = min_core_distance(cfg)
    margin = core_min - 2.0 * SQRT2 * cfg.r
    report.add("fourway.cylinder_bound", margin > 0, margin)

    dists = {(i, j): beams_distance(cfg.tori[i].beams(), cfg.tori[j].beams()) for i, j in PAIRS}
    bad = [p for p, d in dists.items() if d <= 0]
    report.add("fourway.solid_disjoint", not bad, min(dists.values()), bad)

    unlinked = []
    residual = 0.0
    for i, j in PAIRS:
        try:
            ok = is_hopf_pair(cfg.cores[i], cfg.cores[j])
            residual = max(residual, gauss_linking_number(cfg.cores[i], cfg.cores[j]).gauss_residual)
        except GeometryError:
            ok = False
        if not ok:
            unlinked.append((i, j))
    report.add("fourway.hopf_pairs", not unlinked, 6 - len(unlinked), unlinked,
               detail={"max_gauss_residual": residual})
    return report
