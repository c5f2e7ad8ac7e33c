"""The level-1 chain: ``m`` scaled copies of the model double torus, linked
around its figure-eight core.

The first ``n = m/8`` copies sit on the core side leaving the origin into the
first quadrant.  Rotating them a quarter turn at a time about the vertical
line through the right hole centre fills the right lobe; the left lobe is the
half-turn image about the x3-axis.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .geometry import (
    SQRT2,
    DoubleTorus,
    GeometryError,
    Similarity,
    apply_similarity,
    box_distances,
    compose,
    containment_clearance,
    contains_solid,
    core_loops,
    make_canonical_double_torus,
)
from .linking import LoopsTooCloseError, gauss_linking_number, is_hopf_pair, min_loop_distance
from .report import VerificationReport

HALF_TURN_Z = np.diag([-1.0, -1.0, 1.0])

RHO1_CENTERS = ("holecenter", "literal")
SPOT_CHECKS = 1000
SPOT_SEED = 7
LEFT_LABELS = ("mirrored", "literal")


class ChainParamsError(GeometryError):
    pass


def solve_k_for_m(m: int) -> float:
    """Scale factor for which ``m`` copies exactly tile the figure-eight core."""
    if not isinstance(m, (int, np.integer)) or m <= 0 or m % 16:
        raise ChainParamsError(f"m must be a positive multiple of 16, got {m!r}")
    return 16.0 / (3.0 * SQRT2 * m)


def kbound_satisfied(R: float, r: float, k: float) -> bool:
    """Whether a copy scaled by ``k`` fits within half the thickness ``r``."""
    if min(R, r, k) <= 0:
        raise ChainParamsError("R, r and k must be positive")
    return 2.0 * SQRT2 * k * (2.0 * R + r) < r


def smallest_admissible_m(R: float, r: float, limit: int = 1 << 20) -> int:
    """Smallest multiple of 16 whose scale factor passes ``kbound_satisfied``."""
    m = 16
    while m <= limit:
        if kbound_satisfied(R, r, solve_k_for_m(m)):
            return m
        m += 16
    raise ChainParamsError(f"no admissible m up to {limit}")


@dataclass(frozen=True)
class ChainParams:
    R: float
    r: float
    k: float
    m: int

    def __post_init__(self):
        if not (self.R > 0 and 0 < self.r < self.R):
            raise ChainParamsError(f"need 0 < r < R, got R={self.R}, r={self.r}")
        if not isinstance(self.m, (int, np.integer)) or self.m <= 0 or self.m % 16:
            raise ChainParamsError(f"m must be a positive multiple of 16, got {self.m!r}")
        if not (0 < self.k < 1):
            raise ChainParamsError(f"k must lie in (0, 1), got {self.k}")
        if not math.isclose(self.m * 3.0 * SQRT2 * self.k, 16.0, rel_tol=1e-9):
            raise ChainParamsError(f"k={self.k} is inconsistent with m={self.m} (need m*3*sqrt2*k = 16)")

    @classmethod
    def from_m(cls, R: float, r: float, m: int) -> ChainParams:
        return cls(R, r, solve_k_for_m(m), m)

    @property
    def n(self) -> int:
        return self.m // 8


@dataclass(frozen=True, eq=False)
class Chain:
    params: ChainParams
    maps: tuple[Similarity, ...]
    components: tuple[DoubleTorus, ...]
    rho1_center: str = "holecenter"
    left_labels: str = "mirrored"

    @property
    def m(self) -> int:
        return self.params.m

    @property
    def base(self) -> DoubleTorus:
        return make_canonical_double_torus(self.params.R, self.params.r)

    def origin_indices(self) -> tuple[int, int, int, int]:
        """0-based indices of the four copies linked at the origin (first, 4n-th, (4n+1)-th, last)."""
        n = self.params.n
        return (0, 4 * n - 1, 4 * n, 8 * n - 1)


def chain_from_maps(params: ChainParams, maps, rho1_center="holecenter", left_labels="mirrored") -> Chain:
    base = make_canonical_double_torus(params.R, params.r)
    maps = tuple(maps)
    if len(maps) != params.m:
        raise ChainParamsError(f"expected {params.m} maps, got {len(maps)}")
    for j, s in enumerate(maps):
        if not math.isclose(s.scale, params.k, rel_tol=1e-12):
            raise ChainParamsError(f"map {j + 1} has scale {s.scale}, expected k={params.k}")
    comps = tuple(apply_similarity(s, base) for s in maps)
    return Chain(params, maps, comps, rho1_center, left_labels)


def anchor_points(params: ChainParams) -> np.ndarray:
    """Anchors ``p_1 .. p_{n+1}`` along the first-quadrant core side (rows)."""
    n, k, R = params.n, params.k, params.R
    if not math.isclose(3.0 * SQRT2 * k * n, 2.0, rel_tol=1e-9):
        raise ChainParamsError("anchor spacing does not tile the core side")
    d = np.array([1.0, 1.0, 0.0]) / SQRT2
    first = SQRT2 * k * R / 4.0
    step = 3.0 * SQRT2 * k * R
    arclength = first + step * np.arange(n + 1)
    return arclength[:, None] * d


def orientation_vectors(i: int, n: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Length and width directions of the ``i``-th copy (1-based) on the first side."""
    if i < 1 or (n is not None and i > n):
        raise IndexError(f"orientation index {i} out of range")
    v1 = np.array([1.0, 1.0, 0.0]) / SQRT2
    if i % 2:
        a = math.sqrt(4.0 + 2.0 * SQRT2) / 4.0
        v2 = np.array([a, -a, math.sqrt(2.0 - SQRT2) / 2.0])
    else:
        a = math.sqrt(4.0 - 2.0 * SQRT2) / 4.0
        v2 = np.array([-a, a, math.sqrt(2.0 + SQRT2) / 2.0])
    return v1, v2


def rho1(R: float, center: str = "holecenter") -> Similarity:
    """Clockwise quarter turn (seen from +x3) about the vertical line through the right hole."""
    if center not in RHO1_CENTERS:
        raise ValueError(f"rho1 center must be one of {RHO1_CENTERS}")
    x = SQRT2 * R if center == "holecenter" else 2.0 * SQRT2 * R
    return Similarity.rotation_about_line([x, 0.0, 0.0], [0.0, 0.0, 1.0], -math.pi / 2)


def rho2() -> Similarity:
    """Half turn about the x3-axis."""
    return Similarity(1.0, HALF_TURN_Z, np.zeros(3))


def iota1_similarity() -> Similarity:
    return rho2()


def _first_side_map(params: ChainParams, i: int, anchors: np.ndarray) -> Similarity:
    # model x1 runs from the far end towards the near hole, so the right lobe
    # (label 1) is the near lobe and the left lobe (label 2) the far one
    k, R = params.k, params.R
    v1, v2 = orientation_vectors(i)
    rot = np.column_stack([-v1, v2, np.cross(-v1, v2)])
    p = anchors[i - 1]
    return Similarity(k, rot, p + SQRT2 * k * R * v1)


def build_chain(params: ChainParams, rho1_center: str = "holecenter", left_labels: str = "mirrored") -> Chain:
    """Place the ``m`` copies.

    ``left_labels="mirrored"`` numbers the left lobe so that copy ``m-j+1`` is
    the half-turn image of copy ``j`` (lobes swapped to keep the chain's
    lobe-2 -> lobe-1 linking order).  ``"literal"`` numbers it as the half-turn
    image of copy ``j - 4n`` instead.
    """
    if left_labels not in LEFT_LABELS:
        raise ValueError(f"left_labels must be one of {LEFT_LABELS}")
    n = params.n
    anchors = anchor_points(params)
    first = [_first_side_map(params, i, anchors) for i in range(1, n + 1)]
    q = rho1(params.R, rho1_center)
    maps = list(first)
    maps += [compose(q, s) for s in first]
    q2 = compose(q, q)
    maps += [compose(q2, s) for s in maps[: 2 * n]]
    h = rho2()
    if left_labels == "literal":
        maps += [compose(h, s) for s in maps[: 4 * n]]
    else:
        maps += [compose(compose(h, s), h) for s in reversed(maps[: 4 * n])]
    return chain_from_maps(params, maps, rho1_center, left_labels)


# ---------------------------------------------------------------------------
# Verification


def _bboxes(solids) -> tuple[np.ndarray, np.ndarray]:
    boxes = [s.bbox() for s in solids]
    return np.array([b[0] for b in boxes]), np.array([b[1] for b in boxes])


def candidate_pairs(lo: np.ndarray, hi: np.ndarray, pad: float = 0.0) -> list[tuple[int, int]]:
    """Index pairs (i < j) whose axis-aligned boxes, grown by ``pad``, overlap."""
    order = np.argsort(lo[:, 0], kind="stable")
    out = []
    for a_pos, i in enumerate(order):
        for j in order[a_pos + 1:]:
            if lo[j, 0] > hi[i, 0] + pad:
                break
            if np.all(lo[j] <= hi[i] + pad) and np.all(lo[i] <= hi[j] + pad):
                out.append((min(i, j), max(i, j)))
    out.sort()
    return [(int(i), int(j)) for i, j in out]


def pair_solid_distances(solids, pairs, workers: int = 1, chunk: int = 64) -> np.ndarray:
    """Exact solid distances for the listed component pairs."""
    if not pairs:
        return np.zeros(0)
    arrays = [s.beam_arrays() for s in solids]
    nb = len(arrays[0][0])
    ii, jj = np.repeat(np.arange(nb), nb), np.tile(np.arange(nb), nb)

    def run(block):
        c1 = np.concatenate([arrays[a][0][ii] for a, _ in block])
        f1 = np.concatenate([arrays[a][1][ii] for a, _ in block])
        h1 = np.concatenate([arrays[a][2][ii] for a, _ in block])
        c2 = np.concatenate([arrays[b][0][jj] for _, b in block])
        f2 = np.concatenate([arrays[b][1][jj] for _, b in block])
        h2 = np.concatenate([arrays[b][2][jj] for _, b in block])
        return box_distances(c1, f1, h1, c2, f2, h2).reshape(len(block), -1).min(axis=1)

    blocks = [pairs[s: s + chunk] for s in range(0, len(pairs), chunk)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(run, blocks))
    else:
        parts = [run(b) for b in blocks]
    return np.concatenate(parts)


def check_pairwise_disjoint(report: VerificationReport, name: str, solids, workers: int = 1) -> None:
    lo, hi = _bboxes(solids)
    pairs = candidate_pairs(lo, hi)
    dists = pair_solid_distances(solids, pairs, workers)
    bad = [p for p, d in zip(pairs, dists) if d <= 0]
    margin = float(dists.min()) if len(dists) else None
    report.add(name, not bad, margin, bad, detail={"pairs_checked_exactly": len(pairs), "components": len(solids)})


def _lk(a, b) -> int | None:
    try:
        return gauss_linking_number(a, b).lk
    except LoopsTooCloseError:
        return None


def verify_chain(
    chain: Chain,
    check_containment: bool = True,
    skip: tuple[str, ...] = (),
    workers: int = 1,
    spot_checks: int = SPOT_CHECKS,
) -> VerificationReport:
    """Certify disjointness, containment and the linking pattern of the level-1 chain.

    ``skip`` may contain ``"disjoint"``, ``"containment"`` and ``"linking"``.
    Non-adjacent pairs are covered twice: exhaustively for loops whose boxes
    overlap, and by ``spot_checks`` seeded random pairs regardless of boxes.
    """
    report = VerificationReport()
    m = chain.m
    comps = chain.components
    base = chain.base

    if "disjoint" not in skip:
        check_pairwise_disjoint(report, "chain.disjoint", comps, workers)

    if check_containment and "containment" not in skip:
        def contained(j):
            return contains_solid(base, comps[j])

        if workers > 1:
            with ThreadPoolExecutor(workers) as ex:
                flags = list(ex.map(contained, range(m)))
        else:
            flags = [contained(j) for j in range(m)]
        bad = [j + 1 for j, ok in enumerate(flags) if not ok]
        clearance = min(containment_clearance(base, c) for c in comps)
        report.add("chain.containment", not bad, clearance, bad)

    if "linking" in skip:
        return report

    loops = [core_loops(c) for c in comps]
    hopf_bad, residual, core_gap = [], 0.0, math.inf
    for j in range(m):
        a, b = loops[j][1], loops[(j + 1) % m][0]
        try:
            ok = is_hopf_pair(a, b)
            residual = max(residual, gauss_linking_number(a, b).gauss_residual)
        except LoopsTooCloseError:
            ok = False
        core_gap = min(core_gap, min_loop_distance(a, b))
        if not ok:
            hopf_bad.append((j + 1, (j + 1) % m + 1))
    report.add("chain.consecutive_hopf", not hopf_bad, core_gap, hopf_bad,
               detail={"pairs": m, "max_gauss_residual": residual})

    companion_bad = []
    for j in range(m):
        nxt = (j + 1) % m
        for la, lb in ((0, 0), (1, 1), (0, 1)):
            if _lk(loops[j][la], loops[nxt][lb]) != 0:
                companion_bad.append((j + 1, nxt + 1, la + 1, lb + 1))
    report.add("chain.companion_unlinked", not companion_bad, None, companion_bad)

    origin = chain.origin_indices()
    # the four origin copies are pairwise linked, so skip those pairs here
    origin_pairs = {(min(a, b), max(a, b)) for a in origin for b in origin if a != b}
    nonadj_bad, computed = [], 0
    flat = [lp for pair in loops for lp in pair]
    lo = np.array([lp.bbox()[0] for lp in flat])
    hi = np.array([lp.bbox()[1] for lp in flat])
    for u, v in candidate_pairs(lo, hi):
        i, j = u // 2, v // 2
        if i == j or (j - i) % m in (1, m - 1) or (i, j) in origin_pairs:
            continue
        computed += 1
        if _lk(flat[u], flat[v]) != 0:
            nonadj_bad.append((i + 1, j + 1, u % 2 + 1, v % 2 + 1))
    report.add("chain.nonadjacent_unlinked", not nonadj_bad, None, nonadj_bad,
               detail={"gauss_evaluations": computed, "others": "separated by an axis-aligned plane"})

    rng = np.random.default_rng(SPOT_SEED)
    spot_bad, drawn = [], 0
    while drawn < spot_checks:
        i, j = sorted(int(x) for x in rng.choice(m, size=2, replace=False))
        la, lb = (int(x) for x in rng.integers(0, 2, size=2))
        if (j - i) % m in (1, m - 1) or (i, j) in origin_pairs:
            continue
        drawn += 1
        if _lk(loops[i][la], loops[j][lb]) != 0:
            spot_bad.append((i + 1, j + 1, la + 1, lb + 1))
    report.add("chain.nonadjacent_sample", not spot_bad, None, spot_bad,
               detail={"samples": drawn, "seed": SPOT_SEED})

    # near-origin lobes: first copy's lobe 1, 4n-th copy's lobe 2, (4n+1)-th lobe 1, last copy's lobe 2
    near = [loops[origin[0]][0], loops[origin[1]][1], loops[origin[2]][0], loops[origin[3]][1]]
    four_bad = []
    for a in range(4):
        for b in range(a + 1, 4):
            lk = _lk(near[a], near[b])
            if lk is None or abs(lk) != 1:
                four_bad.append((origin[a] + 1, origin[b] + 1))
    report.add("chain.origin_fourway", not four_bad, 6 - len(four_bad), four_bad)
    return report
