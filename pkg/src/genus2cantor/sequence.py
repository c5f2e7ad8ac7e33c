"""Deeper levels of the nested construction and the conformal part of its dynamics.

A component at level ``n`` is addressed by a word ``(w1, ..., wn)`` over
``1..m``; its map is ``phi_w1 o ... o phi_wn``.  Points are classified by
pulling them back through the inverse similarities, which is exactly how the
dynamics acts on the level-1 copies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .chain import Chain
from .geometry import (
    DoubleTorus,
    Similarity,
    apply_similarity,
    compose,
    contains_point,
    contains_solids,
    solid_vertex_array,
)

DEFAULT_BUDGET = 100_000

Address = tuple[int, ...]


class BudgetExceededError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class Component:
    address: Address
    map: Similarity
    solid: DoubleTorus

    @property
    def level(self) -> int:
        return len(self.address)


@dataclass(frozen=True)
class MembershipResult:
    """Either ``contained`` to ``depth_reached`` along ``prefix`` or escaped at ``level``."""

    contained: bool
    prefix: Address = ()
    depth_reached: int = 0
    level: int | None = None

    @classmethod
    def escaped_at(cls, level: int, prefix: Address = ()) -> MembershipResult:
        return cls(False, prefix, len(prefix), level)

    def __str__(self):
        if self.contained:
            return f"contained(prefix={list(self.prefix)}, depth={self.depth_reached})"
        return f"escaped_at({self.level})"


def _check_address(chain: Chain, address) -> Address:
    address = tuple(int(a) for a in address)
    for a in address:
        if not 1 <= a <= chain.m:
            raise ValueError(f"address letter {a} outside 1..{chain.m}")
    return address


def address_map(chain: Chain, address) -> Similarity:
    out = Similarity.identity()
    for a in _check_address(chain, address):
        out = compose(out, chain.maps[a - 1])
    return out


def component(chain: Chain, address) -> Component:
    address = _check_address(chain, address)
    s = address_map(chain, address)
    return Component(address, s, apply_similarity(s, chain.base))


def expand_level(chain: Chain, n: int, budget: int = DEFAULT_BUDGET) -> list[Component]:
    """All ``m**n`` components of level ``n`` in lexicographic address order."""
    if n < 0:
        raise ValueError("level must be non-negative")
    if chain.m ** n > budget:
        raise BudgetExceededError(f"{chain.m}**{n} components exceeds budget {budget}")
    base = chain.base
    level = [((), Similarity.identity())]
    for _ in range(n):
        level = [(w + (j + 1,), compose(s, phi)) for w, s in level for j, phi in enumerate(chain.maps)]
    return [Component(w, s, apply_similarity(s, base)) for w, s in level]


class _Pullback:
    """Vectorised inverse maps of one chain."""

    def __init__(self, chain: Chain):
        self.rot = np.array([s.rotation for s in chain.maps])
        self.trans = np.array([s.translation for s in chain.maps])
        self.k = np.array([s.scale for s in chain.maps])
        self.base = chain.base

    def children_of(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        pulled = np.einsum("jab,ja->jb", self.rot, x - self.trans) / self.k[:, None]
        return contains_point(self.base, pulled), pulled


def membership(chain: Chain, x, max_depth: int) -> MembershipResult:
    """Escape level of ``x`` under the inverse-similarity dynamics.

    Level 0 means ``x`` is outside the model solid; a point inside the solid
    but in none of the copies leaves after one step.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be non-negative")
    pb = _Pullback(chain)
    y = np.asarray(x, dtype=float).reshape(3)
    prefix: list[int] = []
    if not contains_point(pb.base, y):
        return MembershipResult.escaped_at(0)
    for depth in range(max_depth):
        inside, pulled = pb.children_of(y)
        hits = np.nonzero(inside)[0]
        if len(hits) == 0:
            return MembershipResult.escaped_at(depth + 1, tuple(prefix))
        j = int(hits[0])  # lowest index wins on (tolerance-level) overlaps
        prefix.append(j + 1)
        y = pulled[j]
    return MembershipResult(True, tuple(prefix), max_depth, None)


def nesting_failures(chain: Chain, depth: int, budget: int = DEFAULT_BUDGET) -> tuple[list[Address], int]:
    """Children at levels ``1..depth`` not contained in their parent.

    Every child is checked in world coordinates against its own parent solid.
    Returns the offending addresses and the number of children checked.
    """
    total = sum(chain.m ** n for n in range(1, depth + 1))
    if total > budget:
        raise BudgetExceededError(f"nesting check at {total} children exceeds budget {budget}")
    unit = solid_vertex_array(chain.components)  # level-1 vertices
    bad: list[Address] = []
    checked = 0
    parents = [((), Similarity.identity())]
    for _ in range(depth):
        children = []
        for addr, s in parents:
            outer = apply_similarity(s, chain.base)
            verts = s(unit)
            kids = [(addr + (j + 1,), compose(s, phi)) for j, phi in enumerate(chain.maps)]
            lazy = _LazySolids(chain.base, [k for _, k in kids])
            ok = contains_solids(outer, lazy, verts)
            bad.extend(a for (a, _), good in zip(kids, ok) if not good)
            checked += len(kids)
            children.extend(kids)
        parents = children
    return bad, checked


class _LazySolids:
    def __init__(self, base: DoubleTorus, maps: list[Similarity]):
        self.base, self.maps = base, maps

    def __getitem__(self, i):
        return apply_similarity(self.maps[i], self.base)


# ---------------------------------------------------------------------------
# Radial power-map model


@dataclass(frozen=True)
class PowerMapParams:
    d: int
    inner_radius: float = 4.0

    def __post_init__(self):
        if not isinstance(self.d, (int, np.integer)) or self.d < 2:
            raise ValueError(f"degree parameter d must be an integer >= 2, got {self.d!r}")

    @property
    def outer_radius(self) -> float:
        return self.inner_radius ** self.d

    @property
    def degree(self) -> int:
        return self.d * self.d

    @classmethod
    def for_chain(cls, chain: Chain) -> PowerMapParams:
        d = math.isqrt(chain.m)
        if d * d != chain.m:
            raise ValueError(f"m={chain.m} is not a perfect square")
        return cls(d)


class EscapeRadius(NamedTuple):
    radius: float
    overflow: bool


def escape_radius_model(s: float, t: int, params: PowerMapParams) -> EscapeRadius:
    """Radius ``s ** (d ** t)`` reached after ``t`` radial power-map steps."""
    if s <= 1:
        raise ValueError("starting radius must exceed 1")
    if t < 0:
        raise ValueError("step count must be non-negative")
    exponent = params.d ** t
    if exponent * math.log(s) > math.log(np.finfo(float).max):
        return EscapeRadius(math.inf, True)
    return EscapeRadius(float(s) ** exponent, False)


# ---------------------------------------------------------------------------
# Symmetries


def involution_iota1(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x * np.array([-1.0, -1.0, 1.0])


def involution_iota2(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x * np.array([1.0, -1.0, -1.0])


def winding_omega(x, m: int) -> np.ndarray:
    """Multiply the cylindrical angle about x3 by ``m/4``."""
    if m % 4:
        raise ValueError(f"m must be divisible by 4, got {m}")
    x = np.asarray(x, dtype=float)
    rad = np.hypot(x[..., 0], x[..., 1])
    theta = np.arctan2(x[..., 1], x[..., 0]) * (m // 4)
    return np.stack([rad * np.cos(theta), rad * np.sin(theta), x[..., 2]], axis=-1)


def solid_hausdorff_bound(a: DoubleTorus, b: DoubleTorus) -> float:
    """Upper bound on the Hausdorff distance between two beam unions.

    Beams are matched by vertex sets; the Hausdorff distance of two convex
    hulls is at most that of their vertex sets.
    """
    va = np.array([bm.vertices() for bm in a.beams()])
    vb = np.array([bm.vertices() for bm in b.beams()])

    def vertex_hausdorff(p, q):
        d = np.linalg.norm(p[:, None] - q[None], axis=-1)
        return max(d.min(axis=1).max(), d.min(axis=0).max())

    h = np.array([[vertex_hausdorff(p, q) for q in vb] for p in va])
    return float(max(h.min(axis=1).max(), h.min(axis=0).max()))


def level1_symmetry_defect(chain: Chain) -> tuple[float, list[int]]:
    """Largest Hausdorff bound between ``iota1(X_j)`` and ``X_{m-j+1}``, plus the
    1-based indices whose match exceeds tolerance."""
    tol = 1e-9 * chain.params.R
    flip = Similarity(1.0, np.diag([-1.0, -1.0, 1.0]), np.zeros(3))
    worst, bad = 0.0, []
    m = chain.m
    for j in range(m):
        image = apply_similarity(flip, chain.components[j])
        h = solid_hausdorff_bound(image, chain.components[m - 1 - j])
        worst = max(worst, h)
        if h > tol:
            bad.append(j + 1)
    return worst, bad


def check_level1_symmetry(chain: Chain) -> bool:
    return not level1_symmetry_defect(chain)[1]


def similarity_dimension(m: int, k: float) -> float:
    if m < 2 or not 0 < k < 1:
        raise ValueError("need m >= 2 and 0 < k < 1")
    return math.log(m) / math.log(1.0 / k)

