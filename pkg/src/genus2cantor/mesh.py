"""Wavefront OBJ export of any level of the construction."""
from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .chain import Chain
from .geometry import _BOX_SIGNS, Beam, core_loops
from .sequence import DEFAULT_BUDGET, expand_level


def _box_triangles() -> np.ndarray:
    """12 triangles over the ``_BOX_SIGNS`` vertex order, counterclockwise seen from outside
    for a right-handed frame."""
    index = {tuple(s): i for i, s in enumerate(_BOX_SIGNS.astype(int))}
    tris = []
    for a in range(3):
        b, c = (a + 1) % 3, (a + 2) % 3
        for side in (1, -1):
            quad = []
            for sb, sc in ((-1, -1), (1, -1), (1, 1), (-1, 1)):
                key = [0, 0, 0]
                key[a], key[b], key[c] = side, sb, sc
                quad.append(index[tuple(key)])
            if side < 0:
                quad.reverse()
            tris += [(quad[0], quad[1], quad[2]), (quad[0], quad[2], quad[3])]
    return np.array(tris)


BOX_TRIANGLES = _box_triangles()


def beam_mesh(beam: Beam) -> tuple[np.ndarray, np.ndarray]:
    """8 vertices and 12 outward triangles (0-based) of one beam."""
    tris = BOX_TRIANGLES
    if np.linalg.det(beam.frame) < 0:
        tris = tris[:, ::-1]
    return beam.vertices(), tris


def group_name(address) -> str:
    return "_".join(["X", *map(str, address)])


def format_obj(chain: Chain, level: int, cores: bool = False, budget: int = DEFAULT_BUDGET) -> str:
    comps = expand_level(chain, level, budget)
    out = [f"# level {level}, {len(comps)} components, m={chain.m}"]
    nv = 0
    for comp in comps:
        out.append(f"g {group_name(comp.address)}")
        for beam in comp.solid.beams():
            verts, tris = beam_mesh(beam)
            out += [f"v {x:.17g} {y:.17g} {z:.17g}" for x, y, z in verts]
            out += [f"f {a + nv + 1} {b + nv + 1} {c + nv + 1}" for a, b, c in tris]
            nv += len(verts)
        if cores:
            for loop in core_loops(comp.solid):
                out += [f"v {x:.17g} {y:.17g} {z:.17g}" for x, y, z in loop.vertices]
                idx = [str(nv + i + 1) for i in range(len(loop))]
                out.append("l " + " ".join(idx + idx[:1]))
                nv += len(loop)
    return "\n".join(out) + "\n"


def export_obj(chain: Chain, level: int, path: str | os.PathLike, cores: bool = False,
               budget: int = DEFAULT_BUDGET) -> None:
    Path(path).write_text(format_obj(chain, level, cores, budget), encoding="ascii")
