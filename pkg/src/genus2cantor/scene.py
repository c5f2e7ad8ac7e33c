"""Line-oriented text persistence for chains.

Layout::

    genus2-scene v1
    params R r k m
    map 1 scale s rot r11 r12 ... r33 trans t1 t2 t3
    ...

Floats are written with 17 significant digits, which round-trips binary64
exactly.
"""
from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .chain import Chain, ChainParams, chain_from_maps
from .geometry import GeometryError, Similarity

HEADER = "genus2-scene v1"
_MAGIC = "genus2-scene"


class SceneFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class UnsupportedVersionError(SceneFormatError):
    pass


class SceneInvariantError(SceneFormatError):
    """Well-formed file whose numbers violate a geometric invariant."""


def _f(x: float) -> str:
    return format(float(x), ".17g")


def format_scene(chain: Chain) -> str:
    p = chain.params
    lines = [HEADER, f"params {_f(p.R)} {_f(p.r)} {_f(p.k)} {int(p.m)}"]
    for j, s in enumerate(chain.maps, start=1):
        rot = " ".join(_f(x) for x in s.rotation.ravel())
        trans = " ".join(_f(x) for x in s.translation)
        lines.append(f"map {j} scale {_f(s.scale)} rot {rot} trans {trans}")
    return "\n".join(lines) + "\n"


def write_scene(chain: Chain, path: str | os.PathLike) -> None:
    Path(path).write_text(format_scene(chain), encoding="ascii")


def _floats(tokens, lineno: int) -> list[float]:
    try:
        return [float(t) for t in tokens]
    except ValueError as exc:
        raise SceneFormatError(f"bad number ({exc})", lineno) from None


def parse_scene(text: str) -> Chain:
    lines = text.splitlines()
    if not lines:
        raise SceneFormatError("empty scene file", 1)
    head = lines[0].split()
    if len(head) != 2 or head[0] != _MAGIC:
        raise SceneFormatError(f"expected header {HEADER!r}", 1)
    if head[1] != "v1":
        raise UnsupportedVersionError(f"unsupported scene version {head[1]!r}", 1)

    if len(lines) < 2:
        raise SceneFormatError("missing params line", 2)
    tok = lines[1].split()
    if len(tok) != 5 or tok[0] != "params":
        raise SceneFormatError("expected 'params R r k m'", 2)
    R, r, k = _floats(tok[1:4], 2)
    try:
        m = int(tok[4])
    except ValueError:
        raise SceneFormatError(f"m must be an integer, got {tok[4]!r}", 2) from None
    try:
        params = ChainParams(R, r, k, m)
    except GeometryError as exc:
        raise SceneInvariantError(str(exc), 2) from None

    body = [(i, ln) for i, ln in enumerate(lines[2:], start=3) if ln.strip()]
    if len(body) != m:
        raise SceneFormatError(f"expected {m} map lines, found {len(body)}", len(lines))
    maps = []
    for j, (lineno, ln) in enumerate(body, start=1):
        tok = ln.split()
        if len(tok) != 18 or tok[0] != "map" or tok[2] != "scale" or tok[4] != "rot" or tok[14] != "trans":
            raise SceneFormatError("expected 'map j scale s rot r11..r33 trans t1 t2 t3'", lineno)
        if tok[1] != str(j):
            raise SceneFormatError(f"map index {tok[1]!r} out of order (expected {j})", lineno)
        scale = _floats([tok[3]], lineno)[0]
        rot = np.array(_floats(tok[5:14], lineno)).reshape(3, 3)
        trans = _floats(tok[15:18], lineno)
        try:
            maps.append(Similarity(scale, rot, trans))
        except GeometryError as exc:
            raise SceneInvariantError(str(exc), lineno) from None
    try:
        return chain_from_maps(params, maps)
    except GeometryError as exc:
        raise SceneInvariantError(str(exc)) from None


def read_scene(path: str | os.PathLike) -> Chain:
    try:
        text = Path(path).read_text(encoding="ascii")
    except UnicodeDecodeError as exc:
        raise SceneFormatError(f"not an ASCII scene file ({exc.reason})") from None
    return parse_scene(text)
