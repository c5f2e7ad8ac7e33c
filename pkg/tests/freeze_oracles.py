"""Regenerate tests/oracle_values.json from the reference computations.

Run once by hand (``python3 tests/freeze_oracles.py``); the tests only read
the frozen file.
"""
from __future__ import annotations

import itertools
import json
import math
from pathlib import Path

import numpy as np
from mpmath import mp, mpf, log, sqrt

import oracle_lib as ol

OUT = Path(__file__).with_name("oracle_values.json")
BOX_SEED = 1234
BOX_CASES = 100


def fourway_segments(R=1.0):
    """The four upper core segments written out from their vector equations."""
    a, b = math.sqrt(2 + math.sqrt(2)) / 2, math.sqrt(2 - math.sqrt(2)) / 2
    u = math.sqrt(2) * R / 4
    data = [
        ((3 * u, 0, 0), (-1, a, b)),
        ((5 * u, 0, 0), (-1, -a, b)),
        ((0, u, 0), (-b, -1, a)),
        ((0, -u, 0), (b, 1, a)),
    ]
    # direction vectors have length sqrt2, t runs over [0, sqrt2 R]
    return [(np.array(p, float), np.array(p, float) + math.sqrt(2) * R * np.array(d, float)) for p, d in data]


def canonical_boxes(R=1.0, r=0.08):
    s = math.sqrt(2)
    boxes = []
    for sign in (1.0, -1.0):
        c = np.array([sign * s * R, 0, 0])
        e1 = sign * np.array([1, 1, 0]) / s
        e2 = sign * np.array([-1, 1, 0]) / s
        frame = np.array([e1, e2, np.cross(e1, e2)])
        for off, half in ((R * e2, (R + r, r, r)), (-R * e2, (R + r, r, r)),
                          (R * e1, (r, R + r, r)), (-R * e1, (r, R + r, r))):
            boxes.append((c + off, frame, np.array(half)))
    return boxes


def main():
    mp.dps = 40
    values = {}

    values["lk_quadrature"] = {
        "hopf": ol.gauss_integral_quadrature(ol.HOPF_A, ol.HOPF_B),
        "unlink": ol.gauss_integral_quadrature(ol.HOPF_A, ol.UNLINK_B),
    }
    values["crossings_tilted"] = ol.polygon_crossings(ol.HOPF_A, ol.HOPF_B, (0.1, 0.2, 1.0))

    segs = fourway_segments()
    pair = {f"{i + 1}{j + 1}": ol.segment_distance_refined(*segs[i], *segs[j])
            for i, j in itertools.combinations(range(4), 2)}
    values["fourway_pair_distances"] = pair
    values["fourway_min"] = min(pair.values())
    values["cylinder_margin_r008"] = values["fourway_min"] - 2 * math.sqrt(2) * 0.08

    values["closed_forms"] = {
        "min_distance": float(1 / (2 * sqrt(mpf(5) / 2 + sqrt(2)))),
        "max_thickness": float(1 / (4 * sqrt(5 + 2 * sqrt(2)))),
        "k32": float(1 / (6 * sqrt(2))),
        "k288": float(mpf(16) / (3 * sqrt(2) * 288)),
        "dimension32": float(log(32) / log(6 * sqrt(2))),
    }
    # smallest multiple of 16 passing 2 sqrt2 k (2R + r) < r at R=1, r=0.08, in exact-ish arithmetic
    m = 16
    while not 2 * sqrt(2) * (mpf(16) / (3 * sqrt(2) * m)) * (2 + mpf("0.08")) < mpf("0.08"):
        m += 16
    values["smallest_m"] = m

    corners = np.vstack([ol.box_corners(*b) for b in canonical_boxes()])
    values["canonical_diameter"] = ol.solid_diameter(corners)

    rng = np.random.default_rng(BOX_SEED)
    cases = []
    for _ in range(BOX_CASES):
        b1, b2 = ol.random_box(rng), ol.random_box(rng)
        cases.append({
            "b1": [b1[0].tolist(), b1[1].tolist(), b1[2].tolist()],
            "b2": [b2[0].tolist(), b2[1].tolist(), b2[2].tolist()],
            "projection": ol.box_distance_projections(b1, b2),
            "sampled": ol.box_distance_sampled(b1, b2),
        })
    values["box_pairs"] = cases

    OUT.write_text(json.dumps(values, indent=1) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
