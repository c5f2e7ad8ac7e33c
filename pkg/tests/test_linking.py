import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle_lib as ol
from genus2cantor.geometry import GeometryError, PolyLoop, Similarity, apply_similarity, core_loops
from genus2cantor.linking import (
    DegenerateDirectionError,
    LoopsTooCloseError,
    NonGenericPositionError,
    canonical_filling_disk,
    crossing_linking_number,
    crossing_linking_number_auto,
    disk_piercings,
    gauss_linking_number,
    gauss_sum,
    is_hopf_pair,
    is_planar,
    signed_piercing_count,
)

A = PolyLoop(ol.HOPF_A)
B = PolyLoop(ol.HOPF_B)
FAR = PolyLoop(ol.UNLINK_B)
TILTED = (0.1, 0.2, 1.0)


def random_similarity(rng):
    return Similarity(rng.uniform(0.1, 5.0), ol.random_rotation(rng), rng.uniform(-10, 10, 3))


def random_instances(count, seed):
    """Hopf and unlink templates under random similarities, plus the lk from quadrature."""
    rng = np.random.default_rng(seed)
    hopf_lk = round(ol.gauss_integral_quadrature(ol.HOPF_A, ol.HOPF_B))
    out = []
    for i in range(count):
        s = random_similarity(rng)
        partner, lk = (B, hopf_lk) if i % 2 == 0 else (FAR, 0)
        out.append((apply_similarity(s, A), apply_similarity(s, partner), lk))
    return out


# --- Gauss sum ---------------------------------------------------------------


def test_template_hopf_pair_matches_quadrature(oracle):
    rep = gauss_linking_number(A, B)
    assert abs(rep.lk) == 1
    assert rep.lk == round(oracle["lk_quadrature"]["hopf"])
    assert gauss_sum(A, B) == pytest.approx(oracle["lk_quadrature"]["hopf"], abs=1e-9)
    assert rep.gauss_residual < 1e-12
    assert rep.method == "gauss"


def test_translated_copy_unlinked(oracle):
    assert gauss_linking_number(A, FAR).lk == 0 == round(oracle["lk_quadrature"]["unlink"])


def test_touching_loops_raise():
    touching = PolyLoop([(1, 0, 0), (2, 0, 1), (3, 0, 0), (2, 0, -1)])
    with pytest.raises(LoopsTooCloseError):
        gauss_linking_number(A, touching)


def test_symmetric_and_orientation_sensitive():
    assert gauss_linking_number(A, B).lk == gauss_linking_number(B, A).lk
    assert gauss_linking_number(A.reversed(), B).lk == -gauss_linking_number(A, B).lk


def test_right_handed_hopf_link_is_positive():
    # unit circle-like square in the x1x2-plane, partner threading upwards through it
    # along +x3 inside and returning outside: the standard positive Hopf link
    a = PolyLoop([(1, 0, 0), (0, 1, 0), (-1, 0, 0), (0, -1, 0)])
    b = PolyLoop([(0, 0, -1), (0, 0, 1), (2, 0, 1), (2, 0, -1)])
    assert gauss_linking_number(a, b).lk == 1


def test_quadrature_agreement_on_random_instances():
    rng = np.random.default_rng(17)
    for _ in range(20):
        s = random_similarity(rng)
        a, b = apply_similarity(s, A), apply_similarity(s, B)
        assert gauss_sum(a, b) == pytest.approx(ol.gauss_integral_quadrature(a.vertices, b.vertices), abs=1e-6)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_lk_invariant_under_joint_similarity(seed):
    s = random_similarity(np.random.default_rng(seed))
    assert gauss_linking_number(apply_similarity(s, A), apply_similarity(s, B)).lk == gauss_linking_number(A, B).lk


def test_doubly_wound_loop():
    # a square loop that winds twice around A's central axis (as a polygon) gives |lk| = 2
    pts = []
    for t in np.linspace(0, 4 * math.pi, 24, endpoint=False):
        rad = 0.3 if len(pts) < 12 else 0.5
        pts.append((rad * math.cos(t), rad * math.sin(t), 0.2 * math.sin(t / 2)))
    ring = PolyLoop(np.array(pts))
    axis_loop = PolyLoop([(0, 0, -2), (0, 0, 2), (4, 0, 2), (4, 0, -2)])
    assert abs(gauss_linking_number(ring, axis_loop).lk) == 2
    assert gauss_linking_number(ring, axis_loop).lk == ol.polygon_crossings(ring.vertices, axis_loop.vertices, TILTED)


# --- crossing oracle ----------------------------------------------------------


def test_crossing_count_tilted_view(oracle):
    rep = crossing_linking_number(A, B, TILTED)
    assert abs(rep.lk) == 1 and rep.crossings == 2
    assert rep.lk == oracle["crossings_tilted"] == gauss_linking_number(A, B).lk


@pytest.mark.xfail(strict=True, raises=DegenerateDirectionError,
                   reason="B lies in a vertical plane, so the straight-down view is degenerate")
def test_crossing_count_straight_down():
    rep = crossing_linking_number(A, B, (0, 0, 1))
    assert abs(rep.lk) == 1 and rep.crossings == 2


def test_unlink_has_no_crossings():
    rep = crossing_linking_number(A, FAR, (0, 0, 1))
    assert rep.lk == 0 and rep.crossings == 0


def test_direction_along_a_segment_is_degenerate():
    v = A.vertices
    with pytest.raises(DegenerateDirectionError):
        crossing_linking_number(A, FAR, v[1] - v[0] + [0, 0, 0])
    # a segment of B is along (1, 0, 1)-(2, 0, 0)
    with pytest.raises(DegenerateDirectionError):
        crossing_linking_number(A, B, ol.HOPF_B[1] - ol.HOPF_B[0])


def test_auto_retries_past_degenerate_direction():
    rep = crossing_linking_number_auto(A, B, (0, 0, 1))
    assert rep.lk == gauss_linking_number(A, B).lk


def test_auto_is_deterministic():
    r1 = crossing_linking_number_auto(A, B, (0, 0, 1))
    r2 = crossing_linking_number_auto(A, B, (0, 0, 1))
    assert r1 == r2


def test_oracle_agreement_on_random_instances():
    for a, b, lk in random_instances(120, 99):
        g = gauss_linking_number(a, b).lk
        c = crossing_linking_number_auto(a, b, TILTED).lk
        assert g == c == lk


# --- Hopf pairs and disks --------------------------------------------------------


def test_is_hopf_pair():
    assert is_hopf_pair(A, B)
    assert not is_hopf_pair(A, FAR)


def test_non_planar_loops_are_not_hopf_pairs():
    bent = PolyLoop([(1, 1, 0.3), (-1, 1, 0), (-1, -1, 0.3), (1, -1, 0)])
    assert not is_planar(bent)
    assert not is_hopf_pair(bent, B)


def test_chain_consecutive_lobes_form_hopf_pair(chain32):
    a = core_loops(chain32.components[0])[1]
    b = core_loops(chain32.components[1])[0]
    assert is_hopf_pair(a, b)


def test_filling_disk_of_square():
    disk = canonical_filling_disk(A)
    assert np.allclose(np.abs(disk.normal), [0, 0, 1])
    assert np.allclose(disk.origin, 0)
    assert disk.boundary is A


def test_filling_disk_of_canonical_lobe(chain32):
    disk = canonical_filling_disk(core_loops(chain32.base)[0])
    assert np.allclose(np.abs(disk.normal), [0, 0, 1])
    assert disk.origin[2] == 0


def test_filling_disk_rejects_non_planar():
    with pytest.raises(GeometryError):
        canonical_filling_disk(PolyLoop([(1, 1, 0.01), (-1, 1, 0), (-1, -1, 0), (1, -1, 0)]))


def test_hopf_disk_pierced_once_at_origin():
    hits = disk_piercings(canonical_filling_disk(A), B)
    assert len(hits) == 1
    assert np.allclose(hits[0].point, [0, 0, 0])
    assert hits[0].sign == gauss_linking_number(A, B).lk


def test_unlink_disk_not_pierced():
    assert disk_piercings(canonical_filling_disk(A), FAR) == []


def test_segment_in_disk_plane_is_non_generic():
    flat = PolyLoop([(0.5, 0, 0), (3, 0, 0), (3, 0, 1), (0.5, 0, 1)])
    with pytest.raises(NonGenericPositionError):
        disk_piercings(canonical_filling_disk(A), flat)


def test_loop_through_disk_boundary_is_non_generic():
    through_edge = PolyLoop([(1, 0, -1), (1, 0, 1), (3, 0, 1), (3, 0, -1)])
    with pytest.raises(NonGenericPositionError):
        disk_piercings(canonical_filling_disk(A), through_edge)


def test_piercing_count_equals_lk_on_random_instances():
    for a, b, lk in random_instances(120, 7):
        assert signed_piercing_count(canonical_filling_disk(a), b) == lk


def test_chain_disks_pierced_once(chain32):
    m = chain32.m
    for j in range(m):
        a = core_loops(chain32.components[j])[1]
        b = core_loops(chain32.components[(j + 1) % m])[0]
        hits = disk_piercings(canonical_filling_disk(a), b)
        assert len(hits) == 1
        assert hits[0].sign == gauss_linking_number(a, b).lk
