import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genus2cantor.geometry import SQRT2, contains_point
from genus2cantor.sequence import (
    BudgetExceededError,
    MembershipResult,
    PowerMapParams,
    address_map,
    component,
    escape_radius_model,
    expand_level,
    involution_iota1,
    involution_iota2,
    membership,
    nesting_failures,
    similarity_dimension,
    winding_omega,
)

HOLE = np.array([SQRT2, 0.0, 0.0])


# --- components ------------------------------------------------------------------


def test_empty_address_is_model(chain32):
    c = component(chain32, ())
    assert c.map.scale == 1.0 and c.level == 0
    assert np.allclose(c.solid.vertices(), chain32.base.vertices())


def test_single_and_double_letter_scales(chain32):
    assert component(chain32, (1,)).map.scale == pytest.approx(0.11785113, abs=1e-8)
    assert component(chain32, (1, 1)).map.scale == pytest.approx(1 / 72, rel=1e-12)


def test_address_letters_validated(chain32):
    with pytest.raises(ValueError):
        component(chain32, (0,))
    with pytest.raises(ValueError):
        component(chain32, (33,))


def test_address_map_composes_left_to_right(chain32):
    s = address_map(chain32, (3, 7))
    x = np.array([0.2, 0.1, 0.0])
    assert np.allclose(s(x), chain32.maps[2](chain32.maps[6](x)))


def test_expand_level_counts_and_order(chain32):
    assert len(expand_level(chain32, 0)) == 1
    level2 = expand_level(chain32, 2)
    assert len(level2) == 1024
    assert [c.address for c in level2[:3]] == [(1, 1), (1, 2), (1, 3)]
    assert level2[-1].address == (32, 32)


def test_expand_level_budget(chain32):
    with pytest.raises(BudgetExceededError):
        expand_level(chain32, 3, budget=1000)
    with pytest.raises(ValueError):
        expand_level(chain32, -1)


def test_diameter_law(chain32):
    base = chain32.base.diameter()
    k = chain32.params.k
    for c in expand_level(chain32, 2):
        assert c.solid.diameter() == pytest.approx(k * k * base, rel=1e-9)
    rng = np.random.default_rng(0)
    for _ in range(20):
        addr = tuple(int(a) for a in rng.integers(1, 33, size=3))
        c = component(chain32, addr)
        assert c.map.scale == pytest.approx(k ** 3, rel=1e-12)
        assert c.solid.diameter() == pytest.approx(k ** 3 * base, rel=1e-9)


# --- nesting ---------------------------------------------------------------------------


def test_nesting_m288_two_levels(chain288):
    bad, checked = nesting_failures(chain288, 2)
    assert checked == 288 + 288 ** 2
    assert bad == []


def test_nesting_m32_fails_everywhere(chain32):
    bad, checked = nesting_failures(chain32, 1)
    assert checked == 32 and len(bad) == 32


def test_nesting_budget(chain288):
    with pytest.raises(BudgetExceededError):
        nesting_failures(chain288, 2, budget=1000)


# --- membership ------------------------------------------------------------------------


@pytest.mark.parametrize("fixture", ["chain32", "chain288"])
def test_hole_centre_escapes_immediately(fixture, request):
    chain = request.getfixturevalue(fixture)
    res = membership(chain, HOLE, 5)
    assert res == MembershipResult.escaped_at(0)
    assert str(res) == "escaped_at(0)"


@pytest.mark.parametrize("fixture", ["chain32", "chain288"])
def test_image_of_hole_centre_escapes_after_one_step(fixture, request):
    chain = request.getfixturevalue(fixture)
    res = membership(chain, chain.maps[0](HOLE), 5)
    assert not res.contained and res.level == 1


@pytest.mark.parametrize("j", [1, 17])
def test_fixed_points_stay_for_twelve_levels(chain32, j):
    res = membership(chain32, chain32.maps[j - 1].fixed_point(), 12)
    assert res.contained
    assert res.prefix == (j,) * 12 and res.depth_reached == 12


def test_fixed_points_outside_model_escape_at_once(chain32):
    # copies poke out of X0 at m=32, so some fixed points lie outside it
    outside = 0
    for j, s in enumerate(chain32.maps, start=1):
        x = s.fixed_point()
        res = membership(chain32, x, 12)
        if contains_point(chain32.base, x):
            assert res.contained and res.prefix == (j,) * 12
        else:
            outside += 1
            assert res == MembershipResult.escaped_at(0)
    assert 0 < outside < 32


def test_all_fixed_points_contained_at_m288(chain288):
    for j, s in enumerate(chain288.maps, start=1):
        res = membership(chain288, s.fixed_point(), 6)
        assert res.contained and res.prefix == (j,) * 6


def test_fixed_point_is_fixed(chain32):
    s = chain32.maps[0]
    x = s.fixed_point()
    assert np.allclose(s(x), x, atol=1e-15)


def test_fixed_point_at_fine_scale_loses_resolution(chain288):
    # a depth-12 piece at m=288 is ~1e-22 across, far below double-precision spacing
    s = chain288.maps[0]
    assert s.scale ** 12 * chain288.base.diameter() < np.spacing(1.0)
    assert membership(chain288, s.fixed_point(), 6).contained


def test_membership_consistent_with_prefix_components(chain288):
    rng = np.random.default_rng(4)
    for _ in range(30):
        addr = tuple(int(a) for a in rng.integers(1, 289, size=3))
        x = component(chain288, addr).map([SQRT2 / 2, SQRT2 / 2, 0.0])
        res = membership(chain288, x, 3)
        assert res.contained and res.prefix == addr
        for depth in range(1, 4):
            assert contains_point(component(chain288, res.prefix[:depth]).solid, x)


def test_escape_level_means_pullback_leaves_model(chain32):
    rng = np.random.default_rng(6)
    lo, hi = chain32.base.bbox()
    for x in rng.uniform(lo, hi, size=(200, 3)):
        res = membership(chain32, x, 3)
        if res.contained:
            continue
        y = x
        for letter in res.prefix:
            y = chain32.maps[letter - 1].apply_inverse(y)
        if res.level == 0:
            assert not contains_point(chain32.base, x)
        else:
            assert contains_point(chain32.base, y)
            assert not any(contains_point(c, y) for c in chain32.components)


def test_membership_equivariant_under_iota1(chain32):
    rng = np.random.default_rng(9)
    m = chain32.m
    points = [component(chain32, tuple(int(a) for a in rng.integers(1, 33, size=3))).map([0.7, 0.7, 0.0])
              for _ in range(20)]
    points += list(rng.uniform(-3, 3, size=(20, 3)))
    for x in points:
        a = membership(chain32, x, 3)
        b = membership(chain32, involution_iota1(x), 3)
        assert a.contained == b.contained and a.level == b.level
        assert b.prefix == tuple(m + 1 - j for j in a.prefix)


def test_membership_rejects_negative_depth(chain32):
    with pytest.raises(ValueError):
        membership(chain32, HOLE, -1)


def test_membership_depth_zero(chain32):
    assert membership(chain32, [0.0, 0.0, 0.0], 0).contained


# --- power map, involutions, winding, dimension ---------------------------------------------


def test_escape_radius_examples():
    assert escape_radius_model(4, 1, PowerMapParams(6)).radius == 4096
    assert escape_radius_model(4, 0, PowerMapParams(6)).radius == 4
    assert escape_radius_model(2, 2, PowerMapParams(2)).radius == 16


def test_escape_radius_overflow():
    res = escape_radius_model(4, 12, PowerMapParams(17))
    assert res.overflow and math.isinf(res.radius)


def test_escape_radius_validation():
    with pytest.raises(ValueError):
        escape_radius_model(1.0, 1, PowerMapParams(2))
    with pytest.raises(ValueError):
        escape_radius_model(2.0, -1, PowerMapParams(2))
    with pytest.raises(ValueError):
        PowerMapParams(1)


def test_power_map_params(chain288, chain32):
    p = PowerMapParams(6)
    assert p.outer_radius == 4 ** 6 and p.degree == 36 and p.inner_radius == 4
    with pytest.raises(ValueError):
        PowerMapParams.for_chain(chain288)  # 288 is not a square
    with pytest.raises(ValueError):
        PowerMapParams.for_chain(chain32)


def test_involutions():
    assert np.array_equal(involution_iota1([1, 2, 3]), [-1, -2, 3])
    assert np.array_equal(involution_iota2([1, 2, 3]), [1, -2, -3])
    pts = np.random.default_rng(2).normal(size=(100, 3))
    assert np.array_equal(involution_iota1(involution_iota1(pts)), pts)
    assert np.array_equal(involution_iota2(involution_iota2(pts)), pts)


def test_winding_examples():
    assert np.allclose(winding_omega([1, 0, 0], 32), [1, 0, 0])
    x = [math.cos(math.pi / 8), math.sin(math.pi / 8), 0.5]
    assert np.allclose(winding_omega(x, 32), [-1, 0, 0.5], atol=1e-12)
    with pytest.raises(ValueError):
        winding_omega([1, 0, 0], 30)


@settings(max_examples=100, deadline=None)
@given(st.tuples(*(st.floats(-10, 10, allow_nan=False),) * 3), st.sampled_from([4, 16, 32, 288]))
def test_winding_preserves_radius_and_height(x, m):
    y = winding_omega(x, m)
    assert math.hypot(y[0], y[1]) == pytest.approx(math.hypot(x[0], x[1]), abs=1e-9)
    assert y[2] == x[2]


def test_similarity_dimension(oracle):
    assert similarity_dimension(32, 1 / (6 * SQRT2)) == pytest.approx(1.620760, abs=1e-5)
    assert similarity_dimension(32, 1 / (6 * SQRT2)) == pytest.approx(oracle["closed_forms"]["dimension32"], abs=1e-14)
    assert similarity_dimension(2, 0.5) == pytest.approx(1.0)
    assert similarity_dimension(4, 0.5) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        similarity_dimension(1, 0.5)
    with pytest.raises(ValueError):
        similarity_dimension(4, 1.0)
