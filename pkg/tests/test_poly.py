"""Laurent and two-variable polynomial arithmetic and rendering."""

import pytest

from surfskein.invariants import (
    DELTA,
    EmptyBracketError,
    bipoly_a_degrees,
    bipoly_render,
    bipoly_to_json,
    bipoly_z_slice,
    poly_add,
    poly_degrees,
    poly_div_exact,
    poly_invert,
    poly_mul,
    poly_pow,
    poly_render,
    poly_scale,
    poly_shift,
    poly_span,
    poly_to_json,
)


def test_add_cancels_to_empty():
    assert poly_add({3: 2, 0: 1}, {3: -2, 1: 4}) == {0: 1, 1: 4}
    assert poly_add({5: 1}, {5: -1}) == {}


def test_mul_and_pow():
    assert poly_mul({1: 1, -1: 1}, {1: 1, -1: -1}) == {2: 1, -2: -1}
    assert poly_pow(DELTA, 0) == {0: 1}
    assert poly_pow(DELTA, 1) == DELTA
    assert poly_pow(DELTA, 2) == {4: 1, 0: 2, -4: 1}
    assert poly_pow(DELTA, 3) == {6: -1, 2: -3, -2: -3, -6: -1}


def test_shift_scale_invert():
    assert poly_shift({2: 1, -2: 3}, 3) == {5: 1, 1: 3}
    assert poly_scale({2: 1}, -4) == {2: -4}
    assert poly_scale({2: 1}, 0) == {}
    assert poly_invert({5: 1, 1: 1}) == {-5: 1, -1: 1}


def test_degrees_and_span():
    assert poly_degrees({9: -1, -7: 1}) == (9, -7)
    assert poly_span({9: -1, -7: 1}) == 16
    assert poly_span({4: 2}) == 0
    with pytest.raises(EmptyBracketError):
        poly_degrees({})


def test_render_examples():
    assert poly_render({5: 1, 1: 1}) == "A^5 + A"
    assert poly_render(DELTA) == "-A^2 - A^-2"
    assert poly_render({}) == "0"
    assert poly_render({3: 2, 0: -3}) == "2A^3 - 3"
    assert poly_render({0: 1}) == "1"
    assert poly_render({-1: -1}) == "-A^-1"
    assert poly_render({2: -1, -2: -1}, variable="q") == "-q^2 - q^-2"


def test_json_form():
    assert poly_to_json({5: 1, -3: -2}) == {"-3": -2, "5": 1}


def test_exact_division():
    prod = poly_mul(DELTA, {4: 1, 0: -2, -4: 1})
    assert poly_div_exact(prod, DELTA) == {4: 1, 0: -2, -4: 1}
    assert poly_div_exact({}, DELTA) == {}
    assert poly_div_exact({1: 1}, DELTA) is None
    assert poly_div_exact({4: 1, 0: 1}, {2: 2}) is None  # 2 does not divide 1
    assert poly_div_exact({4: 1, 0: 1}, {2: 1}) == {2: 1, -2: 1}
    assert poly_div_exact({1: 1}, {}) is None
    # the frozen trefoil values: unreduced value = loop value * classical value
    jones_unreduced = {-18: 1, -10: -1, -6: -1, -2: -1}
    classical = {-16: -1, -12: 1, -4: 1}
    assert poly_div_exact(jones_unreduced, {2: -1, -2: -1}) == classical


def test_bipoly_helpers():
    b = {(1, 1): 1, (-1, 1): 1, (4, 0): 2}
    assert bipoly_z_slice(b, 1) == {1: 1, -1: 1}
    assert bipoly_z_slice(b, 0) == {4: 2}
    assert bipoly_a_degrees(b) == (4, -1)
    assert bipoly_render(b) == "(A + A^-1)*z + (2A^4)"
    assert bipoly_to_json(b) == {"0": {"4": 2}, "1": {"-1": 1, "1": 1}}
    with pytest.raises(EmptyBracketError):
        bipoly_a_degrees({})
    assert bipoly_render({}) == "0"
