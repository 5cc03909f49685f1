"""Bracket invariants against the independent oracle and hand values."""

import pytest

from surfskein import (
    BracketValue,
    DELTA,
    EmptyBracketError,
    EnumerationLimitError,
    all_states,
    bracket,
    degree_stats,
    homological_bracket,
    jones,
    parse_sld,
    reduced_homotopy_bracket,
    resolve,
    span_bounds,
)
from surfskein.invariants import (
    _delta_power,
    bipoly_z_slice,
    poly_add,
    poly_mul,
    poly_shift,
    render_key,
)

from oracle_trefoil import (
    LEFT_TREFOIL_BRACKET,
    LEFT_TREFOIL_JONES,
    POSITIVE_KINK_BRACKET,
    POSITIVE_KINK_JONES,
)

TREFOIL = """
X 1 4 2 5 over=odd
X 3 6 4 1 over=odd
X 5 2 6 3 over=odd
"""

KINK = "X 1 1 2 2 over=odd"
MERIDIAN = "X 1 2 1 2"
UNKNOT = "O f0 1"
TUBED_TREFOIL = TREFOIL + "tube f0 f2\n"


def brute_force_bracket(d, level):
    """Independent assembly of the state sum through the public resolver."""
    terms = {}
    for s in all_states(d):
        rs = resolve(d, s)
        contribution = poly_shift(
            dict(_delta_power(rs.contractible_count)), rs.weight_exponent
        )
        key = rs.reduced_key(level)
        terms[key] = poly_add(terms.get(key, {}), contribution)
    return {k: p for k, p in terms.items() if p}


# ---------------------------------------------------------------------------
# bracket values
# ---------------------------------------------------------------------------


def test_trefoil_bracket_matches_oracle():
    d = parse_sld(TREFOIL)
    bv = bracket(d, level=0)
    assert bv.terms == {0: LEFT_TREFOIL_BRACKET}
    assert bv.span() == 16
    assert degree_stats(bv) == (9, -7, 16)


def test_kink_and_unknot_brackets():
    kink = bracket(parse_sld(KINK))
    assert kink.terms == {0: POSITIVE_KINK_BRACKET}
    assert kink.render() == "0: A^5 + A"
    unknot = bracket(parse_sld(UNKNOT))
    assert unknot.terms == {0: DELTA}
    two = bracket(parse_sld("O f0 2"))
    assert two.terms == {0: {4: 1, 0: 2, -4: 1}}


def test_bracket_levels_agree_on_spheres():
    d = parse_sld(TREFOIL)
    poly = bracket(d, 0).terms[0]
    assert bracket(d, 1).terms == {(): poly}
    assert bracket(d, 2).terms == {((), ()): poly}


def test_bracket_matches_brute_force_resolver():
    for text in [TREFOIL, KINK, MERIDIAN, UNKNOT, TUBED_TREFOIL]:
        d = parse_sld(text)
        for level in (0, 1, 2):
            assert bracket(d, level).terms == brute_force_bracket(d, level)


def test_meridian_levels_refine():
    d = parse_sld(MERIDIAN)
    lvl0 = bracket(d, 0)
    lvl1 = bracket(d, 1)
    lvl2 = bracket(d, 2)
    assert lvl0.terms == {1: {1: 1, -1: 1}}
    # the two essential curves agree mod 2 but differ integrally
    assert len(lvl1.terms) == 1
    assert list(lvl1.terms.values()) == [{1: 1, -1: 1}]
    assert len(lvl2.terms) == 2
    assert sorted(p for term in lvl2.terms.values() for p in term.items()) == [
        (-1, 1),
        (1, 1),
    ]
    # refinement can only grow the computed span
    assert lvl0.span() <= lvl1.span() <= lvl2.span()


def test_bracket_invariant_under_relabeling():
    d1 = parse_sld(TREFOIL)
    d2 = parse_sld(
        "X 5 2 6 3 over=odd\nX 3 6 4 1 over=odd\nX 1 4 2 5 over=odd"
    )
    for level in (0, 1, 2):
        assert bracket(d1, level).terms == bracket(d2, level).terms


def test_bracket_thread_determinism():
    d = parse_sld(TUBED_TREFOIL)
    for level in (0, 1, 2):
        assert bracket(d, level, threads=3).terms == bracket(d, level).terms
    assert reduced_homotopy_bracket(d, threads=2) == reduced_homotopy_bracket(d)
    assert homological_bracket(d, threads=2) == homological_bracket(d)


def test_bracket_size_ceiling(monkeypatch):
    monkeypatch.setenv("SKEIN_MAX_STATES", "8")
    d = parse_sld("X 1 1 2 2\nX 3 3 4 4\nX 5 5 6 6\nX 7 7 8 8")
    with pytest.raises(EnumerationLimitError):
        bracket(d)


# ---------------------------------------------------------------------------
# two-variable brackets
# ---------------------------------------------------------------------------


def test_reduced_homotopy_bracket_values():
    assert reduced_homotopy_bracket(parse_sld(UNKNOT)) == {(2, 0): -1, (-2, 0): -1}
    trefoil = reduced_homotopy_bracket(parse_sld(TREFOIL))
    assert bipoly_z_slice(trefoil, 0) == LEFT_TREFOIL_BRACKET
    assert {z for _, z in trefoil} == {0}
    meridian = reduced_homotopy_bracket(parse_sld(MERIDIAN))
    assert meridian == {(1, 1): 1, (-1, 1): 1}


def test_homological_bracket_classical_matches_bracket():
    for text in (TREFOIL, KINK, UNKNOT):
        d = parse_sld(text)
        hb = homological_bracket(d)
        assert {z for _, z in hb} == {0}
        assert bipoly_z_slice(hb, 0) == bracket(d).terms[0]


def test_homological_bracket_meridian():
    assert homological_bracket(parse_sld(MERIDIAN)) == {(1, 1): 1, (-1, 1): 1}


def test_psi_span_bounded_by_bracket_span():
    for text in (TREFOIL, KINK, MERIDIAN, TUBED_TREFOIL):
        d = parse_sld(text)
        psi = reduced_homotopy_bracket(d)
        amax, amin, span = degree_stats(psi)
        assert span <= bracket(d, 2).span()


# ---------------------------------------------------------------------------
# Jones polynomials
# ---------------------------------------------------------------------------


def test_jones_matches_oracle():
    assert jones(parse_sld(TREFOIL)).terms == {0: LEFT_TREFOIL_JONES}
    assert jones(parse_sld(KINK)).terms == {0: POSITIVE_KINK_JONES}


def test_jones_kills_the_kink():
    # one positive kink on the unknot normalises back to the unknot value
    kink = jones(parse_sld(KINK)).terms[0]
    assert kink == {2: -1, -2: -1}
    assert kink == jones(parse_sld(UNKNOT)).terms[0]


def test_jones_variable_and_render():
    jv = jones(parse_sld(UNKNOT))
    assert jv.variable == "q"
    assert jv.render() == "0: -q^2 - q^-2"


def test_jones_levels_on_meridian():
    d = parse_sld(MERIDIAN)
    assert jones(d, 0).terms == {1: {4: -1, 2: -1}}
    assert len(jones(d, 2).terms) == 2


# ---------------------------------------------------------------------------
# degree statistics and span bounds
# ---------------------------------------------------------------------------


def test_degree_stats_forms():
    assert degree_stats({9: -1, -7: 1}) == (9, -7, 16)
    assert degree_stats({(1, 1): 1, (-3, 0): 2}) == (1, -3, 4)
    with pytest.raises(EmptyBracketError):
        degree_stats(BracketValue(level=0))
    with pytest.raises(EmptyBracketError):
        degree_stats({})


def test_span_bounds_trefoil():
    sb = span_bounds(parse_sld(TREFOIL))
    assert (sb.t_first, sb.t_second) == (3, 2)
    assert sb.d_max_bound == 9
    assert sb.d_min_bound == -7
    assert sb.span_formula == 16
    assert sb.span_theorem_bound == 16
    assert sb.formula_is_exact is None
    # the bracket attains both degree bounds here
    assert degree_stats(bracket(parse_sld(TREFOIL))) == (9, -7, 16)


def test_span_bounds_meridian():
    sb = span_bounds(parse_sld(MERIDIAN))
    assert (sb.t_first, sb.t_second) == (0, 0)
    assert sb.span_formula == 2
    assert sb.span_theorem_bound == 4 + 4 - 2 * 2
    assert bracket(parse_sld(MERIDIAN), 2).span() == 2


def test_degree_bounds_hold_everywhere():
    for text in (TREFOIL, KINK, MERIDIAN, UNKNOT, TUBED_TREFOIL):
        d = parse_sld(text)
        sb = span_bounds(d)
        bv = bracket(d, 2)
        dmax, dmin, span = degree_stats(bv)
        assert dmax <= sb.d_max_bound
        assert dmin >= sb.d_min_bound
        assert span <= sb.span_formula
        assert sb.span_formula <= sb.span_theorem_bound


def test_span_bounds_adequate_flag():
    sb = span_bounds(parse_sld(TREFOIL), adequate=True)
    assert sb.formula_is_exact is True
    assert "(exact)" in sb.render()
    assert sb.to_json()["formula_is_exact"] is True


def test_render_key_forms():
    assert render_key(0, 0) == "0"
    assert render_key((), 1) == "[]"
    assert render_key((0b101, 0), 1) == "[e0+e2, 0]"
    assert render_key(((3,), ((-1, 1),)), 2) == "[e0+e1] | [(-1,1)]"
