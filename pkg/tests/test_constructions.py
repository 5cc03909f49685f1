"""Tests for diagram-producing operations."""

import pytest

from surfskein.adequacy import adequacy, is_reduced, is_strongly_prime
from surfskein.constructions import (
    InvalidSiteError,
    OrientationMismatchError,
    RetryExhaustedError,
    add_kink,
    connected_sum,
    cut_point,
    mirror,
    parallel,
    random_alternating,
    random_diagram,
    reduce_kinks,
    reidemeister2,
    reidemeister2_inverse,
    reidemeister3,
    smooth_crossing,
)
from surfskein.diagram import DiagramError, parse_sld
from surfskein.invariants import DELTA, bracket, jones, poly_invert, poly_mul

TREFOIL = """
X 1 4 2 5 over=odd
X 3 6 4 1 over=odd
X 5 2 6 3 over=odd
"""

MIXED_TREFOIL = """
X 1 4 2 5 over=odd
X 3 6 4 1 over=odd
X 5 2 6 3
"""

KINK = "X 1 1 2 2 over=odd"
MERIDIAN = "X 1 2 1 2 over=odd"
UNKNOT = "O f0 1"

NECK_KINK = """
X 1 2 1 4 over=odd
X 3 4 3 5 over=odd
X 2 6 6 5 over=odd
"""


def _find_bigon(diagram, crossings):
    for fi, face in enumerate(diagram.faces()):
        if len(face.corners) == 2 and {w for w, _ in face.corners} == crossings:
            return fi
    raise AssertionError("expected a bigon between the new crossings")


# ---------------------------------------------------------------------------
# connected sum
# ---------------------------------------------------------------------------


class TestConnectedSum:
    def test_two_trefoils_counts(self):
        tref = parse_sld(TREFOIL)
        s = connected_sum(tref, cut_point(tref, 0), tref, cut_point(tref, 0))
        assert s.n == 6
        assert s.diagram_component_count() == 1
        assert s.genus() == 0
        assert s.writhe() == -6

    def test_bracket_multiplies_up_to_circle_factor(self):
        tref = parse_sld(TREFOIL)
        s = connected_sum(tref, cut_point(tref, 0), tref, cut_point(tref, 0))
        bt = bracket(tref).terms[0]
        bs = bracket(s).terms[0]
        assert poly_mul(bs, DELTA) == poly_mul(bt, bt)

    def test_all_edge_pairs_one_flip_each(self):
        tref = parse_sld(TREFOIL)
        bt = bracket(tref).terms[0]
        worked = 0
        for e1 in range(6):
            for e2 in range(6):
                for flip in (False, True):
                    try:
                        s = connected_sum(
                            tref, cut_point(tref, e1),
                            tref, cut_point(tref, e2, flip=flip),
                        )
                    except OrientationMismatchError:
                        continue
                    assert s.n == 6 and s.writhe() == -6
                    assert poly_mul(bracket(s).terms[0], DELTA) == poly_mul(bt, bt)
                    worked += 1
        assert worked == 36

    def test_crossingless_identity(self):
        tref = parse_sld(TREFOIL)
        unknot = parse_sld(UNKNOT)
        s = connected_sum(tref, cut_point(tref, 2), unknot, cut_point(unknot, 0))
        assert s.to_text() == tref.to_text()
        s2 = connected_sum(unknot, cut_point(unknot, 0), tref, cut_point(tref, 2))
        assert s2.to_text() == tref.to_text()

    def test_genus_adds_with_neck_tube(self):
        mer = parse_sld(MERIDIAN)
        s = connected_sum(mer, cut_point(mer, 0), mer, cut_point(mer, 0))
        assert s.n == 2
        assert s.genus() == 2
        assert s.euler_characteristic() == -2

    def test_orientation_mismatch_raised_and_fixed_by_flip(self):
        tref = parse_sld(TREFOIL)
        kink = parse_sld(KINK)
        with pytest.raises(OrientationMismatchError):
            connected_sum(tref, cut_point(tref, 1), kink, cut_point(kink, 1))
        s = connected_sum(
            tref, cut_point(tref, 1), kink, cut_point(kink, 1, flip=True)
        )
        assert s.n == 4 and s.writhe() == -2

    def test_double_flip_equals_no_flip(self):
        tref = parse_sld(TREFOIL)
        a = connected_sum(tref, cut_point(tref, 0), tref, cut_point(tref, 0))
        b = connected_sum(
            tref, cut_point(tref, 0, flip=True),
            tref, cut_point(tref, 0, flip=True),
        )
        assert a.to_text() == b.to_text()

    def test_adequacy_preserved_on_pairs(self):
        pool = [parse_sld(t) for t in (TREFOIL, MERIDIAN, MIXED_TREFOIL, KINK)]
        flags = [
            "plus_adequate", "minus_adequate",
            "homologically_a_adequate", "homologically_b_adequate",
            "skein_a_adequate", "skein_b_adequate",
        ]
        reports = [adequacy(d) for d in pool]
        for i, d1 in enumerate(pool):
            for j, d2 in enumerate(pool):
                s = None
                for flip in (False, True):
                    try:
                        s = connected_sum(
                            d1, cut_point(d1, 0),
                            d2, cut_point(d2, 0, flip=flip),
                        )
                        break
                    except OrientationMismatchError:
                        continue
                assert s is not None
                rs = adequacy(s)
                for flag in flags:
                    if getattr(reports[i], flag) and getattr(reports[j], flag):
                        assert getattr(rs, flag), (i, j, flag)

    def test_component_validation(self):
        tref = parse_sld(TREFOIL)
        point = cut_point(tref, 0)
        assert point.component == 0 and point.edge == 0
        bad = type(point)(component=5, edge=0)
        with pytest.raises(DiagramError):
            connected_sum(tref, bad, tref, cut_point(tref, 0))


# ---------------------------------------------------------------------------
# parallel copies
# ---------------------------------------------------------------------------


class TestParallel:
    def test_identity_at_r1(self):
        tref = parse_sld(TREFOIL)
        assert parallel(tref, 1).to_text() == tref.to_text()

    def test_trefoil_doubled(self):
        tref = parse_sld(TREFOIL)
        t2 = parallel(tref, 2)
        assert t2.n == 12
        assert t2.writhe() == 4 * tref.writhe() == -12
        assert t2.genus() == tref.genus() == 0
        assert t2.crossing_component_count == 1
        assert len(t2.strand_components()) == 2

    def test_writhe_scales_quadratically(self):
        for text, r in ((MERIDIAN, 2), (MERIDIAN, 3), (KINK, 2)):
            d = parse_sld(text)
            p = parallel(d, r)
            assert p.n == r * r * d.n
            assert p.writhe() == r * r * d.writhe()
            assert p.genus() == d.genus()

    def test_adequacy_preserved_r2_r3(self):
        for text in (TREFOIL, MERIDIAN):
            d = parse_sld(text)
            base = adequacy(d)
            for r in (2, 3):
                rep = adequacy(parallel(d, r))
                if base.skein_a_adequate:
                    assert rep.skein_a_adequate, (text, r)
                if base.skein_b_adequate:
                    assert rep.skein_b_adequate, (text, r)

    def test_crossingless_copies(self):
        unknot = parse_sld(UNKNOT)
        p = parallel(unknot, 3)
        assert p.n == 0 and sum(p.oloops.values()) == 3

    def test_invalid_count(self):
        with pytest.raises(DiagramError):
            parallel(parse_sld(KINK), 0)


# ---------------------------------------------------------------------------
# kinks
# ---------------------------------------------------------------------------


class TestAddKink:
    def test_positive_kink_on_unknot(self):
        unknot = parse_sld(UNKNOT)
        k = add_kink(unknot, 0, +1)
        assert k.writhe() == +1
        assert k.to_text().strip() == "X 1 1 2 2 over=odd"

    def test_negative_kink_on_unknot(self):
        unknot = parse_sld(UNKNOT)
        k = add_kink(unknot, 0, -1)
        assert k.writhe() == -1
        assert k.to_text().strip() == "X 1 1 2 2"

    def test_writhe_shift_and_jones_invariance(self):
        tref = parse_sld(TREFOIL)
        jt = jones(tref).terms
        for edge in range(6):
            for sign in (1, -1):
                k = add_kink(tref, edge, sign)
                assert k.n == 4
                assert k.writhe() == tref.writhe() + sign
                assert jones(k).terms == jt

    def test_on_surface_diagram(self):
        mer = parse_sld(MERIDIAN)
        jm = jones(mer).terms
        for edge in range(2):
            for sign in (1, -1):
                k = add_kink(mer, edge, sign)
                assert k.genus() == 1
                assert k.writhe() == mer.writhe() + sign
                assert jones(k).terms == jm

    def test_invalid_sign(self):
        with pytest.raises(DiagramError):
            add_kink(parse_sld(UNKNOT), 0, 2)


# ---------------------------------------------------------------------------
# second move and its inverse
# ---------------------------------------------------------------------------


class TestReidemeister2:
    def test_jones_invariance_all_sites(self):
        for text in (TREFOIL, MERIDIAN, KINK):
            d = parse_sld(text)
            jd = jones(d).terms
            for v in range(d.n):
                for c in range(4):
                    r = reidemeister2(d, (v, c))
                    assert r.n == d.n + 2
                    assert r.writhe() == d.writhe(), (text, v, c)
                    assert r.genus() == d.genus(), (text, v, c)
                    assert jones(r).terms == jd, (text, v, c)

    def test_round_trip_exact_serialization(self):
        for text in (TREFOIL, MERIDIAN, KINK):
            d = parse_sld(text)
            new_pair = {d.n, d.n + 1}
            for v in range(d.n):
                for c in range(4):
                    r = reidemeister2(d, (v, c))
                    back = reidemeister2_inverse(r, _find_bigon(r, new_pair))
                    assert back.to_text() == d.to_text(), (text, v, c)

    def test_clasp_bigons_rejected(self):
        tref = parse_sld(TREFOIL)
        bigons = [
            fi for fi, f in enumerate(tref.faces()) if len(f.corners) == 2
        ]
        assert bigons
        for fi in bigons:
            with pytest.raises(InvalidSiteError):
                reidemeister2_inverse(tref, fi)

    def test_invalid_sites(self):
        tref = parse_sld(TREFOIL)
        with pytest.raises(InvalidSiteError):
            reidemeister2(tref, (7, 0))
        with pytest.raises(InvalidSiteError):
            reidemeister2_inverse(tref, 99)
        with pytest.raises(InvalidSiteError):
            reidemeister2(parse_sld(UNKNOT), (0, 0))


# ---------------------------------------------------------------------------
# third move
# ---------------------------------------------------------------------------


class TestReidemeister3:
    def test_slide_preserves_invariants(self):
        mx = parse_sld(MIXED_TREFOIL)
        jm = jones(mx).terms
        sites = [
            fi for fi, f in enumerate(mx.faces()) if len(f.corners) == 3
        ]
        assert len(sites) == 2
        for fi in sites:
            r = reidemeister3(mx, fi)
            assert r.n == mx.n
            assert r.writhe() == mx.writhe()
            assert r.genus() == mx.genus()
            assert len(r.faces()) == len(mx.faces())
            assert jones(r).terms == jm
            assert r.to_text() != mx.to_text()

    def test_double_slide_round_trip(self):
        mx = parse_sld(MIXED_TREFOIL)
        fi = next(
            i for i, f in enumerate(mx.faces()) if len(f.corners) == 3
        )
        verts = {w for w, _ in mx.faces()[fi].corners}
        r = reidemeister3(mx, fi)
        restored = False
        for gi, g in enumerate(r.faces()):
            if len(g.corners) == 3 and {w for w, _ in g.corners} == verts:
                if reidemeister3(r, gi).to_text() == mx.to_text():
                    restored = True
                    break
        assert restored

    def test_cyclic_triangles_rejected(self):
        tref = parse_sld(TREFOIL)
        triangles = [
            fi for fi, f in enumerate(tref.faces()) if len(f.corners) == 3
        ]
        assert triangles
        for fi in triangles:
            with pytest.raises(InvalidSiteError):
                reidemeister3(tref, fi)

    def test_non_triangle_rejected(self):
        mx = parse_sld(MIXED_TREFOIL)
        fi = next(
            i for i, f in enumerate(mx.faces()) if len(f.corners) != 3
        )
        with pytest.raises(InvalidSiteError):
            reidemeister3(mx, fi)


# ---------------------------------------------------------------------------
# smoothing
# ---------------------------------------------------------------------------


class TestSmoothCrossing:
    def test_kink_smoothings(self):
        kink = parse_sld(KINK)
        wide = smooth_crossing(kink, 0, 0)
        assert wide.n == 0 and sum(wide.oloops.values()) == 2
        tight = smooth_crossing(kink, 0, 1)
        assert tight.n == 0 and sum(tight.oloops.values()) == 1

    def test_crossing_count_drops(self):
        tref = parse_sld(TREFOIL)
        for v in range(3):
            for choice in (0, 1):
                s = smooth_crossing(tref, v, choice)
                assert s.n == 2

    def test_strongly_prime_choice_exists(self):
        shadow = parse_sld("X 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3")
        assert is_strongly_prime(shadow)
        for v in range(3):
            kept = [
                is_strongly_prime(smooth_crossing(shadow, v, choice))
                for choice in (0, 1)
            ]
            assert any(kept), v

    def test_invalid_arguments(self):
        tref = parse_sld(TREFOIL)
        with pytest.raises(DiagramError):
            smooth_crossing(tref, 5, 0)
        with pytest.raises(DiagramError):
            smooth_crossing(tref, 0, 2)


# ---------------------------------------------------------------------------
# kink reduction
# ---------------------------------------------------------------------------


class TestReduceKinks:
    def test_kink_unknot_reduces_to_circle(self):
        assert reduce_kinks(parse_sld(KINK)).to_text().strip() == "O f0 1"

    def test_added_kinks_reduce_back_exactly(self):
        tref = parse_sld(TREFOIL)
        for edge in range(6):
            for sign in (1, -1):
                k = add_kink(tref, edge, sign)
                assert reduce_kinks(k).to_text() == tref.to_text()

    def test_surface_kink_keeps_genus_and_jones(self):
        neck = parse_sld(NECK_KINK)
        r = reduce_kinks(neck)
        assert r.n == 2
        assert r.genus() == 1
        assert is_reduced(r)
        assert jones(r).terms == jones(neck).terms

    def test_reduced_diagram_unchanged(self):
        tref = parse_sld(TREFOIL)
        assert reduce_kinks(tref).to_text() == tref.to_text()


# ---------------------------------------------------------------------------
# mirror
# ---------------------------------------------------------------------------


class TestMirror:
    def test_bracket_variable_inverted(self):
        for text in (TREFOIL, MERIDIAN, MIXED_TREFOIL):
            d = parse_sld(text)
            m = mirror(d)
            inverted = {
                key: poly_invert(p) for key, p in bracket(d).terms.items()
            }
            assert bracket(m).terms == inverted

    def test_extreme_states_trade_places(self):
        tref = parse_sld(TREFOIL)
        kink = parse_sld(KINK)
        for d in (tref, kink):
            a, b = adequacy(d), adequacy(mirror(d))
            assert b.plus_adequate == a.minus_adequate
            assert b.minus_adequate == a.plus_adequate
            assert b.homologically_a_adequate == a.homologically_b_adequate
            assert b.skein_a_adequate == a.skein_b_adequate

    def test_writhe_negates(self):
        tref = parse_sld(TREFOIL)
        assert mirror(tref).writhe() == -tref.writhe()

    def test_involution(self):
        tref = parse_sld(TREFOIL)
        assert mirror(mirror(tref)).to_text() == tref.to_text()


# ---------------------------------------------------------------------------
# random generation
# ---------------------------------------------------------------------------


class TestRandom:
    def test_deterministic_serialization(self):
        a = random_diagram(5, seed=7)
        b = random_diagram(5, seed=7)
        assert a.to_text() == b.to_text()
        assert a.crossing_component_count == 1

    def test_seeds_differ(self):
        assert random_diagram(5, seed=7).to_text() != random_diagram(5, seed=8).to_text()

    def test_genus_bias_full_rejects_spheres(self):
        for seed in range(4):
            assert random_diagram(4, genus_bias=1.0, seed=seed).genus() > 0

    def test_alternating_by_construction(self):
        for seed in range(6):
            d = random_alternating(6, seed=seed)
            assert d.is_alternating()
            assert d.n == 6
            assert d.crossing_component_count == 1

    def test_alternating_deterministic(self):
        a = random_alternating(6, seed=3)
        b = random_alternating(6, seed=3)
        assert a.to_text() == b.to_text()

    def test_alternating_reduced_is_skein_adequate(self):
        for seed in range(8):
            d = reduce_kinks(random_alternating(6, seed=seed))
            if d.n == 0:
                continue
            assert d.is_alternating()
            assert is_reduced(d)
            assert adequacy(d).skein_adequate, seed

    def test_ceiling_honoured(self):
        with pytest.raises(Exception):
            random_diagram(500, seed=0)

    def test_zero_crossings(self):
        d = random_diagram(0, seed=0)
        assert d.n == 0 and sum(d.oloops.values()) == 1
