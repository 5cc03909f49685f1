"""Adequacy flags, nugatory crossings, cutting disks, and certificates."""

import pytest

from surfskein import (
    DiagramError,
    EnumerationLimitError,
    PreconditionError,
    UnsupportedEmbeddingError,
    adequacy,
    cutting_disks,
    is_reduced,
    is_strongly_prime,
    nugatory_crossings,
    parse_sld,
    weakly_alternating_certificate,
)

TREFOIL = """
X 1 4 2 5 over=odd
X 3 6 4 1 over=odd
X 5 2 6 3 over=odd
"""

# same shadow, one parity flipped: no longer alternating
MIXED_TREFOIL = """
X 1 4 2 5 over=odd
X 3 6 4 1 over=odd
X 5 2 6 3 over=even
"""

KINK = "X 1 1 2 2 over=odd\n"
MERIDIAN = "X 1 2 1 2 over=odd\n"

TREFOIL_SHADOW = """
X 1 4 2 5
X 3 6 4 1
X 5 2 6 3
"""

# two trefoil shadows spliced along one edge of each
GRANNY_SHADOW = """
X 7 4 2 5
X 3 6 4 1
X 5 2 6 3
X 1 10 8 11
X 9 12 10 7
X 11 8 12 9
"""

# genus-2 cellular diagram: crossing 1 carries a separating loop with a
# handle on each side, crossing 3 is a kink
ESSENTIAL_NUGATORY = """
X 1 2 1 3
X 2 3 4 5
X 4 6 5 7
X 6 8 8 7
"""

# two handle crossings joined through a kinked neck, genus 1
NECK_KINK = """
X 1 2 1 4
X 3 4 3 5
X 2 6 6 5
"""

TUBED_TREFOIL = TREFOIL + "tube f0 f2\n"

ADEQUACY_POOL = [
    TREFOIL,
    MIXED_TREFOIL,
    KINK,
    MERIDIAN,
    TREFOIL_SHADOW,
    GRANNY_SHADOW,
    ESSENTIAL_NUGATORY,
    NECK_KINK,
    TUBED_TREFOIL,
]


# ---------------------------------------------------------------------------
# adequacy flags
# ---------------------------------------------------------------------------


def test_trefoil_adequate_in_every_sense():
    rep = adequacy(parse_sld(TREFOIL))
    assert rep.plus_adequate and rep.minus_adequate
    assert rep.homologically_a_adequate and rep.homologically_b_adequate
    assert rep.skein_a_adequate and rep.skein_b_adequate
    assert rep.simply_adequate
    assert rep.homologically_adequate
    assert rep.skein_adequate
    assert rep.adequate
    assert rep.witnesses == {}


def test_kink_adequate_on_one_side_only():
    rep = adequacy(parse_sld(KINK))
    assert rep.plus_adequate
    assert rep.homologically_a_adequate
    assert rep.skein_a_adequate
    assert not rep.minus_adequate
    assert not rep.homologically_b_adequate
    assert not rep.skein_b_adequate
    assert not rep.simply_adequate
    assert not rep.adequate
    assert set(rep.witnesses) == {"minus", "homological_b", "skein_b"}
    # the single adjacent state of the all-second-smoothing state
    assert rep.witnesses["minus"] == {0: 0}


def test_meridian_adequate_but_not_simply():
    rep = adequacy(parse_sld(MERIDIAN))
    assert not rep.plus_adequate
    assert not rep.minus_adequate
    assert rep.homologically_adequate
    assert rep.skein_adequate
    assert set(rep.witnesses) == {"plus", "minus"}


def test_adequacy_chain_over_pool():
    for text in ADEQUACY_POOL:
        rep = adequacy(parse_sld(text))
        if rep.plus_adequate:
            assert rep.homologically_a_adequate, text
        if rep.homologically_a_adequate:
            assert rep.skein_a_adequate, text
        if rep.minus_adequate:
            assert rep.homologically_b_adequate, text
        if rep.homologically_b_adequate:
            assert rep.skein_b_adequate, text


def test_witness_states_are_adjacent_to_the_extremes():
    for text in ADEQUACY_POOL:
        d = parse_sld(text)
        rep = adequacy(d)
        full = (1 << d.n) - 1
        for notion, hits in rep.witnesses.items():
            extreme = 0 if notion in ("plus", "homological_a", "skein_a") else full
            for v, state in hits.items():
                assert state ^ extreme == 1 << v


def test_adequacy_report_json_and_render():
    rep = adequacy(parse_sld(KINK))
    blob = rep.to_json()
    assert blob["skein_adequate"] is False
    assert blob["simply_adequate"] is False
    assert blob["witnesses"]["minus"] == {"0": "0"}
    text = rep.render()
    assert "violation minus at crossing 0: state 0" in text
    clean = adequacy(parse_sld(TREFOIL)).to_json()
    assert clean["witnesses"] == {}


def test_adequacy_without_crossings_is_vacuous():
    rep = adequacy(parse_sld("O f0 1\n"))
    assert rep.adequate and rep.simply_adequate and rep.homologically_adequate
    assert rep.witnesses == {}


# ---------------------------------------------------------------------------
# nugatory crossings
# ---------------------------------------------------------------------------


def test_kink_crossing_is_removable_nugatory():
    assert nugatory_crossings(parse_sld(KINK)) == [(0, "removable")]
    assert not is_reduced(parse_sld(KINK))


def test_trefoil_has_no_nugatory_crossing():
    assert nugatory_crossings(parse_sld(TREFOIL)) == []
    assert is_reduced(parse_sld(TREFOIL))


def test_meridian_has_no_nugatory_crossing():
    # the loop through the crossing does not separate the torus
    assert nugatory_crossings(parse_sld(MERIDIAN)) == []
    assert is_reduced(parse_sld(MERIDIAN))


def test_essential_nugatory_crossing_on_genus_two():
    d = parse_sld(ESSENTIAL_NUGATORY)
    assert d.genus() == 2 and d.is_cellular()
    assert nugatory_crossings(d) == [(1, "essential"), (3, "removable")]
    assert not is_reduced(d)


def test_neck_kink_is_removable():
    d = parse_sld(NECK_KINK)
    assert d.genus() == 1 and d.is_cellular()
    assert nugatory_crossings(d) == [(2, "removable")]
    assert not is_reduced(d)


def test_nugatory_needs_cellular_embedding():
    with pytest.raises(UnsupportedEmbeddingError):
        nugatory_crossings(parse_sld(TUBED_TREFOIL))


# ---------------------------------------------------------------------------
# cutting disks
# ---------------------------------------------------------------------------


def test_trefoil_shadow_is_strongly_prime():
    assert cutting_disks(parse_sld(TREFOIL_SHADOW)) == []
    assert is_strongly_prime(parse_sld(TREFOIL_SHADOW))


def test_granny_shadow_splits_into_trefoil_summands():
    disks = cutting_disks(parse_sld(GRANNY_SHADOW))
    assert not is_strongly_prime(parse_sld(GRANNY_SHADOW))
    assert {disk.disk_crossings for disk in disks} == {(0, 1, 2), (3, 4, 5)}
    for disk in disks:
        assert disk.edges == (0, 6)


def test_one_crossing_shadows_are_strongly_prime():
    assert is_strongly_prime(parse_sld("X 1 1 2 2\n"))
    assert is_strongly_prime(parse_sld("X 1 2 1 2\n"))


def test_tube_can_spoil_one_disk_side():
    d = parse_sld(GRANNY_SHADOW + "tube f1 f2\n")
    disks = cutting_disks(d)
    assert len(disks) == 1
    assert disks[0].disk_crossings == (3, 4, 5)


def test_cutting_disks_need_a_connected_shadow():
    two = TREFOIL_SHADOW + """
X 7 10 8 11
X 9 12 10 7
X 11 8 12 9
"""
    with pytest.raises(DiagramError):
        cutting_disks(parse_sld(two))


def test_cutting_disks_respect_the_scan_ceiling(monkeypatch):
    monkeypatch.delenv("SKEIN_MAX_STATES", raising=False)
    lines = []
    for i in range(13):
        a, b = 2 * i + 1, 2 * i + 2
        c, d = 2 * ((i + 1) % 13) + 1, 2 * ((i + 1) % 13) + 2
        lines.append("X %d %d %d %d" % (a, b, c, d))
    chain = "\n".join(lines) + "\n"
    with pytest.raises(EnumerationLimitError):
        cutting_disks(parse_sld(chain))


# ---------------------------------------------------------------------------
# weakly alternating certificate
# ---------------------------------------------------------------------------


def test_trefoil_certifies_weakly_alternating():
    cert = weakly_alternating_certificate(parse_sld(TREFOIL))
    assert cert.verdict == "weakly_alternating"
    assert cert.alternating
    assert cert.span_formula == 16 and cert.span_target == 16


def test_meridian_certifies_not_weakly_alternating():
    cert = weakly_alternating_certificate(parse_sld(MERIDIAN))
    assert cert.verdict == "not_weakly_alternating"
    assert not cert.alternating
    assert cert.span_formula == 2 and cert.span_target == 4
    assert cert.skein_adequate is True
    assert cert.span_level2 == 2
    assert "exact span" in cert.note


def test_mixed_trefoil_certifies_not_weakly_alternating():
    cert = weakly_alternating_certificate(parse_sld(MIXED_TREFOIL))
    assert cert.verdict == "not_weakly_alternating"
    assert cert.span_formula == 12 and cert.span_target == 16


def test_certificate_preconditions():
    with pytest.raises(PreconditionError):
        weakly_alternating_certificate(parse_sld(KINK))
    with pytest.raises(PreconditionError):
        weakly_alternating_certificate(parse_sld(TUBED_TREFOIL))


def test_certificate_json_and_render():
    cert = weakly_alternating_certificate(parse_sld(MERIDIAN))
    blob = cert.to_json()
    assert blob["verdict"] == "not_weakly_alternating"
    assert blob["span_formula"] == 2 and blob["span_target"] == 4
    assert "verdict:        not_weakly_alternating" in cert.render()
