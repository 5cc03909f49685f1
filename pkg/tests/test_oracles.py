"""Checks for the independent planar oracle itself.

These tests pin the oracle to values derived by hand before any code was
written.  Later test modules compare the main package against the oracle;
this file makes sure the oracle is anchored first.
"""

import oracle_trefoil as orc


def test_left_trefoil_loop_table():
    for state, expected in orc.LEFT_TREFOIL_LOOPS.items():
        assert orc.count_loops(orc.LEFT_TREFOIL, state) == expected


def test_left_trefoil_bracket():
    assert orc.bracket(orc.LEFT_TREFOIL) == orc.LEFT_TREFOIL_BRACKET


def test_left_trefoil_jones():
    assert orc.jones(orc.LEFT_TREFOIL, orc.LEFT_TREFOIL_WRITHE) == orc.LEFT_TREFOIL_JONES


def test_left_trefoil_jones_is_delta_times_classical():
    want = orc.poly_mul(orc.LEFT_TREFOIL_CLASSICAL, {2: -1, -2: -1})
    assert want == orc.LEFT_TREFOIL_JONES


def test_positive_kink():
    for state, expected in orc.POSITIVE_KINK_LOOPS.items():
        assert orc.count_loops(orc.POSITIVE_KINK, state) == expected
    assert orc.bracket(orc.POSITIVE_KINK) == orc.POSITIVE_KINK_BRACKET
    assert orc.jones(orc.POSITIVE_KINK, orc.POSITIVE_KINK_WRITHE) == orc.POSITIVE_KINK_JONES


def test_mirror_of_left_trefoil_is_right_trefoil():
    # Flipping every over-parity mirrors the diagram; the bracket must be
    # the left bracket with the variable inverted, and the writhe flips.
    crossings, parities = orc.LEFT_TREFOIL
    right = (crossings, tuple(p ^ 1 for p in parities))
    assert orc.bracket(right) == orc.poly_substitute_inverse(orc.LEFT_TREFOIL_BRACKET)
    assert orc.jones(right, 3) == orc.poly_substitute_inverse(orc.LEFT_TREFOIL_JONES)
