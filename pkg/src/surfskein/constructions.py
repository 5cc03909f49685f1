"""Operations that build new surface link diagrams from old ones.

This module complements the read-only analyses in :mod:`surfskein.diagram`,
:mod:`surfskein.states`, :mod:`surfskein.invariants` and
:mod:`surfskein.adequacy` with diagram *constructors*:

* ``connected_sum`` joins two diagrams along chosen edges, producing a
  diagram on the connected sum of the two surfaces,
* ``parallel`` replaces every strand by ``r`` parallel copies (blackboard
  framed cabling),
* ``add_kink`` inserts a one-crossing curl of prescribed sign into an edge,
* ``reidemeister2`` pushes one strand over an adjacent one across a face
  corner, creating two cancelling crossings,
* ``reidemeister3`` slides a strand across a triangular face,
* ``smooth_crossing`` replaces one crossing by one of its two smoothings,
* ``mirror`` swaps the over/under role at every crossing,
* ``random_diagram`` and ``random_alternating`` sample diagrams
  deterministically from a seed.

All operations return new ``Diagram`` objects; inputs are never mutated.
Strand orientations are carried along whenever the operation preserves
them, so writhe-sensitive quantities of the result are meaningful.

Conventions used throughout: darts are ``4 * vertex + slot`` with slots
numbered counterclockwise, and the face to the left of a dart is the face
containing the corner between that dart's slot and the next slot
counterclockwise.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple

from .diagram import (
    Diagram,
    DiagramError,
    dart,
    dart_slot,
    dart_vertex,
)
from .states import check_state_sum_size

__all__ = [
    "CutPoint",
    "InvalidSiteError",
    "OrientationMismatchError",
    "RetryExhaustedError",
    "add_kink",
    "connected_sum",
    "cut_point",
    "mirror",
    "parallel",
    "random_alternating",
    "random_diagram",
    "reduce_kinks",
    "reidemeister2",
    "reidemeister2_inverse",
    "reidemeister3",
    "smooth_crossing",
]


class OrientationMismatchError(DiagramError):
    """Raised when a gluing would force a strand to reverse direction."""


class InvalidSiteError(DiagramError):
    """Raised when a move is requested at a site lacking the local pattern."""


class RetryExhaustedError(DiagramError):
    """Raised when rejection sampling fails to find an admissible diagram."""


_MAX_SAMPLING_ATTEMPTS = 4096


# ---------------------------------------------------------------------------
# cut points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CutPoint:
    """A marked edge of a diagram, used as a gluing site.

    ``component`` is the strand component carrying the edge, ``edge`` the
    edge index, and ``flip`` selects which of the two ways of matching the
    edge's sides is used when gluing.  Flipping both cut points of a
    connected sum yields the same result as flipping neither.
    """

    component: int
    edge: int
    flip: bool = False


def cut_point(diagram: Diagram, edge: int, flip: bool = False) -> CutPoint:
    """Build a ``CutPoint`` for ``edge``, deriving its strand component."""
    if diagram.n == 0:
        if edge != 0:
            raise DiagramError(
                "a crossingless diagram has a single gluing site, edge 0"
            )
        return CutPoint(0, 0, flip)
    if not 0 <= edge < len(diagram.edges):
        raise DiagramError(f"edge index {edge} out of range")
    component = diagram._strand_of_dart[diagram.edges[edge][0]]
    return CutPoint(component, edge, flip)


def _validate_cut_point(diagram: Diagram, point: CutPoint) -> None:
    if diagram.n == 0:
        if point.edge != 0 or point.component != 0:
            raise DiagramError(
                "a crossingless diagram has a single gluing site, edge 0"
            )
        return
    if not 0 <= point.edge < len(diagram.edges):
        raise DiagramError(f"edge index {point.edge} out of range")
    comp = diagram._strand_of_dart[diagram.edges[point.edge][0]]
    if comp != point.component:
        raise DiagramError(
            f"edge {point.edge} lies on component {comp}, "
            f"not component {point.component}"
        )


# ---------------------------------------------------------------------------
# orientation bookkeeping
# ---------------------------------------------------------------------------


def _orients_from_desired(diagram: Diagram, desired: Set[int]) -> Dict[int, int]:
    """Orient overrides making each dart in ``desired`` an arrival.

    ``desired`` must be flow-consistent per strand (any two desired darts
    on one strand induce the same direction); each strand keeps its
    default direction when no desired dart lies on it.
    """
    orients: Dict[int, int] = {}
    for idx, orbit in enumerate(diagram.strand_components()):
        for x in orbit:
            back = diagram.alpha[x]
            if x in desired:
                orients[idx] = back
                break
            if back in desired:
                orients[idx] = x
                break
    return orients


def _arrival_end(diagram: Diagram, edge_index: int) -> int:
    """The dart end of ``edge_index`` that its strand flows toward."""
    x, y = diagram.edges[edge_index]
    return y if y in diagram.oriented_arrivals else x


# ---------------------------------------------------------------------------
# connected sum
# ---------------------------------------------------------------------------


def _single_unknot_or_raise(diagram: Diagram) -> None:
    if diagram.tubes:
        raise DiagramError(
            "connected sum with a crossingless summand supports only a "
            "plain one-circle diagram, not one carrying tubes"
        )
    if sum(diagram.oloops.values()) != 1:
        raise DiagramError(
            "connected sum with a crossingless summand supports only a "
            "single-circle diagram"
        )


def connected_sum(
    d1: Diagram,
    p1: CutPoint,
    d2: Diagram,
    p2: CutPoint,
) -> Diagram:
    """Join ``d1`` and ``d2`` along the edges marked by the cut points.

    Each marked edge is cut and the four loose ends are rejoined across
    the neck, so crossing counts add, link component counts add minus
    one, and the genus of the supporting surface is the sum of the two
    genera.  ``flip`` on either cut point swaps which pair of loose ends
    is matched; when the strand directions disagree across the neck an
    ``OrientationMismatchError`` suggests flipping one side.

    A crossingless summand must be a single circle, and acts as the
    identity: the result is the other diagram unchanged.
    """
    _validate_cut_point(d1, p1)
    _validate_cut_point(d2, p2)

    if d2.n == 0:
        _single_unknot_or_raise(d2)
        return Diagram(d1.over_parities, d1.alpha, d1.oloops, d1.tubes,
                       dict(d1._orient_overrides))
    if d1.n == 0:
        _single_unknot_or_raise(d1)
        return Diagram(d2.over_parities, d2.alpha, d2.oloops, d2.tubes,
                       dict(d2._orient_overrides))

    n1 = d1.n
    shift = 4 * n1
    a1, a2 = d1.edges[p1.edge]
    b1, b2 = (x + shift for x in d2.edges[p2.edge])
    alpha = list(d1.alpha) + [x + shift for x in d2.alpha]
    if p1.flip ^ p2.flip:
        pairs = ((a1, b1), (a2, b2))
    else:
        pairs = ((a1, b2), (a2, b1))

    arrivals1 = d1.oriented_arrivals
    arrivals2 = d2.oriented_arrivals

    def was_arrival(x: int) -> bool:
        if x < shift:
            return x in arrivals1
        return (x - shift) in arrivals2

    for x, y in pairs:
        if was_arrival(x) == was_arrival(y):
            raise OrientationMismatchError(
                "strand directions disagree across the neck; flip one "
                "cut point's side flag to glue head to tail"
            )
        alpha[x] = y
        alpha[y] = x

    parities = d1.over_parities + d2.over_parities
    probe = Diagram(parities, alpha)

    def remap1(face_index: int) -> int:
        w, c = d1.faces()[face_index].corners[0]
        return probe.face_at_corner(w, c)

    def remap2(face_index: int) -> int:
        w, c = d2.faces()[face_index].corners[0]
        return probe.face_at_corner(w + n1, c)

    oloops: Dict[int, int] = {}
    for f, k in d1.oloops.items():
        g = remap1(f)
        oloops[g] = oloops.get(g, 0) + k
    for f, k in d2.oloops.items():
        g = remap2(f)
        oloops[g] = oloops.get(g, 0) + k
    tubes: List[Tuple[int, int]] = [
        (remap1(x), remap1(y)) for x, y in d1.tubes
    ] + [(remap2(x), remap2(y)) for x, y in d2.tubes]

    # Cutting both edges open and rejoining across the neck can only merge
    # faces, never split them, so the natural rotation-system surface has
    # Euler characteristic equal to the target or exceeding it by two.  The
    # excess happens exactly when the regluing caps off the neck annulus
    # (both cut edges bounded the same face on both sides); restoring the
    # annulus costs one tube between the faces flanking a neck edge.
    target = d1.euler_characteristic() + d2.euler_characteristic() - 2
    surfaced = Diagram(parities, alpha, oloops, tubes)
    got = surfaced.euler_characteristic()
    if got == target + 2:
        tubes.append(
            (surfaced.face_left_of(pairs[0][0]),
             surfaced.face_right_of(pairs[0][0]))
        )
        surfaced = Diagram(parities, alpha, oloops, tubes)
        got = surfaced.euler_characteristic()
    if got != target:
        raise DiagramError(
            "internal error: connected sum produced Euler characteristic "
            f"{got}, expected {target}"
        )

    neck = {a1, a2, b1, b2}
    desired: Set[int] = set()
    for x in range(len(alpha)):
        if x not in neck and was_arrival(x):
            desired.add(x)
    # Strands made entirely of neck edges carry no surviving arrival dart;
    # orient them by the direction of flow through the neck instead.
    for x, y in pairs:
        desired.add(y if was_arrival(x) else x)
    orients = _orients_from_desired(surfaced, desired)
    return Diagram(parities, alpha, oloops, tubes, orients)


# ---------------------------------------------------------------------------
# parallel copies
# ---------------------------------------------------------------------------


def parallel(diagram: Diagram, r: int) -> Diagram:
    """Replace every strand by ``r`` parallel copies in the surface.

    Each crossing becomes an ``r`` x ``r`` grid of crossings of the same
    handedness, and each edge becomes ``r`` parallel edges; free circles
    are copied ``r`` times.  ``r = 1`` returns an equal diagram.  The
    crossing count scales by ``r`` squared, and so does the writhe.
    """
    if r < 1:
        raise DiagramError("parallel copy count must be at least 1")
    n = diagram.n
    if r == 1:
        return Diagram(diagram.over_parities, diagram.alpha, diagram.oloops,
                       diagram.tubes, dict(diagram._orient_overrides))
    if n == 0:
        oloops = {f: k * r for f, k in diagram.oloops.items()}
        return Diagram((), (), oloops, diagram.tubes)

    def gcross(v: int, i: int, j: int) -> int:
        return r * r * v + r * i + j

    def side_dart(v: int, s: int, kappa: int) -> int:
        # Counterclockwise enumeration of the r boundary darts of the
        # grid replacing crossing v that face the old slot s.
        if s == 0:
            return dart(gcross(v, r - 1 - kappa, 0), 0)
        if s == 1:
            return dart(gcross(v, 0, kappa), 1)
        if s == 2:
            return dart(gcross(v, kappa, r - 1), 2)
        return dart(gcross(v, r - 1, r - 1 - kappa), 3)

    alpha = [-1] * (4 * r * r * n)

    def join(x: int, y: int) -> None:
        alpha[x] = y
        alpha[y] = x

    for v in range(n):
        for i in range(r):
            for j in range(r - 1):
                join(dart(gcross(v, i, j), 2), dart(gcross(v, i, j + 1), 0))
        for i in range(r - 1):
            for j in range(r):
                join(dart(gcross(v, i, j), 3), dart(gcross(v, i + 1, j), 1))
    for x, y in diagram.edges:
        vx, sx = dart_vertex(x), dart_slot(x)
        vy, sy = dart_vertex(y), dart_slot(y)
        for kappa in range(r):
            join(side_dart(vx, sx, kappa), side_dart(vy, sy, r - 1 - kappa))

    parities = tuple(
        diagram.over_parities[g // (r * r)] for g in range(r * r * n)
    )
    probe = Diagram(parities, alpha)

    # The four corners of old crossing v survive at the outer corners of
    # its grid; faces of the old diagram never split, so any corner
    # representative locates the corresponding new face.
    corner_i = (0, 0, r - 1, r - 1)
    corner_j = (0, r - 1, r - 1, 0)

    def remap(face_index: int) -> int:
        w, c = diagram.faces()[face_index].corners[0]
        return probe.face_at_corner(gcross(w, corner_i[c], corner_j[c]), c)

    oloops = {}
    for f, k in diagram.oloops.items():
        g = remap(f)
        oloops[g] = oloops.get(g, 0) + k * r
    tubes = [(remap(x), remap(y)) for x, y in diagram.tubes]

    desired: Set[int] = set()
    for e in range(len(diagram.edges)):
        end = _arrival_end(diagram, e)
        v, s = dart_vertex(end), dart_slot(end)
        for kappa in range(r):
            desired.add(side_dart(v, s, kappa))
    surfaced = Diagram(parities, alpha, oloops, tubes)
    orients = _orients_from_desired(surfaced, desired)
    return Diagram(parities, alpha, oloops, tubes, orients)


# ---------------------------------------------------------------------------
# curls
# ---------------------------------------------------------------------------


def add_kink(diagram: Diagram, edge: int, sign: int) -> Diagram:
    """Insert a one-crossing curl of the given sign into ``edge``.

    The new crossing contributes ``sign`` (+1 or -1) to the writhe and
    leaves every other crossing untouched.  On a crossingless one-circle
    diagram the result is the standard one-crossing curl diagram, with
    ``edge`` ignored (pass 0).
    """
    if sign not in (1, -1):
        raise DiagramError("kink sign must be +1 or -1")
    n = diagram.n
    if n == 0:
        _single_unknot_or_raise(diagram)
        if edge != 0:
            raise DiagramError(
                "a crossingless diagram has a single gluing site, edge 0"
            )
        parity = 1 if sign == 1 else 0
        return Diagram((parity,), (1, 0, 3, 2))
    if not 0 <= edge < len(diagram.edges):
        raise DiagramError(f"edge index {edge} out of range")

    k = n
    a, b = diagram.edges[edge]
    alpha = list(diagram.alpha) + [-1] * 4

    def join(x: int, y: int) -> None:
        alpha[x] = y
        alpha[y] = x

    join(a, dart(k, 0))
    join(dart(k, 3), b)
    join(dart(k, 1), dart(k, 2))

    # Orientation-independent sign: try one over/under assignment at the
    # curl and flip it if the curl's contribution comes out wrong.
    parity = 1
    probe = Diagram(diagram.over_parities + (parity,), alpha)
    if probe.crossing_sign(k) != sign:
        parity = 0
        probe = Diagram(diagram.over_parities + (parity,), alpha)
        if probe.crossing_sign(k) != sign:
            raise DiagramError("internal error: curl sign not realizable")
    parities = diagram.over_parities + (parity,)

    def remap(face_index: int) -> int:
        w, c = diagram.faces()[face_index].corners[0]
        return probe.face_at_corner(w, c)

    oloops = {}
    for f, count in diagram.oloops.items():
        g = remap(f)
        oloops[g] = oloops.get(g, 0) + count
    tubes = [(remap(x), remap(y)) for x, y in diagram.tubes]

    old_arrival = _arrival_end(diagram, edge)
    desired: Set[int] = set()
    for x in diagram.oriented_arrivals:
        if x not in (a, b):
            desired.add(x)
    # The split halves of the old edge inherit its direction; this also
    # covers strands whose only edge was the one being curled.
    if old_arrival == b:
        desired.update((dart(k, 0), b))
    else:
        desired.update((a, dart(k, 3)))
    surfaced = Diagram(parities, alpha, oloops, tubes)
    orients = _orients_from_desired(surfaced, desired)
    return Diagram(parities, alpha, oloops, tubes, orients)


# ---------------------------------------------------------------------------
# second move: push one strand across another
# ---------------------------------------------------------------------------


def reidemeister2(diagram: Diagram, site: Tuple[int, int]) -> Diagram:
    """Push a strand across the one beside it at a face corner.

    ``site`` is a pair ``(vertex, corner)``.  The strand leaving the
    vertex along slot ``corner`` is pushed over the strand leaving along
    slot ``corner + 1``, crossing it twice; the two new crossings cancel,
    so every invariant of the underlying link is unchanged while the
    crossing count grows by two.  The pushed strand passes over at both
    new crossings.
    """
    n = diagram.n
    if n == 0:
        raise InvalidSiteError("a crossingless diagram has no face corners")
    try:
        v, c = site
    except (TypeError, ValueError):
        raise InvalidSiteError("site must be a (vertex, corner) pair")
    if not (0 <= v < n and 0 <= c < 4):
        raise InvalidSiteError(f"no corner {site} in this diagram")

    e1v = dart(v, c)
    e2v = dart(v, (c + 1) & 3)
    u1 = diagram.alpha[e1v]
    u2 = diagram.alpha[e2v]
    x1, x2 = n, n + 1
    alpha = list(diagram.alpha) + [-1] * 8

    def join(x: int, y: int) -> None:
        alpha[x] = y
        alpha[y] = x

    # The pushed strand runs through slots 1 and 3 of both new
    # crossings, the crossed strand through slots 0 and 2.  Slot layout
    # comes from the plane picture of the finger: counterclockwise at
    # the near crossing reads crossed-tail, pushed-tail, middle, arc,
    # and at the far crossing middle, pushed-far, crossed-far, arc.
    join(e1v, dart(x1, 3))
    join(e2v, dart(x1, 2))
    join(dart(x1, 0), dart(x2, 0))
    join(dart(x1, 1), dart(x2, 3))
    if u1 == e2v:
        # The corner's two edge ends belong to one and the same edge, so
        # the far sides of the new crossings connect to each other.
        join(dart(x2, 1), dart(x2, 2))
    else:
        join(dart(x2, 1), u1)
        join(dart(x2, 2), u2)

    parities = diagram.over_parities + (1, 1)
    probe = Diagram(parities, alpha)

    def remap(face_index: int) -> int:
        w, cc = diagram.faces()[face_index].corners[0]
        return probe.face_at_corner(w, cc)

    oloops = {}
    for f, count in diagram.oloops.items():
        g = remap(f)
        oloops[g] = oloops.get(g, 0) + count
    tubes = [(remap(x), remap(y)) for x, y in diagram.tubes]

    touched = {e1v, e2v, u1, u2}
    desired: Set[int] = set()
    for x in diagram.oriented_arrivals:
        if x not in touched:
            desired.add(x)
    if u1 == e2v:
        # The corner's single self-edge splits into five pieces; the old
        # flow threads them as tail, inner arc, loopback, crossed-strand
        # middle, other tail.
        if e2v in diagram.oriented_arrivals:
            desired.update(
                (dart(x1, 3), dart(x2, 3), dart(x2, 2), dart(x1, 0), e2v)
            )
        else:
            desired.update(
                (dart(x1, 2), dart(x2, 0), dart(x2, 1), dart(x1, 1), e1v)
            )
    else:
        # The pushed strand's pieces, far end to vertex, then the
        # crossed strand's pieces, far end to vertex; each chain keeps
        # the old edge's direction.
        if e1v in diagram.oriented_arrivals:
            desired.update((dart(x2, 1), dart(x1, 1), e1v))
        else:
            desired.update((dart(x1, 3), dart(x2, 3), u1))
        if e2v in diagram.oriented_arrivals:
            desired.update((dart(x2, 2), dart(x1, 0), e2v))
        else:
            desired.update((dart(x1, 2), dart(x2, 0), u2))
    surfaced = Diagram(parities, alpha, oloops, tubes)
    orients = _orients_from_desired(surfaced, desired)
    return Diagram(parities, alpha, oloops, tubes, orients)


# ---------------------------------------------------------------------------
# second move, inverse: cancel a bigon pair
# ---------------------------------------------------------------------------


def reidemeister2_inverse(diagram: Diagram, site: int) -> Diagram:
    """Cancel the crossing pair around the bigon face with index ``site``.

    The face must have exactly two corners at two distinct crossings
    joined by two distinct edges, and one strand must pass over the
    other at both crossings; a bigon where the strands alternate (a
    clasp) admits no cancellation and raises ``InvalidSiteError``.
    Undoes ``reidemeister2`` exactly: applying the move at a corner and
    cancelling the resulting bigon returns the original serialization.
    """
    faces = diagram.faces()
    if not 0 <= site < len(faces):
        raise InvalidSiteError(f"no face {site} in this diagram")
    face = faces[site]
    if len(face.corners) != 2:
        raise InvalidSiteError(
            f"face {site} has {len(face.corners)} corners, not 2"
        )
    (w1, c1), (w2, c2) = face.corners
    if w1 == w2:
        raise InvalidSiteError(
            f"face {site} touches one crossing twice; cancellation needs "
            "two distinct crossings"
        )
    if diagram.edge_index[face.darts[0]] == diagram.edge_index[face.darts[1]]:
        raise InvalidSiteError(
            f"face {site} is bounded by a single edge; cancellation needs "
            "two distinct edges"
        )
    # The strand entering along the first bigon edge sits at slot c1 of
    # w1 and slot c2 + 1 of w2; it must be the over strand at both
    # crossings or the under strand at both.
    over_first = (c1 & 1) == (diagram.over_parities[w1] & 1)
    over_second = ((c2 + 1) & 1) == (diagram.over_parities[w2] & 1)
    if over_first != over_second:
        raise InvalidSiteError(
            "the two strands alternate at this bigon (a clasp); only a "
            "bigon where one strand stays on top cancels"
        )

    removed = (w1, w2)

    def mu(x: int) -> int:
        w = dart_vertex(x)
        return dart(w - sum(1 for r in removed if r < w), dart_slot(x))

    def is_removed(x: int) -> bool:
        return dart_vertex(x) in removed

    n = diagram.n
    alpha = [-1] * (4 * (n - 2))
    used: Set[int] = set()
    for x in range(4 * n):
        if is_removed(x) or alpha[mu(x)] >= 0:
            continue
        y = diagram.alpha[x]
        while is_removed(y):
            used.add(y)
            through = dart(dart_vertex(y), (dart_slot(y) + 2) & 3)
            used.add(through)
            y = diagram.alpha[through]
        alpha[mu(x)] = mu(y)
        alpha[mu(y)] = mu(x)

    # Strand material connected only to the two cancelled crossings
    # closes up into free circles.
    circle_faces: List[List[int]] = []
    for start in range(4 * n):
        if not is_removed(start) or start in used:
            continue
        candidates: List[int] = []
        z = start
        while True:
            used.add(z)
            through = dart(dart_vertex(z), (dart_slot(z) + 2) & 3)
            used.add(through)
            candidates.append(diagram.face_left_of(through))
            candidates.append(diagram.face_right_of(through))
            z = diagram.alpha[through]
            if not is_removed(z):
                raise DiagramError("internal error: cancellation walk escaped")
            if z == start:
                break
        circle_faces.append(candidates)

    parities = tuple(
        p for w, p in enumerate(diagram.over_parities) if w not in removed
    )
    probe = Diagram(parities, alpha)

    def locate(face_index: int) -> Optional[int]:
        old = faces[face_index]
        for w, cc in old.corners:
            if w not in removed:
                return probe.face_at_corner(dart_vertex(mu(dart(w, 0))), cc)
        for d in old.darts:
            if is_removed(d) and is_removed(diagram.alpha[d]):
                neighbour = faces[diagram.face_right_of(d)]
                for w, cc in neighbour.corners:
                    if w not in removed:
                        return probe.face_at_corner(
                            dart_vertex(mu(dart(w, 0))), cc
                        )
        return None

    def remap(face_index: int) -> int:
        g = locate(face_index)
        if g is not None:
            return g
        if probe.n == 0:
            return 0
        raise DiagramError(
            "cancellation would strand marked surface features in a face "
            "with no surviving corner"
        )

    oloops: Dict[int, int] = {}
    for f, count in diagram.oloops.items():
        g = remap(f)
        oloops[g] = oloops.get(g, 0) + count
    for candidates in circle_faces:
        g = None
        for f in candidates:
            g = locate(f)
            if g is not None:
                break
        if g is None:
            if probe.n > 0:
                raise DiagramError(
                    "cancellation would detach a crossingless piece with "
                    "no identifiable containing face"
                )
            g = 0
        oloops[g] = oloops.get(g, 0) + 1
    tubes = [(remap(x), remap(y)) for x, y in diagram.tubes]

    # Exactly one end of each rejoined chain was an arrival, and it
    # stays one; unchanged edges keep their arrival ends as well.
    desired: Set[int] = set()
    for x in diagram.oriented_arrivals:
        if not is_removed(x):
            desired.add(mu(x))
    surfaced = Diagram(parities, alpha, oloops, tubes)
    orients = _orients_from_desired(surfaced, desired)
    return Diagram(parities, alpha, oloops, tubes, orients)


# ---------------------------------------------------------------------------
# removable curls
# ---------------------------------------------------------------------------


def reduce_kinks(diagram: Diagram) -> Diagram:
    """Untwist removable curls until no crossing is removable.

    Each pass finds a crossing whose opposite corners share a face with
    one side bounding a disk, and replaces it by the smoothing that
    merges those two corner sectors; this undoes the curl without
    changing the underlying link or the surface.  Crossings whose curl
    loop is essential in the surface are left alone.
    """
    from .adequacy import _classify_nugatory_loop, nugatory_crossings

    current = diagram
    while True:
        found = None
        for v, kind in nugatory_crossings(current):
            if kind != "removable":
                continue
            for corner in (0, 1):
                pair_ok = (
                    current.face_at_corner(v, corner)
                    == current.face_at_corner(v, (corner + 2) & 3)
                )
                if not pair_ok:
                    continue
                if _classify_nugatory_loop(current, v, corner) == "removable":
                    found = (v, corner)
                    break
            if found:
                break
        if found is None:
            return current
        v, corner = found
        merges_shared_corners = (corner & 1) ^ 1
        choice = (current.over_parities[v] ^ merges_shared_corners) & 1
        current = smooth_crossing(current, v, choice)


# ---------------------------------------------------------------------------
# third move: slide a strand across a triangle
# ---------------------------------------------------------------------------


def reidemeister3(diagram: Diagram, site: int) -> Diagram:
    """Slide a strand across the triangular face with index ``site``.

    The face must have exactly three corners at three distinct crossings
    joined by three distinct edges, and the three strands bounding it
    must stack acyclically there (one passes over both others at the
    triangle, one under both); a triangle whose strands stack cyclically
    admits no such slide and raises ``InvalidSiteError``.  All crossing
    signs and the underlying link are unchanged.
    """
    faces = diagram.faces()
    if not 0 <= site < len(faces):
        raise InvalidSiteError(f"no face {site} in this diagram")
    face = faces[site]
    if len(face.corners) != 3:
        raise InvalidSiteError(
            f"face {site} has {len(face.corners)} corners, not 3"
        )
    verts = [w for w, _ in face.corners]
    if len(set(verts)) != 3:
        raise InvalidSiteError(
            f"face {site} visits a crossing twice; the slide needs three "
            "distinct crossings"
        )
    edge_ids = [diagram.edge_index[d] for d in face.darts]
    if len(set(edge_ids)) != 3:
        raise InvalidSiteError(
            f"face {site} reuses an edge; the slide needs three distinct "
            "edges"
        )

    # At corner i the walk leaves along face.darts[i] (edge edge_ids[i])
    # and arrived along edge_ids[i - 1]; whichever of the two sits in
    # over-parity slots passes over the other at that crossing.
    beats: Dict[int, Set[int]] = {e: set() for e in edge_ids}
    for i, (w, cc) in enumerate(face.corners):
        leave, arrive = edge_ids[i], edge_ids[i - 1]
        if (cc & 1) == (diagram.over_parities[w] & 1):
            beats[leave].add(arrive)
        else:
            beats[arrive].add(leave)
    if not any(len(b) == 2 for b in beats.values()):
        raise InvalidSiteError(
            "the three strands at this triangle stack cyclically; no "
            "strand can slide across"
        )

    moved = set(verts)

    def sigma(x: int) -> int:
        w = dart_vertex(x)
        if w in moved:
            return dart(w, (dart_slot(x) + 2) & 3)
        return x

    old_alpha = diagram.alpha
    alpha = [0] * len(old_alpha)
    for x in range(len(old_alpha)):
        alpha[sigma(x)] = sigma(old_alpha[x])

    parities = diagram.over_parities
    probe = Diagram(parities, tuple(alpha))

    def remap(face_index: int) -> int:
        # Prefer a corner away from the moved crossings; faces touching
        # the triangle only at moved corners are tracked through sigma.
        for w, cc in faces[face_index].corners:
            if w not in moved:
                return probe.face_at_corner(w, cc)
        w, cc = faces[face_index].corners[0]
        return probe.face_at_corner(w, (cc + 2) & 3)

    oloops = {}
    for f, count in diagram.oloops.items():
        g = remap(f)
        oloops[g] = oloops.get(g, 0) + count
    tubes = [(remap(x), remap(y)) for x, y in diagram.tubes]

    desired = {sigma(x) for x in diagram.oriented_arrivals}
    surfaced = Diagram(parities, alpha, oloops, tubes)
    orients = _orients_from_desired(surfaced, desired)
    return Diagram(parities, alpha, oloops, tubes, orients)


# ---------------------------------------------------------------------------
# smoothing a single crossing
# ---------------------------------------------------------------------------


def smooth_crossing(diagram: Diagram, crossing: int, choice: int) -> Diagram:
    """Replace ``crossing`` by one of its two smoothings.

    ``choice`` 0 joins the corners swept counterclockwise from the
    overpass; ``choice`` 1 joins the other pair.  A smoothing that closes
    a circle with no remaining crossings records it as a free circle in
    the containing face.  The result is capped along its own face
    structure, so when the smoothing stops the diagram from filling the
    original surface the supporting surface compresses accordingly.
    Orientations are not carried over (a smoothing can join two strands
    head to head), so the result uses default strand directions.
    """
    n = diagram.n
    if not 0 <= crossing < n:
        raise DiagramError(f"crossing index {crossing} out of range")
    if choice not in (0, 1):
        raise DiagramError("smoothing choice must be 0 or 1")

    v = crossing
    m = (diagram.over_parities[v] ^ choice) & 1
    arcs = ((1, 2), (3, 0)) if m == 0 else ((0, 1), (2, 3))
    partner = {}
    for s, t in arcs:
        partner[s] = t
        partner[t] = s

    def is_local(x: int) -> bool:
        return dart_vertex(x) == v

    def mu(x: int) -> int:
        return x - 4 if x >= 4 * (v + 1) else x

    alpha = [-1] * (4 * (n - 1))
    used_slots: Set[int] = set()
    for x in range(4 * n):
        if is_local(x) or alpha[mu(x)] >= 0:
            continue
        y = diagram.alpha[x]
        while is_local(y):
            s = partner[dart_slot(y)]
            used_slots.add(dart_slot(y))
            used_slots.add(s)
            y = diagram.alpha[dart(v, s)]
        alpha[mu(x)] = mu(y)
        alpha[mu(y)] = mu(x)

    # Arcs and local self-edges not reached from outside close up into
    # free circles.  For each circle, remember the old faces it brushes
    # against (the corners its arcs hug and the faces flanking its
    # edges): those faces all merge into the one new face containing it.
    circle_slots: Set[int] = set()
    circle_faces: List[List[int]] = []
    for s in range(4):
        if s in used_slots:
            continue
        candidates: List[int] = []
        cursor = s
        while True:
            t = partner[cursor]
            used_slots.add(cursor)
            used_slots.add(t)
            circle_slots.update((cursor, t))
            arc = arcs[0] if cursor in arcs[0] else arcs[1]
            candidates.append(diagram.face_at_corner(v, arc[0]))
            z = diagram.alpha[dart(v, t)]
            if not is_local(z):
                raise DiagramError("internal error: smoothing walk escaped")
            candidates.append(diagram.face_left_of(dart(v, t)))
            candidates.append(diagram.face_right_of(dart(v, t)))
            cursor = dart_slot(z)
            if cursor == s:
                break
        circle_faces.append(candidates)

    parities = tuple(
        p for w, p in enumerate(diagram.over_parities) if w != v
    )
    probe = Diagram(parities, alpha)

    def locate(face_index: int) -> Optional[int]:
        # The new face absorbing an old one, tracked through a surviving
        # corner; an old face whose corners all sat at the smoothed
        # crossing merges across any of its edges that dissolved into a
        # free circle.
        face = diagram.faces()[face_index]
        for w, cc in face.corners:
            if w != v:
                return probe.face_at_corner(w - 1 if w > v else w, cc)
        for d in face.darts:
            other = diagram.alpha[d]
            if (is_local(other) and dart_slot(d) in circle_slots
                    and dart_slot(other) in circle_slots):
                neighbour = diagram.faces()[diagram.face_right_of(d)]
                for w, cc in neighbour.corners:
                    if w != v:
                        return probe.face_at_corner(w - 1 if w > v else w, cc)
        return None

    def remap(face_index: int) -> int:
        g = locate(face_index)
        if g is not None:
            return g
        if probe.n == 0:
            return 0
        raise DiagramError(
            "smoothing would strand marked surface features in a face "
            "with no surviving corner"
        )

    oloops: Dict[int, int] = {}
    for f, count in diagram.oloops.items():
        g = remap(f)
        oloops[g] = oloops.get(g, 0) + count
    for candidates in circle_faces:
        g = None
        for f in candidates:
            g = locate(f)
            if g is not None:
                break
        if g is None:
            if probe.n > 0:
                raise DiagramError(
                    "smoothing would detach a crossingless piece with no "
                    "identifiable containing face"
                )
            g = 0
        oloops[g] = oloops.get(g, 0) + 1
    tubes = [(remap(x), remap(y)) for x, y in diagram.tubes]
    return Diagram(parities, alpha, oloops, tubes)


# ---------------------------------------------------------------------------
# mirror image
# ---------------------------------------------------------------------------


def mirror(diagram: Diagram) -> Diagram:
    """Swap the over/under role at every crossing.

    The bracket polynomial of the mirror is the original bracket with
    the variable inverted, and the two extreme states trade places.
    """
    parities = tuple(p ^ 1 for p in diagram.over_parities)
    return Diagram(parities, diagram.alpha, diagram.oloops, diagram.tubes,
                   dict(diagram._orient_overrides))


# ---------------------------------------------------------------------------
# random sampling
# ---------------------------------------------------------------------------


def random_diagram(
    crossings: int,
    genus_bias: float = 0.0,
    seed: int = 0,
) -> Diagram:
    """Sample a connected diagram with the given crossing count.

    Deterministic per ``(crossings, genus_bias, seed)``.  The sampler
    draws a uniform pairing of the ``4 * crossings`` darts with uniform
    over/under bits, rejecting pairings whose underlying 4-valent graph
    is disconnected.  ``genus_bias`` in [0, 1] is the probability of
    additionally rejecting a sample whose surface is a sphere, biasing
    the output toward positive genus.  Raises ``RetryExhaustedError``
    when no admissible sample appears within the attempt budget.
    """
    if crossings < 0:
        raise DiagramError("crossing count must be nonnegative")
    if not 0.0 <= genus_bias <= 1.0:
        raise DiagramError("genus bias must lie in [0, 1]")
    check_state_sum_size(crossings)
    if crossings == 0:
        return Diagram((), (), {0: 1})

    rng = random.Random(seed)
    darts = list(range(4 * crossings))
    for _ in range(_MAX_SAMPLING_ATTEMPTS):
        rng.shuffle(darts)
        alpha = [0] * (4 * crossings)
        for i in range(0, len(darts), 2):
            x, y = darts[i], darts[i + 1]
            alpha[x] = y
            alpha[y] = x
        parities = tuple(rng.getrandbits(1) for _ in range(crossings))
        candidate = Diagram(parities, alpha)
        if candidate.crossing_component_count != 1:
            continue
        if genus_bias and candidate.genus() == 0:
            if rng.random() < genus_bias:
                continue
        return candidate
    raise RetryExhaustedError(
        f"no admissible {crossings}-crossing diagram found in "
        f"{_MAX_SAMPLING_ATTEMPTS} attempts"
    )


def random_alternating(crossings: int, seed: int = 0) -> Diagram:
    """Sample a connected alternating diagram, deterministic per seed.

    The sampler first draws connected shadows until one admits an
    alternating over/under assignment, then applies the canonical such
    assignment (the flip-equivalence representative with the smallest
    packed parity word).  Raises ``RetryExhaustedError`` when no
    admissible shadow appears within the attempt budget.
    """
    if crossings < 1:
        raise DiagramError("crossing count must be at least 1")
    check_state_sum_size(crossings)

    rng = random.Random(seed)
    darts = list(range(4 * crossings))
    for _ in range(_MAX_SAMPLING_ATTEMPTS):
        rng.shuffle(darts)
        alpha = [0] * (4 * crossings)
        for i in range(0, len(darts), 2):
            x, y = darts[i], darts[i + 1]
            alpha[x] = y
            alpha[y] = x
        shadow = Diagram((0,) * crossings, alpha)
        if shadow.crossing_component_count != 1:
            continue
        data = shadow.alternating_parities()
        if data is None:
            continue
        base, masks = data
        packed = 0
        for w, bit in enumerate(base):
            packed |= bit << w
        for mask in masks:
            if (packed & mask).bit_count() * 2 > mask.bit_count():
                packed ^= mask
        parities = tuple((packed >> w) & 1 for w in range(crossings))
        return Diagram(parities, alpha)
    raise RetryExhaustedError(
        f"no alternating-capable {crossings}-crossing shadow found in "
        f"{_MAX_SAMPLING_ATTEMPTS} attempts"
    )
