"""Adequacy notions and structural properties of surface link diagrams.

Three nested adequacy notions are decided on each side of the smoothing
cube by examining only the states adjacent to the two extreme states
(one smoothing toggled).  Writing S* for an extreme state and S for an
adjacent one: the simple notion demands the loop count always drop,
|S| = |S*| - 1; the homological notion demands the homology-kernel count
never rise, k(S) <= k(S*); the skein notion demands that a state whose
disk-bounding loop count rises must change its non-disk loop count,
t(S) <= t(S*) or |reduced S| != |reduced S*|.  Each implies the next.
The skein notion is decided by exactly this count criterion — never by
comparing the non-disk loops themselves — which is an equivalent test
and keeps the decision independent of how finely loops are told apart.

Structural properties: a crossing is nugatory when some simple loop on
the surface meets the diagram at that crossing only and separates the
surface; it is removable when the loop can be chosen to bound a disk.
Candidate loops run through a face touched by two opposite corners of
the crossing, so the search is restricted to cellular embeddings, where
every such face is a disk and the arc through it is unique.  A shadow's
cutting disk is a disk whose boundary crosses the diagram transversally
at two edge points and which contains some but not all crossings;
candidate boundaries are built from two edge points joined by two
face-corner arcs, and every side is measured by Euler-characteristic
surgery.  Shadows with no cutting disk are strongly prime.

The weakly-alternating certificate compares the exact-or-upper span
2c + 2t(first) + 2t(second) against the value 4c + 4|D| - 4g attained by
reduced cellular weakly alternating diagrams: an alternating diagram
certifies positively, a shortfall certifies negatively, and equality
without alternation stays inconclusive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from .diagram import Diagram, DiagramError, gf2_echelon
from .invariants import _CubeContext, bracket, span_bounds
from .states import EnumerationLimitError, check_cube_scan_size

__all__ = [
    "AdequacyReport",
    "CuttingDisk",
    "PreconditionError",
    "UnsupportedEmbeddingError",
    "WeaklyAlternatingCertificate",
    "adequacy",
    "cutting_disks",
    "is_reduced",
    "is_strongly_prime",
    "nugatory_crossings",
    "weakly_alternating_certificate",
]


class UnsupportedEmbeddingError(DiagramError):
    """Raised when a structural search needs a cellular embedding."""


class PreconditionError(DiagramError):
    """Raised when a certificate's preconditions are not met."""


def _state_bits(state: int, n: int) -> str:
    """Bit string with character i showing crossing i's smoothing."""
    return "".join("1" if (state >> i) & 1 else "0" for i in range(n))


# ---------------------------------------------------------------------------
# adequacy
# ---------------------------------------------------------------------------

_NOTIONS = (
    "plus",
    "minus",
    "homological_a",
    "homological_b",
    "skein_a",
    "skein_b",
)


@dataclass
class AdequacyReport:
    """Adequacy flags with the violating adjacent state per crossing.

    ``witnesses`` maps each notion name to the crossings violating it and
    the adjacent state exhibiting the violation.
    """

    crossings: int
    plus_adequate: bool
    minus_adequate: bool
    homologically_a_adequate: bool
    homologically_b_adequate: bool
    skein_a_adequate: bool
    skein_b_adequate: bool
    witnesses: Dict[str, Dict[int, int]]

    @property
    def simply_adequate(self) -> bool:
        return self.plus_adequate and self.minus_adequate

    @property
    def homologically_adequate(self) -> bool:
        return self.homologically_a_adequate and self.homologically_b_adequate

    @property
    def skein_adequate(self) -> bool:
        return self.skein_a_adequate and self.skein_b_adequate

    @property
    def adequate(self) -> bool:
        """Adequate without qualification means skein adequate on both sides."""
        return self.skein_adequate

    def render(self) -> str:
        lines = [
            "plus adequate:           %s" % self.plus_adequate,
            "minus adequate:          %s" % self.minus_adequate,
            "simply adequate:         %s" % self.simply_adequate,
            "homologically A-adequate: %s" % self.homologically_a_adequate,
            "homologically B-adequate: %s" % self.homologically_b_adequate,
            "skein A-adequate:        %s" % self.skein_a_adequate,
            "skein B-adequate:        %s" % self.skein_b_adequate,
        ]
        for notion in _NOTIONS:
            for v, state in sorted(self.witnesses.get(notion, {}).items()):
                lines.append(
                    "violation %s at crossing %d: state %s"
                    % (notion, v, _state_bits(state, self.crossings))
                )
        return "\n".join(lines)

    def to_json(self) -> Dict[str, Any]:
        return {
            "crossings": self.crossings,
            "plus_adequate": self.plus_adequate,
            "minus_adequate": self.minus_adequate,
            "simply_adequate": self.simply_adequate,
            "homologically_a_adequate": self.homologically_a_adequate,
            "homologically_b_adequate": self.homologically_b_adequate,
            "homologically_adequate": self.homologically_adequate,
            "skein_a_adequate": self.skein_a_adequate,
            "skein_b_adequate": self.skein_b_adequate,
            "skein_adequate": self.skein_adequate,
            "witnesses": {
                notion: {
                    str(v): _state_bits(state, self.crossings)
                    for v, state in sorted(self.witnesses[notion].items())
                }
                for notion in _NOTIONS
                if self.witnesses.get(notion)
            },
        }


def adequacy(diagram: Diagram) -> AdequacyReport:
    """Decide all adequacy notions from the extreme states' neighbours.

    Only the crossings-many states adjacent to each extreme state are
    examined, so the cost is linear in crossings times resolution cost
    and no enumeration ceiling applies.
    """
    ctx = _CubeContext(diagram)
    n = diagram.n

    def info(state: int) -> Tuple[int, int, int, int]:
        _, t, total, classes2, _ = ctx.analyze(state, True, False)
        rank = len(gf2_echelon(classes2))
        return t, total, total - rank, total - t

    witnesses: Dict[str, Dict[int, int]] = {notion: {} for notion in _NOTIONS}
    full = (1 << n) - 1 if n else 0
    t_a, total_a, k_a, red_a = info(0)
    t_b, total_b, k_b, red_b = info(full)
    for v in range(n):
        state = 1 << v
        t, total, k, red = info(state)
        if total != total_a - 1:
            witnesses["plus"][v] = state
        if k > k_a:
            witnesses["homological_a"][v] = state
        if t > t_a and red == red_a:
            witnesses["skein_a"][v] = state
        state = full ^ (1 << v)
        t, total, k, red = info(state)
        if total != total_b - 1:
            witnesses["minus"][v] = state
        if k > k_b:
            witnesses["homological_b"][v] = state
        if t > t_b and red == red_b:
            witnesses["skein_b"][v] = state
    return AdequacyReport(
        crossings=n,
        plus_adequate=not witnesses["plus"],
        minus_adequate=not witnesses["minus"],
        homologically_a_adequate=not witnesses["homological_a"],
        homologically_b_adequate=not witnesses["homological_b"],
        skein_a_adequate=not witnesses["skein_a"],
        skein_b_adequate=not witnesses["skein_b"],
        witnesses={k: v for k, v in witnesses.items() if v},
    )


# ---------------------------------------------------------------------------
# nugatory crossings
# ---------------------------------------------------------------------------


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def _classify_nugatory_loop(diagram: Diagram, v: int, corner: int) -> Optional[str]:
    """Side analysis of the loop through crossing v and the face shared by
    corners ``corner`` and ``corner + 2``.

    Returns "removable" (a side is a disk), "essential" (separates but no
    disk side), or None (the loop does not separate the surface).
    """
    face = diagram.faces()[diagram.face_at_corner(v, corner)]
    p1 = face.corners.index((v, corner))
    p2 = face.corners.index((v, (corner + 2) & 3))
    length = len(face.corners)
    interval_a = [face.darts[(p1 + k) % length] for k in range((p2 - p1) % length)]
    interval_b = [face.darts[(p2 + k) % length] for k in range((p1 - p2) % length)]

    n, n_edges = diagram.n, diagram.n_edges
    n_faces = len(diagram.faces())
    edge_atom = lambda idx: n + idx
    face_atom = lambda fi: n + n_edges + fi
    side_a = n + n_edges + n_faces
    side_b = side_a + 1
    uf = _UnionFind(side_b + 1)

    for idx, pair in enumerate(diagram.edges):
        for end in pair:
            w = end >> 2
            if w != v:
                uf.union(edge_atom(idx), w)
            else:
                s = end & 3
                side = side_a if s == corner or s == (corner + 3) & 3 else side_b
                uf.union(edge_atom(idx), side)
    for fi, g in enumerate(diagram.faces()):
        if fi == face.index:
            continue
        for d in g.darts:
            uf.union(face_atom(fi), edge_atom(diagram.edge_index[d]))
    for d in interval_a:
        uf.union(side_a, edge_atom(diagram.edge_index[d]))
    for d in interval_b:
        uf.union(side_b, edge_atom(diagram.edge_index[d]))

    root_a, root_b = uf.find(side_a), uf.find(side_b)
    if root_a == root_b:
        return None
    chi = {root_a: 1, root_b: 1}  # one chord piece of the shared face each
    for w in range(n):
        if w == v:
            continue
        r = uf.find(w)
        if r in chi:
            chi[r] += 1
    for idx in range(n_edges):
        r = uf.find(edge_atom(idx))
        if r in chi:
            chi[r] -= 1
    for fi in range(n_faces):
        if fi == face.index:
            continue
        r = uf.find(face_atom(fi))
        if r in chi:
            chi[r] += 1
    if chi[root_a] == 1 or chi[root_b] == 1:
        return "removable"
    return "essential"


def nugatory_crossings(diagram: Diagram) -> List[Tuple[int, str]]:
    """Crossings with a separating loop through one shared face.

    Each listed crossing is classified "removable" when the loop can be
    chosen to bound a disk, else "essential".  Only cellular embeddings
    are supported: there the candidate face is a disk and the arc through
    it is unique, so the scan is complete.
    """
    if not diagram.is_cellular():
        raise UnsupportedEmbeddingError(
            "nugatory detection needs a cellular embedding; face arcs are "
            "not unique in non-disk regions"
        )
    results: List[Tuple[int, str]] = []
    for v in range(diagram.n):
        best: Optional[str] = None
        for corner in (0, 1):
            fa = diagram.face_at_corner(v, corner)
            fb = diagram.face_at_corner(v, (corner + 2) & 3)
            if fa != fb:
                continue
            verdict = _classify_nugatory_loop(diagram, v, corner)
            if verdict == "removable":
                best = "removable"
                break
            if verdict == "essential" and best is None:
                best = "essential"
        if best is not None:
            results.append((v, best))
    return results


def is_reduced(diagram: Diagram) -> bool:
    """True when the diagram has no removable nugatory crossing."""
    return all(kind != "removable" for _, kind in nugatory_crossings(diagram))


# ---------------------------------------------------------------------------
# cutting disks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CuttingDisk:
    """A disk side cut off by a loop through two edge points.

    ``edges`` are the two crossed edges; ``arcs`` records which edge-side
    occurrences (as darts) each face arc joins; ``disk_crossings`` lists
    the crossings inside the disk side — some but not all of them.
    """

    edges: Tuple[int, int]
    arcs: Tuple[Tuple[int, int], Tuple[int, int]]
    disk_crossings: Tuple[int, ...]


def _face_pieces(
    diagram: Diagram, chords: List[Tuple[int, int]]
) -> Optional[Tuple[List[Tuple[int, str, int]], int]]:
    """Split faces along chord arcs between edge-traversal occurrences.

    Returns (adjacency work list, piece count) or None when two chords in
    one face interleave (the arcs would have to cross).  The work list
    pairs each piece id with the boundary items it touches: ("edge", edge
    index) for a full traversal inside the piece, ("pre", dart) and
    ("post", dart) for the fragments flanking a cut occurrence.
    """
    by_face: Dict[int, List[int]] = {}
    partner: Dict[int, int] = {}
    for a, b in chords:
        partner[a] = b
        partner[b] = a
        by_face.setdefault(diagram.face_left_of(a), []).extend((a, b))

    work: List[Tuple[int, str, int]] = []
    next_piece = 0
    for fi, cut_darts in by_face.items():
        face = diagram.faces()[fi]
        position = {d: face.darts.index(d) for d in cut_darts}
        order = sorted(cut_darts, key=lambda d: position[d])
        k = len(order)
        if k == 4 and partner[order[0]] == order[2]:
            return None  # interleaved chords: the arcs would intersect
        interval_piece: Dict[int, int] = {}
        seen: set = set()
        for start in range(k):
            if start in seen:
                continue
            piece = next_piece
            next_piece += 1
            j = start
            while j not in seen:
                seen.add(j)
                interval_piece[j] = piece
                end_dart = order[(j + 1) % k]
                j = order.index(partner[end_dart])
        length = len(face.darts)
        for j in range(k):
            piece = interval_piece[j]
            d_from = order[j]
            d_to = order[(j + 1) % k]
            work.append((piece, "post", d_from))
            work.append((piece, "pre", d_to))
            pos = (position[d_from] + 1) % length
            while pos != position[d_to]:
                work.append((piece, "edge", diagram.edge_index[face.darts[pos]]))
                pos = (pos + 1) % length
    return work, next_piece


def _cut_loop_analysis(
    diagram: Diagram, e1: int, e2: int, arc_a: Tuple[int, int], arc_b: Tuple[int, int]
) -> Optional[Tuple[Tuple[int, Tuple[int, ...]], Tuple[int, Tuple[int, ...]]]]:
    """Side data ((chi, crossings), (chi, crossings)) for one candidate loop,
    or None when the arcs interleave or the loop does not separate."""
    split = _face_pieces(diagram, [arc_a, arc_b])
    if split is None:
        return None
    work, n_pieces = split

    # atom ids: crossings, whole edges, whole faces, tubes, face pieces,
    # then two pieces for each cut edge (keyed by end dart)
    n, n_edges = diagram.n, diagram.n_edges
    n_faces = len(diagram.faces())
    n_tubes = len(diagram.tubes)
    edge_atom = lambda idx: n + idx
    face_atom = lambda fi: n + n_edges + fi
    tube_atom = lambda ti: n + n_edges + n_faces + ti
    piece_atom = lambda pc: n + n_edges + n_faces + n_tubes + pc
    cut_piece: Dict[int, int] = {}
    nxt = n + n_edges + n_faces + n_tubes + n_pieces
    for idx in (e1, e2):
        for end in diagram.edges[idx]:
            cut_piece[end] = nxt
            nxt += 1
    uf = _UnionFind(nxt)

    cut_faces = {diagram.face_left_of(d) for d in (*arc_a, *arc_b)}
    for fa, fb in diagram.tubes:
        if fa in cut_faces or fb in cut_faces:
            # a tube foot inside a chord-cut face is not localized to a
            # piece by the combinatorial data; such faces are not disks,
            # so this candidate is outside the complete disk-face search
            return None
    for idx, pair in enumerate(diagram.edges):
        if idx == e1 or idx == e2:
            for end in pair:
                uf.union(cut_piece[end], end >> 2)
        else:
            for end in pair:
                uf.union(edge_atom(idx), end >> 2)
    for fi, face in enumerate(diagram.faces()):
        if fi in cut_faces:
            continue
        for d in face.darts:
            idx = diagram.edge_index[d]
            # faces not hosting a chord never touch a cut edge
            uf.union(face_atom(fi), edge_atom(idx))
    for ti, (fa, fb) in enumerate(diagram.tubes):
        uf.union(tube_atom(ti), face_atom(fa))
        uf.union(tube_atom(ti), face_atom(fb))
    for piece, kind, value in work:
        if kind == "edge":
            uf.union(piece_atom(piece), edge_atom(value))
        elif kind == "post":
            # fragment past the cut flanks the edge piece at the far end
            uf.union(piece_atom(piece), cut_piece[diagram.alpha[value]])
        else:  # pre
            uf.union(piece_atom(piece), cut_piece[value])

    seed1 = cut_piece[diagram.edges[e1][0]]
    seed2 = cut_piece[diagram.edges[e1][1]]
    root1, root2 = uf.find(seed1), uf.find(seed2)
    if root1 == root2:
        return None
    chi = {root1: 0, root2: 0}
    crossings: Dict[int, List[int]] = {root1: [], root2: []}
    for w in range(n):
        r = uf.find(w)
        if r in chi:
            chi[r] += 1
            crossings[r].append(w)
    for idx in range(n_edges):
        if idx == e1 or idx == e2:
            continue
        r = uf.find(edge_atom(idx))
        if r in chi:
            chi[r] -= 1
    for end in cut_piece:
        r = uf.find(cut_piece[end])
        if r in chi:
            chi[r] -= 1
    for fi in range(n_faces):
        if fi in cut_faces:
            continue
        r = uf.find(face_atom(fi))
        if r in chi:
            chi[r] += 1
    for ti in range(n_tubes):
        r = uf.find(tube_atom(ti))
        if r in chi:
            chi[r] -= 2
    for piece in range(n_pieces):
        r = uf.find(piece_atom(piece))
        if r in chi:
            chi[r] += 1
    return (
        (chi[root1], tuple(crossings[root1])),
        (chi[root2], tuple(crossings[root2])),
    )


def cutting_disks(diagram: Diagram) -> List[CuttingDisk]:
    """Disk sides crossing the shadow twice with some but not all crossings.

    Candidate loops cross two distinct edges and connect the crossing
    points by arcs through faces; arcs are the unique corner paths, so
    the enumeration is complete for disk faces.  Requires a connected
    shadow within the cube-scan ceiling.
    """
    if diagram.diagram_component_count() > 1:
        raise DiagramError("cutting disks are defined for connected shadows")
    check_cube_scan_size(diagram.n)
    results: List[CuttingDisk] = []
    for e1 in range(diagram.n_edges):
        d1, dd1 = diagram.edges[e1]
        for e2 in range(e1 + 1, diagram.n_edges):
            d2, dd2 = diagram.edges[e2]
            for arc_a, arc_b in (
                ((d1, d2), (dd1, dd2)),
                ((d1, dd2), (dd1, d2)),
            ):
                if diagram.face_left_of(arc_a[0]) != diagram.face_left_of(arc_a[1]):
                    continue
                if diagram.face_left_of(arc_b[0]) != diagram.face_left_of(arc_b[1]):
                    continue
                sides = _cut_loop_analysis(diagram, e1, e2, arc_a, arc_b)
                if sides is None:
                    continue
                for chi, inside in sides:
                    if chi == 1 and 0 < len(inside) < diagram.n:
                        results.append(
                            CuttingDisk(edges=(e1, e2), arcs=(arc_a, arc_b), disk_crossings=inside)
                        )
    return results


def is_strongly_prime(diagram: Diagram) -> bool:
    """True when the connected shadow admits no cutting disk."""
    return not cutting_disks(diagram)


# ---------------------------------------------------------------------------
# weakly alternating certificate
# ---------------------------------------------------------------------------


@dataclass
class WeaklyAlternatingCertificate:
    """Verdict with the spans that decided it.

    ``span_formula`` is the two-extreme-state upper bound (exact when
    skein adequacy is certified); ``span_target`` is the span that
    reduced cellular weakly alternating diagrams attain.
    """

    verdict: str
    alternating: bool
    span_formula: int
    span_target: int
    skein_adequate: Optional[bool]
    span_level2: Optional[int]
    note: str

    def render(self) -> str:
        return "\n".join(
            [
                "verdict:        %s" % self.verdict,
                "alternating:    %s" % self.alternating,
                "span formula:   %d" % self.span_formula,
                "span target:    %d" % self.span_target,
                "skein adequate: %s" % self.skein_adequate,
                "level-2 span:   %s" % self.span_level2,
                "note:           %s" % self.note,
            ]
        )

    def to_json(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict,
            "alternating": self.alternating,
            "span_formula": self.span_formula,
            "span_target": self.span_target,
            "skein_adequate": self.skein_adequate,
            "span_level2": self.span_level2,
            "note": self.note,
        }


def weakly_alternating_certificate(diagram: Diagram) -> WeaklyAlternatingCertificate:
    """Decide whether the diagram can come from alternating summands.

    Preconditions: reduced and cellular.  Alternating diagrams certify
    positively.  Otherwise a span upper bound strictly below the value
    forced on weakly alternating diagrams certifies negatively; equality
    stays inconclusive because key collisions could hide the true span.
    """
    if not diagram.is_cellular():
        raise PreconditionError("the certificate needs a cellular embedding")
    if not is_reduced(diagram):
        raise PreconditionError("the certificate needs a reduced diagram")
    target = 4 * diagram.n + 4 * diagram.diagram_component_count() - 4 * diagram.genus()
    if diagram.is_alternating():
        return WeaklyAlternatingCertificate(
            verdict="weakly_alternating",
            alternating=True,
            span_formula=span_bounds(diagram).span_formula,
            span_target=target,
            skein_adequate=None,
            span_level2=None,
            note="the diagram itself is alternating",
        )
    report = adequacy(diagram)
    sb = span_bounds(diagram, adequate=report.skein_adequate)
    span_level2: Optional[int] = None
    try:
        span_level2 = bracket(diagram, 2).span()
    except EnumerationLimitError:
        pass
    if sb.span_formula < target:
        kind = "exact span" if report.skein_adequate else "span upper bound"
        return WeaklyAlternatingCertificate(
            verdict="not_weakly_alternating",
            alternating=False,
            span_formula=sb.span_formula,
            span_target=target,
            skein_adequate=report.skein_adequate,
            span_level2=span_level2,
            note="%s %d falls below the weakly alternating value %d"
            % (kind, sb.span_formula, target),
        )
    return WeaklyAlternatingCertificate(
        verdict="inconclusive",
        alternating=False,
        span_formula=sb.span_formula,
        span_target=target,
        skein_adequate=report.skein_adequate,
        span_level2=span_level2,
        note=(
            "the span bound equals the weakly alternating value; computed "
            "spans may undershoot when distinct loop systems share a key"
        ),
    )
