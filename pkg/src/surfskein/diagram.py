"""Link diagrams on closed oriented surfaces, as decorated 4-valent maps.

A diagram is stored combinatorially.  Each crossing is a vertex with four
half-edge ends ("darts") in counterclockwise slots 0..3, and an
over-parity bit: 1 means the strand through slots 1 and 3 passes over,
0 means the strand through slots 0 and 2 does.  A fixed-point-free
involution ``alpha`` on darts pairs the slot ends into edges.  This data
determines a ribbon surface; capping every boundary circle of the ribbon
with a disk gives the smallest closed oriented surface the diagram fills.
Two optional decorations build larger or more general ambient surfaces:

* ``tube f_i f_j`` removes the disk caps of faces ``f_i`` and ``f_j`` and
  joins the holes with a handle, and
* ``O f_i k`` places ``k`` disjoint crossingless loops, each bounding a
  small disk, in the part of the surface containing face ``f_i``.

Diagrams are written in a small text format (extension ``.sld``), one
directive per line::

    X 1 4 2 5 over=odd    # crossing: edge labels ccw from slot 0
    O f2 1                # crossingless loops in a face
    tube f0 f3            # handle joining two faces
    orient 0 4            # strand 0 runs through edge 4 first-end to second
    # comment

Equal labels pair half-edge ends; every label must appear exactly twice.
``over=odd`` marks the strand through the odd slots as the over-strand;
the default is ``over=even``.  Faces are named ``f0, f1, ...`` in a
canonical order derived from the crossing order, so the names are stable
under reserialisation.  ``Diagram.to_text`` writes the canonical form:
crossings first in id order, edges renumbered 1..2c in order of first
appearance, directives sorted, and redundant orientation directives
dropped.

The module also computes the standard structure a state sum needs: the
faces of the map, the regions of the assembled surface with their Euler
characteristics, genus, cellularity, checkerboard colourings, strand
orientations and writhe, and mod-2 / integral first-homology contexts
used to classify curves on the surface.

Conventions used throughout (fixed once, here):

* slots are counterclockwise; corner ``i`` of a vertex is the sector
  between slots ``i`` and ``i+1``;
* the face walk leaves corner ``(v, i)`` along the dart in slot ``i`` and
  continues, at the far end ``(w, k)`` of that edge, in corner
  ``(w, k-1)``; every face is therefore traversed with the face on the
  left;
* a crossing is positive when the under-strand exits one slot
  counterclockwise of the over-strand's exit slot;
* the default orientation of a strand runs through its lowest-numbered
  edge from the end written first in the file to the end written second.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

__all__ = [
    "DiagramError",
    "Face",
    "Region",
    "HomologyContext",
    "Diagram",
    "parse_sld",
    "load_sld",
    "gf2_echelon",
    "gf2_reduce",
]


class DiagramError(ValueError):
    """Raised for malformed diagram text or inconsistent diagram data."""


# ---------------------------------------------------------------------------
# darts
# ---------------------------------------------------------------------------
#
# Dart 4*v + s is the half-edge end at vertex v, slot s.  "Arriving along"
# dart d means moving along its edge toward v, reaching v in slot s.


def dart(vertex: int, slot: int) -> int:
    return 4 * vertex + (slot & 3)


def dart_vertex(d: int) -> int:
    return d >> 2


def dart_slot(d: int) -> int:
    return d & 3


# ---------------------------------------------------------------------------
# small exact linear algebra: GF(2) bitmasks and integer row reduction
# ---------------------------------------------------------------------------


def gf2_reduce(v: int, basis: Sequence[int]) -> int:
    for b in basis:
        v = min(v, v ^ b)
    return v


def gf2_echelon(vectors: Iterable[int]) -> List[int]:
    """Echelon basis (as bitmask ints) of the GF(2) span of ``vectors``."""
    basis: List[int] = []
    for v in vectors:
        v = gf2_reduce(v, basis)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return basis


def int_rows_reduce(rows: Iterable[Sequence[int]]) -> List[List[int]]:
    """Reduce integer rows to a Hermite-style echelon basis of their span.

    Pivots are positive and appear in increasing column order; entries
    above each pivot are reduced into [0, pivot).
    """
    work = [list(r) for r in rows if any(r)]
    ncols = max((len(r) for r in work), default=0)
    for r in work:
        r.extend([0] * (ncols - len(r)))
    echelon: List[List[int]] = []
    for col in range(ncols):
        have = [r for r in work if r[col] != 0]
        if not have:
            continue
        while True:
            have.sort(key=lambda r: abs(r[col]))
            pivot = have[0]
            others = [r for r in have if r is not pivot]
            if all(r[col] % pivot[col] == 0 for r in others):
                for r in others:
                    q = r[col] // pivot[col]
                    for j in range(col, ncols):
                        r[j] -= q * pivot[j]
                break
            for r in others:
                q = r[col] // pivot[col]
                for j in range(col, ncols):
                    r[j] -= q * pivot[j]
            have = [r for r in have if r[col] != 0]
        if pivot[col] < 0:
            for j in range(col, ncols):
                pivot[j] = -pivot[j]
        work = [r for r in work if r is not pivot and any(r)]
        for r in echelon:
            q = r[col] // pivot[col]
            if q:
                for j in range(col, ncols):
                    r[j] -= q * pivot[j]
        echelon.append(pivot)
    return echelon


def int_reduce(vec: Sequence[int], echelon: Sequence[Sequence[int]]) -> Tuple[int, ...]:
    """Reduce an integer vector modulo the lattice spanned by echelon rows."""
    out = list(vec)
    for row in echelon:
        col = next(j for j, x in enumerate(row) if x)
        q = out[col] // row[col]
        if q:
            for j in range(col, len(out)):
                out[j] -= q * row[j]
    return tuple(out)


# ---------------------------------------------------------------------------
# faces, regions, homology context
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Face:
    """One face of the underlying 4-valent map.

    ``corners`` lists the corners (vertex, corner-index) in walk order;
    ``darts`` lists, in the same order, the dart the walk leaves along at
    each corner.  The walk keeps the face on its left.
    """

    index: int
    corners: Tuple[Tuple[int, int], ...]
    darts: Tuple[int, ...]

    @property
    def label(self) -> str:
        return "f%d" % self.index


@dataclass(frozen=True)
class Region:
    """A complementary region of the map in the assembled surface.

    A region is a set of faces joined by tubes, with the Euler
    characteristic of the corresponding patch of surface (disk caps
    contribute 1 each, every tube subtracts 2, a crossingless base sphere
    starts at 2).  ``oloops`` counts the crossingless loops placed in the
    region; they do not change the patch but subdivide it when the full
    diagram, rather than the map, is cut out of the surface.
    """

    index: int
    faces: Tuple[int, ...]
    euler: int
    oloops: int

    @property
    def label(self) -> str:
        return "r%d" % self.index


@dataclass(frozen=True)
class HomologyContext:
    """First-homology data of the assembled surface in edge coordinates.

    Mod-2 classes are edge-set bitmasks reduced by ``boundary_basis``, the
    echelonised span of region boundaries.  Integral classes are tuples of
    edge coefficients reduced by the Hermite rows of the region-boundary
    lattice; edge j is oriented from the endpoint carrying the smaller
    dart id to the other one.
    """

    n_edges: int
    boundary_basis: Tuple[int, ...]
    boundary_rows: Tuple[Tuple[int, ...], ...]

    def class_mod2(self, edge_mask: int) -> int:
        return gf2_reduce(edge_mask, self.boundary_basis)

    def class_integral(self, vec: Sequence[int]) -> Tuple[int, ...]:
        """Canonical representative of an integral class, up to sign."""
        red = int_reduce(vec, self.boundary_rows)
        neg = int_reduce([-x for x in vec], self.boundary_rows)
        return min(red, neg)


# ---------------------------------------------------------------------------
# the diagram proper
# ---------------------------------------------------------------------------


class Diagram:
    """A link diagram on a closed oriented surface.

    Args:
        over_parities: per-crossing bit; 1 puts the strand through slots
            1 and 3 on top, 0 the strand through slots 0 and 2.
        alpha: pairing of darts into edges, as a sequence of length
            4*c with alpha[alpha[d]] == d != alpha[d].
        oloops: mapping from face index to a positive number of
            crossingless loops placed there.
        tubes: multiset of face-index pairs joined by handles.
        orients: per-strand orientation overrides, mapping a strand index
            to a dart d; the strand is then oriented to traverse the edge
            {d, alpha[d]} from the d end toward the other end.
    """

    def __init__(
        self,
        over_parities: Sequence[int],
        alpha: Sequence[int],
        oloops: Mapping[int, int] | None = None,
        tubes: Sequence[Tuple[int, int]] | None = None,
        orients: Mapping[int, int] | None = None,
    ) -> None:
        self.over_parities: Tuple[int, ...] = tuple(int(p) & 1 for p in over_parities)
        self.n = len(self.over_parities)
        self.alpha: Tuple[int, ...] = tuple(alpha)
        if len(self.alpha) != 4 * self.n:
            raise DiagramError("alpha must pair all %d darts" % (4 * self.n))
        for d, e in enumerate(self.alpha):
            if not 0 <= e < 4 * self.n or e == d or self.alpha[e] != d:
                raise DiagramError("alpha is not a fixed-point-free involution at dart %d" % d)
        self.oloops: Dict[int, int] = {int(f): int(k) for f, k in (oloops or {}).items()}
        self.tubes: Tuple[Tuple[int, int], ...] = tuple(
            sorted((min(int(a), int(b)), max(int(a), int(b))) for a, b in (tubes or ()))
        )
        self._orient_overrides: Dict[int, int] = {int(c): int(d) for c, d in (orients or {}).items()}
        nf = len(self.faces())
        for f, k in self.oloops.items():
            if not 0 <= f < nf:
                raise DiagramError("no face f%d for crossingless loops" % f)
            if k <= 0:
                raise DiagramError("loop count for f%d must be positive" % f)
        for a, b in self.tubes:
            if not (0 <= a < nf and 0 <= b < nf):
                raise DiagramError("tube endpoint face out of range: f%d f%d" % (a, b))
        for comp, d in self._orient_overrides.items():
            if not 0 <= comp < len(self.strand_components()):
                raise DiagramError("no strand component %d to orient" % comp)
            if not 0 <= d < self.n_darts or self._strand_of_dart[d] != comp:
                raise DiagramError("orientation edge does not lie on strand %d" % comp)

    # -- basic structure ----------------------------------------------------

    @property
    def n_darts(self) -> int:
        return 4 * self.n

    @property
    def n_edges(self) -> int:
        return 2 * self.n

    @cached_property
    def edges(self) -> Tuple[Tuple[int, int], ...]:
        """Edges as dart pairs (d, alpha[d]) with d < alpha[d], in d order."""
        return tuple((d, self.alpha[d]) for d in range(self.n_darts) if d < self.alpha[d])

    @cached_property
    def edge_index(self) -> Tuple[int, ...]:
        """Dart -> index of its edge in ``edges``."""
        idx = [0] * self.n_darts
        for i, (d, e) in enumerate(self.edges):
            idx[d] = idx[e] = i
        return tuple(idx)

    # -- faces ---------------------------------------------------------------

    @cached_property
    def _face_data(self) -> Tuple[Tuple[Face, ...], Tuple[int, ...]]:
        if self.n == 0:
            return (Face(0, (), ()),), ()
        face_of = [-1] * self.n_darts  # corner (v,i) keyed by dart(v,i)
        faces: List[Face] = []
        for start in range(self.n_darts):
            if face_of[start] >= 0:
                continue
            corners: List[Tuple[int, int]] = []
            darts: List[int] = []
            cur = start
            while face_of[cur] < 0:
                face_of[cur] = len(faces)
                corners.append((dart_vertex(cur), dart_slot(cur)))
                darts.append(cur)
                far = self.alpha[cur]
                cur = dart(dart_vertex(far), dart_slot(far) - 1)
            if cur != start:
                raise DiagramError("face walk failed to close")
            faces.append(Face(len(faces), tuple(corners), tuple(darts)))
        return tuple(faces), tuple(face_of)

    def faces(self) -> Tuple[Face, ...]:
        """Faces of the map; a crossingless diagram has one sphere face."""
        return self._face_data[0]

    def face_at_corner(self, vertex: int, corner: int) -> int:
        """Face index at corner ``corner`` (sector ccw of that slot) of a vertex."""
        return self._face_data[1][dart(vertex, corner)]

    def face_left_of(self, d: int) -> int:
        """Face on the left when moving away from d's vertex along dart d."""
        return self._face_data[1][d]

    def face_right_of(self, d: int) -> int:
        return self._face_data[1][dart(dart_vertex(d), dart_slot(d) - 1)]

    def face_edge_mask(self, face: Face) -> int:
        """Bitmask of edges traversed an odd number of times by the face walk."""
        mask = 0
        for d in face.darts:
            mask ^= 1 << self.edge_index[d]
        return mask

    def face_boundary_z(self, face: Face) -> List[int]:
        """Integer edge vector of the face walk, against the edge orientations."""
        vec = [0] * self.n_edges
        for d in face.darts:
            vec[self.edge_index[d]] += 1 if d < self.alpha[d] else -1
        return vec

    # -- regions and the assembled surface ------------------------------------

    @cached_property
    def _region_data(self) -> Tuple[Tuple[Region, ...], Tuple[int, ...]]:
        nf = len(self.faces())
        parent = list(range(nf))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        base = 2 if self.n == 0 else 1
        euler = {f: base for f in range(nf)}
        for a, b in self.tubes:
            ra, rb = find(a), find(b)
            if ra == rb:
                euler[ra] -= 2
            else:
                parent[ra] = rb
                euler[rb] = euler[ra] + euler[rb] - 2
                del euler[ra]
        groups: Dict[int, List[int]] = {}
        for f in range(nf):
            groups.setdefault(find(f), []).append(f)
        regions: List[Region] = []
        region_of = [-1] * nf
        for root in sorted(groups, key=lambda r: min(groups[r])):
            fs = tuple(sorted(groups[root]))
            o = sum(self.oloops.get(f, 0) for f in fs)
            idx = len(regions)
            regions.append(Region(idx, fs, euler[find(root)], o))
            for f in fs:
                region_of[f] = idx
        return tuple(regions), tuple(region_of)

    def regions(self) -> Tuple[Region, ...]:
        return self._region_data[0]

    def region_of_face(self, face_index: int) -> int:
        return self._region_data[1][face_index]

    @cached_property
    def _surface_components(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """(component id per crossing, component id per region)."""
        n_items = self.n + len(self.regions())
        parent = list(range(n_items))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for d in range(self.n_darts):
            parent[find(dart_vertex(d))] = find(dart_vertex(self.alpha[d]))
        for reg in self.regions():
            for f in reg.faces:
                corners = self.faces()[f].corners
                if corners:
                    parent[find(self.n + reg.index)] = find(corners[0][0])
        roots = sorted({find(x) for x in range(n_items)})
        renum = {r: i for i, r in enumerate(roots)}
        return (
            tuple(renum[find(v)] for v in range(self.n)),
            tuple(renum[find(self.n + r)] for r in range(len(self.regions()))),
        )

    def surface_component_count(self) -> int:
        crossings, regs = self._surface_components
        return len(set(crossings) | set(regs))

    def euler_characteristic(self) -> int:
        return -self.n + sum(r.euler for r in self.regions())

    def genus(self) -> int:
        """Total genus of the assembled surface (summed over components)."""
        chi = self.euler_characteristic()
        comps = self.surface_component_count()
        if (2 * comps - chi) % 2:
            raise DiagramError("inconsistent surface bookkeeping")
        return (2 * comps - chi) // 2

    def component_genus(self) -> Tuple[int, ...]:
        """Genus of each surface component, ordered by component id."""
        crossings, regs = self._surface_components
        comps = self.surface_component_count()
        chi = [0] * comps
        for v in range(self.n):
            chi[crossings[v]] -= 1
        for reg in self.regions():
            chi[regs[reg.index]] += reg.euler
        return tuple((2 - c) // 2 for c in chi)

    def is_cellular(self) -> bool:
        """True when every complementary region of the diagram is a disk."""
        return all(r.euler - r.oloops == 1 for r in self.regions())

    @cached_property
    def _capped_genus_total(self) -> int:
        """Sum of capped ribbon genera over the crossing components."""
        if self.n == 0:
            return 0
        parent = list(range(self.n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for d in range(self.n_darts):
            parent[find(dart_vertex(d))] = find(dart_vertex(self.alpha[d]))
        chi: Dict[int, int] = {}
        for v in range(self.n):
            chi[find(v)] = chi.get(find(v), 0) - 1
        for f in self.faces():
            root = find(f.corners[0][0])
            chi[root] = chi.get(root, 0) + 1
        return sum((2 - c) // 2 for c in chi.values())

    def is_minimally_embedded(self) -> bool:
        """True when the surface has the least genus able to carry the diagram.

        Equivalently, the handles add no spare genus: the total genus
        equals the sum of capped ribbon genera of the crossing components.
        """
        return self.genus() == self._capped_genus_total

    # -- strands, orientation, writhe -----------------------------------------

    def strand_next(self, arrival: int) -> int:
        """Next arrival dart when the strand runs straight through the vertex."""
        return self.alpha[dart(dart_vertex(arrival), dart_slot(arrival) + 2)]

    @cached_property
    def _strand_data(self) -> Tuple[Tuple[Tuple[int, ...], ...], Tuple[int, ...]]:
        orbit_of = [-1] * self.n_darts
        orbits: List[Tuple[int, ...]] = []
        for start in range(self.n_darts):
            if orbit_of[start] >= 0:
                continue
            cyc: List[int] = []
            cur = start
            while orbit_of[cur] < 0:
                orbit_of[cur] = len(orbits)
                cyc.append(cur)
                cur = self.strand_next(cur)
            orbits.append(tuple(cyc))
        strands: List[Tuple[int, ...]] = []
        strand_of = [-1] * self.n_darts
        seen: set = set()
        for i, orb in enumerate(orbits):
            if i in seen:
                continue
            j = orbit_of[self.alpha[orb[0]]]
            if j == i:
                raise DiagramError("strand walk merged with its own reverse")
            seen.add(i)
            seen.add(j)
            idx = len(strands)
            strands.append(orb)
            for d in orbits[i] + orbits[j]:
                strand_of[d] = idx
        return tuple(strands), tuple(strand_of)

    def strand_components(self) -> Tuple[Tuple[int, ...], ...]:
        """One arrival-dart cycle per closed strand, in a fixed direction."""
        return self._strand_data[0]

    @property
    def _strand_of_dart(self) -> Tuple[int, ...]:
        return self._strand_data[1]

    def _reverse_orbit(self, orb: Tuple[int, ...]) -> Tuple[int, ...]:
        start = self.alpha[orb[0]]
        cyc = [start]
        cur = self.strand_next(start)
        while cur != start:
            cyc.append(cur)
            cur = self.strand_next(cur)
        return tuple(cyc)

    @cached_property
    def oriented_arrivals(self) -> frozenset:
        """Arrival darts of every strand walked in its chosen direction.

        The default direction traverses the strand's lowest-dart edge from
        the low end to the high end; ``orients`` overrides per strand.
        """
        out: set = set()
        for idx, orb in enumerate(self.strand_components()):
            anchor = self._orient_overrides.get(idx)
            if anchor is None:
                anchor = min(min(d, self.alpha[d]) for d in orb)
            want = self.alpha[anchor]  # arrival at the far end of the anchor edge
            cyc = orb if want in orb else self._reverse_orbit(orb)
            out.update(cyc)
        return frozenset(out)

    def crossing_sign(self, v: int) -> int:
        """+1 or -1, from the chosen orientations of the two strands through v."""
        p = self.over_parities[v]
        oriented = self.oriented_arrivals
        over_exit = p + 2 if dart(v, p) in oriented else p
        under_exit = p + 3 if dart(v, p + 1) in oriented else p + 1
        return 1 if (under_exit - over_exit) % 4 == 1 else -1

    def writhe(self) -> int:
        return sum(self.crossing_sign(v) for v in range(self.n))

    # -- alternation ----------------------------------------------------------

    def _edge_parity_rhs(self, d: int) -> int:
        return 1 ^ (dart_slot(d) & 1) ^ (dart_slot(self.alpha[d]) & 1)

    def is_alternating(self) -> bool:
        """True when every strand alternates over, under, over, ... cyclically."""
        return all(
            self.over_parities[dart_vertex(d)] ^ self.over_parities[dart_vertex(e)]
            == self._edge_parity_rhs(d)
            for d, e in self.edges
        )

    @cached_property
    def _alternable_data(self) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
        """Parity assignments making the underlying shadow alternating.

        Returns (base assignment, one flip mask per free crossing group),
        or None when no assignment exists.  Every solution is the base
        XORed with a subset of the masks.  A solution plays the role of
        over-parities for a decorated diagram and of merged-corner
        parities for a state of the shadow.
        """
        n = self.n
        parent = list(range(n))
        offset = [0] * n  # parity relative to the parent

        def find_with(x: int) -> Tuple[int, int]:
            root, par = x, 0
            while parent[root] != root:
                par ^= offset[root]
                root = parent[root]
            cur, acc = x, par
            while parent[cur] != cur:
                nxt, noff = parent[cur], offset[cur]
                parent[cur], offset[cur] = root, acc
                acc ^= noff
                cur = nxt
            return root, par

        for d, e in self.edges:
            a, b = dart_vertex(d), dart_vertex(e)
            rhs = self._edge_parity_rhs(d)
            ra, pa = find_with(a)
            rb, pb = find_with(b)
            if ra == rb:
                if pa ^ pb != rhs:
                    return None
            else:
                parent[ra] = rb
                offset[ra] = pa ^ pb ^ rhs
        base = [0] * n
        mask_index: Dict[int, int] = {}
        masks: List[int] = []
        for v in range(n):
            r, p = find_with(v)
            base[v] = p
            if r not in mask_index:
                mask_index[r] = len(masks)
                masks.append(0)
            masks[mask_index[r]] |= 1 << v
        return tuple(base), tuple(masks)

    def is_alternable(self) -> bool:
        """True when some over/under assignment makes the diagram alternating."""
        return self._alternable_data is not None

    def alternating_parities(self) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
        """Base parity assignment and flip masks, or None; see is_alternable."""
        return self._alternable_data

    # -- checkerboard colouring ------------------------------------------------

    @cached_property
    def _checkerboard(self) -> Optional[Tuple[int, ...]]:
        regions = self.regions()
        colour = [-1] * len(regions)
        for start in range(len(regions)):
            if colour[start] >= 0:
                continue
            colour[start] = 0
            stack = [start]
            while stack:
                r = stack.pop()
                for f in regions[r].faces:
                    for d in self.faces()[f].darts:
                        other = self.region_of_face(self.face_right_of(d))
                        if colour[other] < 0:
                            colour[other] = colour[r] ^ 1
                            stack.append(other)
                        elif colour[other] == colour[r]:
                            return None
        return tuple(colour)

    def is_checkerboard_colorable(self) -> bool:
        """True when regions admit a 2-colouring flipping across every edge."""
        return self._checkerboard is not None

    def checkerboard_coloring(self) -> Optional[Tuple[int, ...]]:
        """A colour (0/1) per region, or None when no colouring exists."""
        return self._checkerboard

    @cached_property
    def _local_checkerboard(self) -> Optional[Tuple[int, ...]]:
        """Face 2-colouring flipping across every edge, tubes ignored.

        This colours the faces of the capped ribbon surface rather than
        the regions of the assembled surface, so it tests the property in
        a neighbourhood of the diagram only.  A region colouring restricts
        to a face colouring, never the other way around.  Crossingless
        loops subdivide a face into a disk and the rest; the disk can
        always take the opposite colour, so they are irrelevant here.
        """
        nf = len(self.faces())
        colour = [-1] * nf
        for start in range(nf):
            if colour[start] >= 0:
                continue
            colour[start] = 0
            stack = [start]
            while stack:
                f = stack.pop()
                for d in self.faces()[f].darts:
                    other = self.face_left_of(self.alpha[d])
                    if colour[other] < 0:
                        colour[other] = colour[f] ^ 1
                        stack.append(other)
                    elif colour[other] == colour[f]:
                        return None
        return tuple(colour)

    def is_locally_checkerboard_colorable(self) -> bool:
        """True when the faces of the map 2-colour with flips across edges."""
        return self._local_checkerboard is not None

    def local_checkerboard_coloring(self) -> Optional[Tuple[int, ...]]:
        """A colour (0/1) per face, or None; see is_locally_checkerboard_colorable."""
        return self._local_checkerboard

    # -- components and homology ------------------------------------------------

    @cached_property
    def crossing_component_count(self) -> int:
        if self.n == 0:
            return 0
        parent = list(range(self.n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for d in range(self.n_darts):
            parent[find(dart_vertex(d))] = find(dart_vertex(self.alpha[d]))
        return len({find(v) for v in range(self.n)})

    def diagram_component_count(self) -> int:
        """Connected components of the diagram: crossing parts plus loops."""
        return self.crossing_component_count + sum(self.oloops.values())

    def cycle_space_dim(self) -> int:
        """Dimension of the mod-2 cycle space of the diagram 1-complex."""
        graph = self.n_edges - self.n + self.crossing_component_count
        return graph + sum(self.oloops.values())

    @cached_property
    def homology(self) -> HomologyContext:
        masks = []
        rows = []
        for reg in self.regions():
            mask = 0
            vec = [0] * self.n_edges
            for f in reg.faces:
                face = self.faces()[f]
                mask ^= self.face_edge_mask(face)
                for i, x in enumerate(self.face_boundary_z(face)):
                    vec[i] += x
            masks.append(mask)
            rows.append(vec)
        basis = tuple(gf2_echelon(masks))
        hermite = tuple(tuple(r) for r in int_rows_reduce(rows))
        return HomologyContext(self.n_edges, basis, hermite)

    def image_rank(self) -> int:
        """Rank of the image of diagram first homology in surface first homology.

        Crossingless loops all bound disks, so only the crossing part
        contributes; its rank is the mod-2 cycle space dimension minus the
        rank of the region-boundary span.
        """
        if self.n == 0:
            return 0
        graph_cycles = self.n_edges - self.n + self.crossing_component_count
        return graph_cycles - len(self.homology.boundary_basis)

    def kernel_dim(self) -> int:
        """Rank of the diagram cycles that are null-homologous in the surface."""
        return self.cycle_space_dim() - self.image_rank()

    # -- parsing and serialisation ----------------------------------------------

    @classmethod
    def from_text(cls, text: str) -> "Diagram":
        return parse_sld(text)

    def to_text(self) -> str:
        """Canonical text form; parsing it back gives an equal diagram."""
        renum: Dict[int, int] = {}
        for num, (d, e) in enumerate(self.edges, 1):
            renum[d] = renum[e] = num
        lines = []
        for v in range(self.n):
            labels = " ".join(str(renum[dart(v, s)]) for s in range(4))
            flag = " over=odd" if self.over_parities[v] else ""
            lines.append("X %s%s" % (labels, flag))
        for f in sorted(self.oloops):
            lines.append("O f%d %d" % (f, self.oloops[f]))
        for a, b in self.tubes:
            lines.append("tube f%d f%d" % (a, b))
        for comp, orb in enumerate(self.strand_components()):
            chosen_fwd = self.alpha[min(min(d, self.alpha[d]) for d in orb)] in self.oriented_arrivals
            if chosen_fwd:
                continue  # default direction, nothing to record
            chosen = orb if orb[0] in self.oriented_arrivals else self._reverse_orbit(orb)
            # an arrival at the high end of its edge anchors the direction:
            # the parser reads "first occurrence to second occurrence"
            for d in chosen:
                if self.alpha[d] < d:
                    lines.append("orient %d %d" % (comp, renum[d]))
                    break
            else:
                raise DiagramError(
                    "orientation of strand %d is not representable in text form" % comp
                )
        return "\n".join(lines) + ("\n" if lines else "")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Diagram):
            return NotImplemented
        return (
            self.over_parities == other.over_parities
            and self.alpha == other.alpha
            and self.oloops == other.oloops
            and self.tubes == other.tubes
            and self.oriented_arrivals == other.oriented_arrivals
        )

    def __hash__(self) -> int:
        return hash(
            (self.over_parities, self.alpha, tuple(sorted(self.oloops.items())), self.tubes)
        )

    def __repr__(self) -> str:
        extra = ""
        if self.oloops:
            extra += ", oloops=%r" % (self.oloops,)
        if self.tubes:
            extra += ", tubes=%r" % (list(self.tubes),)
        return "Diagram(c=%d, genus=%d%s)" % (self.n, self.genus(), extra)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

_FACE_RE = re.compile(r"^f(\d+)$")


def parse_sld(text: str) -> Diagram:
    """Parse diagram text; see the module docstring for the grammar."""
    crossings: List[Tuple[str, str, str, str]] = []
    parities: List[int] = []
    o_lines: List[Tuple[int, str, str]] = []
    tube_lines: List[Tuple[int, str, str]] = []
    orient_lines: List[Tuple[int, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "X":
            body = parts[1:]
            parity = 0
            if body and body[-1].startswith("over="):
                flag = body.pop()
                if flag == "over=odd":
                    parity = 1
                elif flag != "over=even":
                    raise DiagramError("line %d: unknown flag %r" % (lineno, flag))
            if len(body) != 4:
                raise DiagramError("line %d: X needs four edge labels" % lineno)
            crossings.append((body[0], body[1], body[2], body[3]))
            parities.append(parity)
        elif kind == "O":
            if len(parts) != 3:
                raise DiagramError("line %d: O needs a face and a count" % lineno)
            o_lines.append((lineno, parts[1], parts[2]))
        elif kind == "tube":
            if len(parts) != 3:
                raise DiagramError("line %d: tube needs two faces" % lineno)
            tube_lines.append((lineno, parts[1], parts[2]))
        elif kind == "orient":
            if len(parts) != 3:
                raise DiagramError("line %d: orient needs a strand and an edge label" % lineno)
            orient_lines.append((lineno, parts[1], parts[2]))
        else:
            raise DiagramError("line %d: unknown directive %r" % (lineno, kind))

    occurrences: Dict[str, List[int]] = {}
    for v, labels in enumerate(crossings):
        for s, label in enumerate(labels):
            occurrences.setdefault(label, []).append(dart(v, s))
    bad = sorted(label for label, ds in occurrences.items() if len(ds) != 2)
    if bad:
        raise DiagramError("edge labels must appear exactly twice: %s" % ", ".join(bad))
    n = len(crossings)
    alpha = [-1] * (4 * n)
    for d1, d2 in occurrences.values():
        alpha[d1] = d2
        alpha[d2] = d1

    def parse_face(tok: str, lineno: int) -> int:
        m = _FACE_RE.match(tok)
        if not m:
            raise DiagramError("line %d: expected a face label like f0, got %r" % (lineno, tok))
        return int(m.group(1))

    oloops: Dict[int, int] = {}
    for lineno, ftok, ktok in o_lines:
        f = parse_face(ftok, lineno)
        try:
            k = int(ktok)
        except ValueError:
            raise DiagramError("line %d: loop count must be an integer" % lineno) from None
        oloops[f] = oloops.get(f, 0) + k
    tubes = [(parse_face(a, ln), parse_face(b, ln)) for ln, a, b in tube_lines]

    orients: Dict[int, int] = {}
    for lineno, ctok, ltok in orient_lines:
        try:
            comp = int(ctok)
        except ValueError:
            raise DiagramError("line %d: strand index must be an integer" % lineno) from None
        if ltok not in occurrences:
            raise DiagramError("line %d: unknown edge label %r" % (lineno, ltok))
        if comp in orients:
            raise DiagramError("line %d: strand %d oriented twice" % (lineno, comp))
        orients[comp] = min(occurrences[ltok])  # first occurrence in file order

    return Diagram(parities, alpha, oloops, tubes, orients)


def load_sld(path) -> Diagram:
    """Parse a .sld file from a path."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_sld(fh.read())
