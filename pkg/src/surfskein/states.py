"""Smoothing states of a surface link diagram and their resolved loops.

A state picks one of the two planar smoothings at every crossing.  States
are packed into an int bitmask: bit ``v`` clear selects the first
smoothing at crossing ``v`` (the one joining the corners of positive
weight), bit ``v`` set selects the second.  With the diagram's over-strand
parities this determines, per crossing, which pair of opposite corners
the smoothing merges: writing ``m = parity XOR bit``, the merged corners
are ``m`` and ``m+2``, and the two smoothing arcs connect slots
``(1,2),(3,0)`` when ``m == 0`` and ``(0,1),(2,3)`` when ``m == 1``.

Resolving a state replaces every crossing by its arcs, turning the
diagram into a disjoint union of loops on the assembled surface (the
crossingless circles of the diagram come along unchanged).  The engine
reports each loop as a cyclic dart/site sequence, decides whether it
bounds a disk, and attaches its first-homology class both mod 2 and over
the integers.  Disk-bounding is decided by surgery bookkeeping: the
complementary regions of the resolved diagram are the diagram regions
glued across the merged corners (Euler characteristics add and drop by
one per gluing), every loop is an edge between the regions on its two
sides, and a loop bounds a disk exactly when that edge is a bridge whose
removal cuts off a side of total Euler characteristic one.

The module also classifies how the loop count changes when one crossing
is resmoothed (split, merge, or the count-preserving rewiring of a single
loop), searches whole smoothing cubes for the count-preserving case, and
solves for the states whose smoothings alternate along every strand.

Exhaustive enumerations refuse to start above a size ceiling; the
``SKEIN_MAX_STATES`` environment variable overrides the ceiling with a
maximum admissible number of states.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterator, List, Optional, Tuple

from .diagram import (
    Diagram,
    DiagramError,
    dart_slot,
    dart_vertex,
    gf2_echelon,
)

__all__ = [
    "DEFAULT_STATE_SUM_LIMIT",
    "DEFAULT_CUBE_SCAN_LIMIT",
    "EnumerationLimitError",
    "Loop",
    "ResolvedState",
    "adjacent_states",
    "all_states",
    "alternating_state",
    "alternating_states",
    "check_cube_scan_size",
    "check_state_sum_size",
    "find_single_cycle_bifurcation",
    "has_single_cycle_bifurcation",
    "is_alternating_state",
    "loop_count",
    "resolve",
    "transition_type",
]

# Crossing ceilings for full enumeration.  A state sum touches 2^c states
# once; a cube scan resolves every state and its neighbours.
DEFAULT_STATE_SUM_LIMIT = 24
DEFAULT_CUBE_SCAN_LIMIT = 12

_ENV_MAX_STATES = "SKEIN_MAX_STATES"


class EnumerationLimitError(RuntimeError):
    """Raised when an exhaustive enumeration would exceed the size ceiling."""


def _max_states(default_crossings: int) -> int:
    raw = os.environ.get(_ENV_MAX_STATES)
    if raw is not None:
        try:
            value = int(raw)
        except ValueError as exc:
            raise EnumerationLimitError(
                "%s must be an integer, got %r" % (_ENV_MAX_STATES, raw)
            ) from exc
        if value >= 1:
            return value
        raise EnumerationLimitError(
            "%s must be positive, got %d" % (_ENV_MAX_STATES, value)
        )
    return 1 << default_crossings


def check_state_sum_size(n_crossings: int) -> None:
    """Refuse state sums whose cube exceeds the enumeration ceiling."""
    limit = _max_states(DEFAULT_STATE_SUM_LIMIT)
    if (1 << n_crossings) > limit:
        raise EnumerationLimitError(
            "state sum over %d crossings needs %d states, above the ceiling %d"
            " (set %s to raise it)"
            % (n_crossings, 1 << n_crossings, limit, _ENV_MAX_STATES)
        )


def check_cube_scan_size(n_crossings: int) -> None:
    """Refuse whole-cube adjacency scans beyond the (smaller) scan ceiling."""
    limit = _max_states(DEFAULT_CUBE_SCAN_LIMIT)
    if (1 << n_crossings) > limit:
        raise EnumerationLimitError(
            "cube scan over %d crossings needs %d states, above the ceiling %d"
            " (set %s to raise it)"
            % (n_crossings, 1 << n_crossings, limit, _ENV_MAX_STATES)
        )


# ---------------------------------------------------------------------------
# resolved loops
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Loop:
    """One loop of a resolved state.

    ``darts`` is the cyclic sequence of arrival half-edges in traversal
    order, starting from the least dart of the loop and following the
    direction in which that dart is an arrival; ``sites`` gives, for each
    arrival, the crossing together with the entry and exit slots of the
    smoothing arc used there.  Crossingless circles carry empty
    sequences and record the face they live on instead.

    ``edge_mask``/``edge_vector`` are the loop's cycle coordinates (mod 2
    and integral) on the diagram edges; ``class_gf2``/``class_int`` are
    the corresponding first-homology classes of the assembled surface,
    the integral one normalised up to sign.  ``contractible`` records
    whether the loop bounds a disk in the surface.
    """

    index: int
    darts: Tuple[int, ...]
    sites: Tuple[Tuple[int, int, int], ...]
    edge_mask: int
    edge_vector: Tuple[int, ...]
    contractible: bool
    class_gf2: int
    class_int: Tuple[int, ...]
    oloop_face: Optional[int] = None

    @property
    def is_circle_component(self) -> bool:
        """True for a loop that is a crossingless circle of the diagram."""
        return self.oloop_face is not None

    def __len__(self) -> int:
        return len(self.sites)


@dataclass(frozen=True)
class ResolvedState:
    """A state together with the full analysis of its loops."""

    diagram: Diagram
    state: int
    loops: Tuple[Loop, ...]

    @property
    def size(self) -> int:
        """Total number of loops, crossingless circles included."""
        return len(self.loops)

    @cached_property
    def contractible_count(self) -> int:
        """Number of loops bounding disks (the trivial loops)."""
        return sum(1 for lp in self.loops if lp.contractible)

    @property
    def reduced_size(self) -> int:
        """Number of loops that do not bound disks."""
        return self.size - self.contractible_count

    @cached_property
    def gf2_rank(self) -> int:
        """Rank of the span of the loops' mod-2 homology classes."""
        return len(gf2_echelon(lp.class_gf2 for lp in self.loops))

    @property
    def kernel_dim(self) -> int:
        """Number of loops minus the mod-2 rank of their classes."""
        return self.size - self.gf2_rank

    @property
    def a_count(self) -> int:
        """Crossings given the first smoothing."""
        return self.diagram.n - self.b_count

    @property
    def b_count(self) -> int:
        """Crossings given the second smoothing."""
        return self.state.bit_count()

    @property
    def weight_exponent(self) -> int:
        """First-smoothing count minus second-smoothing count."""
        return self.diagram.n - 2 * self.state.bit_count()

    def reduced_loops(self) -> Tuple[Loop, ...]:
        """The loops that do not bound disks, in loop order."""
        return tuple(lp for lp in self.loops if not lp.contractible)

    def reduced_key(self, level: int):
        """Hashable summary of the non-disk loops at the given fidelity.

        Level 0 keeps their count, level 1 the multiset of mod-2 homology
        classes, level 2 pairs the level-1 multiset with the multiset of
        integral classes up to sign.  Equal level-2 keys therefore force
        equal level-1 keys, which force equal counts; all three collapse
        disk-bounding loops completely.
        """
        if level == 0:
            return self.reduced_size
        if level == 1:
            return tuple(sorted(lp.class_gf2 for lp in self.reduced_loops()))
        if level == 2:
            return (
                self.reduced_key(1),
                tuple(sorted(lp.class_int for lp in self.reduced_loops())),
            )
        raise DiagramError("key level must be 0, 1 or 2, got %r" % (level,))


# ---------------------------------------------------------------------------
# resolution
# ---------------------------------------------------------------------------


def _merged_parities(diagram: Diagram, state: int) -> List[int]:
    if state < 0 or state >> diagram.n:
        raise DiagramError(
            "state %r out of range for %d crossings" % (state, diagram.n)
        )
    return [
        diagram.over_parities[v] ^ ((state >> v) & 1) for v in range(diagram.n)
    ]


def _trace_loops(
    diagram: Diagram, state: int
) -> List[Tuple[List[int], List[Tuple[int, int, int]]]]:
    """Cyclic arrival-dart and site sequences, one pair per loop.

    Every loop has two traversal directions; the one containing the
    loop's least dart as an arrival is kept, so the listing is canonical
    and ordered by least dart.
    """
    merged = _merged_parities(diagram, state)
    slot_xor = [3 if m == 0 else 1 for m in merged]
    alpha = diagram.alpha
    visited = bytearray(diagram.n_darts)
    out: List[Tuple[List[int], List[Tuple[int, int, int]]]] = []
    for start in range(diagram.n_darts):
        if visited[start]:
            continue
        darts: List[int] = []
        sites: List[Tuple[int, int, int]] = []
        d = start
        while True:
            visited[d] = 1
            v, j = d >> 2, d & 3
            exit_slot = j ^ slot_xor[v]
            exit_dart = 4 * v + exit_slot
            visited[exit_dart] = 1  # arrival of the reversed traversal
            darts.append(d)
            sites.append((v, j, exit_slot))
            d = alpha[exit_dart]
            if d == start:
                break
        out.append((darts, sites))
    return out


def loop_count(diagram: Diagram, state: int) -> int:
    """Number of loops of the resolved state, crossingless circles included."""
    merged = _merged_parities(diagram, state)
    slot_xor = [3 if m == 0 else 1 for m in merged]
    alpha = diagram.alpha
    visited = bytearray(diagram.n_darts)
    count = sum(diagram.oloops.values())
    for start in range(diagram.n_darts):
        if visited[start]:
            continue
        count += 1
        d = start
        while True:
            visited[d] = 1
            exit_dart = (d & ~3) | ((d & 3) ^ slot_xor[d >> 2])
            visited[exit_dart] = 1
            d = alpha[exit_dart]
            if d == start:
                break
    return count


def _surgered_regions(
    diagram: Diagram, merged: List[int]
) -> Tuple[List[int], List[int]]:
    """Union-find of diagram regions glued across merged corners.

    Returns (parent table over region indices, Euler characteristic per
    root).  Crossingless circles have already cut their disks out of the
    ambient patches, so each region starts at its Euler characteristic
    minus its circle count; gluing two patches along an arc drops the
    total by one.
    """
    regions = diagram.regions()
    parent = list(range(len(regions)))
    chi = [reg.euler - reg.oloops for reg in regions]

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v, m in enumerate(merged):
        ra = find(diagram.region_of_face(diagram.face_at_corner(v, m)))
        rb = find(diagram.region_of_face(diagram.face_at_corner(v, (m + 2) & 3)))
        if ra == rb:
            chi[ra] -= 1
        else:
            parent[ra] = rb
            chi[rb] = chi[ra] + chi[rb] - 1
    for x in range(len(parent)):
        find(x)
    return parent, chi


def _bridge_disk_sides(
    n_nodes: int, chi: List[int], edge_ends: List[Tuple[int, int]]
) -> List[bool]:
    """Which multigraph edges are bridges cutting off a side of total chi 1.

    Nodes carry Euler characteristics; an edge stands for a loop with the
    two side regions as endpoints.  Cutting the surface along the loop
    disconnects it exactly when the edge is a bridge, and the two pieces
    have the Euler characteristics of the two component sums, so the loop
    bounds a disk exactly when one of them sums to one.
    """
    adj: List[List[Tuple[int, int]]] = [[] for _ in range(n_nodes)]
    for eid, (a, b) in enumerate(edge_ends):
        adj[a].append((b, eid))
        adj[b].append((a, eid))
    disc = [-1] * n_nodes
    low = [0] * n_nodes
    sub = list(chi)
    ptr = [0] * n_nodes
    in_edge = [-1] * n_nodes
    comp_of = [-1] * n_nodes
    comp_chi: List[int] = []
    bridge_side: Dict[int, int] = {}  # edge id -> chi of the cut-off side
    edge_comp = [0] * len(edge_ends)
    timer = 0
    for root in range(n_nodes):
        if disc[root] >= 0:
            continue
        comp = len(comp_chi)
        comp_chi.append(0)
        disc[root] = low[root] = timer
        timer += 1
        comp_of[root] = comp
        stack = [root]
        while stack:
            node = stack[-1]
            if ptr[node] < len(adj[node]):
                nb, eid = adj[node][ptr[node]]
                ptr[node] += 1
                edge_comp[eid] = comp
                if eid == in_edge[node]:
                    continue
                if disc[nb] < 0:
                    disc[nb] = low[nb] = timer
                    timer += 1
                    comp_of[nb] = comp
                    in_edge[nb] = eid
                    stack.append(nb)
                elif disc[nb] < low[node]:
                    low[node] = disc[nb]
            else:
                stack.pop()
                if stack:
                    parent = stack[-1]
                    if low[node] < low[parent]:
                        low[parent] = low[node]
                    sub[parent] += sub[node]
                    if low[node] > disc[parent]:
                        bridge_side[in_edge[node]] = sub[node]
        comp_chi[comp] = sub[root]
    result = [False] * len(edge_ends)
    for eid, side in bridge_side.items():
        total = comp_chi[edge_comp[eid]]
        result[eid] = side == 1 or total - side == 1
    return result


def resolve(diagram: Diagram, state: int) -> ResolvedState:
    """Resolve every crossing of the diagram according to the state.

    Loops are listed crossing loops first, ordered by least dart, then
    the crossingless circles in face order.  The analysis per loop covers
    disk-bounding and both homology classes; see Loop.
    """
    merged = _merged_parities(diagram, state)
    traced = _trace_loops(diagram, state)
    homology = diagram.homology
    n_edges = diagram.n_edges

    raw: List[dict] = []
    for darts, sites in traced:
        mask = 0
        vec = [0] * n_edges
        for d in darts:
            ei = diagram.edge_index[d]
            mask ^= 1 << ei
            vec[ei] += 1 if diagram.alpha[d] < d else -1
        raw.append(
            {
                "darts": tuple(darts),
                "sites": tuple(sites),
                "mask": mask,
                "vec": vec,
                "oloop_face": None,
            }
        )
    for face in sorted(diagram.oloops):
        for _ in range(diagram.oloops[face]):
            raw.append(
                {
                    "darts": (),
                    "sites": (),
                    "mask": 0,
                    "vec": [0] * n_edges,
                    "oloop_face": face,
                }
            )

    # Sides: regions of the resolved diagram's complement, then one graph
    # edge per loop between the regions on its two sides.
    parent, chi = _surgered_regions(diagram, merged)
    n_regions = len(parent)
    node_chi = [chi[r] if parent[r] == r else 0 for r in range(n_regions)]
    edge_ends: List[Tuple[int, int]] = []
    leaf_base = n_regions
    for entry in raw:
        if entry["oloop_face"] is not None:
            node_chi.append(1)  # the disk the circle cuts out
            ambient = parent[diagram.region_of_face(entry["oloop_face"])]
            edge_ends.append((leaf_base, ambient))
            leaf_base += 1
        else:
            v, _, exit_slot = entry["sites"][0]
            left = parent[
                diagram.region_of_face(diagram.face_at_corner(v, exit_slot))
            ]
            right = parent[
                diagram.region_of_face(
                    diagram.face_at_corner(v, (exit_slot - 1) & 3)
                )
            ]
            edge_ends.append((left, right))
    disk = _bridge_disk_sides(leaf_base, node_chi, edge_ends)

    loops = tuple(
        Loop(
            index=i,
            darts=entry["darts"],
            sites=entry["sites"],
            edge_mask=entry["mask"],
            edge_vector=tuple(entry["vec"]),
            contractible=disk[i],
            class_gf2=homology.class_mod2(entry["mask"]),
            class_int=homology.class_integral(entry["vec"]),
            oloop_face=entry["oloop_face"],
        )
        for i, entry in enumerate(raw)
    )
    return ResolvedState(diagram, state, loops)


# ---------------------------------------------------------------------------
# the smoothing cube
# ---------------------------------------------------------------------------


def all_states(diagram: Diagram) -> range:
    """The full smoothing cube, guarded by the state-sum ceiling."""
    check_state_sum_size(diagram.n)
    return range(1 << diagram.n)


def adjacent_states(diagram: Diagram, state: int) -> List[int]:
    """States differing from this one at exactly one crossing."""
    _merged_parities(diagram, state)  # validates the state
    return [state ^ (1 << v) for v in range(diagram.n)]


def transition_type(diagram: Diagram, state: int, other: int) -> str:
    """How the loops change when one crossing is resmoothed.

    Returns "split" when the loop count rises by one, "merge" when it
    drops by one, and "single_cycle" when one loop is rewired onto itself
    and the count stays put.  The two states must differ at exactly one
    crossing.
    """
    changed = state ^ other
    if changed == 0 or changed & (changed - 1):
        raise DiagramError(
            "states %r and %r do not differ at exactly one crossing"
            % (state, other)
        )
    before = loop_count(diagram, state)
    after = loop_count(diagram, other)
    if after == before + 1:
        return "split"
    if after == before - 1:
        return "merge"
    if after == before:
        return "single_cycle"
    raise AssertionError(
        "loop count moved from %d to %d over one crossing" % (before, after)
    )


def find_single_cycle_bifurcation(
    diagram: Diagram,
) -> Optional[Tuple[int, int]]:
    """A (state, crossing) pair whose resmoothing preserves the loop count.

    Scans the whole smoothing cube, so it refuses diagrams above the cube
    scan ceiling.  Returns the least witness in (state, crossing) order,
    or None when every resmoothing everywhere splits or merges.
    """
    check_cube_scan_size(diagram.n)
    counts = [loop_count(diagram, s) for s in range(1 << diagram.n)]
    for state in range(1 << diagram.n):
        for v in range(diagram.n):
            other = state | (1 << v)
            if other != state and counts[state] == counts[other]:
                return state, v
    return None


def has_single_cycle_bifurcation(diagram: Diagram) -> bool:
    """True when some resmoothing somewhere preserves the loop count."""
    return find_single_cycle_bifurcation(diagram) is not None


# ---------------------------------------------------------------------------
# alternating states
# ---------------------------------------------------------------------------


def is_alternating_state(diagram: Diagram, state: int) -> bool:
    """True when the state's smoothing turns alternate along every strand.

    Equivalently, the merged-corner parities solve the same edge
    constraints that over-parities of an alternating diagram solve; the
    all-first-smoothing state of a diagram is alternating exactly when
    the diagram itself is.
    """
    merged = _merged_parities(diagram, state)
    return all(
        merged[dart_vertex(d)] ^ merged[dart_vertex(e)]
        == diagram._edge_parity_rhs(d)
        for d, e in diagram.edges
    )


def _alternating_base(diagram: Diagram) -> Optional[Tuple[int, Tuple[int, ...]]]:
    data = diagram.alternating_parities()
    if data is None:
        return None
    base, masks = data
    merged_int = 0
    for v, m in enumerate(base):
        merged_int |= m << v
    parity_int = 0
    for v, p in enumerate(diagram.over_parities):
        parity_int |= p << v
    return merged_int ^ parity_int, masks


def alternating_state(diagram: Diagram) -> Optional[int]:
    """The least state whose smoothings alternate along every strand.

    None when the underlying shadow admits no such state.  Solutions come
    in pairs per crossing component (flip every smoothing in it), and the
    returned one minimises the state bitmask.
    """
    found = _alternating_base(diagram)
    if found is None:
        return None
    state, masks = found
    for mask in masks:
        if (state & mask) > ((state & mask) ^ mask):
            state ^= mask
    return state


def alternating_states(diagram: Diagram) -> Iterator[int]:
    """All states whose smoothings alternate, in increasing bitmask order."""
    found = _alternating_base(diagram)
    if found is None:
        return
    base, masks = found
    seen = []
    for combo in range(1 << len(masks)):
        state = base
        for i, mask in enumerate(masks):
            if (combo >> i) & 1:
                state ^= mask
        seen.append(state)
    yield from sorted(seen)
