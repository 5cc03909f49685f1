"""Bracket-type invariants of surface link diagrams.

All polynomials are sparse integer Laurent polynomials handled as plain
dicts: exponent -> coefficient for one variable, (exponent, z-exponent)
-> coefficient for the two-variable values.  Zero coefficients are never
stored.  The loop value is ``DELTA = -A^2 - A^{-2}`` and is always
expanded into powers of A; no symbolic delta survives into results.

The state-sum invariants differ in what they remember of the loops that
do not bound disks.  The skein bracket keeps them as a key at a chosen
fidelity level (their count, their mod-2 homology classes, or those
classes together with the integral ones up to sign) and maps each key to
the Laurent polynomial collecting ``A^(a-b) * DELTA^t`` over the states
with that key, where ``a``/``b`` count the two smoothing kinds and ``t``
the disk-bounding loops.  Distinct non-disk loop systems can share a key
(homology cannot tell every pair of curves apart), in which case their
polynomials add; the degree data computed here is exact for every
quantity this package reports, but a key collision can in principle
hide a cancellation, so the span of a bracket value is a lower bound
for the span over the finest possible loop identity.

The reduced homotopy bracket forgets the non-disk loops down to their
count ``z^count``; the homological bracket instead splits the loop count
of every state as ``k + r`` with ``r`` the mod-2 rank of the loops'
homology classes and contributes ``A^(a-b) * DELTA^k * z^r``.  The
generalized Jones polynomial rescales the skein bracket per key by the
writhe normalisation in the variable ``q`` (so exponents stay integral;
``q^4`` plays the role of the classical variable).

Exhaustive state sums are guarded by the state-engine ceiling and are
reduced chunk by chunk in a fixed order, so results are deterministic
and independent of the worker-thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .diagram import Diagram, DiagramError, gf2_echelon
from .states import (
    _bridge_disk_sides,
    check_state_sum_size,
)

__all__ = [
    "DELTA",
    "BracketValue",
    "EmptyBracketError",
    "SpanBounds",
    "bipoly_a_degrees",
    "bipoly_render",
    "bipoly_to_json",
    "bipoly_z_slice",
    "bracket",
    "degree_stats",
    "homological_bracket",
    "jones",
    "key_to_json",
    "poly_add",
    "poly_degrees",
    "poly_div_exact",
    "poly_invert",
    "poly_mul",
    "poly_pow",
    "poly_render",
    "poly_scale",
    "poly_shift",
    "poly_span",
    "poly_to_json",
    "reduced_homotopy_bracket",
    "render_key",
    "span_bounds",
]

Laurent = Dict[int, int]
BiPoly = Dict[Tuple[int, int], int]

DELTA: Laurent = {2: -1, -2: -1}

_CHUNK = 2048


class EmptyBracketError(ValueError):
    """Raised when degree statistics are requested of the zero value."""


# ---------------------------------------------------------------------------
# Laurent arithmetic
# ---------------------------------------------------------------------------


def poly_add(p: Laurent, q: Laurent) -> Laurent:
    out = dict(p)
    for e, c in q.items():
        v = out.get(e, 0) + c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def poly_mul(p: Laurent, q: Laurent) -> Laurent:
    out: Laurent = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = e1 + e2
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                del out[e]
    return out


def poly_pow(p: Laurent, k: int) -> Laurent:
    if k < 0:
        raise DiagramError("negative polynomial power %d" % k)
    out: Laurent = {0: 1}
    for _ in range(k):
        out = poly_mul(out, p)
    return out


def poly_scale(p: Laurent, c: int) -> Laurent:
    if c == 0:
        return {}
    return {e: c * v for e, v in p.items()}


def poly_shift(p: Laurent, k: int) -> Laurent:
    """Multiply by the k-th power of the variable."""
    return {e + k: v for e, v in p.items()}


def poly_invert(p: Laurent) -> Laurent:
    """Substitute the inverse variable (A -> A^{-1})."""
    return {-e: v for e, v in p.items()}


def poly_degrees(p: Laurent) -> Tuple[int, int]:
    if not p:
        raise EmptyBracketError("the zero polynomial has no degrees")
    return max(p), min(p)


def poly_span(p: Laurent) -> int:
    dmax, dmin = poly_degrees(p)
    return dmax - dmin


def poly_div_exact(p: Laurent, q: Laurent) -> Optional[Laurent]:
    """The quotient p/q when the division is exact over Z, else None."""
    if not q:
        return None
    if not p:
        return {}
    qmax, qmin = poly_degrees(q)
    lead = q[qmax]
    rem = dict(p)
    out: Laurent = {}
    while rem:
        rmax = max(rem)
        if max(rem) - min(rem) < qmax - qmin:
            return None
        coef, off = divmod(rem[rmax], lead)
        if off:
            return None
        shift = rmax - qmax
        out[shift] = coef
        for e, c in q.items():
            v = rem.get(e + shift, 0) - coef * c
            if v:
                rem[e + shift] = v
            else:
                rem.pop(e + shift, None)
    return out


@lru_cache(maxsize=None)
def _delta_power(t: int) -> Tuple[Tuple[int, int], ...]:
    return tuple(sorted(poly_pow(DELTA, t).items()))


def poly_render(p: Laurent, variable: str = "A") -> str:
    """Canonical text: terms in descending degree, e.g. ``A^5 + A``."""
    if not p:
        return "0"
    parts: List[str] = []
    for e in sorted(p, reverse=True):
        c = p[e]
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            var = variable if e == 1 else "%s^%d" % (variable, e)
            body = var if mag == 1 else "%d%s" % (mag, var)
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append((" + " if c > 0 else " - ") + body)
    return "".join(parts)


def poly_to_json(p: Laurent) -> Dict[str, int]:
    return {str(e): c for e, c in sorted(p.items())}


# ---------------------------------------------------------------------------
# two-variable values
# ---------------------------------------------------------------------------


def bipoly_z_slice(b: BiPoly, z: int) -> Laurent:
    return {a: c for (a, zz), c in b.items() if zz == z}


def bipoly_a_degrees(b: BiPoly) -> Tuple[int, int]:
    if not b:
        raise EmptyBracketError("the zero value has no degrees")
    exps = [a for a, _ in b]
    return max(exps), min(exps)


def bipoly_render(b: BiPoly, variable: str = "A") -> str:
    """z-powers descending, each with its A-polynomial in parentheses."""
    if not b:
        return "0"
    zs = sorted({z for _, z in b}, reverse=True)
    parts: List[str] = []
    for z in zs:
        pol = poly_render(bipoly_z_slice(b, z), variable)
        if z == 0:
            parts.append("(%s)" % pol)
        else:
            zp = "z" if z == 1 else "z^%d" % z
            parts.append("(%s)*%s" % (pol, zp))
    return " + ".join(parts)


def bipoly_to_json(b: BiPoly) -> Dict[str, Dict[str, int]]:
    out: Dict[str, Dict[str, int]] = {}
    for z in sorted({z for _, z in b}):
        out[str(z)] = poly_to_json(bipoly_z_slice(b, z))
    return out


# ---------------------------------------------------------------------------
# loop keys
# ---------------------------------------------------------------------------


def _mask_bits(mask: int) -> List[int]:
    bits = []
    i = 0
    while mask:
        if mask & 1:
            bits.append(i)
        mask >>= 1
        i += 1
    return bits


def _render_class_mod2(mask: int) -> str:
    if mask == 0:
        return "0"
    return "+".join("e%d" % i for i in _mask_bits(mask))


def _render_class_int(vec: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in vec) + ")"


def render_key(key: Any, level: int) -> str:
    """Canonical text for a loop key at the given fidelity level."""
    if level == 0:
        return str(key)
    if level == 1:
        return "[" + ", ".join(_render_class_mod2(m) for m in key) + "]"
    if level == 2:
        mod2, ints = key
        return (
            "[" + ", ".join(_render_class_mod2(m) for m in mod2) + "] | ["
            + ", ".join(_render_class_int(v) for v in ints) + "]"
        )
    raise DiagramError("key level must be 0, 1 or 2, got %r" % (level,))


def key_to_json(key: Any, level: int) -> Any:
    if level == 0:
        return key
    if level == 1:
        return [_mask_bits(m) for m in key]
    if level == 2:
        mod2, ints = key
        return {"mod2": [_mask_bits(m) for m in mod2], "int": [list(v) for v in ints]}
    raise DiagramError("key level must be 0, 1 or 2, got %r" % (level,))


@dataclass
class BracketValue:
    """A bracket state sum split over loop keys of one fidelity level."""

    level: int
    variable: str = "A"
    terms: Dict[Any, Laurent] = field(default_factory=dict)

    def poly(self, key: Any) -> Laurent:
        return self.terms.get(key, {})

    @property
    def trivial_key(self) -> Any:
        """The key collecting the states whose loops all bound disks."""
        if self.level == 0:
            return 0
        if self.level == 1:
            return ()
        return ((), ())

    def degrees(self) -> Tuple[int, int]:
        exps = [e for p in self.terms.values() for e in p]
        if not exps:
            raise EmptyBracketError("the zero bracket has no degrees")
        return max(exps), min(exps)

    def span(self) -> int:
        dmax, dmin = self.degrees()
        return dmax - dmin

    def render(self) -> str:
        lines = []
        for key in sorted(self.terms):
            lines.append(
                "%s: %s" % (render_key(key, self.level), poly_render(self.terms[key], self.variable))
            )
        return "\n".join(lines) if lines else "0"

    def to_json(self) -> Dict[str, Any]:
        return {
            "level": self.level,
            "variable": self.variable,
            "terms": [
                {
                    "key": key_to_json(key, self.level),
                    "poly": poly_to_json(self.terms[key]),
                }
                for key in sorted(self.terms)
            ],
        }


def degree_stats(value: Any) -> Tuple[int, int, int]:
    """(d_max, d_min, span) in the A-degree of a bracket-type value.

    Accepts a BracketValue, a two-variable dict value, or a plain
    polynomial dict; raises EmptyBracketError on the zero value.
    """
    if isinstance(value, BracketValue):
        dmax, dmin = value.degrees()
    elif isinstance(value, dict):
        if not value:
            raise EmptyBracketError("the zero value has no degrees")
        first = next(iter(value))
        if isinstance(first, tuple):
            dmax, dmin = bipoly_a_degrees(value)
        else:
            dmax, dmin = poly_degrees(value)
    else:
        raise DiagramError("degree_stats expects a bracket-type value, got %r" % (value,))
    return dmax, dmin, dmax - dmin


# ---------------------------------------------------------------------------
# the state-sum walker
# ---------------------------------------------------------------------------


class _CubeContext:
    """Per-diagram tables shared by every state of one enumeration."""

    def __init__(self, diagram: Diagram):
        self.diagram = diagram
        self.n = diagram.n
        self.alpha = diagram.alpha
        self.parities = diagram.over_parities
        self.edge_index = diagram.edge_index
        self.n_edges = diagram.n_edges
        self.homology = diagram.homology
        regions = diagram.regions()
        self.n_regions = len(regions)
        self.region_chi0 = tuple(reg.euler - reg.oloops for reg in regions)
        # region at the corner ccw of each dart's slot
        self.corner_region = tuple(
            diagram.region_of_face(diagram.face_at_corner(d >> 2, d & 3))
            for d in range(diagram.n_darts)
        )
        self.oloop_ambients = tuple(
            diagram.region_of_face(f)
            for f in sorted(diagram.oloops)
            for _ in range(diagram.oloops[f])
        )

    def analyze(
        self, state: int, want_mod2: bool, want_int: bool
    ) -> Tuple[int, int, int, Optional[Tuple[int, ...]], Optional[Tuple[Tuple[int, ...], ...]]]:
        """(weight, t, total, mod-2 classes, integral classes) of one state.

        The class tuples cover the loops that do not bound disks, sorted,
        and are None unless requested.
        """
        n = self.n
        alpha = self.alpha
        merged = []
        slot_xor = []
        for v in range(n):
            m = self.parities[v] ^ ((state >> v) & 1)
            merged.append(m)
            slot_xor.append(3 if m == 0 else 1)

        visited = bytearray(4 * n)
        loop_darts: List[List[int]] = []
        loop_sides: List[Tuple[int, int]] = []
        keep = want_mod2 or want_int
        for start in range(4 * n):
            if visited[start]:
                continue
            darts: List[int] = []
            d = start
            first = True
            while True:
                visited[d] = 1
                x = (d & 3) ^ slot_xor[d >> 2]
                e = (d & ~3) | x
                visited[e] = 1
                if first:
                    loop_sides.append(
                        (self.corner_region[e], self.corner_region[(e & ~3) | ((x - 1) & 3)])
                    )
                    first = False
                if keep:
                    darts.append(d)
                d = alpha[e]
                if d == start:
                    break
            loop_darts.append(darts)

        # complement regions after the smoothing surgery
        parent = list(range(self.n_regions))
        chi = list(self.region_chi0)

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for v in range(n):
            base = 4 * v
            ra = find(self.corner_region[base | merged[v]])
            rb = find(self.corner_region[base | ((merged[v] + 2) & 3)])
            if ra == rb:
                chi[ra] -= 1
            else:
                parent[ra] = rb
                chi[rb] = chi[ra] + chi[rb] - 1

        node_chi = [chi[r] if parent[r] == r else 0 for r in range(self.n_regions)]
        edge_ends = [(find(a), find(b)) for a, b in loop_sides]
        leaf = self.n_regions
        for ambient in self.oloop_ambients:
            node_chi.append(1)
            edge_ends.append((leaf, find(ambient)))
            leaf += 1
        disk = _bridge_disk_sides(leaf, node_chi, edge_ends)

        total = len(loop_darts) + len(self.oloop_ambients)
        t = sum(disk)
        weight = n - 2 * ((state).bit_count())

        classes2: Optional[Tuple[int, ...]] = None
        classesz: Optional[Tuple[Tuple[int, ...], ...]] = None
        if keep:
            masks: List[int] = []
            vecs: List[List[int]] = []
            for i, darts in enumerate(loop_darts):
                if disk[i]:
                    continue
                mask = 0
                vec = [0] * self.n_edges if want_int else []
                for d in darts:
                    ei = self.edge_index[d]
                    mask ^= 1 << ei
                    if want_int:
                        vec[ei] += 1 if alpha[d] < d else -1
                masks.append(mask)
                if want_int:
                    vecs.append(vec)
            if want_mod2:
                classes2 = tuple(sorted(self.homology.class_mod2(m) for m in masks))
            if want_int:
                classesz = tuple(sorted(self.homology.class_integral(v) for v in vecs))
        return weight, t, total, classes2, classesz


def _map_chunks(worker: Callable[[int, int], Any], n_states: int, threads: int) -> List[Any]:
    chunks = [(a, min(a + _CHUNK, n_states)) for a in range(0, n_states, _CHUNK)]
    if threads <= 1 or len(chunks) <= 1:
        return [worker(a, b) for a, b in chunks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(worker, a, b) for a, b in chunks]
        # merged in submission order, so the result is thread-count independent
        return [f.result() for f in futures]


def _accumulate(bucket: Laurent, items: Iterable[Tuple[int, int]], shift: int) -> None:
    for e, c in items:
        ee = e + shift
        v = bucket.get(ee, 0) + c
        if v:
            bucket[ee] = v
        else:
            del bucket[ee]


# ---------------------------------------------------------------------------
# the invariants
# ---------------------------------------------------------------------------


def bracket(diagram: Diagram, level: int = 0, threads: int = 1) -> BracketValue:
    """Full smoothing state sum keyed by the non-disk loops.

    Each state contributes ``A^(a-b) * DELTA^t`` to the polynomial of its
    key; the trivial key collects the states whose loops all bound
    disks.  The result does not depend on crossing labels or thread
    count.  Raises the enumeration-limit error above the state ceiling.
    """
    if level not in (0, 1, 2):
        raise DiagramError("key level must be 0, 1 or 2, got %r" % (level,))
    check_state_sum_size(diagram.n)
    ctx = _CubeContext(diagram)
    want2 = level >= 1
    wantz = level >= 2

    def worker(start: int, stop: int) -> Dict[Any, Laurent]:
        acc: Dict[Any, Laurent] = {}
        for s in range(start, stop):
            weight, t, total, classes2, classesz = ctx.analyze(s, want2, wantz)
            if level == 0:
                key: Any = total - t
            elif level == 1:
                key = classes2
            else:
                key = (classes2, classesz)
            bucket = acc.setdefault(key, {})
            _accumulate(bucket, _delta_power(t), weight)
        return acc

    terms: Dict[Any, Laurent] = {}
    for part in _map_chunks(worker, 1 << diagram.n, threads):
        for key, poly in part.items():
            bucket = terms.setdefault(key, {})
            _accumulate(bucket, poly.items(), 0)
    for key in [k for k, p in terms.items() if not p]:
        del terms[key]
    return BracketValue(level=level, variable="A", terms=terms)


def reduced_homotopy_bracket(diagram: Diagram, threads: int = 1) -> BiPoly:
    """State sum remembering only the count of non-disk loops as z-power."""
    check_state_sum_size(diagram.n)
    ctx = _CubeContext(diagram)

    def worker(start: int, stop: int) -> BiPoly:
        acc: BiPoly = {}
        for s in range(start, stop):
            weight, t, total, _, _ = ctx.analyze(s, False, False)
            z = total - t
            for e, c in _delta_power(t):
                key = (e + weight, z)
                v = acc.get(key, 0) + c
                if v:
                    acc[key] = v
                else:
                    del acc[key]
        return acc

    out: BiPoly = {}
    for part in _map_chunks(worker, 1 << diagram.n, threads):
        for key, c in part.items():
            v = out.get(key, 0) + c
            if v:
                out[key] = v
            else:
                del out[key]
    return out


def homological_bracket(diagram: Diagram, threads: int = 1) -> BiPoly:
    """State sum splitting each loop count as k + r by mod-2 homology rank.

    A state with loop count ``|S|`` whose loop classes span an r-dimensional
    subspace contributes ``A^(a-b) * DELTA^(|S|-r) * z^r``.
    """
    check_state_sum_size(diagram.n)
    ctx = _CubeContext(diagram)

    def worker(start: int, stop: int) -> BiPoly:
        acc: BiPoly = {}
        for s in range(start, stop):
            weight, _, total, classes2, _ = ctx.analyze(s, True, False)
            rank = len(gf2_echelon(classes2))
            k = total - rank
            for e, c in _delta_power(k):
                key = (e + weight, rank)
                v = acc.get(key, 0) + c
                if v:
                    acc[key] = v
                else:
                    del acc[key]
        return acc

    out: BiPoly = {}
    for part in _map_chunks(worker, 1 << diagram.n, threads):
        for key, c in part.items():
            v = out.get(key, 0) + c
            if v:
                out[key] = v
            else:
                del out[key]
    return out


def jones(diagram: Diagram, level: int = 0, threads: int = 1) -> BracketValue:
    """Writhe-normalised bracket in the variable q, per loop key.

    Every key's polynomial becomes ``(-1)^w q^(3w) p(A -> q^{-1})`` with w
    the diagram writhe; exponents stay integral because q stands for the
    fourth root of the classical variable.  The value is unreduced: a
    crossingless unknot reports ``-q^2 - q^{-2}``.  Diagrams always carry
    an orientation (explicit directives or the default), so the writhe is
    always defined.
    """
    br = bracket(diagram, level=level, threads=threads)
    w = diagram.writhe()
    sign = -1 if w & 1 else 1
    terms = {
        key: {3 * w - e: sign * c for e, c in poly.items()}
        for key, poly in br.terms.items()
    }
    return BracketValue(level=level, variable="q", terms=terms)


# ---------------------------------------------------------------------------
# span bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpanBounds:
    """Degree and span bounds computed from the two extreme states.

    ``d_max_bound``/``d_min_bound`` bound the bracket degrees via the
    trivial-loop counts of the all-first and all-second smoothing states;
    their difference is ``span_formula``, attained exactly on diagrams
    certified adequate on both sides.  ``span_theorem_bound`` is the
    coarser bound from crossing number, component count and the rank of
    the diagram's homology image alone.
    """

    crossings: int
    components: int
    image_rank: int
    t_first: int
    t_second: int
    d_max_bound: int
    d_min_bound: int
    span_formula: int
    span_theorem_bound: int
    formula_is_exact: Optional[bool] = None

    def render(self) -> str:
        lines = [
            "crossings:          %d" % self.crossings,
            "components:         %d" % self.components,
            "image rank:         %d" % self.image_rank,
            "trivial loops:      first %d, second %d" % (self.t_first, self.t_second),
            "degree bounds:      max <= %d, min >= %d" % (self.d_max_bound, self.d_min_bound),
            "span formula:       %d%s"
            % (
                self.span_formula,
                ""
                if self.formula_is_exact is None
                else (" (exact)" if self.formula_is_exact else " (upper bound)"),
            ),
            "span theorem bound: %d" % self.span_theorem_bound,
        ]
        return "\n".join(lines)

    def to_json(self) -> Dict[str, Any]:
        return {
            "crossings": self.crossings,
            "components": self.components,
            "image_rank": self.image_rank,
            "t_first": self.t_first,
            "t_second": self.t_second,
            "d_max_bound": self.d_max_bound,
            "d_min_bound": self.d_min_bound,
            "span_formula": self.span_formula,
            "span_theorem_bound": self.span_theorem_bound,
            "formula_is_exact": self.formula_is_exact,
        }


def span_bounds(diagram: Diagram, adequate: Optional[bool] = None) -> SpanBounds:
    """Bracket degree/span bounds from the extreme states of the cube.

    ``adequate`` may be supplied by the adequacy analysis to mark the
    formula bound as exact (certified both-sided adequacy) or strict.
    """
    ctx = _CubeContext(diagram)
    n = diagram.n
    _, t_first, _, _, _ = ctx.analyze(0, False, False)
    _, t_second, _, _, _ = ctx.analyze((1 << n) - 1 if n else 0, False, False)
    comps = diagram.diagram_component_count()
    rank = diagram.image_rank()
    return SpanBounds(
        crossings=n,
        components=comps,
        image_rank=rank,
        t_first=t_first,
        t_second=t_second,
        d_max_bound=n + 2 * t_first,
        d_min_bound=-(n + 2 * t_second),
        span_formula=2 * n + 2 * t_first + 2 * t_second,
        span_theorem_bound=4 * n + 4 * comps - 2 * rank,
        formula_is_exact=adequate,
    )
