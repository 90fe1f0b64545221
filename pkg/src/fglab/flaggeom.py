"""The point-hyperplane flag geometry of PG(n, q).

Points of the geometry are incident pairs (p, H) with p a projective point
and H a projective hyperplane of PG(n, q).  Lines come in two families:

* ``pencil_on_line``: fix a hyperplane H and a projective line l inside H;
  the flags (p, H) for p on l.
* ``pencil_on_subhyperplane``: fix a codimension-2 subspace L and a point p
  on L; the flags (p, H) for hyperplanes H containing L.

Two distinct flags are collinear iff they share the point or share the
hyperplane.  Non-collinear flags (p, H), (q, K) are at distance 2 iff p in K
or q in H, else at distance 3; the collinearity graph has diameter 3.

Everything is enumerated once, deterministically: projective points and
hyperplanes are the coordinate tuples whose first nonzero code is 1, in
lexicographic code order; flags are ordered by (point index, hyperplane
index); lines by family, then by their carrier in index order.  Subsets of
flags are fixed-width bitsets (``FlagSet``).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import FglabError
from .gf import FieldSpec
from .linalg import EchelonBasis, Functional, Vector

PENCIL_ON_LINE = "pencil_on_line"
PENCIL_ON_SUBHYPERPLANE = "pencil_on_subhyperplane"


class GeometryError(FglabError, ValueError):
    pass


class TooLarge(GeometryError):
    """The requested geometry exceeds the configured flag-count bound."""


class NotASubspace(GeometryError):
    """A set claimed to be closure-stable is not."""


@dataclass(frozen=True, slots=True)
class ProjPoint:
    rep: Vector  # canonical: first nonzero coordinate is 1
    index: int


@dataclass(frozen=True, slots=True)
class ProjHyperplane:
    rep: Functional  # canonical; names the hyperplane ker(rep)
    index: int


@dataclass(frozen=True, slots=True)
class Flag:
    point: ProjPoint
    hyperplane: ProjHyperplane
    index: int


@dataclass(frozen=True, slots=True)
class FlagSet:
    """Dense bitset over flag indices of one geometry."""

    size: int
    bits: int

    @classmethod
    def empty(cls, size: int) -> "FlagSet":
        return cls(size, 0)

    @classmethod
    def full(cls, size: int) -> "FlagSet":
        return cls(size, (1 << size) - 1)

    @classmethod
    def of(cls, size: int, indices) -> "FlagSet":
        bits = 0
        for i in indices:
            bits |= 1 << i
        return cls(size, bits)

    def _check(self, other: "FlagSet") -> None:
        if self.size != other.size:
            raise GeometryError("flag sets over different geometries")

    def __contains__(self, index: int) -> bool:
        return bool(self.bits >> index & 1)

    def __or__(self, other: "FlagSet") -> "FlagSet":
        self._check(other)
        return FlagSet(self.size, self.bits | other.bits)

    def __and__(self, other: "FlagSet") -> "FlagSet":
        self._check(other)
        return FlagSet(self.size, self.bits & other.bits)

    def __sub__(self, other: "FlagSet") -> "FlagSet":
        self._check(other)
        return FlagSet(self.size, self.bits & ~other.bits)

    def with_index(self, index: int) -> "FlagSet":
        return FlagSet(self.size, self.bits | 1 << index)

    def complement(self) -> "FlagSet":
        return FlagSet(self.size, ~self.bits & ((1 << self.size) - 1))

    def count(self) -> int:
        return self.bits.bit_count()

    def indices(self) -> list[int]:
        bits, out, i = self.bits, [], 0
        while bits:
            if bits & 1:
                out.append(i)
            bits >>= 1
            i += 1
        return out

    def is_subset(self, other: "FlagSet") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def is_empty(self) -> bool:
        return self.bits == 0


@dataclass(frozen=True, slots=True)
class GeomLine:
    """A line of the flag geometry: q+1 pairwise-collinear flags.

    ``fixed`` is the index of the shared coordinate (the hyperplane for
    ``pencil_on_line``, the point for ``pencil_on_subhyperplane``) and
    ``carrier`` lists the moving coordinate's indices (the points of the
    projective line, respectively the hyperplanes through the
    codimension-2 subspace).
    """

    kind: str
    fixed: int
    carrier: tuple[int, ...]
    member_indices: tuple[int, ...]
    members: FlagSet
    index: int


class Geometry:
    """Immutable flag geometry over a FieldSpec, with incidence indexes."""

    def __init__(self, n: int, field: FieldSpec, points, hyperplanes, flags, lines):
        self.n = n
        self.field = field
        self.points: tuple[ProjPoint, ...] = points
        self.hyperplanes: tuple[ProjHyperplane, ...] = hyperplanes
        self.flags: tuple[Flag, ...] = flags
        self.lines: tuple[GeomLine, ...] = lines
        self.num_flags = len(flags)

        self.flag_index: dict[tuple[int, int], int] = {
            (f.point.index, f.hyperplane.index): f.index for f in flags
        }
        # incidence over PG(n, q)
        np_, nh = len(points), len(hyperplanes)
        self.point_mask_of_hyp = [0] * nh
        self.hyp_mask_of_point = [0] * np_
        for h in hyperplanes:
            mask = 0
            for p in points:
                if h.rep(p.rep).is_zero():
                    mask |= 1 << p.index
            self.point_mask_of_hyp[h.index] = mask
        for p in points:
            mask = 0
            for h in hyperplanes:
                if self.point_mask_of_hyp[h.index] >> p.index & 1:
                    mask |= 1 << h.index
            self.hyp_mask_of_point[p.index] = mask

        # flag masks per fixed coordinate
        self.flags_of_point = [0] * np_
        self.flags_of_hyp = [0] * nh
        for f in flags:
            self.flags_of_point[f.point.index] |= 1 << f.index
            self.flags_of_hyp[f.hyperplane.index] |= 1 << f.index
        self.flags_with_point_in = [0] * nh  # flags (p, H) with p in the given hyperplane
        for h in range(nh):
            m = 0
            pm = self.point_mask_of_hyp[h]
            for p in range(np_):
                if pm >> p & 1:
                    m |= self.flags_of_point[p]
            self.flags_with_point_in[h] = m
        self.flags_with_hyp_through = [0] * np_  # flags (p, H) with H through the given point
        for a in range(np_):
            m = 0
            hm = self.hyp_mask_of_point[a]
            for h in range(nh):
                if hm >> h & 1:
                    m |= self.flags_of_hyp[h]
            self.flags_with_hyp_through[a] = m

        # line incidence
        self.line_masks = [ln.members.bits for ln in lines]
        per_flag: list[list[int]] = [[] for _ in range(self.num_flags)]
        for ln in lines:
            for fi in ln.member_indices:
                per_flag[fi].append(ln.index)
        self.flag_to_lines: tuple[tuple[int, ...], ...] = tuple(tuple(ls) for ls in per_flag)
        neighbors = [0] * self.num_flags
        for fi in range(self.num_flags):
            m = 0
            for li in self.flag_to_lines[fi]:
                m |= self.line_masks[li]
            neighbors[fi] = m & ~(1 << fi)
        self.neighbor_masks = neighbors

    # -- set constructors ---------------------------------------------------

    def empty_set(self) -> FlagSet:
        return FlagSet.empty(self.num_flags)

    def full_set(self) -> FlagSet:
        return FlagSet.full(self.num_flags)

    def flag_set(self, bits: int) -> FlagSet:
        return FlagSet(self.num_flags, bits)

    def flag_of(self, point_index: int, hyp_index: int) -> Flag:
        return self.flags[self.flag_index[(point_index, hyp_index)]]

    def incident(self, point_index: int, hyp_index: int) -> bool:
        return bool(self.point_mask_of_hyp[hyp_index] >> point_index & 1)

    # -- graph walks ----------------------------------------------------------

    def bfs_distances(self, start: int) -> list[int]:
        """Distances from one flag to all flags, walking the line structure.

        Independent of the algebraic distance rule: adjacency is 'shares a
        line', taken from the enumerated lines.
        """
        dist = [-1] * self.num_flags
        dist[start] = 0
        frontier = 1 << start
        seen = frontier
        d = 0
        while frontier:
            nxt = 0
            bits = frontier
            i = 0
            while bits:
                if bits & 1:
                    nxt |= self.neighbor_masks[i]
                bits >>= 1
                i += 1
            nxt &= ~seen
            d += 1
            bits, i = nxt, 0
            while bits:
                if bits & 1:
                    dist[i] = d
                bits >>= 1
                i += 1
            seen |= nxt
            frontier = nxt
        return dist

    def diameter(self) -> int:
        best = 0
        for s in range(self.num_flags):
            ds = self.bfs_distances(s)
            m = max(ds)
            if min(ds) < 0:
                raise GeometryError("collinearity graph is disconnected")
            best = max(best, m)
        return best


def _canonical_tuples(q: int, length: int):
    """All length-tuples over codes 0..q-1 whose first nonzero is code 1,
    in lexicographic order: one representative per projective point."""
    for t in product(range(q), repeat=length):
        lead = next((c for c in t if c), None)
        if lead == 1:
            yield t


def _projective_lines(field: FieldSpec, reps: list[tuple[int, ...]]):
    """All 2-dimensional subspaces spanned by the given canonical reps.

    Returns a sorted list of tuples of member indices (each of size q+1).
    """
    index_of = {r: i for i, r in enumerate(reps)}
    add = field.add_table
    mul = field.mul_table
    seen: set[tuple[int, ...]] = set()
    for i in range(len(reps)):
        xi = reps[i]
        for j in range(i + 1, len(reps)):
            xj = reps[j]
            members = {i, j}
            for t in range(1, field.order):
                mt = mul[t]
                comb = tuple(add[a][mt[b]] for a, b in zip(xi, xj))
                lead = next(c for c in comb if c)
                if lead != 1:
                    inv = mul[field.inv_table[lead]]
                    comb = tuple(inv[c] for c in comb)
                members.add(index_of[comb])
            seen.add(tuple(sorted(members)))
    return sorted(seen)


def build_geometry(n: int, field: FieldSpec, max_flags: int = 5000) -> Geometry:
    """Enumerate all flags and all lines of the geometry over PG(n, q)."""
    if n < 2:
        raise GeometryError(f"n = {n} must be >= 2")
    q = field.order
    num_points = (q ** (n + 1) - 1) // (q - 1)
    hyps_through_point = (q**n - 1) // (q - 1)
    if num_points * hyps_through_point > max_flags:
        raise TooLarge(
            f"{num_points * hyps_through_point} flags exceed the bound {max_flags}"
        )

    point_reps = list(_canonical_tuples(q, n + 1))
    points = tuple(ProjPoint(Vector(field, r), i) for i, r in enumerate(point_reps))
    hyp_reps = list(_canonical_tuples(q, n + 1))
    hyperplanes = tuple(ProjHyperplane(Functional(field, r), i) for i, r in enumerate(hyp_reps))

    flags = []
    for p in points:
        for h in hyperplanes:
            if h.rep(p.rep).is_zero():
                flags.append(Flag(p, h, len(flags)))
    flags = tuple(flags)
    flag_index = {(f.point.index, f.hyperplane.index): f.index for f in flags}
    nflags = len(flags)

    pt_in_hyp = [
        [h.rep(p.rep).is_zero() for h in hyperplanes] for p in points
    ]

    lines: list[GeomLine] = []

    # family 1: fix a hyperplane, move the point along a projective line in it
    for line_members in _projective_lines(field, point_reps):
        for h in hyperplanes:
            if all(pt_in_hyp[pi][h.index] for pi in line_members[:2]):
                member_flags = tuple(flag_index[(pi, h.index)] for pi in line_members)
                lines.append(GeomLine(
                    PENCIL_ON_LINE, h.index, line_members, member_flags,
                    FlagSet.of(nflags, member_flags), len(lines),
                ))

    # family 2: fix a point on a codimension-2 subspace, move the hyperplane
    for dual_members in _projective_lines(field, hyp_reps):
        for p in points:
            if all(pt_in_hyp[p.index][hi] for hi in dual_members[:2]):
                member_flags = tuple(flag_index[(p.index, hi)] for hi in dual_members)
                lines.append(GeomLine(
                    PENCIL_ON_SUBHYPERPLANE, p.index, dual_members, member_flags,
                    FlagSet.of(nflags, member_flags), len(lines),
                ))

    return Geometry(n, field, points, hyperplanes, flags, tuple(lines))


# ---------------------------------------------------------------------------
# rule-based collinearity and distance
# ---------------------------------------------------------------------------

def collinear(f: Flag, g: Flag) -> bool:
    """Distinct flags sharing the point or sharing the hyperplane."""
    if f.point.index == g.point.index and f.hyperplane.index == g.hyperplane.index:
        return False
    return f.point.index == g.point.index or f.hyperplane.index == g.hyperplane.index


def distance(f: Flag, g: Flag) -> int:
    """Graph distance by the case rules: 0, 1, 2 or 3."""
    if f.point.index == g.point.index and f.hyperplane.index == g.hyperplane.index:
        return 0
    if f.point.index == g.point.index or f.hyperplane.index == g.hyperplane.index:
        return 1
    if g.hyperplane.rep(f.point.rep).is_zero() or f.hyperplane.rep(g.point.rep).is_zero():
        return 2
    return 3


def maximal_singular(base: ProjPoint | ProjHyperplane, geometry: Geometry) -> FlagSet:
    """All flags through a fixed point, or all flags inside a fixed hyperplane."""
    if isinstance(base, ProjPoint):
        return geometry.flag_set(geometry.flags_of_point[base.index])
    if isinstance(base, ProjHyperplane):
        return geometry.flag_set(geometry.flags_of_hyp[base.index])
    raise GeometryError(f"cannot base a singular subspace at {type(base).__name__}")


# ---------------------------------------------------------------------------
# subspaces, closure, hyperplane predicates
# ---------------------------------------------------------------------------

def _within_bits(geometry: Geometry, within: FlagSet | None) -> int:
    return within.bits if within is not None else (1 << geometry.num_flags) - 1


def subspace_closure(s: FlagSet, geometry: Geometry, within: FlagSet | None = None) -> FlagSet:
    """Least superset closed under: a line with two members is contained.

    With ``within`` given (a subspace), closure runs in the induced
    subgeometry, i.e. only lines fully inside ``within`` count.
    """
    ambient = _within_bits(geometry, within)
    if s.bits & ~ambient:
        raise GeometryError("seed set is not inside the ambient subspace")
    line_masks = geometry.line_masks
    if within is not None:
        flag_to_lines = [
            tuple(li for li in geometry.flag_to_lines[fi] if line_masks[li] & ~ambient == 0)
            for fi in range(geometry.num_flags)
        ]
    else:
        flag_to_lines = geometry.flag_to_lines

    bits = s.bits
    counts: dict[int, int] = {}
    stack = s.indices()
    for fi in stack:
        for li in flag_to_lines[fi]:
            counts[li] = counts.get(li, 0) + 1
    pending = [li for li, c in counts.items() if c >= 2]
    done: set[int] = set()
    while pending:
        li = pending.pop()
        if li in done:
            continue
        done.add(li)
        missing = line_masks[li] & ~bits
        if not missing:
            continue
        bits |= missing
        i = 0
        while missing:
            if missing & 1:
                for lj in flag_to_lines[i]:
                    if lj in done:
                        continue
                    counts[lj] = counts.get(lj, 0) + 1
                    if counts[lj] >= 2:
                        pending.append(lj)
            missing >>= 1
            i += 1
    return geometry.flag_set(bits)


def is_subspace(s: FlagSet, geometry: Geometry, within: FlagSet | None = None) -> bool:
    """Closure-stable: every (induced) line meeting s twice lies inside s."""
    ambient = _within_bits(geometry, within)
    if s.bits & ~ambient:
        return False
    for mask in geometry.line_masks:
        if within is not None and mask & ~ambient:
            continue
        hit = mask & s.bits
        if hit and hit != mask and (hit & (hit - 1)):
            return False
    return True


def is_geometric_hyperplane(s: FlagSet, geometry: Geometry, within: FlagSet | None = None) -> bool:
    """Proper subset met by every (induced) line in one flag or containing it."""
    ambient = _within_bits(geometry, within)
    if s.bits & ~ambient or s.bits == ambient:
        return False
    for mask in geometry.line_masks:
        if within is not None and mask & ~ambient:
            continue
        hit = mask & s.bits
        if hit == mask:
            continue
        if hit == 0 or hit & (hit - 1):
            return False
    return True


def is_maximal_subspace(s: FlagSet, geometry: Geometry, within: FlagSet | None = None) -> bool:
    """No proper intermediate subspace: adding any external flag generates everything."""
    ambient = _within_bits(geometry, within)
    if not is_subspace(s, geometry, within):
        raise NotASubspace("the given set is not closure-stable")
    if s.bits == ambient:
        return False
    outside = ambient & ~s.bits
    i = 0
    while outside:
        if outside & 1:
            grown = subspace_closure(s.with_index(i), geometry, within)
            if grown.bits != ambient:
                return False
        outside >>= 1
        i += 1
    return True


# ---------------------------------------------------------------------------
# distance-3 pairs
# ---------------------------------------------------------------------------

def first_distance3_pair(geometry: Geometry) -> tuple[Flag, Flag]:
    """The first pair (by flag index order) at maximal distance."""
    for f in geometry.flags:
        for g in geometry.flags:
            if g.index <= f.index:
                continue
            if distance(f, g) == 3:
                return f, g
    raise GeometryError("no distance-3 pair exists; the geometry is degenerate")


def seeded_distance3_pairs(geometry: Geometry, rng, count: int) -> list[tuple[Flag, Flag]]:
    """Deterministic sample of distance-3 pairs via rejection from the PRNG."""
    out = []
    while len(out) < count:
        f = geometry.flags[rng.below(geometry.num_flags)]
        g = geometry.flags[rng.below(geometry.num_flags)]
        if distance(f, g) == 3:
            out.append((f, g))
    return out
