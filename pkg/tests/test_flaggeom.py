"""Flag geometry: enumeration, lines, distance, closure, hyperplane predicates."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fglab.flaggeom import (
    PENCIL_ON_LINE,
    PENCIL_ON_SUBHYPERPLANE,
    FlagSet,
    GeometryError,
    NotASubspace,
    TooLarge,
    build_geometry,
    collinear,
    distance,
    first_distance3_pair,
    is_geometric_hyperplane,
    is_maximal_subspace,
    is_subspace,
    maximal_singular,
    seeded_distance3_pairs,
    subspace_closure,
)
from fglab.gf import make_field
from fglab.hyper import quasi_singular
from fglab.rng import SplitMix64


# -- construction ------------------------------------------------------------

@pytest.mark.parametrize("pk,n,flags,lines", [
    ((2, 1), 2, 21, 14),
    ((3, 1), 2, 52, 26),
    ((2, 2), 2, 105, 42),
    ((2, 1), 3, 105, 210),
])
def test_flag_and_line_counts(pk, n, flags, lines):
    g = build_geometry(n, make_field(*pk))
    assert g.num_flags == flags
    assert len(g.lines) == lines
    q = g.field.order
    assert all(len(ln.member_indices) == q + 1 for ln in g.lines)


def test_flag_count_formula(geom_q4):
    q = 4
    assert geom_q4.num_flags == (q * q + q + 1) * (q + 1)


def test_too_large():
    with pytest.raises(TooLarge):
        build_geometry(2, make_field(2), max_flags=10)
    with pytest.raises(TooLarge):
        build_geometry(3, make_field(3, 2))
    with pytest.raises(GeometryError):
        build_geometry(1, make_field(2))


def test_every_flag_on_lines_of_both_kinds(geom_q3):
    for f in geom_q3.flags:
        kinds = {geom_q3.lines[li].kind for li in geom_q3.flag_to_lines[f.index]}
        assert kinds == {PENCIL_ON_LINE, PENCIL_ON_SUBHYPERPLANE}


def test_deterministic_enumeration(gf4):
    a = build_geometry(2, gf4)
    b = build_geometry(2, gf4)
    assert [f.point.rep.codes for f in a.flags] == [f.point.rep.codes for f in b.flags]
    assert [ln.member_indices for ln in a.lines] == [ln.member_indices for ln in b.lines]


def test_two_flags_on_at_most_one_common_line(geom_q2):
    for f in geom_q2.flags:
        for g in geom_q2.flags:
            if g.index <= f.index:
                continue
            shared = set(geom_q2.flag_to_lines[f.index]) & set(geom_q2.flag_to_lines[g.index])
            assert len(shared) <= 1
            assert (len(shared) == 1) == collinear(f, g)


# -- collinearity and distance -----------------------------------------------

def test_collinear_rules(geom_q2):
    f = geom_q2.flags[0]
    same_point = next(g for g in geom_q2.flags if g.point.index == f.point.index and g != f)
    same_hyp = next(g for g in geom_q2.flags if g.hyperplane.index == f.hyperplane.index and g != f)
    assert collinear(f, same_point) and collinear(f, same_hyp)
    assert not collinear(f, f)


def test_collinear_counterexample(geom_q2):
    # ((1:0:0), [0,0,1]) and ((0:1:0), [1,0,0]): both coordinates differ
    f = geom_q2.flag_of(
        next(p.index for p in geom_q2.points if p.rep.codes == (1, 0, 0)),
        next(h.index for h in geom_q2.hyperplanes if h.rep.codes == (0, 0, 1)),
    )
    g = geom_q2.flag_of(
        next(p.index for p in geom_q2.points if p.rep.codes == (0, 1, 0)),
        next(h.index for h in geom_q2.hyperplanes if h.rep.codes == (1, 0, 0)),
    )
    assert not collinear(f, g)
    assert distance(f, g) == 2  # the second point lies in the first hyperplane


def test_distance_zero_and_first_distance3_pair(geom_q2):
    assert distance(geom_q2.flags[5], geom_q2.flags[5]) == 0
    f, g = first_distance3_pair(geom_q2)
    assert (f.index, g.index) == (0, 3)
    assert f.point.rep.codes == (0, 0, 1) and f.hyperplane.rep.codes == (0, 1, 0)
    assert g.point.rep.codes == (0, 1, 0) and g.hyperplane.rep.codes == (0, 0, 1)


def test_distance_rule_matches_line_walk_exhaustively(geom_q2, geom_q3):
    for g in (geom_q2, geom_q3):
        for f in g.flags:
            walked = g.bfs_distances(f.index)
            for h in g.flags:
                assert distance(f, h) == walked[h.index]


def test_diameter_is_three(geom_q2, geom_q3):
    assert geom_q2.diameter() == 3
    assert geom_q3.diameter() == 3


def test_seeded_distance3_pairs(geom_q2):
    pairs = seeded_distance3_pairs(geom_q2, SplitMix64(7), 4)
    assert len(pairs) == 4
    assert all(distance(f, g) == 3 for f, g in pairs)
    again = seeded_distance3_pairs(geom_q2, SplitMix64(7), 4)
    assert [(f.index, g.index) for f, g in pairs] == [(f.index, g.index) for f, g in again]


# -- maximal singular subspaces ----------------------------------------------

def test_maximal_singular_counts(geom_q2):
    a = geom_q2.points[3]
    ma = maximal_singular(a, geom_q2)
    assert ma.count() == 3  # three lines of the plane through a point
    A = geom_q2.hyperplanes[3]
    mA = maximal_singular(A, geom_q2)
    assert mA.count() == 3


def test_maximal_singular_is_a_clique_and_maximal(geom_q2):
    for base in list(geom_q2.points) + list(geom_q2.hyperplanes):
        m = maximal_singular(base, geom_q2)
        members = [geom_q2.flags[i] for i in m.indices()]
        for f in members:
            for g in members:
                if f.index != g.index:
                    assert collinear(f, g)
        for f in geom_q2.flags:
            if f.index in m:
                continue
            hits = sum(1 for g in members if collinear(f, g))
            assert hits <= 1  # also shows no external flag is collinear with all


def test_same_family_disjoint_cross_family_at_most_one(geom_q3):
    pts = geom_q3.points
    hyps = geom_q3.hyperplanes
    for i in range(4):
        for j in range(i + 1, 4):
            assert (maximal_singular(pts[i], geom_q3) & maximal_singular(pts[j], geom_q3)).is_empty()
            assert (maximal_singular(hyps[i], geom_q3) & maximal_singular(hyps[j], geom_q3)).is_empty()
    for a in pts[:5]:
        for A in hyps[:5]:
            inter = maximal_singular(a, geom_q3) & maximal_singular(A, geom_q3)
            assert inter.count() <= 1


# -- closure and subspace predicates -----------------------------------------

def test_closure_of_two_collinear_flags_is_their_line(geom_q2):
    ln = geom_q2.lines[0]
    seed = FlagSet.of(geom_q2.num_flags, ln.member_indices[:2])
    assert subspace_closure(seed, geom_q2) == ln.members


def test_closure_of_quasi_singular_hyperplane_plus_flag_is_everything(geom_q2):
    h = quasi_singular(geom_q2.points[0], geom_q2.hyperplanes[4], geom_q2)
    outside = next(i for i in range(geom_q2.num_flags) if i not in h)
    assert subspace_closure(h.with_index(outside), geom_q2) == geom_q2.full_set()


def test_closure_of_empty_set(geom_q2):
    assert subspace_closure(geom_q2.empty_set(), geom_q2) == geom_q2.empty_set()


@given(bits=st.integers(0, (1 << 21) - 1))
@settings(max_examples=120, deadline=None)
def test_closure_is_extensive_monotone_idempotent(geom_q2, bits):
    g = geom_q2
    s = g.flag_set(bits)
    closed = subspace_closure(s, g)
    assert s.is_subset(closed)
    assert subspace_closure(closed, g) == closed
    assert is_subspace(closed, g)
    smaller = g.flag_set(s.bits & (s.bits >> 1))  # a subset of s
    assert subspace_closure(smaller, g).is_subset(closed)


def test_is_geometric_hyperplane_cases(geom_q2):
    h = quasi_singular(geom_q2.points[2], geom_q2.hyperplanes[2], geom_q2)
    assert is_geometric_hyperplane(h, geom_q2)
    single = maximal_singular(geom_q2.points[0], geom_q2)
    assert not is_geometric_hyperplane(single, geom_q2)
    assert not is_geometric_hyperplane(geom_q2.full_set(), geom_q2)


def test_quasi_singular_hyperplanes_are_maximal_subspaces(geom_q2):
    for a in geom_q2.points:
        for A in geom_q2.hyperplanes:
            assert is_maximal_subspace(quasi_singular(a, A, geom_q2), geom_q2)


def test_single_line_is_not_maximal(geom_q2):
    assert not is_maximal_subspace(geom_q2.lines[0].members, geom_q2)


def test_is_maximal_subspace_rejects_non_subspace(geom_q2):
    ln = geom_q2.lines[0]
    twofl = FlagSet.of(geom_q2.num_flags, ln.member_indices[:2])
    with pytest.raises(NotASubspace):
        is_maximal_subspace(twofl, geom_q2)


def test_flagset_operations():
    s = FlagSet.of(8, [1, 3, 5])
    t = FlagSet.of(8, [3, 4])
    assert (s | t).indices() == [1, 3, 4, 5]
    assert (s & t).indices() == [3]
    assert (s - t).indices() == [1, 5]
    assert s.complement().count() == 5
    assert 3 in s and 2 not in s
    assert FlagSet.of(8, [3]).is_subset(s)
    with pytest.raises(GeometryError):
        s | FlagSet.of(9, [0])
