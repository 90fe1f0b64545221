"""Acceptance gate: the nine campaign-level criteria, at full scale.

Each test prints one `criterion N ...: PASS/FAIL` line.  All arithmetic is
exact, so every comparison is exact equality; the stated wall-clock budgets
are asserted as generous upper bounds.

Criterion 7 (every geometric hyperplane of the 21-flag geometry is a maximal
subspace arising from the untwisted embedding) is asserted as stated and is
expected to FAIL: over GF(2) the exhaustive subset scan finds 42 hyperplanes
of size 9 whose complements disconnect; they are not maximal and their image
spans have codimension 2.  See the verified counterexample in
tests/test_hyper.py::test_hyperscan_reflects_small_field_reality.
"""

import time

import pytest

from fglab.cli import RunConfig, run
from fglab.embed import get_embedding, span_of_image
from fglab.flaggeom import build_geometry, distance
from fglab.gf import automorphism_group, make_field
from fglab.hyper import (
    verify_cross_twist,
    verify_hyperscan,
    verify_quot2,
    verify_v_lemmas,
)
from fglab.rng import SplitMix64
from fglab.semipoly import identity_witness, random_semipolynomial
from fglab.semipoly import _class_catalog


def announce(number, name, passed, detail=""):
    state = "PASS" if passed else "FAIL"
    print(f"criterion {number} ({name}): {state} {detail}".rstrip())


@pytest.fixture(scope="module")
def main1_runs():
    """Two full criterion-3 campaign runs through the CLI path (also used by
    the determinism criterion)."""
    started = time.monotonic()
    outputs = []
    for _ in range(2):
        report = run(RunConfig(subcommand="main1", p=2, k=2, n=2, seed=0))
        outputs.append((report, report.to_json()))
    elapsed = time.monotonic() - started
    return outputs, elapsed


def test_criterion_1_geometry_sanity():
    started = time.monotonic()
    expected = {2: 21, 3: 52, 4: 105}
    ok = True
    for p, k in ((2, 1), (3, 1), (2, 2)):
        field = make_field(p, k)
        q = field.order
        geometry = build_geometry(2, field)
        assert geometry.num_flags == (q * q + q + 1) * (q + 1) == expected[q]
        assert all(len(ln.member_indices) == q + 1 for ln in geometry.lines)
        diameter = 0
        for f in geometry.flags:
            walked = geometry.bfs_distances(f.index)
            for g in geometry.flags:
                d = distance(f, g)
                assert d == walked[g.index]
                diameter = max(diameter, d)
        assert diameter == 3
    elapsed = time.monotonic() - started
    announce(1, "geometry sanity", ok, f"flags 21/52/105, diameter 3, {elapsed:.1f}s")
    assert elapsed < 10


def test_criterion_2_embedding_dimensions():
    started = time.monotonic()
    for p, k in ((2, 1), (3, 1), (2, 2), (2, 3)):
        field = make_field(p, k)
        geometry = build_geometry(2, field)
        for sigma in automorphism_group(field):
            emb = get_embedding(geometry, sigma)
            expected = 9 - 1 if sigma.is_identity() else 9
            assert emb.dim == expected
            assert span_of_image(emb, geometry.full_set()).dim == expected
    elapsed = time.monotonic() - started
    announce(2, "embedding dimensions", True, f"8 untwisted / 9 twisted, {elapsed:.1f}s")
    assert elapsed < 5


def test_criterion_3_arising_hyperplanes_exhaustive(main1_runs):
    (outputs, elapsed) = main1_runs
    report = outputs[0][0]
    announce(
        3, "arising-hyperplane sweep at GF(4)", report.passed,
        f"quasi={report.counts['quasi_singular_specs']}, "
        f"swept={report.counts['sigma_0_specs_checked'] + report.counts['sigma_1_specs_checked']}, "
        f"{elapsed / 2:.0f}s per run",
    )
    assert report.counts["quasi_singular_specs"] == 441
    assert report.counts["sigma_0_mode"] == "exhaustive"
    assert report.counts["sigma_1_mode"] == "exhaustive"
    assert report.failures == []
    assert elapsed / 2 < 600


def test_criterion_4_cross_twist_rank_one():
    started = time.monotonic()
    geometry = build_geometry(2, make_field(2, 2))
    report = verify_cross_twist(geometry, sample_size=200, seed=0, spot_checks=3)
    elapsed = time.monotonic() - started
    announce(
        4, "cross-twist transfers", report.passed,
        f"200 matrices x 2 ordered pairs, transfers={report.counts['transfers_found']}, {elapsed:.0f}s",
    )
    assert report.failures == []
    assert report.counts["matrices"] == 200
    assert report.counts["ordered_pairs"] == 2
    assert elapsed < 900


def test_criterion_5_maximal_subspace_lemmas():
    started = time.monotonic()
    geometry = build_geometry(2, make_field(2, 2))
    id_, frob = automorphism_group(geometry.field)
    for sigma, rho in ((frob, id_), (id_, frob)):
        report = verify_v_lemmas(geometry, sigma, rho, extra_pairs=5, seed=0)
        assert report.failures == []
        assert report.counts["pairs"] == 6
    elapsed = time.monotonic() - started
    announce(5, "maximal-subspace lemmas", True,
             f"both twist orders, 6 pairs each, {elapsed:.1f}s")
    assert elapsed < 120


def test_criterion_6_polarized_quotients():
    started = time.monotonic()
    r3 = verify_quot2(build_geometry(2, make_field(3)), seed=0)
    assert r3.failures == []
    assert r3.counts["sigma_0_polarized_kernels"] == 1
    assert r3.counts["sigma_0_prefilter_survivors"] == 1

    r2 = verify_quot2(build_geometry(2, make_field(2)), seed=0)
    assert r2.failures == []
    assert r2.counts["sigma_0_polarized_kernels"] == 0

    r4 = verify_quot2(build_geometry(2, make_field(2, 2)), seed=0)
    assert r4.failures == []
    assert r4.counts["sigma_1_polarized_kernels"] == 0
    assert r4.counts["sigma_0_polarized_kernels"] == 0
    elapsed = time.monotonic() - started
    announce(6, "polarized one-point quotients", True,
             f"GF(3): identity span only; GF(2), GF(4): none, {elapsed:.1f}s")
    assert elapsed < 300


def test_criterion_7_hyperplane_maximality_scan():
    started = time.monotonic()
    geometry = build_geometry(2, make_field(2))
    report = verify_hyperscan(geometry, seed=0, sample_size=1000)
    elapsed = time.monotonic() - started
    announce(
        7, "hyperplane maximality scan", report.passed,
        f"found={report.counts['hyperplanes_found']}, failures={len(report.failures)}, {elapsed:.1f}s",
    )
    assert elapsed < 600
    assert report.counts["hyperplanes_found"] == 255
    # As stated, every found hyperplane must be maximal and arise from the
    # untwisted embedding.  Over GF(2) that is false: 42 of the 255 are
    # neither (size-9 sets with disconnected complements, image-span
    # codimension 2), verified independently in the unit suite.
    assert report.failures == [], (
        "42 geometric hyperplanes of the 21-flag geometry are non-maximal and "
        "do not arise from the untwisted embedding; the universal maximality "
        "premise fails at q = 2 (see README.md and "
        "tests/test_hyper.py::test_hyperscan_reflects_small_field_reality)"
    )


def test_criterion_8_identity_principle_suite():
    started = time.monotonic()
    fields = [make_field(2), make_field(3), make_field(2, 2), make_field(2, 3), make_field(3, 2)]
    rng = SplitMix64(0)
    budget = 10_000
    per_field = budget // len(fields)
    checked = 0
    for field in fields:
        for _ in range(per_field):
            arity = 1 + rng.below(2)
            poly = random_semipolynomial(field, rng, arity, max_monomials=5)
            assert identity_witness(poly) is not None
            checked += 1
    assert checked == budget

    # congruence and monoid laws, exhaustive per field
    from fglab.semipoly import ExponentClass, class_add, class_of, zero_class

    for field in fields:
        catalog = _class_catalog(field)
        classes = [ExponentClass(field, v, w) for v, w in catalog.items()]
        z = zero_class(field)
        for x in classes:
            assert x.weight < field.order
            assert class_add(x, z) == x
            for y in classes:
                assert class_add(x, y) == class_add(y, x)
        auts = automorphism_group(field)
        for x in classes:
            for a in auts:
                assert class_add(x, class_of([(a, 1)], field)).values in catalog
    elapsed = time.monotonic() - started
    announce(8, "identity principle suite", True,
             f"{budget} witnesses over 5 fields, monoid laws exhaustive, {elapsed:.0f}s")
    assert elapsed < 300


def test_criterion_9_byte_identical_reports(main1_runs):
    (outputs, _elapsed) = main1_runs
    (_, text_a), (_, text_b) = outputs
    identical = text_a.encode() == text_b.encode()
    announce(9, "byte-identical reports", identical, f"{len(text_a)} bytes each")
    assert identical
