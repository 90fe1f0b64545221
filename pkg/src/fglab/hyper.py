"""Hyperplane families of the flag geometry and the verification campaigns.

Two ways to present a geometric hyperplane:

* quasi-singular: a point a and a hyperplane A of PG(n, q), possibly not
  incident; the flags (p, H) with p in A or a in H.  Incident (a, A) gives
  the singular hyperplane: all flags at distance <= 2 from the flag (a, A).
* matrix form: a matrix M and a twist sigma; the flags ([x], [xi]) with
  xi M x^sigma = 0.  For sigma = id, M and M + lambda*I cut the same flag
  set, so specs are canonicalized by zeroing the (0, 0) entry and scaling.

The campaigns exhaustively (or, above a size threshold, by seeded sample)
verify: which hyperplanes arise from which twistings; that a hyperplane
shared between two distinct twistings forces a rank-1 matrix; the
maximal-subspace lemmas behind the no-common-cover argument; and the
classification of polarized one-point quotients.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .embed import (
    Embedding,
    arises_from,
    get_embedding,
    kernel_defines_quotient,
    preimage_of_span,
    quotient,
    quotient_condition_holds,
)
from .errors import ConfigError, FglabError, VerificationError
from .flaggeom import (
    Flag,
    FlagSet,
    Geometry,
    ProjHyperplane,
    ProjPoint,
    distance,
    first_distance3_pair,
    is_geometric_hyperplane,
    is_maximal_subspace,
    seeded_distance3_pairs,
    subspace_closure,
)
from .gf import FieldAutomorphism, automorphism_group
from .linalg import (
    EchelonBasis,
    MatrixVec,
    SubspaceBasis,
    ZeroMatrix,
    intersect_bases,
    kernel_basis,
    pairing_codes,
    projective_normal_codes,
    pure_tensor,
    rank,
    saturation_form,
    span_basis,
)
from .reporting import Report, flat_to_lists, matrix_to_lists
from .rng import SplitMix64

DEFAULT_EXHAUSTIVE_THRESHOLD = 1 << 22
DEFAULT_SAMPLE_SIZE = 1000


class HyperError(FglabError, ValueError):
    pass


class ScalarMatrixWithIdentity(HyperError):
    """Scalar matrices cut no hyperplane out of the untwisted ambient."""


class NotAHyperplane(HyperError):
    pass


class NoDistance3Pair(HyperError):
    """Defensive: the geometry has no pair of flags at maximal distance."""


# ---------------------------------------------------------------------------
# hyperplane specs and constructions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class QuasiSingularSpec:
    a: ProjPoint
    A: ProjHyperplane

    def is_singular(self, geometry: Geometry) -> bool:
        return geometry.incident(self.a.index, self.A.index)


@dataclass(frozen=True, slots=True)
class MatrixFormSpec:
    matrix: MatrixVec
    sigma: FieldAutomorphism

    def __post_init__(self):
        if self.matrix.is_zero():
            raise ZeroMatrix("matrix-form hyperplane needs a nonzero matrix")
        if self.sigma.is_identity() and self.matrix.is_scalar():
            raise ScalarMatrixWithIdentity(
                "scalar matrices are orthogonal to every untwisted flag image"
            )

    @classmethod
    def canonical(cls, matrix: MatrixVec, sigma: FieldAutomorphism) -> "MatrixFormSpec":
        """Unique representative of the spec's equivalence class.

        With sigma = id the flag set only depends on the span of M and I, so
        shift M by a multiple of I to zero the (0, 0) entry, then scale
        projectively; for sigma != id only scale.
        """
        m = matrix
        if sigma.is_identity():
            shift = MatrixVec.identity(m.field, m.size).scale(m.element(0, 0))
            m = m - shift
        return cls(m.projective_normal(), sigma)


def quasi_singular(a: ProjPoint, A: ProjHyperplane, geometry: Geometry) -> FlagSet:
    """Flags (p, H) with p in A or a in H; always a geometric hyperplane."""
    return geometry.flag_set(
        geometry.flags_with_point_in[A.index] | geometry.flags_with_hyp_through[a.index]
    )


def singular_hyperplane(flag: Flag, geometry: Geometry) -> FlagSet:
    """Quasi-singular hyperplane of an incident pair: everything at distance <= 2."""
    return quasi_singular(flag.point, flag.hyperplane, geometry)


def _hyperplane_bits(field, flat: tuple[int, ...], pairing_rows) -> int:
    bits = 0
    for i, prow in enumerate(pairing_rows):
        if pairing_codes(field, flat, prow) == 0:
            bits |= 1 << i
    return bits


def matrix_hyperplane(matrix: MatrixVec, sigma: FieldAutomorphism, geometry: Geometry) -> FlagSet:
    """The flag set {([x], [xi]) : xi M x^sigma = 0}."""
    MatrixFormSpec(matrix, sigma)  # validates: nonzero, and non-scalar when untwisted
    embedding = get_embedding(geometry, sigma)
    return geometry.flag_set(
        _hyperplane_bits(geometry.field, matrix.flat, embedding.pairing_rows)
    )


def _quasi_singular_table(geometry: Geometry) -> dict[int, tuple[int, int]]:
    """bits -> (point index, hyperplane index); built once per geometry.

    Distinct specs give distinct flag sets; a collision would contradict the
    injectivity of the quasi-singular description and is treated as fatal.
    """
    table = getattr(geometry, "_quasi_singular_table", None)
    if table is None:
        table = {}
        for a in geometry.points:
            for A in geometry.hyperplanes:
                bits = quasi_singular(a, A, geometry).bits
                if bits in table:
                    raise VerificationError(
                        f"two quasi-singular specs cut the same hyperplane: "
                        f"{table[bits]} and {(a.index, A.index)}"
                    )
                table[bits] = (a.index, A.index)
        geometry._quasi_singular_table = table
    return table


def recognize_quasi_singular(
    hyperplane: FlagSet, geometry: Geometry
) -> tuple[ProjPoint, ProjHyperplane] | None:
    """The unique (a, A) cutting this hyperplane, if any (full-scan table)."""
    if not is_geometric_hyperplane(hyperplane, geometry):
        raise NotAHyperplane("not a geometric hyperplane")
    hit = _quasi_singular_table(geometry).get(hyperplane.bits)
    if hit is None:
        return None
    return geometry.points[hit[0]], geometry.hyperplanes[hit[1]]


# ---------------------------------------------------------------------------
# enumeration helpers
# ---------------------------------------------------------------------------

def projective_flat_reps(q: int, width: int, zero_first: bool = False):
    """Flat code tuples with first nonzero entry 1, lexicographic order.

    One representative per projective class; with ``zero_first`` the leading
    entry is pinned to 0 (canonical matrix-form specs for the identity
    twist, where the class is taken modulo scalar matrices).
    """
    start = 1 if zero_first else 0
    for lead in range(start, width):
        head = (0,) * lead + (1,)
        for tail in product(range(q), repeat=width - lead - 1):
            yield head + tail


def projective_rep_count(q: int, width: int, zero_first: bool = False) -> int:
    if zero_first:
        width -= 1
    return (q**width - 1) // (q - 1)


def _flat_add_scaled_identity(field, flat: tuple[int, ...], lam: int, size: int) -> tuple[int, ...]:
    add = field.add_table
    out = list(flat)
    for i in range(size):
        out[i * size + i] = add[out[i * size + i]][lam]
    return tuple(out)


def _rank_of_flat(field, size: int, flat: tuple[int, ...]) -> int:
    acc = EchelonBasis(field, size)
    for i in range(size):
        acc.insert(flat[i * size:(i + 1) * size])
    return acc.dim


def _is_quasi_singular_spec(field, size: int, flat: tuple[int, ...], sigma: FieldAutomorphism) -> bool:
    """Rank route: rank 1 (twisted), or rank(M + lambda*I) = 1 for some lambda."""
    if not sigma.is_identity():
        return _rank_of_flat(field, size, flat) == 1
    return any(
        _rank_of_flat(field, size, _flat_add_scaled_identity(field, flat, lam, size)) == 1
        for lam in range(field.order)
    )


def _span_dim_over(field, width: int, rows, bits: int, stop_at: int) -> int:
    """Dimension of the span of rows[i] for set bits, early exit at stop_at."""
    acc = EchelonBasis(field, width)
    i = 0
    while bits:
        if bits & 1:
            acc.insert(rows[i])
            if acc.dim >= stop_at:
                return acc.dim
        bits >>= 1
        i += 1
    return acc.dim


def _span_over(field, width: int, rows, bits: int) -> EchelonBasis:
    acc = EchelonBasis(field, width)
    i = 0
    while bits:
        if bits & 1:
            acc.insert(rows[i])
        bits >>= 1
        i += 1
    return acc


# ---------------------------------------------------------------------------
# campaign: which hyperplanes arise from which twistings
# ---------------------------------------------------------------------------

def verify_main1(
    geometry: Geometry,
    sample: int | None = None,
    seed: int = 0,
    exhaustive_threshold: int = DEFAULT_EXHAUSTIVE_THRESHOLD,
) -> Report:
    """Quasi-singular hyperplanes arise from every twisting; all other
    matrix-form hyperplanes arise from exactly their own twisting.

    The matrix-form sweep runs over canonical spec representatives; it is
    exhaustive when their number is below ``exhaustive_threshold``, else a
    seeded sample (``sample`` representatives, default 1000) is drawn.
    """
    field = geometry.field
    auts = automorphism_group(field)
    if len(auts) < 2:
        raise ConfigError("the field has no nontrivial automorphism; nothing to compare")
    embeddings = [get_embedding(geometry, s) for s in auts]
    size = geometry.n + 1
    width = size * size

    report = Report(
        theorem="main1",
        parameters={
            "p": field.p, "k": field.k, "n": geometry.n,
            "exhaustive_threshold": exhaustive_threshold,
            "sample": sample,
        },
        seed=seed,
    )

    # Part 1: every quasi-singular hyperplane arises from every twisting.
    quasi_checked = 0
    for a in geometry.points:
        for A in geometry.hyperplanes:
            h = quasi_singular(a, A, geometry)
            for emb in embeddings:
                ok, _ = arises_from(emb, h, validate=False)
                if not ok:
                    report.fail(
                        "quasi-singular-does-not-arise",
                        point=a.index, hyperplane=A.index,
                        frobenius_power=emb.sigma.frobenius_power,
                    )
            quasi_checked += 1
    report.counts["quasi_singular_specs"] = quasi_checked

    # Part 2: non-quasi-singular matrix-form specs arise from their own
    # twisting and from no other.
    rng = SplitMix64(seed)
    total_checked = 0
    for emb in embeddings:
        sigma = emb.sigma
        zero_first = sigma.is_identity()
        rep_count = projective_rep_count(field.order, width, zero_first)
        exhaustive = rep_count <= exhaustive_threshold and sample is None
        if exhaustive:
            reps = projective_flat_reps(field.order, width, zero_first)
        else:
            reps = _sampled_reps(field, width, zero_first, sample or DEFAULT_SAMPLE_SIZE, rng)
        checked = skipped = 0
        for flat in reps:
            if _is_quasi_singular_spec(field, size, flat, sigma):
                skipped += 1
                continue
            bits = _hyperplane_bits(field, flat, emb.pairing_rows)
            own = _span_dim_over(field, width, emb.image_rows, bits, emb.dim)
            if own != emb.dim - 1:
                report.fail(
                    "own-twisting-does-not-arise",
                    frobenius_power=sigma.frobenius_power,
                    matrix=flat_to_lists(field, size, flat),
                    span_dim=own,
                )
            for other in embeddings:
                if other.sigma == sigma:
                    continue
                d = _span_dim_over(field, width, other.image_rows, bits, other.dim)
                if d == other.dim - 1:
                    report.fail(
                        "arises-from-two-twistings",
                        frobenius_power=sigma.frobenius_power,
                        other_power=other.sigma.frobenius_power,
                        matrix=flat_to_lists(field, size, flat),
                    )
            checked += 1
        key = f"sigma_{sigma.frobenius_power}"
        report.counts[f"{key}_specs_checked"] = checked
        report.counts[f"{key}_quasi_singular_skipped"] = skipped
        report.counts[f"{key}_mode"] = "exhaustive" if exhaustive else "sample"
        total_checked += checked
    report.checked_count = quasi_checked * len(auts) + total_checked
    return report


def _sampled_reps(field, width: int, zero_first: bool, count: int, rng: SplitMix64):
    seen: set[tuple[int, ...]] = set()
    out = []
    while len(out) < count:
        flat = tuple(rng.below(field.order) for _ in range(width))
        if zero_first:
            flat = (0,) + flat[1:]
        flat = projective_normal_codes(field, flat)
        if not any(flat) or flat in seen:
            continue
        seen.add(flat)
        out.append(flat)
    return out


# ---------------------------------------------------------------------------
# campaign: cross-twist transfer forces rank one
# ---------------------------------------------------------------------------

def solve_cross_twist(
    matrix: MatrixVec,
    rho: FieldAutomorphism,
    sigma: FieldAutomorphism,
    geometry: Geometry,
    brute_force: bool = False,
) -> MatrixVec | None:
    """Search all N != O with the sigma-twisted flag set of N equal to the
    rho-twisted flag set of ``matrix``; None when no such N exists.

    The search space is the full matrix space modulo scalars.  By default it
    is swept through its linear structure: every solution N must satisfy
    xi N x^sigma = 0 on all members of the target flag set, which is a
    linear condition on N, so enumerating the (projectivized) kernel of
    those constraints and filtering for exact flag-set equality visits every
    candidate that brute force would.  ``brute_force=True`` scans all
    projective representatives instead; both routes return the same verdict.

    Any N found is normalized to rank 1 (shifting by scalar matrices when
    sigma is the identity, which does not change the flag set); failure to
    reach rank 1 would be a counterexample and raises VerificationError.
    """
    if rho == sigma:
        raise ConfigError("the two twistings must be distinct")
    field = geometry.field
    size = geometry.n + 1
    width = size * size
    target = matrix_hyperplane(matrix, rho, geometry)
    emb = get_embedding(geometry, sigma)

    if brute_force:
        candidates = projective_flat_reps(field.order, width)
    else:
        constraint_rows = [emb.pairing_rows[i] for i in target.indices()]
        kernel = kernel_basis(field, width, constraint_rows)
        candidates = _kernel_combos(field, kernel)

    for flat in candidates:
        if sigma.is_identity() and _is_scalar_flat(flat, size):
            continue
        if _matches_bits(field, flat, emb.pairing_rows, target.bits):
            return _normalize_cross_twist_solution(field, size, flat, sigma)
    return None


def _kernel_combos(field, kernel: SubspaceBasis):
    for coeffs in projective_flat_reps(field.order, kernel.dim) if kernel.dim else ():
        add = field.add_table
        combo = (0,) * kernel.ambient_dim
        for c, row in zip(coeffs, kernel.rows):
            if c:
                mt = field.mul_table[c]
                combo = tuple(add[a][mt[b]] for a, b in zip(combo, row))
        yield combo


def _is_scalar_flat(flat: tuple[int, ...], size: int) -> bool:
    d = flat[0]
    return all(flat[i * size + j] == (d if i == j else 0) for i in range(size) for j in range(size))


def _matches_bits(field, flat: tuple[int, ...], pairing_rows, target_bits: int) -> bool:
    for i, prow in enumerate(pairing_rows):
        member = pairing_codes(field, flat, prow) == 0
        if member != bool(target_bits >> i & 1):
            return False
    return True


def _normalize_cross_twist_solution(field, size, flat, sigma) -> MatrixVec:
    if sigma.is_identity():
        for lam in range(field.order):
            shifted = _flat_add_scaled_identity(field, flat, lam, size)
            if _rank_of_flat(field, size, shifted) == 1:
                flat = shifted
                break
    n = MatrixVec.from_flat(field, size, projective_normal_codes(field, flat)).projective_normal()
    if rank(n) != 1:
        raise VerificationError(
            f"cross-twist transfer produced a matrix of rank {rank(n)}; expected rank 1"
        )
    return n


def verify_cross_twist(
    geometry: Geometry,
    sample_size: int = 200,
    seed: int = 0,
    spot_checks: int = 3,
) -> Report:
    """Seeded sweep of solve_cross_twist over random matrices and all ordered
    pairs of distinct twistings; a transfer exists exactly for quasi-singular
    targets and is always rank 1.  The first few matrices are re-run with
    the brute-force scan as an independent route.
    """
    field = geometry.field
    auts = automorphism_group(field)
    if len(auts) < 2:
        raise ConfigError("need at least two twistings")
    size = geometry.n + 1
    width = size * size
    rng = SplitMix64(seed)

    report = Report(
        theorem="cross-twist-rank-one",
        parameters={
            "p": field.p, "k": field.k, "n": geometry.n,
            "sample_size": sample_size, "spot_checks": spot_checks,
        },
        seed=seed,
    )

    matrices = []
    while len(matrices) < sample_size:
        flat = tuple(rng.below(field.order) for _ in range(width))
        if not any(flat) or _is_scalar_flat(flat, size):
            continue
        matrices.append(MatrixVec.from_flat(field, size, flat))

    pairs = [(r, s) for r in auts for s in auts if r != s]
    checks = transfers = 0
    for idx, m in enumerate(matrices):
        for rho, sigma_ in pairs:
            target = matrix_hyperplane(m, rho, geometry)
            quasi_by_scan = recognize_quasi_singular(target, geometry) is not None
            quasi_by_rank = _is_quasi_singular_spec(field, size, m.flat, rho)
            if quasi_by_scan != quasi_by_rank:
                report.fail(
                    "rank-route-vs-recognition-mismatch",
                    matrix=matrix_to_lists(m), rho=rho.frobenius_power,
                )
            try:
                n = solve_cross_twist(m, rho, sigma_, geometry)
            except VerificationError as exc:
                report.fail(
                    "transfer-not-rank-one",
                    matrix=matrix_to_lists(m),
                    rho=rho.frobenius_power, sigma=sigma_.frobenius_power,
                    detail=str(exc),
                )
                continue
            if (n is not None) != quasi_by_scan:
                report.fail(
                    "transfer-existence-mismatch",
                    matrix=matrix_to_lists(m),
                    rho=rho.frobenius_power, sigma=sigma_.frobenius_power,
                    found=n is not None, quasi_singular=quasi_by_scan,
                )
            if n is not None:
                transfers += 1
            if idx < spot_checks:
                n2 = solve_cross_twist(m, rho, sigma_, geometry, brute_force=True)
                if (n is None) != (n2 is None):
                    report.fail(
                        "kernel-vs-bruteforce-mismatch",
                        matrix=matrix_to_lists(m),
                        rho=rho.frobenius_power, sigma=sigma_.frobenius_power,
                    )
                elif n is not None and matrix_hyperplane(n2, sigma_, geometry).bits != target.bits:
                    report.fail("bruteforce-solution-invalid", matrix=matrix_to_lists(m))
            checks += 1
    report.checked_count = checks
    report.counts["matrices"] = len(matrices)
    report.counts["ordered_pairs"] = len(pairs)
    report.counts["transfers_found"] = transfers
    return report


# ---------------------------------------------------------------------------
# campaign: the maximal-subspace lemmas behind the no-common-cover argument
# ---------------------------------------------------------------------------

def verify_v_lemmas(
    geometry: Geometry,
    sigma: FieldAutomorphism,
    rho: FieldAutomorphism,
    extra_pairs: int = 5,
    seed: int = 0,
) -> Report:
    """For flags (a, A), (b, B) at distance 3: their singular hyperplanes
    intersect in a maximal subspace of each; a rank-2 combination of the two
    tensors cuts a hyperplane arising only from the rho-twisting; and a
    maximal subspace construction inside it produces a third hyperplane
    arising only from the sigma-twisting with the stated intersection and
    span behavior.
    """
    if sigma == rho:
        raise ConfigError("the two twistings must be distinct")
    field = geometry.field
    report = Report(
        theorem="v-lemmas",
        parameters={
            "p": field.p, "k": field.k, "n": geometry.n,
            "sigma": sigma.frobenius_power, "rho": rho.frobenius_power,
            "extra_pairs": extra_pairs,
        },
        seed=seed,
    )
    try:
        pairs = [first_distance3_pair(geometry)]
    except Exception as exc:
        raise NoDistance3Pair(str(exc)) from exc
    pairs += seeded_distance3_pairs(geometry, SplitMix64(seed), extra_pairs)

    for pair_no, (f1, f2) in enumerate(pairs):
        _check_v_lemmas_for_pair(geometry, f1, f2, sigma, rho, report, pair_no)
    report.checked_count = len(pairs)
    report.counts["pairs"] = len(pairs)
    return report


def _check_v_lemmas_for_pair(
    geometry: Geometry,
    f1: Flag,
    f2: Flag,
    sigma: FieldAutomorphism,
    rho: FieldAutomorphism,
    report: Report,
    pair_no: int,
) -> None:
    field = geometry.field
    size = geometry.n + 1
    width = size * size
    auts = automorphism_group(field)
    where = {"pair": pair_no, "flag1": f1.index, "flag2": f2.index}

    def fail(kind: str, **extra):
        report.fail(kind, **where, **extra)

    if distance(f1, f2) != 3:
        fail("pair-not-distance-3")
        return

    h1 = singular_hyperplane(f1, geometry)
    h1p = singular_hyperplane(f2, geometry)
    meet = h1 & h1p

    # V0: the intersection is a hyperplane and a maximal subspace of each side.
    if not is_geometric_hyperplane(meet, geometry, within=h1):
        fail("v0-not-a-hyperplane-of-h1")
    if not is_maximal_subspace(meet, geometry, within=h1):
        fail("v0-not-maximal-in-h1")

    # V1 clause 1: the intersection arises from every twisting restricted to h1.
    span_h1: dict[int, SubspaceBasis] = {}
    span_meet: dict[int, SubspaceBasis] = {}
    for tau in auts:
        emb = get_embedding(geometry, tau)
        ok1, s1 = arises_from(emb, h1, validate=False)
        ok2, s2 = arises_from(emb, h1p, validate=False)
        if not (ok1 and ok2):
            fail("singular-hyperplane-does-not-arise", tau=tau.frobenius_power)
            continue
        sk = _span_over(field, width, emb.image_rows, meet.bits).to_basis()
        span_h1[tau.frobenius_power] = s1
        span_meet[tau.frobenius_power] = sk
        if sk.dim != s1.dim - 1:
            fail("v1-meet-span-not-hyperplane-of-h1-span", tau=tau.frobenius_power)
        if sk != intersect_bases(s1, s2):
            fail("v1-meet-span-not-span-intersection", tau=tau.frobenius_power)
        if preimage_of_span(emb, sk).bits != meet.bits:
            fail("v1-meet-preimage-mismatch", tau=tau.frobenius_power)

    # V1 clause 2: a rank-2 combination cuts a hyperplane arising only from rho.
    t1 = pure_tensor(f1.point.rep, f1.hyperplane.rep.twist(rho))
    t2 = pure_tensor(f2.point.rep, f2.hyperplane.rep.twist(rho))
    combos = []
    for t_code in range(1, field.order):
        m = t1 + t2.scale(field.element(t_code))
        if rank(m) != 2:
            fail("combination-not-rank-2", t=t_code)
            continue
        combos.append(m)
    emb_rho = get_embedding(geometry, rho)
    emb_sigma = get_embedding(geometry, sigma)
    for choice, m in enumerate(combos[:2]):
        h2 = matrix_hyperplane(m, rho, geometry)
        where_c = dict(where, choice=choice)

        def fail_c(kind: str, **extra):
            report.fail(kind, **where_c, **extra)

        if (h2 & h1).bits != meet.bits or (h2 & h1p).bits != meet.bits:
            fail_c("v1-h2-meets-differently")
        ok_rho, span_h2 = arises_from(emb_rho, h2, validate=False)
        if not ok_rho:
            fail_c("v1-h2-does-not-arise-from-rho")
            continue
        for tau in auts:
            if tau == rho:
                continue
            ok_other, _ = arises_from(get_embedding(geometry, tau), h2, validate=False)
            if ok_other:
                fail_c("v1-h2-arises-from-second-twisting", tau=tau.frobenius_power)
        sk_rho = span_meet.get(rho.frobenius_power)
        if sk_rho is None or sk_rho.dim != span_h2.dim - 1:
            fail_c("v1-meet-span-not-hyperplane-of-h2-span")
        if sk_rho is not None and not sk_rho.is_subspace_of(span_h2):
            fail_c("v1-meet-span-not-inside-h2-span")

        _check_v2(geometry, emb_sigma, emb_rho, h1, h2, meet,
                  span_h1.get(sigma.frobenius_power),
                  span_meet.get(sigma.frobenius_power),
                  fail_c)


def _check_v2(geometry, emb_sigma, emb_rho, h1, h2, meet,
              span_h1_sigma, span_meet_sigma, fail_c) -> None:
    """Grow a maximal subspace of h2 containing the intersection whose
    sigma-image span stays proper; its span is then a projective hyperplane
    whose preimage is the third hyperplane of the construction."""
    field = geometry.field
    width = (geometry.n + 1) ** 2

    grown = meet
    acc = _span_over(field, width, emb_sigma.image_rows, meet.bits)
    for fi in (h2 - grown).indices():
        if fi in grown:
            continue
        candidate = subspace_closure(grown.with_index(fi), geometry)
        if not candidate.is_subset(h2):
            fail_c("v2-closure-escapes-h2", flag=fi)
            return
        cand_acc = _span_over(field, width, emb_sigma.image_rows, candidate.bits)
        if cand_acc.dim < emb_sigma.dim:
            grown = candidate
            acc = cand_acc
    if acc.dim != emb_sigma.dim - 1:
        fail_c("v2-maximal-span-not-a-hyperplane", dim=acc.dim)
        return
    span_x = acc.to_basis()
    h3 = preimage_of_span(emb_sigma, span_x)

    if not is_geometric_hyperplane(h3, geometry):
        fail_c("v2-h3-not-a-hyperplane")
        return
    ok_sigma, span_h3 = arises_from(emb_sigma, h3, validate=False)
    if not ok_sigma or span_h3 != span_x:
        fail_c("v2-h3-does-not-arise-from-sigma")
    ok_rho, _ = arises_from(emb_rho, h3, validate=False)
    if ok_rho:
        fail_c("v2-h3-arises-from-rho")
    inter32 = h3 & h2
    if inter32.bits != grown.bits:
        fail_c("v2-h3-meets-h2-beyond-grown-subspace")
    if not (meet.is_subset(inter32) and meet.bits != inter32.bits):
        fail_c("v2-h3-h2-intersection-not-proper-superset")
    if (h1 & h3).bits != meet.bits:
        fail_c("v2-h1-h3-intersection-differs")
    if span_h1_sigma is not None and span_meet_sigma is not None:
        if span_meet_sigma != intersect_bases(span_h1_sigma, span_h3):
            fail_c("v2-span-intersection-differs")
    h3h2_span = _span_over(field, width, emb_sigma.image_rows, inter32.bits).to_basis()
    if h3h2_span != span_h3:
        fail_c("v2-h3-h2-does-not-span-h3-span")


# ---------------------------------------------------------------------------
# polarized embeddings and one-point quotients
# ---------------------------------------------------------------------------

def is_polarized(embedding: Embedding) -> bool:
    """Every singular hyperplane (one per flag) arises from the embedding."""
    geometry = embedding.geometry
    for flag in geometry.flags:
        ok, _ = arises_from(embedding, singular_hyperplane(flag, geometry), validate=False)
        if not ok:
            return False
    return True


def verify_quot2(geometry: Geometry, seed: int = 0, sample_size: int = 10) -> Report:
    """Classify polarized one-point quotients of every twisting.

    Expected outcome: no twisted embedding has one, and the untwisted
    embedding has exactly the quotient over the scalar matrices, existing
    precisely when the characteristic divides n+1.

    Route: a fast orthogonality pre-filter (a one-point kernel [M] can only
    work if M is killed by the functional of every singular hyperplane's
    span), cross-checked by direct arises-from computations on the
    survivors and on a seeded sample of non-survivors.
    """
    field = geometry.field
    size = geometry.n + 1
    width = size * size
    rng = SplitMix64(seed)
    report = Report(
        theorem="quot2",
        parameters={"p": field.p, "k": field.k, "n": geometry.n, "sample_size": sample_size},
        seed=seed,
    )

    identity_flat = MatrixVec.identity(field, size).flat
    char_divides = (size % field.p) == 0

    for sigma in automorphism_group(field):
        emb = get_embedding(geometry, sigma)
        tag = f"sigma_{sigma.frobenius_power}"
        # functional coefficients of each singular hyperplane's span
        coef_rows = [
            pure_tensor(f.point.rep, f.hyperplane.rep.twist(sigma)).flat_transposed
            for f in geometry.flags
        ]

        survivors: list[tuple[int, ...]] = []
        checked = 0
        for flat in projective_flat_reps(field.order, width):
            if sigma.is_identity():
                # kernel must lie in the null-trace ambient
                if pairing_codes(field, identity_flat, flat) != 0:
                    continue
            checked += 1
            if all(pairing_codes(field, flat, row) == 0 for row in coef_rows):
                survivors.append(flat)
        report.counts[f"{tag}_candidate_kernels"] = checked
        report.counts[f"{tag}_prefilter_survivors"] = len(survivors)
        report.checked_count += checked

        polarized_kernels = []
        for flat in survivors:
            m = MatrixVec.from_flat(field, size, flat)
            k = span_basis([m])
            defines = kernel_defines_quotient(k, emb)
            direct_ok, _ = quotient_condition_holds(emb, k)
            if defines and not direct_ok:
                report.fail(f"{tag}-rank-criterion-unsound", matrix=matrix_to_lists(m))
                continue
            if not direct_ok:
                continue
            q_emb = quotient(emb, k)
            if is_polarized(q_emb):
                polarized_kernels.append(flat)
            else:
                report.fail(f"{tag}-prefilter-survivor-not-polarized", matrix=matrix_to_lists(m))

        expected = [identity_flat] if (sigma.is_identity() and char_divides) else []
        if polarized_kernels != expected:
            report.fail(
                f"{tag}-polarized-quotients-differ-from-classification",
                found=[flat_to_lists(field, size, f) for f in polarized_kernels],
                expected=[flat_to_lists(field, size, f) for f in expected],
            )
        report.counts[f"{tag}_polarized_kernels"] = len(polarized_kernels)

        # Negative cross-check: sampled valid kernels off the survivor list
        # yield non-polarized quotients.
        sampled = 0
        guard = 0
        while sampled < sample_size and guard < 10000:
            guard += 1
            flat = tuple(rng.below(field.order) for _ in range(width))
            if not any(flat):
                continue
            if sigma.is_identity() and pairing_codes(field, identity_flat, flat) != 0:
                continue
            flat = projective_normal_codes(field, flat)
            if flat in survivors:
                continue
            m = MatrixVec.from_flat(field, size, flat)
            k = span_basis([m])
            ok, _ = quotient_condition_holds(emb, k)
            if not ok:
                continue
            if is_polarized(quotient(emb, k)):
                report.fail(f"{tag}-unexpected-polarized-quotient", matrix=matrix_to_lists(m))
            sampled += 1
        report.counts[f"{tag}_sampled_negative_checks"] = sampled

        # Orthogonality note cross-check: a matrix-form hyperplane that arises
        # from the embedding survives into the quotient over [M] exactly when
        # its matrix pairs to zero with M under the trace form.  The arising
        # premise is not vacuous: over GF(2) some matrix-form hyperplanes
        # have an image span of codimension 2 and fall outside the note.
        note_checks = note_skipped = 0
        guard = 0
        while note_checks < sample_size and guard < 10000:
            guard += 1
            kflat = tuple(rng.below(field.order) for _ in range(width))
            nflat = tuple(rng.below(field.order) for _ in range(width))
            if not any(kflat) or not any(nflat):
                continue
            if sigma.is_identity() and (
                pairing_codes(field, identity_flat, kflat) != 0 or _is_scalar_flat(nflat, size)
            ):
                continue
            km = MatrixVec.from_flat(field, size, kflat)
            k = span_basis([km])
            ok, _ = quotient_condition_holds(emb, k)
            if not ok:
                continue
            nm = MatrixVec.from_flat(field, size, nflat)
            h = matrix_hyperplane(nm, sigma, geometry)
            arises_plain, _ = arises_from(emb, h, validate=False)
            if not arises_plain:
                note_skipped += 1
                continue
            arises_in_quotient, _ = arises_from(quotient(emb, k), h, validate=False)
            perp_holds = saturation_form(nm, km).is_zero()
            if arises_in_quotient != perp_holds:
                report.fail(
                    f"{tag}-orthogonality-note-violated",
                    kernel=matrix_to_lists(km), matrix=matrix_to_lists(nm),
                )
            note_checks += 1
        report.counts[f"{tag}_orthogonality_note_checks"] = note_checks
        report.counts[f"{tag}_orthogonality_note_skipped_nonarising"] = note_skipped
    return report


# ---------------------------------------------------------------------------
# campaign: exhaustive hyperplane scan of a tiny geometry
# ---------------------------------------------------------------------------

def verify_hyperscan(geometry: Geometry, seed: int = 0, sample_size: int = 1000) -> Report:
    """Enumerate ALL geometric hyperplanes by scanning every flag subset.

    Feasible only for the smallest geometry (21 flags).  Each hyperplane
    found must be a maximal subspace and arise from the untwisted embedding;
    the quasi-singular constructions and all canonical matrix-form specs
    must be among the results.  A vectorized sweep does the enumeration; the
    exact predicate re-checks every hit and a seeded sample of misses.
    """
    import numpy as np

    nflags = geometry.num_flags
    if nflags > 24:
        raise ConfigError(f"{nflags} flags: exhaustive subset scan is not desk-scale")
    field = geometry.field
    report = Report(
        theorem="hyperplane-maximality",
        parameters={"p": field.p, "k": field.k, "n": geometry.n},
        seed=seed,
    )

    line_masks = geometry.line_masks
    total = 1 << nflags
    found_bits: list[int] = []
    chunk = 1 << 20
    for lo in range(0, total, chunk):
        arr = np.arange(lo, min(lo + chunk, total), dtype=np.uint32)
        ok = np.ones(arr.shape, dtype=bool)
        for m in line_masks:
            v = arr & np.uint32(m)
            cond = v == np.uint32(m)
            mm = m
            while mm:
                single = mm & -mm
                cond |= v == np.uint32(single)
                mm ^= single
            ok &= cond
            if not ok.any():
                break
        hits = arr[ok]
        found_bits.extend(int(x) for x in hits)
    full = total - 1
    found_bits = [b for b in found_bits if b != full]
    found_set = set(found_bits)
    report.checked_count = total
    report.counts["hyperplanes_found"] = len(found_bits)

    emb = get_embedding(geometry, automorphism_group(field)[0])
    quasi_count = 0
    for bits in found_bits:
        h = geometry.flag_set(bits)
        if not is_geometric_hyperplane(h, geometry):
            report.fail("sweep-vs-predicate-mismatch", flags=h.indices())
            continue
        if not is_maximal_subspace(h, geometry):
            report.fail("hyperplane-not-maximal", flags=h.indices())
        ok, _ = arises_from(emb, h, validate=False)
        if not ok:
            report.fail("hyperplane-does-not-arise-from-natural", flags=h.indices())
        if recognize_quasi_singular(h, geometry) is not None:
            quasi_count += 1
    report.counts["quasi_singular_found"] = quasi_count

    missing_quasi = sum(
        1 for bits in _quasi_singular_table(geometry) if bits not in found_set
    )
    if missing_quasi:
        report.fail("quasi-singular-hyperplane-missed-by-sweep", count=missing_quasi)

    size = geometry.n + 1
    missing_matrix = 0
    for flat in projective_flat_reps(field.order, size * size, zero_first=True):
        m = MatrixVec.from_flat(field, size, flat)
        if matrix_hyperplane(m, emb.sigma, geometry).bits not in found_set:
            missing_matrix += 1
    report.counts["matrix_form_specs"] = projective_rep_count(field.order, size * size, True)
    if missing_matrix:
        report.fail("matrix-form-hyperplane-missed-by-sweep", count=missing_matrix)

    rng = SplitMix64(seed)
    negatives = 0
    while negatives < sample_size:
        bits = rng.below(total)
        if bits in found_set or bits == full:
            continue
        if is_geometric_hyperplane(geometry.flag_set(bits), geometry):
            report.fail("predicate-accepts-subset-missed-by-sweep", bits=bits)
        negatives += 1
    report.counts["negative_samples"] = negatives
    return report


# ---------------------------------------------------------------------------
# campaign: geometry sanity (counts, distance rule vs graph walk, diameter)
# ---------------------------------------------------------------------------

def verify_geometry(geometry: Geometry, dump: bool = False) -> Report:
    field = geometry.field
    q = field.order
    report = Report(
        theorem="geometry-sanity",
        parameters={"p": field.p, "k": field.k, "n": geometry.n},
    )
    report.counts["flags"] = geometry.num_flags
    report.counts["lines"] = len(geometry.lines)
    report.counts["points"] = len(geometry.points)
    report.counts["hyperplanes"] = len(geometry.hyperplanes)

    expected_flags = len(geometry.points) * (q**geometry.n - 1) // (q - 1)
    if geometry.num_flags != expected_flags:
        report.fail("flag-count", got=geometry.num_flags, expected=expected_flags)
    bad_lines = [ln.index for ln in geometry.lines if len(ln.member_indices) != q + 1]
    if bad_lines:
        report.fail("line-size", lines=bad_lines)

    diameter = 0
    mismatches = 0
    for f in geometry.flags:
        walked = geometry.bfs_distances(f.index)
        for g in geometry.flags:
            d = distance(f, g)
            if d != walked[g.index]:
                mismatches += 1
            diameter = max(diameter, d)
    if mismatches:
        report.fail("rule-vs-walk-distance", mismatches=mismatches)
    if diameter != 3:
        report.fail("diameter", got=diameter)
    report.counts["diameter"] = diameter
    report.checked_count = geometry.num_flags * geometry.num_flags

    if dump:
        coeff = field.coeff_tuples
        report.witnesses["flags"] = [
            {
                "point": [list(coeff[c]) for c in f.point.rep.codes],
                "hyperplane": [list(coeff[c]) for c in f.hyperplane.rep.codes],
            }
            for f in geometry.flags
        ]
        report.witnesses["lines"] = [
            {"kind": ln.kind, "members": list(ln.member_indices)} for ln in geometry.lines
        ]
    return report
