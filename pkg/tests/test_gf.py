"""Field arithmetic and automorphisms, checked exhaustively (q <= 9)."""

from itertools import product

import pytest

from fglab.gf import (
    DEFAULT_MODULI,
    FieldAutomorphism,
    NonPrime,
    OrderTooLarge,
    ReducibleModulus,
    apply_automorphism,
    automorphism_group,
    make_field,
)

ALL_PARAMS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)]


@pytest.fixture(scope="module", params=ALL_PARAMS, ids=lambda pk: f"GF({pk[0] ** pk[1]})")
def field(request):
    return make_field(*request.param)


def test_prime_field_is_integers_mod_p():
    f = make_field(2)
    assert f.order == 2
    assert (f.one + f.one).is_zero()


def test_gf4_generator_squares_to_generator_plus_one():
    # oracle first: x^2 + x + 1 has no root in GF(2)
    assert all((c * c + c + 1) % 2 != 0 for c in (0, 1))
    f = make_field(2, 2, (1, 1, 1))
    w = f.from_coeffs((0, 1))
    assert (w * w).coeffs == (1, 1)


def test_reducible_modulus_rejected():
    # 1 is a root of x^2 + 1 over GF(2)
    assert (1 * 1 + 1) % 2 == 0
    with pytest.raises(ReducibleModulus):
        make_field(2, 2, (1, 0, 1))


def test_non_prime_rejected():
    with pytest.raises(NonPrime):
        make_field(6)


def test_order_bound(monkeypatch):
    with pytest.raises(OrderTooLarge):
        make_field(2, 4)
    monkeypatch.setenv("FGLAB_MAX_ORDER", "16")
    f = make_field(2, 4, (1, 1, 0, 0, 1))
    assert f.order == 16
    monkeypatch.setenv("FGLAB_MAX_ORDER", "not-a-number")
    with pytest.raises(Exception):
        make_field(2, 2)


def test_non_monic_modulus_rejected():
    with pytest.raises(Exception):
        make_field(2, 2, (1, 1))


def test_default_moduli_are_reproducible():
    for q, modulus in DEFAULT_MODULI.items():
        assert modulus[-1] == 1
    a = make_field(3, 2)
    b = make_field(3, 2)
    assert a == b and hash(a) == hash(b)
    assert a.modulus == (1, 0, 1)


def test_field_axioms_exhaustive(field):
    els = field.elements
    zero, one = field.zero, field.one
    for a in els:
        assert a + zero == a and a * one == a and a * zero == zero
        assert a + (-a) == zero
        if not a.is_zero():
            assert a * a.inverse() == one
    for a, b in product(els, els):
        assert a + b == b + a and a * b == b * a
    for a, b, c in product(els, els, els):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


def test_every_nonzero_element_has_unique_inverse(field):
    one = field.one
    for a in field.nonzero_elements():
        inverses = [b for b in field.elements if a * b == one]
        assert len(inverses) == 1


def test_automorphism_group_size_and_identity_first(field):
    auts = automorphism_group(field)
    assert len(auts) == field.k
    assert auts[0].is_identity()


@pytest.mark.parametrize("pk,size", [((2, 1), 1), ((2, 2), 2), ((2, 3), 3)])
def test_automorphism_group_sizes(pk, size):
    assert len(automorphism_group(make_field(*pk))) == size


def test_automorphisms_are_field_homomorphisms(field):
    els = field.elements
    for sigma in automorphism_group(field):
        for a, b in product(els, els):
            assert sigma(a + b) == sigma(a) + sigma(b)
            assert sigma(a * b) == sigma(a) * sigma(b)


def test_automorphisms_fix_prime_subfield(field):
    for sigma in automorphism_group(field):
        t = field.zero
        for _ in range(field.p):
            assert sigma(t) == t
            t = t + field.one


def test_composition_table_is_cyclic(field):
    auts = automorphism_group(field)
    k = field.k
    for i, s in enumerate(auts):
        for j, r in enumerate(auts):
            assert s.compose(r) == auts[(i + j) % k]
        assert s.compose(s.inverse()).is_identity()


def test_inverse_roundtrip_on_all_elements(field):
    for sigma in automorphism_group(field):
        inv = sigma.inverse()
        for t in field.elements:
            assert apply_automorphism(apply_automorphism(t, sigma), inv) == t


def test_frobenius_on_gf4():
    f = make_field(2, 2)
    frob = automorphism_group(f)[1]
    w = f.from_coeffs((0, 1))
    assert apply_automorphism(w, frob).coeffs == (1, 1)  # w^2 = w + 1
    assert apply_automorphism(f.one, frob) == f.one


def test_automorphism_is_a_bijection(field):
    for sigma in automorphism_group(field):
        images = {sigma(t).code for t in field.elements}
        assert len(images) == field.order


def test_frobenius_power_out_of_range():
    f = make_field(2, 2)
    with pytest.raises(ValueError):
        FieldAutomorphism(f, 2)


def test_element_pow_and_division():
    f = make_field(3, 2)
    for a in f.nonzero_elements():
        assert a ** (f.order - 1) == f.one
        assert (a / a) == f.one
    with pytest.raises(ZeroDivisionError):
        f.one / f.zero
