"""Formal exponents from field automorphisms, semi-monomials, and the
exhaustive identity principle over a finite field.

A formal exponent is a non-negative integer combination of automorphisms;
``t ** (sum k_i sigma_i)`` means ``prod (t^{k_i})^{sigma_i}``, with the
empty combination acting as the constant 1 (also at t = 0).  Two exponents
are identified when they induce the same function on the field, so over a
finite field a class IS its value table; that table is the canonical
representation used here.  The weight of a class is the least total
multiplicity realizing it, always below q, found by breadth-first closure
over increasing weight.

A semi-monomial is a nonzero coefficient times one exponent class per
unknown; a semi-polynomial is a sum of semi-monomials with pairwise
distinct exponent tuples.  The identity principle states a non-null
semi-polynomial takes a nonzero value somewhere; ``identity_witness``
scans the whole cube and treats exhaustion without a witness as a fatal
error, so every call is itself a verification.

Text grammar (used by the command line)::

    poly   := mono ('+' mono)*
    mono   := coeff ('*' var)* | var ('*' var)*
    coeff  := int | '[' int (',' int)* ']'        little-endian coordinates
    var    := name '{' powers? '}'                name is one or more letters
    powers := int (',' int)*                      Frobenius powers, repeats add

Example: ``1*t{0}+1*t{1}`` is t (identity exponent) plus t^Frobenius.
Unknowns are ordered alphabetically by name; an unknown missing from a
monomial carries the zero exponent class.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .errors import FglabError, VerificationError
from .gf import FieldAutomorphism, FieldElement, FieldSpec, automorphism_group


class SemiPolyError(FglabError, ValueError):
    pass


class NegativeMultiplicity(SemiPolyError):
    """Formal exponents only take non-negative multiplicities."""


class FieldMismatch(SemiPolyError):
    pass


class ArityMismatch(SemiPolyError):
    pass


class SearchSpaceTooLarge(SemiPolyError):
    """q^m points exceed the witness-scan bound."""


class ParseError(SemiPolyError):
    pass


# ---------------------------------------------------------------------------
# exponent classes
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _class_catalog(field: FieldSpec) -> dict[tuple[int, ...], int]:
    """value table -> minimal weight, for every realizable exponent class.

    Breadth-first over total multiplicity: weight-w tables are products of a
    weight-(w-1) table with one automorphism's table, so the first level at
    which a table appears is its weight.  Every class has weight below q,
    hence stopping at q-1 is exhaustive.
    """
    q = field.order
    mul = field.mul_table
    one = tuple(1 for _ in range(q))
    generators = [tuple(field.frob_table[j]) for j in range(field.k)]
    catalog = {one: 0}
    frontier = [one]
    for weight in range(1, q):
        nxt = []
        for table in frontier:
            for gen in generators:
                prod_table = tuple(mul[a][b] for a, b in zip(table, gen))
                if prod_table not in catalog:
                    catalog[prod_table] = weight
                    nxt.append(prod_table)
        frontier = nxt
    return catalog


@dataclass(frozen=True, slots=True)
class ExponentClass:
    """An exponent class, represented extensionally by its value table."""

    field: FieldSpec
    values: tuple[int, ...]  # code -> code of t^gamma
    weight: int

    def apply(self, t: FieldElement) -> FieldElement:
        if t.field != self.field:
            raise FieldMismatch("element belongs to a different field")
        return FieldElement(self.field, self.values[t.code])

    def is_zero_class(self) -> bool:
        return self.weight == 0

    def _key(self) -> tuple[int, ...]:
        return self.values

    def __repr__(self) -> str:
        return f"ExponentClass(weight={self.weight}, values={self.values})"


def _class_from_table(field: FieldSpec, values: tuple[int, ...]) -> ExponentClass:
    weight = _class_catalog(field).get(values)
    if weight is None:
        raise VerificationError(
            "exponent table not realizable below the field order; "
            "the weight bound would be violated"
        )
    return ExponentClass(field, values, weight)


def zero_class(field: FieldSpec) -> ExponentClass:
    return _class_from_table(field, tuple(1 for _ in range(field.order)))


def class_of(terms, field: FieldSpec) -> ExponentClass:
    """Class of a multiset of (automorphism, multiplicity) pairs.

    The induced function is computed directly over all q elements; the
    weight comes from the catalog of minimal representatives.
    """
    mul = field.mul_table
    values = [1] * field.order
    for sigma, multiplicity in terms:
        if not isinstance(sigma, FieldAutomorphism) or sigma.field != field:
            raise FieldMismatch("automorphism of a different field")
        if multiplicity < 0:
            raise NegativeMultiplicity(f"multiplicity {multiplicity} < 0")
        frob = field.frob_table[sigma.frobenius_power]
        for code in range(field.order):
            powered = field._pow_code(code, multiplicity)
            values[code] = mul[values[code]][frob[powered]]
    return _class_from_table(field, tuple(values))


def class_add(x: ExponentClass, y: ExponentClass) -> ExponentClass:
    """Sum of exponents: pointwise product of the induced functions."""
    if x.field != y.field:
        raise FieldMismatch("exponent classes over different fields")
    mul = x.field.mul_table
    return _class_from_table(x.field, tuple(mul[a][b] for a, b in zip(x.values, y.values)))


# ---------------------------------------------------------------------------
# semi-monomials and semi-polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class SemiMonomial:
    coeff: FieldElement
    exponents: tuple[ExponentClass, ...]

    @property
    def type_key(self) -> tuple[tuple[int, ...], ...]:
        return tuple(x.values for x in self.exponents)

    @property
    def degree(self) -> int:
        return sum(x.weight for x in self.exponents)

    def eval_codes(self, point_codes: tuple[int, ...]) -> int:
        field = self.coeff.field
        mul = field.mul_table
        acc = self.coeff.code
        for x, c in zip(self.exponents, point_codes):
            acc = mul[acc][x.values[c]]
        return acc


@dataclass(frozen=True, slots=True)
class SemiPolynomial:
    """Sum of semi-monomials with pairwise distinct exponent tuples.

    Construction normalizes: same-type monomials merge by adding their
    coefficients and zero coefficients drop out, so the null polynomial is
    exactly the one with no monomials.
    """

    field: FieldSpec
    arity: int
    monomials: tuple[SemiMonomial, ...]

    @classmethod
    def build(cls, field: FieldSpec, arity: int, monomials) -> "SemiPolynomial":
        merged: dict[tuple, SemiMonomial] = {}
        for m in monomials:
            if m.coeff.field != field:
                raise FieldMismatch("monomial coefficient over a different field")
            if len(m.exponents) != arity:
                raise ArityMismatch(f"monomial has {len(m.exponents)} exponents, arity is {arity}")
            key = m.type_key
            if key in merged:
                merged[key] = SemiMonomial(merged[key].coeff + m.coeff, m.exponents)
            else:
                merged[key] = m
        kept = tuple(
            merged[key] for key in sorted(merged) if not merged[key].coeff.is_zero()
        )
        return cls(field, arity, kept)

    def is_null(self) -> bool:
        return not self.monomials

    @property
    def degree(self) -> float:
        if self.is_null():
            return float("-inf")
        return max(m.degree for m in self.monomials)

    def eval(self, point) -> FieldElement:
        point = tuple(point)
        if len(point) != self.arity:
            raise ArityMismatch(f"point has {len(point)} coordinates, arity is {self.arity}")
        codes = []
        for t in point:
            if not isinstance(t, FieldElement) or t.field != self.field:
                raise FieldMismatch("evaluation point must consist of field elements")
            codes.append(t.code)
        return FieldElement(self.field, self.eval_codes(tuple(codes)))

    def eval_codes(self, point_codes: tuple[int, ...]) -> int:
        add = self.field.add_table
        acc = 0
        for m in self.monomials:
            acc = add[acc][m.eval_codes(point_codes)]
        return acc


def identity_witness(
    poly: SemiPolynomial, max_points: int = 1_000_000
) -> tuple[FieldElement, ...] | None:
    """First point (lexicographic in element codes) where the polynomial is
    nonzero; None only for the null polynomial.

    A non-null polynomial with no witness would falsify the identity
    principle, so exhaustion is a hard error, never a silent None.
    """
    q = poly.field.order
    if q**poly.arity > max_points:
        raise SearchSpaceTooLarge(f"{q}^{poly.arity} points exceed the bound {max_points}")
    for point in product(range(q), repeat=poly.arity):
        if poly.eval_codes(point) != 0:
            return tuple(FieldElement(poly.field, c) for c in point)
    if not poly.is_null():
        raise VerificationError(
            "non-null semi-polynomial vanished everywhere; identity principle violated"
        )
    return None


def random_semipolynomial(
    field: FieldSpec,
    rng,
    arity: int,
    max_monomials: int = 5,
    max_weight: int | None = None,
) -> SemiPolynomial:
    """Seeded non-null semi-polynomial: random classes, nonzero coefficients.

    Normalization may cancel monomials, so draws repeat until non-null.
    """
    tables = sorted(_class_catalog(field))
    if max_weight is not None:
        catalog = _class_catalog(field)
        tables = [t for t in tables if catalog[t] <= max_weight]
    while True:
        count = 1 + rng.below(max_monomials)
        monomials = []
        for _ in range(count):
            coeff = FieldElement(field, 1 + rng.below(field.order - 1))
            exps = tuple(
                _class_from_table(field, tables[rng.below(len(tables))]) for _ in range(arity)
            )
            monomials.append(SemiMonomial(coeff, exps))
        poly = SemiPolynomial.build(field, arity, monomials)
        if not poly.is_null():
            return poly


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*([A-Za-z]+|\[|\]|\{|\}|,|\+|\*|-?\d+)")


def _tokenize(text: str) -> list[str]:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character at position {pos}: {text[pos]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


def parse_semipolynomial(text: str, field: FieldSpec) -> SemiPolynomial:
    """Parse the grammar documented in the module docstring."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty expression")
    monos: list[tuple[FieldElement, dict[str, list[int]]]] = []
    i = 0

    def tok() -> str:
        return tokens[i] if i < len(tokens) else ""

    def parse_coeff() -> FieldElement:
        nonlocal i
        if tok() == "[":
            i += 1
            coords = []
            while True:
                if not re.fullmatch(r"-?\d+", tok()):
                    raise ParseError(f"expected integer in coefficient, got {tok()!r}")
                coords.append(int(tok()))
                i += 1
                if tok() == ",":
                    i += 1
                    continue
                if tok() == "]":
                    i += 1
                    break
                raise ParseError(f"expected ',' or ']' in coefficient, got {tok()!r}")
            return field.from_coeffs(coords)
        if re.fullmatch(r"-?\d+", tok()):
            value = int(tok())
            i += 1
            return field.from_int(value)
        raise ParseError(f"expected coefficient, got {tok()!r}")

    def parse_var() -> tuple[str, list[int]]:
        nonlocal i
        name = tok()
        if not name.isalpha():
            raise ParseError(f"expected unknown name, got {name!r}")
        i += 1
        if tok() != "{":
            raise ParseError(f"unknown {name!r} must be followed by '{{powers}}'")
        i += 1
        powers: list[int] = []
        if tok() != "}":
            while True:
                if not re.fullmatch(r"\d+", tok()):
                    raise ParseError(f"expected Frobenius power, got {tok()!r}")
                powers.append(int(tok()))
                i += 1
                if tok() == ",":
                    i += 1
                    continue
                break
        if tok() != "}":
            raise ParseError(f"expected '}}', got {tok()!r}")
        i += 1
        return name, powers

    while True:
        if tok().isalpha():
            coeff = field.one
        else:
            coeff = parse_coeff()
            if tok() == "*":
                i += 1
                if not tok().isalpha():
                    raise ParseError("dangling '*'")
        powers_by_name: dict[str, list[int]] = {}
        while tok().isalpha():
            name, powers = parse_var()
            powers_by_name.setdefault(name, []).extend(powers)
            if tok() == "*":
                i += 1
                if not tok().isalpha():
                    raise ParseError("dangling '*'")
        monos.append((coeff, powers_by_name))
        if i >= len(tokens):
            break
        if tok() != "+":
            raise ParseError(f"expected '+', got {tok()!r}")
        i += 1
        if i >= len(tokens):
            raise ParseError("dangling '+'")

    names = sorted({name for _, by_name in monos for name in by_name})
    arity = len(names)
    auts = automorphism_group(field)
    monomials = []
    for coeff, by_name in monos:
        exponents = []
        for name in names:
            terms = [(auts[p % field.k], 1) for p in by_name.get(name, [])]
            exponents.append(class_of(terms, field))
        monomials.append(SemiMonomial(coeff, tuple(exponents)))
    return SemiPolynomial.build(field, arity, monomials)
