"""Exact arithmetic in GF(p^k) for small q = p^k, and its automorphism group.

Elements are polynomial-basis coefficient tuples over GF(p).  Internally an
element is a single integer code ``c0 + c1*p + ... + c_{k-1}*p^(k-1)`` (the
coefficient tuple read little-endian in base p), which indexes precomputed
addition / multiplication / inverse tables.  Everything downstream of this
module works exhaustively, so the field order is capped (default q <= 9,
override with the FGLAB_MAX_ORDER environment variable or the ``max_order``
argument).

Default irreducible moduli, little-endian coefficient lists (fixed so that
runs are reproducible across machines):

    q = 2, 3, 5, 7 : x            -> [0, 1]
    q = 4          : 1 + x + x^2  -> [1, 1, 1]
    q = 8          : 1 + x + x^3  -> [1, 1, 0, 1]
    q = 9          : 1 + x^2      -> [1, 0, 1]

The automorphism group of GF(p^k) is cyclic of order k, generated by the
Frobenius map t -> t^p; an automorphism is stored as its Frobenius power.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import product

from .errors import ConfigError

DEFAULT_MAX_ORDER = 9
MAX_ORDER_ENV_VAR = "FGLAB_MAX_ORDER"

#: Fixed moduli per field order, little-endian coefficient lists.
DEFAULT_MODULI: dict[int, tuple[int, ...]] = {
    2: (0, 1),
    3: (0, 1),
    4: (1, 1, 1),
    5: (0, 1),
    7: (0, 1),
    8: (1, 1, 0, 1),
    9: (1, 0, 1),
}


class FieldError(ConfigError):
    """Invalid field specification."""


class NonPrime(FieldError):
    """The characteristic p is not a prime number."""


class ReducibleModulus(FieldError):
    """The modulus polynomial is not irreducible over GF(p)."""


class OrderTooLarge(FieldError):
    """p^k exceeds the configured order bound."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# -- tiny dense polynomial arithmetic over GF(p), little-endian coeff tuples --

def _poly_trim(c: tuple[int, ...]) -> tuple[int, ...]:
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return c[:i]


def _poly_mul(a: tuple[int, ...], b: tuple[int, ...], p: int) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(tuple(out))


def _poly_mod(a: tuple[int, ...], m: tuple[int, ...], p: int) -> tuple[int, ...]:
    # m is monic; classic long division, remainder only.
    a = list(_poly_trim(a))
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        lead = a[-1]
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - lead * mi) % p
        while a and a[-1] == 0:
            a.pop()
    return tuple(a)


def _poly_is_irreducible(m: tuple[int, ...], p: int) -> bool:
    """Exhaustive factor search: no monic divisor of degree 1 .. deg(m)//2."""
    deg = len(m) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        # All monic polynomials of degree d over GF(p).
        for tail in product(range(p), repeat=d):
            cand = tuple(tail) + (1,)
            if not _poly_mod(m, cand, p):
                return False
    return True


class FieldSpec:
    """A concrete GF(p^k) with all arithmetic tables precomputed.

    Two FieldSpec instances compare equal iff they have the same (p, k,
    modulus), so elements built from independent ``make_field`` calls with
    identical parameters interoperate.
    """

    def __init__(self, p: int, k: int, modulus: tuple[int, ...]):
        self.p = p
        self.k = k
        self.modulus = modulus
        self.order = p**k
        q = self.order

        # code <-> little-endian coefficient tuple over GF(p)
        coeffs = []
        for code in range(q):
            rest = code
            c = []
            for _ in range(k):
                rest, r = divmod(rest, p)
                c.append(r)
            coeffs.append(tuple(c))
        self.coeff_tuples: tuple[tuple[int, ...], ...] = tuple(coeffs)

        def encode(c: tuple[int, ...]) -> int:
            return sum(ci * p**i for i, ci in enumerate(c))

        self.add_table: tuple[tuple[int, ...], ...] = tuple(
            tuple(encode(tuple((x + y) % p for x, y in zip(a, b))) for b in coeffs) for a in coeffs
        )
        self.neg_table: tuple[int, ...] = tuple(encode(tuple((-x) % p for x in a)) for a in coeffs)
        self.sub_table: tuple[tuple[int, ...], ...] = tuple(
            tuple(self.add_table[i][self.neg_table[j]] for j in range(q)) for i in range(q)
        )

        mul = []
        for a in coeffs:
            row = []
            for b in coeffs:
                prod_ = _poly_mod(_poly_mul(_poly_trim(a), _poly_trim(b), p), modulus, p)
                row.append(encode(prod_ + (0,) * (k - len(prod_))))
            mul.append(tuple(row))
        self.mul_table: tuple[tuple[int, ...], ...] = tuple(mul)

        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self.mul_table[a][b] == 1:
                    inv[a] = b
                    break
            else:
                raise ReducibleModulus(
                    f"element code {a} has no inverse; modulus {list(modulus)} is not irreducible over GF({p})"
                )
        self.inv_table: tuple[int, ...] = tuple(inv)

        # frob_table[j][a] = a^(p^j)
        frob = [tuple(range(q))]
        step = tuple(self._pow_code(a, p) for a in range(q))
        for _ in range(1, k):
            prev = frob[-1]
            frob.append(tuple(step[prev[a]] for a in range(q)))
        self.frob_table: tuple[tuple[int, ...], ...] = tuple(frob)

    def _pow_code(self, a: int, e: int) -> int:
        r = 1
        while e:
            e, bit = divmod(e, 2)
            if bit:
                r = self.mul_table[r][a]
            if e:
                a = self.mul_table[a][a]
        return r

    # -- identity and hashing -------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldSpec)
            and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    def __repr__(self) -> str:
        return f"GF({self.order})"

    # -- element access --------------------------------------------------------

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def element(self, code: int) -> "FieldElement":
        if not 0 <= code < self.order:
            raise ValueError(f"element code {code} out of range for {self!r}")
        return FieldElement(self, code)

    def from_coeffs(self, coeffs) -> "FieldElement":
        c = tuple(int(x) % self.p for x in coeffs)
        if len(c) > self.k and any(c[self.k:]):
            raise ValueError(f"coefficient tuple {coeffs} too long for {self!r}")
        c = (c + (0,) * self.k)[: self.k]
        return FieldElement(self, sum(ci * self.p**i for i, ci in enumerate(c)))

    def from_int(self, n: int) -> "FieldElement":
        """Image of the integer n under Z -> GF(p) -> GF(p^k)."""
        return FieldElement(self, n % self.p)

    @property
    def elements(self) -> tuple["FieldElement", ...]:
        return tuple(FieldElement(self, c) for c in range(self.order))

    def nonzero_elements(self) -> tuple["FieldElement", ...]:
        return tuple(FieldElement(self, c) for c in range(1, self.order))


@dataclass(frozen=True, slots=True)
class FieldElement:
    """An element of a FieldSpec, identified by its table code."""

    field: FieldSpec
    code: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        """Polynomial-basis coordinates over GF(p), little-endian."""
        return self.field.coeff_tuples[self.code]

    def is_zero(self) -> bool:
        return self.code == 0

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError(f"mixed fields: {self.field!r} vs {other.field!r}")
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        return FieldElement(self.field, self.field.add_table[self.code][other.code])

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return FieldElement(self.field, self.field.sub_table[self.code][other.code])

    def __rsub__(self, other):
        return self._coerce(other).__sub__(self)

    def __neg__(self):
        return FieldElement(self.field, self.field.neg_table[self.code])

    def __mul__(self, other):
        other = self._coerce(other)
        return FieldElement(self.field, self.field.mul_table[self.code][other.code])

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.code == 0:
            raise ZeroDivisionError("division by zero field element")
        return FieldElement(self.field, self.field.mul_table[self.code][self.field.inv_table[other.code]])

    def inverse(self) -> "FieldElement":
        if self.code == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return FieldElement(self.field, self.field.inv_table[self.code])

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElement(self.field, self.field._pow_code(self.code, e))

    def __bool__(self) -> bool:
        return self.code != 0

    def __repr__(self) -> str:
        if self.field.k == 1:
            return str(self.code)
        names = {0: "", 1: "x", 2: "x^2"}
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = names.get(i, f"x^{i}")
            if mono == "":
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(terms) if terms else "0"


@dataclass(frozen=True, slots=True)
class FieldAutomorphism:
    """The automorphism t -> t^(p^frobenius_power) of a FieldSpec."""

    field: FieldSpec
    frobenius_power: int

    def __post_init__(self):
        if not 0 <= self.frobenius_power < self.field.k:
            raise ValueError(
                f"frobenius power {self.frobenius_power} out of range [0, {self.field.k})"
            )

    def is_identity(self) -> bool:
        return self.frobenius_power == 0

    def __call__(self, t: FieldElement) -> FieldElement:
        return apply_automorphism(t, self)

    def apply_code(self, code: int) -> int:
        return self.field.frob_table[self.frobenius_power][code]

    def compose(self, other: "FieldAutomorphism") -> "FieldAutomorphism":
        """self after other: t -> (t^other)^self."""
        if other.field != self.field:
            raise ValueError("automorphisms of different fields")
        return FieldAutomorphism(self.field, (self.frobenius_power + other.frobenius_power) % self.field.k)

    def inverse(self) -> "FieldAutomorphism":
        return FieldAutomorphism(self.field, (-self.frobenius_power) % self.field.k)

    def __repr__(self) -> str:
        if self.frobenius_power == 0:
            return "id"
        if self.frobenius_power == 1:
            return "frob"
        return f"frob^{self.frobenius_power}"


def max_order_bound(max_order: int | None = None) -> int:
    """Resolve the field-order cap: explicit argument, else env var, else 9."""
    if max_order is not None:
        return max_order
    env = os.environ.get(MAX_ORDER_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError(f"{MAX_ORDER_ENV_VAR}={env!r} is not an integer") from exc
    return DEFAULT_MAX_ORDER


def make_field(p: int, k: int = 1, modulus=None, max_order: int | None = None) -> FieldSpec:
    """Build a validated GF(p^k).

    ``modulus`` is a little-endian coefficient list of a monic degree-k
    polynomial irreducible over GF(p); when omitted, the fixed table in this
    module supplies one (only orders listed there are constructible without
    an explicit modulus).
    """
    if not _is_prime(p):
        raise NonPrime(f"p = {p} is not prime")
    if k < 1:
        raise FieldError(f"k = {k} must be >= 1")
    q = p**k
    bound = max_order_bound(max_order)
    if q > bound:
        raise OrderTooLarge(f"q = {q} exceeds the order bound {bound}")
    if modulus is None:
        if q not in DEFAULT_MODULI:
            raise FieldError(f"no default modulus for q = {q}; pass one explicitly")
        modulus = DEFAULT_MODULI[q]
    modulus = tuple(int(c) % p for c in modulus)
    if len(modulus) != k + 1 or modulus[-1] != 1:
        raise FieldError(f"modulus {list(modulus)} is not monic of degree {k}")
    if not _poly_is_irreducible(modulus, p):
        raise ReducibleModulus(f"modulus {list(modulus)} has a proper factor over GF({p})")
    return FieldSpec(p, k, modulus)


def apply_automorphism(t: FieldElement, sigma: FieldAutomorphism) -> FieldElement:
    """t -> t^(p^j); a field automorphism fixing the prime subfield."""
    if t.field != sigma.field:
        raise ValueError("element and automorphism belong to different fields")
    return FieldElement(t.field, sigma.apply_code(t.code))


def automorphism_group(field: FieldSpec) -> list[FieldAutomorphism]:
    """All k automorphisms of GF(p^k), identity first, in Frobenius-power order."""
    return [FieldAutomorphism(field, j) for j in range(field.k)]
