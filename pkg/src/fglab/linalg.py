"""Exact linear algebra over GF(q): vectors, functionals, square matrices,
rank / kernel / span, pure tensors, the trace form, and perps.

Conventions (fixed once, used everywhere):

* vectors are columns, functionals are rows; the pairing ``xi(x)`` is the
  row-times-column product, and ``xi * M * x`` is row times matrix times
  column;
* the tensor ``x (x) xi`` is the column-times-row product, i.e. the rank-1
  matrix with (i, j) entry ``x_i * xi_j``;
* subspaces are canonically represented by their reduced row-echelon basis
  (pivots 1, eliminated above and below, rows ordered by pivot column), so
  subspace equality is representation equality;
* projective canonicalization scales a nonzero vector / functional / matrix
  so its first nonzero coordinate (row-major for matrices) is 1.

All values are immutable and store element codes (see ``gf``); arithmetic
goes through the field's tables.  ``EchelonBasis`` is the mutable worker
behind span / rank / kernel and is also used directly by the verification
campaigns, where building one FieldElement per entry would dominate the
runtime.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FglabError
from .gf import FieldAutomorphism, FieldElement, FieldSpec


class LinalgError(FglabError, ValueError):
    pass


class DimensionMismatch(LinalgError):
    """Operands live in spaces of different dimensions (or fields)."""


class AmbientMismatch(LinalgError):
    """Items of a span / basis operation do not share an ambient space."""


class ZeroMatrix(LinalgError):
    """The operation is undefined for the zero matrix."""


# ---------------------------------------------------------------------------
# raw code-tuple rows
# ---------------------------------------------------------------------------

def _first_nonzero(row: tuple[int, ...]) -> int | None:
    for i, c in enumerate(row):
        if c:
            return i
    return None


def scale_codes(field: FieldSpec, row: tuple[int, ...], factor: int) -> tuple[int, ...]:
    if factor == 1:
        return row
    mt = field.mul_table[factor]
    return tuple(mt[c] for c in row)


def projective_normal_codes(field: FieldSpec, row: tuple[int, ...]) -> tuple[int, ...]:
    lead = _first_nonzero(row)
    if lead is None:
        return row
    return scale_codes(field, row, field.inv_table[row[lead]])


class EchelonBasis:
    """Mutable row-echelon accumulator over GF(q) code tuples.

    ``insert`` keeps rows pivot-normalized and fully reduced against existing
    pivots, which makes the invariants simple: one pivot per column, and
    ``reduce`` of any row in the span yields the zero tuple.
    """

    __slots__ = ("field", "width", "pivots")

    def __init__(self, field: FieldSpec, width: int):
        self.field = field
        self.width = width
        self.pivots: dict[int, tuple[int, ...]] = {}

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def reduce(self, row: tuple[int, ...]) -> tuple[int, ...]:
        """Residual of row after elimination by all current pivots."""
        sub = self.field.sub_table
        mul = self.field.mul_table
        pivots = self.pivots
        for col, piv in pivots.items():
            c = row[col]
            if c:
                mt = mul[c]
                row = tuple(sub[a][mt[b]] for a, b in zip(row, piv))
        return row

    def insert(self, row: tuple[int, ...]) -> bool:
        """Add a row to the span; returns True iff the dimension grew."""
        row = self.reduce(row)
        lead = _first_nonzero(row)
        if lead is None:
            return False
        if row[lead] != 1:
            row = scale_codes(self.field, row, self.field.inv_table[row[lead]])
        # keep full reduction: clear this column from existing pivot rows
        sub = self.field.sub_table
        mul = self.field.mul_table
        for col, piv in list(self.pivots.items()):
            c = piv[lead]
            if c:
                mt = mul[c]
                self.pivots[col] = tuple(sub[a][mt[b]] for a, b in zip(piv, row))
        self.pivots[lead] = row
        return True

    def contains(self, row: tuple[int, ...]) -> bool:
        return _first_nonzero(self.reduce(row)) is None

    def rows(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.pivots[c] for c in sorted(self.pivots))

    def to_basis(self) -> "SubspaceBasis":
        return SubspaceBasis(self.field, self.width, self.rows())

    @classmethod
    def from_basis(cls, basis: "SubspaceBasis") -> "EchelonBasis":
        acc = cls(basis.field, basis.ambient_dim)
        for row in basis.rows:
            lead = _first_nonzero(row)
            acc.pivots[lead] = row
        return acc

    def clone(self) -> "EchelonBasis":
        acc = EchelonBasis(self.field, self.width)
        acc.pivots = dict(self.pivots)
        return acc


@dataclass(frozen=True, slots=True)
class SubspaceBasis:
    """Canonical (reduced row-echelon) basis of a subspace of GF(q)^ambient_dim."""

    field: FieldSpec
    ambient_dim: int
    rows: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce_codes(self, row: tuple[int, ...]) -> tuple[int, ...]:
        sub = self.field.sub_table
        mul = self.field.mul_table
        for piv in self.rows:
            c = row[_first_nonzero(piv)]
            if c:
                mt = mul[c]
                row = tuple(sub[a][mt[b]] for a, b in zip(row, piv))
        return row

    def contains_codes(self, row: tuple[int, ...]) -> bool:
        return _first_nonzero(self.reduce_codes(row)) is None

    def contains(self, item) -> bool:
        row, width = _as_row(item)
        if width != self.ambient_dim or item.field != self.field:
            raise AmbientMismatch(f"item of width {width} vs ambient {self.ambient_dim}")
        return self.contains_codes(row)

    def is_subspace_of(self, other: "SubspaceBasis") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise AmbientMismatch("ambient dimensions differ")
        return all(other.contains_codes(r) for r in self.rows)


# ---------------------------------------------------------------------------
# public value types
# ---------------------------------------------------------------------------

def _codes_of(field: FieldSpec, items) -> tuple[int, ...]:
    out = []
    for x in items:
        if isinstance(x, FieldElement):
            if x.field != field:
                raise DimensionMismatch("mixed fields in coordinate list")
            out.append(x.code)
        else:
            out.append(int(x) % field.p)
    return tuple(out)


@dataclass(frozen=True, slots=True)
class Vector:
    """Column vector of length n+1 over a FieldSpec; ``codes`` are element codes."""

    field: FieldSpec
    codes: tuple[int, ...]

    @classmethod
    def of(cls, field: FieldSpec, items) -> "Vector":
        return cls(field, _codes_of(field, items))

    @property
    def coords(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(self.field, c) for c in self.codes)

    def __len__(self) -> int:
        return len(self.codes)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.codes)

    def __add__(self, other: "Vector") -> "Vector":
        _check_same(self, other)
        add = self.field.add_table
        return Vector(self.field, tuple(add[a][b] for a, b in zip(self.codes, other.codes)))

    def scale(self, t: FieldElement | int) -> "Vector":
        code = t.code if isinstance(t, FieldElement) else int(t) % self.field.p
        return Vector(self.field, scale_codes(self.field, self.codes, code))

    def twist(self, sigma: FieldAutomorphism) -> "Vector":
        """Coordinatewise automorphism image (x_i) -> (x_i^sigma)."""
        tab = self.field.frob_table[sigma.frobenius_power]
        return Vector(self.field, tuple(tab[c] for c in self.codes))

    def projective_normal(self) -> "Vector":
        return Vector(self.field, projective_normal_codes(self.field, self.codes))


@dataclass(frozen=True, slots=True)
class Functional:
    """Row vector (element of the dual space); evaluates on Vector by row-times-column."""

    field: FieldSpec
    codes: tuple[int, ...]

    @classmethod
    def of(cls, field: FieldSpec, items) -> "Functional":
        return cls(field, _codes_of(field, items))

    @property
    def coords(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(self.field, c) for c in self.codes)

    def __len__(self) -> int:
        return len(self.codes)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.codes)

    def __call__(self, x: Vector) -> FieldElement:
        _check_same(self, x)
        add = self.field.add_table
        mul = self.field.mul_table
        acc = 0
        for a, b in zip(self.codes, x.codes):
            acc = add[acc][mul[a][b]]
        return FieldElement(self.field, acc)

    def twist(self, sigma: FieldAutomorphism) -> "Functional":
        tab = self.field.frob_table[sigma.frobenius_power]
        return Functional(self.field, tuple(tab[c] for c in self.codes))

    def projective_normal(self) -> "Functional":
        return Functional(self.field, projective_normal_codes(self.field, self.codes))


def _check_same(a, b) -> None:
    if a.field != b.field or len(a.codes) != len(b.codes):
        raise DimensionMismatch("operands have different fields or lengths")


@dataclass(frozen=True, slots=True)
class MatrixVec:
    """Square matrix of order n+1 over a FieldSpec, stored as nested code rows.

    These are the ambient vectors of the embeddings: the full matrix space
    and its null-trace hyperplane.
    """

    field: FieldSpec
    entries: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, field: FieldSpec, rows) -> "MatrixVec":
        out = tuple(_codes_of(field, r) for r in rows)
        size = len(out)
        if any(len(r) != size for r in out):
            raise DimensionMismatch("matrix is not square")
        return cls(field, out)

    @classmethod
    def zero(cls, field: FieldSpec, size: int) -> "MatrixVec":
        return cls(field, tuple((0,) * size for _ in range(size)))

    @classmethod
    def identity(cls, field: FieldSpec, size: int) -> "MatrixVec":
        return cls(field, tuple(tuple(1 if i == j else 0 for j in range(size)) for i in range(size)))

    @classmethod
    def basis_matrix(cls, field: FieldSpec, size: int, i: int, j: int) -> "MatrixVec":
        """E_{i,j}: single 1 in position (i, j)."""
        return cls(field, tuple(
            tuple(1 if (r, c) == (i, j) else 0 for c in range(size)) for r in range(size)
        ))

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def flat(self) -> tuple[int, ...]:
        return tuple(c for row in self.entries for c in row)

    @property
    def flat_transposed(self) -> tuple[int, ...]:
        n = self.size
        return tuple(self.entries[j][i] for i in range(n) for j in range(n))

    @classmethod
    def from_flat(cls, field: FieldSpec, size: int, flat: tuple[int, ...]) -> "MatrixVec":
        return cls(field, tuple(tuple(flat[i * size:(i + 1) * size]) for i in range(size)))

    def element(self, i: int, j: int) -> FieldElement:
        return FieldElement(self.field, self.entries[i][j])

    def is_zero(self) -> bool:
        return all(c == 0 for row in self.entries for c in row)

    def __add__(self, other: "MatrixVec") -> "MatrixVec":
        self._check(other)
        add = self.field.add_table
        return MatrixVec(self.field, tuple(
            tuple(add[a][b] for a, b in zip(ra, rb)) for ra, rb in zip(self.entries, other.entries)
        ))

    def __sub__(self, other: "MatrixVec") -> "MatrixVec":
        self._check(other)
        sub = self.field.sub_table
        return MatrixVec(self.field, tuple(
            tuple(sub[a][b] for a, b in zip(ra, rb)) for ra, rb in zip(self.entries, other.entries)
        ))

    def scale(self, t: FieldElement | int) -> "MatrixVec":
        code = t.code if isinstance(t, FieldElement) else int(t) % self.field.p
        mt = self.field.mul_table[code]
        return MatrixVec(self.field, tuple(tuple(mt[c] for c in row) for row in self.entries))

    def matmul(self, other: "MatrixVec") -> "MatrixVec":
        self._check(other)
        add = self.field.add_table
        mul = self.field.mul_table
        n = self.size
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = 0
                for t in range(n):
                    acc = add[acc][mul[self.entries[i][t]][other.entries[t][j]]]
                row.append(acc)
            rows.append(tuple(row))
        return MatrixVec(self.field, tuple(rows))

    def transpose(self) -> "MatrixVec":
        n = self.size
        return MatrixVec(self.field, tuple(tuple(self.entries[j][i] for j in range(n)) for i in range(n)))

    def twist(self, sigma: FieldAutomorphism) -> "MatrixVec":
        tab = self.field.frob_table[sigma.frobenius_power]
        return MatrixVec(self.field, tuple(tuple(tab[c] for c in row) for row in self.entries))

    def projective_normal(self) -> "MatrixVec":
        return MatrixVec.from_flat(self.field, self.size,
                                   projective_normal_codes(self.field, self.flat))

    def is_scalar(self) -> bool:
        """True iff the matrix lies in the span of the identity (zero included)."""
        d = self.entries[0][0]
        n = self.size
        return all(self.entries[i][j] == (d if i == j else 0) for i in range(n) for j in range(n))

    def is_null_traced(self) -> bool:
        return trace(self).is_zero()

    def _check(self, other: "MatrixVec") -> None:
        if self.field != other.field or self.size != other.size:
            raise DimensionMismatch("matrices have different fields or sizes")


def _as_row(item) -> tuple[tuple[int, ...], int]:
    """Flatten a Vector / Functional / MatrixVec to a coordinate row."""
    if isinstance(item, MatrixVec):
        flat = item.flat
        return flat, len(flat)
    if isinstance(item, (Vector, Functional)):
        return item.codes, len(item.codes)
    raise AmbientMismatch(f"cannot flatten {type(item).__name__}")


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def pure_tensor(x: Vector, xi: Functional) -> MatrixVec:
    """Column-times-row product: entries[i][j] = x_i * xi_j.  Rank <= 1."""
    _check_same(x, xi)
    mul = x.field.mul_table
    return MatrixVec(x.field, tuple(tuple(mul[a][b] for b in xi.codes) for a in x.codes))


def trace(m: MatrixVec) -> FieldElement:
    add = m.field.add_table
    acc = 0
    for i in range(m.size):
        acc = add[acc][m.entries[i][i]]
    return FieldElement(m.field, acc)


def saturation_form(x: MatrixVec, y: MatrixVec) -> FieldElement:
    """The symmetric bilinear form trace(XY) = sum_{i,j} X_ij * Y_ji."""
    if x.field != y.field or x.size != y.size:
        raise DimensionMismatch("saturation form needs matrices of equal size over one field")
    add = x.field.add_table
    mul = x.field.mul_table
    acc = 0
    for i in range(x.size):
        xrow = x.entries[i]
        for j in range(x.size):
            acc = add[acc][mul[xrow[j]][y.entries[j][i]]]
    return FieldElement(x.field, acc)


def pairing_codes(field: FieldSpec, a: tuple[int, ...], b: tuple[int, ...]) -> int:
    """sum_t a[t] * b[t] as a code; the campaigns' inner loop."""
    add = field.add_table
    mul = field.mul_table
    acc = 0
    for x, y in zip(a, b):
        if x and y:
            acc = add[acc][mul[x][y]]
    return acc


def rank(m: MatrixVec) -> int:
    acc = EchelonBasis(m.field, m.size)
    for row in m.entries:
        acc.insert(row)
    return acc.dim


def rank_of_flat(field: FieldSpec, size: int, flat: tuple[int, ...]) -> int:
    acc = EchelonBasis(field, size)
    for i in range(size):
        acc.insert(flat[i * size:(i + 1) * size])
    return acc.dim


def span_basis(items, *, field: FieldSpec | None = None, ambient_dim: int | None = None) -> SubspaceBasis:
    """Canonical reduced-echelon basis of the span of vectors or matrices.

    All items must be of one kind and one ambient.  An empty list spans the
    zero subspace (dimension 0), but its ambient cannot be inferred, so
    ``field`` and ``ambient_dim`` must be passed explicitly then.
    """
    items = list(items)
    if not items:
        if field is None or ambient_dim is None:
            raise AmbientMismatch("empty span needs explicit field and ambient_dim")
        return SubspaceBasis(field, ambient_dim, ())
    kind = type(items[0])
    field = items[0].field
    row0, width = _as_row(items[0])
    acc = EchelonBasis(field, width)
    acc.insert(row0)
    for item in items[1:]:
        if type(item) is not kind or item.field != field:
            raise AmbientMismatch("span items must share one kind and one field")
        row, w = _as_row(item)
        if w != width:
            raise AmbientMismatch("span items must share one ambient dimension")
        acc.insert(row)
    return acc.to_basis()


def empty_basis(field: FieldSpec, ambient_dim: int) -> SubspaceBasis:
    return SubspaceBasis(field, ambient_dim, ())


def perp(m: MatrixVec, ambient: SubspaceBasis) -> SubspaceBasis:
    """{X in ambient : saturation_form(m, X) = 0} as a canonical basis.

    Codimension 1 in the ambient when the form against m is nonzero there.
    """
    if m.is_zero():
        raise ZeroMatrix("perp of the zero matrix is everything; rejected")
    if ambient.field != m.field or ambient.ambient_dim != m.size ** 2:
        raise AmbientMismatch("ambient does not match the matrix space")
    coef = m.flat_transposed  # f(m, X) = sum_t coef[t] * flat(X)[t]
    field = m.field
    values = [pairing_codes(field, coef, row) for row in ambient.rows]
    pivot = next((i for i, v in enumerate(values) if v), None)
    if pivot is None:
        return ambient
    acc = EchelonBasis(field, ambient.ambient_dim)
    sub = field.sub_table
    inv_piv = field.inv_table[values[pivot]]
    for i, row in enumerate(ambient.rows):
        if i == pivot:
            continue
        if values[i]:
            factor = field.mul_table[values[i]][inv_piv]
            mt = field.mul_table[factor]
            row = tuple(sub[a][mt[b]] for a, b in zip(row, ambient.rows[pivot]))
        acc.insert(row)
    return acc.to_basis()


def sum_of_rank_ones(m: MatrixVec) -> list[MatrixVec]:
    """Exactly rank(m) rank-1 matrices summing to m, by pivot peeling.

    Each step subtracts (column j of the residual) tensor (row i of the
    residual) / residual[i][j], which zeroes row i and column j and drops the
    rank by one.
    """
    if m.is_zero():
        raise ZeroMatrix("the zero matrix has no rank-1 decomposition")
    field = m.field
    out: list[MatrixVec] = []
    residual = m
    while not residual.is_zero():
        i, j = next(
            (r, c)
            for r in range(m.size)
            for c in range(m.size)
            if residual.entries[r][c]
        )
        inv_code = field.inv_table[residual.entries[i][j]]
        col = Vector(field, tuple(residual.entries[r][j] for r in range(m.size)))
        row = Functional(field, scale_codes(field, residual.entries[i], inv_code))
        piece = pure_tensor(col, row)
        out.append(piece)
        residual = residual - piece
    return out


def intersect_bases(a: SubspaceBasis, b: SubspaceBasis) -> SubspaceBasis:
    """Intersection of two subspaces via the Zassenhaus double-width trick."""
    if a.field != b.field or a.ambient_dim != b.ambient_dim:
        raise AmbientMismatch("bases live in different ambient spaces")
    w = a.ambient_dim
    field = a.field
    acc = EchelonBasis(field, 2 * w)
    for row in a.rows:
        acc.insert(row + row)
    inter = EchelonBasis(field, w)
    for row in b.rows:
        residual = acc.reduce(row + (0,) * w)
        if _first_nonzero(residual[:w]) is None:
            inter.insert(residual[w:])
        else:
            acc.insert(residual)
    return inter.to_basis()


def kernel_basis(field: FieldSpec, width: int, constraint_rows) -> SubspaceBasis:
    """Canonical basis of {x : sum_t row[t] * x[t] = 0 for every row}."""
    acc = EchelonBasis(field, width)
    for row in constraint_rows:
        acc.insert(tuple(row))
        if acc.dim == width:
            break
    rref = acc.rows()
    pivot_cols = [_first_nonzero(r) for r in rref]
    pivot_set = set(pivot_cols)
    neg = field.neg_table
    out = EchelonBasis(field, width)
    for free in range(width):
        if free in pivot_set:
            continue
        vec = [0] * width
        vec[free] = 1
        for r, pc in zip(rref, pivot_cols):
            vec[pc] = neg[r[free]]
        out.insert(tuple(vec))
    return out.to_basis()
