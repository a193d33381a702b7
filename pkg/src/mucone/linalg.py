"""Exact rational linear algebra: vectors, matrices, HNF, lattice helpers.

Everything runs over fractions.Fraction; no floats anywhere. The dual
pairing between a cone's ambient space and the space its polytopes live in
is the coordinate dot product throughout.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    DependentGeneratorsError,
    NotUnimodularError,
    ParseError,
    ZeroVectorError,
)


def parse_rational(s) -> Fraction:
    """Parse an int, or a "p" / "p/q" string, into a Fraction."""
    if isinstance(s, bool):
        raise ParseError(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, Fraction):
        return s
    if isinstance(s, str):
        try:
            return Fraction(s.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational string {s!r}") from exc
    raise ParseError(f"not a rational: {s!r}")


def format_rational(q: Fraction) -> str:
    """Render a Fraction as "p" or "p/q" with positive denominator."""
    return str(Fraction(q))


class Vector:
    """Immutable exact vector. Entries are Fractions (ints normalize)."""

    __slots__ = ("entries", "_hash")

    def __init__(self, entries: Iterable):
        self.entries = tuple(Fraction(e) for e in entries)
        self._hash = hash(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        return isinstance(other, Vector) and self.entries == other.entries

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "Vector(%s)" % (", ".join(format_rational(e) for e in self.entries))

    def __add__(self, other: "Vector") -> "Vector":
        return Vector(a + b for a, b in zip(self.entries, other.entries, strict=True))

    def __sub__(self, other: "Vector") -> "Vector":
        return Vector(a - b for a, b in zip(self.entries, other.entries, strict=True))

    def __neg__(self) -> "Vector":
        return Vector(-a for a in self.entries)

    def __mul__(self, c) -> "Vector":
        c = Fraction(c)
        return Vector(a * c for a in self.entries)

    __rmul__ = __mul__

    def dot(self, other: "Vector") -> Fraction:
        """Coordinate pairing <w, v> = sum_i w_i v_i."""
        return sum(
            (a * b for a, b in zip(self.entries, other.entries, strict=True)),
            start=Fraction(0),
        )

    @property
    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)

    @property
    def is_integral(self) -> bool:
        return all(e.denominator == 1 for e in self.entries)

    def to_json(self) -> list:
        return [format_rational(e) for e in self.entries]


def zero_vector(n: int) -> Vector:
    return Vector([0] * n)


def unit_vector(n: int, i: int) -> Vector:
    return Vector([1 if j == i else 0 for j in range(n)])


def primitive(v: Vector) -> Vector:
    """Scale a nonzero rational vector to the primitive integer vector on its ray.

    Direction is preserved; result has integer entries with gcd 1.
    """
    if v.is_zero:
        raise ZeroVectorError("primitive() of the zero vector")
    lcm = 1
    for e in v.entries:
        lcm = lcm * e.denominator // math.gcd(lcm, e.denominator)
    ints = [int(e * lcm) for e in v.entries]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return Vector(x // g for x in ints)


class Matrix:
    """Immutable exact matrix, stored as a tuple of row tuples."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        self.rows = tuple(tuple(Fraction(e) for e in row) for row in rows)
        if self.rows:
            width = len(self.rows[0])
            if any(len(r) != width for r in self.rows):
                raise ValueError("ragged matrix")

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "Matrix":
        cols = [tuple(c) for c in cols]
        return cls(zip(*cols)) if cols else cls([])

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "Matrix(%r)" % [list(map(str, r)) for r in self.rows]

    def row(self, i: int) -> Vector:
        return Vector(self.rows[i])

    def column(self, j: int) -> Vector:
        return Vector(r[j] for r in self.rows)

    def transpose(self) -> "Matrix":
        return Matrix(zip(*self.rows)) if self.rows else Matrix([])

    def matvec(self, v: Vector) -> Vector:
        return Vector(Vector(r).dot(v) for r in self.rows)

    def matmul(self, other: "Matrix") -> "Matrix":
        cols = [other.column(j) for j in range(other.ncols)]
        return Matrix([[Vector(r).dot(c) for c in cols] for r in self.rows])

    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form and the list of pivot columns."""
        m = [list(r) for r in self.rows]
        nr, nc = len(m), (len(m[0]) if m else 0)
        pivots: list[int] = []
        r = 0
        for c in range(nc):
            pr = next((i for i in range(r, nr) if m[i][c] != 0), None)
            if pr is None:
                continue
            m[r], m[pr] = m[pr], m[r]
            inv = 1 / m[r][c]
            m[r] = [x * inv for x in m[r]]
            for i in range(nr):
                if i != r and m[i][c] != 0:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == nr:
                break
        return Matrix(m), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def det(self) -> Fraction:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        m = [list(r) for r in self.rows]
        n = len(m)
        det = Fraction(1)
        for c in range(n):
            pr = next((i for i in range(c, n) if m[i][c] != 0), None)
            if pr is None:
                return Fraction(0)
            if pr != c:
                m[c], m[pr] = m[pr], m[c]
                det = -det
            det *= m[c][c]
            inv = 1 / m[c][c]
            for i in range(c + 1, n):
                if m[i][c] != 0:
                    f = m[i][c] * inv
                    m[i] = [a - f * b for a, b in zip(m[i], m[c])]
        return det

    def inverse(self) -> "Matrix":
        n = self.nrows
        if n != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        aug = Matrix([list(self.rows[i]) + [1 if j == i else 0 for j in range(n)]
                      for i in range(n)])
        red, pivots = aug.rref()
        if pivots[:n] != list(range(n)):
            raise ValueError("singular matrix")
        return Matrix([row[n:] for row in red.rows])


def rational_kernel(a: Matrix) -> list[Vector]:
    """Basis over Q of {x : A x = 0}, from the reduced row echelon form."""
    red, pivots = a.rref()
    nc = a.ncols
    free = [j for j in range(nc) if j not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * nc
        x[f] = Fraction(1)
        for r, c in enumerate(pivots):
            x[c] = -red.rows[r][f]
        basis.append(Vector(x))
    return basis


def solve_linear(a: Matrix, b: Vector) -> Vector | None:
    """One exact solution x of a x = b, or None if b is outside the column span.

    Free variables (if any) are set to 0, so the solution is unique exactly
    when a has full column rank.
    """
    nr, nc = a.nrows, a.ncols
    aug = Matrix([list(a.rows[i]) + [b[i]] for i in range(nr)])
    red, pivots = aug.rref()
    if nc in pivots:
        return None
    x = [Fraction(0)] * nc
    for r, c in enumerate(pivots):
        x[c] = red.rows[r][nc]
    return Vector(x)


def _extgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a x + b y = g = gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def hermite_normal_form(a: Matrix) -> tuple[Matrix, Matrix]:
    """Column-style Hermite normal form: H = A * U with U unimodular.

    H is in column echelon form with positive pivots; in each pivot row the
    entries left of the pivot are reduced into [0, pivot). Zero columns of H
    (if A is rank-deficient) come last, and the matching columns of U are a
    basis of the integer kernel of A.
    """
    if any(e.denominator != 1 for row in a.rows for e in row):
        raise ValueError("HNF requires an integer matrix")
    nr, nc = a.nrows, a.ncols
    h = [[int(e) for e in row] for row in a.rows]
    u = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]

    def colop(j, k, c):
        # col_j += c * col_k
        for i in range(nr):
            h[i][j] += c * h[i][k]
        for i in range(nc):
            u[i][j] += c * u[i][k]

    def colswap(j, k):
        for i in range(nr):
            h[i][j], h[i][k] = h[i][k], h[i][j]
        for i in range(nc):
            u[i][j], u[i][k] = u[i][k], u[i][j]

    def colneg(j):
        for i in range(nr):
            h[i][j] = -h[i][j]
        for i in range(nc):
            u[i][j] = -u[i][j]

    pc = 0
    for i in range(nr):
        if pc >= nc:
            break
        j0 = next((j for j in range(pc, nc) if h[i][j] != 0), None)
        if j0 is None:
            continue
        if j0 != pc:
            colswap(pc, j0)
        for j in range(pc + 1, nc):
            if h[i][j] == 0:
                continue
            aa, bb = h[i][pc], h[i][j]
            g, x, y = _extgcd(aa, bb)
            # unimodular 2-column mix sending (aa, bb) -> (g, 0)
            p, q = aa // g, bb // g
            for r in range(nr):
                hp, hj = h[r][pc], h[r][j]
                h[r][pc] = x * hp + y * hj
                h[r][j] = -q * hp + p * hj
            for r in range(nc):
                up, uj = u[r][pc], u[r][j]
                u[r][pc] = x * up + y * uj
                u[r][j] = -q * up + p * uj
        if h[i][pc] < 0:
            colneg(pc)
        piv = h[i][pc]
        for j in range(pc):
            if h[i][j] != 0:
                colop(j, pc, -(h[i][j] // piv))
        pc += 1
    return Matrix(h), Matrix(u)


def integer_kernel(a: Matrix) -> list[Vector]:
    """Basis of the lattice {x integer : A x = 0}. Always saturated."""
    if a.ncols == 0:
        return []
    h, u = hermite_normal_form(a)
    out = []
    for j in range(a.ncols):
        if all(h.rows[i][j] == 0 for i in range(a.nrows)):
            out.append(u.column(j))
    return out


def saturation_basis(vectors: Sequence[Vector]) -> list[Vector]:
    """Basis of the saturated lattice Z^n  intersect  span_Q(vectors).

    The vectors must be integral. The result has one basis vector per
    dimension of the span; expressing any integer point of the span in this
    basis gives integer coordinates.
    """
    if not vectors:
        return []
    n = len(vectors[0])
    rows = Matrix([list(v) for v in vectors])
    if rows.rank() == n:
        return [unit_vector(n, i) for i in range(n)]
    orth = integer_kernel(rows)
    if not orth:
        return [unit_vector(n, i) for i in range(n)]
    return integer_kernel(Matrix([list(v) for v in orth]))


def express_in_basis(basis: Sequence[Vector], v: Vector) -> Vector | None:
    """Coordinates of v in the given basis (columns), or None if outside the span."""
    return solve_linear(Matrix.from_columns([list(b) for b in basis]), v)


def cone_index(generators: Sequence[Vector]) -> int:
    """Index of the sublattice spanned by independent integer generators
    inside the saturated lattice of their span (|det| in a lattice basis)."""
    gens = list(generators)
    if not gens:
        return 1
    if Matrix([list(g) for g in gens]).rank() != len(gens):
        raise DependentGeneratorsError("generators are linearly dependent")
    sat = saturation_basis(gens)
    cols = []
    for g in gens:
        c = express_in_basis(sat, g)
        assert c is not None and c.is_integral
        cols.append(list(c))
    d = Matrix.from_columns(cols).det()
    assert d.denominator == 1 and d != 0
    return abs(int(d))


def dual_basis(basis: Sequence[Vector]) -> list[Vector]:
    """For a lattice basis w_1..w_n, the dual basis v_1..v_n with <w_i, v_j> = delta_ij."""
    mat = Matrix([list(w) for w in basis])
    if mat.nrows != mat.ncols:
        raise NotUnimodularError("dual basis needs n vectors in dimension n")
    d = mat.det()
    if abs(d) != 1:
        raise NotUnimodularError(f"not a lattice basis (determinant {d})")
    inv = mat.inverse()
    return [inv.column(j) for j in range(mat.ncols)]
