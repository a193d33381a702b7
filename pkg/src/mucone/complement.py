"""Complement maps: assignments of dual-side subspaces to cones.

A complement map picks, for a cone spanned by rays w_s, a subspace of the
dual space V of the same dimension that is complementary to the
annihilator of the rays' span. Three families are implemented: inner
products (total), complete flags (partial), and explicit per-ray tables
such as the cyclic-difference map on the projective-space fan.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NotGenericError, UnknownRayError
from .geometry import Cone, _rank_of, _span_basis, subdivide_to_basic
from .linalg import Matrix, Vector, primitive, rational_kernel, solve_linear, unit_vector


class PsiSubspace:
    """A verified complement subspace for a set of independent rays.

    The basis spans the assigned subspace; construction checks that it has
    the rays' rank and pairs invertibly against the rays, which is exactly
    complementarity with the rays' annihilator.
    """

    __slots__ = ("rays", "basis", "pairing")

    def __init__(self, rays: Sequence[Vector], basis: Sequence[Vector]):
        self.rays = tuple(rays)
        self.basis = tuple(basis)
        k = len(self.rays)
        if len(self.basis) != k:
            raise NotGenericError(
                f"complement subspace for {list(self.rays)} has dimension "
                f"{len(self.basis)}, expected {k}")
        self.pairing = Matrix([[w.dot(b) for b in self.basis] for w in self.rays])
        if k and self.pairing.rank() < k:
            raise NotGenericError(
                f"complement subspace for {list(self.rays)} meets the rays' "
                "annihilator nontrivially")

    def contains(self, v: Vector) -> bool:
        if v.is_zero:
            return True
        return _rank_of(list(self.basis) + [v]) == len(self.basis)


class ComplementMap:
    """Base class; subclasses provide raw_basis() for a set of rays."""

    ambient: int

    def raw_basis(self, rays: Sequence[Vector]) -> list[Vector]:
        raise NotImplementedError

    def psi(self, rays: Sequence[Vector]) -> PsiSubspace:
        """The complement subspace for independent rays; raises NotGeneric."""
        rays = tuple(rays)
        cached = self._psi_cache.get(rays)
        if cached is None:
            raw = self.raw_basis(rays)
            cached = PsiSubspace(rays, _span_basis(raw))
            self._psi_cache[rays] = cached
        return cached

    def solve_u(self, rays: Sequence[Vector], target: int) -> Vector:
        """The unique u in psi(rays) pairing to 1 with rays[target], 0 with the rest."""
        key = (tuple(rays), target)
        cached = self._u_cache.get(key)
        if cached is None:
            sub = self.psi(rays)
            k = len(sub.rays)
            rhs = unit_vector(k, target)
            coeffs = solve_linear(sub.pairing, rhs)
            if coeffs is None:
                raise NotGenericError(f"no complement vector for {list(rays)}")
            u = Vector([Fraction(0)] * self.ambient)
            for c, b in zip(coeffs, sub.basis):
                u = u + c * b
            cached = u
            self._u_cache[key] = cached
        return cached

    def is_generic_basic(self, cone: Cone) -> bool:
        """All generator subsets admit a valid complement subspace."""
        gens = cone.generators
        for size in range(1, len(gens) + 1):
            for subset in itertools.combinations(gens, size):
                try:
                    self.psi(subset)
                except NotGenericError:
                    return False
                except UnknownRayError:
                    return False
        return True

    def is_generic(self, cone: Cone) -> bool:
        """Basic cones directly; others via the canonical basic subdivision.

        For non-basic cones this is a conservative test: only the canonical
        subdivision is examined, not every possible one.
        """
        if cone.is_zero:
            return True
        if cone.is_basic:
            return self.is_generic_basic(cone)
        try:
            children = subdivide_to_basic(cone)
        except Exception:
            return False
        return all(self.is_generic_basic(ch) for ch in children)

    def key(self) -> tuple:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def _init_caches(self):
        self._psi_cache: dict = {}
        self._u_cache: dict = {}


class InnerProductMap(ComplementMap):
    """psi(S) = the pairing image of span{w_s} under a positive-definite Gram matrix.

    Total: every pointed cone is generic.
    """

    def __init__(self, gram: Matrix):
        n = gram.nrows
        if gram.ncols != n:
            raise ValueError("Gram matrix must be square")
        if gram.transpose().rows != gram.rows:
            raise ValueError("Gram matrix must be symmetric")
        for k in range(1, n + 1):
            minor = Matrix([row[:k] for row in gram.rows[:k]])
            if minor.det() <= 0:
                raise ValueError("Gram matrix must be positive definite")
        self.gram = gram
        self.ambient = n
        self._init_caches()

    def raw_basis(self, rays: Sequence[Vector]) -> list[Vector]:
        return [self.gram.matvec(w) for w in rays]

    def inner(self, a: Vector, b: Vector) -> Fraction:
        return a.dot(self.gram.matvec(b))

    def key(self) -> tuple:
        return ("inner_product", tuple(self.gram.rows))

    def describe(self) -> str:
        if self.gram == Matrix.identity(self.ambient):
            return "inner_product(standard)"
        return "inner_product"

    def to_json(self) -> dict:
        return {"type": "inner_product",
                "gram": [[str(e) for e in row] for row in self.gram.rows]}


def standard_inner_product(n: int) -> InnerProductMap:
    return InnerProductMap(Matrix.identity(n))


class FlagMap(ComplementMap):
    """psi(S) = the first |S| steps of a fixed complete flag of V.

    Partial: a cone is generic only when each flag step pairs invertibly
    with the corresponding ray subsets.
    """

    def __init__(self, basis: Sequence[Vector]):
        basis = [v if isinstance(v, Vector) else Vector(v) for v in basis]
        n = len(basis)
        if any(len(v) != n for v in basis):
            raise ValueError("flag basis must be square")
        if _rank_of(basis) != n:
            raise ValueError("flag basis must be linearly independent")
        self.basis = tuple(basis)
        self.ambient = n
        self._init_caches()

    def raw_basis(self, rays: Sequence[Vector]) -> list[Vector]:
        return list(self.basis[: len(rays)])

    def key(self) -> tuple:
        return ("flag", tuple(v.entries for v in self.basis))

    def describe(self) -> str:
        return "flag"

    def to_json(self) -> dict:
        return {"type": "flag", "basis": [v.to_json() for v in self.basis]}


class RayTableMap(ComplementMap):
    """psi(S) = span of explicitly tabulated vectors, one per known ray."""

    def __init__(self, entries: dict[Vector, Vector] | Iterable[tuple[Vector, Vector]],
                 ambient: int | None = None):
        table: dict[Vector, Vector] = {}
        pairs = entries.items() if isinstance(entries, dict) else entries
        for ray, u in pairs:
            ray = primitive(ray)
            if ray.dot(u) == 0:
                raise ValueError(f"table vector for ray {ray} pairs to zero")
            table[ray] = u
        if not table and ambient is None:
            raise ValueError("ambient dimension required for an empty table")
        self.table = table
        self.ambient = ambient if ambient is not None else len(next(iter(table)))
        self._init_caches()

    def raw_basis(self, rays: Sequence[Vector]) -> list[Vector]:
        out = []
        for r in rays:
            r = primitive(r)
            if r not in self.table:
                raise UnknownRayError(f"no table entry for ray {r}")
            out.append(self.table[r])
        return out

    def key(self) -> tuple:
        return ("ray_table",
                tuple(sorted((r.entries, u.entries) for r, u in self.table.items())))

    def describe(self) -> str:
        return "ray_table"

    def to_json(self) -> dict:
        return {"type": "ray_table",
                "entries": [{"ray": r.to_json(), "u": u.to_json()}
                            for r, u in sorted(self.table.items(),
                                               key=lambda it: it[0].entries)]}


def map_from_json(data: dict) -> ComplementMap:
    from .linalg import parse_rational
    kind = data.get("type")
    if kind == "inner_product":
        rows = [[parse_rational(e) for e in row] for row in data["gram"]]
        return InnerProductMap(Matrix(rows))
    if kind == "flag":
        return FlagMap([Vector([parse_rational(e) for e in v]) for v in data["basis"]])
    if kind == "ray_table":
        entries = []
        for item in data["entries"]:
            ray = Vector([parse_rational(e) for e in item["ray"]])
            u = Vector([parse_rational(e) for e in item["u"]])
            entries.append((ray, u))
        return RayTableMap(entries)
    raise ValueError(f"unknown complement map type: {kind!r}")


# -- the projective-space fan and its cyclic-difference map -----------------


def projective_fan_rays(n: int) -> list[Vector]:
    """Rays of the n-dimensional projective-space fan: e_1..e_n and -sum(e_i).

    Index 0 holds the negative-sum ray; 1..n the basis rays, so that rays
    i and i+1 (cyclically mod n+1) span a 2D cone of the fan.
    """
    rays = [Vector([-1] * n)]
    rays.extend(unit_vector(n, i) for i in range(n))
    return rays


def projective_fan_cones(n: int) -> list[Cone]:
    """All nonzero cones of the projective-space fan (proper ray subsets)."""
    rays = projective_fan_rays(n)
    out = []
    for size in range(1, n + 1):
        for subset in itertools.combinations(range(n + 1), size):
            out.append(Cone([rays[i] for i in subset], ambient=n))
    return out


def diaconis_fulton_map(n: int) -> RayTableMap:
    """The cyclic-difference ray table on the projective-space fan.

    Each ray gets the dual vector pairing to 1 with itself and -1 with the
    cyclically next ray: for the basis rays u_i = v_i - v_{i+1} (v = dual
    basis, v_{n+1} read as 0), and u_0 = -v_1 for the negative-sum ray.
    """
    rays = projective_fan_rays(n)
    entries = []
    entries.append((rays[0], -unit_vector(n, 0)))
    for i in range(1, n + 1):
        if i < n:
            u = unit_vector(n, i - 1) - unit_vector(n, i)
        else:
            u = unit_vector(n, n - 1)
        entries.append((rays[i], u))
    return RayTableMap(entries)


def consecutive_mod(i: int, j: int, n: int) -> bool:
    """Whether fan ray indices i, j are cyclically adjacent mod n+1."""
    return (j - i) % (n + 1) == 1 or (i - j) % (n + 1) == 1
