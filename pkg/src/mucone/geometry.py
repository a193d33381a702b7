"""Cones, polytopes, face lattices, and exact subdivisions.

Cones are given by primitive integer ray generators and may live in any
ambient dimension up to the configured cap. Polytopes are given by their
exact vertex sets (every input point must be a lattice point and extreme).
Everything here is brute-force exact arithmetic; the intended ambient
dimensions are small (up to 4).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    DependentGeneratorsError,
    DimensionTooLargeError,
    InternalInconsistencyError,
    NotExtremeError,
    NotFullDimError,
    NotIntegralError,
    NotPointedError,
    NotSimplicialError,
    TooLargeError,
)
from .linalg import (
    Matrix,
    Vector,
    cone_index,
    express_in_basis,
    hermite_normal_form,
    primitive,
    rational_kernel,
    saturation_basis,
    solve_linear,
    zero_vector,
)

MAX_AMBIENT_DIM = 4
LATTICE_POINT_CAP = 2_000_000
PARALLELEPIPED_CAP = 100_000


def _rank_of(vectors: Sequence[Vector]) -> int:
    if not vectors:
        return 0
    return Matrix([list(v) for v in vectors]).rank()


def _span_basis(vectors: Sequence[Vector]) -> list[Vector]:
    """Rational basis of the linear span (nonzero rows of the rref)."""
    if not vectors:
        return []
    red, pivots = Matrix([list(v) for v in vectors]).rref()
    return [Vector(red.rows[i]) for i in range(len(pivots))]


def cone_facets(rays: Sequence[Vector]) -> list[tuple[Vector, frozenset[int]]]:
    """Facets of the pointed cone spanned by the rays.

    Returns (inner normal, indices of rays on the facet) pairs. The normal
    is a primitive vector in the linear span of the cone: nonnegative on
    every ray, zero exactly on the facet. Cones of dimension <= 1 have no
    facets in this sense.
    """
    k = _rank_of(rays)
    if k <= 1:
        return []
    span = _span_basis(rays)
    found: dict[Vector, frozenset[int]] = {}
    for subset in itertools.combinations(range(len(rays)), k - 1):
        sub = [rays[i] for i in subset]
        if _rank_of(sub) != k - 1:
            continue
        # normal h = sum_l z_l span_l with <h, r> = 0 for r in the subset
        m = Matrix([[s.dot(r) for s in span] for r in sub])
        ker = rational_kernel(m)
        if len(ker) != 1:
            continue
        h = zero_vector(len(rays[0]))
        for zl, s in zip(ker[0], span):
            h = h + zl * s
        h = primitive(h)
        vals = [h.dot(r) for r in rays]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            h = -h
            vals = [-v for v in vals]
        else:
            continue
        found[h] = frozenset(i for i, v in enumerate(vals) if v == 0)
    return sorted(found.items(), key=lambda it: it[0].entries)


def cone_contains(rays: Sequence[Vector], x: Vector,
                  facets: Sequence[tuple[Vector, frozenset[int]]] | None = None) -> bool:
    """Exact membership of x in the pointed cone spanned by the rays."""
    if x.is_zero:
        return True
    if not rays:
        return False
    span = _span_basis(rays)
    c = express_in_basis(span, x)
    if c is None:
        return False
    if len(span) == 1:
        t = express_in_basis([rays[0]], x)
        return t is not None and t[0] >= 0
    if facets is None:
        facets = cone_facets(rays)
    return all(h.dot(x) >= 0 for h, _ in facets)


class Cone:
    """Pointed rational cone, stored by primitive ray generators.

    Generators are primitivized and deduplicated at construction but
    otherwise kept in the given order. Equality and hashing use the
    generator set, so two descriptions of the same cone by the same
    irredundant rays coincide.
    """

    def __init__(self, generators: Iterable[Vector], ambient: int | None = None,
                 check_pointed: bool = True):
        gens: list[Vector] = []
        for g in generators:
            p = primitive(g)
            if p not in gens:
                gens.append(p)
        if ambient is None:
            if not gens:
                raise ValueError("ambient dimension required for the zero cone")
            ambient = len(gens[0])
        if any(len(g) != ambient for g in gens):
            raise ValueError("mixed ambient dimensions")
        if ambient > MAX_AMBIENT_DIM:
            raise DimensionTooLargeError(
                f"ambient dimension {ambient} above cap {MAX_AMBIENT_DIM}")
        if not all(g.is_integral for g in gens):
            # primitive() already clears denominators
            raise InternalInconsistencyError("non-integral primitive ray")
        self.generators = tuple(gens)
        self.ambient = ambient
        if check_pointed and not self.is_pointed:
            raise NotPointedError(f"cone is not pointed: {gens}")

    @cached_property
    def dim(self) -> int:
        return _rank_of(self.generators)

    @property
    def is_zero(self) -> bool:
        return not self.generators

    @property
    def is_simplicial(self) -> bool:
        return len(self.generators) == self.dim

    @cached_property
    def index(self) -> int:
        if not self.is_simplicial:
            raise NotSimplicialError("index of a non-simplicial cone")
        return cone_index(self.generators)

    @property
    def is_basic(self) -> bool:
        return self.is_simplicial and self.index == 1

    @cached_property
    def is_pointed(self) -> bool:
        # pointed iff no nontrivial nonnegative dependency among the rays;
        # it suffices to scan minimal dependent subsets (1-dim kernels)
        rays = self.generators
        r = _rank_of(rays)
        for size in range(2, r + 2):
            for subset in itertools.combinations(range(len(rays)), size):
                m = Matrix.from_columns([list(rays[i]) for i in subset])
                ker = rational_kernel(m)
                if len(ker) != 1:
                    continue
                k = ker[0]
                if all(c >= 0 for c in k) or all(c <= 0 for c in k):
                    return False
        return True

    @cached_property
    def facets(self) -> list[tuple[Vector, frozenset[int]]]:
        return cone_facets(self.generators)

    @cached_property
    def extreme_ray_indices(self) -> tuple[int, ...]:
        out = []
        for i, g in enumerate(self.generators):
            others = [h for j, h in enumerate(self.generators) if j != i]
            if not cone_contains(others, g):
                out.append(i)
        return tuple(out)

    def extreme_rays(self) -> list[Vector]:
        return [self.generators[i] for i in self.extreme_ray_indices]

    def contains(self, x: Vector) -> bool:
        if not self.is_pointed:
            raise NotPointedError("membership test implemented for pointed cones")
        return cone_contains(self.generators, x, self.facets)

    def face_index_sets(self) -> list[frozenset[int]]:
        """All faces, as generator index sets (zero face = empty set).

        For a simplicial cone these are exactly the subsets of the
        generators; in general they come from intersecting facets.
        """
        n = len(self.generators)
        if self.is_simplicial:
            return [frozenset(s)
                    for size in range(n + 1)
                    for s in itertools.combinations(range(n), size)]
        full = frozenset(range(n))
        sets = {full, frozenset()}
        frontier = {fs for _, fs in self.facets}
        sets |= frontier
        while True:
            new = set()
            for a in sets:
                for b in frontier:
                    c = a & b
                    if c not in sets:
                        new.add(c)
            if not new:
                return sorted(sets, key=lambda s: (len(s), sorted(s)))
            sets |= new

    def face_cone(self, indices: Iterable[int]) -> "Cone":
        return Cone([self.generators[i] for i in indices], self.ambient)

    def __eq__(self, other):
        return (isinstance(other, Cone)
                and self.ambient == other.ambient
                and frozenset(self.generators) == frozenset(other.generators))

    def __hash__(self):
        return hash((self.ambient, frozenset(self.generators)))

    def __repr__(self):
        return "Cone[%s]" % ", ".join(repr(list(g.entries)) for g in self.generators)

    def canonical_key(self) -> tuple:
        return (self.ambient, tuple(sorted(g.entries for g in self.generators)))

    def to_json(self) -> dict:
        return {"ambient": self.ambient,
                "generators": [g.to_json() for g in self.generators]}

    @classmethod
    def from_json(cls, data: dict) -> "Cone":
        from .linalg import parse_rational
        gens = [Vector([parse_rational(e) for e in g]) for g in data["generators"]]
        return cls(gens, ambient=int(data["ambient"]) if "ambient" in data else None)


def zero_cone(ambient: int) -> Cone:
    return Cone([], ambient=ambient)


# -- subdivisions ----------------------------------------------------------


class Subdivision:
    """A cone subdivision: simplicial cells of full dimension in the parent.

    Construction certifies, exactly: every cell has the parent's dimension,
    every cell ray lies in the parent, the parent's extreme rays are
    covered, and the cells meet face-to-face (every cell facet either lies
    on the parent's boundary and appears once, or is shared by exactly two
    cells). Failures raise InternalInconsistencyError since cells are
    produced by construction, never parsed from input.
    """

    def __init__(self, parent: Cone, children: Sequence[Cone], certify: bool = True):
        self.parent = parent
        self.children = tuple(children)
        if certify:
            self._certify()

    def _certify(self):
        parent, children = self.parent, self.children
        if not children:
            raise InternalInconsistencyError("empty subdivision")
        if len(children) == 1 and children[0] == parent:
            return
        d = parent.dim
        pfacets = parent.facets
        for cell in children:
            if not cell.is_simplicial or cell.dim != d:
                raise InternalInconsistencyError("cell not simplicial of full dimension")
            for g in cell.generators:
                if not parent.contains(g):
                    raise InternalInconsistencyError(f"cell ray {g} outside parent")
        covered = set()
        for cell in children:
            covered |= set(cell.generators)
        for r in parent.extreme_rays():
            if r not in covered:
                raise InternalInconsistencyError(f"parent ray {r} not covered")
        if d >= 1:
            counts: dict[tuple, int] = {}
            boundary: dict[tuple, bool] = {}
            for cell in children:
                gens = cell.generators
                for drop in range(len(gens)):
                    fr = [g for j, g in enumerate(gens) if j != drop]
                    key = tuple(sorted(g.entries for g in fr))
                    counts[key] = counts.get(key, 0) + 1
                    if key not in boundary:
                        boundary[key] = any(
                            all(h.dot(g) == 0 for g in fr) for h, _ in pfacets
                        ) if pfacets else (d == 1)
            for key, cnt in counts.items():
                want = 1 if boundary[key] else 2
                if cnt != want:
                    raise InternalInconsistencyError(
                        f"facet {key} appears {cnt} times, expected {want}")

    def __iter__(self):
        return iter(self.children)

    def __len__(self):
        return len(self.children)


def _half_open_parallelepiped_points(rays: Sequence[Vector]) -> list[tuple[Vector, Vector]]:
    """Lattice points of {sum c_i r_i : 0 <= c_i < 1} minus the origin.

    The lattice is the saturation of the span, so the points returned are
    honest integer vectors. Returns (point, coefficient vector) pairs.
    """
    m = len(rays)
    sat = saturation_basis(rays)
    cols = []
    for r in rays:
        c = express_in_basis(sat, r)
        assert c is not None and c.is_integral
        cols.append(c)
    cmat = Matrix.from_columns([list(c) for c in cols])
    h, _ = hermite_normal_form(cmat)
    diag = [int(h.rows[i][i]) for i in range(m)]
    index = 1
    for dd in diag:
        index *= dd
    if index > PARALLELEPIPED_CAP:
        raise TooLargeError(f"parallelepiped with {index} lattice points")
    inv = cmat.inverse()
    out = []
    for digits in itertools.product(*(range(dd) for dd in diag)):
        t = inv.matvec(Vector(digits))
        frac = Vector(ti - (ti.numerator // ti.denominator) for ti in t)
        if frac.is_zero:
            continue
        point_coords = cmat.matvec(frac)
        assert point_coords.is_integral
        point = zero_vector(len(rays[0]))
        for pc, s in zip(point_coords, sat):
            point = point + pc * s
        out.append((point, frac))
    return out


def _pulling_triangulation(rays: list[Vector]) -> list[tuple[int, ...]]:
    """Triangulate a pointed cone given by its extreme rays; index tuples.

    Recursive pulling construction: cone the lex-min ray over the
    triangulated facets that do not contain it. Face-to-face by
    construction, deterministic because rays are scanned in lex order.
    """
    def rec(idx: tuple[int, ...]) -> list[tuple[int, ...]]:
        sub = [rays[i] for i in idx]
        k = _rank_of(sub)
        if len(idx) == k:
            return [tuple(sorted(idx))]
        star = min(idx, key=lambda i: rays[i].entries)
        cells: list[tuple[int, ...]] = []
        for _, fset in cone_facets(sub):
            face_idx = tuple(idx[j] for j in sorted(fset))
            if star in face_idx:
                continue
            for cell in rec(face_idx):
                cells.append(tuple(sorted(cell + (star,))))
        return cells

    return rec(tuple(range(len(rays))))


def subdivide_to_basic(cone: Cone) -> Subdivision:
    """Subdivide a pointed cone into basic (unimodular simplicial) cones.

    First a pulling triangulation of the extreme rays, then repeated star
    subdivisions at the minimal-coefficient-sum lattice point of the
    half-open parallelepiped of some non-basic cell. The star step is
    applied fan-wide (every cell containing the point splits), which keeps
    the subdivision face-to-face; each affected cell's index strictly
    drops, so the loop terminates.
    """
    if cone.is_zero:
        return Subdivision(cone, [cone])
    if not cone.is_pointed:
        raise NotPointedError("subdivide_to_basic needs a pointed cone")
    if cone.is_basic:
        return Subdivision(cone, [cone])

    rays = sorted(cone.extreme_rays(), key=lambda r: r.entries)
    cells = [[rays[i] for i in cell] for cell in _pulling_triangulation(rays)]

    def cell_det(cell: list[Vector]) -> int:
        return cone_index(cell)

    rounds = 0
    while True:
        rounds += 1
        if rounds > 10_000:
            raise InternalInconsistencyError("stellar subdivision did not terminate")
        victim = None
        for cell in cells:
            if cell_det(cell) != 1:
                victim = cell
                break
        if victim is None:
            break
        points = _half_open_parallelepiped_points(victim)
        w, _ = min(points, key=lambda pc: (sum(pc[1].entries), pc[1].entries))
        new_cells: list[list[Vector]] = []
        for cell in cells:
            coords = solve_linear(Matrix.from_columns([list(r) for r in cell]), w)
            if coords is None or any(c < 0 for c in coords):
                new_cells.append(cell)
                continue
            # cell contains w: replace each positively-weighted ray by w
            for i, ci in enumerate(coords):
                if ci > 0:
                    child = list(cell)
                    child[i] = w
                    new_cells.append(child)
        cells = new_cells

    children = [Cone(cell, cone.ambient) for cell in cells]
    return Subdivision(cone, children)


# -- polytopes -------------------------------------------------------------


def in_convex_hull(p: Vector, points: Sequence[Vector]) -> bool:
    """Exact test whether p lies in the convex hull of the points."""
    n = len(p)
    pts = list(points)
    if not pts:
        return False
    for k in range(1, min(len(pts), n + 1) + 1):
        for subset in itertools.combinations(pts, k):
            a = Matrix([[1] * k] + [[q[i] for q in subset] for i in range(n)])
            if a.rank() != k:
                continue  # affinely dependent: a smaller subset covers this
            lam = solve_linear(a, Vector([1] + list(p)))
            if lam is not None and all(x >= 0 for x in lam):
                return True
    return False


def extreme_points(points: Sequence[Vector]) -> list[Vector]:
    """The extreme points of a finite point set, in first-seen order."""
    uniq: list[Vector] = []
    for p in points:
        if p not in uniq:
            uniq.append(p)
    out = []
    for i, p in enumerate(uniq):
        others = [q for j, q in enumerate(uniq) if j != i]
        if not in_convex_hull(p, others):
            out.append(p)
    return out


class Face:
    """A face of a polytope, identified by its vertex index set."""

    __slots__ = ("polytope", "indices", "dim")

    def __init__(self, polytope: "Polytope", indices: frozenset[int], dim: int):
        self.polytope = polytope
        self.indices = indices
        self.dim = dim

    @property
    def vertices(self) -> list[Vector]:
        return [self.polytope.vertices[i] for i in sorted(self.indices)]

    def __eq__(self, other):
        return (isinstance(other, Face)
                and self.polytope is other.polytope
                and self.indices == other.indices)

    def __hash__(self):
        return hash((id(self.polytope), self.indices))

    def __repr__(self):
        return f"Face(dim={self.dim}, vertices={sorted(self.indices)})"


class Polytope:
    """Integral polytope given by its exact vertex set.

    Every input point must be integral and extreme; the face lattice and
    facet descriptions are computed once at construction.
    """

    def __init__(self, points: Iterable[Vector], name: str | None = None):
        pts = [p if isinstance(p, Vector) else Vector(p) for p in points]
        if not pts:
            raise ValueError("a polytope needs at least one vertex")
        n = len(pts[0])
        if any(len(p) != n for p in pts):
            raise ValueError("mixed ambient dimensions")
        if n > MAX_AMBIENT_DIM:
            raise DimensionTooLargeError(f"ambient dimension {n} above cap {MAX_AMBIENT_DIM}")
        for p in pts:
            if not p.is_integral:
                raise NotIntegralError(f"vertex {p} is not a lattice point")
        uniq: list[Vector] = []
        for p in pts:
            if p not in uniq:
                uniq.append(p)
        for i, p in enumerate(uniq):
            others = [q for j, q in enumerate(uniq) if j != i]
            if others and in_convex_hull(p, others):
                raise NotExtremeError(f"input point {p} is not a vertex")
        self.vertices = tuple(uniq)
        self.ambient = n
        self.name = name or "polytope"
        self._base = self.vertices[0]
        diffs = [v - self._base for v in self.vertices[1:]]
        self._span = _span_basis(diffs)
        self.dim = len(self._span)
        self._coords = []
        for v in self.vertices:
            c = express_in_basis(self._span, v - self._base) if self.dim else Vector([])
            assert c is not None
            self._coords.append(c)
        self._facet_faces, self._facet_ineqs = self._compute_facets()
        self.faces = self._compute_face_lattice()

    # facet inequalities are stored in span coordinates: a . coords(x) >= b
    def _compute_facets(self):
        m = self.dim
        nv = len(self.vertices)
        if m == 0:
            return [], []
        if m == 1:
            # two endpoint facets
            order = sorted(range(nv), key=lambda i: self._coords[i][0])
            lo, hi = order[0], order[-1]
            return (
                [frozenset([lo]), frozenset([hi])],
                [(Vector([1]), self._coords[lo][0]),
                 (Vector([-1]), -self._coords[hi][0])],
            )
        found: dict[tuple, tuple[frozenset, Vector, Fraction]] = {}
        for subset in itertools.combinations(range(nv), m):
            base = self._coords[subset[0]]
            diffs = [self._coords[i] - base for i in subset[1:]]
            if _rank_of(diffs) != m - 1:
                continue
            ker = rational_kernel(Matrix([list(d) for d in diffs])) if diffs else []
            if len(ker) != 1:
                continue
            a = primitive(ker[0])
            b = a.dot(base)
            vals = [a.dot(c) for c in self._coords]
            if all(v >= b for v in vals):
                pass
            elif all(v <= b for v in vals):
                a, b = -a, -b
                vals = [-v for v in vals]
            else:
                continue
            on = frozenset(i for i, v in enumerate(vals) if v == b)
            found[(a.entries, b)] = (on, a, b)
        faces = []
        ineqs = []
        for key in sorted(found):
            on, a, b = found[key]
            faces.append(on)
            ineqs.append((a, b))
        return faces, ineqs

    def _compute_face_lattice(self) -> list[Face]:
        nv = len(self.vertices)
        full = frozenset(range(nv))
        sets = {full} | set(self._facet_faces)
        frontier = list(self._facet_faces)
        while True:
            new = set()
            for a in sets:
                for b in frontier:
                    c = a & b
                    if c and c not in sets:
                        new.add(c)
            if not new:
                break
            sets |= new
        faces = []
        for s in sets:
            pts = [self._coords[i] for i in s]
            d = _rank_of([p - pts[0] for p in pts[1:]]) if len(pts) > 1 else 0
            faces.append(Face(self, s, d))
        faces.sort(key=lambda f: (f.dim, sorted(f.indices)))
        return faces

    # -- queries ----------------------------------------------------------

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient

    def faces_of_dim(self, d: int) -> list[Face]:
        return [f for f in self.faces if f.dim == d]

    @property
    def whole_face(self) -> Face:
        return self.faces[-1]

    def face_for(self, indices: Iterable[int]) -> Face:
        key = frozenset(indices)
        for f in self.faces:
            if f.indices == key:
                return f
        raise KeyError(f"no face with vertex indices {sorted(key)}")

    def facet_normals(self) -> list[tuple[Vector, Fraction, frozenset[int]]]:
        """Ambient primitive inner normals (a, b, on) with <a, x> >= b on P.

        Only available for full-dimensional polytopes, where facet normals
        are unique up to positive scale.
        """
        if not self.is_full_dimensional:
            raise NotFullDimError("facet normals need a full-dimensional polytope")
        out = []
        span_rows = Matrix([list(s) for s in self._span])
        for on, (a, b) in zip(self._facet_faces, self._facet_ineqs):
            # find the ambient normal: <amb, s_i> = a_i reproduces the
            # span-coordinate inequality (span is a basis of Q^n here)
            amb = solve_linear(span_rows, a)
            assert amb is not None
            amb = primitive(Vector(amb))
            bb = amb.dot(self.vertices[min(on)])
            vals = [amb.dot(v) for v in self.vertices]
            assert min(vals) == bb
            assert frozenset(i for i, v in enumerate(vals) if v == bb) == on
            out.append((amb, bb, on))
        return out

    def contains_point(self, x: Vector) -> bool:
        if self.dim == 0:
            return x == self._base
        c = express_in_basis(self._span, x - self._base)
        if c is None:
            return False
        return all(a.dot(c) >= b for a, b in self._facet_ineqs)

    def lattice_points(self, cap: int = LATTICE_POINT_CAP) -> list[Vector]:
        los = [min(v[i] for v in self.vertices) for i in range(self.ambient)]
        his = [max(v[i] for v in self.vertices) for i in range(self.ambient)]
        count = 1
        for lo, hi in zip(los, his):
            count *= int(hi - lo) + 1
        if count > cap:
            raise TooLargeError(f"bounding box holds {count} points, cap {cap}")
        out = []
        for xs in itertools.product(*(range(int(lo), int(hi) + 1)
                                      for lo, hi in zip(los, his))):
            x = Vector(xs)
            if self.contains_point(x):
                out.append(x)
        return out

    def to_json(self) -> dict:
        return {"vertices": [v.to_json() for v in self.vertices], "name": self.name}

    @classmethod
    def from_json(cls, data: dict) -> "Polytope":
        from .linalg import parse_rational
        pts = [Vector([parse_rational(e) for e in v]) for v in data["vertices"]]
        return cls(pts, name=data.get("name"))

    def __repr__(self):
        return f"Polytope({self.name}: {len(self.vertices)} vertices, dim {self.dim})"


# -- derived cones ---------------------------------------------------------


def normal_cone(p: Polytope, f: Face) -> Cone:
    """Inner-normal cone of P along the face F (full-dimensional P only)."""
    if not p.is_full_dimensional:
        raise NotFullDimError("normal cones need a full-dimensional polytope")
    gens = [a for a, b, on in p.facet_normals() if f.indices <= on]
    return Cone(gens, ambient=p.ambient)


def tangent_cone(p: Polytope, f: Face) -> Cone:
    """Cone of directions into P from a relative-interior point of F.

    Not pointed when dim F > 0 (it contains the span of F), so the
    pointedness check is skipped; vertex tangent cones are pointed.
    """
    k = len(f.indices)
    f0 = Vector([Fraction(0)] * p.ambient)
    for i in f.indices:
        f0 = f0 + p.vertices[i]
    f0 = Vector(e / k for e in f0)
    gens = []
    for v in p.vertices:
        d = v - f0
        if not d.is_zero:
            gens.append(d)
    return Cone(gens, ambient=p.ambient, check_pointed=False)


def supporting_cone(p: Polytope, f: Face) -> tuple[Vector, Cone]:
    """(apex, edge-direction cone) at a vertex: P looks like apex + cone locally."""
    if f.dim != 0:
        raise ValueError("supporting cones are taken at vertices")
    (vi,) = f.indices
    apex = p.vertices[vi]
    dirs = []
    for e in p.faces_of_dim(1):
        if vi in e.indices:
            (other,) = [j for j in e.indices if j != vi]
            dirs.append(p.vertices[other] - apex)
    return apex, Cone(dirs, ambient=p.ambient)


# -- triangulation and volume ----------------------------------------------


def triangulate_face(f: Face) -> list[tuple[int, ...]]:
    """Pulling triangulation of a face into simplices (vertex index tuples).

    Pulls the lex-min vertex over the triangulations of the facets of the
    face that miss it. Simplices have f.dim + 1 vertices each.
    """
    p = f.polytope

    def rec(face: Face) -> list[tuple[int, ...]]:
        idx = sorted(face.indices)
        if len(idx) == face.dim + 1:
            return [tuple(idx)]
        star = min(idx, key=lambda i: p.vertices[i].entries)
        out = []
        for g in p.faces:
            if g.dim == face.dim - 1 and g.indices < face.indices and star not in g.indices:
                for cell in rec(g):
                    out.append(tuple(sorted(cell + (star,))))
        return out

    return rec(f)


def normalized_volume(f: Face) -> Fraction:
    """Lattice-normalized volume of a face within its affine span.

    The unit is the fundamental cell of the lattice induced on the span;
    a point has volume 1, a primitive segment volume 1.
    """
    if f.dim == 0:
        return Fraction(1)
    p = f.polytope
    verts = f.vertices
    sat = saturation_basis([v - verts[0] for v in verts[1:]])
    total = Fraction(0)
    fact = 1
    for i in range(1, f.dim + 1):
        fact *= i
    for simplex in triangulate_face(f):
        z = [p.vertices[i] for i in simplex]
        cols = []
        for zz in z[1:]:
            c = express_in_basis(sat, zz - z[0])
            assert c is not None and c.is_integral
            cols.append(list(c))
        total += abs(Matrix.from_columns(cols).det()) / fact
    return total
