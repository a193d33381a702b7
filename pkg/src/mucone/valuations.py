"""Exponential sums and integrals along a ray, counting, and verification.

Everything here is a univariate Laurent/Taylor series in t after pairing
the ambient coordinates with a fixed rational direction y0.  The discrete
sum over lattice points is always produced by direct enumeration; the
vertex-cone decomposition check re-derives it by a second, independent
route so the two can disagree loudly if either is wrong.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import (
    DirectionDegenerateError,
    NonIntegerResultError,
)
from .geometry import (
    Cone,
    Face,
    Polytope,
    normal_cone,
    normalized_volume,
    subdivide_to_basic,
    supporting_cone,
    triangulate_face,
)
from .interp import DEFAULT_ORDER, MuTable, mu_table
from .linalg import (
    Matrix,
    Vector,
    express_in_basis,
    format_rational,
    saturation_basis,
)
from .series import LaurentSeries, restrict_to_direction

DEFAULT_SEED = 1729

_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)


class Direction:
    """A rational direction with its checked nonzero pairings."""

    __slots__ = ("y0", "certificate")

    def __init__(self, y0: Vector, certificate=()):
        self.y0 = y0
        self.certificate = tuple(certificate)

    def to_json(self) -> dict:
        return {
            "y0": self.y0.to_json(),
            "checked_pairings": [
                {"vector": v.to_json(), "value": format_rational(a)}
                for v, a in self.certificate
            ],
        }

    def __repr__(self):
        return f"Direction({self.y0!r}, {len(self.certificate)} checked)"


def _as_vector(y0) -> Vector:
    return y0.y0 if isinstance(y0, Direction) else y0


def certify_direction(y0: Vector, avoid) -> Direction:
    """Check <y0, v> != 0 for every v in avoid; raise naming the offender."""
    cert = []
    for v in avoid:
        a = y0.dot(v)
        if a == 0:
            raise DirectionDegenerateError(f"direction {y0} annihilates {v}")
        cert.append((v, a))
    return Direction(y0, cert)


def sample_direction(ambient: int, avoid, seed: int = DEFAULT_SEED,
                     retries: int = 32) -> tuple[Direction, list[dict]]:
    """Draw a generic direction: fixed prime magnitudes, seeded signs.

    Returns (direction, attempt log).  Every attempt is logged with the
    vector tried and the constraint it violated, so reports can replay the
    search; runs out after `retries` draws.
    """
    avoid = [v for v in avoid if not v.is_zero]
    rng = random.Random(seed)
    log: list[dict] = []
    for attempt in range(retries):
        mags = [_PRIMES[(attempt + i) % len(_PRIMES)] for i in range(ambient)]
        y0 = Vector([m * rng.choice((1, -1)) for m in mags])
        try:
            direction = certify_direction(y0, avoid)
        except DirectionDegenerateError as exc:
            log.append({"attempt": attempt, "y0": y0.to_json(),
                        "rejected": str(exc)})
            continue
        log.append({"attempt": attempt, "y0": y0.to_json(), "rejected": None})
        return direction, log
    raise DirectionDegenerateError(
        f"no generic direction found in {retries} attempts (seed {seed})")


# -- the two sides of the identity -------------------------------------------


def s_series(p: Polytope, y0, q: int) -> LaurentSeries:
    """Taylor series in t of the lattice-point exponential sum along t*y0."""
    y = _as_vector(y0)
    coeffs = [Fraction(0)] * (q + 1)
    for x in p.lattice_points():
        c = -y.dot(x)
        term = Fraction(1)
        coeffs[0] += 1
        for r in range(1, q + 1):
            term = term * c / r
            coeffs[r] += term
    return LaurentSeries.from_taylor(coeffs, q)


def _homogeneous_sums(values, q: int) -> list[Fraction]:
    """Complete homogeneous symmetric sums h_0..h_q of the given values."""
    h = [Fraction(0)] * (q + 1)
    h[0] = Fraction(1)
    for c in values:
        for r in range(1, q + 1):
            h[r] += c * h[r - 1]
    return h


def i_face_series(f: Face, y0, q: int) -> LaurentSeries:
    """Taylor series of the exponential integral over a face.

    The measure is normalized to the lattice induced on the face's affine
    span.  Each simplex of a lattice triangulation contributes
    (-1)^r |det| h_r(c_0..c_m) / (m+r)!  at t^r, where the c_j pair y0
    with the simplex vertices and |det| is taken in a basis of the induced
    lattice.
    """
    y = _as_vector(y0)
    p = f.polytope
    m = f.dim
    if m == 0:
        (vi,) = f.indices
        return LaurentSeries.exp_taylor(-y.dot(p.vertices[vi]), q)
    verts = f.vertices
    sat = saturation_basis([v - verts[0] for v in verts[1:]])
    coeffs = [Fraction(0)] * (q + 1)
    for simplex in triangulate_face(f):
        z = [p.vertices[i] for i in simplex]
        cols = []
        for zz in z[1:]:
            c = express_in_basis(sat, zz - z[0])
            assert c is not None and c.is_integral
            cols.append(list(c))
        det = abs(Matrix.from_columns(cols).det())
        if det == 0:
            continue
        h = _homogeneous_sums([y.dot(v) for v in z], q)
        denom = 1
        for i in range(1, m + 1):
            denom *= i
        for r in range(q + 1):
            coeffs[r] += Fraction((-1) ** r) * det * h[r] / denom
            denom *= m + r + 1
    return LaurentSeries.from_taylor(coeffs, q)


# -- counting -----------------------------------------------------------------


def count_breakdown(p: Polytope, cmap, order: int = 0):
    """(total, rows): per-face (face, mu0, normalized volume) and their sum."""
    table = mu_table(p, cmap, order)
    total = Fraction(0)
    rows = []
    for f, v in table.entries:
        vol = normalized_volume(f)
        rows.append((f, v.mu0, vol))
        total += v.mu0 * vol
    return total, rows


def count_via_local_formula(p: Polytope, cmap, order: int = 0) -> int:
    """Lattice-point count as sum over faces of mu0 times normalized volume."""
    total, _ = count_breakdown(p, cmap, order)
    if total.denominator != 1:
        raise NonIntegerResultError(
            f"local count {total} of {p.name} is not an integer")
    return int(total)


# -- identity verification ----------------------------------------------------


class IdentityReport:
    """Outcome of one interpolator-identity check."""

    __slots__ = ("polytope", "map_description", "direction", "seed", "order",
                 "q", "achieved", "left", "right", "residual", "passed",
                 "attempts")

    def __init__(self, polytope, map_description, direction, seed, order, q,
                 left, right, attempts):
        self.polytope = polytope
        self.map_description = map_description
        self.direction = direction
        self.seed = seed
        self.order = order
        self.q = q
        self.left = left
        self.right = right
        self.residual = left - right
        self.achieved = min(q, self.residual.known_to)
        self.passed = (self.achieved >= q
                       and all(self.residual.coefficient(r) == 0
                               for r in range(q + 1)))
        self.attempts = attempts

    def to_json(self) -> dict:
        return {
            "polytope": self.polytope.name,
            "map": self.map_description,
            "direction": self.direction.to_json(),
            "seed": self.seed,
            "order": self.order,
            "q": self.q,
            "achieved_order": self.achieved,
            "left": self.left.to_json(),
            "right": self.right.to_json(),
            "residual": self.residual.to_json(),
            "passed": self.passed,
            "direction_attempts": self.attempts,
        }

    def __repr__(self):
        word = "pass" if self.passed else "FAIL"
        return (f"IdentityReport({word}: {self.polytope.name}, "
                f"{self.map_description}, q={self.q})")


def _corner_data_vectors(p: Polytope) -> list[Vector]:
    """Vectors a verification direction must not annihilate: edge directions
    plus every generator in every normal-cone subdivision."""
    avoid: list[Vector] = []
    for e in p.faces_of_dim(1):
        a, b = e.vertices
        avoid.append(b - a)
    for f in p.faces:
        if f.indices == p.whole_face.indices:
            continue
        nc = normal_cone(p, f)
        avoid.extend(nc.generators)
        if not nc.is_basic:
            for child in subdivide_to_basic(nc).children:
                avoid.extend(child.generators)
    seen = set()
    out = []
    for v in avoid:
        if v.entries not in seen:
            seen.add(v.entries)
            out.append(v)
    return out


def verify_interpolator(p: Polytope, cmap, y0=None, order: int = DEFAULT_ORDER,
                        seed: int = DEFAULT_SEED, table: MuTable | None = None,
                        cross_validate: bool = False) -> IdentityReport:
    """Check the sum = weighted-integrals identity through order q = order - dim.

    The left side is the enumerated exponential sum; the right side pairs
    each face's integral series with mu of its normal cone restricted to
    the chosen direction.  A precomputed (possibly corrupted) MuTable can
    be injected for negative controls.
    """
    q = order - p.dim
    if q < 0:
        raise ValueError(f"order {order} below polytope dimension {p.dim}")
    attempts: list[dict] = []
    if y0 is None:
        direction, attempts = sample_direction(p.ambient,
                                               _corner_data_vectors(p), seed)
    elif isinstance(y0, Direction):
        direction = y0
    else:
        direction = certify_direction(y0, _corner_data_vectors(p))
    if table is None:
        table = mu_table(p, cmap, order, cross_validate)
    left = s_series(p, direction, q)
    right = LaurentSeries.zero(q)
    for f, v in table.entries:
        mu_line = restrict_to_direction(v.series, direction.y0)
        right = right + mu_line * i_face_series(f, direction, q)
    return IdentityReport(p, cmap.describe(), direction, seed, order, q,
                          left, right, attempts)


# -- independent decomposition check ------------------------------------------


def _half_open_cone_series(apex: Vector, cell: Cone, open_facets, y0: Vector,
                           q: int) -> LaurentSeries:
    pad = q + 2 * len(cell.generators) + 2
    total = LaurentSeries.exp_taylor(-y0.dot(apex), pad)
    for i, b in enumerate(cell.generators):
        c = y0.dot(b)
        if c == 0:
            raise DirectionDegenerateError(f"direction annihilates ray {b}")
        # 1 - e^{-tc} = sum_{r>=1} -(-c)^r/r! t^r
        coeffs = [Fraction(0)]
        term = Fraction(1)
        for r in range(1, pad + 1):
            term = term * (-c) / r
            coeffs.append(-term)
        geom = LaurentSeries.from_taylor(coeffs, pad).inverse()
        if i in open_facets:
            geom = geom * LaurentSeries.exp_taylor(-c, pad)
        total = total * geom
    return total


def _interior_probe(parent: Cone, cells, seed: int) -> tuple[Vector, list]:
    """A point interior to the parent and off every cell's facet hyperplanes.

    Returns the point together with each cell's dual rows, which the
    half-open selection reuses.
    """
    duals = []
    for cell in cells:
        inv = Matrix([list(g) for g in cell.generators]).transpose().inverse()
        duals.append([Vector(row) for row in inv.rows])
    rng = random.Random(seed)
    rays = parent.extreme_rays()
    for _ in range(64):
        weights = [Fraction(rng.randint(1, 97)) for _ in rays]
        probe = Vector([Fraction(0)] * parent.ambient)
        for w, r in zip(weights, rays):
            probe = probe + Vector([w * e for e in r])
        if all(h.dot(probe) != 0 for rows in duals for h in rows):
            return probe, duals
    raise DirectionDegenerateError("no interior probe avoided all facet planes")


def brion_vertex_decomposition_check(p: Polytope, y0=None, q: int = 6,
                                     seed: int = DEFAULT_SEED) -> bool:
    """Re-derive the exponential sum from shifted vertex cones and compare.

    Each vertex cone is subdivided into basic cells, the cells are made
    half-open against a common interior probe so their lattice points
    partition the cone, and each half-open basic cell contributes a
    closed-form product of geometric series.
    """
    avoid = list(_corner_data_vectors(p))
    if y0 is None:
        direction, _ = sample_direction(p.ambient, avoid, seed)
    elif isinstance(y0, Direction):
        direction = y0
    else:
        direction = certify_direction(y0, avoid)
    y = direction.y0
    if p.dim == 0:
        total = LaurentSeries.exp_taylor(-y.dot(p.vertices[0]), q)
        return total.agrees_with(s_series(p, direction, q), through=q)
    total = None
    for vert in p.faces_of_dim(0):
        apex, scone = supporting_cone(p, vert)
        cells = list(subdivide_to_basic(scone).children)
        probe, duals = _interior_probe(scone, cells, seed)
        for cell, rows in zip(cells, duals):
            open_facets = {i for i, h in enumerate(rows) if h.dot(probe) < 0}
            piece = _half_open_cone_series(apex, cell, open_facets, y, q)
            total = piece if total is None else total + piece
    return total.agrees_with(s_series(p, direction, q), through=q)
