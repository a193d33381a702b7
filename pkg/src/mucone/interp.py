"""Squarefree normal forms over a basic cone and the local coefficients mu.

A basic pointed cone with generators w_1..w_k and a complement map supply,
for each generator subset S and each position i in S, a pivot vector u
with <w_i,u> = 1 and <w_j,u> = 0 for the other j in S.  The relation

    D_i D_S = u * D_S - sum over j outside S of <w_j,u> D_j D_S

rewrites any repeated variable; supports only grow, so rewriting reaches
the unique squarefree normal form.  mu is the coefficient of the full
product D_1...D_k in the normal form of the Todd element, and is computed
a second, independent way from an explicit alternating sum over chains of
subsets.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .errors import (
    InconsistentExplicitFormulaError,
    InternalInconsistencyError,
    NotFullDimError,
    NotPointedError,
    VectorNotInSubspaceError,
)
from .geometry import Cone, Polytope, normal_cone, subdivide_to_basic, zero_cone
from .linalg import Vector, dual_basis, format_rational
from .series import (
    MultiSeries,
    RationalFunctionTerm,
    _sign_canonical,
    combine_over_common_denominator,
    compose_linear,
    divide_by_linear_form,
    todd_univariate,
)

DEFAULT_ORDER = 6


def _fit(series: MultiSeries, order: int) -> MultiSeries:
    if series.order == order:
        return series
    if series.order > order:
        return series.truncate(order)
    raise ValueError(f"coefficient known only to degree {series.order}, need {order}")


class RingElement:
    """Finite D-expansion with truncated power-series coefficients.

    `terms` maps a length-k exponent tuple to its coefficient series; the
    exponent total degree never exceeds `cap`, and coefficients are kept at
    total degree `order` in the ambient coordinates.  Exponents of degree
    above the cap are dropped at construction: by the weight argument in
    SquarefreeReducer they cannot reach any squarefree coefficient within
    the tracked degree.
    """

    __slots__ = ("k", "nvars", "order", "cap", "terms")

    def __init__(self, k: int, nvars: int, order: int, cap: int, terms=None):
        self.k = k
        self.nvars = nvars
        self.order = order
        self.cap = cap
        self.terms: dict[tuple[int, ...], MultiSeries] = {}
        if terms:
            for expo, coeff in terms.items():
                expo = tuple(int(e) for e in expo)
                if len(expo) != k or any(e < 0 for e in expo):
                    raise ValueError(f"bad exponent vector {expo}")
                if sum(expo) > cap:
                    continue
                c = _fit(coeff, order)
                if not c.is_zero:
                    self.terms[expo] = c

    @classmethod
    def zero(cls, k: int, nvars: int, order: int, cap: int) -> "RingElement":
        return cls(k, nvars, order, cap)

    @classmethod
    def one(cls, k: int, nvars: int, order: int, cap: int) -> "RingElement":
        return cls(k, nvars, order, cap,
                   {(0,) * k: MultiSeries.constant(1, nvars, order)})

    def coefficient(self, expo) -> MultiSeries:
        got = self.terms.get(tuple(expo))
        return got if got is not None else MultiSeries.zero(self.nvars, self.order)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def d_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def _like(self, terms) -> "RingElement":
        return RingElement(self.k, self.nvars, self.order, self.cap, terms)

    def _check(self, other: "RingElement"):
        if (self.k, self.nvars) != (other.k, other.nvars):
            raise ValueError("ring mismatch")

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            got = out.get(e)
            out[e] = _fit(c, self.order) if got is None else got + _fit(c, self.order)
        return self._like(out)

    def __neg__(self) -> "RingElement":
        return self._like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + (-other)

    def scale(self, c) -> "RingElement":
        return self._like({e: s.scale(c) for e, s in self.terms.items()})

    def __mul__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        out: dict[tuple[int, ...], MultiSeries] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if sum(e) > self.cap:
                    continue
                c = _fit(c1 * c2, self.order)
                got = out.get(e)
                out[e] = c if got is None else got + c
        return self._like(out)

    def __eq__(self, other):
        return (isinstance(other, RingElement)
                and (self.k, self.nvars) == (other.k, other.nvars)
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.k, self.nvars, frozenset(self.terms)))

    def __repr__(self):
        bits = []
        for e in sorted(self.terms, key=lambda e: (sum(e), e)):
            mono = "*".join(f"D{i+1}" + (f"^{x}" if x > 1 else "")
                            for i, x in enumerate(e) if x)
            bits.append(f"({self.terms[e]!r})" + (f"*{mono}" if mono else ""))
        return f"RingElement({' + '.join(bits) or '0'})"


class SquarefreeExpr:
    """Normal form: map from generator index subsets to coefficient series."""

    __slots__ = ("cone", "order", "coeffs")

    def __init__(self, cone: Cone, order: int, coeffs):
        self.cone = cone
        self.order = order
        self.coeffs: dict[frozenset[int], MultiSeries] = {}
        for s, c in coeffs.items():
            c = _fit(c, order)
            if not c.is_zero:
                self.coeffs[frozenset(s)] = c

    def coefficient(self, subset) -> MultiSeries:
        got = self.coeffs.get(frozenset(subset))
        return got if got is not None else MultiSeries.zero(self.cone.ambient, self.order)

    def support(self) -> set[frozenset[int]]:
        return set(self.coeffs)

    def as_ring_element(self) -> RingElement:
        k = len(self.cone.generators)
        terms = {tuple(1 if i in s else 0 for i in range(k)): c
                 for s, c in self.coeffs.items()}
        return RingElement(k, self.cone.ambient, self.order, k + self.order, terms)

    def __eq__(self, other):
        return (isinstance(other, SquarefreeExpr)
                and self.cone == other.cone
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.cone, frozenset(self.coeffs)))

    def __repr__(self):
        bits = [f"{sorted(s)}: {c!r}" for s, c in
                sorted(self.coeffs.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))]
        return f"SquarefreeExpr({'; '.join(bits) or '0'})"


def pivot_vector(cone: Cone, cmap, subset, i: int) -> Vector:
    """u with <w_i,u> = 1 and <w_j,u> = 0 for the other j in the subset."""
    idx = sorted(subset)
    rays = tuple(cone.generators[j] for j in idx)
    return cmap.solve_u(rays, idx.index(i))


class SquarefreeReducer:
    """Memoized rewriting of D-monomials into squarefree normal form.

    Each rewrite of D_i D_S trades one D-degree for at most one coefficient
    degree and never lowers either, so a monomial of D-degree m only
    reaches the subset S with coefficient degree m - |S|.  Monomials above
    D-degree k + order are therefore irrelevant to any tracked coefficient.
    """

    def __init__(self, cone: Cone, cmap, order: int = DEFAULT_ORDER,
                 pivot_order=None):
        if not cone.is_basic:
            raise ValueError("reduction is defined over basic cones")
        self.cone = cone
        self.cmap = cmap
        self.order = order
        self.rays = cone.generators
        self.k = len(self.rays)
        if pivot_order is None:
            pivot_order = range(self.k)
        pivot_order = tuple(int(i) for i in pivot_order)
        if sorted(pivot_order) != list(range(self.k)):
            raise ValueError("pivot_order must permute the generator positions")
        self.pivot_order = pivot_order
        self._memo: dict[tuple[int, ...], dict[frozenset[int], MultiSeries]] = {}

    def reduce_monomial(self, expo) -> dict[frozenset[int], MultiSeries]:
        expo = tuple(int(e) for e in expo)
        got = self._memo.get(expo)
        if got is not None:
            return got
        n = self.cone.ambient
        if all(e <= 1 for e in expo):
            out = {frozenset(i for i, e in enumerate(expo) if e):
                   MultiSeries.constant(1, n, self.order)}
            self._memo[expo] = out
            return out
        i = next(j for j in self.pivot_order if expo[j] >= 2)
        inner = list(expo)
        inner[i] -= 1
        out: dict[frozenset[int], MultiSeries] = {}

        def bump(s, c):
            c = _fit(c, self.order)
            got = out.get(s)
            out[s] = c if got is None else got + c

        for s, c in self.reduce_monomial(tuple(inner)).items():
            if i not in s:
                bump(s | {i}, c)
                continue
            u = pivot_vector(self.cone, self.cmap, s, i)
            bump(s, c * MultiSeries.from_linear(u, self.order))
            for j in range(self.k):
                if j in s:
                    continue
                w = self.rays[j].dot(u)
                if w:
                    bump(s | {j}, c.scale(-w))
        out = {s: c for s, c in out.items() if not c.is_zero}
        self._memo[expo] = out
        return out

    def reduce(self, elem: RingElement) -> SquarefreeExpr:
        acc: dict[frozenset[int], MultiSeries] = {}
        for expo in sorted(elem.terms):
            coeff = elem.terms[expo]
            for s, c in self.reduce_monomial(expo).items():
                add = _fit(coeff * c, self.order)
                got = acc.get(s)
                acc[s] = add if got is None else got + add
        return SquarefreeExpr(self.cone, self.order, acc)


def linear_relation(cone: Cone, cmap, subset, v: Vector,
                    order: int = DEFAULT_ORDER) -> RingElement:
    """The ideal generator D_S (l_v - v), for v in the complement of S."""
    k = len(cone.generators)
    n = cone.ambient
    idx = sorted({int(i) for i in subset})
    if idx and (idx[0] < 0 or idx[-1] >= k):
        raise ValueError(f"subset {idx} out of range for {k} generators")
    out = RingElement.zero(k, n, order, k + order)
    if v.is_zero:
        return out
    if not idx or not cmap.psi(tuple(cone.generators[i] for i in idx)).contains(v):
        raise VectorNotInSubspaceError(
            f"{v} is not in the complement subspace of subset {idx}")
    base = tuple(1 if i in idx else 0 for i in range(k))
    terms: dict[tuple[int, ...], MultiSeries] = {
        base: MultiSeries.from_linear(-v, order)
    }
    for j, w in enumerate(cone.generators):
        a = w.dot(v)
        if a:
            e = list(base)
            e[j] += 1
            terms[tuple(e)] = MultiSeries.constant(a, n, order)
    return RingElement(k, n, order, k + order, terms)


def ideal_generators(cone: Cone, cmap, order: int = DEFAULT_ORDER) -> list[RingElement]:
    """Generators of the rewriting ideal for this cone and map.

    Ray-table maps carry one relation per ray; the other families take the
    face-level relations D_S (l_v - v) with v over a basis of each
    complement subspace.
    """
    from .complement import RayTableMap

    k = len(cone.generators)
    gens = []
    if isinstance(cmap, RayTableMap):
        for i in range(k):
            v = cmap.solve_u((cone.generators[i],), 0)
            gens.append(linear_relation(cone, cmap, (i,), v, order))
        return gens
    for size in range(1, k + 1):
        for subset in combinations(range(k), size):
            sub = cmap.psi(tuple(cone.generators[i] for i in subset))
            for v in sub.basis:
                gens.append(linear_relation(cone, cmap, subset, v, order))
    return gens


def td_element(cone: Cone, order: int = DEFAULT_ORDER) -> RingElement:
    """Product of univariate Todd series, one per generator, D-degree <= k + order."""
    k = len(cone.generators)
    n = cone.ambient
    cap = k + order
    td = todd_univariate(cap)
    terms = {(0,) * k: MultiSeries.constant(1, n, order)}
    for i in range(k):
        nxt: dict[tuple[int, ...], MultiSeries] = {}
        for expo, c in terms.items():
            room = cap - sum(expo)
            for m in range(room + 1):
                if td[m] == 0:
                    continue
                e = list(expo)
                e[i] += m
                e = tuple(e)
                add = c.scale(td[m])
                got = nxt.get(e)
                nxt[e] = add if got is None else got + add
        terms = nxt
    return RingElement(k, n, order, cap, terms)


def reduce_to_squarefree(elem: RingElement, cone: Cone, cmap,
                         pivot_order=None) -> SquarefreeExpr:
    return SquarefreeReducer(cone, cmap, elem.order, pivot_order).reduce(elem)


class MuValue:
    """A computed local coefficient with its provenance."""

    __slots__ = ("cone", "map_key", "order", "series", "provenance")

    def __init__(self, cone: Cone, map_key, order: int, series: MultiSeries,
                 provenance: str):
        if provenance not in ("reduction", "explicit", "subdivision-sum"):
            raise ValueError(f"unknown provenance {provenance!r}")
        self.cone = cone
        self.map_key = map_key
        self.order = order
        self.series = _fit(series, order)
        self.provenance = provenance

    @property
    def mu0(self) -> Fraction:
        return self.series.coefficient((0,) * self.cone.ambient)

    def to_json(self) -> dict:
        return {
            "cone": self.cone.to_json(),
            "order": self.order,
            "series": self.series.to_json(),
            "mu0": format_rational(self.mu0),
            "provenance": self.provenance,
        }

    def __repr__(self):
        return (f"MuValue(mu0={self.mu0}, provenance={self.provenance}, "
                f"cone={self.cone!r})")


def mu_basic(cone: Cone, cmap, order: int = DEFAULT_ORDER,
             pivot_order=None) -> MuValue:
    """mu of a generic basic cone: full-subset coefficient of the Todd element."""
    expr = reduce_to_squarefree(td_element(cone, order), cone, cmap, pivot_order)
    series = expr.coefficient(range(len(cone.generators)))
    return MuValue(cone, cmap.key(), order, series, "reduction")


# -- explicit chain-sum route ------------------------------------------------


def _chains_between(lo: frozenset, hi: frozenset):
    """Strictly increasing subset chains from lo to hi, inclusive ends."""
    if lo == hi:
        yield (lo,)
        return
    rest = sorted(hi - lo)
    for r in range(1, len(rest) + 1):
        for extra in combinations(rest, r):
            for tail in _chains_between(lo | frozenset(extra), hi):
                yield (lo,) + tail


def _chain_terms(cone: Cone, cmap, S: frozenset, T: frozenset):
    """(sign, denominator forms) for each chain from T to S.

    The forms of one chain are the |T| pivots of T itself plus, per step,
    the pivots of the newly added positions inside the enlarged subset;
    every term carries exactly |S| linear forms.
    """
    out = []
    for chain in _chains_between(T, S):
        r = len(chain) - 1
        forms = [pivot_vector(cone, cmap, T, t) for t in sorted(T)]
        for lvl in range(1, r + 1):
            cur = chain[lvl]
            for c in sorted(cur - chain[lvl - 1]):
                forms.append(pivot_vector(cone, cmap, cur, c))
        out.append((Fraction((-1) ** r), forms))
    return out


def _union_size(form_lists) -> int:
    union: dict[Vector, int] = {}
    for forms in form_lists:
        counts: dict[Vector, int] = {}
        for f in forms:
            p, _ = _sign_canonical(f)
            counts[p] = counts.get(p, 0) + 1
        for p, c in counts.items():
            union[p] = max(union.get(p, 0), c)
    return sum(union.values())


def chain_sum(cone: Cone, cmap, S, T, order: int = DEFAULT_ORDER) -> RationalFunctionTerm:
    """The alternating chain sum for the subset pair T <= S, as one fraction."""
    S = frozenset(int(i) for i in S)
    T = frozenset(int(i) for i in T)
    k = len(cone.generators)
    if not (T <= S <= frozenset(range(k))):
        raise ValueError("need T <= S <= generator positions")
    raw = _chain_terms(cone, cmap, S, T)
    bound = order + _union_size(forms for _, forms in raw)
    terms = [RationalFunctionTerm(MultiSeries.constant(sign, cone.ambient, bound), forms)
             for sign, forms in raw]
    num, den = combine_over_common_denominator(terms, order)
    return RationalFunctionTerm(num, den)


def mu_explicit(cone: Cone, cmap, order: int = DEFAULT_ORDER) -> MuValue:
    """mu assembled from the closed chain-sum formula: sum over subsets T of
    td(pivots of T) times the alternating chain sum from T to the full set.

    All fractions go over one common denominator; the combined numerator
    must divide out exactly, or the run aborts as an internal inconsistency.
    """
    k = len(cone.generators)
    n = cone.ambient
    full = frozenset(range(k))
    raw: list[tuple[frozenset, Fraction, list[Vector]]] = []
    for size in range(k + 1):
        for T in combinations(range(k), size):
            T = frozenset(T)
            for sign, forms in _chain_terms(cone, cmap, full, T):
                raw.append((T, sign, forms))
    target = order + _union_size(forms for _, _, forms in raw)
    tdc = todd_univariate(target)
    numerators: dict[frozenset, MultiSeries] = {}
    for T, _, _ in raw:
        if T not in numerators:
            prod = MultiSeries.constant(1, n, target)
            for i in sorted(T):
                prod = prod * compose_linear(tdc, pivot_vector(cone, cmap, T, i), target)
            numerators[T] = prod
    terms = [RationalFunctionTerm(numerators[T].scale(sign), forms)
             for T, sign, forms in raw]
    num, den = combine_over_common_denominator(terms, order)
    series = num
    try:
        for f in den:
            series = divide_by_linear_form(series, f)
    except ValueError as exc:
        raise InconsistentExplicitFormulaError(
            f"chain-sum numerator not divisible by its denominator: "
            f"cone={cone!r} map={cmap.describe()}") from exc
    return MuValue(cone, cmap.key(), order, _fit(series, order), "explicit")


# -- the full mu, any pointed generic cone ------------------------------------


_MU_CACHE: dict[tuple, MuValue] = {}


def clear_mu_cache():
    _MU_CACHE.clear()


def mu(cone: Cone, cmap, order: int = DEFAULT_ORDER,
       cross_validate: bool = False) -> MuValue:
    """mu of a pointed generic cone: by reduction when basic, else summed
    over a basic subdivision.  cross_validate reruns basic cones through
    the explicit formula and aborts on any mismatch.
    """
    if cone.is_zero:
        return MuValue(cone, cmap.key(), order,
                       MultiSeries.constant(1, cone.ambient, order), "reduction")
    if not cone.is_pointed:
        raise NotPointedError("mu needs a pointed cone")
    key = (cone.canonical_key(), cmap.key(), order, bool(cross_validate))
    got = _MU_CACHE.get(key)
    if got is not None:
        return got
    if cone.is_basic:
        val = mu_basic(cone, cmap, order)
        if cross_validate:
            other = mu_explicit(cone, cmap, order)
            if val.series != other.series:
                raise InternalInconsistencyError(
                    "reduction and explicit formula disagree: "
                    f"cone={cone!r} map={cmap.describe()} "
                    f"reduction={val.series!r} explicit={other.series!r}")
    else:
        total = MultiSeries.zero(cone.ambient, order)
        for child in subdivide_to_basic(cone).children:
            total = total + mu(child, cmap, order, cross_validate).series
        val = MuValue(cone, cmap.key(), order, total, "subdivision-sum")
    _MU_CACHE[key] = val
    return val


class MuTable:
    """mu of the normal cone of every face of a polytope."""

    __slots__ = ("polytope", "map_key", "order", "entries")

    def __init__(self, polytope: Polytope, map_key, order: int, entries):
        self.polytope = polytope
        self.map_key = map_key
        self.order = order
        self.entries = tuple(entries)  # (Face, MuValue), face-lattice order

    def value_for(self, face) -> MuValue:
        for f, v in self.entries:
            if f.indices == face.indices:
                return v
        raise KeyError(f"face {sorted(face.indices)} not in table")

    def to_json(self) -> list:
        out = []
        for f, v in self.entries:
            out.append({
                "face_vertex_indices": sorted(f.indices),
                "normal_cone_generators": [list(map(format_rational, g))
                                           for g in v.cone.generators],
                "mu_series": v.series.to_json(),
                "mu0": format_rational(v.mu0),
                "provenance": v.provenance,
            })
        return out

    def __repr__(self):
        cells = ", ".join(f"{sorted(f.indices)}: {v.mu0}" for f, v in self.entries)
        return f"MuTable({cells})"


def mu_table(polytope: Polytope, cmap, order: int = DEFAULT_ORDER,
             cross_validate: bool = False) -> MuTable:
    """mu over the whole face lattice; faces ordered by (dim, vertex set)."""
    entries = []
    for f in polytope.faces:
        if f.indices == polytope.whole_face.indices:
            cone = zero_cone(polytope.ambient)
        else:
            cone = normal_cone(polytope, f)
        entries.append((f, mu(cone, cmap, order, cross_validate)))
    return MuTable(polytope, cmap.key(), order, entries)


def evaluation_map(elem: RingElement, cone: Cone):
    """Substitute each D variable by its dual-basis linear form.

    Returns (numerator, dual forms): the element represents
    numerator / product(dual forms).  Needs a full-dimensional basic cone,
    where the duals exist.  Used as an independent oracle on the reduction.
    """
    k = len(cone.generators)
    if cone.ambient != k or not cone.is_basic:
        raise NotFullDimError("evaluation needs a full-dimensional basic cone")
    duals = dual_basis(cone.generators)
    target = elem.order + elem.cap
    forms = [MultiSeries.from_linear(v, target) for v in duals]
    num = MultiSeries.zero(cone.ambient, elem.order)
    for expo, coeff in elem.terms.items():
        term = MultiSeries.constant(1, cone.ambient, target)
        for i, e in enumerate(expo):
            for _ in range(e):
                term = term * forms[i]
        num = num + _fit(coeff * term, elem.order)
    return num, tuple(duals)
