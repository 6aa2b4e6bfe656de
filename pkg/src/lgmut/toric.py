"""Monotone lattice polytopes, mutation configurations and toric mutation.

A polytope is given by its primitive facet normals ``eta_j``; it is the set
``{x : <eta_j, x> <= 1}``.  Exponents of potentials live on the normal side,
points of the polytope on the other, and a unimodular ``A`` acting on points
acts on exponents by ``A^{-T}``.
"""

from __future__ import annotations

import itertools
import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .lattice import (
    UnimodularMap,
    annihilator_basis,
    complete_to_unimodular,
    determinant,
    dot,
    is_primitive,
    rank,
    same_lattice,
    solve_exact,
)
from .laurent import LaurentPoly, NonLaurent, localized_mutate

Vector = tuple[int, ...]


class InvalidPolytope(ValueError):
    def __init__(self, violations: list["Violation"]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


class InvalidConfiguration(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str
    witness: tuple = ()

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"

    def to_json(self) -> dict:
        return {"kind": self.kind, "detail": self.detail, "witness": _jsonable(self.witness)}


def _fmt(x) -> str:
    return "(" + ", ".join(str(a) for a in x) + ")"


def _jsonable(x):
    if isinstance(x, (tuple, list)):
        return [_jsonable(a) for a in x]
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, frozenset):
        return sorted(x)
    return x


@dataclass(frozen=True)
class MonotonePolytope:
    n: int
    normals: tuple[Vector, ...]
    vertices: tuple[Vector, ...] = field(compare=False)
    # facet indices active at each vertex, aligned with ``vertices``
    incidence: tuple[frozenset, ...] = field(compare=False, repr=False)

    def to_json(self) -> dict:
        return {"n": self.n, "normals": [list(v) for v in self.normals]}

    def slack(self, x: Sequence[int | Fraction]) -> list:
        """``1 - <eta_j, x>`` for every facet."""
        return [1 - dot(eta, x) for eta in self.normals]

    def contains(self, x: Sequence[int | Fraction]) -> bool:
        return all(s >= 0 for s in self.slack(x))

    def active(self, x: Sequence[int | Fraction]) -> frozenset:
        return frozenset(j for j, s in enumerate(self.slack(x)) if s == 0)


def _vertex_candidates(normals: list[Vector], n: int) -> dict[tuple, frozenset]:
    found: dict[tuple, frozenset] = {}
    for subset in itertools.combinations(range(len(normals)), n):
        x = solve_exact([normals[j] for j in subset], [1] * n)
        if x is None or x in found:
            continue
        slack = [1 - sum(a * b for a, b in zip(eta, x)) for eta in normals]
        if all(s >= 0 for s in slack):
            found[x] = frozenset(j for j, s in enumerate(slack) if s == 0)
    return found


def _bounded(normals: list[Vector], n: int) -> bool:
    # bounded iff 0 is interior to conv(normals): every nonzero linear
    # functional is positive on some normal.  Test via the facets of the cone
    # condition: no vector c with <c, eta_j> <= 0 for all j.  Such a c exists
    # iff one exists among the extreme rays of the dual cone, which are
    # kernels of (n-1)-subsets of normals.
    if rank(normals) < n:
        return False
    for subset in itertools.combinations(normals, n - 1):
        if rank(list(subset)) < n - 1:
            continue
        if n == 1:
            rays = [(1,), (-1,)]
        else:
            basis = annihilator_basis(subset, n)
            rays = [basis[0], tuple(-a for a in basis[0])]
        for c in rays:
            if all(dot(c, eta) <= 0 for eta in normals):
                return False
    return True


def validate(normals: Sequence[Sequence[int]], n: int | None = None) -> MonotonePolytope | list[Violation]:
    """Check that the normals cut out a monotone polytope.

    Returns the polytope, or every violated condition with a witness.
    """
    normals = [tuple(int(a) for a in eta) for eta in normals]
    if n is None:
        if not normals:
            raise ValueError("ambient dimension unknown for an empty normal list")
        n = len(normals[0])
    out: list[Violation] = []
    for j, eta in enumerate(normals):
        if len(eta) != n:
            raise ValueError(f"normal {eta} does not have {n} entries")
        if not is_primitive(eta):
            out.append(Violation("not_primitive", f"normal {j} = {eta} is not primitive", (j,)))
    if len(set(normals)) != len(normals):
        out.append(Violation("duplicate_normal", "a normal is listed twice"))
    if len(normals) < n + 1:
        out.append(Violation("too_few_normals", f"{len(normals)} normals cannot bound a polytope in dimension {n}"))
        return out
    if not _bounded(normals, n):
        out.append(Violation("unbounded", "the normals do not positively span, so the region is unbounded"))
        return out
    found = _vertex_candidates(normals, n)
    for x, act in sorted(found.items()):
        if any(a.denominator != 1 for a in x):
            out.append(Violation("non_integral_vertex", f"vertex {_fmt(x)} is not a lattice point", x))
        if len(act) > n:
            out.append(Violation("not_simple", f"vertex {_fmt(x)} lies on {len(act)} facets", x))
        elif len(act) == n:
            d = determinant([normals[j] for j in sorted(act)])
            if abs(d) != 1:
                out.append(Violation("not_smooth", f"normals at vertex {_fmt(x)} have determinant {d}", x))
    for j in range(len(normals)):
        on = [x for x, act in found.items() if j in act]
        if len(on) < n or _affine_rank(on) < n - 1:
            out.append(Violation("redundant_normal", f"normal {j} = {normals[j]} does not support a facet", (j,)))
    if out:
        return out
    verts = sorted(tuple(int(a) for a in x) for x in found)
    inc = tuple(found[tuple(Fraction(a) for a in x)] for x in verts)
    return MonotonePolytope(n, tuple(normals), tuple(verts), inc)


def _affine_rank(points) -> int:
    if not points:
        return -1
    base = points[0]
    diffs = [[Fraction(a) - Fraction(b) for a, b in zip(p, base)] for p in points[1:]]
    # rational rank via integer scaling
    rows = []
    for r in diffs:
        den = 1
        for a in r:
            den = lcm(den, a.denominator)
        rows.append([int(a * den) for a in r])
    return rank(rows) if rows else 0


def polytope(normals: Sequence[Sequence[int]], n: int | None = None) -> MonotonePolytope:
    """Like :func:`validate` but raising :class:`InvalidPolytope`."""
    result = validate(normals, n)
    if isinstance(result, list):
        raise InvalidPolytope(result)
    return result


# -- faces ----------------------------------------------------------------------


@dataclass(frozen=True)
class Face:
    active: frozenset
    dim: int
    vertices: tuple[Vector, ...] = field(compare=False)

    def to_json(self) -> dict:
        return {"facets": sorted(self.active), "dim": self.dim, "vertices": [list(v) for v in self.vertices]}


def _closure(p: MonotonePolytope, facets: frozenset) -> Face:
    idx = [i for i, act in enumerate(p.incidence) if facets <= act]
    active = frozenset.intersection(*(p.incidence[i] for i in idx))
    dim = p.n - (rank([p.normals[j] for j in sorted(active)]) if active else 0)
    return Face(active, dim, tuple(p.vertices[i] for i in idx))


def face(p: MonotonePolytope, facets: Sequence[int]) -> Face:
    """The face cut out by the given facet indices."""
    facets = frozenset(int(j) for j in facets)
    if any(not 0 <= j < len(p.normals) for j in facets):
        raise InvalidConfiguration(f"facet indices {sorted(facets)} out of range")
    if not any(facets <= act for act in p.incidence):
        raise InvalidConfiguration(f"facets {sorted(facets)} have empty intersection with the polytope")
    f = _closure(p, facets)
    if f.active != facets:
        raise InvalidConfiguration(f"facets {sorted(facets)} cut out the face with facets {sorted(f.active)}")
    return f


def all_faces(p: MonotonePolytope) -> list[Face]:
    seen: dict[frozenset, Face] = {}
    for act in p.incidence:
        for r in range(len(act) + 1):
            for sub in itertools.combinations(sorted(act), r):
                key = frozenset(sub)
                if key not in seen:
                    f = _closure(p, key)
                    seen[f.active] = f
                    seen[key] = f
    faces = {f.active: f for f in seen.values()}
    return sorted(faces.values(), key=lambda f: (f.dim, sorted(f.active)))


def faces(p: MonotonePolytope, d: int) -> list[Face]:
    if not 0 <= d <= p.n:
        raise ValueError(f"face dimension {d} outside 0..{p.n}")
    return [f for f in all_faces(p) if f.dim == d]


def lattice_points(p: MonotonePolytope, f: Face | None = None) -> list[Vector]:
    """Lattice points of ``p`` (or of one of its faces)."""
    verts = f.vertices if f is not None else p.vertices
    lo = [min(v[i] for v in verts) for i in range(p.n)]
    hi = [max(v[i] for v in verts) for i in range(p.n)]
    out = []
    for x in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if not p.contains(x):
            continue
        if f is None or f.active <= p.active(x):
            out.append(x)
    return out


def interior_lattice_points(p: MonotonePolytope, f: Face) -> list[Vector]:
    """Lattice points whose set of facets is exactly ``f.active``.

    A vertex counts as interior to itself.
    """
    return [x for x in lattice_points(p, f) if p.active(x) == f.active]


# -- mutation configurations -----------------------------------------------------


@dataclass(frozen=True)
class MutationConfiguration:
    face: Face
    point: Vector
    k: int
    interior: bool

    def to_json(self) -> dict:
        return {"face": self.face.to_json(), "point": list(self.point), "k": self.k, "interior": self.interior}


def configuration(p: MonotonePolytope, facets: Sequence[int] | Face, point: Sequence[int]) -> MutationConfiguration:
    """Pair a face with a lattice point on it.

    The point need not be interior to the face: ``interior`` records that,
    and non-interior pairs are what the non-mutability test feeds to
    :func:`toric_mutate`.
    """
    f = facets if isinstance(facets, Face) else face(p, facets)
    w = tuple(int(a) for a in point)
    if len(w) != p.n:
        raise InvalidConfiguration(f"point {w} does not have {p.n} coordinates")
    if not p.contains(w) or not f.active <= p.active(w):
        raise InvalidConfiguration(f"point {w} does not lie on the face with facets {sorted(f.active)}")
    if f.dim > p.n - 2:
        raise InvalidConfiguration(f"face of dimension {f.dim} is a facet or the whole polytope; need dim <= n - 2")
    return MutationConfiguration(f, w, p.n - f.dim, p.active(w) == f.active)


def mutation_configurations(p: MonotonePolytope) -> list[MutationConfiguration]:
    out = []
    for f in all_faces(p):
        if f.dim > p.n - 2:
            continue
        for w in interior_lattice_points(p, f):
            out.append(MutationConfiguration(f, w, p.n - f.dim, True))
    return out


def standard_form(p: MonotonePolytope, c: MutationConfiguration) -> UnimodularMap:
    """A unimodular ``A`` (acting on points) putting ``(F, w)`` in standard form.

    ``A @ w = (-1, ..., -1, 0, ..., 0)`` with ``k`` entries ``-1``, and the
    normals of the facets through the face, in increasing index order, become
    ``-e_1, ..., -e_k``.  The determinant may be -1.
    """
    active = sorted(c.face.active)
    if len(active) != c.k:
        raise InvalidConfiguration(f"face has {len(active)} facets but codimension {c.k}; polytope not simple here")
    rows = [tuple(-a for a in p.normals[j]) for j in active]
    a = [list(r) for r in complete_to_unimodular(rows, p.n).entries]
    w = c.point
    for i in range(c.k, p.n):
        t = dot(a[i], w)
        a[i] = [x + t * y for x, y in zip(a[i], a[0])]
    out = UnimodularMap(tuple(map(tuple, a)))
    target = tuple(-1 if i < c.k else 0 for i in range(p.n))
    assert out.apply(w) == target
    return out


def corner_basis(n: int, k: int) -> list[Vector]:
    """``u_i = -e_i + e_k`` for ``i = 1 .. k-1`` (standard coordinates)."""
    return [tuple(-1 if j == i else 1 if j == k - 1 else 0 for j in range(n)) for i in range(k - 1)]


def default_basis(p: MonotonePolytope, c: MutationConfiguration) -> list[Vector]:
    """The standard-form basis transported back to the polytope's coordinates."""
    a = standard_form(p, c)
    return [a.apply_transpose(u) for u in corner_basis(p.n, c.k)]


def plane_generators(c: MutationConfiguration) -> list[Vector]:
    """Vectors spanning the linear span of the face and the origin."""
    return [c.point] + [tuple(a - b for a, b in zip(v, c.point)) for v in c.face.vertices]


def check_basis(c: MutationConfiguration, basis: Sequence[Sequence[int]], n: int) -> list[Vector]:
    basis = [tuple(int(a) for a in u) for u in basis]
    if len(basis) != c.k - 1 or any(len(u) != n for u in basis):
        raise InvalidConfiguration(f"expected {c.k - 1} basis vectors of length {n}")
    gens = plane_generators(c)
    for u in basis:
        if any(dot(u, g) for g in gens):
            raise InvalidConfiguration(f"basis vector {u} does not annihilate the plane of the face")
    if not same_lattice(basis, annihilator_basis(gens, n)):
        raise InvalidConfiguration(f"vectors {basis} do not form an integral basis of the annihilator")
    return basis


def toric_potential(p: MonotonePolytope) -> LaurentPoly:
    """Sum of ``x^eta`` over the facet normals."""
    return LaurentPoly(p.n, {eta: 1 for eta in p.normals})


def wall_cross_factor(basis: Sequence[Sequence[int]], n: int) -> LaurentPoly:
    terms = {(0,) * n: 1}
    for u in basis:
        terms[tuple(u)] = terms.get(tuple(u), 0) + 1
    return LaurentPoly(n, terms)


def toric_mutate(p: MonotonePolytope, c: MutationConfiguration,
                 basis: Sequence[Sequence[int]] | None = None) -> LaurentPoly | NonLaurent:
    """Substitute ``x^v -> x^v (1 + sum x^{u_i})^{-<v, w>}`` in the toric potential."""
    if c.k < 2:
        raise InvalidConfiguration("facets (k = 1) are not mutation configurations")
    basis = default_basis(p, c) if basis is None else check_basis(c, basis, p.n)
    return localized_mutate(toric_potential(p), wall_cross_factor(basis, p.n), c.point)


def to_standard_coordinates(w: LaurentPoly, a: UnimodularMap) -> LaurentPoly:
    """Rewrite a potential after the point map ``a`` (exponents move by ``a^{-T}``)."""
    b = a.inverse().transpose()
    return LaurentPoly(w.n, {b.apply(u): cf for u, cf in w.terms.items()})


def cpn_mutated(n: int, k: int) -> LaurentPoly:
    """Closed form of the mutated projective-space potential in standard coordinates."""
    xs = LaurentPoly.variables(n)
    inv = [LaurentPoly.monomial(tuple(-int(i == j) for j in range(n))) for i in range(n)]
    total = LaurentPoly.constant(n, 0)
    for i in range(k - 1, n):
        total = total + inv[i]
    prod = LaurentPoly.monomial((1,) * n)
    s = LaurentPoly.constant(n, 0)
    for i in range(k):
        s = s + inv[i]
    return total + xs[k - 1] ** k * s ** k * prod


# -- constructors -------------------------------------------------------------------


def cpn(n: int) -> MonotonePolytope:
    """``{x_i >= -1, sum x_i <= 1}``."""
    normals = [tuple(-int(i == j) for j in range(n)) for i in range(n)] + [(1,) * n]
    return polytope(normals, n)


TORIC_POLYTOPES: dict[str, list[Vector]] = {
    "cp2": [(-1, 0), (0, -1), (1, 1)],
    "p1xp1": [(-1, 0), (0, -1), (1, 0), (0, 1)],
    "bl1": [(-1, 0), (0, -1), (1, 1), (0, 1)],
    "bl2": [(-1, 0), (0, -1), (1, 1), (0, 1), (1, 0)],
    "bl3": [(-1, 0), (0, -1), (1, 1), (0, 1), (1, 0), (-1, -1)],
}


def toric_polytope(name: str) -> MonotonePolytope:
    if name.startswith("cp") and name[2:].isdigit():
        return cpn(int(name[2:])) if name != "cp2" else polytope(TORIC_POLYTOPES["cp2"], 2)
    if name not in TORIC_POLYTOPES:
        raise KeyError(f"unknown toric polytope {name!r}; expected cpN or one of {', '.join(TORIC_POLYTOPES)}")
    return polytope(TORIC_POLYTOPES[name], 2)


def product_with_interval(p: MonotonePolytope) -> MonotonePolytope:
    normals = [eta + (0,) for eta in p.normals]
    normals += [(0,) * p.n + (1,), (0,) * p.n + (-1,)]
    return polytope(normals, p.n + 1)


def lift(c: MutationConfiguration, p: MonotonePolytope, q: MonotonePolytope) -> MutationConfiguration:
    """Carry a face and point of ``p`` to ``F x {1}`` in ``q = product_with_interval(p)``."""
    top = len(p.normals)
    return configuration(q, sorted(c.face.active) + [top], c.point + (1,))


def polytope_from_json(data: dict | str | bytes) -> MonotonePolytope:
    raw = json.loads(data) if isinstance(data, (str, bytes)) else data
    normals = raw["normals"]
    n = int(raw.get("n", len(normals[0]) if normals else 0))
    return polytope(normals, n)


# -- basis independence -----------------------------------------------------------------


def find_intertwiner(a: LaurentPoly, b: LaurentPoly, limit: int = 200000) -> UnimodularMap | None:
    """A unimodular ``m`` with ``monomial_substitute(a, m) == b``, if one exists.

    Exponents move by ``u -> m^T u``.  Backtracking over images of a basis of
    exponents drawn from the rarest coefficient classes first.
    """
    n = a.n
    if a.n != b.n or len(a) != len(b):
        return None
    if sorted(a.terms.values()) != sorted(b.terms.values()):
        return None
    by_coef_b: dict[int, list[Vector]] = defaultdict(list)
    for u, cf in b.terms.items():
        by_coef_b[cf].append(u)
    by_coef_a: dict[int, list[Vector]] = defaultdict(list)
    for u, cf in a.terms.items():
        by_coef_a[cf].append(u)
    order = sorted(a.terms, key=lambda u: (len(by_coef_a[a.terms[u]]), u))
    # pick n independent source exponents, rarest classes first
    chosen: list[Vector] = []
    for u in order:
        if rank(chosen + [u]) > len(chosen):
            chosen.append(u)
        if len(chosen) == n:
            break
    if len(chosen) < n:
        return _intertwine_degenerate(a, b)
    pools = [by_coef_b[a.terms[u]] for u in chosen]
    b_terms = b.terms
    tries = 0
    for images in itertools.product(*pools):
        if len(set(images)) < n:
            continue
        tries += 1
        if tries > limit:
            return None
        # solve M u_i = v_i row by row: rows of M satisfy U^T m_r = (v_i)_r
        m = []
        for r in range(n):
            sol = solve_exact(chosen, [v[r] for v in images])
            if sol is None or any(x.denominator != 1 for x in sol):
                break
            m.append(tuple(int(x) for x in sol))
        else:
            if abs(determinant(m)) != 1:
                continue
            if all(b_terms.get(tuple(dot(row, u) for row in m)) == cf for u, cf in a.terms.items()):
                # monomial_substitute uses the transpose convention
                return UnimodularMap(tuple(zip(*m)))
    return None


def _intertwine_degenerate(a: LaurentPoly, b: LaurentPoly) -> UnimodularMap | None:
    # support of lower rank: only the identity is tried
    return UnimodularMap.identity(a.n) if a == b else None
