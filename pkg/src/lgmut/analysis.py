"""Newton polytopes, lattice normal forms, polar duals and critical-point checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Sequence

from .lattice import _xgcd, annihilator_basis, dot, rank, solve_exact
from .laurent import LaurentPoly, evaluate, log_derivative, try_div_exact, vanishing_order

Point = tuple[int, ...]


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull_2d(points: Sequence[Sequence[int]]) -> list[Point]:
    """Vertices in counterclockwise order, starting at the lexicographically least.

    Collinear boundary points are dropped.  A segment comes back as its two
    endpoints and a single point as itself.
    """
    pts = sorted(set(tuple(p) for p in points))
    if len(pts) <= 2:
        return pts
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


def _affine_rank(points: Sequence[Sequence]) -> int:
    if not points:
        return -1
    p0 = points[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    return _rank_rational(diffs) if diffs else 0


def _rank_rational(rows) -> int:
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return 0
    r = 0
    ncols = len(a[0])
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return r


def _hull_vertices_nd(points: list[tuple]) -> list[tuple]:
    """Vertices of a point set of any dimension (exact, facet enumeration)."""
    n = len(points[0])
    d = _affine_rank(points)
    if d <= 0:
        return points[:1]
    if d < n:
        # project along coordinates that stay affinely injective
        base = points[0]
        diffs = [[a - b for a, b in zip(p, base)] for p in points[1:]]
        coords: list[int] = []
        for c in range(n):
            trial = coords + [c]
            if _rank_rational([[r[i] for i in trial] for r in diffs]) == len(trial):
                coords = trial
            if len(coords) == d:
                break
        proj = [tuple(p[i] for i in coords) for p in points]
        keep = set(_hull_vertices_nd(proj))
        return [p for p, q in zip(points, proj) if q in keep]
    if n == 2:
        return convex_hull_2d(points)
    facets = []
    for subset in combinations(range(len(points)), n):
        sub = [points[i] for i in subset]
        if _affine_rank(sub) < n - 1:
            continue
        normal = _hyperplane_normal(sub)
        if normal is None:
            continue
        off = dot(normal, sub[0])
        vals = [dot(normal, p) - off for p in points]
        if all(v <= 0 for v in vals):
            facets.append((normal, off))
        elif all(v >= 0 for v in vals):
            facets.append((tuple(-a for a in normal), -off))
    verts = []
    for p in points:
        tight = [f for f, off in facets if dot(f, p) == off]
        if tight and rank(tight) == n:
            verts.append(p)
    return verts


def _hyperplane_normal(pts) -> tuple | None:
    """Integer normal of the hyperplane through ``n`` affinely independent points."""
    n = len(pts[0])
    rows = [[Fraction(a - b) for a, b in zip(p, pts[0])] for p in pts[1:]]
    # kernel of an (n-1) x n matrix of rank n-1
    denom = 1
    for r in rows:
        for x in r:
            denom = denom * x.denominator // gcd(denom, x.denominator)
    ker = annihilator_basis([[int(x * denom) for x in r] for r in rows], n)
    if len(ker) != 1:
        return None
    return ker[0]


@dataclass(frozen=True)
class NewtonPolytope:
    """Convex hull of an exponent support; 2D vertices are counterclockwise."""

    n: int
    vertices: tuple[Point, ...]

    @property
    def dim(self) -> int:
        return _affine_rank(list(self.vertices))

    def to_json(self) -> dict:
        return {"n": self.n, "dim": self.dim, "vertices": [list(v) for v in self.vertices]}


def newton(w: LaurentPoly) -> NewtonPolytope:
    if w.is_zero():
        raise ValueError("the zero polynomial has no Newton polytope")
    pts = sorted(w.support())
    if w.n == 1:
        verts = sorted({min(pts), max(pts)})
    elif w.n == 2:
        verts = convex_hull_2d(pts)
    else:
        verts = sorted(_hull_vertices_nd(pts))
    return NewtonPolytope(w.n, tuple(verts))


def minkowski_sum(a: NewtonPolytope, b: NewtonPolytope) -> NewtonPolytope:
    pts = [tuple(x + y for x, y in zip(p, q)) for p in a.vertices for q in b.vertices]
    if a.n == 2:
        return NewtonPolytope(2, tuple(convex_hull_2d(pts)))
    return NewtonPolytope(a.n, tuple(sorted(_hull_vertices_nd(sorted(set(pts))))))


# -- 2D affine-unimodular normal form -----------------------------------------


@dataclass(frozen=True)
class PolytopeNormalForm:
    """Normal form of a lattice polygon under GL(2,Z) and integer translations.

    ``matrix`` and ``translation`` send the input vertices onto ``vertices``:
    ``v -> matrix @ v + translation``.
    """

    vertices: tuple[Point, ...]
    matrix: tuple[tuple[int, int], tuple[int, int]] = field(compare=False)
    translation: Point = field(compare=False)

    def signature(self) -> str:
        return ";".join(f"{a},{b}" for a, b in self.vertices)


def _frame_to_x_axis(e: Sequence[int]) -> tuple[tuple[int, int], tuple[int, int]]:
    """A det=+1 integer matrix sending the primitive vector ``e`` to ``(1, 0)``."""
    p, q = e
    g, s, t = _xgcd(p, q)
    assert g == 1
    # [[p, -t], [q, s]] has det p*s + q*t = 1; its inverse sends e to (1, 0)
    return ((s, t), (-q, p))


def _apply(m, v) -> Point:
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def _mat_mul(a, b):
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def normal_form_2d(p: NewtonPolytope) -> PolytopeNormalForm:
    if p.n != 2:
        raise ValueError("normal_form_2d needs a polygon in the plane")
    verts = list(p.vertices)
    ident = ((1, 0), (0, 1))
    if len(verts) == 1:
        v = verts[0]
        return PolytopeNormalForm(((0, 0),), ident, (-v[0], -v[1]))
    if len(verts) == 2:
        a, b = verts
        d = (b[0] - a[0], b[1] - a[1])
        length = gcd(*d)
        m = _frame_to_x_axis((d[0] // length, d[1] // length))
        t = _apply(m, a)
        return PolytopeNormalForm(((0, 0), (length, 0)), m, (-t[0], -t[1]))
    best = None
    k = len(verts)
    for i in range(k):
        for step in (1, -1):
            v0 = verts[i]
            v1 = verts[(i + step) % k]
            d = (v1[0] - v0[0], v1[1] - v0[1])
            g = gcd(*d)
            m = _frame_to_x_axis((d[0] // g, d[1] // g))
            rel = [_apply(m, (v[0] - v0[0], v[1] - v0[1])) for v in verts]
            if any(y < 0 for _, y in rel):
                m = _mat_mul(((1, 0), (0, -1)), m)
                rel = [(x, -y) for x, y in rel]
            nxt = rel[(i + 2 * step) % k]
            shear = -(nxt[0] // nxt[1])
            m = _mat_mul(((1, shear), (0, 1)), m)
            image = tuple(sorted((x + shear * y, y) for x, y in rel))
            if best is None or image < best[0]:
                t = _apply(m, v0)
                best = (image, m, (-t[0], -t[1]))
    return PolytopeNormalForm(*best)


def is_minimal(p: NewtonPolytope) -> bool:
    """True unless some dilation by ``0 < lambda < 1`` is a translated lattice polygon."""
    if p.dim < 1:
        raise ValueError("minimality needs a polytope of positive dimension")
    v0 = p.vertices[0]
    g = 0
    for v in p.vertices[1:]:
        for a, b in zip(v, v0):
            g = gcd(g, a - b)
    return g == 1


def lattice_area2(p: NewtonPolytope) -> int:
    """Twice the Euclidean area of a polygon (the normalized lattice area)."""
    vs = p.vertices
    if len(vs) < 3:
        return 0
    return abs(sum(vs[i][0] * vs[(i + 1) % len(vs)][1] - vs[(i + 1) % len(vs)][0] * vs[i][1] for i in range(len(vs))))


# -- polar duality ---------------------------------------------------------------


def polar_dual(points: Sequence[Sequence[int | Fraction]]) -> list[tuple[Fraction, ...]]:
    """Vertices of ``{y : <y, x> <= 1 for all x in points}``, exact and sorted.

    The origin must lie strictly inside the convex hull of ``points``.
    """
    pts = sorted({tuple(Fraction(a) for a in p) for p in points})
    if not pts:
        raise ValueError("empty point set")
    n = len(pts[0])
    if _affine_rank(pts) < n or not _origin_interior(pts):
        raise ValueError("the origin is not an interior point")
    verts = set()
    for subset in combinations(pts, n):
        y = solve_exact(subset, [1] * n)
        if y is None:
            continue
        if all(sum(a * b for a, b in zip(y, x)) <= 1 for x in pts):
            verts.add(y)
    return sorted(verts)


def _origin_interior(pts) -> bool:
    # origin is interior iff the polar is bounded, i.e. no nonzero direction r
    # with <r, x> <= 0 for all x; extreme rays are cut out by n-1 equalities
    n = len(pts[0])
    for subset in combinations(pts, n - 1):
        rows = [[Fraction(a) for a in p] for p in subset]
        denom = 1
        for r in rows:
            for x in r:
                denom = denom * x.denominator // gcd(denom, x.denominator)
        ker = annihilator_basis([[int(x * denom) for x in r] for r in rows], n) if n > 1 else [(1,)]
        if len(ker) != 1:
            continue
        r = ker[0]
        for sgn in (1, -1):
            if all(sgn * sum(a * b for a, b in zip(r, x)) <= 0 for x in pts):
                return False
    if n == 1:
        return min(p[0] for p in pts) < 0 < max(p[0] for p in pts)
    return True


def dual_scaling(polygon: Sequence[Sequence[int]], other: Sequence[Sequence[int]], max_scale: int | None = None):
    """Find ``(s, sign)`` with ``polar_dual(polygon) * s`` affinely equivalent to ``sign * other``.

    Both are compared through :func:`normal_form_2d` once the scaled dual is
    integral.  Returns ``None`` when no scale in ``1..max_scale`` works.
    """
    dual = polar_dual(polygon)
    target_pts = [tuple(p) for p in other]
    if max_scale is None:
        max_scale = max(max(abs(a - b) for a, b in zip(p, q)) for p in target_pts for q in target_pts) + 2
    target = normal_form_2d(NewtonPolytope(2, tuple(convex_hull_2d(target_pts))))
    for s in range(1, max_scale + 1):
        scaled = [tuple(a * s for a in v) for v in dual]
        if any(a.denominator != 1 for v in scaled for a in v):
            continue
        ints = [tuple(int(a) for a in v) for v in scaled]
        nf = normal_form_2d(NewtonPolytope(2, tuple(convex_hull_2d(ints))))
        if nf == target:
            return s
    return None


# -- critical points ----------------------------------------------------------


@dataclass(frozen=True)
class CriticalReport:
    is_critical: bool
    value: Fraction
    log_hessian_det: Fraction
    gradient: tuple[Fraction, ...]

    @property
    def is_morse(self) -> bool:
        return self.is_critical and self.log_hessian_det != 0

    def to_json(self) -> dict:
        return {
            "critical": self.is_critical,
            "value": str(self.value),
            "log_hessian_det": str(self.log_hessian_det),
            "morse": self.is_morse,
            "log_gradient": [str(g) for g in self.gradient],
        }


def _det_fraction(m: list[list[Fraction]]) -> Fraction:
    m = [row[:] for row in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


def critical_report(w: LaurentPoly, point: Sequence[int | Fraction]) -> CriticalReport:
    """Whether ``point`` is a critical point of ``w`` on the torus, with its value.

    Morse-ness is judged by the determinant of the matrix of second
    logarithmic derivatives ``x_j d/dx_j (x_i dw/dx_i)`` at the point.
    """
    n = w.n
    first = [log_derivative(w, i) for i in range(n)]
    grad = tuple(evaluate(d, point) for d in first)
    hess = [[evaluate(log_derivative(first[i], j), point) for j in range(n)] for i in range(n)]
    return CriticalReport(all(g == 0 for g in grad), evaluate(w, point), _det_fraction(hess), grad)


def log_gradient_at_one(w: LaurentPoly) -> tuple[int, ...]:
    """Closed form of the logarithmic gradient at ``(1, ..., 1)``: ``sum_u c_u u``."""
    out = [0] * w.n
    for e, c in w.terms.items():
        for i, a in enumerate(e):
            out[i] += c * a
    return tuple(out)


@dataclass(frozen=True)
class LocusReport:
    passed: bool
    order: int
    expected_order: int
    shift: int
    derivatives_divisible: bool
    failures: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "order": self.order,
            "expected_order": self.expected_order,
            "shift": self.shift,
            "derivatives_divisible": self.derivatives_divisible,
            "failures": list(self.failures),
        }


def locus_report(w: LaurentPoly, g: LaurentPoly, expected_shift: int, expected_order: int) -> LocusReport:
    """Check that ``w - shift`` vanishes to the expected order along ``g = 0``.

    ``expected_shift`` is the critical value along the locus, so ``w`` is
    compared to the constant ``expected_shift``.  Every first and second
    logarithmic derivative must also be divisible by ``g``.
    """
    if g.is_constant():
        raise ValueError("the divisor must be nonconstant")
    order, _ = vanishing_order(w - expected_shift, g)
    failures = []
    if order != expected_order:
        failures.append(f"vanishing order {order} != {expected_order}")
    divisible = True
    n = w.n
    firsts = [log_derivative(w, i) for i in range(n)]
    derivs = [(f"d{i}", d) for i, d in enumerate(firsts)]
    derivs += [(f"d{i}d{j}", log_derivative(firsts[i], j)) for i in range(n) for j in range(i, n)]
    for name, d in derivs:
        if try_div_exact(d, g) is None:
            divisible = False
            failures.append(f"log-derivative {name} not divisible by {g}")
    return LocusReport(not failures, order, expected_order, expected_shift, divisible, tuple(failures))
