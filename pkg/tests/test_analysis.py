from fractions import Fraction

import pytest

from lgmut.analysis import (
    NewtonPolytope,
    convex_hull_2d,
    critical_report,
    dual_scaling,
    is_minimal,
    lattice_area2,
    locus_report,
    log_gradient_at_one,
    minkowski_sum,
    newton,
    normal_form_2d,
    polar_dual,
)
from lgmut.laurent import LaurentPoly, evaluate, log_derivative, parse_poly
from lgmut.seeds import CATALOG_NAMES, catalog
from lgmut.toric import TORIC_POLYTOPES, toric_polytope, toric_potential


def P(text, n=2):
    return parse_poly(text, n)


def polygon(points):
    return NewtonPolytope(2, tuple(convex_hull_2d(points)))


def random_gl2(rng, steps=6):
    m = ((1, 0), (0, 1))
    for _ in range(steps):
        t = rng.choice([-2, -1, 1, 2])
        e = ((1, t), (0, 1)) if rng.random() < 0.5 else ((1, 0), (t, 1))
        m = tuple(tuple(sum(m[i][k] * e[k][j] for k in range(2)) for j in range(2)) for i in range(2))
    if rng.random() < 0.5:
        m = (m[1], m[0])
    return m


# -- Newton polytopes ---------------------------------------------------------------


def test_newton_of_cp2():
    assert set(newton(P("x + y + x^-1*y^-1")).vertices) == {(1, 0), (0, 1), (-1, -1)}


def test_newton_of_segment():
    nw = newton(P("x + y"))
    assert nw.dim == 1 and set(nw.vertices) == {(1, 0), (0, 1)}


def test_newton_drops_interior_points():
    assert len(newton(P("(1+x+y)^3*x^-1*y^-1")).vertices) == 3


def test_newton_in_three_variables():
    nw = newton(P("x^-1 + y^-1 + z^-1 + x*y*z + 5", 3))
    assert set(nw.vertices) == {(-1, 0, 0), (0, -1, 0), (0, 0, -1), (1, 1, 1)}


def test_newton_of_zero():
    with pytest.raises(ValueError):
        newton(LaurentPoly(2))


def test_newton_of_product_is_minkowski_sum(rng):
    for _ in range(50):
        a = LaurentPoly(2, {(rng.randint(-2, 2), rng.randint(-2, 2)): rng.randint(1, 3) for _ in range(4)})
        b = LaurentPoly(2, {(rng.randint(-2, 2), rng.randint(-2, 2)): rng.randint(1, 3) for _ in range(4)})
        # positive coefficients rule out cancellation of vertex terms
        assert set(newton(a * b).vertices) == set(minkowski_sum(newton(a), newton(b)).vertices)


# -- normal forms -------------------------------------------------------------------


def test_unit_triangle_normal_form():
    nf = normal_form_2d(polygon([(0, 0), (1, 0), (0, 1)]))
    assert nf.vertices == ((0, 0), (0, 1), (1, 0))


def test_normal_form_transform_is_recorded():
    p = newton(catalog("bl4").potential)
    nf = normal_form_2d(p)
    m, t = nf.matrix, nf.translation
    moved = sorted((m[0][0] * x + m[0][1] * y + t[0], m[1][0] * x + m[1][1] * y + t[1]) for x, y in p.vertices)
    assert tuple(moved) == nf.vertices


def test_normal_form_invariant(rng):
    for name in CATALOG_NAMES:
        p = newton(catalog(name).potential)
        nf = normal_form_2d(p)
        for _ in range(20):
            m = random_gl2(rng)
            dx, dy = rng.randint(-5, 5), rng.randint(-5, 5)
            q = polygon([(m[0][0] * x + m[0][1] * y + dx, m[1][0] * x + m[1][1] * y + dy) for x, y in p.vertices])
            assert normal_form_2d(q) == nf


def test_normal_forms_separate_dilations():
    assert normal_form_2d(newton(catalog("bl6").potential)) != normal_form_2d(newton(catalog("bl7").potential))


def test_normal_form_of_segment_and_point():
    assert normal_form_2d(polygon([(1, 1), (3, 5)])).vertices == ((0, 0), (2, 0))
    assert normal_form_2d(polygon([(4, 7)])).vertices == ((0, 0),)


def test_normal_form_needs_plane():
    with pytest.raises(ValueError):
        normal_form_2d(newton(P("x + y + z", 3)))


def test_lattice_area():
    assert lattice_area2(newton(catalog("cp2").potential)) == 3
    assert lattice_area2(newton(catalog("bl8").potential)) == 36


# -- minimality ---------------------------------------------------------------------


def test_minimal_examples():
    assert is_minimal(polygon([(1, 0), (0, 1), (-1, -1)]))
    assert is_minimal(newton(catalog("bl3").potential))
    assert not is_minimal(polygon([(0, 0), (2, 0), (0, 2)]))
    assert not is_minimal(newton(catalog("bl6").potential))


def test_minimality_of_catalog():
    # the dilated triangles and the doubled square are not minimal
    flags = {name: is_minimal(newton(catalog(name).potential)) for name in CATALOG_NAMES}
    assert [n for n, ok in flags.items() if not ok] == ["bl5", "bl6", "bl7", "bl8"]


def test_minimality_of_point():
    with pytest.raises(ValueError):
        is_minimal(polygon([(0, 0)]))


# -- polar duality -----------------------------------------------------------------


def test_cp2_dual():
    assert polar_dual([(1, 0), (0, 1), (-1, -1)]) == [(-2, 1), (1, -2), (1, 1)]


def test_biduality():
    square = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    dual = polar_dual(square)
    assert sorted(polar_dual(dual)) == sorted(tuple(Fraction(a) for a in v) for v in square)


def test_dual_needs_interior_origin():
    with pytest.raises(ValueError):
        polar_dual([(1, 0), (0, 1), (1, 1)])
    with pytest.raises(ValueError):
        polar_dual([(1, 0), (-1, 0)])


def test_dual_in_three_dimensions():
    simplex = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)]
    assert len(polar_dual(simplex)) == 4


@pytest.mark.parametrize("name", sorted(TORIC_POLYTOPES))
def test_toric_newton_dual_to_moment(name):
    p = toric_polytope(name)
    support = list(newton(toric_potential(p)).vertices)
    assert dual_scaling(support, p.vertices) == 1


def test_dual_scaling_finds_no_match():
    assert dual_scaling([(1, 0), (0, 1), (-1, -1)], [(0, 0), (1, 0), (0, 1)]) is None


# -- critical points ------------------------------------------------------------------


def test_bl6_critical_at_one():
    rep = critical_report(catalog("bl6").potential, (1, 1))
    assert rep.is_critical and rep.value == 21 and rep.log_hessian_det == 243 and rep.is_morse


def test_non_critical_point():
    rep = critical_report(P("x + y"), (1, 1))
    assert not rep.is_critical and rep.gradient == (1, 1) and not rep.is_morse


def test_dilated_triangles_at_one():
    # the values at (1, 1) are 69 and 669 but the point is not critical
    bl7 = critical_report(catalog("bl7").potential, (1, 1))
    bl8 = critical_report(catalog("bl8").potential, (1, 1))
    assert (bl7.value, bl7.gradient) == (69, (27, 27))
    assert (bl8.value, bl8.gradient) == (669, (729, 0))
    assert not bl7.is_critical and not bl8.is_critical


def test_dilated_triangles_true_critical_points():
    bl7 = critical_report(catalog("bl7").potential, (Fraction(1, 2), Fraction(1, 2)))
    bl8 = critical_report(catalog("bl8").potential, (Fraction(1, 3), Fraction(2, 3)))
    assert bl7.is_morse and bl7.value == 52
    assert bl8.is_morse and bl8.value == 372


def test_log_gradient_closed_form(rng):
    for name in CATALOG_NAMES:
        w = catalog(name).potential
        direct = tuple(evaluate(log_derivative(w, i), (1, 1)) for i in range(2))
        assert log_gradient_at_one(w) == direct


def test_critical_report_json():
    out = critical_report(catalog("bl6").potential, (1, 1)).to_json()
    assert out["value"] == "21" and out["morse"] is True


# -- vanishing loci -------------------------------------------------------------------


@pytest.mark.parametrize("name,shift,order", [("bl6", -6, 3), ("bl7", -12, 4), ("bl8", -60, 6)])
def test_catalog_loci(name, shift, order):
    rep = locus_report(catalog(name).potential, P("1 + x + y"), shift, order)
    assert rep.passed and rep.order == order and rep.derivatives_divisible


def test_locus_wrong_shift_fails():
    rep = locus_report(catalog("bl6").potential, P("1 + x + y"), 0, 3)
    assert not rep.passed and rep.order == 0


def test_locus_flags_nondivisible_derivatives():
    rep = locus_report(P("(1+x+y)*x"), P("1 + x + y"), 0, 1)
    assert rep.order == 1 and not rep.derivatives_divisible and not rep.passed


def test_locus_constant_divisor():
    with pytest.raises(ValueError):
        locus_report(P("x"), P("2"), 0, 1)
