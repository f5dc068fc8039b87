from fractions import Fraction

import sympy as sp
from hypothesis import given, strategies as st

from nakajima_bundles.p1 import poly as P

ints = st.lists(st.integers(-5, 5), max_size=5)


def test_coeff_inputs():
    assert P.coeff(3) == 3
    assert P.coeff(Fraction(1, 3)) == sp.Rational(1, 3)
    assert P.coeff("2/7") == sp.Rational(2, 7)
    assert P.coeff([1, -2]) == 1 - 2 * sp.I
    assert P.coeff(0.5) == sp.Rational(1, 2)
    assert P.coeff(1.5 + 2j) == sp.Rational(3, 2) + 2 * sp.I


def test_degree_and_trim():
    assert P.degree(()) == -1
    assert P.poly([1, 0, 0]) == (1,)
    assert P.degree(P.poly([0, 0, 3])) == 2
    assert P.is_zero(P.poly([0, 0]))


def test_mat_entries():
    m = P.mat([[1, [0, 2]], [(), "1/2"]])
    assert m[0][0] == (1,) and m[0][1] == (0, 2) and m[1][0] == () and m[1][1] == (sp.Rational(1, 2),)
    assert P.max_degree(m) == 1
    assert P.mat_constant(m) == (((1,), ()), ((), (sp.Rational(1, 2),)))


@given(ints, ints)
def test_pmul_matches_sympy(a, b):
    z = sp.Symbol("z")
    pa, pb = P.poly(a), P.poly(b)
    assert sp.expand(P.to_expr(P.pmul(pa, pb), z) - P.to_expr(pa, z) * P.to_expr(pb, z)) == 0
    assert P.from_expr(P.to_expr(pa, z), z) == pa


@given(ints, ints, st.integers(-3, 3))
def test_ring_homomorphism_under_evaluation(a, b, t):
    pa, pb = P.poly(a), P.poly(b)
    assert P.peval(P.padd(pa, pb), t) == P.peval(pa, t) + P.peval(pb, t)
    assert P.peval(P.pmul(pa, pb), t) == P.peval(pa, t) * P.peval(pb, t)
    assert P.is_zero(P.psub(pa, pa))


def test_matrix_algebra():
    a = P.mat([[1, [0, 1]], [0, 2]])
    b = P.mat([[[1, 1], 0], [3, 1]])
    ab = P.mat_mul(a, b)
    assert ab == P.mat([[[1, 4], [0, 1]], [6, 2]])
    assert P.mat_is_zero(P.mat_sub(ab, ab))
    assert P.mat_equal(P.mat_add(a, P.mat_neg(a)), P.zeros(2, 2))
