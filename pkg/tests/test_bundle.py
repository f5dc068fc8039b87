from fractions import Fraction

import pytest
import sympy as sp

from nakajima_bundles.p1 import poly as P
from nakajima_bundles.p1.bundle import (InconsistencyError, QBarBundleP1, SplitBundle, UndefinedSlopeError,
                                        balanced_params, dbar_constraint, h1_dim, hom_dim, slope)
from nakajima_bundles.p1.families import a2_symbolic, looped_symbolic
from nakajima_bundles.point_rep import StabilityParams
from nakajima_bundles.quiver import Label, ValidationError, a2_quiver, jordan_quiver, point_quiver
from oracles import cech_dims


@pytest.mark.parametrize("k", range(-10, 11))
def test_cohomology_against_cech(k):
    h0, h1 = cech_dims(k)
    assert hom_dim(0, k) == h0
    assert h1_dim(k) == h1
    assert h1_dim(k) == hom_dim(0, -k - 2)  # Serre duality with K = O(-2)


def test_hom_dim_examples():
    assert hom_dim(0, 0) == 1 and hom_dim(0, 2) == 3 and hom_dim(1, 0) == 0
    assert h1_dim(-2) == 1 and h1_dim(0) == 0 and h1_dim(-4) == 3


def test_split_bundle_label():
    b = SplitBundle(a2_quiver(), {"1": (0,), "2": (1, 3)})
    assert b.label == Label((1, 2), (0, 4))
    b.check_label(Label((1, 2), (0, 4)))
    with pytest.raises(ValidationError):
        b.check_label(Label((1, 2), (0, 3)))
    with pytest.raises(ValidationError):
        SplitBundle(a2_quiver(), {"1": (0,)})


def test_bounds():
    b = SplitBundle(a2_quiver(), {"1": (0,), "2": (1, 3)})
    assert b.x_bounds("a") == [[1], [3]]
    assert b.y_bounds("a") == [[-1, -3]]
    assert b.phi_bounds("2") == [[-2, -4], [0, -2]]


def test_looped_display_exact():
    (x11, x21, x22, y11, y12, y21, y22), x, y = looped_symbolic()
    q = jordan_quiver()
    b = SplitBundle(q, {"1": (0, 0)})
    c = dbar_constraint(q, b, {"a": P.mat(x)}, {"a": P.mat(y)})["1"]
    display = [[-x21 * y12, x11 * y12 - x22 * y12],
               [x21 * y11 + x22 * y21 - x11 * y21 - x21 * y22, x21 * y12]]
    for i in range(2):
        for j in range(2):
            assert sp.expand(P.to_expr(c[i][j], sp.Symbol("z")) - display[i][j]) == 0


def test_a2_vertex2_display_exact():
    (x1, x2, y1, y2), x, y = a2_symbolic()
    q = a2_quiver()
    b = SplitBundle(q, {"1": (0,), "2": (0, 0)})
    c = dbar_constraint(q, b, {"a": P.mat(x)}, {"a": P.mat(y)})
    display2 = [[x1 * y1, x1 * y2], [x2 * y1, x2 * y2]]
    z = sp.Symbol("z")
    assert all(sp.expand(P.to_expr(c["2"][i][j], z) - display2[i][j]) == 0 for i in range(2) for j in range(2))
    # vertex 1 carries the tail sign of the moment map
    assert sp.expand(P.to_expr(c["1"][0][0], z) + x1 * y1 + x2 * y2) == 0


def test_dbar_zero_y():
    q = jordan_quiver()
    b = SplitBundle(q, {"1": (0, 1)})
    c = dbar_constraint(q, b, {"a": P.mat([[1, 0], [[1, 1], 2]])}, {"a": P.zeros(2, 2)})
    assert P.mat_is_zero(c["1"])


def test_inconsistent_source():
    q = jordan_quiver()
    b = SplitBundle(q, {"1": (0, 1)})
    x = P.mat([[1, 0], [[0, 1], 2]])
    y = P.mat([[1, 0], [[0, 1], 0]])
    with pytest.raises(InconsistencyError) as exc:
        dbar_constraint(q, b, {"a": x}, {"a": y})
    assert exc.value.vertex == "1"


def test_bundle_rejects_bad_degree():
    q = jordan_quiver()
    b = SplitBundle(q, {"1": (0, 1)})
    with pytest.raises(ValidationError) as exc:
        QBarBundleP1.build(q, b, {"a": [[[0, 1], 0], [0, 0]]})
    assert exc.value.issues[0].kind == "bad-degree"


def test_bundle_rejects_wrong_zbar():
    B = QBarBundleP1.build(jordan_quiver(), SplitBundle(jordan_quiver(), {"1": (0, 0)}),
                           {"a": [[1, 0], [1, 2]]}, {"a": [[1, 1], [0, 2]]})
    phi = dict(B.phi)
    phi["1"] = type(phi["1"])(P.zeros(2, 2), phi["1"].holomorphic)
    with pytest.raises(InconsistencyError):
        QBarBundleP1(B.quiver, B.bundle, B.x, B.y, phi)


def test_slope_exact():
    b = SplitBundle(a2_quiver(), {"1": (0,), "2": (1, 2)})
    sp_ = StabilityParams((1, 2), (Fraction(1, 2), 0))
    assert slope(b, sp_) == Fraction(0 + 2 * 3 + Fraction(1, 2), 3)
    assert slope(b, balanced_params(b)) == 0
    with pytest.raises(UndefinedSlopeError):
        slope({"1": (0, 0), "2": (0, 0)}, sp_, a2_quiver())


def test_gauge_preserves_consistency():
    q = point_quiver()
    b = SplitBundle(q, {"1": (0, 3)})
    B = QBarBundleP1.build(q, b, phi_holo={"1": [[0, 0], [[1, 2], 0]]})
    g = {"1": P.mat([[1, 0], [[0, 0, 1], 1]])}
    g_inv = {"1": P.mat([[1, 0], [[0, 0, -1], 1]])}
    C = B.gauge(g, g_inv)
    assert C.phi["1"].holomorphic == B.phi["1"].holomorphic
