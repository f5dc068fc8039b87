import numpy as np
import pytest

from nakajima_bundles.p1.bundle import QBarBundleP1, SplitBundle
from nakajima_bundles.p1.families import looped_family
from nakajima_bundles.point_rep import PointRep
from nakajima_bundles.quiver import Label, a2_quiver, jordan_quiver, point_quiver
from nakajima_bundles.torus import WeightAssignment, allowed_blocks, check_nilpotent, find_weights, is_fixed

PT = point_quiver()


def test_circle_phi_mask_strictly_triangular():
    m = allowed_blocks(PT, WeightAssignment.circle({"1": (0, 1)}))
    assert m["phi_1"].tolist() == [[False, True], [False, False]]


def test_equal_weights_masks():
    m = allowed_blocks(jordan_quiver(), WeightAssignment.circle({"1": (2, 2)}))
    assert not m["phi_1"].any() and m["x_a"].all() and not m["y_a"].any()


def test_torus_masks_a2_zero_weights():
    wa = WeightAssignment({"1": ((0, 0),), "2": ((0, 0), (0, 0))})
    m = allowed_blocks(a2_quiver(), wa, "torus")
    assert not m["x_a"].any() and not m["y_a"].any()
    assert m["x_a"].shape == (2, 1) and m["y_a"].shape == (1, 2)


def test_torus_masks_lower_tail_and_head():
    # x_a lowers coordinate t(a) = "1", y_a lowers coordinate h(a) = "2"
    wa = WeightAssignment({"1": ((1, 0),), "2": ((0, 0), (1, 1))})
    m = allowed_blocks(a2_quiver(), wa, "torus")
    assert m["x_a"].tolist() == [[True], [False]]
    assert m["y_a"].tolist() == [[False, True]]


def test_mode_checks():
    with pytest.raises(ValueError):
        allowed_blocks(a2_quiver(), WeightAssignment.circle({"1": (0,), "2": (0, 0)}), "torus")
    with pytest.raises(ValueError):
        allowed_blocks(PT, WeightAssignment.circle({"1": (0, 1)}), "sphere")


def test_zero_sections_fixed_everywhere():
    data = {"phi": {"1": [[0, 0], [0, 0]]}}
    for w in [(0, 0), (0, 1), (3, -3)]:
        assert is_fixed(data, WeightAssignment.circle({"1": w}), q=PT)
    assert len(find_weights(data, 3, q=PT)) == 13  # weight gaps -6..6


def test_triangular_phi_fixed():
    upper = {"phi": {"1": [[0, 1], [0, 0]]}}
    lower = {"phi": {"1": [[0, 0], [1, 0]]}}
    assert is_fixed(upper, WeightAssignment.circle({"1": (0, 1)}), q=PT)
    assert is_fixed(lower, WeightAssignment.circle({"1": (1, 0)}), q=PT)
    assert not is_fixed(lower, WeightAssignment.circle({"1": (0, 1)}), q=PT)


def test_diagonal_phi_never_fixed():
    data = {"phi": {"1": [[1, 0], [1, 0]]}}
    assert find_weights(data, 3, q=PT) == []


def test_nilpotent_chain_weights():
    data = {"phi": {"1": [[0, 1, 0], [0, 0, 1], [0, 0, 0]]}}
    found = find_weights(data, 3, q=PT)
    assert [w.to_json() for w in found] == [{"1": [[0], [1], [2]]}]


def test_bundle_chain_from_sections():
    b = SplitBundle(PT, {"1": (6, 3, 0)})
    B = QBarBundleP1.build(PT, b, phi_holo={"1": [[0, [1, 1], 0], [0, 0, [0, 3]], [0, 0, 0]]})
    assert [w.to_json() for w in find_weights(B)] == [{"1": [[0], [1], [2]]}]
    assert check_nilpotent(B.phi) == {"1": True}


def test_looped_example_outside_fixed_locus():
    B = looped_family()
    assert find_weights(B, 3) == [] and find_weights(B, 3, "torus") == []
    assert check_nilpotent(B.phi) == {"1": False}


def test_point_rep_weights():
    q, l = a2_quiver(), Label((1, 2))
    p = PointRep(q, l, {"a": [[1], [0]]}, {"a": [[0, 0]]})
    found = find_weights(p, 1)
    # x preserves weight: summand 1 of vertex 2 matches vertex 1, summand 2 is free
    assert {"1": [[1]], "2": [[1], [0]]} in [w.to_json() for w in found]
    assert all(is_fixed(p, w) for w in found)


def test_canonical_shift():
    wa = WeightAssignment({"1": ((2, -1),), "2": ((3, 0), (5, -1))})
    assert wa.canonical().to_json() == {"1": [[0, 0]], "2": [[1, 1], [3, 0]]}


def test_check_nilpotent_examples():
    assert check_nilpotent({"1": [[0, 0], [0, 0]]}) == {"1": True}
    assert check_nilpotent({"1": [[0, 0], [5, 0]]}) == {"1": True}
    assert check_nilpotent({"1": [[1, 0], [0, 0]]}) == {"1": False}
    # entries in z: [[z, -z^2], [1, -z]] squares to zero
    assert check_nilpotent({"1": [[[0, 1], [0, 0, -1]], [[1], [0, -1]]]}) == {"1": True}
    assert check_nilpotent({"1": np.array([[0.5, 0.25], [-1.0, -0.5]])}) == {"1": True}
    with pytest.raises(ValueError):
        check_nilpotent({"1": [[0, 1]]})
