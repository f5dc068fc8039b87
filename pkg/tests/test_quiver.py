import pytest

from nakajima_bundles.quiver import (Edge, Label, Quiver, ValidationError, a2_quiver, double, jordan_quiver,
                                     point_quiver, rep_space_dimension, reverse_edge, star_quiver, validate)


def test_double_point():
    d = double(point_quiver())
    assert d.vertices == ("1",) and d.edges == ()


def test_double_a2():
    d = double(a2_quiver())
    assert [(e.id, e.tail, e.head) for e in d.edges] == [("a", "1", "2"), ("-a", "2", "1")]
    assert d.base == a2_quiver()


def test_double_jordan_has_two_loops():
    d = double(jordan_quiver())
    assert len(d.edges) == 2 and all(e.is_loop for e in d.edges)


def test_double_of_double_counts_edges():
    q = star_quiver(3)
    assert len(double(double(q).as_quiver()).edges) == 4 * len(q.edges)


def test_reverse_is_involution():
    e = Edge("a", "1", "2")
    assert reverse_edge(reverse_edge(e)) == e
    r = reverse_edge(e)
    assert (r.tail, r.head) == (e.head, e.tail)


def test_double_rejects_dangling():
    with pytest.raises(ValidationError):
        double(Quiver.from_edges(["1"], [("a", "1", "2")]))


def test_validate_reports():
    assert validate(a2_quiver(), Label((1, 2), (0, 0))) == []
    issues = validate(Quiver.from_edges(["1"], [("a", "1", "9")]))
    assert [i.kind for i in issues] == ["dangling-edge"]
    issues = validate(a2_quiver(), Label((1,), (0,)))
    assert [i.kind for i in issues] == ["length-mismatch", "length-mismatch"]
    issues = validate(Quiver.from_edges(["1"], [("a", "1", "1"), ("a", "1", "1")]))
    assert [i.kind for i in issues] == ["duplicate-id"]
    assert [i.kind for i in validate(point_quiver(), Label((0,)))] == ["bad-rank"]


@pytest.mark.parametrize("q,rank,expected", [
    (jordan_quiver(), (1,), 4),
    (a2_quiver(), (1, 1), 4),
    (a2_quiver(), (1, 2), 8),
    (star_quiver(), (2, 1, 1), 16),
])
def test_rep_space_dimension(q, rank, expected):
    assert rep_space_dimension(q, Label(rank)) == expected


def test_rep_space_dimension_relabel_invariant():
    q = star_quiver()
    m = {"0": "c", "1": "p", "2": "q"}
    assert rep_space_dimension(q.relabel(m), Label((2, 1, 3))) == rep_space_dimension(q, Label((2, 1, 3)))
