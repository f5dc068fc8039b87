import numpy as np
from hypothesis import given, settings, strategies as st

from nakajima_bundles.p1 import poly as P
from nakajima_bundles.p1.bundle import SplitBundle, dbar_constraint
from nakajima_bundles.p1.scan import random_bundle
from nakajima_bundles.p1.stability import is_stable
from nakajima_bundles.point_rep import GaugeElement, PointRep, act, moment_complex, moment_real
from nakajima_bundles.quiver import Label, a2_quiver, jordan_quiver, point_quiver, star_quiver
from nakajima_bundles.torus import WeightAssignment, check_nilpotent, find_weights, is_fixed

QUIVERS = [
    (jordan_quiver(), (2,)), (a2_quiver(), (1, 2)), (star_quiver(), (2, 1, 1)), (point_quiver(), (3,)),
]
seeds = st.integers(0, 2**32 - 1)
quivers = st.sampled_from(QUIVERS)


@settings(max_examples=30, deadline=None)
@given(quivers, seeds, st.sampled_from(["commutator", "literal"]))
def test_moment_equivariance(qr, seed, convention):
    q, rank = qr
    if not q.edges:
        return
    rng = np.random.default_rng(seed)
    label = Label(rank)
    p, g = PointRep.random(q, label, rng), GaugeElement.random(q, label, rng)
    gp = act(g, p)
    for mu in (lambda r: moment_real(r, convention), moment_complex):
        a, b = mu(gp), mu(p)
        for v in q.vertices:
            gv = g.mats[v]
            assert np.allclose(a[v], gv @ b[v] @ gv.conj().T, atol=1e-10)


def _random_splitting(q, rank, rng):
    return SplitBundle(q, {v: tuple(int(d) for d in rng.integers(-1, 3, size=r)) for v, r in zip(q.vertices, rank)})


@settings(max_examples=30, deadline=None)
@given(quivers, seeds)
def test_dbar_vanishes_without_y(qr, seed):
    q, rank = qr
    rng = np.random.default_rng(seed)
    b = _random_splitting(q, rank, rng)
    B = random_bundle(q, b, rng)
    zero_y = {e.id: P.zeros(b.rank(e.tail), b.rank(e.head)) for e in q.edges}
    c = dbar_constraint(q, b, B.x, zero_y)
    assert all(P.mat_is_zero(m) for m in c.values())


def _unipotent(b, rng):
    """I + N at one vertex with a single constant off-diagonal entry.

    Constant automorphisms keep the zbar coefficient constant, which is the
    normal form the bundle model stores.
    """
    g, g_inv = {}, {}
    for v in b.quiver.vertices:
        r = b.rank(v)
        eye = [[[1] if i == j else 0 for j in range(r)] for i in range(r)]
        g[v], g_inv[v] = P.mat(eye), P.mat(eye)
    v = b.quiver.vertices[int(rng.integers(len(b.quiver.vertices)))]
    bounds = b.endo_bounds(v)
    slots = [(i, j) for i in range(b.rank(v)) for j in range(b.rank(v)) if i != j and bounds[i][j] >= 0]
    if slots:
        i, j = slots[int(rng.integers(len(slots)))]
        n = [int(rng.choice([-2, -1, 1, 2]))]
        plus = [[[1] if a == c else 0 for c in range(b.rank(v))] for a in range(b.rank(v))]
        minus = [row[:] for row in plus]
        plus[i][j], minus[i][j] = n, [-c for c in n]
        g[v], g_inv[v] = P.mat(plus), P.mat(minus)
    return g, g_inv


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(QUIVERS[:2] + [(point_quiver(), (2,))]), seeds)
def test_verdict_gauge_invariant(qr, seed):
    q, rank = qr
    rng = np.random.default_rng(seed)
    b = _random_splitting(q, rank, rng)
    B = random_bundle(q, b, rng)
    g, g_inv = _unipotent(b, rng)
    C = B.gauge(g, g_inv)
    r1, r2 = is_stable(B), is_stable(C)
    assert r1.verdict == r2.verdict
    assert r1.witness_slope == r2.witness_slope


def _masked_data(q, wa, mode, rng):
    from nakajima_bundles.torus import allowed_blocks
    masks = allowed_blocks(q, wa, mode)
    data = {"phi": {}, "x": {}, "y": {}}
    for key, m in masks.items():
        kind, name = key.split("_", 1)
        vals = rng.integers(-3, 4, size=m.shape) * m
        data[kind][name] = vals.tolist()
    return data


def _random_weights(q, rank, mode, rng, spread=3):
    n = 1 if mode == "circle" else len(q.vertices)
    return WeightAssignment({v: tuple(tuple(int(c) for c in rng.integers(0, spread, size=n)) for _ in range(r))
                             for v, r in zip(q.vertices, rank)})


@settings(max_examples=200, deadline=None)
@given(quivers, seeds, st.sampled_from(["circle", "torus"]))
def test_fixed_implies_nilpotent(qr, seed, mode):
    q, rank = qr
    rng = np.random.default_rng(seed)
    wa = _random_weights(q, rank, mode, rng)
    data = _masked_data(q, wa, mode, rng)
    assert is_fixed(data, wa, mode, q=q)
    assert all(check_nilpotent(data["phi"]).values())


def _conj(m, g, g_inv):
    return (np.asarray(g) @ np.asarray(m) @ np.asarray(g_inv)).tolist()


@settings(max_examples=50, deadline=None)
@given(quivers, seeds, st.sampled_from(["circle", "torus"]))
def test_fixed_invariant_under_weight_preserving_basis_change(qr, seed, mode):
    q, rank = qr
    rng = np.random.default_rng(seed)
    wa = _random_weights(q, rank, mode, rng, spread=2)
    data = _masked_data(q, wa, mode, rng)
    # elementary matrices mixing summands of equal weight
    g, g_inv = {}, {}
    for v, r in zip(q.vertices, rank):
        g[v], g_inv[v] = np.eye(r, dtype=int), np.eye(r, dtype=int)
        w = wa.weights[v]
        pairs = [(i, j) for i in range(r) for j in range(r) if i != j and w[i] == w[j]]
        if pairs:
            i, j = pairs[int(rng.integers(len(pairs)))]
            g[v][i, j], g_inv[v][i, j] = 2, -2
    moved = {
        "phi": {v: _conj(m, g[v], g_inv[v]) for v, m in data["phi"].items()},
        "x": {e.id: _conj(data["x"][e.id], g[e.head], g_inv[e.tail]) for e in q.edges},
        "y": {e.id: _conj(data["y"][e.id], g[e.tail], g_inv[e.head]) for e in q.edges},
    }
    assert is_fixed(moved, wa, mode, q=q)


@settings(max_examples=30, deadline=None)
@given(quivers, seeds, st.integers(-4, 4))
def test_find_weights_shift_closed(qr, seed, shift):
    q, rank = qr
    rng = np.random.default_rng(seed)
    wa = _random_weights(q, rank, "circle", rng)
    data = _masked_data(q, wa, "circle", rng)
    found = find_weights(data, 2, q=q)
    assert wa.canonical() in found or max(t[0] for ts in wa.canonical().weights.values() for t in ts) > 4
    for w in found:
        assert is_fixed(data, w.shifted((shift,)), q=q)
