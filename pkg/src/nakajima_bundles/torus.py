"""Torus-fixed data: weight decompositions, block masks, nilpotency.

A weight assignment gives every summand at every vertex an integer tuple of
length n (n = 1 for the circle action, n = |V| for the torus action). A
section is fixed when it only has nonzero blocks between summands whose
weights differ as prescribed:

* circle:  phi and y lower the weight by 1, x preserves it;
* torus:   phi_v lowers coordinate v, x_a lowers coordinate t(a), y_a lowers
  coordinate h(a).

Block (i, j) of a map is target summand i <- source summand j.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

import numpy as np
import sympy as sp

from .point_rep import PointRep
from .quiver import Quiver

MODES = ("circle", "torus")


@dataclass(frozen=True)
class WeightAssignment:
    weights: Mapping[str, tuple[tuple[int, ...], ...]]

    def __post_init__(self):
        w = {v: tuple(tuple(int(c) for c in t) for t in ts) for v, ts in self.weights.items()}
        lengths = {len(t) for ts in w.values() for t in ts}
        if len(lengths) > 1:
            raise ValueError(f"weight tuples of different lengths: {sorted(lengths)}")
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        for ts in self.weights.values():
            for t in ts:
                return len(t)
        return 0

    def shifted(self, delta) -> "WeightAssignment":
        return WeightAssignment({v: tuple(tuple(a + b for a, b in zip(t, delta)) for t in ts)
                                 for v, ts in self.weights.items()})

    def canonical(self) -> "WeightAssignment":
        """Representative modulo a global shift: each coordinate has min 0."""
        flat = [t for ts in self.weights.values() for t in ts]
        if not flat:
            return self
        mins = [min(t[c] for t in flat) for c in range(self.n)]
        return self.shifted([-m for m in mins])

    def to_json(self) -> dict:
        return {v: [list(t) for t in ts] for v, ts in self.weights.items()}

    @classmethod
    def circle(cls, weights: Mapping[str, tuple[int, ...]]) -> "WeightAssignment":
        return cls({v: tuple((w,) for w in ws) for v, ws in weights.items()})


def _lower(w: tuple[int, ...], coord: int | None) -> tuple[int, ...]:
    if coord is None:
        return w
    return tuple(c - 1 if k == coord else c for k, c in enumerate(w))


def _mask(targets, sources, coord) -> np.ndarray:
    return np.array([[t == _lower(s, coord) for s in sources] for t in targets], dtype=bool).reshape(
        len(targets), len(sources))


def allowed_blocks(q: Quiver, wa: WeightAssignment, mode: str = "circle") -> dict[str, np.ndarray]:
    """Boolean masks keyed ``phi_<v>``, ``x_<edge>``, ``y_<edge>``."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if mode == "circle" and wa.n != 1:
        raise ValueError("circle mode needs weight tuples of length 1")
    if mode == "torus" and wa.n != len(q.vertices):
        raise ValueError(f"torus mode needs weight tuples of length {len(q.vertices)}")
    w = wa.weights
    out = {}
    for v in q.vertices:
        coord = 0 if mode == "circle" else q.index(v)
        out[f"phi_{v}"] = _mask(w[v], w[v], coord)
    for e in q.edges:
        if mode == "circle":
            xc, yc = None, 0
        else:
            xc, yc = q.index(e.tail), q.index(e.head)
        out[f"x_{e.id}"] = _mask(w[e.head], w[e.tail], xc)
        out[f"y_{e.id}"] = _mask(w[e.tail], w[e.head], yc)
    return out


# section data adapters


def _support(m) -> np.ndarray:
    """Boolean matrix of nonzero entries; entries may be numbers or
    coefficient sequences (a polynomial is zero iff all coefficients are)."""
    rows = []
    for row in m:
        r = []
        for e in row:
            if isinstance(e, (list, tuple, np.ndarray)):
                r.append(any(_nonzero(c) for c in e))
            else:
                r.append(_nonzero(e))
        rows.append(r)
    return np.array(rows, dtype=bool).reshape(len(rows), len(rows[0]) if rows else 0)


def _nonzero(c) -> bool:
    if isinstance(c, sp.Basic):
        return sp.expand(c) != 0
    return c != 0


def section_supports(data, q: Quiver | None = None) -> tuple[Quiver, dict[str, list[np.ndarray]]]:
    """Supports of every stored section, keyed like ``allowed_blocks``.

    Accepts a PointRep (x, y only), a P^1 bundle (phi in both parts, x, y), or
    a mapping with optional keys "phi", "x", "y" (then ``q`` is required).
    """
    out: dict[str, list[np.ndarray]] = {}
    if isinstance(data, PointRep):
        q = data.quiver
        for e in q.edges:
            out[f"x_{e.id}"] = [np.asarray(data.x[e.id]) != 0]
            out[f"y_{e.id}"] = [np.asarray(data.y[e.id]) != 0]
        return q, out
    if hasattr(data, "bundle") and hasattr(data, "phi"):
        q = data.quiver
        for v in q.vertices:
            out[f"phi_{v}"] = [_support(data.phi[v].zbar), _support(data.phi[v].holomorphic)]
        for e in q.edges:
            out[f"x_{e.id}"] = [_support(data.x[e.id])]
            out[f"y_{e.id}"] = [_support(data.y[e.id])]
        return q, out
    if q is None:
        raise ValueError("a quiver is needed for raw section data")
    for v, m in dict(data.get("phi", {})).items():
        out[f"phi_{v}"] = [_support(m)]
    for key in ("x", "y"):
        for eid, m in dict(data.get(key, {})).items():
            out[f"{key}_{eid}"] = [_support(m)]
    return q, out


def is_fixed(data, wa: WeightAssignment, mode: str = "circle", q: Quiver | None = None) -> bool:
    """True iff every section vanishes outside its allowed blocks."""
    q, supp = section_supports(data, q)
    masks = allowed_blocks(q, wa, mode)
    for key, parts in supp.items():
        for s in parts:
            if s.shape != masks[key].shape:
                raise ValueError(f"{key}: support shape {s.shape} does not match weights {masks[key].shape}")
            if np.any(s & ~masks[key]):
                return False
    return True


def _ranks_of(q: Quiver, supp) -> dict[str, int]:
    ranks = {}
    for v in q.vertices:
        if f"phi_{v}" in supp:
            ranks[v] = supp[f"phi_{v}"][0].shape[0]
    for e in q.edges:
        if f"x_{e.id}" in supp:
            r_h, r_t = supp[f"x_{e.id}"][0].shape
            ranks.setdefault(e.head, r_h)
            ranks.setdefault(e.tail, r_t)
        if f"y_{e.id}" in supp:
            r_t, r_h = supp[f"y_{e.id}"][0].shape
            ranks.setdefault(e.head, r_h)
            ranks.setdefault(e.tail, r_t)
    missing = [v for v in q.vertices if v not in ranks]
    if missing:
        raise ValueError(f"cannot infer ranks for vertices {missing}")
    return ranks


def find_weights(data, bound: int = 3, mode: str = "circle", q: Quiver | None = None) -> list[WeightAssignment]:
    """All fixed weight assignments with entries in [-bound, bound], one per
    global-shift class (canonical representatives, sorted)."""
    if bound < 0:
        raise ValueError("weight bound must be >= 0")
    q, supp = section_supports(data, q)
    ranks = _ranks_of(q, supp)
    n = 1 if mode == "circle" else len(q.vertices)
    slots = [(v, j) for v in q.vertices for j in range(ranks[v])]
    values = list(itertools.product(range(-bound, bound + 1), repeat=n))

    # constraints between slots: (target slot, source slot, lowered coordinate)
    cons = []
    for key, parts in supp.items():
        kind, name = key.split("_", 1)
        if kind == "phi":
            src_v = tgt_v = name
            coord = 0 if mode == "circle" else q.index(name)
        else:
            e = q.edge(name)
            if kind == "x":
                src_v, tgt_v = e.tail, e.head
                coord = None if mode == "circle" else q.index(e.tail)
            else:
                src_v, tgt_v = e.head, e.tail
                coord = 0 if mode == "circle" else q.index(e.head)
        nz = np.zeros_like(parts[0])
        for s in parts:
            nz = nz | s
        for i, j in zip(*np.nonzero(nz)):
            cons.append((slots.index((tgt_v, int(i))), slots.index((src_v, int(j))), coord))
    by_slot: dict[int, list] = {k: [] for k in range(len(slots))}
    for c in cons:
        by_slot[max(c[0], c[1])].append(c)

    found = set()
    assign: list = [None] * len(slots)

    def rec(k: int):
        if k == len(slots):
            w = {}
            for (v, _), t in zip(slots, assign):
                w.setdefault(v, []).append(t)
            wa = WeightAssignment({v: tuple(ts) for v, ts in w.items()}).canonical()
            found.add(tuple((v, wa.weights[v]) for v in q.vertices))
            return
        for val in values:
            assign[k] = val
            if all(assign[t] == _lower(assign[s], c) for t, s, c in by_slot[k]):
                rec(k + 1)
        assign[k] = None

    rec(0)
    return [WeightAssignment(dict(item)) for item in sorted(found)]


def _sym_entry(e, z, zb):
    if isinstance(e, (list, tuple, np.ndarray)):
        return sum((_to_sym(c) * z**i for i, c in enumerate(e)), sp.Integer(0))
    return _to_sym(e)


def _to_sym(c):
    if isinstance(c, sp.Basic):
        return c
    if isinstance(c, (complex, np.complexfloating)):
        return sp.Rational(str(c.real)) + sp.I * sp.Rational(str(c.imag))
    if isinstance(c, (float, np.floating)):
        return sp.Rational(str(float(c)))
    return sp.Integer(int(c)) if float(c).is_integer() else sp.Rational(str(c))


def check_nilpotent(phi: Mapping[str, object]) -> dict[str, bool]:
    """phi_v^{r_v} == 0 exactly, per vertex.

    Values may be number matrices, matrices of z-coefficient sequences, or
    Higgs fields (``zbar`` and ``holomorphic`` parts, combined as
    zbar*c + p(z) in the two variables z, zbar).
    """
    z, zb = sp.symbols("z zbar")
    out = {}
    for v, m in phi.items():
        if hasattr(m, "zbar") and hasattr(m, "holomorphic"):
            a = sp.Matrix([[_sym_entry(e, z, zb) for e in row] for row in m.zbar]) * zb
            a += sp.Matrix([[_sym_entry(e, z, zb) for e in row] for row in m.holomorphic])
        else:
            a = sp.Matrix([[_sym_entry(e, z, zb) for e in row] for row in m])
        if a.rows != a.cols:
            raise ValueError(f"phi_{v} is not square")
        power = a ** a.rows
        out[v] = all(sp.expand(t) == 0 for t in power)
    return out
