"""Split Q-bar-bundles on the projective line.

Every bundle is a sum of line bundles, so the data reduce to per-vertex
degree lists and matrices of polynomials in the affine coordinate z:

* ``x_a`` (r_h x r_t): entry (i, j) is a section of O(d_h,i - d_t,j).
* ``y_a`` (r_t x r_h): entry (i, j) is stored with the same degree bound as a
  section of O(d_t,i - d_h,j); it stands for a class in
  H^1(O(d_h,j - d_t,i - 2)) of the same dimension (polynomial-in-z display).
* ``phi_v = c_v zbar dz + p_v(z) dz``: p has entries in O(d_i - d_j - 2) (K has
  degree -2); c is a constant matrix forced by ``dbar_constraint``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import sympy as sp

from ..point_rep import StabilityParams
from ..quiver import Issue, Label, Quiver, ValidationError, require_valid
from . import poly as P

K_DEGREE = -2


class InconsistencyError(ValueError):
    """The moment source at ``vertex`` is not constant in z."""

    def __init__(self, vertex: str, residue):
        self.vertex = vertex
        self.residue = residue
        super().__init__(f"vertex {vertex}: edge source has z-dependence, not expressible as c*zbar")


class UndefinedSlopeError(ValueError):
    pass


def hom_dim(a: int, b: int) -> int:
    """dim H^0(Hom(O(a), O(b))) = dim H^0(O(b - a))."""
    return max(0, b - a + 1)


def h1_dim(k: int) -> int:
    """dim H^1(P^1, O(k))."""
    return max(0, -k - 1)


@dataclass(frozen=True)
class SplitBundle:
    """Degrees of the line-bundle summands at each vertex."""

    quiver: Quiver
    degrees: Mapping[str, tuple[int, ...]]

    def __post_init__(self):
        require_valid(self.quiver)
        issues = []
        degs = {}
        for v in self.quiver.vertices:
            if v not in self.degrees:
                issues.append(Issue("length-mismatch", v, "no splitting given"))
                continue
            d = tuple(int(t) for t in self.degrees[v])
            if not d:
                issues.append(Issue("bad-rank", v, "empty splitting"))
            degs[v] = d
        extra = set(self.degrees) - set(self.quiver.vertices)
        issues += [Issue("dangling-edge", v, "splitting for unknown vertex") for v in sorted(extra)]
        if issues:
            raise ValidationError(issues)
        object.__setattr__(self, "degrees", degs)

    def rank(self, v: str) -> int:
        return len(self.degrees[v])

    def degree(self, v: str) -> int:
        return sum(self.degrees[v])

    @property
    def label(self) -> Label:
        vs = self.quiver.vertices
        return Label(tuple(self.rank(v) for v in vs), tuple(self.degree(v) for v in vs))

    def check_label(self, label: Label) -> None:
        issues = []
        for i, v in enumerate(self.quiver.vertices):
            if self.rank(v) != label.rank[i]:
                issues.append(Issue("length-mismatch", v, f"splitting has {self.rank(v)} summands, rank {label.rank[i]}"))
            elif self.degree(v) != label.degree[i]:
                issues.append(Issue("length-mismatch", v, f"splitting degree {self.degree(v)} != {label.degree[i]}"))
        if issues:
            raise ValidationError(issues)

    def ranks_degrees(self) -> dict[str, tuple[int, int]]:
        return {v: (self.rank(v), self.degree(v)) for v in self.quiver.vertices}

    # degree bounds; negative means the entry must vanish

    def x_bounds(self, edge_id: str) -> list[list[int]]:
        e = self.quiver.edge(edge_id)
        return [[dh - dt for dt in self.degrees[e.tail]] for dh in self.degrees[e.head]]

    def y_bounds(self, edge_id: str) -> list[list[int]]:
        e = self.quiver.edge(edge_id)
        return [[dt - dh for dh in self.degrees[e.head]] for dt in self.degrees[e.tail]]

    def phi_bounds(self, v: str) -> list[list[int]]:
        d = self.degrees[v]
        return [[di - dj + K_DEGREE for dj in d] for di in d]

    def endo_bounds(self, v: str) -> list[list[int]]:
        d = self.degrees[v]
        return [[di - dj for dj in d] for di in d]


def _check_bounds(name: str, m: P.PolyMatrix, bounds: list[list[int]]) -> list[Issue]:
    rows, cols = len(bounds), len(bounds[0]) if bounds else 0
    if P.shape(m) != (rows, cols):
        return [Issue("length-mismatch", name, f"expected {rows}x{cols}, got {P.shape(m)[0]}x{P.shape(m)[1]}")]
    out = []
    for i in range(rows):
        for j in range(cols):
            if not P.is_zero(m[i][j]) and P.degree(m[i][j]) > bounds[i][j]:
                out.append(Issue("bad-degree", f"{name}[{i + 1},{j + 1}]",
                                 f"degree {P.degree(m[i][j])} exceeds bound {bounds[i][j]}"))
    return out


@dataclass(frozen=True)
class HiggsField:
    """``phi = zbar * zbar_coeff + holomorphic(z)``, times dz."""

    zbar: P.PolyMatrix
    holomorphic: P.PolyMatrix

    @property
    def is_holomorphic(self) -> bool:
        return P.mat_is_zero(self.zbar)


def edge_source(q: Quiver, b: SplitBundle, x, y) -> dict[str, P.PolyMatrix]:
    """sum_{h(a)=v} x_a y_a - sum_{t(a)=v} y_a x_a, per vertex."""
    out = {v: P.zeros(b.rank(v), b.rank(v)) for v in q.vertices}
    for e in q.edges:
        out[e.head] = P.mat_add(out[e.head], P.mat_mul(x[e.id], y[e.id]))
        out[e.tail] = P.mat_sub(out[e.tail], P.mat_mul(y[e.id], x[e.id]))
    return out


def dbar_constraint(q: Quiver, b: SplitBundle, x, y) -> dict[str, P.PolyMatrix]:
    """The zbar-coefficient matrix each phi_v must carry.

    With y carrying dz^dzbar, dbar(c zbar dz) = -c dz^dzbar, so the complex
    moment equation dbar phi_v = -source_v forces c_v = source_v. A source with
    z-dependence cannot be absorbed by a term linear in zbar.
    """
    src = edge_source(q, b, x, y)
    for v in q.vertices:
        if P.max_degree(src[v]) > 0:
            raise InconsistencyError(v, src[v])
    return src


@dataclass(frozen=True)
class QBarBundleP1:
    """(E, phi, x, y) on P^1 with E split."""

    quiver: Quiver
    bundle: SplitBundle
    x: Mapping[str, P.PolyMatrix]
    y: Mapping[str, P.PolyMatrix]
    phi: Mapping[str, HiggsField]

    def __post_init__(self):
        q, b = self.quiver, self.bundle
        issues = []
        for e in q.edges:
            for name, store in (("x", self.x), ("y", self.y)):
                if e.id not in store:
                    issues.append(Issue("length-mismatch", f"{name}_{e.id}", "missing section"))
            if issues:
                continue
            issues += _check_bounds(f"x_{e.id}", self.x[e.id], b.x_bounds(e.id))
            issues += _check_bounds(f"y_{e.id}", self.y[e.id], b.y_bounds(e.id))
        for v in q.vertices:
            if v not in self.phi:
                issues.append(Issue("length-mismatch", f"phi_{v}", "missing Higgs field"))
                continue
            issues += _check_bounds(f"phi_{v}", self.phi[v].holomorphic, b.phi_bounds(v))
            zb = self.phi[v].zbar
            if P.shape(zb) != (b.rank(v), b.rank(v)):
                issues.append(Issue("length-mismatch", f"phi_{v}.zbar", "wrong shape"))
        if issues:
            raise ValidationError(issues)
        forced = dbar_constraint(q, b, self.x, self.y)
        for v in q.vertices:
            if not P.mat_equal(forced[v], self.phi[v].zbar):
                raise InconsistencyError(v, P.mat_sub(forced[v], self.phi[v].zbar))

    @classmethod
    def build(cls, quiver: Quiver, bundle: SplitBundle, x=None, y=None, phi_holo=None) -> "QBarBundleP1":
        """Fill missing sections with zero and derive the zbar parts."""
        x = dict(x or {})
        y = dict(y or {})
        phi_holo = dict(phi_holo or {})
        for e in quiver.edges:
            rh, rt = bundle.rank(e.head), bundle.rank(e.tail)
            x[e.id] = P.mat(x[e.id]) if e.id in x else P.zeros(rh, rt)
            y[e.id] = P.mat(y[e.id]) if e.id in y else P.zeros(rt, rh)
        zb = dbar_constraint(quiver, bundle, x, y)
        phi = {}
        for v in quiver.vertices:
            r = bundle.rank(v)
            hol = P.mat(phi_holo[v]) if v in phi_holo else P.zeros(r, r)
            phi[v] = HiggsField(zb[v], hol)
        return cls(quiver, bundle, x, y, phi)

    @property
    def label(self) -> Label:
        return self.bundle.label

    def ranks_degrees(self) -> dict[str, tuple[int, int]]:
        return self.bundle.ranks_degrees()

    def operators(self):
        """(name, source vertex, target vertex, matrix) for every section."""
        out = []
        for v in self.quiver.vertices:
            out.append((f"phi_{v}.zbar", v, v, self.phi[v].zbar))
            out.append((f"phi_{v}", v, v, self.phi[v].holomorphic))
        for e in self.quiver.edges:
            out.append((f"x_{e.id}", e.tail, e.head, self.x[e.id]))
            out.append((f"y_{e.id}", e.head, e.tail, self.y[e.id]))
        return out

    def gauge(self, g: Mapping[str, P.PolyMatrix], g_inv: Mapping[str, P.PolyMatrix]) -> "QBarBundleP1":
        """Act by automorphisms ``g_v`` (with given inverses)."""
        q = self.quiver
        x = {e.id: P.mat_mul(P.mat_mul(g[e.head], self.x[e.id]), g_inv[e.tail]) for e in q.edges}
        y = {e.id: P.mat_mul(P.mat_mul(g[e.tail], self.y[e.id]), g_inv[e.head]) for e in q.edges}
        hol = {v: P.mat_mul(P.mat_mul(g[v], self.phi[v].holomorphic), g_inv[v]) for v in q.vertices}
        return QBarBundleP1.build(q, self.bundle, x, y, hol)


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, sp.Rational):
        return Fraction(int(v.p), int(v.q))
    return Fraction(str(v))


def slope(obj, sp_params: StabilityParams, quiver: Quiver | None = None) -> Fraction:
    """(sum sigma_v deg_v + sum tau_v rk_v) / sum rk_v, exactly.

    ``obj`` is anything with ``ranks_degrees()`` (bundles, candidates) or a
    plain mapping vertex -> (rank, degree); vertex order comes from ``quiver``
    or from ``obj.quiver``.
    """
    rd = obj.ranks_degrees() if hasattr(obj, "ranks_degrees") else dict(obj)
    q = quiver or getattr(obj, "quiver", None)
    verts = q.vertices if q is not None else tuple(rd)
    if len(sp_params.sigma) != len(verts):
        raise ValueError("stability parameters do not match the vertex count")
    num, rank = Fraction(0), 0
    for v, s, t in zip(verts, sp_params.sigma, sp_params.tau):
        r, d = rd.get(v, (0, 0))
        num += _frac(s) * d + _frac(t) * r
        rank += r
    if rank == 0:
        raise UndefinedSlopeError("total rank is zero")
    return num / rank


def balanced_params(b, sigma=None) -> StabilityParams:
    """sigma (default 1) with uniform tau making slope(b) = 0."""
    q = b.quiver
    n = len(q.vertices)
    sig = tuple(_frac(s) for s in (sigma or (1,) * n))
    mu = slope(b, StabilityParams(sig, (Fraction(0),) * n))
    return StabilityParams(sig, (-mu,) * n)
