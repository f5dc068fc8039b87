"""Invariant subobjects, (sigma, tau)-stability and simplicity.

Candidates are (i) products of summand subsets and (ii) a rank-1 line
``f: O(k) -> E_v`` at one vertex of rank >= 2 with summand subsets elsewhere.
For fixed subsets the conditions on ``f`` are linear, except invariance
under endomorphic sections (phi_v, loops), which reads ``T f = lambda f`` with
lambda constant: Hom(L, L) = O and Hom(L, L K) = 0 on P^1. Existence of such
an ``f`` over C is decided with a Groebner basis, so verdicts are exact
relative to this family.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import sympy as sp

from ..point_rep import StabilityParams
from . import poly as P
from .bundle import QBarBundleP1, balanced_params, slope

STABLE = "stable"
SEMISTABLE = "strictly-semistable"
UNSTABLE = "unstable"


@dataclass(frozen=True)
class SubbundleCandidate:
    """Summand subsets per vertex, optionally a line at ``line_vertex``.

    ``line_vector`` holds the polynomial components of the inclusion when an
    explicit solution over Q(i) was extracted; it may be None when only
    existence over C is certified.
    """

    subsets: Mapping[str, tuple[int, ...]]
    rd: Mapping[str, tuple[int, int]]
    line_vertex: str | None = None
    line_degree: int | None = None
    line_vector: tuple | None = None

    def ranks_degrees(self) -> dict[str, tuple[int, int]]:
        return dict(self.rd)

    @property
    def rank(self) -> int:
        return sum(r for r, _ in self.rd.values())

    def describe(self) -> str:
        parts = []
        for v, s in self.subsets.items():
            if v == self.line_vertex:
                parts.append(f"{v}: line O({self.line_degree})")
            elif s:
                parts.append(f"{v}: summands {[i + 1 for i in s]}")
        return "; ".join(parts) or "0"

    def to_json(self) -> dict:
        out = {
            "subsets": {v: [i + 1 for i in s] for v, s in self.subsets.items() if v != self.line_vertex},
            "ranks": {v: r for v, (r, _) in self.rd.items()},
            "degrees": {v: d for v, (_, d) in self.rd.items()},
        }
        if self.line_vertex is not None:
            line = {"vertex": self.line_vertex, "degree": self.line_degree}
            if self.line_vector is not None:
                line["components"] = [[str(c) for c in comp] for comp in self.line_vector]
            out["line"] = line
        return out


def _subset_rd(B: QBarBundleP1, subsets) -> dict[str, tuple[int, int]]:
    return {v: (len(s), sum(B.bundle.degrees[v][i] for i in s)) for v, s in subsets.items()}


def _closed(B: QBarBundleP1, subsets, skip: str | None = None) -> bool:
    for _, src, tgt, m in B.operators():
        if skip is not None and skip in (src, tgt):
            continue
        keep = set(subsets[tgt])
        for j in subsets[src]:
            for i in range(len(m)):
                if i not in keep and not P.is_zero(m[i][j]):
                    return False
    return True


def _is_proper(B: QBarBundleP1, rd) -> bool:
    total = sum(r for r, _ in rd.values())
    full = all(rd[v][0] == B.bundle.rank(v) for v in B.quiver.vertices)
    return total > 0 and not full


def _all_subsets(n: int):
    for k in range(n + 1):
        yield from itertools.combinations(range(n), k)


def summand_candidates(B: QBarBundleP1) -> list[SubbundleCandidate]:
    q = B.quiver
    out = []
    for choice in itertools.product(*(list(_all_subsets(B.bundle.rank(v))) for v in q.vertices)):
        subsets = dict(zip(q.vertices, choice))
        rd = _subset_rd(B, subsets)
        if _is_proper(B, rd) and _closed(B, subsets):
            out.append(SubbundleCandidate(subsets, rd))
    return out


# rank-1 lines


class _LineProblem:
    """Line at ``v`` with fixed summand subsets elsewhere; f has degree k."""

    def __init__(self, B: QBarBundleP1, v: str, subsets, k: int):
        self.B, self.v, self.k = B, v, k
        degs = B.bundle.degrees[v]
        self.lengths = [max(0, d - k + 1) for d in degs]
        self.syms = [[sp.Symbol(f"f{j}_{n}") for n in range(m)] for j, m in enumerate(self.lengths)]
        self.unknowns = [s for comp in self.syms for s in comp]
        self.f = tuple((tuple(comp),) for comp in self.syms)  # column vector
        self.linear: list[sp.Expr] = []
        self.endo: list[P.PolyMatrix] = []
        for _, src, tgt, m in B.operators():
            if src == v and tgt == v:
                if not P.mat_is_zero(m):
                    self.endo.append(m)
            elif src == v:
                tf = P.mat_mul(m, self.f)
                keep = set(subsets[tgt])
                for i, row in enumerate(tf):
                    if i not in keep:
                        self.linear.extend(row[0])
            elif tgt == v:
                for s in subsets[src]:
                    g = [m[i][s] for i in range(len(m))]
                    for i, j in itertools.combinations(range(len(g)), 2):
                        minor = P.psub(P.pmul(g[i], self.f[j][0]), P.pmul(g[j], self.f[i][0]))
                        self.linear.extend(minor)

    def _basis(self):
        if not self.unknowns:
            return []
        eqs = [sp.expand(e) for e in self.linear if sp.expand(e) != 0]
        if not eqs:
            return [sp.Matrix([1 if u == w else 0 for w in self.unknowns]) for u in self.unknowns]
        a, _ = sp.linear_eq_to_matrix(eqs, self.unknowns)
        return a.nullspace()

    def solve(self):
        """None if no nonzero f exists, else a (possibly None) explicit vector."""
        basis = self._basis()
        if not basis:
            return None
        n = len(basis)
        u = sp.symbols(f"u0:{n}")
        vec = sum((b * ui for b, ui in zip(basis, u)), sp.zeros(len(self.unknowns), 1))
        sub = dict(zip(self.unknowns, vec))
        if not self.endo:
            return self._vector(sub, {ui: (1 if i == 0 else 0) for i, ui in enumerate(u)})
        lams = sp.symbols(f"lam0:{len(self.endo)}")
        eqs = []
        for lam, m in zip(lams, self.endo):
            tf = P.mat_mul(m, self.f)
            for i, row in enumerate(tf):
                diff = P.psub(row[0], P.pscale(lam, self.f[i][0]))
                eqs.extend(sp.expand(c.subs(sub)) for c in diff)
        eqs = [e for e in eqs if e != 0]
        if not eqs:
            return self._vector(sub, {ui: (1 if i == 0 else 0) for i, ui in enumerate(u)})
        gens = list(u) + list(lams)
        domain = "QQ_I" if any(e.has(sp.I) for e in eqs) else "QQ"
        for m in range(n):
            patch = eqs + [u[m] - 1] + [u[t] for t in range(m)]
            g = sp.groebner(patch, *gens, order="lex", domain=domain)
            if list(g.exprs) == [1]:
                continue
            return self._explicit(g, sub, gens, u)
        return None

    def _vector(self, sub, values):
        comps = []
        for comp in self.syms:
            comps.append(P.trim(sp.expand(sub[s].subs(values)) for s in comp))
        return ("explicit", tuple(comps))

    def _explicit(self, g, sub, gens, u):
        try:
            sols = sp.solve(list(g.exprs), gens, dict=True)
        except (NotImplementedError, ValueError):
            sols = []
        for sol in sols:
            vals = {ui: sol.get(ui, 0) for ui in u}
            vals = {k: sp.nsimplify(val.subs({w: 0 for w in gens})) if hasattr(val, "subs") else val
                    for k, val in vals.items()}
            if all(val.is_Rational or (val.is_number and sp.im(val).is_Rational and sp.re(val).is_Rational)
                   for val in vals.values()):
                return self._vector(sub, vals)
        return ("exists", None)


def _line_rd(B, v, subsets, k):
    rd = _subset_rd(B, {w: s for w, s in subsets.items() if w != v})
    rd[v] = (1, k)
    return rd


def _line_search(B, v, subsets, ks):
    """First k in ``ks`` admitting an invariant line; (k, vector) or None."""
    for k in ks:
        res = _LineProblem(B, v, subsets, k).solve()
        if res is not None:
            return k, res[1]
    return None


def default_bound(B: QBarBundleP1) -> int:
    spread = max(max(d) - min(d) for d in B.bundle.degrees.values())
    return spread + 2


def _line_settings(B: QBarBundleP1):
    q = B.quiver
    for v in q.vertices:
        if B.bundle.rank(v) < 2:
            continue
        others = [w for w in q.vertices if w != v]
        for choice in itertools.product(*(list(_all_subsets(B.bundle.rank(w))) for w in others)):
            subsets = dict(zip(others, choice))
            subsets[v] = ()
            if _closed(B, subsets, skip=v):
                yield v, subsets


def invariant_subbundles(B: QBarBundleP1, bound: int | None = None) -> list[SubbundleCandidate]:
    """All invariant summand products plus, per vertex and subset choice,
    the invariant line of largest degree (degree search within ``bound``)."""
    bound = default_bound(B) if bound is None else bound
    out = summand_candidates(B)
    for v, subsets in _line_settings(B):
        kmax = max(B.bundle.degrees[v])
        found = _line_search(B, v, subsets, range(kmax, kmax - bound - 1, -1))
        if found is None:
            continue
        k, vec = found
        rd = _line_rd(B, v, subsets, k)
        if _is_proper(B, rd):
            out.append(SubbundleCandidate(dict(subsets), rd, v, k, vec))
    return out


@dataclass(frozen=True)
class StabilityReport:
    verdict: str
    slope: Fraction
    witness: SubbundleCandidate | None = None
    witness_slope: Fraction | None = None
    candidates_checked: int = 0
    family: str = field(default="summand subsets + rank-1 lines at one vertex")

    @property
    def is_stable(self) -> bool:
        return self.verdict == STABLE

    def to_json(self) -> dict:
        return {
            "verdict": "semistable" if self.verdict == SEMISTABLE else self.verdict,
            "witness": None if self.witness is None else dict(self.witness.to_json(), slope=_qstr(self.witness_slope)),
            "slope": _qstr(self.slope),
        }


def _qstr(x: Fraction | None) -> str | None:
    if x is None:
        return None
    return f"{x.numerator}/{x.denominator}"


def is_stable(B: QBarBundleP1, sp_params: StabilityParams | None = None, bound: int | None = None) -> StabilityReport:
    """Compare every enumerated invariant subobject with slope(B), exactly.

    Lines are only searched at degrees whose slope could beat the best
    witness so far, which keeps the Groebner work small.
    """
    sp_params = sp_params or balanced_params(B)
    bound = default_bound(B) if bound is None else bound
    mu = slope(B, sp_params)
    best, best_slope, checked = None, None, 0

    def consider(c):
        nonlocal best, best_slope
        s = slope(c, sp_params, B.quiver)
        if best_slope is None or s > best_slope:
            best, best_slope = c, s

    for c in summand_candidates(B):
        checked += 1
        consider(c)
    if best_slope is None or best_slope <= mu:
        for v, subsets in _line_settings(B):
            kmax = max(B.bundle.degrees[v])
            target = mu if best_slope is None or best_slope < mu else best_slope
            strict = best_slope is not None and best_slope >= mu
            ks = []
            for k in range(kmax, kmax - bound - 1, -1):
                rd = _line_rd(B, v, subsets, k)
                if not _is_proper(B, rd):
                    continue
                s = slope(rd, sp_params, B.quiver)
                if s > target or (s == target and not strict):
                    ks.append(k)
            checked += 1
            found = _line_search(B, v, subsets, ks)
            if found is not None:
                k, vec = found
                consider(SubbundleCandidate(dict(subsets), _line_rd(B, v, subsets, k), v, k, vec))
                if best_slope > mu:
                    break
    if best_slope is not None and best_slope > mu:
        verdict = UNSTABLE
    elif best_slope is not None and best_slope == mu:
        verdict = SEMISTABLE
    else:
        verdict = STABLE
    witness = best if verdict != STABLE else None
    return StabilityReport(verdict, mu, witness, best_slope if witness else None, checked)


# endomorphisms and deformations


def _symbolic_matrix(prefix: str, bounds) -> tuple[P.PolyMatrix, list[sp.Symbol]]:
    syms, rows = [], []
    for i, row in enumerate(bounds):
        r = []
        for j, b in enumerate(row):
            entry = tuple(sp.Symbol(f"{prefix}_{i}_{j}_{n}") for n in range(b + 1)) if b >= 0 else ()
            syms.extend(entry)
            r.append(entry)
        rows.append(tuple(r))
    return tuple(rows), syms


def _coefficients(m: P.PolyMatrix) -> list:
    return [c for row in m for e in row for c in e]


def _rank(eqs, unknowns) -> int:
    eqs = [sp.expand(e) for e in eqs]
    eqs = [e for e in eqs if e != 0]
    if not eqs or not unknowns:
        return 0
    a, _ = sp.linear_eq_to_matrix(eqs, unknowns)
    return a.rank()


def _gauge_algebra(B: QBarBundleP1):
    xi, syms = {}, []
    for v in B.quiver.vertices:
        xi[v], s = _symbolic_matrix(f"xi_{v}", B.bundle.endo_bounds(v))
        syms += s
    return xi, syms


def _infinitesimal(B: QBarBundleP1, xi):
    """Action of endomorphisms xi on (x, y, phi), entry by entry."""
    q = B.quiver
    out = {}
    for e in q.edges:
        out[f"x_{e.id}"] = P.mat_sub(P.mat_mul(xi[e.head], B.x[e.id]), P.mat_mul(B.x[e.id], xi[e.tail]))
        out[f"y_{e.id}"] = P.mat_sub(P.mat_mul(xi[e.tail], B.y[e.id]), P.mat_mul(B.y[e.id], xi[e.head]))
    for v in q.vertices:
        for part in ("zbar", "holomorphic"):
            m = getattr(B.phi[v], part)
            out[f"phi_{v}.{part}"] = P.mat_sub(P.mat_mul(xi[v], m), P.mat_mul(m, xi[v]))
    return out


def endomorphism_dimension(B: QBarBundleP1) -> int:
    """Dimension of polynomial endomorphisms commuting with all sections."""
    xi, syms = _gauge_algebra(B)
    eqs = [c for m in _infinitesimal(B, xi).values() for c in _coefficients(m)]
    return len(syms) - _rank(eqs, syms)


class PreconditionError(ValueError):
    pass


def expected_dimension(B: QBarBundleP1, sp_params: StabilityParams | None = None, bound: int | None = None) -> int:
    """Linearised solutions modulo the linearised gauge action, at stable B.

    Parameters: coefficients of x, y and the holomorphic part of phi (the
    zbar part is determined). Equations: the z-positive coefficients of the
    linearised edge source vanish. Result: nullity - dim(orbit inside the
    kernel), with dim(orbit ∩ ker J) = rank(A) - rank(J A).
    """
    report = is_stable(B, sp_params, bound)
    if not report.is_stable:
        raise PreconditionError(f"expected_dimension needs a stable input, got {report.verdict}")
    q, b = B.quiver, B.bundle
    dx, dy, dp, params = {}, {}, {}, []
    for e in q.edges:
        dx[e.id], s = _symbolic_matrix(f"dx_{e.id}", b.x_bounds(e.id))
        params += s
        dy[e.id], s = _symbolic_matrix(f"dy_{e.id}", b.y_bounds(e.id))
        params += s
    for v in q.vertices:
        dp[v], s = _symbolic_matrix(f"dp_{v}", b.phi_bounds(v))
        params += s

    def lin_source(dx, dy):
        src = {v: P.zeros(b.rank(v), b.rank(v)) for v in q.vertices}
        for e in q.edges:
            hd = P.mat_add(P.mat_mul(dx[e.id], B.y[e.id]), P.mat_mul(B.x[e.id], dy[e.id]))
            tl = P.mat_add(P.mat_mul(dy[e.id], B.x[e.id]), P.mat_mul(B.y[e.id], dx[e.id]))
            src[e.head] = P.mat_add(src[e.head], hd)
            src[e.tail] = P.mat_sub(src[e.tail], tl)
        return [c for m in src.values() for row in m for ent in row for c in ent[1:]]

    jac_eqs = lin_source(dx, dy)
    nullity = len(params) - _rank(jac_eqs, params)

    xi, xsyms = _gauge_algebra(B)
    act = _infinitesimal(B, xi)
    orbit_x = {e.id: act[f"x_{e.id}"] for e in q.edges}
    orbit_y = {e.id: act[f"y_{e.id}"] for e in q.edges}
    orbit_coords = []
    for e in q.edges:
        orbit_coords += _padded(orbit_x[e.id], b.x_bounds(e.id))
        orbit_coords += _padded(orbit_y[e.id], b.y_bounds(e.id))
    for v in q.vertices:
        orbit_coords += _padded(act[f"phi_{v}.holomorphic"], b.phi_bounds(v))
    rank_a = _rank(orbit_coords, xsyms)
    rank_ja = _rank(lin_source(orbit_x, orbit_y), xsyms)
    return nullity - (rank_a - rank_ja)


def _padded(m: P.PolyMatrix, bounds) -> list:
    out = []
    for row, brow in zip(m, bounds):
        for e, bd in zip(row, brow):
            if bd >= 0:
                out += [e[n] if n < len(e) else sp.Integer(0) for n in range(bd + 1)]
    return out


def genus_expected_dim(g: int) -> int:
    """6(g-1) for the rank-2 looped vertex with E = theta + theta^-1."""
    if g < 2:
        raise ValueError(f"genus must be >= 2, got {g}")
    return 6 * (g - 1)
