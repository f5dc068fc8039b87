"""Solving the point-level moment map equations.

``project_complex`` lands on ``mu_C = 0`` by Gauss-Newton; ``kempf_ness_flow``
then descends ``||mu_R - tau||^2`` along Hermitian (complexified gauge)
directions, which keep ``mu_C = 0`` because ``mu_C`` is equivariant for the
complexified group. ``tangent_dimension`` linearises both equations at a
solution and subtracts the gauge orbit.
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from typing import Mapping, NamedTuple

import numpy as np
from scipy.linalg import expm

from .point_rep import (
    PointRep,
    StabilityParams,
    act_complexified,
    infinitesimal_action,
    moment_complex,
    moment_real,
)

log = logging.getLogger(__name__)

ARMIJO = 0.1


class PrecisionWarning(UserWarning):
    """Singular values straddle the rank cutoff; the computed rank is fragile."""


@dataclass(frozen=True)
class SolverConfig:
    max_iterations: int = 10000
    step_size: float = 1e-2
    tolerance_mu: float = 1e-8
    rank_tolerance: float = 1e-8
    rng_seed: int = 0

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if self.step_size <= 0:
            raise ValueError("step_size must be positive")
        if self.tolerance_mu <= 0:
            raise ValueError("tolerance_mu must be positive")
        if not 0 < self.rank_tolerance < 1:
            raise ValueError("rank_tolerance must lie in (0, 1)")


@dataclass(frozen=True)
class SolveResult:
    point: PointRep
    residual_real: float
    residual_complex: float
    iterations: int
    converged: bool
    stabilizer_dimension: int
    message: str = ""

    def to_json(self, dimension: int | None = None) -> dict:
        return {
            "converged": self.converged,
            "residual_real": self.residual_real,
            "residual_complex": self.residual_complex,
            "iterations": self.iterations,
            "dimension": dimension,
        }


class Projection(NamedTuple):
    point: PointRep
    residual: float
    iterations: int
    converged: bool


def _norm(mats: Mapping[str, np.ndarray]) -> float:
    return float(np.sqrt(sum(np.linalg.norm(m) ** 2 for m in mats.values())))


def _tau_mats(p: PointRep, sp: StabilityParams) -> dict[str, np.ndarray]:
    if len(sp.tau) != len(p.quiver.vertices):
        raise ValueError("tau must have one entry per vertex")
    return {v: t * np.eye(r) for v, r, t in zip(p.quiver.vertices, p.label.rank, sp.tau)}


def real_residual(p: PointRep, sp: StabilityParams, convention: str = "commutator") -> float:
    mu = moment_real(p, convention)
    tau = _tau_mats(p, sp)
    return _norm({v: mu[v] - tau[v] for v in mu})


def _complex_jacobian(p: PointRep) -> np.ndarray:
    """d(mu_C) as a complex matrix; mu_C is holomorphic so this is enough."""
    base = p.to_vector()
    cols = []
    for k in range(base.size):
        e = np.zeros_like(base)
        e[k] = 1.0
        d = p.from_vector(e)
        out = {v: np.zeros((r, r), dtype=complex) for v, r in zip(p.quiver.vertices, p.label.rank)}
        for ed in p.quiver.edges:
            x, y, dx, dy = p.x[ed.id], p.y[ed.id], d.x[ed.id], d.y[ed.id]
            out[ed.head] += dx @ y + x @ dy
            out[ed.tail] -= dy @ x + y @ dx
        cols.append(np.concatenate([out[v].ravel() for v in p.quiver.vertices]))
    if not cols:
        return np.zeros((sum(r * r for r in p.label.rank), 0), dtype=complex)
    return np.stack(cols, axis=1)


def project_complex(p: PointRep, cfg: SolverConfig = SolverConfig()) -> Projection:
    """Gauss-Newton with minimum-norm steps onto ``mu_C = 0``.

    Returns the converged iterate closest to ``p``; on failure, the iterate
    with the smallest residual and ``converged=False``.
    """
    start = p.to_vector()
    cur = p
    best = (_norm(moment_complex(p)), p)
    closest = None
    for it in range(cfg.max_iterations + 1):
        mu = moment_complex(cur)
        res = _norm(mu)
        if res < best[0]:
            best = (res, cur)
        if res <= cfg.tolerance_mu:
            dist = np.linalg.norm(cur.to_vector() - start)
            if closest is None or dist < closest[0]:
                closest = (dist, cur, res, it)
            return Projection(closest[1], closest[2], closest[3], True)
        r = np.concatenate([mu[v].ravel() for v in cur.quiver.vertices])
        jac = _complex_jacobian(cur)
        step, *_ = np.linalg.lstsq(jac, -r, rcond=None)
        if not np.all(np.isfinite(step)) or np.linalg.norm(step) == 0:
            break
        cur = cur.from_vector(cur.to_vector() + step)
    return Projection(best[1], best[0], cfg.max_iterations, False)


def _hermitian_step(p: PointRep, direction: Mapping[str, np.ndarray], s: float) -> PointRep:
    return act_complexified({v: expm(-s * d) for v, d in direction.items()}, p)


def kempf_ness_flow(
    p: PointRep,
    sp: StabilityParams,
    cfg: SolverConfig = SolverConfig(),
    convention: str = "commutator",
) -> SolveResult:
    """Descend ``||mu_R - tau||^2`` inside the complexified gauge orbit of ``p``.

    Each step applies ``exp(-s (mu_R - tau))`` vertexwise. The step is halved
    until the energy drops and doubled after every accepted step. A plateau
    above tolerance is reported as non-convergence, not raised.
    """
    tol = cfg.tolerance_mu
    tau = _tau_mats(p, sp)
    if _norm(moment_complex(p)) > 10 * tol:
        proj = project_complex(p, cfg)
        p = proj.point

    def energy(q):
        mu = moment_real(q, convention)
        return sum(np.linalg.norm(mu[v] - tau[v]) ** 2 for v in mu), mu

    cur = p
    e_cur, mu = energy(cur)
    step = cfg.step_size
    stalled = 0
    message = ""
    it = 0
    for it in range(cfg.max_iterations + 1):
        res_c = _norm(moment_complex(cur))
        if res_c > tol:
            cur = project_complex(cur, cfg).point
            e_cur, mu = energy(cur)
            res_c = _norm(moment_complex(cur))
        if np.sqrt(e_cur) <= tol and res_c <= tol:
            break
        if it == cfg.max_iterations:
            message = "iteration budget exhausted"
            break
        direction = {v: mu[v] - tau[v] for v in mu}
        direction = {v: 0.5 * (d + d.conj().T) for v, d in direction.items()}
        # trust region: the group element exp(-sD) stays within e^{+-1/2}
        scale = max(np.linalg.norm(d, 2) for d in direction.values())
        step = min(step, 0.5 / scale)
        h = 1e-7 / max(scale, 1.0)
        slope = (energy(_hermitian_step(cur, direction, h))[0] - e_cur) / h
        if -slope <= 1e-10 * e_cur:  # flat direction well above zero energy
            message = "energy plateau above tolerance"
            break
        while True:
            trial = _hermitian_step(cur, direction, step)
            e_trial, mu_trial = energy(trial)
            if e_trial < e_cur and e_trial <= e_cur + ARMIJO * step * min(slope, 0.0):
                break
            step *= 0.5
            if step < 1e-14:
                break
        if step < 1e-14:
            message = "energy plateau above tolerance"
            break
        decrease = e_cur - e_trial
        stalled = stalled + 1 if decrease <= 1e-14 * e_cur else 0
        cur, e_cur, mu = trial, e_trial, mu_trial
        if stalled >= 50:
            message = "energy plateau above tolerance"
            break
        step = min(step * 2.0, 1.0)
    res_r = float(np.sqrt(e_cur))
    res_c = _norm(moment_complex(cur))
    converged = res_r <= tol and res_c <= tol
    if converged:
        message = "converged"
    log.debug("flow finished after %d iterations: %s", it, message)
    return SolveResult(
        point=cur,
        residual_real=res_r,
        residual_complex=res_c,
        iterations=it,
        converged=converged,
        stabilizer_dimension=stabilizer_dimension(cur, cfg),
        message=message,
    )


def solve(
    q, label, sp: StabilityParams, cfg: SolverConfig = SolverConfig(),
    start: PointRep | None = None, convention: str = "commutator", restarts: int = 5,
) -> SolveResult:
    """Project onto ``mu_C = 0`` and flow.

    Without ``start``, random starts are drawn from ``cfg.rng_seed``; up to
    ``restarts`` starts are tried because a random orbit may be unstable.
    The last attempt is returned when none converges.
    """
    if start is not None:
        return kempf_ness_flow(project_complex(start, cfg).point, sp, cfg, convention)
    rng = np.random.default_rng(cfg.rng_seed)
    result = None
    for _ in range(max(1, restarts)):
        p0 = PointRep.random(q, label, rng)
        result = kempf_ness_flow(project_complex(p0, cfg).point, sp, cfg, convention)
        if result.converged:
            break
    return result


# linearisation


def _real_basis(n: int) -> list[np.ndarray]:
    out = []
    for k in range(n):
        e = np.zeros(n, dtype=complex)
        e[k] = 1.0
        out.append(e)
        out.append(1j * e)
    return out


def _realify(vec: np.ndarray) -> np.ndarray:
    return np.concatenate([vec.real, vec.imag])


def moment_jacobian(p: PointRep, convention: str = "commutator") -> np.ndarray:
    """Real Jacobian of ``(mu_R, mu_C)`` with respect to real coordinates of ``p``."""
    tail_sign = -1.0 if convention == "commutator" else 1.0
    verts = p.quiver.vertices
    cols = []
    for e in _real_basis(p.to_vector().size):
        d = p.from_vector(e)
        dr = {v: np.zeros((r, r), dtype=complex) for v, r in zip(verts, p.label.rank)}
        dc = {v: np.zeros((r, r), dtype=complex) for v, r in zip(verts, p.label.rank)}
        for ed in p.quiver.edges:
            x, y, dx, dy = p.x[ed.id], p.y[ed.id], d.x[ed.id], d.y[ed.id]
            xh, yh, dxh, dyh = x.conj().T, y.conj().T, dx.conj().T, dy.conj().T
            dr[ed.head] += dx @ xh + x @ dxh - dyh @ y - yh @ dy
            dr[ed.tail] += tail_sign * (dxh @ x + xh @ dx - dy @ yh - y @ dyh)
            dc[ed.head] += dx @ y + x @ dy
            dc[ed.tail] -= dy @ x + y @ dx
        cols.append(np.concatenate(
            [_realify(dr[v].ravel()) for v in verts] + [_realify(dc[v].ravel()) for v in verts]
        ))
    rows = 4 * sum(r * r for r in p.label.rank)
    return np.stack(cols, axis=1) if cols else np.zeros((rows, 0))


def _lie_basis(r: int) -> list[np.ndarray]:
    basis = []
    for j in range(r):
        m = np.zeros((r, r), dtype=complex)
        m[j, j] = 1j
        basis.append(m)
        for k in range(j + 1, r):
            m = np.zeros((r, r), dtype=complex)
            m[j, k], m[k, j] = 1.0, -1.0
            basis.append(m)
            m = np.zeros((r, r), dtype=complex)
            m[j, k], m[k, j] = 1j, 1j
            basis.append(m)
    return basis


def orbit_matrix(p: PointRep) -> np.ndarray:
    """Real matrix of the infinitesimal unitary action at ``p``."""
    verts, ranks = p.quiver.vertices, p.label.rank
    cols = []
    for v, r in zip(verts, ranks):
        for b in _lie_basis(r):
            theta = {w: (b if w == v else np.zeros((s, s), dtype=complex)) for w, s in zip(verts, ranks)}
            cols.append(_realify(infinitesimal_action(theta, p).to_vector()))
    n = 2 * p.to_vector().size
    return np.stack(cols, axis=1) if cols else np.zeros((n, 0))


def numerical_rank(a: np.ndarray, rel_tol: float) -> tuple[int, bool]:
    """Rank with cutoff ``rel_tol * s_max``; flag is True when a singular
    value lies within a factor of 10 of the cutoff."""
    if a.size == 0:
        return 0, False
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] == 0:
        return 0, False
    cut = rel_tol * s[0]
    rank = int(np.sum(s > cut))
    fragile = bool(np.any((s > cut / 10) & (s < cut * 10)))
    return rank, fragile


def stabilizer_dimension(p: PointRep, cfg: SolverConfig = SolverConfig()) -> int:
    lie_dim = sum(r * r for r in p.label.rank)
    rank, _ = numerical_rank(orbit_matrix(p), cfg.rank_tolerance)
    return lie_dim - rank


def tangent_dimension(
    s: SolveResult, q=None, label=None, cfg: SolverConfig = SolverConfig(),
    convention: str = "commutator",
) -> int:
    """Real dimension of the level set modulo the gauge orbit at ``s.point``.

    Nullity of the stacked Jacobian minus the orbit rank, both by SVD with
    cutoff ``cfg.rank_tolerance`` relative to the largest singular value. A
    :class:`PrecisionWarning` is emitted when either rank is fragile.
    """
    if not s.converged:
        raise ValueError("tangent_dimension needs a converged solution")
    p = s.point
    if q is not None and q != p.quiver:
        raise ValueError("quiver does not match the solution")
    if label is not None and label != p.label:
        raise ValueError("label does not match the solution")
    n_real = 2 * p.to_vector().size
    jrank, jfrag = numerical_rank(moment_jacobian(p, convention), cfg.rank_tolerance)
    orank, ofrag = numerical_rank(orbit_matrix(p), cfg.rank_tolerance)
    if jfrag or ofrag:
        warnings.warn("singular values close to the rank cutoff", PrecisionWarning, stacklevel=2)
    return (n_real - jrank) - orank
