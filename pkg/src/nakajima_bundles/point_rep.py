"""Representations of a double quiver over a point.

A representation assigns to each base edge ``a: t -> h`` a pair of complex
matrices ``x_a`` (r_h x r_t) and ``y_a`` (r_t x r_h). The unitary gauge group
acts by ``x -> g_h x g_t^-1``, ``y -> g_t y g_h^-1``.

Sign conventions
----------------
The real moment map defaults to the commutator convention

    mu_R,i = sum_{h(a)=i} (x x^* - y^* y) - sum_{t(a)=i} (x^* x - y y^*),

which is the one satisfying the Hamiltonian identity. ``convention="literal"``
adds the tail sum with a plus sign instead; on loops this breaks the
identity and ``hamiltonian_residual`` exposes it.

The real symplectic form is ``omega_R(u, v) = 2 Im sum tr(xu xv^* + yu yv^*)``.
With this scale ``omega_R(theta#, v) = Im df(v)`` for
``f = sum tr(theta mu_R)``, which is purely imaginary for skew-Hermitian theta.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

import numpy as np
from scipy.linalg import expm

from .quiver import Label, Quiver, require_valid

CONVENTIONS = ("commutator", "literal")
UNITARY_TOL = 1e-12


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class PointRep:
    """Per-edge matrices over a point. Also used for tangent vectors."""

    quiver: Quiver
    label: Label
    x: Mapping[str, np.ndarray]
    y: Mapping[str, np.ndarray]

    def __post_init__(self):
        require_valid(self.quiver, self.label)
        xs, ys = {}, {}
        for e in self.quiver.edges:
            rh, rt = self.label.rank_of(self.quiver, e.head), self.label.rank_of(self.quiver, e.tail)
            x = np.array(self.x[e.id], dtype=complex)
            y = np.array(self.y[e.id], dtype=complex)
            if x.shape != (rh, rt) or y.shape != (rt, rh):
                raise DimensionError(
                    f"edge {e.id}: expected x {(rh, rt)} and y {(rt, rh)}, got {x.shape} and {y.shape}"
                )
            if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
                raise ValueError(f"edge {e.id}: non-finite entries")
            x.setflags(write=False)
            y.setflags(write=False)
            xs[e.id], ys[e.id] = x, y
        object.__setattr__(self, "x", xs)
        object.__setattr__(self, "y", ys)

    # construction helpers

    @classmethod
    def zeros(cls, q: Quiver, label: Label) -> "PointRep":
        r = dict(zip(q.vertices, label.rank))
        return cls(
            q, label,
            {e.id: np.zeros((r[e.head], r[e.tail])) for e in q.edges},
            {e.id: np.zeros((r[e.tail], r[e.head])) for e in q.edges},
        )

    @classmethod
    def random(cls, q: Quiver, label: Label, rng: np.random.Generator, scale: float = 1.0) -> "PointRep":
        r = dict(zip(q.vertices, label.rank))

        def cn(shape):
            return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))

        return cls(
            q, label,
            {e.id: cn((r[e.head], r[e.tail])) for e in q.edges},
            {e.id: cn((r[e.tail], r[e.head])) for e in q.edges},
        )

    def _like(self, x, y) -> "PointRep":
        return PointRep(self.quiver, self.label, x, y)

    def __add__(self, other: "PointRep") -> "PointRep":
        return self._like(
            {k: self.x[k] + other.x[k] for k in self.x}, {k: self.y[k] + other.y[k] for k in self.y}
        )

    def __sub__(self, other: "PointRep") -> "PointRep":
        return self + other * -1.0

    def __mul__(self, s: complex) -> "PointRep":
        return self._like({k: s * v for k, v in self.x.items()}, {k: s * v for k, v in self.y.items()})

    __rmul__ = __mul__

    # flat complex coordinates, x blocks then y blocks, row-major

    def to_vector(self) -> np.ndarray:
        parts = [self.x[e.id].ravel() for e in self.quiver.edges]
        parts += [self.y[e.id].ravel() for e in self.quiver.edges]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=complex)

    def from_vector(self, vec: np.ndarray) -> "PointRep":
        x, y, k = {}, {}, 0
        for e in self.quiver.edges:
            n = self.x[e.id].size
            x[e.id] = vec[k:k + n].reshape(self.x[e.id].shape)
            k += n
        for e in self.quiver.edges:
            n = self.y[e.id].size
            y[e.id] = vec[k:k + n].reshape(self.y[e.id].shape)
            k += n
        return self._like(x, y)

    def norm(self) -> float:
        return float(np.linalg.norm(self.to_vector()))

    def to_json(self) -> dict:
        def enc(m):
            return [[[float(z.real), float(z.imag)] for z in row] for row in m]

        return {"x": {k: enc(v) for k, v in self.x.items()}, "y": {k: enc(v) for k, v in self.y.items()}}

    @classmethod
    def from_json(cls, q: Quiver, label: Label, data: Mapping) -> "PointRep":
        unknown = set(data) - {"x", "y"}
        if unknown:
            raise ValueError(f"unknown keys in point: {sorted(unknown)}")
        r = dict(zip(q.vertices, label.rank))

        def dec(m, shape):
            arr = np.array([[complex(re, im) for re, im in row] for row in m], dtype=complex)
            return arr.reshape(shape)

        return cls(
            q, label,
            {e.id: dec(data["x"][e.id], (r[e.head], r[e.tail])) for e in q.edges},
            {e.id: dec(data["y"][e.id], (r[e.tail], r[e.head])) for e in q.edges},
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


@dataclass(frozen=True)
class GaugeElement:
    """Unitary matrix per vertex."""

    mats: Mapping[str, np.ndarray]
    check: bool = True

    def __post_init__(self):
        mats = {v: np.asarray(g, dtype=complex) for v, g in self.mats.items()}
        if self.check:
            for v, g in mats.items():
                if np.linalg.norm(g.conj().T @ g - np.eye(len(g))) > UNITARY_TOL * max(1, len(g)) * 10:
                    raise ValueError(f"gauge element at {v!r} is not unitary")
        object.__setattr__(self, "mats", mats)

    def __matmul__(self, other: "GaugeElement") -> "GaugeElement":
        return GaugeElement({v: self.mats[v] @ other.mats[v] for v in self.mats}, check=False)

    def inverse(self) -> "GaugeElement":
        return GaugeElement({v: g.conj().T for v, g in self.mats.items()}, check=False)

    @classmethod
    def identity(cls, q: Quiver, label: Label) -> "GaugeElement":
        return cls({v: np.eye(r) for v, r in zip(q.vertices, label.rank)})

    @classmethod
    def random(cls, q: Quiver, label: Label, rng: np.random.Generator) -> "GaugeElement":
        mats = {}
        for v, r in zip(q.vertices, label.rank):
            z = rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r))
            qm, rm = np.linalg.qr(z)
            mats[v] = qm * (np.diag(rm) / np.abs(np.diag(rm)))
        return cls(mats)


@dataclass(frozen=True)
class LieElement:
    """Skew-Hermitian matrix per vertex (an element of the gauge Lie algebra)."""

    mats: Mapping[str, np.ndarray]

    def __post_init__(self):
        mats = {}
        for v, t in self.mats.items():
            t = np.asarray(t, dtype=complex)
            mats[v] = 0.5 * (t - t.conj().T)  # stored exactly skew-Hermitian
        object.__setattr__(self, "mats", mats)

    @classmethod
    def zeros(cls, q: Quiver, label: Label) -> "LieElement":
        return cls({v: np.zeros((r, r)) for v, r in zip(q.vertices, label.rank)})

    @classmethod
    def random(cls, q: Quiver, label: Label, rng: np.random.Generator) -> "LieElement":
        return cls({
            v: rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r))
            for v, r in zip(q.vertices, label.rank)
        })

    def exp(self, t: float = 1.0) -> GaugeElement:
        return GaugeElement({v: expm(t * m) for v, m in self.mats.items()}, check=False)


@dataclass(frozen=True)
class StabilityParams:
    """Per-vertex sigma (> 0) and real level tau; the complex level is 0."""

    sigma: tuple[float, ...]
    tau: tuple[float, ...]

    def __post_init__(self):
        if len(self.sigma) != len(self.tau):
            raise ValueError("sigma and tau must have one entry per vertex")
        if any(s <= 0 for s in self.sigma):
            raise ValueError("sigma must be positive")

    @classmethod
    def uniform(cls, n: int, tau=0) -> "StabilityParams":
        return cls((1,) * n, (tau,) * n)


@dataclass(frozen=True)
class MomentValue:
    real: Mapping[str, np.ndarray]
    complex: Mapping[str, np.ndarray]


def _check_same_shape(p: PointRep, g: Mapping[str, np.ndarray]) -> None:
    for v, r in zip(p.quiver.vertices, p.label.rank):
        if np.shape(g[v]) != (r, r):
            raise DimensionError(f"vertex {v}: expected {(r, r)}, got {np.shape(g[v])}")


def act(g: GaugeElement, p: PointRep) -> PointRep:
    _check_same_shape(p, g.mats)
    inv = {v: np.linalg.inv(m) for v, m in g.mats.items()}
    x, y = {}, {}
    for e in p.quiver.edges:
        x[e.id] = g.mats[e.head] @ p.x[e.id] @ inv[e.tail]
        y[e.id] = g.mats[e.tail] @ p.y[e.id] @ inv[e.head]
    return p._like(x, y)


def act_complexified(mats: Mapping[str, np.ndarray], p: PointRep) -> PointRep:
    """Same formula as :func:`act` for arbitrary invertible matrices."""
    return act(GaugeElement(mats, check=False), p)


def infinitesimal_action(theta: LieElement | Mapping[str, np.ndarray], p: PointRep) -> PointRep:
    mats = theta.mats if isinstance(theta, LieElement) else theta
    _check_same_shape(p, mats)
    x, y = {}, {}
    for e in p.quiver.edges:
        x[e.id] = mats[e.head] @ p.x[e.id] - p.x[e.id] @ mats[e.tail]
        y[e.id] = mats[e.tail] @ p.y[e.id] - p.y[e.id] @ mats[e.head]
    return p._like(x, y)


def _check_tangent(p: PointRep, *vs: PointRep) -> None:
    for v in vs:
        for k in p.x:
            if v.x[k].shape != p.x[k].shape or v.y[k].shape != p.y[k].shape:
                raise DimensionError(f"tangent shape mismatch on edge {k}")


def omega_complex(p: PointRep, u: PointRep, v: PointRep) -> complex:
    _check_tangent(p, u, v)
    total = 0j
    for k in p.x:
        total += np.trace(u.x[k] @ v.y[k]) - np.trace(v.x[k] @ u.y[k])
    return complex(total)


def omega_real(p: PointRep, u: PointRep, v: PointRep) -> float:
    _check_tangent(p, u, v)
    total = 0j
    for k in p.x:
        total += np.vdot(v.x[k], u.x[k]) + np.vdot(v.y[k], u.y[k])  # tr(u v^*)
    return float(2.0 * total.imag)


def moment_real(p: PointRep, convention: str = "commutator") -> dict[str, np.ndarray]:
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    tail_sign = -1.0 if convention == "commutator" else 1.0
    out = {v: np.zeros((r, r), dtype=complex) for v, r in zip(p.quiver.vertices, p.label.rank)}
    for e in p.quiver.edges:
        x, y = p.x[e.id], p.y[e.id]
        out[e.head] += x @ x.conj().T - y.conj().T @ y
        out[e.tail] += tail_sign * (x.conj().T @ x - y @ y.conj().T)
    return out


def moment_complex(p: PointRep) -> dict[str, np.ndarray]:
    out = {v: np.zeros((r, r), dtype=complex) for v, r in zip(p.quiver.vertices, p.label.rank)}
    for e in p.quiver.edges:
        x, y = p.x[e.id], p.y[e.id]
        out[e.head] += x @ y
        out[e.tail] -= y @ x
    return out


def moment_map(p: PointRep, convention: str = "commutator") -> MomentValue:
    return MomentValue(moment_real(p, convention), moment_complex(p))


def pairing(theta: LieElement | Mapping[str, np.ndarray], mu: Mapping[str, np.ndarray]) -> complex:
    mats = theta.mats if isinstance(theta, LieElement) else theta
    return complex(sum(np.trace(mats[v] @ mu[v]) for v in mu))


def hamiltonian_residual(
    p: PointRep,
    theta: LieElement,
    v: PointRep,
    h: float = 1e-5,
    part: str = "real",
    convention: str = "commutator",
) -> float:
    """Central-difference check of ``omega(theta#, v) = df(v)``.

    ``part="real"`` pairs omega_R with mu_R (comparing against ``Im df``),
    ``part="complex"`` pairs omega_C with mu_C.
    """
    if h <= 0:
        raise ValueError("step must be positive")
    tv = infinitesimal_action(theta, p)
    if part == "real":
        def f(q):
            return pairing(theta, moment_real(q, convention))

        lhs = omega_real(p, tv, v)
        dfv = (f(p + h * v) - f(p - h * v)) / (2 * h)
        return float(abs(lhs - dfv.imag) + abs(dfv.real))
    if part == "complex":
        def f(q):
            return pairing(theta, moment_complex(q))

        lhs = omega_complex(p, tv, v)
        dfv = (f(p + h * v) - f(p - h * v)) / (2 * h)
        return float(abs(lhs - dfv))
    raise ValueError(f"part must be 'real' or 'complex', got {part!r}")
