"""Univariate polynomials in the affine coordinate z, as coefficient tuples.

Coefficients are sympy expressions (exact rationals, Gaussian rationals or
free symbols), lowest degree first. The zero polynomial is ``()``. Matrices
of polynomials are tuples of row tuples.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import sympy as sp

Poly = tuple
PolyMatrix = tuple


def coeff(value) -> sp.Expr:
    """Exact coefficient from int/Fraction/str/complex/[re, im]/sympy input."""
    if isinstance(value, sp.Basic):
        return value
    if isinstance(value, Fraction):
        return sp.Rational(value.numerator, value.denominator)
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"complex coefficient must be [re, im], got {value!r}")
        return coeff(value[0]) + sp.I * coeff(value[1])
    if isinstance(value, bool):
        raise TypeError("boolean is not a coefficient")
    if isinstance(value, float):
        return sp.Rational(str(value))
    if isinstance(value, complex):
        return sp.Rational(str(value.real)) + sp.I * sp.Rational(str(value.imag))
    return sp.sympify(value, rational=True)


def is_zero_coeff(c) -> bool:
    if isinstance(c, (int, Fraction)) or getattr(c, "is_Rational", False):
        return c == 0
    return sp.expand(c) == 0


def trim(p: Iterable) -> Poly:
    p = list(p)
    while p and is_zero_coeff(p[-1]):
        p.pop()
    return tuple(p)


def poly(coeffs: Iterable) -> Poly:
    return trim(coeff(c) for c in coeffs)


def degree(p: Poly) -> int:
    """Degree of ``p``; -1 for the zero polynomial."""
    return len(trim(p)) - 1


def is_zero(p: Poly) -> bool:
    return len(trim(p)) == 0


def padd(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return trim((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def pneg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def psub(p: Poly, q: Poly) -> Poly:
    return padd(p, pneg(q))


def pscale(s, p: Poly) -> Poly:
    return trim(s * c for c in p)


def pmul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [sp.Integer(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(sp.expand(c) for c in out)


def peval(p: Poly, z) -> sp.Expr:
    return sum((c * z**i for i, c in enumerate(p)), sp.Integer(0))


def to_expr(p: Poly, z: sp.Symbol) -> sp.Expr:
    return sp.expand(peval(p, z))


def from_expr(e, z: sp.Symbol) -> Poly:
    e = sp.expand(e)
    if e == 0:
        return ()
    return trim(reversed(sp.Poly(e, z).all_coeffs()))


# matrices


def zeros(rows: int, cols: int) -> PolyMatrix:
    return tuple(tuple(() for _ in range(cols)) for _ in range(rows))


def shape(m: PolyMatrix) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def mat(rows: Sequence[Sequence]) -> PolyMatrix:
    """Normalise nested input. Each entry is a coefficient list (lowest
    degree first) or a bare scalar meaning a constant polynomial."""
    return tuple(
        tuple(poly(e) if isinstance(e, (list, tuple)) else poly([e]) for e in row) for row in rows
    )


def mat_mul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    n, k = shape(a)
    k2, m = shape(b)
    if k != k2:
        raise ValueError(f"shape mismatch {shape(a)} @ {shape(b)}")
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc: Poly = ()
            for t in range(k):
                acc = padd(acc, pmul(a[i][t], b[t][j]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_add(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    if shape(a) != shape(b):
        raise ValueError(f"shape mismatch {shape(a)} + {shape(b)}")
    return tuple(tuple(padd(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_neg(a: PolyMatrix) -> PolyMatrix:
    return tuple(tuple(pneg(x) for x in r) for r in a)


def mat_sub(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    return mat_add(a, mat_neg(b))


def mat_is_zero(a: PolyMatrix) -> bool:
    return all(is_zero(e) for r in a for e in r)


def mat_equal(a: PolyMatrix, b: PolyMatrix) -> bool:
    return shape(a) == shape(b) and mat_is_zero(mat_sub(a, b))


def mat_constant(a: PolyMatrix) -> PolyMatrix:
    """Constant terms of each entry, as a polynomial matrix."""
    return tuple(tuple(trim(e[:1]) for e in r) for r in a)


def max_degree(a: PolyMatrix) -> int:
    return max((degree(e) for r in a for e in r), default=-1)
