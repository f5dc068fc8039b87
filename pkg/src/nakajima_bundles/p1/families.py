"""Constructors for the worked examples on P^1."""
from __future__ import annotations

import sympy as sp

from ..quiver import a2_quiver, jordan_quiver, point_quiver
from .bundle import QBarBundleP1, SplitBundle


def higgs_rank2(d1: int, d2: int, phi21=None) -> QBarBundleP1:
    """Single vertex, no edges: a rank-2 Higgs bundle O(d1) + O(d2)."""
    q = point_quiver()
    b = SplitBundle(q, {"1": (d1, d2)})
    hol = None
    if phi21 is not None:
        hol = {"1": [[0, 0], [phi21, 0]]}
    return QBarBundleP1.build(q, b, phi_holo=hol)


def looped_family(d: int = 0, x11=1, x21=1, x22=2, y11=1, y12=1, y21=0, y22=2) -> QBarBundleP1:
    """Looped vertex, E = O(d) + O(d), x lower triangular, y full.

    Stable when x11 != x22, y12 != 0 and x, y share no eigenvector.
    """
    q = jordan_quiver()
    b = SplitBundle(q, {"1": (d, d)})
    return QBarBundleP1.build(q, b, {"a": [[x11, 0], [x21, x22]]}, {"a": [[y11, y12], [y21, y22]]})


def looped_symbolic():
    """Symbols and raw (x, y) for the looped-vertex display."""
    x11, x21, x22, y11, y12, y21, y22 = sp.symbols("x11 x21 x22 y11 y12 y21 y22")
    x = [[x11, 0], [x21, x22]]
    y = [[y11, y12], [y21, y22]]
    return (x11, x21, x22, y11, y12, y21, y22), x, y


def a2_family(d: int = 0, d1: int = 0, d2: int = 0, x=(1, 2), y=(3, 1), phi22=None) -> QBarBundleP1:
    """A2 with label ((1, d), (2, d1 + d2)); x = [x1; x2], y = [y1 y2]."""
    q = a2_quiver()
    b = SplitBundle(q, {"1": (d,), "2": (d1, d2)})
    hol = None if phi22 is None else {"2": [[0, 0], [phi22, 0]]}
    return QBarBundleP1.build(q, b, {"a": [[x[0]], [x[1]]]}, {"a": [[y[0], y[1]]]}, hol)


def a2_symbolic():
    x1, x2, y1, y2 = sp.symbols("x1 x2 y1 y2")
    return (x1, x2, y1, y2), [[x1], [x2]], [[y1, y2]]
