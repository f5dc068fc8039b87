"""End-to-end checks of the worked examples on P^1, plus a convention check."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from .p1 import poly as P
from .p1.bundle import QBarBundleP1, SplitBundle
from .p1.families import a2_family, looped_family
from .p1.scan import scan_existence
from .p1.stability import (STABLE, PreconditionError, endomorphism_dimension, expected_dimension,
                           genus_expected_dim, is_stable)
from .point_rep import LieElement, PointRep, hamiltonian_residual
from .quiver import Label, a2_quiver, jordan_quiver, point_quiver

LOOP_RANGE = (-3, 3)
A2_SUMMAND_RANGE = (-2, 6)


@dataclass(frozen=True)
class Scenario:
    name: str
    passed: bool
    expected: Any
    observed: Any

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "expected": self.expected, "observed": self.observed}


def rank2_higgs(d1: int, d2: int) -> QBarBundleP1:
    """Single vertex O(d1) + O(d2) with every allowed phi coefficient equal to 1."""
    q = point_quiver()
    b = SplitBundle(q, {"1": (d1, d2)})
    hol = [[P.poly([1] * (bd + 1)) if bd >= 0 else () for bd in row] for row in b.phi_bounds("1")]
    return QBarBundleP1.build(q, b, phi_holo={"1": hol})


def rank2_nonexistence(bound: int = 5) -> Scenario:
    bad = []
    for d1 in range(-bound, bound + 1):
        for d2 in range(-bound, bound + 1):
            rep = is_stable(rank2_higgs(d1, d2))
            w = rep.witness
            if rep.is_stable or w is None or w.rd["1"] != (1, max(d1, d2)):
                bad.append([d1, d2, rep.verdict, None if w is None else w.describe()])
    return Scenario("rank-2 Higgs bundles: none stable, witness O(max)", not bad,
                    "no stable pair, witness O(max(d1,d2))", {"failures": bad})


def looped_nonexistence(samples: int = 50, seed: int = 0) -> Scenario:
    rows = scan_existence(jordan_quiver(), {"1": 2}, LOOP_RANGE, samples=samples, seed=seed,
                          keep=lambda s: s["1"][0] < s["1"][1])
    stable = [list(r.splitting["1"]) for r in rows if r.stable_found]
    return Scenario("looped vertex d2 > d1: none stable", not stable, [],
                    {"splittings": len(rows), "stable": stable})


def looped_family_check() -> Scenario:
    B = looped_family()
    verdict = is_stable(B).verdict
    endo = endomorphism_dimension(B)
    try:
        dim = expected_dimension(B)
    except PreconditionError:
        dim = None
    observed = {"verdict": verdict, "endomorphism_dimension": endo, "expected_dimension": dim}
    expected = {"verdict": STABLE, "endomorphism_dimension": 1, "expected_dimension": 7}
    return Scenario("looped vertex d1 = d2: stable family", observed == expected, expected, observed)


def a2_threshold(samples: int = 50, seed: int = 0, d_range=(0, 2)) -> tuple[dict, list]:
    """Per (d, d') with d' in [2d-2, 2d+2]: whether any sampled splitting was stable."""
    lo, hi = d_range

    def keep(s):
        d, dp = s["1"][0], sum(s["2"])
        return lo <= d <= hi and 2 * d - 2 <= dp <= 2 * d + 2

    rows = scan_existence(a2_quiver(), {"1": 1, "2": 2}, A2_SUMMAND_RANGE, samples=samples, seed=seed, keep=keep)
    found: dict[tuple[int, int], bool] = {}
    for r in rows:
        key = (r.splitting["1"][0], sum(r.splitting["2"]))
        found[key] = found.get(key, False) or r.stable_found
    return found, rows


def a2_check(samples: int = 50, seed: int = 0) -> Scenario:
    found, _ = a2_threshold(samples, seed)
    mismatch = [[d, dp, s] for (d, dp), s in sorted(found.items()) if s != (dp >= 2 * d)]
    try:
        dim = expected_dimension(a2_family(0, 0, 0))
    except PreconditionError as exc:
        dim = f"not stable ({exc})"
    g2 = genus_expected_dim(2)
    observed = {"threshold_mismatches": mismatch, "expected_dimension_at_2d": dim, "genus_2": g2}
    passed = not mismatch and dim == 4 and g2 == 6
    expected = {"threshold_mismatches": [], "expected_dimension_at_2d": 4, "genus_2": 6}
    return Scenario("A2: stable iff d' >= 2d, dimension 4", passed, expected, observed)


def hamiltonian_check(convention: str = "commutator", trials: int = 20, seed: int = 0) -> Scenario:
    q, label = jordan_quiver(), Label((2,), (0,))
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        p = PointRep.random(q, label, rng)
        v = PointRep.random(q, label, rng)
        th = LieElement.random(q, label, rng)
        worst = max(worst, hamiltonian_residual(p, th, v, 1e-5, "real", convention))
    return Scenario(f"moment map Hamiltonian on the Jordan quiver ({convention})", worst < 1e-6,
                    "residual < 1e-6", {"max_residual": worst})


SCENARIOS: list[tuple[str, Callable[..., Scenario]]] = [
    ("rank2", lambda **kw: rank2_nonexistence()),
    ("looped-nonexistence", lambda **kw: looped_nonexistence(seed=kw.get("seed", 0))),
    ("looped-family", lambda **kw: looped_family_check()),
    ("a2", lambda **kw: a2_check(seed=kw.get("seed", 0))),
    ("hamiltonian", lambda **kw: hamiltonian_check(kw.get("convention", "commutator"))),
]


def reproduce_examples(convention: str = "commutator", seed: int = 0) -> list[Scenario]:
    return [run(convention=convention, seed=seed) for _, run in SCENARIOS]
