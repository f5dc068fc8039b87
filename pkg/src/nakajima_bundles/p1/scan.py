"""Random search for stable objects over ranges of splittings."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from ..point_rep import StabilityParams
from ..quiver import Quiver
from . import poly as P
from .bundle import InconsistencyError, QBarBundleP1, SplitBundle, dbar_constraint
from .stability import STABLE, is_stable

COEFF_RANGE = 3
REDRAWS = 10


def _random_matrix(rng: np.random.Generator, bounds) -> P.PolyMatrix:
    return tuple(
        tuple(P.poly(int(c) for c in rng.integers(-COEFF_RANGE, COEFF_RANGE + 1, size=b + 1)) if b >= 0 else ()
              for b in row)
        for row in bounds
    )


def random_bundle(q: Quiver, b: SplitBundle, rng: np.random.Generator) -> QBarBundleP1:
    """Integer coefficients in [-3, 3]; redraw x, y until the edge source is
    constant in z, falling back to constant x, y (always consistent)."""
    for _ in range(REDRAWS):
        x = {e.id: _random_matrix(rng, b.x_bounds(e.id)) for e in q.edges}
        y = {e.id: _random_matrix(rng, b.y_bounds(e.id)) for e in q.edges}
        try:
            dbar_constraint(q, b, x, y)
            break
        except InconsistencyError:
            continue
    else:
        x = {k: P.mat_constant(m) for k, m in x.items()}
        y = {k: P.mat_constant(m) for k, m in y.items()}
    hol = {v: _random_matrix(rng, b.phi_bounds(v)) for v in q.vertices}
    return QBarBundleP1.build(q, b, x, y, hol)


def splittings(ranks: Mapping[str, int], lo: int, hi: int) -> Iterable[dict[str, tuple[int, ...]]]:
    """All non-decreasing degree lists with entries in [lo, hi], per vertex."""
    per_vertex = [
        list(itertools.combinations_with_replacement(range(lo, hi + 1), r)) for r in ranks.values()
    ]
    for choice in itertools.product(*per_vertex):
        yield dict(zip(ranks, choice))


@dataclass(frozen=True)
class ScanRow:
    splitting: Mapping[str, tuple[int, ...]]
    stable_found: bool
    samples: int
    verdicts: Mapping[str, int]

    def total_degrees(self) -> tuple[int, ...]:
        return tuple(sum(d) for d in self.splitting.values())

    def to_json(self) -> dict:
        return {
            "splitting": {v: list(d) for v, d in self.splitting.items()},
            "stable_found": self.stable_found,
            "samples": self.samples,
            "verdicts": dict(self.verdicts),
        }


def scan_existence(
    q: Quiver,
    ranks: Mapping[str, int] | Sequence[int],
    degree_range: tuple[int, int],
    sp_params: StabilityParams | None = None,
    samples: int = 50,
    seed: int = 0,
    bound: int | None = None,
    keep=None,
) -> list[ScanRow]:
    """For each splitting in range, draw up to ``samples`` consistent section
    data and record whether any is stable (stops at the first stable one).

    Each splitting gets its own generator seeded by ``(seed, index)``, so
    rows do not depend on evaluation order. ``keep`` filters splittings.
    ``sp_params=None`` uses sigma = 1 and tau balancing each bundle's slope.
    """
    if not isinstance(ranks, Mapping):
        ranks = dict(zip(q.vertices, ranks))
    lo, hi = degree_range
    rows = []
    for idx, split in enumerate(splittings(ranks, lo, hi)):
        if keep is not None and not keep(split):
            continue
        b = SplitBundle(q, split)
        rng = np.random.default_rng([seed, idx])
        counts: dict[str, int] = {}
        found, n = False, 0
        for n in range(1, samples + 1):
            B = random_bundle(q, b, rng)
            verdict = is_stable(B, sp_params, bound).verdict
            counts[verdict] = counts.get(verdict, 0) + 1
            if verdict == STABLE:
                found = True
                break
        rows.append(ScanRow(split, found, n, counts))
    return rows
