"""Spec files: quiver + label, optional splitting, sections, point data.

Schema 1::

    {"schema": 1,
     "vertices": ["1", "2"],
     "edges": [{"id": "a", "tail": "1", "head": "2"}],
     "label": {"rank": [1, 2], "degree": [0, 0]},
     "splitting": {"1": [0], "2": [0, 0]},
     "sections": {"x": {"a": [[[1]], [[2]]]}, "y": {...}, "phi": {"2": ...}},
     "point": {"x": {"a": [[[1.0, 0.0]], ...]}, "y": {...}},
     "stability": {"sigma": [1, 1], "tau": [0, 0]},
     "weights": {"1": [[0]], "2": [[0], [1]]}}

Section entries are coefficient lists (lowest degree first) or bare scalars;
a coefficient is a number, a rational string like "1/2", or [re, im]. "phi"
gives the holomorphic part only; the zbar part is derived. Unknown keys are
rejected everywhere.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from .p1.bundle import QBarBundleP1, SplitBundle
from .point_rep import PointRep, StabilityParams
from .quiver import Edge, Issue, Label, Quiver, ValidationError, validate
from .torus import WeightAssignment

SCHEMA_VERSION = 1
TOP_KEYS = {"schema", "vertices", "edges", "label", "splitting", "sections", "point", "stability", "weights"}


class SpecError(ValueError):
    """Unreadable file or schema violation."""


def _reject_unknown(where: str, data: Mapping, allowed: set[str]) -> None:
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise SpecError(f"unknown keys in {where}: {', '.join(unknown)}")


def _mapping(where: str, data) -> Mapping:
    if not isinstance(data, Mapping):
        raise SpecError(f"{where} must be an object")
    return data


def _number(s) -> Fraction | float:
    if isinstance(s, bool):
        raise SpecError(f"not a number: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        try:
            return Fraction(s)
        except ValueError:
            raise SpecError(f"not a number: {s!r}") from None
    if isinstance(s, float):
        return s
    raise SpecError(f"not a number: {s!r}")


@dataclass(frozen=True)
class Spec:
    quiver: Quiver
    label: Label | None
    splitting: Mapping[str, tuple[int, ...]] | None
    sections: Mapping[str, Any]
    point: Mapping[str, Any] | None
    stability: StabilityParams | None
    weights: WeightAssignment | None

    def issues(self) -> list[Issue]:
        return validate(self.quiver, self.label)

    def bundle(self) -> QBarBundleP1:
        if self.splitting is None:
            raise SpecError("this command needs a \"splitting\"")
        b = SplitBundle(self.quiver, self.splitting)
        if self.label is not None:
            b.check_label(self.label)
        s = self.sections
        return QBarBundleP1.build(self.quiver, b, s.get("x"), s.get("y"), s.get("phi"))

    def point_rep(self) -> PointRep:
        if self.point is None:
            raise SpecError("this command needs a \"point\"")
        try:
            return PointRep.from_json(self.quiver, self.require_label(), self.point)
        except (KeyError, TypeError) as exc:
            raise SpecError(f"malformed point data: {exc}") from None

    def require_label(self) -> Label:
        if self.label is None:
            raise SpecError("this command needs a \"label\" or \"splitting\"")
        return self.label


def parse_spec(data: Mapping) -> Spec:
    data = _mapping("spec", data)
    _reject_unknown("spec", data, TOP_KEYS)
    if data.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise SpecError(f"unsupported schema {data.get('schema')!r} (expected {SCHEMA_VERSION})")
    if "vertices" not in data:
        raise SpecError("missing key: vertices")
    vertices = [str(v) for v in data["vertices"]]
    edges = []
    for i, e in enumerate(data.get("edges", [])):
        e = _mapping(f"edges[{i}]", e)
        _reject_unknown(f"edges[{i}]", e, {"id", "tail", "head"})
        missing = {"id", "tail", "head"} - set(e)
        if missing:
            raise SpecError(f"edges[{i}] missing keys: {', '.join(sorted(missing))}")
        edges.append(Edge(str(e["id"]), str(e["tail"]), str(e["head"])))
    q = Quiver(tuple(vertices), tuple(edges))

    splitting = None
    if "splitting" in data:
        sp_ = _mapping("splitting", data["splitting"])
        splitting = {str(v): tuple(int(d) for d in ds) for v, ds in sp_.items()}

    label = None
    if "label" in data:
        lab = _mapping("label", data["label"])
        _reject_unknown("label", lab, {"rank", "degree"})
        rank = tuple(int(r) for r in lab.get("rank", ()))
        degree = tuple(int(d) for d in lab.get("degree", (0,) * len(rank)))
        label = Label(rank, degree)
    elif splitting is not None and set(splitting) == set(vertices):
        label = Label(tuple(len(splitting[v]) for v in vertices), tuple(sum(splitting[v]) for v in vertices))

    sections: dict[str, Any] = {}
    if "sections" in data:
        sec = _mapping("sections", data["sections"])
        _reject_unknown("sections", sec, {"x", "y", "phi"})
        sections = {k: dict(_mapping(f"sections.{k}", v)) for k, v in sec.items()}
        for k, v in sections.items():
            known = {e.id for e in edges} if k in ("x", "y") else set(vertices)
            _reject_unknown(f"sections.{k}", v, known)

    point = None
    if "point" in data:
        point = _mapping("point", data["point"])
        _reject_unknown("point", point, {"x", "y"})

    stability = None
    if "stability" in data:
        st = _mapping("stability", data["stability"])
        _reject_unknown("stability", st, {"sigma", "tau"})
        n = len(vertices)
        sigma = tuple(_number(s) for s in st.get("sigma", [1] * n))
        tau = tuple(_number(t) for t in st.get("tau", [0] * n))
        try:
            stability = StabilityParams(sigma, tau)
        except ValueError as exc:
            raise SpecError(str(exc)) from None

    weights = None
    if "weights" in data:
        w = _mapping("weights", data["weights"])
        _reject_unknown("weights", w, set(vertices))
        weights = WeightAssignment({str(v): tuple(tuple(t) for t in ts) for v, ts in w.items()})

    return Spec(q, label, splitting, sections, point, stability, weights)


def load_spec(path: str | Path) -> Spec:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON ({exc})") from None
    return parse_spec(data)


def dumps(report: Any) -> str:
    """Canonical JSON: sorted keys, fixed separators."""
    return json.dumps(report, sort_keys=True, indent=2, default=_default)


def _default(o):
    if isinstance(o, Fraction):
        return f"{o.numerator}/{o.denominator}"
    raise TypeError(f"not serialisable: {type(o).__name__}")


__all__ = ["SCHEMA_VERSION", "Spec", "SpecError", "ValidationError", "dumps", "load_spec", "parse_spec"]
